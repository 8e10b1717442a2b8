#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "consortia/ingest.hpp"
#include "consortia/json_codec.hpp"
#include "consortia/model.hpp"
#include "consortia/stats.hpp"

namespace consortia::cli {

enum ExitCode : int {
  kOk = 0,
  kInputError = 1,
  kIoError = 2,
  kMissingStrata = 3,
};

struct RunConfig {
  std::vector<std::filesystem::path> inputs;
  std::optional<CorpusFormat> format;  // guessed per file when unset
  std::filesystem::path out_dir = ".";
  ClusterParams params;
  std::string norm_table = "compute";  // or a CSV path
  bool write_json = true;
  bool write_csv = true;
  unsigned workers = 1;
  std::optional<std::uint64_t> seed;
  std::filesystem::path consortia_path;  // score; defaults to <out>/consortia.json
  std::filesystem::path reports_path;    // stats; defaults to <out>/reports.json
  std::filesystem::path spec_path;       // simulate
  bool run_detect = false;               // simulate: detect and evaluate
  bool plot_data = false;
  PaperBandMode paper_band_mode = PaperBandMode::OwnScore;

  // Everything that influences results; the worker count is left out because
  // outputs are identical for any value.
  json_codec::Json echo() const;
};

int cmd_detect(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_score(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_simulate(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_stats(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace consortia::cli
