#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"
#include "commands.hpp"

namespace {

using consortia::cli::RunConfig;

// Options shared by detect/score/stats.
void add_common(CLI::App& cmd, RunConfig& cfg, std::string& format) {
  cmd.add_option("--out", cfg.out_dir, "Output directory")->default_str(".");
  cmd.add_option("--workers", cfg.workers, "Worker threads (0 = all cores)")->default_str("1");
  cmd.add_flag("--plot-data", cfg.plot_data, "Also write the log-log size distribution points");
  cmd.add_option("--format", format, "Corpus format (default: from file extension)")
      ->check(CLI::IsMember({"jsonl", "csv"}));
}

void add_params(CLI::App& cmd, RunConfig& cfg, std::string& overlap_mode) {
  cmd.add_option("--min-authors", cfg.params.min_authors, "Minimum unique authors per article")
      ->default_str("20");
  cmd.add_option("--min-overlap", cfg.params.min_overlap, "Minimum shared-author fraction")
      ->default_str("0.8");
  cmd.add_option("--min-cluster-size", cfg.params.min_cluster_size,
                 "Minimum articles per consortium")
      ->default_str("3");
  cmd.add_option("--overlap-mode", overlap_mode, "Overlap denominator: max or min")
      ->check(CLI::IsMember({"max", "min"}))
      ->default_str("max");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Detect large publishing consortia and score their impact and author ordering"};
  app.require_subcommand(1);

  RunConfig cfg;
  std::string format;
  std::string overlap_mode = "max";
  std::vector<std::string> report_formats{"json", "csv"};
  std::string paper_bands = "own";

  auto* detect = app.add_subcommand("detect", "Cluster a corpus into consortia");
  auto* score = app.add_subcommand("score", "Score detected consortia (MNLCS, alphabetical order)");
  auto* stats = app.add_subcommand("stats", "Recompute summary statistics from reports.json");
  auto* simulate = app.add_subcommand("simulate", "Generate a synthetic corpus with planted consortia");

  for (CLI::App* cmd : {detect, score}) {
    cmd->add_option("--input", cfg.inputs, "Corpus file(s); .gz is decompressed")
        ->required()
        ->check(CLI::ExistingFile);
  }
  for (CLI::App* cmd : {detect, score, stats, simulate}) {
    add_common(*cmd, cfg, format);
    cmd->add_option("--report-format", report_formats, "Report formats to write")
        ->check(CLI::IsMember({"json", "csv"}))
        ->delimiter(',');
  }
  for (CLI::App* cmd : {detect, score, simulate}) add_params(*cmd, cfg, overlap_mode);

  score->add_option("--consortia", cfg.consortia_path,
                    "consortia.json from detect (default: <out>/consortia.json)");
  score->add_option("--norm-table", cfg.norm_table,
                    "'compute' or a field,year,mean_log,n CSV")
      ->default_str("compute");
  for (CLI::App* cmd : {score, stats}) {
    cmd->add_option("--paper-bands", paper_bands,
                    "Paper band tally: own score or inherited consortium band")
        ->check(CLI::IsMember({"own", "consortium"}));
  }
  stats->add_option("--reports", cfg.reports_path, "reports.json (default: <out>/reports.json)");
  simulate->add_option("--spec", cfg.spec_path, "Synthetic corpus spec (JSON)")->required();
  simulate->add_option("--seed", cfg.seed, "Override the spec seed");
  simulate->add_flag("--detect", cfg.run_detect, "Run detection and print recovery metrics");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // --help and friends exit 0; any usage error is an input error.
    return app.exit(e) == 0 ? consortia::cli::kOk : consortia::cli::kInputError;
  }

  if (!format.empty()) cfg.format = consortia::parse_corpus_format(format);
  cfg.params.overlap_mode = consortia::parse_overlap_mode(overlap_mode);
  cfg.write_json = cfg.write_csv = false;
  for (const auto& f : report_formats) {
    (f == "json" ? cfg.write_json : cfg.write_csv) = true;
  }
  cfg.paper_band_mode = paper_bands == "consortium" ? consortia::PaperBandMode::ConsortiumBand
                                                    : consortia::PaperBandMode::OwnScore;

  if (detect->parsed()) return consortia::cli::cmd_detect(cfg, std::cout, std::cerr);
  if (score->parsed()) return consortia::cli::cmd_score(cfg, std::cout, std::cerr);
  if (stats->parsed()) return consortia::cli::cmd_stats(cfg, std::cout, std::cerr);
  return consortia::cli::cmd_simulate(cfg, std::cout, std::cerr);
}
