#include "commands.hpp"

#include <fstream>
#include <functional>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "consortia/authorship.hpp"
#include "consortia/cluster.hpp"
#include "consortia/impact.hpp"
#include "consortia/numeric.hpp"
#include "consortia/report.hpp"
#include "consortia/synth.hpp"

namespace consortia::cli {

namespace fs = std::filesystem;
using json_codec::Json;

Json RunConfig::echo() const {
  Json inputs_json = Json::array();
  for (const auto& p : inputs) inputs_json.push_back(p.generic_string());
  Json formats = Json::array();
  if (write_json) formats.push_back("json");
  if (write_csv) formats.push_back("csv");
  Json doc{{"inputs", std::move(inputs_json)},
           {"format", format ? (*format == CorpusFormat::Csv ? "csv" : "jsonl") : "auto"},
           {"params", json_codec::to_json(params)},
           {"norm_table", norm_table},
           {"report_formats", std::move(formats)},
           {"paper_band_mode",
            paper_band_mode == PaperBandMode::OwnScore ? "own_score" : "consortium_band"}};
  if (seed) doc["seed"] = *seed;
  if (!spec_path.empty()) doc["spec"] = spec_path.generic_string();
  return doc;
}

namespace {

// I/O failures raised as Error(Io) so the dispatcher maps them to exit 2.
std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  return out;
}

void write_file(const fs::path& path, const std::function<void(std::ostream&)>& fill) {
  auto out = open_output(path);
  fill(out);
  out.flush();
  if (!out) throw Error(ErrorCode::Io, "write failure on " + path.string());
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::Io, "cannot create " + dir.string() + ": " + ec.message());
}

ParseResult load_inputs(const RunConfig& config) {
  if (config.inputs.empty()) {
    throw Error(ErrorCode::InvalidParams, "no --input given");
  }
  const CorpusFormat format =
      config.format ? *config.format : guess_corpus_format(config.inputs.front());
  return load_corpus(config.inputs, format, config.workers);
}

int run_guarded(std::ostream& err, const char* name, const std::function<int()>& body) {
  try {
    return body();
  } catch (const Error& e) {
    err << name << ": " << e.what() << '\n';
    switch (e.code()) {
      case ErrorCode::Io: return kIoError;
      case ErrorCode::MissingStratum: return kMissingStrata;
      default: return kInputError;
    }
  } catch (const fs::filesystem_error& e) {
    err << name << ": " << e.what() << '\n';
    return kIoError;
  } catch (const std::exception& e) {
    err << name << ": " << e.what() << '\n';
    return kInputError;
  }
}

void write_consortia_outputs(const RunConfig& config, std::span<const Consortium> consortia,
                             const Json& summary) {
  if (config.write_json) {
    const Json doc{{"config", config.echo()},
                   {"summary", summary},
                   {"consortia", json_codec::to_json(consortia)}};
    write_file(config.out_dir / "consortia.json", [&](std::ostream& o) { o << doc.dump(2) << '\n'; });
  }
  if (config.write_csv) {
    write_file(config.out_dir / "consortia.csv",
               [&](std::ostream& o) { write_consortia_csv(o, consortia); });
  }
}

// Writes stats.json, tally.csv, histogram.csv (and the log-log points when
// requested) for a set of reports; returns the correlation block.
void write_statistics(const RunConfig& config, std::span<const ConsortiumReport> reports,
                      std::ostream& out) {
  std::vector<Consortium> consortia;
  consortia.reserve(reports.size());
  for (const auto& r : reports) consortia.push_back(r.consortium);

  const BandTallies tallies = tally_bands(reports, config.paper_band_mode);
  const SizeHistogram histogram = size_distribution(consortia);

  Json correlations;
  try {
    const ConsortiumCorrelations c = correlate_consortia(reports);
    correlations = json_codec::to_json(c);
    if (c.small_sample) {
      out << "note: correlations use only " << c.used << " consortia (small sample)\n";
    }
    if (c.year_vs_mnlcs) out << "spearman first_year vs mnlcs: " << c.year_vs_mnlcs->rho << '\n';
    if (c.size_vs_mnlcs) out << "spearman size vs mnlcs: " << c.size_vs_mnlcs->rho << '\n';
  } catch (const Error& e) {
    if (e.code() != ErrorCode::TooShort) throw;
    correlations = Json{{"year_vs_mnlcs", nullptr},
                        {"size_vs_mnlcs", nullptr},
                        {"diagnostics", Json::array({e.detail()})}};
    out << "note: " << e.detail() << '\n';
  }

  CompensatedSum mean;
  std::size_t above = 0;
  for (const auto& r : reports) {
    if (!r.mnlcs) continue;
    mean.add(*r.mnlcs);
    if (*r.mnlcs > 1.0) ++above;
  }
  Json impact{{"consortia_with_mnlcs", mean.count()},
              {"mean_consortium_mnlcs", mean.count() ? Json(mean.mean()) : Json(nullptr)},
              {"above_world_average", above}};

  if (config.write_json) {
    const Json doc{{"config", config.echo()},
                   {"impact", std::move(impact)},
                   {"correlations", std::move(correlations)},
                   {"bands", json_codec::to_json(tallies)},
                   {"size_histogram", json_codec::to_json(histogram)}};
    write_file(config.out_dir / "stats.json", [&](std::ostream& o) { o << doc.dump(2) << '\n'; });
  }
  if (config.write_csv) {
    write_file(config.out_dir / "tally.csv", [&](std::ostream& o) { write_tally_csv(o, tallies); });
  }
  write_file(config.out_dir / "histogram.csv",
             [&](std::ostream& o) { write_histogram_csv(o, histogram); });
  if (config.plot_data) {
    write_file(config.out_dir / "size_loglog.csv",
               [&](std::ostream& o) { write_loglog_csv(o, histogram); });
  }
}

// Every stratum the consortium articles need must exist in a loaded table.
void check_strata(std::span<const Consortium> consortia, const Corpus& corpus,
                  const NormTable& table) {
  for (const auto& c : consortia) {
    for (const auto& id : c.article_ids) {
      const Article& a = corpus.at(id);
      for (const auto& f : a.fields) {
        if (table.find(f, a.year) == nullptr) {
          throw Error(ErrorCode::MissingStratum,
                      "norm table lacks stratum (" + f + ", " + std::to_string(a.year) + ")", {},
                      a.id);
        }
      }
    }
  }
}

}  // namespace

int cmd_detect(const RunConfig& config, std::ostream& out, std::ostream& err) {
  return run_guarded(err, "detect", [&] {
    config.params.validate();
    const ParseResult parsed = load_inputs(config);
    DetectionSummary summary;
    const auto consortia = detect_consortia(parsed.corpus, config.params, config.workers, summary);
    std::size_t members = 0;
    for (const auto& c : consortia) members += c.size();
    ensure_dir(config.out_dir);
    const Json summary_json{{"lines_read", parsed.lines_read},
                            {"articles", summary.articles},
                            {"qualifying_articles", summary.qualifying},
                            {"candidate_pairs", summary.candidate_pairs},
                            {"links", summary.links},
                            {"consortia", consortia.size()},
                            {"consortium_articles", members}};
    write_consortia_outputs(config, consortia, summary_json);
    out << "articles: " << summary.articles << '\n'
        << "qualifying articles: " << summary.qualifying << '\n'
        << "consortia: " << consortia.size() << '\n'
        << "consortium articles: " << members << '\n';
    return kOk;
  });
}

int cmd_score(const RunConfig& config, std::ostream& out, std::ostream& err) {
  return run_guarded(err, "score", [&] {
    const ParseResult parsed = load_inputs(config);
    const fs::path consortia_path =
        config.consortia_path.empty() ? config.out_dir / "consortia.json" : config.consortia_path;
    std::vector<Consortium> consortia;
    {
      std::istringstream in(read_file(consortia_path));
      consortia = read_consortia_json(in);
    }
    sort_consortia(consortia);

    NormTable table;
    if (config.norm_table == "compute") {
      table = build_norm_table(parsed.corpus, config.workers);
    } else {
      std::istringstream in(read_file(config.norm_table));
      table = read_norm_table_csv(in);
      check_strata(consortia, parsed.corpus, table);
    }

    const auto reports = build_reports(consortia, parsed.corpus, table, config.workers);
    ensure_dir(config.out_dir);
    if (config.norm_table == "compute") {
      write_file(config.out_dir / "norm_table.csv",
                 [&](std::ostream& o) { write_norm_table_csv(o, table); });
    }
    if (config.write_json) {
      const Json doc{{"config", config.echo()}, {"reports", json_codec::to_json(reports)}};
      write_file(config.out_dir / "reports.json", [&](std::ostream& o) { o << doc.dump(2) << '\n'; });
    }
    if (config.write_csv) {
      write_file(config.out_dir / "reports.csv",
                 [&](std::ostream& o) { write_reports_csv(o, reports); });
      write_file(config.out_dir / "paper_alpha.csv",
                 [&](std::ostream& o) { write_paper_alpha_csv(o, consortia, parsed.corpus); });
    }
    out << "consortia scored: " << reports.size() << '\n';
    write_statistics(config, reports, out);
    return kOk;
  });
}

int cmd_stats(const RunConfig& config, std::ostream& out, std::ostream& err) {
  return run_guarded(err, "stats", [&] {
    const fs::path path =
        config.reports_path.empty() ? config.out_dir / "reports.json" : config.reports_path;
    std::vector<ConsortiumReport> reports;
    try {
      reports = json_codec::reports_from_json(Json::parse(read_file(path)));
    } catch (const Json::exception& e) {
      throw Error(ErrorCode::MalformedLine, "invalid reports JSON: " + std::string(e.what()));
    }
    ensure_dir(config.out_dir);
    out << "reports: " << reports.size() << '\n';
    write_statistics(config, reports, out);
    return kOk;
  });
}

int cmd_simulate(const RunConfig& config, std::ostream& out, std::ostream& err) {
  return run_guarded(err, "simulate", [&] {
    if (config.spec_path.empty()) throw Error(ErrorCode::InvalidSpec, "no --spec given");
    const SynthSpec spec = parse_synth_spec(read_file(config.spec_path), config.seed);
    const SynthResult result = generate_corpus(spec, config.workers);
    ensure_dir(config.out_dir);
    write_file(config.out_dir / "corpus.jsonl",
               [&](std::ostream& o) { write_corpus_jsonl(o, result.corpus); });
    write_file(config.out_dir / "truth.json",
               [&](std::ostream& o) { write_ground_truth_json(o, result.truth); });
    write_file(config.out_dir / "spec.json",
               [&](std::ostream& o) { o << to_json_text(spec) << '\n'; });
    out << "articles: " << result.corpus.size() << '\n'
        << "planted consortia: " << result.truth.planted_count() << '\n';
    if (!config.run_detect) return kOk;

    config.params.validate();
    DetectionSummary summary;
    const auto consortia = detect_consortia(result.corpus, config.params, config.workers, summary);
    const DetectionMetrics m = evaluate_detection(consortia, result.truth);
    RunConfig detect_config = config;
    detect_config.inputs = {config.out_dir / "corpus.jsonl"};
    write_consortia_outputs(detect_config, consortia,
                            Json{{"articles", summary.articles},
                                 {"qualifying_articles", summary.qualifying},
                                 {"consortia", consortia.size()}});
    write_file(config.out_dir / "metrics.json", [&](std::ostream& o) {
      o << Json{{"config", config.echo()}, {"metrics", json_codec::to_json(m)}}.dump(2) << '\n';
    });
    out << std::fixed << std::setprecision(6) << "consortia detected: " << m.detected << '\n'
        << "recall: " << m.recall << '\n'
        << "merges: " << m.merges << '\n'
        << "splits: " << m.splits << '\n'
        << "spurious: " << m.spurious << '\n';
    return kOk;
  });
}

}  // namespace consortia::cli
