#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "commands.hpp"
#include "consortia/cluster.hpp"
#include "consortia/json_codec.hpp"
#include "support.hpp"

using namespace consortia;
using namespace consortia::cli;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name)
      : path(fs::temp_directory_path() / ("consortia_cli_" + name)) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

fs::path write_corpus(const fs::path& p, const std::vector<Article>& arts) {
  std::ofstream out(p);
  write_corpus_jsonl(out, Corpus(arts));
  return p;
}

struct Run {
  int code;
  std::string out;
  std::string err;
};

template <class F>
Run run(F cmd, const RunConfig& cfg) {
  std::ostringstream out, err;
  const int code = cmd(cfg, out, err);
  return {code, out.str(), err.str()};
}

RunConfig config_for(const fs::path& input, const fs::path& out) {
  RunConfig cfg;
  cfg.inputs = {input};
  cfg.out_dir = out;
  return cfg;
}

json_codec::Json load_json(const fs::path& p) { return json_codec::Json::parse(slurp(p)); }

// Three consortia of 3, 4 and 5 alphabetical papers with chosen citation levels.
std::vector<Article> three_consortia() {
  std::vector<Article> arts;
  const int sizes[] = {3, 4, 5};
  const int years[] = {2000, 2004, 2008};
  const std::int64_t cites[] = {40, 9, 1};
  for (int k = 0; k < 3; ++k) {
    for (int i = 0; i < sizes[k]; ++i) {
      std::vector<std::string> authors = testing::ids("k" + std::to_string(k) + "a", 10, 29);
      arts.push_back(testing::article("c" + std::to_string(k) + "p" + std::to_string(i), authors,
                                      years[k], cites[k]));
    }
  }
  for (int i = 0; i < 30; ++i) {
    arts.push_back(testing::article("n" + std::to_string(i), {"solo" + std::to_string(i)},
                                    2000 + 4 * (i % 3), i % 7));
  }
  return arts;
}

}  // namespace

TEST_CASE("detect on the three-article chain") {
  TempDir dir("fig1");
  const auto input = write_corpus(dir.path / "trio.jsonl", testing::chain_trio());
  const auto r = run(cmd_detect, config_for(input, dir.path));
  CHECK(r.code == kOk);
  CHECK(r.out.find("consortia: 1\n") != std::string::npos);
  CHECK(r.out.find("qualifying articles: 3\n") != std::string::npos);
  const auto doc = load_json(dir.path / "consortia.json");
  REQUIRE(doc["consortia"].size() == 1);
  CHECK(doc["consortia"][0]["size"] == 3);
  const auto& params = doc["config"]["params"];
  CHECK(params["min_authors"] == 20);
  CHECK(params["min_overlap"] == 0.8);
  CHECK(params["min_cluster_size"] == 3);
  CHECK(params["overlap_mode"] == "max");
  CHECK(slurp(dir.path / "consortia.csv") ==
        "consortium_id,size,first_year,last_year,article_ids\nart1,3,2001,2003,art1;art2;art3\n");
}

TEST_CASE("detect on an empty file") {
  TempDir dir("empty");
  std::ofstream(dir.path / "e.jsonl").close();
  const auto r = run(cmd_detect, config_for(dir.path / "e.jsonl", dir.path));
  CHECK(r.code == kOk);
  CHECK(r.out.find("consortia: 0\n") != std::string::npos);
  CHECK(load_json(dir.path / "consortia.json")["consortia"].empty());
}

TEST_CASE("malformed input line is reported with exit 1") {
  TempDir dir("bad");
  std::ostringstream text;
  for (int i = 0; i < 6; ++i) text << to_jsonl(testing::article("a" + std::to_string(i), {"x"})) << '\n';
  text << "{\"id\": \"broken\"\n";
  std::ofstream(dir.path / "bad.jsonl") << text.str();
  const auto r = run(cmd_detect, config_for(dir.path / "bad.jsonl", dir.path));
  CHECK(r.code == kInputError);
  CHECK(r.err.find("line 7") != std::string::npos);
}

TEST_CASE("unreadable input exits 2") {
  TempDir dir("io");
  const auto r = run(cmd_detect, config_for(dir.path / "nope.jsonl", dir.path));
  CHECK(r.code == kIoError);
}

TEST_CASE("score: uniform citations give MNLCS 1 and alphabetical lists are close") {
  TempDir dir("uniform");
  std::vector<Article> arts = testing::chain_trio();
  for (auto& a : arts) a.citations = 3;
  for (int i = 0; i < 5; ++i) {
    auto extra = testing::article("x" + std::to_string(i), {"x"}, arts[i % 3].year, 3);
    arts.push_back(extra);
  }
  const auto input = write_corpus(dir.path / "u.jsonl", arts);
  auto cfg = config_for(input, dir.path);
  REQUIRE(run(cmd_detect, cfg).code == kOk);
  const auto r = run(cmd_score, cfg);
  CHECK(r.code == kOk);
  const auto reports = load_json(dir.path / "reports.json")["reports"];
  REQUIRE(reports.size() == 1);
  CHECK(reports[0]["mnlcs"].get<double>() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(fs::exists(dir.path / "norm_table.csv"));
  CHECK(fs::exists(dir.path / "tally.csv"));
  CHECK(fs::exists(dir.path / "histogram.csv"));
  CHECK_FALSE(fs::exists(dir.path / "size_loglog.csv"));
}

TEST_CASE("score: alphabetical consortia, three-way correlations and plot data") {
  TempDir dir("three");
  const auto input = write_corpus(dir.path / "t.jsonl", three_consortia());
  auto cfg = config_for(input, dir.path);
  cfg.plot_data = true;
  REQUIRE(run(cmd_detect, cfg).code == kOk);
  const auto r = run(cmd_score, cfg);
  REQUIRE(r.code == kOk);
  CHECK(r.out.find("small sample") != std::string::npos);

  const auto reports = load_json(dir.path / "reports.json")["reports"];
  REQUIRE(reports.size() == 3);
  for (const auto& rep : reports) CHECK(rep["alpha_band"] == "close_alphabetical");

  const auto stats = load_json(dir.path / "stats.json");
  const auto& year = stats["correlations"]["year_vs_mnlcs"];
  CHECK(year["rho"].get<double>() == -1.0);
  CHECK(year["n"] == 3);
  CHECK(year["exact_p"].get<double>() == doctest::Approx(1.0 / 3.0));
  CHECK(stats["correlations"]["size_vs_mnlcs"]["rho"].get<double>() == -1.0);
  CHECK(stats["correlations"]["small_sample"] == true);
  CHECK(slurp(dir.path / "histogram.csv") == "size,count\n3,1\n4,1\n5,1\n");
  CHECK(fs::exists(dir.path / "size_loglog.csv"));

  // stats rebuilds the same statistics from reports.json alone.
  TempDir again("three_stats");
  RunConfig scfg;
  scfg.out_dir = again.path;
  scfg.reports_path = dir.path / "reports.json";
  scfg.inputs = cfg.inputs;
  REQUIRE(run(cmd_stats, scfg).code == kOk);
  CHECK(load_json(again.path / "stats.json")["bands"] == stats["bands"]);
  CHECK(load_json(again.path / "stats.json")["correlations"] == stats["correlations"]);
}

TEST_CASE("score: a norm table missing strata exits 3") {
  TempDir dir("strata");
  const auto input = write_corpus(dir.path / "t.jsonl", three_consortia());
  auto cfg = config_for(input, dir.path);
  REQUIRE(run(cmd_detect, cfg).code == kOk);
  std::ofstream(dir.path / "table.csv") << "field,year,mean_log,n\nF,2000,1.5,10\n";
  cfg.norm_table = (dir.path / "table.csv").string();
  const auto r = run(cmd_score, cfg);
  CHECK(r.code == kMissingStrata);
  CHECK(r.err.find("lacks stratum (F, 2008)") != std::string::npos);
}

TEST_CASE("pipeline output does not depend on the worker count") {
  TempDir one("w1"), four("w4");
  TempDir src("wsrc");
  std::ofstream(src.path / "spec.json")
      << R"({"seed": 3, "planted": [{"count": 12, "pool_size": 24, "churn_rate": 0.1, "papers": [3, 9]}],)"
         R"( "noise_articles": 3000, "noise_author_range": [5, 40], "fields": ["A","B","C"],)"
         R"( "fields_per_article": [1, 2]})";
  RunConfig sim;
  sim.spec_path = src.path / "spec.json";
  sim.out_dir = src.path;
  REQUIRE(run(cmd_simulate, sim).code == kOk);

  for (auto* dir : {&one, &four}) {
    auto cfg = config_for(src.path / "corpus.jsonl", dir->path);
    cfg.workers = dir == &one ? 1 : 4;
    REQUIRE(run(cmd_detect, cfg).code == kOk);
    REQUIRE(run(cmd_score, cfg).code == kOk);
  }
  for (const char* name : {"consortia.json", "consortia.csv", "reports.json", "reports.csv",
                           "stats.json", "norm_table.csv", "paper_alpha.csv", "tally.csv"}) {
    CAPTURE(name);
    CHECK(slurp(one.path / name) == slurp(four.path / name));
  }
}

TEST_CASE("simulate recovers planted consortia and is reproducible") {
  TempDir dir("sim");
  const auto spec = dir.path / "spec.json";
  std::ofstream(spec) << R"({"seed": 42, "planted": [{"count": 10, "pool_size": 20, "churn_rate": 0.10, "papers": 5}], "noise_articles": 500})";
  RunConfig cfg;
  cfg.spec_path = spec;
  cfg.out_dir = dir.path / "a";
  cfg.run_detect = true;
  const auto r = run(cmd_simulate, cfg);
  REQUIRE(r.code == kOk);
  CHECK(r.out.find("recall: 1.000000") != std::string::npos);
  CHECK(r.out.find("merges: 0") != std::string::npos);

  cfg.out_dir = dir.path / "b";
  REQUIRE(run(cmd_simulate, cfg).code == kOk);
  CHECK(slurp(dir.path / "a" / "corpus.jsonl") == slurp(dir.path / "b" / "corpus.jsonl"));
  CHECK(slurp(dir.path / "a" / "truth.json") == slurp(dir.path / "b" / "truth.json"));

  cfg.seed = 43;
  cfg.out_dir = dir.path / "c";
  REQUIRE(run(cmd_simulate, cfg).code == kOk);
  CHECK(slurp(dir.path / "a" / "corpus.jsonl") != slurp(dir.path / "c" / "corpus.jsonl"));

  std::ofstream(spec) << R"({"seed": 42, "planted": [{"count": 10, "pool_size": 20, "churn_rate": 0.25, "papers": 5}], "noise_articles": 500})";
  cfg.out_dir = dir.path / "d";
  const auto high = run(cmd_simulate, cfg);
  CHECK(high.out.find("recall: 0.000000") != std::string::npos);
}

TEST_CASE("invalid spec exits 1") {
  TempDir dir("badspec");
  std::ofstream(dir.path / "spec.json") << R"({"planted": [{"churn_rate": 1.5}]})";
  RunConfig cfg;
  cfg.spec_path = dir.path / "spec.json";
  cfg.out_dir = dir.path;
  const auto r = run(cmd_simulate, cfg);
  CHECK(r.code == kInputError);
  CHECK(r.err.find("churn_rate") != std::string::npos);
}

TEST_CASE("command-line parsing") {
  TempDir dir("exe");
  const auto jsonl = write_corpus(dir.path / "trio.jsonl", testing::chain_trio());
  const std::string exe = CONSORTIA_EXE;
  auto sh = [&](const std::string& args) {
    const std::string cmd = exe + " " + args + " > " + (dir.path / "log").string() + " 2>&1";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
  };
  const std::string out = " --out " + dir.path.string();
  CHECK(sh("detect --input " + jsonl.string() + out) == 0);
  CHECK(sh("detect --input " + jsonl.string() + " --min-overlap 0.9" + out) == 0);
  CHECK(load_json(dir.path / "consortia.json")["consortia"].empty());
  CHECK(sh("detect --input " + jsonl.string() + " --overlap-mode min --workers 2 --report-format json" + out) == 0);
  CHECK(sh("score --input " + jsonl.string() + " --plot-data" + out) == 0);
  CHECK(fs::exists(dir.path / "size_loglog.csv"));
  CHECK(sh("detect --input " + jsonl.string() + " --format csv" + out) == 1);
  CHECK(sh("detect --input " + jsonl.string() + " --min-overlap 1.5" + out) == 1);
  CHECK(sh("detect --input " + jsonl.string() + " --overlap-mode mean" + out) == 1);
  CHECK(sh("frobnicate") == 1);
  CHECK(sh("detect --help") == 0);
}
