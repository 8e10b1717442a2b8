#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include <zlib.h>

#include "consortia/error.hpp"
#include "consortia/ingest.hpp"
#include "consortia/synth.hpp"
#include "support.hpp"

using namespace consortia;

namespace {

std::vector<AuthorRef> refs(std::initializer_list<const char*> ids) {
  std::vector<AuthorRef> out;
  for (const char* id : ids) out.push_back(make_author(id, id, ""));
  return out;
}

std::vector<std::string> ids_of(const std::vector<AuthorRef>& authors) {
  std::vector<std::string> out;
  for (const auto& a : authors) out.push_back(a.id);
  return out;
}

ParseResult parse(const std::string& text, CorpusFormat format = CorpusFormat::JsonLines,
                  unsigned workers = 1) {
  std::istringstream in(text);
  return parse_corpus(in, format, workers);
}

ErrorCode parse_error(const std::string& text, std::size_t* line = nullptr,
                      CorpusFormat format = CorpusFormat::JsonLines) {
  try {
    parse(text, format);
  } catch (const Error& e) {
    if (line) *line = e.line().value_or(0);
    return e.code();
  }
  FAIL("expected parse error");
  return ErrorCode::Io;
}

std::string author_json(const std::string& id) {
  return R"({"id":")" + id + R"(","last":"L)" + id + R"(","initial":"Q"})";
}

Corpus small_synthetic(std::uint64_t seed) {
  SynthSpec spec;
  spec.seed = seed;
  spec.planted.push_back(PlantedSpec{22, 0.1, 4});
  spec.noise_articles = 40;
  spec.fields = {"F1", "F2", "F3"};
  spec.fields_per_article = {1, 3};
  return generate_corpus(spec).corpus;
}

}  // namespace

TEST_CASE("dedupe keeps first occurrences in order") {
  CHECK(ids_of(dedupe_authors(refs({"a1", "a2", "a1", "a3"}))) ==
        std::vector<std::string>{"a1", "a2", "a3"});
  CHECK(ids_of(dedupe_authors(refs({"a1", "a2", "a3"}))) ==
        std::vector<std::string>{"a1", "a2", "a3"});
  CHECK(ids_of(dedupe_authors(refs({"a1", "a1", "a1"}))) == std::vector<std::string>{"a1"});
}

TEST_CASE("dedupe is idempotent and never grows the list") {
  std::mt19937_64 rng(11);
  for (int round = 0; round < 200; ++round) {
    std::vector<AuthorRef> list;
    const auto n = 1 + rng() % 40;
    for (std::size_t i = 0; i < n; ++i) {
      list.push_back(make_author("x" + std::to_string(rng() % 15), "n", "i"));
    }
    const auto once = dedupe_authors(list);
    CHECK(once.size() <= list.size());
    CHECK(dedupe_authors(once) == once);
  }
}

TEST_CASE("empty stream gives an empty corpus") {
  const auto r = parse("");
  CHECK(r.corpus.empty());
  CHECK(r.lines_read == 0);
}

TEST_CASE("duplicate author id is removed at ingest") {
  std::string authors;
  for (int i = 1; i <= 20; ++i) {
    if (!authors.empty()) authors += ',';
    authors += author_json("a" + std::to_string(i == 20 ? 7 : i));
  }
  const std::string line =
      R"({"id":"X","year":2010,"fields":["F"],"citations":4,"authors":[)" + authors + "]}\n";
  const auto r = parse(line);
  REQUIRE(r.corpus.size() == 1);
  CHECK(r.corpus[0].authors.size() == 19);
  CHECK(r.lines_read == 1);
  CHECK_FALSE(r.corpus[0].truncated);
}

TEST_CASE("duplicate article ids are rejected") {
  const std::string line = R"({"id":"X","year":1,"fields":["F"],"citations":0,"authors":[)" +
                           author_json("a") + "]}\n";
  CHECK(parse_error(line + line) == ErrorCode::DuplicateArticleId);
}

TEST_CASE("malformed and invalid lines report their line number") {
  const std::string ok = R"({"id":"A","year":1,"fields":["F"],"citations":0,"authors":[)" +
                         author_json("a") + "]}\n";
  std::size_t line = 0;
  CHECK(parse_error(ok + "\n{not json\n", &line) == ErrorCode::MalformedLine);
  CHECK(line == 3);
  CHECK(parse_error(R"({"id":"B","year":1,"fields":["F"],"citations":-2,"authors":[)" +
                        author_json("a") + "]}\n",
                    &line) == ErrorCode::NegativeCitations);
  CHECK(line == 1);
  CHECK(parse_error(R"({"id":"B","year":1,"fields":[],"citations":0,"authors":[)" +
                        author_json("a") + "]}\n",
                    &line) == ErrorCode::EmptyFields);
  CHECK(parse_error(R"({"id":"B","year":"x","fields":["F"],"citations":0,"authors":[]})"
                    "\n") == ErrorCode::MalformedLine);
}

TEST_CASE("unknown keys are ignored and truncated is carried") {
  const auto r = parse(R"({"id":"A","year":3,"fields":["F"],"citations":1,"extra":{"k":[1]},)"
                       R"("truncated":true,"authors":[)" +
                       author_json("a") + "]}\n");
  REQUIRE(r.corpus.size() == 1);
  CHECK(r.corpus[0].truncated);
}

TEST_CASE("jsonl round trip and order preservation") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Corpus c = small_synthetic(seed);
    std::ostringstream out;
    write_corpus_jsonl(out, c);
    const auto back = parse(out.str());
    CHECK(back.corpus == c);
    CHECK(back.lines_read == c.size());
  }
}

TEST_CASE("csv round trip, including quoted names") {
  std::vector<Article> arts{testing::article("c1", {"a", "b"}, 1999, 3, {"F", "G"})};
  arts[0].authors[0].last_name = "o'brien, jr";
  arts[0].authors[1].last_name = "say \"hi\"";
  arts[0].truncated = true;
  const Corpus c(arts);
  std::ostringstream out;
  write_corpus_csv(out, c);
  CHECK(parse(out.str(), CorpusFormat::Csv).corpus == c);
}

TEST_CASE("csv maps columns by header name") {
  const std::string text =
      "citations,id,authors,fields,year\n"
      "5,z9,a1|Smith|J;a2|Jones|K;a1|Smith|J,F;G,2004\n";
  const auto r = parse(text, CorpusFormat::Csv);
  REQUIRE(r.corpus.size() == 1);
  CHECK(r.corpus[0].year == 2004);
  CHECK(r.corpus[0].fields == std::vector<std::string>{"F", "G"});
  CHECK(r.corpus[0].authors.size() == 2);
  CHECK(r.corpus[0].authors[1].last_name == "jones");
  CHECK(parse_error("id,year\nx,1\n", nullptr, CorpusFormat::Csv) == ErrorCode::MalformedLine);
}

TEST_CASE("parallel parse equals sequential parse") {
  SynthSpec spec;
  spec.seed = 3;
  spec.noise_articles = 70'000;  // spans several batches
  const Corpus c = generate_corpus(spec).corpus;
  std::ostringstream out;
  write_corpus_jsonl(out, c);
  const auto one = parse(out.str(), CorpusFormat::JsonLines, 1);
  const auto four = parse(out.str(), CorpusFormat::JsonLines, 4);
  CHECK(one.corpus == c);
  CHECK(four.corpus == one.corpus);
}

TEST_CASE("gzip input and multi-file loading") {
  const auto dir = std::filesystem::temp_directory_path() / "consortia_ingest_test";
  std::filesystem::create_directories(dir);
  const Corpus c = small_synthetic(9);
  std::ostringstream out;
  write_corpus_jsonl(out, c);
  const std::string text = out.str();

  const auto plain = dir / "c.jsonl";
  std::ofstream(plain) << text;
  const auto gz = dir / "c.jsonl.gz";
  gzFile f = gzopen(gz.c_str(), "wb");
  REQUIRE(f != nullptr);
  gzwrite(f, text.data(), static_cast<unsigned>(text.size()));
  gzclose(f);

  CHECK(load_corpus(gz, CorpusFormat::JsonLines).corpus == c);
  CHECK(guess_corpus_format(gz) == CorpusFormat::JsonLines);
  CHECK(guess_corpus_format("x.csv.gz") == CorpusFormat::Csv);

  const std::vector<std::filesystem::path> both{plain, gz};
  CHECK_THROWS_AS(load_corpus(both, CorpusFormat::JsonLines), Error);  // same ids twice

  try {
    load_corpus(dir / "missing.jsonl", CorpusFormat::JsonLines);
    FAIL("no throw");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Io);
  }
  std::filesystem::remove_all(dir);
}

TEST_CASE("corpus lookup") {
  const Corpus c({testing::article("a", {"x"}), testing::article("b", {"y"})});
  CHECK(c.position("b") == 1u);
  CHECK(c.find("zz") == nullptr);
  CHECK_THROWS_AS(c.at("zz"), Error);
  CHECK_THROWS_AS(Corpus({testing::article("a", {"x"}), testing::article("a", {"y"})}), Error);
}
