#include "consortia/ingest.hpp"

#include <zlib.h>

#include <array>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_set>
#include <variant>

#include "consortia/csv.hpp"
#include "json.hpp"
#include "parallel.hpp"

namespace consortia {

using nlohmann::json;

Corpus::Corpus(std::vector<Article> articles) : articles_(std::move(articles)) {
  index_.reserve(articles_.size());
  for (std::size_t i = 0; i < articles_.size(); ++i) {
    if (!index_.emplace(articles_[i].id, i).second) {
      throw Error(ErrorCode::DuplicateArticleId,
                  "duplicate article id '" + articles_[i].id + "'", {}, articles_[i].id);
    }
  }
}

std::optional<std::size_t> Corpus::position(std::string_view id) const {
  const auto it = index_.find(id);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

const Article* Corpus::find(std::string_view id) const {
  const auto pos = position(id);
  return pos ? &articles_[*pos] : nullptr;
}

const Article& Corpus::at(std::string_view id) const {
  if (const Article* a = find(id)) return *a;
  throw Error(ErrorCode::UnknownArticleId, "unknown article id '" + std::string(id) + "'", {},
              std::string(id));
}

std::vector<AuthorRef> dedupe_authors(std::vector<AuthorRef> authors) {
  std::unordered_set<std::string> seen;
  seen.reserve(authors.size());
  std::vector<AuthorRef> out;
  out.reserve(authors.size());
  for (auto& author : authors) {
    if (seen.insert(author.id).second) out.push_back(std::move(author));
  }
  return out;
}

CorpusFormat parse_corpus_format(std::string_view text) {
  if (text == "jsonl" || text == "json") return CorpusFormat::JsonLines;
  if (text == "csv") return CorpusFormat::Csv;
  throw Error(ErrorCode::InvalidParams, "unknown corpus format '" + std::string(text) + "'");
}

CorpusFormat guess_corpus_format(const std::filesystem::path& path) {
  std::filesystem::path p = path;
  if (p.extension() == ".gz") p = p.stem();
  return p.extension() == ".csv" ? CorpusFormat::Csv : CorpusFormat::JsonLines;
}

namespace {

[[noreturn]] void malformed(const std::string& what) {
  throw Error(ErrorCode::MalformedLine, what);
}

const json& require(const json& obj, const char* key) {
  const auto it = obj.find(key);
  if (it == obj.end()) malformed(std::string("missing key '") + key + "'");
  return *it;
}

std::string get_string(const json& v, const char* key) {
  if (!v.is_string()) malformed(std::string("'") + key + "' must be a string");
  return v.get<std::string>();
}

std::int64_t get_integer(const json& v, const char* key) {
  if (!v.is_number_integer()) malformed(std::string("'") + key + "' must be an integer");
  return v.get<std::int64_t>();
}

int get_year(const json& v) {
  const std::int64_t y = get_integer(v, "year");
  if (y < -100000 || y > 100000) malformed("'year' out of range");
  return static_cast<int>(y);
}

bool is_blank(std::string_view line) {
  for (char c : line) {
    if (c != ' ' && c != '\t' && c != '\r' && c != '\n') return false;
  }
  return true;
}

// --- CSV ---------------------------------------------------------------

std::int64_t parse_csv_integer(const std::string& text, const char* key) {
  std::size_t used = 0;
  std::int64_t v = 0;
  try {
    v = std::stoll(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size()) {
    malformed(std::string("'") + key + "' must be an integer");
  }
  return v;
}

struct CsvLayout {
  std::size_t id, year, fields, citations, authors;
  std::optional<std::size_t> truncated;
  std::size_t columns = 0;
};

CsvLayout parse_csv_header(std::string_view line) {
  const auto cells = csv::split_row(line);
  std::array<std::optional<std::size_t>, 6> pos;
  constexpr std::array<std::string_view, 6> names = {"id",      "year",    "fields",
                                                     "citations", "authors", "truncated"};
  for (std::size_t i = 0; i < cells.size(); ++i) {
    for (std::size_t k = 0; k < names.size(); ++k) {
      if (cells[i] == names[k]) pos[k] = i;
    }
  }
  for (std::size_t k = 0; k < 5; ++k) {
    if (!pos[k]) malformed("CSV header lacks column '" + std::string(names[k]) + "'");
  }
  return CsvLayout{*pos[0], *pos[1], *pos[2], *pos[3], *pos[4], pos[5], cells.size()};
}

Article parse_csv_record(std::string_view line, const CsvLayout& layout) {
  const auto cells = csv::split_row(line);
  if (cells.size() < layout.columns) malformed("CSV row has too few columns");
  Article a;
  a.id = cells[layout.id];
  a.year = static_cast<int>(parse_csv_integer(cells[layout.year], "year"));
  a.fields = csv::split_list(cells[layout.fields], ';');
  a.citations = parse_csv_integer(cells[layout.citations], "citations");
  for (const auto& triple : csv::split_list(cells[layout.authors], ';')) {
    auto parts = csv::split_list(triple, '|');
    if (parts.empty() || parts.size() > 3) malformed("author must be id|last|initial");
    parts.resize(3);
    a.authors.push_back(AuthorRef{std::move(parts[0]), std::move(parts[1]), std::move(parts[2])});
  }
  if (layout.truncated) {
    const std::string& t = cells[*layout.truncated];
    if (t == "true" || t == "1") {
      a.truncated = true;
    } else if (t.empty() || t == "false" || t == "0") {
      a.truncated = false;
    } else {
      malformed("'truncated' must be true/false");
    }
  }
  return a;
}

// --- streaming driver ---------------------------------------------------

constexpr std::size_t kBatchLines = 1 << 15;
constexpr std::size_t kTaskLines = 1 << 10;

struct Blank {};
using Slot = std::variant<Blank, Article, Error>;

class CorpusBuilder {
 public:
  CorpusBuilder(CorpusFormat format, unsigned workers) : format_(format), workers_(workers) {}

  void feed(std::istream& in, const std::string& source) {
    std::vector<std::string> batch;
    batch.reserve(kBatchLines);
    std::size_t first_line = 1;
    std::size_t line_no = 0;
    std::optional<CsvLayout> layout;
    std::string line;
    while (std::getline(in, line)) {
      ++line_no;
      ++lines_read_;
      if (format_ == CorpusFormat::Csv && !layout) {
        if (is_blank(line)) {
          first_line = line_no + 1;
          continue;
        }
        try {
          layout = parse_csv_header(line);
        } catch (const Error& e) {
          rethrow(e, line_no, source);
        }
        first_line = line_no + 1;
        continue;
      }
      batch.push_back(std::move(line));
      if (batch.size() == kBatchLines) {
        flush(batch, first_line, layout, source);
        first_line = line_no + 1;
        batch.clear();
      }
    }
    if (in.bad()) throw Error(ErrorCode::Io, "read failure in " + source);
    flush(batch, first_line, layout, source);
  }

  ParseResult finish() && {
    ParseResult result;
    result.corpus = Corpus(std::move(articles_));
    result.lines_read = lines_read_;
    return result;
  }

 private:
  [[noreturn]] static void rethrow(const Error& e, std::size_t line, const std::string& source) {
    if (source.empty()) throw e.at_line(line);
    throw Error(e.code(), source + ": " + e.detail(), line, e.record());
  }

  void flush(const std::vector<std::string>& batch, std::size_t first_line,
             const std::optional<CsvLayout>& layout, const std::string& source) {
    std::vector<Slot> slots(batch.size());
    const std::size_t tasks = (batch.size() + kTaskLines - 1) / kTaskLines;
    detail::parallel_tasks(tasks, workers_, [&](std::size_t t) {
      const std::size_t end = std::min(batch.size(), (t + 1) * kTaskLines);
      for (std::size_t i = t * kTaskLines; i < end; ++i) {
        if (is_blank(batch[i])) continue;
        try {
          Article raw = format_ == CorpusFormat::Csv ? parse_csv_record(batch[i], *layout)
                                                     : parse_jsonl_record(batch[i]);
          raw.authors = dedupe_authors(std::move(raw.authors));
          slots[i] = validate_article(std::move(raw));
        } catch (const Error& e) {
          slots[i] = e;
        }
      }
    });
    for (std::size_t i = 0; i < slots.size(); ++i) {
      const std::size_t line = first_line + i;
      if (auto* err = std::get_if<Error>(&slots[i])) rethrow(*err, line, source);
      auto* article = std::get_if<Article>(&slots[i]);
      if (article == nullptr) continue;
      if (!seen_.insert(article->id).second) {
        rethrow(Error(ErrorCode::DuplicateArticleId,
                      "duplicate article id '" + article->id + "'", {}, article->id),
                line, source);
      }
      articles_.push_back(std::move(*article));
    }
  }

  CorpusFormat format_;
  unsigned workers_;
  std::vector<Article> articles_;
  std::unordered_set<std::string> seen_;
  std::size_t lines_read_ = 0;
};

// Read-only streambuf over a gzip file.
class GzStreamBuf : public std::streambuf {
 public:
  explicit GzStreamBuf(const std::filesystem::path& path)
      : file_(gzopen(path.c_str(), "rb")) {}
  ~GzStreamBuf() override {
    if (file_ != nullptr) gzclose(file_);
  }
  GzStreamBuf(const GzStreamBuf&) = delete;
  GzStreamBuf& operator=(const GzStreamBuf&) = delete;

  bool is_open() const { return file_ != nullptr; }
  bool failed() const { return failed_; }

 protected:
  int_type underflow() override {
    if (gptr() < egptr()) return traits_type::to_int_type(*gptr());
    const int n = gzread(file_, buffer_.data(), static_cast<unsigned>(buffer_.size()));
    if (n < 0) failed_ = true;
    if (n <= 0) return traits_type::eof();
    setg(buffer_.data(), buffer_.data(), buffer_.data() + n);
    return traits_type::to_int_type(*gptr());
  }

 private:
  gzFile file_;
  bool failed_ = false;
  std::array<char, 1 << 16> buffer_{};
};

}  // namespace

Article parse_jsonl_record(std::string_view line) {
  json doc;
  try {
    doc = json::parse(line);
  } catch (const json::parse_error& e) {
    malformed(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) malformed("record must be a JSON object");
  Article a;
  a.id = get_string(require(doc, "id"), "id");
  a.year = get_year(require(doc, "year"));
  const json& fields = require(doc, "fields");
  if (!fields.is_array()) malformed("'fields' must be an array");
  a.fields.reserve(fields.size());
  for (const auto& f : fields) a.fields.push_back(get_string(f, "fields[]"));
  a.citations = get_integer(require(doc, "citations"), "citations");
  const json& authors = require(doc, "authors");
  if (!authors.is_array()) malformed("'authors' must be an array");
  a.authors.reserve(authors.size());
  for (const auto& au : authors) {
    if (!au.is_object()) malformed("author entries must be objects");
    AuthorRef ref;
    ref.id = get_string(require(au, "id"), "authors[].id");
    if (auto it = au.find("last"); it != au.end() && !it->is_null()) {
      ref.last_name = get_string(*it, "authors[].last");
    }
    if (auto it = au.find("initial"); it != au.end() && !it->is_null()) {
      ref.first_initial = get_string(*it, "authors[].initial");
    }
    a.authors.push_back(std::move(ref));
  }
  if (auto it = doc.find("truncated"); it != doc.end() && !it->is_null()) {
    if (!it->is_boolean()) malformed("'truncated' must be a boolean");
    a.truncated = it->get<bool>();
  }
  return a;
}

ParseResult parse_corpus(std::istream& in, CorpusFormat format, unsigned workers) {
  CorpusBuilder builder(format, workers);
  builder.feed(in, "");
  return std::move(builder).finish();
}

ParseResult load_corpus(std::span<const std::filesystem::path> paths, CorpusFormat format,
                        unsigned workers) {
  CorpusBuilder builder(format, workers);
  for (const auto& path : paths) {
    const std::string source = path.string();
    if (path.extension() == ".gz") {
      GzStreamBuf buf(path);
      if (!buf.is_open()) throw Error(ErrorCode::Io, "cannot open " + source);
      std::istream in(&buf);
      builder.feed(in, source);
      if (buf.failed()) throw Error(ErrorCode::Io, "gzip decode failure in " + source);
    } else {
      std::ifstream in(path, std::ios::binary);
      if (!in) throw Error(ErrorCode::Io, "cannot open " + source);
      builder.feed(in, source);
    }
  }
  return std::move(builder).finish();
}

ParseResult load_corpus(const std::filesystem::path& path, CorpusFormat format,
                        unsigned workers) {
  return load_corpus(std::span<const std::filesystem::path>(&path, 1), format, workers);
}

std::string to_jsonl(const Article& article) {
  json authors = json::array();
  for (const auto& au : article.authors) {
    authors.push_back({{"id", au.id}, {"last", au.last_name}, {"initial", au.first_initial}});
  }
  json doc = {{"id", article.id},
              {"year", article.year},
              {"fields", article.fields},
              {"citations", article.citations},
              {"authors", std::move(authors)}};
  if (article.truncated) doc["truncated"] = true;
  return doc.dump();
}

void write_corpus_jsonl(std::ostream& out, const Corpus& corpus) {
  for (const auto& a : corpus.articles()) out << to_jsonl(a) << '\n';
}

void write_corpus_csv(std::ostream& out, const Corpus& corpus) {
  out << kCsvHeader << '\n';
  for (const auto& a : corpus.articles()) {
    std::string fields;
    for (std::size_t i = 0; i < a.fields.size(); ++i) {
      if (i) fields.push_back(';');
      fields += a.fields[i];
    }
    std::string authors;
    for (std::size_t i = 0; i < a.authors.size(); ++i) {
      if (i) authors.push_back(';');
      authors += a.authors[i].id + '|' + a.authors[i].last_name + '|' + a.authors[i].first_initial;
    }
    out << csv::cell(a.id) << ',' << a.year << ',' << csv::cell(fields) << ',' << a.citations
        << ',' << csv::cell(authors) << ',' << (a.truncated ? "true" : "false") << '\n';
  }
}

}  // namespace consortia
