#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "consortia/model.hpp"

namespace consortia {

// Immutable article universe with unique ids. Safe to share read-only.
class Corpus {
 public:
  Corpus() = default;
  // Throws Error(DuplicateArticleId).
  explicit Corpus(std::vector<Article> articles);

  const std::vector<Article>& articles() const noexcept { return articles_; }
  std::size_t size() const noexcept { return articles_.size(); }
  bool empty() const noexcept { return articles_.empty(); }
  const Article& operator[](std::size_t pos) const { return articles_[pos]; }

  std::optional<std::size_t> position(std::string_view id) const;
  const Article* find(std::string_view id) const;
  // Throws Error(UnknownArticleId).
  const Article& at(std::string_view id) const;

  friend bool operator==(const Corpus& a, const Corpus& b) { return a.articles_ == b.articles_; }

 private:
  struct Hash {
    using is_transparent = void;
    std::size_t operator()(std::string_view s) const noexcept {
      return std::hash<std::string_view>{}(s);
    }
  };
  std::vector<Article> articles_;
  std::unordered_map<std::string, std::size_t, Hash, std::equal_to<>> index_;
};

// Keeps the first occurrence of each author id, order preserved.
std::vector<AuthorRef> dedupe_authors(std::vector<AuthorRef> authors);

enum class CorpusFormat { JsonLines, Csv };

CorpusFormat parse_corpus_format(std::string_view text);
// jsonl unless the name (minus any .gz) ends in .csv.
CorpusFormat guess_corpus_format(const std::filesystem::path& path);

struct ParseResult {
  Corpus corpus;
  std::size_t lines_read = 0;
};

// One article per non-blank line (CSV: after a header row). Authors are
// deduplicated by id before validation. Errors carry the 1-based line number.
// Lines are parsed in parallel batches; the result equals sequential parsing.
ParseResult parse_corpus(std::istream& in, CorpusFormat format, unsigned workers = 1);

// Like parse_corpus over the concatenation of several files. A ".gz" suffix
// selects gzip decompression. Throws Error(Io) when a file cannot be read.
ParseResult load_corpus(std::span<const std::filesystem::path> paths, CorpusFormat format,
                        unsigned workers = 1);
ParseResult load_corpus(const std::filesystem::path& path, CorpusFormat format,
                        unsigned workers = 1);

// Exposed for tests: parse one record (no dedup/validation).
Article parse_jsonl_record(std::string_view line);

std::string to_jsonl(const Article& article);
void write_corpus_jsonl(std::ostream& out, const Corpus& corpus);

inline constexpr std::string_view kCsvHeader = "id,year,fields,citations,authors,truncated";
void write_corpus_csv(std::ostream& out, const Corpus& corpus);

}  // namespace consortia
