#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "consortia/error.hpp"

namespace consortia {

// Names are compared in a fixed, locale-free collation: trim surrounding
// whitespace, lowercase per code point, then compare UTF-8 bytes (which is
// the same as comparing Unicode scalar values).
std::string normalize_name(std::string_view raw);

// Normalized first code point of `raw` ("J." -> "j", "" -> "").
std::string normalize_initial(std::string_view raw);

struct AuthorRef {
  std::string id;
  std::string last_name;
  std::string first_initial;

  friend bool operator==(const AuthorRef&, const AuthorRef&) = default;
};

// Builds an AuthorRef with normalized name parts.
AuthorRef make_author(std::string id, std::string_view last_name,
                      std::string_view first_initial);

struct Article {
  std::string id;
  int year = 0;
  std::vector<std::string> fields;
  std::int64_t citations = 0;
  std::vector<AuthorRef> authors;
  // Carried through to reports; never changes any computation.
  bool truncated = false;

  friend bool operator==(const Article&, const Article&) = default;
};

// Checks the record invariants and returns it with author names normalized.
// Author order is left untouched. Throws Error (EmptyArticleId, EmptyAuthors,
// EmptyFields, NegativeCitations, EmptyAuthorId, DuplicateAuthorId).
Article validate_article(Article raw);
bool is_valid(const Article& article);

enum class OverlapMode { MaxDenominator, MinDenominator };

std::string_view to_string(OverlapMode mode);
OverlapMode parse_overlap_mode(std::string_view text);

struct ClusterParams {
  std::size_t min_authors = 20;
  double min_overlap = 0.8;
  std::size_t min_cluster_size = 3;
  OverlapMode overlap_mode = OverlapMode::MaxDenominator;

  // Throws Error(InvalidParams).
  void validate() const;
};

bool is_valid(const ClusterParams& params);

struct Consortium {
  // Lexicographically smallest member article id.
  std::string id;
  // Sorted ascending.
  std::vector<std::string> article_ids;
  int first_year = 0;
  int last_year = 0;

  std::size_t size() const noexcept { return article_ids.size(); }
  friend bool operator==(const Consortium&, const Consortium&) = default;
};

bool is_valid(const Consortium& consortium, std::size_t min_cluster_size = 1);

enum class AlphaBand {
  CloseAlphabetical,
  PartialAlphabetical,
  CloseNonAlphabetical,
  AntiAlphabetical,
};

inline constexpr AlphaBand kAllBands[] = {
    AlphaBand::CloseAlphabetical, AlphaBand::PartialAlphabetical,
    AlphaBand::CloseNonAlphabetical, AlphaBand::AntiAlphabetical};

std::string_view to_string(AlphaBand band);
std::string_view describe(AlphaBand band);
AlphaBand parse_alpha_band(std::string_view text);

struct StratumKey {
  std::string field;
  int year = 0;

  friend auto operator<=>(const StratumKey&, const StratumKey&) = default;
};

struct Stratum {
  double mean_log = 0.0;
  std::size_t n = 0;

  friend bool operator==(const Stratum&, const Stratum&) = default;
};

// Per (field, year) mean of ln(1+c) over the reference corpus.
class NormTable {
 public:
  using Map = std::map<StratumKey, Stratum>;

  // Throws Error(OutOfRange) when mean_log < 0, is not finite, or n == 0.
  void insert(StratumKey key, Stratum stratum);
  const Stratum* find(std::string_view field, int year) const;

  std::size_t size() const noexcept { return strata_.size(); }
  bool empty() const noexcept { return strata_.empty(); }
  Map::const_iterator begin() const noexcept { return strata_.begin(); }
  Map::const_iterator end() const noexcept { return strata_.end(); }

  friend bool operator==(const NormTable&, const NormTable&) = default;

 private:
  Map strata_;
};

struct ConsortiumReport {
  Consortium consortium;
  std::optional<double> mnlcs;
  std::size_t included_articles = 0;
  std::size_t excluded_articles = 0;
  std::optional<double> alpha_mean;
  std::optional<AlphaBand> alpha_band;
  // Aligned with consortium.article_ids.
  std::vector<std::optional<double>> per_paper_alpha;
  std::size_t truncated_articles = 0;

  friend bool operator==(const ConsortiumReport&, const ConsortiumReport&) = default;
};

}  // namespace consortia
