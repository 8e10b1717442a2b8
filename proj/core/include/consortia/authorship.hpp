#pragma once

#include <compare>
#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "consortia/ingest.hpp"
#include "consortia/model.hpp"

namespace consortia {

// (last name, first initial) in normalized form; an empty initial sorts
// before any non-empty one.
struct OrderKey {
  std::string last;
  std::string initial;

  friend auto operator<=>(const OrderKey&, const OrderKey&) = default;
};

OrderKey order_key(const AuthorRef& author);

struct AlphaCounts {
  std::size_t pairs_counted = 0;   // consecutive pairs with differing keys
  std::size_t pairs_in_order = 0;  // of those, key(n) < key(n+1)

  std::optional<double> score() const {
    if (pairs_counted == 0) return std::nullopt;
    return static_cast<double>(pairs_in_order) / static_cast<double>(pairs_counted);
  }
};

AlphaCounts count_alpha_pairs(std::span<const AuthorRef> authors);
std::optional<double> alpha_score(std::span<const AuthorRef> authors);

// >= 0.90 close; (0.60, 0.90) partial; [0.40, 0.60] close-non; < 0.40 anti.
// Throws Error(OutOfRange) outside [0, 1].
AlphaBand classify_alpha(double score);

struct ConsortiumAlpha {
  std::optional<double> alpha_mean;
  std::optional<AlphaBand> band;
  std::vector<std::optional<double>> per_paper;  // aligned with article_ids
};

// Throws Error(UnknownArticleId).
ConsortiumAlpha consortium_alpha(const Consortium& consortium, const Corpus& corpus);

// article_id,pairs_counted,pairs_in_order,score (score empty when undefined).
void write_paper_alpha_csv(std::ostream& out, std::span<const Consortium> consortia,
                           const Corpus& corpus);

}  // namespace consortia
