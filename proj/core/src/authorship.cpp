#include "consortia/authorship.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "consortia/csv.hpp"
#include "consortia/numeric.hpp"

namespace consortia {

OrderKey order_key(const AuthorRef& author) {
  return OrderKey{author.last_name, author.first_initial};
}

AlphaCounts count_alpha_pairs(std::span<const AuthorRef> authors) {
  AlphaCounts counts;
  for (std::size_t i = 1; i < authors.size(); ++i) {
    const AuthorRef& prev = authors[i - 1];
    const AuthorRef& next = authors[i];
    const int cmp_last = prev.last_name.compare(next.last_name);
    const int cmp = cmp_last != 0 ? cmp_last : prev.first_initial.compare(next.first_initial);
    if (cmp == 0) continue;
    ++counts.pairs_counted;
    if (cmp < 0) ++counts.pairs_in_order;
  }
  return counts;
}

std::optional<double> alpha_score(std::span<const AuthorRef> authors) {
  return count_alpha_pairs(authors).score();
}

AlphaBand classify_alpha(double score) {
  if (!(score >= 0.0 && score <= 1.0)) {
    throw Error(ErrorCode::OutOfRange, "alphabetical score must lie in [0, 1]");
  }
  if (score >= 0.90) return AlphaBand::CloseAlphabetical;
  if (score > 0.60) return AlphaBand::PartialAlphabetical;
  if (score >= 0.40) return AlphaBand::CloseNonAlphabetical;
  return AlphaBand::AntiAlphabetical;
}

ConsortiumAlpha consortium_alpha(const Consortium& consortium, const Corpus& corpus) {
  ConsortiumAlpha out;
  out.per_paper.reserve(consortium.article_ids.size());
  CompensatedSum sum;
  for (const auto& id : consortium.article_ids) {
    const auto score = alpha_score(corpus.at(id).authors);
    if (score) sum.add(*score);
    out.per_paper.push_back(score);
  }
  if (sum.count() > 0) {
    // Clamp rounding noise so a mean of ones stays exactly 1.
    out.alpha_mean = std::clamp(sum.mean(), 0.0, 1.0);
    out.band = classify_alpha(*out.alpha_mean);
  }
  return out;
}

void write_paper_alpha_csv(std::ostream& out, std::span<const Consortium> consortia,
                           const Corpus& corpus) {
  out << "article_id,pairs_counted,pairs_in_order,score\n";
  for (const auto& c : consortia) {
    for (const auto& id : c.article_ids) {
      const AlphaCounts counts = count_alpha_pairs(corpus.at(id).authors);
      out << csv::cell(id) << ',' << counts.pairs_counted << ',' << counts.pairs_in_order << ',';
      if (const auto s = counts.score()) out << csv::number(*s);
      out << '\n';
    }
  }
}

}  // namespace consortia
