#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>

#include "consortia/ingest.hpp"
#include "consortia/model.hpp"

namespace consortia {

// Mean ln(1+c) per (field, year) over the whole corpus; an article with k
// fields contributes to k strata. Sums are compensated and reduced over
// fixed-size chunks, so the table is bit-identical for any worker count.
NormTable build_norm_table(const Corpus& corpus, unsigned workers = 1);

// Mean over the article's fields of ln(1+c) / mean_log(field, year), skipping
// strata whose mean_log is zero. Empty when every stratum is degenerate.
// Throws Error(MissingStratum).
std::optional<double> nlcs(const Article& article, const NormTable& table);

struct MnlcsResult {
  std::optional<double> value;
  std::size_t included = 0;
  std::size_t excluded = 0;
};

// Throws Error(UnknownArticleId) or Error(MissingStratum).
MnlcsResult mnlcs(std::span<const std::string> article_ids, const Corpus& corpus,
                  const NormTable& table);

// Rows of field,year,mean_log,n with a header; mean_log printed with 17
// significant digits so a reload is exact.
void write_norm_table_csv(std::ostream& out, const NormTable& table);
NormTable read_norm_table_csv(std::istream& in);

}  // namespace consortia
