#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include "consortia/impact.hpp"
#include "consortia/ingest.hpp"
#include "consortia/model.hpp"
#include "consortia/stats.hpp"

namespace consortia {

// Joins a consortium with its MNLCS and alphabetical-ordering scores.
ConsortiumReport build_report(const Consortium& consortium, const Corpus& corpus,
                              const NormTable& table);
std::vector<ConsortiumReport> build_reports(std::span<const Consortium> consortia,
                                            const Corpus& corpus, const NormTable& table,
                                            unsigned workers = 1);

bool is_valid(const ConsortiumReport& report);

// consortium_id,size,first_year,last_year,mnlcs,included,excluded,alpha_mean,alpha_band,truncated
void write_reports_csv(std::ostream& out, std::span<const ConsortiumReport> reports);
// band,description,consortia,papers plus a total row.
void write_tally_csv(std::ostream& out, const BandTallies& tallies);
// size,count
void write_histogram_csv(std::ostream& out, const SizeHistogram& histogram);
// log10_size,log10_count
void write_loglog_csv(std::ostream& out, const SizeHistogram& histogram);

}  // namespace consortia
