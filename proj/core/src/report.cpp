#include "consortia/report.hpp"

#include <cmath>
#include <ostream>

#include "consortia/authorship.hpp"
#include "consortia/csv.hpp"
#include "parallel.hpp"

namespace consortia {

ConsortiumReport build_report(const Consortium& consortium, const Corpus& corpus,
                              const NormTable& table) {
  ConsortiumReport r;
  r.consortium = consortium;
  const MnlcsResult impact = mnlcs(consortium.article_ids, corpus, table);
  r.mnlcs = impact.value;
  r.included_articles = impact.included;
  r.excluded_articles = impact.excluded;
  ConsortiumAlpha alpha = consortium_alpha(consortium, corpus);
  r.alpha_mean = alpha.alpha_mean;
  r.alpha_band = alpha.band;
  r.per_paper_alpha = std::move(alpha.per_paper);
  for (const auto& id : consortium.article_ids) {
    if (corpus.at(id).truncated) ++r.truncated_articles;
  }
  return r;
}

std::vector<ConsortiumReport> build_reports(std::span<const Consortium> consortia,
                                            const Corpus& corpus, const NormTable& table,
                                            unsigned workers) {
  std::vector<ConsortiumReport> out(consortia.size());
  detail::parallel_tasks(consortia.size(), workers, [&](std::size_t i) {
    out[i] = build_report(consortia[i], corpus, table);
  });
  return out;
}

bool is_valid(const ConsortiumReport& report) {
  if (!is_valid(report.consortium)) return false;
  if (report.mnlcs && !(std::isfinite(*report.mnlcs) && *report.mnlcs >= 0.0)) return false;
  if (report.included_articles + report.excluded_articles != report.consortium.size()) return false;
  if (report.per_paper_alpha.size() != report.consortium.size()) return false;
  if (report.alpha_mean.has_value() != report.alpha_band.has_value()) return false;
  if (report.alpha_mean) {
    if (!(*report.alpha_mean >= 0.0 && *report.alpha_mean <= 1.0)) return false;
    if (classify_alpha(*report.alpha_mean) != *report.alpha_band) return false;
  }
  return true;
}

void write_reports_csv(std::ostream& out, std::span<const ConsortiumReport> reports) {
  out << "consortium_id,size,first_year,last_year,mnlcs,included,excluded,alpha_mean,"
         "alpha_band,truncated\n";
  for (const auto& r : reports) {
    const Consortium& c = r.consortium;
    out << csv::cell(c.id) << ',' << c.size() << ',' << c.first_year << ',' << c.last_year << ',';
    if (r.mnlcs) out << csv::number(*r.mnlcs);
    out << ',' << r.included_articles << ',' << r.excluded_articles << ',';
    if (r.alpha_mean) out << csv::number(*r.alpha_mean);
    out << ',';
    if (r.alpha_band) out << to_string(*r.alpha_band);
    out << ',' << r.truncated_articles << '\n';
  }
}

void write_tally_csv(std::ostream& out, const BandTallies& tallies) {
  out << "band,description,consortia,papers\n";
  std::size_t consortia = 0, papers = 0;
  for (AlphaBand band : kAllBands) {
    const BandTally& t = tallies[static_cast<std::size_t>(band)];
    out << to_string(band) << ',' << csv::cell(describe(band)) << ',' << t.consortium_count << ','
        << t.paper_count << '\n';
    consortia += t.consortium_count;
    papers += t.paper_count;
  }
  out << "total,," << consortia << ',' << papers << '\n';
}

void write_histogram_csv(std::ostream& out, const SizeHistogram& histogram) {
  out << "size,count\n";
  for (const auto& [size, count] : histogram.counts) out << size << ',' << count << '\n';
}

void write_loglog_csv(std::ostream& out, const SizeHistogram& histogram) {
  out << "log10_size,log10_count\n";
  for (const auto& [x, y] : histogram.log_points()) {
    out << csv::number(x) << ',' << csv::number(y) << '\n';
  }
}

}  // namespace consortia
