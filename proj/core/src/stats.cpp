#include "consortia/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <boost/math/distributions/students_t.hpp>

#include "consortia/authorship.hpp"
#include "consortia/numeric.hpp"

namespace consortia {

std::vector<double> average_ranks(std::span<const double> values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(n);
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i + 1;
    while (j < n && values[order[j]] == values[order[i]]) ++j;
    // Positions i..j-1 share the mean of ranks i+1..j.
    const double rank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
    for (std::size_t k = i; k < j; ++k) ranks[order[k]] = rank;
    i = j;
  }
  return ranks;
}

namespace {

double pearson(std::span<const double> x, std::span<const double> y) {
  CompensatedSum sx, sy;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx.add(x[i]);
    sy.add(y[i]);
  }
  const double mx = sx.mean();
  const double my = sy.mean();
  CompensatedSum cov, vx, vy;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    cov.add(dx * dy);
    vx.add(dx * dx);
    vy.add(dy * dy);
  }
  const double r = cov.value() / std::sqrt(vx.value() * vy.value());
  return std::clamp(r, -1.0, 1.0);
}

bool is_constant(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [&](double d) { return d == v.front(); });
}

double t_test_p(double rho, std::size_t n) {
  if (std::fabs(rho) >= 1.0) return 0.0;
  const double df = static_cast<double>(n - 2);
  const double t = rho * std::sqrt(df / (1.0 - rho * rho));
  const boost::math::students_t dist(df);
  return std::min(1.0, 2.0 * boost::math::cdf(boost::math::complement(dist, std::fabs(t))));
}

}  // namespace

Correlation spearman(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw Error(ErrorCode::LengthMismatch, "spearman inputs differ in length");
  }
  if (x.size() < 3) throw Error(ErrorCode::TooShort, "spearman needs at least 3 pairs");
  if (is_constant(x) || is_constant(y)) {
    throw Error(ErrorCode::ConstantInput, "spearman input is constant");
  }
  Correlation c;
  c.n = x.size();
  const auto rx = average_ranks(x);
  const auto ry = average_ranks(y);
  c.rho = pearson(rx, ry);
  c.p = t_test_p(c.rho, c.n);
  if (c.n <= kExactPermutationMax) c.exact_p = exact_permutation_p(x, y);
  return c;
}

double exact_permutation_p(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw Error(ErrorCode::LengthMismatch, "permutation test inputs differ in length");
  }
  if (x.size() > kExactPermutationMax) {
    throw Error(ErrorCode::TooLarge, "exact permutation test limited to n <= 8");
  }
  const auto rx = average_ranks(x);
  const auto ry = average_ranks(y);
  const double observed = std::fabs(pearson(rx, ry));
  std::vector<std::size_t> perm(ry.size());
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  std::vector<double> shuffled(ry.size());
  std::size_t total = 0;
  std::size_t extreme = 0;
  do {
    for (std::size_t i = 0; i < perm.size(); ++i) shuffled[i] = ry[perm[i]];
    ++total;
    if (std::fabs(pearson(rx, shuffled)) >= observed - 1e-12) ++extreme;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return static_cast<double>(extreme) / static_cast<double>(total);
}

ConsortiumCorrelations correlate_consortia(std::span<const ConsortiumReport> reports) {
  ConsortiumCorrelations out;
  std::vector<double> years, sizes, scores;
  for (const auto& r : reports) {
    if (!r.mnlcs) {
      ++out.excluded;
      continue;
    }
    years.push_back(static_cast<double>(r.consortium.first_year));
    sizes.push_back(static_cast<double>(r.consortium.size()));
    scores.push_back(*r.mnlcs);
  }
  out.used = scores.size();
  if (out.used < 3) {
    throw Error(ErrorCode::TooShort, "correlations need at least 3 consortia with an MNLCS, got " +
                                         std::to_string(out.used));
  }
  out.small_sample = out.used <= kExactPermutationMax;
  auto attempt = [&](std::span<const double> x, const char* name) -> std::optional<Correlation> {
    try {
      return spearman(x, scores);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::ConstantInput) throw;
      out.diagnostics.push_back(std::string(name) + ": " + e.detail());
      return std::nullopt;
    }
  };
  out.year_vs_mnlcs = attempt(years, "year_vs_mnlcs");
  out.size_vs_mnlcs = attempt(sizes, "size_vs_mnlcs");
  return out;
}

BandTallies tally_bands(std::span<const ConsortiumReport> reports, PaperBandMode mode) {
  BandTallies tallies{};
  for (const auto& r : reports) {
    if (r.alpha_band) ++tallies[static_cast<std::size_t>(*r.alpha_band)].consortium_count;
    if (mode == PaperBandMode::ConsortiumBand) {
      if (r.alpha_band) {
        tallies[static_cast<std::size_t>(*r.alpha_band)].paper_count += r.consortium.size();
      }
      continue;
    }
    for (const auto& score : r.per_paper_alpha) {
      if (score) ++tallies[static_cast<std::size_t>(classify_alpha(*score))].paper_count;
    }
  }
  return tallies;
}

std::size_t SizeHistogram::total() const {
  std::size_t sum = 0;
  for (const auto& [size, count] : counts) sum += count;
  return sum;
}

std::vector<std::pair<double, double>> SizeHistogram::log_points() const {
  std::vector<std::pair<double, double>> points;
  points.reserve(counts.size());
  for (const auto& [size, count] : counts) {
    points.emplace_back(std::log10(static_cast<double>(size)),
                        std::log10(static_cast<double>(count)));
  }
  return points;
}

SizeHistogram size_distribution(std::span<const Consortium> consortia) {
  SizeHistogram h;
  for (const auto& c : consortia) ++h.counts[c.size()];
  return h;
}

}  // namespace consortia
