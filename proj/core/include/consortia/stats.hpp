#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "consortia/model.hpp"

namespace consortia {

struct Correlation {
  double rho = 0.0;
  double p = 1.0;  // two-sided, t approximation with n-2 degrees of freedom
  std::size_t n = 0;
  std::optional<double> exact_p;  // permutation p-value when n <= kExactPermutationMax
};

inline constexpr std::size_t kExactPermutationMax = 8;

// Average (fractional) ranks, 1-based.
std::vector<double> average_ranks(std::span<const double> values);

// Throws Error(LengthMismatch), Error(TooShort) for n < 3, Error(ConstantInput).
Correlation spearman(std::span<const double> x, std::span<const double> y);

// Fraction of all n! rearrangements of y whose |rho| is at least the observed
// |rho|. Throws Error(TooLarge) above kExactPermutationMax.
double exact_permutation_p(std::span<const double> x, std::span<const double> y);

struct ConsortiumCorrelations {
  std::optional<Correlation> year_vs_mnlcs;
  std::optional<Correlation> size_vs_mnlcs;
  std::size_t used = 0;
  std::size_t excluded = 0;  // reports without an MNLCS
  bool small_sample = false;
  std::vector<std::string> diagnostics;
};

// Throws Error(TooShort) with fewer than 3 reports carrying an MNLCS. A
// constant input column yields an empty correlation plus a diagnostic.
ConsortiumCorrelations correlate_consortia(std::span<const ConsortiumReport> reports);

enum class PaperBandMode {
  OwnScore,         // each paper by its own score
  ConsortiumBand,   // each paper inherits its consortium's band
};

struct BandTally {
  std::size_t consortium_count = 0;
  std::size_t paper_count = 0;

  friend bool operator==(const BandTally&, const BandTally&) = default;
};

// Indexed by static_cast<std::size_t>(AlphaBand).
using BandTallies = std::array<BandTally, 4>;

BandTallies tally_bands(std::span<const ConsortiumReport> reports,
                        PaperBandMode mode = PaperBandMode::OwnScore);

struct SizeHistogram {
  std::map<std::size_t, std::size_t> counts;  // size -> number of consortia

  std::size_t total() const;
  // (log10 size, log10 count), ascending by size.
  std::vector<std::pair<double, double>> log_points() const;
};

SizeHistogram size_distribution(std::span<const Consortium> consortia);

}  // namespace consortia
