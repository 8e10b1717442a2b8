#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <numeric>
#include <span>
#include <vector>

#include "consortia/ingest.hpp"
#include "consortia/model.hpp"

namespace consortia {

// `shared >= min_overlap * denominator`, evaluated exactly as
// shared * 10^k >= round(min_overlap * 10^k) * denominator where k is the
// number of decimal digits in min_overlap (at most 9).
class OverlapThreshold {
 public:
  explicit OverlapThreshold(double min_overlap);

  bool admits(std::size_t shared, std::size_t denominator) const noexcept {
    return static_cast<std::uint64_t>(shared) * scale_ >=
           numerator_ * static_cast<std::uint64_t>(denominator);
  }
  // Smallest shared count admitted for the given denominator.
  std::size_t min_shared(std::size_t denominator) const noexcept;

  std::uint64_t numerator() const noexcept { return numerator_; }
  std::uint64_t scale() const noexcept { return scale_; }

 private:
  std::uint64_t numerator_;
  std::uint64_t scale_;
};

std::size_t shared_authors(const Article& a, const Article& b);

// Both articles are expected to have >= params.min_authors unique authors.
bool link_predicate(const Article& a, const Article& b, const ClusterParams& params);
bool link_predicate(std::size_t shared, std::size_t size_a, std::size_t size_b,
                    const ClusterParams& params);

bool qualifies(const Article& article, const ClusterParams& params);

struct CandidatePair {
  std::size_t a = 0;  // corpus position, a < b
  std::size_t b = 0;
  std::size_t shared = 0;

  friend bool operator==(const CandidatePair&, const CandidatePair&) = default;
};

// Every qualifying pair sharing at least one author, with exact shared
// counts, sorted by (a, b).
std::vector<CandidatePair> build_candidate_pairs(const Corpus& corpus,
                                                 const ClusterParams& params,
                                                 unsigned workers = 1);

// Path-compressed, union-by-size disjoint sets.
class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n), size_(n, 1) {
    std::iota(parent_.begin(), parent_.end(), std::size_t{0});
  }

  std::size_t find(std::size_t x) {
    std::size_t root = x;
    while (parent_[root] != root) root = parent_[root];
    while (parent_[x] != root) {
      const std::size_t next = parent_[x];
      parent_[x] = root;
      x = next;
    }
    return root;
  }

  bool unite(std::size_t x, std::size_t y) {
    x = find(x);
    y = find(y);
    if (x == y) return false;
    if (size_[x] < size_[y]) std::swap(x, y);
    parent_[y] = x;
    size_[x] += size_[y];
    return true;
  }

  std::size_t component_size(std::size_t x) { return size_[find(x)]; }

 private:
  std::vector<std::size_t> parent_;
  std::vector<std::size_t> size_;
};

// Connected components of the link graph over qualifying articles, keeping
// those with >= min_cluster_size members, ordered by size descending then id.
std::vector<Consortium> cluster_consortia(const Corpus& corpus, const ClusterParams& params,
                                          unsigned workers = 1);

inline constexpr std::size_t kBruteForceLimit = 10'000;

// Quadratic reference implementation: evaluates link_predicate on every
// qualifying pair and walks components breadth-first. Throws Error(TooLarge)
// above kBruteForceLimit qualifying articles.
std::vector<Consortium> brute_force_cluster(const Corpus& corpus, const ClusterParams& params);

// Assembles a Consortium (sorted ids, id, year span) from corpus positions.
Consortium make_consortium(const Corpus& corpus, std::span<const std::size_t> positions);
void sort_consortia(std::vector<Consortium>& consortia);

struct DetectionSummary {
  std::size_t articles = 0;
  std::size_t qualifying = 0;
  std::size_t candidate_pairs = 0;
  std::size_t links = 0;
};

// cluster_consortia plus counters for reporting.
std::vector<Consortium> detect_consortia(const Corpus& corpus, const ClusterParams& params,
                                         unsigned workers, DetectionSummary& summary);

void write_consortia_json(std::ostream& out, std::span<const Consortium> consortia);
// Accepts a bare array or an object holding a "consortia" array.
std::vector<Consortium> read_consortia_json(std::istream& in);
void write_consortia_csv(std::ostream& out, std::span<const Consortium> consortia);

}  // namespace consortia
