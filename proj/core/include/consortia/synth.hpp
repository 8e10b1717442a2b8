#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "consortia/ingest.hpp"
#include "consortia/model.hpp"

namespace consortia {

enum class OrderingPolicy { FullyAlphabetical, MiddleAlphabetical, Random };

std::string_view to_string(OrderingPolicy policy);
OrderingPolicy parse_ordering_policy(std::string_view text);

enum class ChurnMode {
  LexicographicLast,  // replace the lexicographically last author ids
  RandomSubset,
};

std::string_view to_string(ChurnMode mode);
ChurnMode parse_churn_mode(std::string_view text);

struct PlantedSpec {
  std::size_t pool_size = 25;
  double churn_rate = 0.1;
  // Paper count; when papers_max > papers the count is drawn uniformly from
  // [papers, papers_max] per consortium.
  std::size_t papers = 5;
  std::size_t papers_max = 0;
  int start_year = 2000;
  std::size_t papers_per_year = 1;
  OrderingPolicy ordering = OrderingPolicy::Random;
};

// Citations are geometric with the given mean; mean_by_year overrides the
// mean for individual years and planted articles scale it by
// planted_multiplier.
struct CitationModel {
  double mean = 3.0;
  std::map<int, double> mean_by_year;
  double planted_multiplier = 1.0;

  double mean_for(int year, bool planted) const;
};

struct SynthSpec {
  std::uint64_t seed = 0;
  std::vector<PlantedSpec> planted;
  std::size_t noise_articles = 0;
  std::pair<std::size_t, std::size_t> noise_author_range{5, 10};
  std::pair<int, int> noise_year_range{2000, 2018};
  std::vector<std::string> fields{"F01"};
  std::pair<std::size_t, std::size_t> fields_per_article{1, 1};
  CitationModel citation_model;
  ChurnMode churn_mode = ChurnMode::LexicographicLast;
  // Lower bound for planted pool sizes.
  std::size_t min_authors = 20;

  // Throws Error(InvalidSpec) naming the first violated constraint.
  void validate() const;
};

// Reads the JSON spec format. Planted entries accept "count" to replicate an
// entry and "papers": [min, max] for a drawn paper count. A seed override
// replaces the file's seed. Throws Error(InvalidSpec).
SynthSpec parse_synth_spec(std::string_view json_text,
                           std::optional<std::uint64_t> seed_override = {});
std::string to_json_text(const SynthSpec& spec);

// Article ids per planted consortium; any other article is noise.
class GroundTruth {
 public:
  GroundTruth() = default;
  explicit GroundTruth(std::vector<std::vector<std::string>> planted,
                       std::size_t noise_articles = 0);

  std::optional<std::size_t> consortium_of(std::string_view article_id) const;
  const std::vector<std::vector<std::string>>& planted() const noexcept { return planted_; }
  std::size_t planted_count() const noexcept { return planted_.size(); }
  std::size_t noise_articles() const noexcept { return noise_articles_; }

  friend bool operator==(const GroundTruth& a, const GroundTruth& b) {
    return a.planted_ == b.planted_ && a.noise_articles_ == b.noise_articles_;
  }

 private:
  std::vector<std::vector<std::string>> planted_;
  std::unordered_map<std::string, std::size_t> index_;
  std::size_t noise_articles_ = 0;
};

struct SynthResult {
  Corpus corpus;
  GroundTruth truth;
};

// Deterministic for a fixed spec; consortia and noise chunks use derived
// seeds so the output does not depend on the worker count.
SynthResult generate_corpus(const SynthSpec& spec, unsigned workers = 1);

struct DetectionMetrics {
  double recall = 0.0;
  std::size_t recovered = 0;
  std::size_t merges = 0;
  std::size_t splits = 0;
  std::size_t spurious = 0;
  std::size_t planted = 0;
  std::size_t detected = 0;
};

DetectionMetrics evaluate_detection(std::span<const Consortium> detected,
                                    const GroundTruth& truth);

void write_ground_truth_json(std::ostream& out, const GroundTruth& truth);
GroundTruth read_ground_truth_json(std::istream& in);

}  // namespace consortia
