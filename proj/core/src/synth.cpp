#include "consortia/synth.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <random>
#include <set>

#include "consortia/authorship.hpp"
#include "json.hpp"
#include "parallel.hpp"

namespace consortia {

using nlohmann::ordered_json;

std::string_view to_string(OrderingPolicy policy) {
  switch (policy) {
    case OrderingPolicy::FullyAlphabetical: return "alphabetical";
    case OrderingPolicy::MiddleAlphabetical: return "middle_alphabetical";
    case OrderingPolicy::Random: return "random";
  }
  return "random";
}

OrderingPolicy parse_ordering_policy(std::string_view text) {
  if (text == "alphabetical" || text == "FullyAlphabetical") {
    return OrderingPolicy::FullyAlphabetical;
  }
  if (text == "middle_alphabetical" || text == "MiddleAlphabetical") {
    return OrderingPolicy::MiddleAlphabetical;
  }
  if (text == "random" || text == "Random") return OrderingPolicy::Random;
  throw Error(ErrorCode::InvalidSpec, "unknown ordering policy '" + std::string(text) + "'");
}

std::string_view to_string(ChurnMode mode) {
  return mode == ChurnMode::LexicographicLast ? "lexicographic_last" : "random";
}

ChurnMode parse_churn_mode(std::string_view text) {
  if (text == "lexicographic_last") return ChurnMode::LexicographicLast;
  if (text == "random") return ChurnMode::RandomSubset;
  throw Error(ErrorCode::InvalidSpec, "unknown churn mode '" + std::string(text) + "'");
}

double CitationModel::mean_for(int year, bool planted) const {
  const auto it = mean_by_year.find(year);
  const double base = it == mean_by_year.end() ? mean : it->second;
  return planted ? base * planted_multiplier : base;
}

namespace {

[[noreturn]] void invalid(const std::string& reason) {
  throw Error(ErrorCode::InvalidSpec, reason);
}

bool finite_non_negative(double v) { return std::isfinite(v) && v >= 0.0; }

// Fresh author ids are numbered downwards so that newer ids sort first and
// the lexicographically last members of a paper are its longest-serving ones.
constexpr std::uint64_t kAuthorCodeTop = 99'999'999;

}  // namespace

void SynthSpec::validate() const {
  for (std::size_t k = 0; k < planted.size(); ++k) {
    const auto& p = planted[k];
    const std::string at = "planted[" + std::to_string(k) + "]: ";
    if (p.pool_size < min_authors || p.pool_size == 0) {
      invalid(at + "pool_size must be >= min_authors (" + std::to_string(min_authors) + ")");
    }
    if (!(p.churn_rate >= 0.0 && p.churn_rate < 1.0)) invalid(at + "churn_rate must lie in [0, 1)");
    if (p.papers < 1) invalid(at + "papers must be >= 1");
    if (p.papers_max != 0 && p.papers_max < p.papers) invalid(at + "papers_max below papers");
    if (p.papers_per_year < 1) invalid(at + "papers_per_year must be >= 1");
    if (std::max(p.papers, p.papers_max) > 99'999) invalid(at + "too many papers");
  }
  if (planted.size() > 9'999) invalid("at most 9999 planted consortia");
  if (noise_articles > 99'999'999) invalid("too many noise articles");
  if (noise_author_range.first < 1 || noise_author_range.first > noise_author_range.second) {
    invalid("noise_author_range must satisfy 1 <= min <= max");
  }
  if (noise_author_range.second > 99) invalid("noise articles are limited to 99 authors");
  if (noise_year_range.first > noise_year_range.second) invalid("noise_year_range is reversed");
  if (fields.empty()) invalid("fields must not be empty");
  if (std::set<std::string>(fields.begin(), fields.end()).size() != fields.size()) {
    invalid("fields must be distinct");
  }
  for (const auto& f : fields) {
    if (f.empty()) invalid("field codes must be non-empty");
  }
  if (fields_per_article.first < 1 || fields_per_article.first > fields_per_article.second ||
      fields_per_article.second > fields.size()) {
    invalid("fields_per_article must satisfy 1 <= min <= max <= |fields|");
  }
  if (!finite_non_negative(citation_model.mean)) invalid("citation mean must be >= 0");
  if (!finite_non_negative(citation_model.planted_multiplier)) {
    invalid("planted_multiplier must be >= 0");
  }
  for (const auto& [year, mean] : citation_model.mean_by_year) {
    if (!finite_non_negative(mean)) invalid("mean_by_year[" + std::to_string(year) + "] must be >= 0");
  }
  if (min_authors < 1) invalid("min_authors must be >= 1");
}

namespace {

template <class T>
T read_or(const ordered_json& obj, const char* key, T fallback) {
  const auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return fallback;
  return it->get<T>();
}

template <class T>
std::pair<T, T> read_range(const ordered_json& obj, const char* key, std::pair<T, T> fallback) {
  const auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return fallback;
  if (!it->is_array() || it->size() != 2) invalid(std::string(key) + " must be [min, max]");
  return {(*it)[0].get<T>(), (*it)[1].get<T>()};
}

}  // namespace

SynthSpec parse_synth_spec(std::string_view json_text, std::optional<std::uint64_t> seed_override) {
  SynthSpec spec;
  try {
    const auto doc = ordered_json::parse(json_text);
    if (!doc.is_object()) invalid("spec must be a JSON object");
    spec.seed = read_or<std::uint64_t>(doc, "seed", 0);
    spec.min_authors = read_or<std::size_t>(doc, "min_authors", spec.min_authors);
    spec.noise_articles = read_or<std::size_t>(doc, "noise_articles", 0);
    spec.noise_author_range = read_range(doc, "noise_author_range", spec.noise_author_range);
    spec.noise_year_range = read_range(doc, "noise_year_range", spec.noise_year_range);
    if (auto it = doc.find("fields"); it != doc.end()) {
      spec.fields = it->get<std::vector<std::string>>();
    }
    spec.fields_per_article = read_range(doc, "fields_per_article", spec.fields_per_article);
    if (auto it = doc.find("churn_mode"); it != doc.end()) {
      spec.churn_mode = parse_churn_mode(it->get<std::string>());
    }
    if (auto it = doc.find("citation_model"); it != doc.end()) {
      const auto& cm = *it;
      if (const auto kind = read_or<std::string>(cm, "kind", "geometric"); kind != "geometric") {
        invalid("only the geometric citation model is supported");
      }
      spec.citation_model.mean = read_or<double>(cm, "mean", spec.citation_model.mean);
      spec.citation_model.planted_multiplier =
          read_or<double>(cm, "planted_multiplier", spec.citation_model.planted_multiplier);
      if (auto by = cm.find("mean_by_year"); by != cm.end()) {
        for (const auto& [year, mean] : by->items()) {
          std::size_t used = 0;
          const int y = std::stoi(year, &used);
          if (used != year.size()) invalid("mean_by_year keys must be years");
          spec.citation_model.mean_by_year[y] = mean.get<double>();
        }
      }
    }
    if (auto it = doc.find("planted"); it != doc.end()) {
      if (!it->is_array()) invalid("planted must be an array");
      for (const auto& entry : *it) {
        PlantedSpec p;
        p.pool_size = read_or<std::size_t>(entry, "pool_size", p.pool_size);
        p.churn_rate = read_or<double>(entry, "churn_rate", p.churn_rate);
        if (auto pp = entry.find("papers"); pp != entry.end()) {
          if (pp->is_array()) {
            const auto r = read_range<std::size_t>(entry, "papers", {1, 1});
            p.papers = r.first;
            p.papers_max = r.second;
          } else {
            p.papers = pp->get<std::size_t>();
          }
        }
        p.start_year = read_or<int>(entry, "start_year", p.start_year);
        p.papers_per_year = read_or<std::size_t>(entry, "papers_per_year", p.papers_per_year);
        if (auto o = entry.find("ordering"); o != entry.end()) {
          p.ordering = parse_ordering_policy(o->get<std::string>());
        }
        const auto count = read_or<std::size_t>(entry, "count", 1);
        if (count > 9'999) invalid("planted count too large");
        for (std::size_t c = 0; c < count; ++c) spec.planted.push_back(p);
      }
    }
  } catch (const ordered_json::exception& e) {
    invalid(std::string("malformed spec: ") + e.what());
  } catch (const std::invalid_argument&) {
    invalid("malformed spec: bad number");
  } catch (const std::out_of_range&) {
    invalid("malformed spec: number out of range");
  }
  if (seed_override) spec.seed = *seed_override;
  spec.validate();
  return spec;
}

std::string to_json_text(const SynthSpec& spec) {
  ordered_json planted = ordered_json::array();
  for (const auto& p : spec.planted) {
    ordered_json e{{"pool_size", p.pool_size}, {"churn_rate", p.churn_rate}};
    if (p.papers_max > p.papers) {
      e["papers"] = {p.papers, p.papers_max};
    } else {
      e["papers"] = p.papers;
    }
    e["start_year"] = p.start_year;
    e["papers_per_year"] = p.papers_per_year;
    e["ordering"] = to_string(p.ordering);
    planted.push_back(std::move(e));
  }
  ordered_json by_year = ordered_json::object();
  for (const auto& [year, mean] : spec.citation_model.mean_by_year) {
    by_year[std::to_string(year)] = mean;
  }
  const ordered_json doc{
      {"seed", spec.seed},
      {"min_authors", spec.min_authors},
      {"planted", std::move(planted)},
      {"noise_articles", spec.noise_articles},
      {"noise_author_range", {spec.noise_author_range.first, spec.noise_author_range.second}},
      {"noise_year_range", {spec.noise_year_range.first, spec.noise_year_range.second}},
      {"fields", spec.fields},
      {"fields_per_article", {spec.fields_per_article.first, spec.fields_per_article.second}},
      {"churn_mode", to_string(spec.churn_mode)},
      {"citation_model",
       {{"kind", "geometric"},
        {"mean", spec.citation_model.mean},
        {"mean_by_year", std::move(by_year)},
        {"planted_multiplier", spec.citation_model.planted_multiplier}}}};
  return doc.dump(2);
}

GroundTruth::GroundTruth(std::vector<std::vector<std::string>> planted,
                         std::size_t noise_articles)
    : planted_(std::move(planted)), noise_articles_(noise_articles) {
  for (std::size_t k = 0; k < planted_.size(); ++k) {
    for (const auto& id : planted_[k]) {
      if (!index_.emplace(id, k).second) {
        throw Error(ErrorCode::InvalidSpec,
                    "article '" + id + "' is assigned to two planted consortia");
      }
    }
  }
}

std::optional<std::size_t> GroundTruth::consortium_of(std::string_view article_id) const {
  const auto it = index_.find(std::string(article_id));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
  return splitmix64(splitmix64(seed ^ splitmix64(stream)) + index);
}

// mt19937_64 output is fully specified by the standard; the helpers below
// avoid std distributions, whose algorithms vary between standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % n;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % n;
  }

  template <class T>
  T between(T lo, T hi) {
    return lo + static_cast<T>(below(static_cast<std::uint64_t>(hi - lo) + 1));
  }

  // Uniform on (0, 1].
  double unit() { return static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53; }

  std::int64_t geometric(double mean) {
    if (mean <= 0.0) return 0;
    const double q = mean / (1.0 + mean);
    return static_cast<std::int64_t>(std::floor(std::log(unit()) / std::log(q)));
  }

  template <class T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[below(i)]);
  }

 private:
  std::mt19937_64 engine_;
};

constexpr std::array<std::string_view, 24> kSyllables = {
    "ba", "ko", "ri", "sen", "ta", "mu", "lo", "vel", "ne", "dar", "chi", "po",
    "gu", "an", "es", "tor", "wi", "ya", "zel", "fi", "hol", "ma", "ru", "ki"};

AuthorRef random_author(Rng& rng, std::string id) {
  std::string last;
  const std::size_t parts = rng.between<std::size_t>(2, 3);
  for (std::size_t i = 0; i < parts; ++i) last += kSyllables[rng.below(kSyllables.size())];
  last[0] = static_cast<char>(last[0] - 'a' + 'A');
  const char initial[2] = {static_cast<char>('A' + rng.below(26)), '\0'};
  return make_author(std::move(id), last, initial);
}

bool key_less(const AuthorRef& a, const AuthorRef& b) {
  const OrderKey ka = order_key(a), kb = order_key(b);
  if (ka != kb) return ka < kb;
  return a.id < b.id;
}

void apply_ordering(std::vector<AuthorRef>& authors, OrderingPolicy policy, Rng& rng) {
  switch (policy) {
    case OrderingPolicy::FullyAlphabetical:
      std::sort(authors.begin(), authors.end(), key_less);
      return;
    case OrderingPolicy::Random:
      rng.shuffle(authors);
      return;
    case OrderingPolicy::MiddleAlphabetical: {
      rng.shuffle(authors);
      constexpr std::size_t kHead = 3, kTail = 2;
      if (authors.size() <= kHead + kTail) return;
      std::sort(authors.begin() + kHead, authors.end() - kTail, key_less);
      return;
    }
  }
}

std::vector<std::string> pick_fields(const SynthSpec& spec, Rng& rng) {
  const std::size_t k = rng.between(spec.fields_per_article.first, spec.fields_per_article.second);
  std::vector<std::size_t> idx(spec.fields.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::vector<std::string> out;
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t j = i + rng.below(idx.size() - i);
    std::swap(idx[i], idx[j]);
    out.push_back(spec.fields[idx[i]]);
  }
  return out;
}

std::string format_id(const char* pattern, std::uint64_t a, std::uint64_t b = 0) {
  char buf[48];
  std::snprintf(buf, sizeof buf, pattern, static_cast<unsigned long long>(a),
                static_cast<unsigned long long>(b));
  return buf;
}

std::vector<Article> generate_planted(const SynthSpec& spec, std::size_t k) {
  const PlantedSpec& p = spec.planted[k];
  Rng rng(derive_seed(spec.seed, 1, k));
  const std::size_t papers =
      p.papers_max > p.papers ? rng.between(p.papers, p.papers_max) : p.papers;
  // Small epsilon so products such as 0.15 * 20 floor to the intended integer.
  const auto churn =
      static_cast<std::size_t>(std::floor(p.churn_rate * static_cast<double>(p.pool_size) + 1e-9));

  std::uint64_t issued = 0;
  auto fresh = [&] {
    return random_author(rng, format_id("p%04llu-%08llu", k, kAuthorCodeTop - issued++));
  };

  std::vector<AuthorRef> members;
  members.reserve(p.pool_size);
  for (std::size_t i = 0; i < p.pool_size; ++i) members.push_back(fresh());

  std::vector<Article> out;
  out.reserve(papers);
  for (std::size_t i = 0; i < papers; ++i) {
    if (i > 0 && churn > 0) {
      if (spec.churn_mode == ChurnMode::LexicographicLast) {
        std::sort(members.begin(), members.end(),
                  [](const AuthorRef& a, const AuthorRef& b) { return a.id < b.id; });
      } else {
        rng.shuffle(members);
      }
      members.resize(members.size() - churn);
      for (std::size_t r = 0; r < churn; ++r) members.push_back(fresh());
    }
    Article a;
    a.id = format_id("P%04llu-%05llu", k, i);
    a.year = p.start_year + static_cast<int>(i / p.papers_per_year);
    a.fields = pick_fields(spec, rng);
    a.citations = rng.geometric(spec.citation_model.mean_for(a.year, true));
    a.authors = members;
    apply_ordering(a.authors, p.ordering, rng);
    out.push_back(std::move(a));
  }
  return out;
}

constexpr std::size_t kNoiseChunk = 1 << 14;

std::vector<Article> generate_noise(const SynthSpec& spec, std::size_t chunk) {
  Rng rng(derive_seed(spec.seed, 2, chunk));
  const std::size_t begin = chunk * kNoiseChunk;
  const std::size_t end = std::min(spec.noise_articles, begin + kNoiseChunk);
  std::vector<Article> out;
  out.reserve(end - begin);
  for (std::size_t i = begin; i < end; ++i) {
    Article a;
    a.id = format_id("N%08llu", i);
    a.year = rng.between(spec.noise_year_range.first, spec.noise_year_range.second);
    a.fields = pick_fields(spec, rng);
    a.citations = rng.geometric(spec.citation_model.mean_for(a.year, false));
    const std::size_t n = rng.between(spec.noise_author_range.first, spec.noise_author_range.second);
    a.authors.reserve(n);
    for (std::size_t j = 0; j < n; ++j) {
      a.authors.push_back(random_author(rng, format_id("n%08llu-%02llu", i, j)));
    }
    out.push_back(std::move(a));
  }
  return out;
}

}  // namespace

SynthResult generate_corpus(const SynthSpec& spec, unsigned workers) {
  spec.validate();
  const std::size_t planted = spec.planted.size();
  const std::size_t noise_chunks = (spec.noise_articles + kNoiseChunk - 1) / kNoiseChunk;
  std::vector<std::vector<Article>> parts(planted + noise_chunks);
  detail::parallel_tasks(parts.size(), workers, [&](std::size_t t) {
    parts[t] = t < planted ? generate_planted(spec, t) : generate_noise(spec, t - planted);
  });

  std::vector<std::vector<std::string>> truth(planted);
  std::size_t total = 0;
  for (const auto& part : parts) total += part.size();
  std::vector<Article> articles;
  articles.reserve(total);
  for (std::size_t t = 0; t < parts.size(); ++t) {
    for (auto& a : parts[t]) {
      if (t < planted) truth[t].push_back(a.id);
      articles.push_back(std::move(a));
    }
    std::vector<Article>().swap(parts[t]);
  }
  return SynthResult{Corpus(std::move(articles)), GroundTruth(std::move(truth), spec.noise_articles)};
}

DetectionMetrics evaluate_detection(std::span<const Consortium> detected,
                                    const GroundTruth& truth) {
  DetectionMetrics m;
  m.planted = truth.planted_count();
  m.detected = detected.size();
  // planted index -> detected consortia touching it
  std::vector<std::set<std::size_t>> touching(m.planted);
  std::vector<std::set<std::size_t>> planted_in(detected.size());
  for (std::size_t d = 0; d < detected.size(); ++d) {
    for (const auto& id : detected[d].article_ids) {
      if (const auto k = truth.consortium_of(id)) {
        planted_in[d].insert(*k);
        touching[*k].insert(d);
      }
    }
    if (planted_in[d].size() >= 2) ++m.merges;
    if (planted_in[d].empty()) ++m.spurious;
  }
  for (std::size_t k = 0; k < m.planted; ++k) {
    if (touching[k].size() >= 2) ++m.splits;
    if (touching[k].size() != 1) continue;
    const std::size_t d = *touching[k].begin();
    if (planted_in[d].size() != 1) continue;
    std::size_t members = 0;
    for (const auto& id : detected[d].article_ids) {
      if (truth.consortium_of(id) == k) ++members;
    }
    if (members == truth.planted()[k].size()) ++m.recovered;
  }
  m.recall = m.planted == 0 ? 1.0 : static_cast<double>(m.recovered) / static_cast<double>(m.planted);
  return m;
}

void write_ground_truth_json(std::ostream& out, const GroundTruth& truth) {
  ordered_json planted = ordered_json::array();
  for (std::size_t k = 0; k < truth.planted_count(); ++k) {
    planted.push_back({{"index", k}, {"article_ids", truth.planted()[k]}});
  }
  out << ordered_json{{"planted", std::move(planted)}, {"noise_articles", truth.noise_articles()}}
             .dump(2)
      << '\n';
}

GroundTruth read_ground_truth_json(std::istream& in) {
  try {
    const auto doc = ordered_json::parse(in);
    std::vector<std::vector<std::string>> planted;
    for (const auto& entry : doc.at("planted")) {
      const auto index = entry.at("index").get<std::size_t>();
      if (index != planted.size()) invalid("planted indices must be 0..n-1 in order");
      planted.push_back(entry.at("article_ids").get<std::vector<std::string>>());
    }
    return GroundTruth(std::move(planted), read_or<std::size_t>(doc, "noise_articles", 0));
  } catch (const ordered_json::exception& e) {
    invalid(std::string("malformed ground truth: ") + e.what());
  }
}

}  // namespace consortia
