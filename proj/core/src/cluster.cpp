#include "consortia/cluster.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <istream>
#include <ostream>
#include <string_view>
#include <unordered_map>
#include <unordered_set>

#include "consortia/csv.hpp"
#include "consortia/json_codec.hpp"
#include "parallel.hpp"

namespace consortia {

OverlapThreshold::OverlapThreshold(double min_overlap) {
  if (!(min_overlap > 0.0 && min_overlap <= 1.0)) {
    throw Error(ErrorCode::InvalidParams, "min_overlap must lie in (0, 1]");
  }
  std::uint64_t scale = 1;
  double scaled = min_overlap;
  for (int k = 0; k < 9; ++k) {
    if (std::fabs(scaled - std::round(scaled)) <= 1e-9 * std::max(1.0, scaled)) break;
    scale *= 10;
    scaled = min_overlap * static_cast<double>(scale);
  }
  scale_ = scale;
  numerator_ = static_cast<std::uint64_t>(std::llround(scaled));
}

std::size_t OverlapThreshold::min_shared(std::size_t denominator) const noexcept {
  const std::uint64_t need = numerator_ * denominator;
  return static_cast<std::size_t>((need + scale_ - 1) / scale_);
}

std::size_t shared_authors(const Article& a, const Article& b) {
  const Article& small = a.authors.size() <= b.authors.size() ? a : b;
  const Article& large = &small == &a ? b : a;
  std::unordered_set<std::string_view> ids;
  ids.reserve(small.authors.size());
  for (const auto& au : small.authors) ids.insert(au.id);
  std::size_t shared = 0;
  for (const auto& au : large.authors) shared += ids.count(au.id);
  return shared;
}

bool link_predicate(std::size_t shared, std::size_t size_a, std::size_t size_b,
                    const ClusterParams& params) {
  const std::size_t denominator = params.overlap_mode == OverlapMode::MaxDenominator
                                      ? std::max(size_a, size_b)
                                      : std::min(size_a, size_b);
  return OverlapThreshold(params.min_overlap).admits(shared, denominator);
}

bool link_predicate(const Article& a, const Article& b, const ClusterParams& params) {
  return link_predicate(shared_authors(a, b), a.authors.size(), b.authors.size(), params);
}

bool qualifies(const Article& article, const ClusterParams& params) {
  return article.authors.size() >= params.min_authors;
}

namespace {

constexpr std::size_t kPairTaskArticles = 256;

struct QualifyingIndex {
  std::vector<std::size_t> positions;               // corpus positions, ascending
  std::vector<std::vector<std::uint32_t>> authors;  // interned ids per article
  std::vector<std::vector<std::uint32_t>> postings; // author -> local indices, ascending
};

QualifyingIndex index_qualifying(const Corpus& corpus, const ClusterParams& params) {
  QualifyingIndex idx;
  std::unordered_map<std::string_view, std::uint32_t> intern;
  for (std::size_t pos = 0; pos < corpus.size(); ++pos) {
    const Article& a = corpus[pos];
    if (!qualifies(a, params)) continue;
    const auto local = static_cast<std::uint32_t>(idx.positions.size());
    idx.positions.push_back(pos);
    auto& ids = idx.authors.emplace_back();
    ids.reserve(a.authors.size());
    for (const auto& au : a.authors) {
      const auto [it, inserted] =
          intern.try_emplace(au.id, static_cast<std::uint32_t>(idx.postings.size()));
      if (inserted) idx.postings.emplace_back();
      idx.postings[it->second].push_back(local);
      ids.push_back(it->second);
    }
  }
  return idx;
}

}  // namespace

std::vector<CandidatePair> build_candidate_pairs(const Corpus& corpus,
                                                 const ClusterParams& params,
                                                 unsigned workers) {
  params.validate();
  const QualifyingIndex idx = index_qualifying(corpus, params);
  const std::size_t n = idx.positions.size();
  const std::size_t tasks = (n + kPairTaskArticles - 1) / kPairTaskArticles;
  std::vector<std::vector<CandidatePair>> per_task(tasks);

  detail::parallel_tasks(tasks, workers, [&](std::size_t t) {
    std::vector<std::uint32_t> counts(n, 0);
    std::vector<std::uint32_t> touched;
    auto& out = per_task[t];
    const std::size_t end = std::min(n, (t + 1) * kPairTaskArticles);
    for (std::size_t q = t * kPairTaskArticles; q < end; ++q) {
      for (const std::uint32_t author : idx.authors[q]) {
        const auto& list = idx.postings[author];
        auto it = std::upper_bound(list.begin(), list.end(), static_cast<std::uint32_t>(q));
        for (; it != list.end(); ++it) {
          if (counts[*it]++ == 0) touched.push_back(*it);
        }
      }
      std::sort(touched.begin(), touched.end());
      for (const std::uint32_t r : touched) {
        out.push_back(CandidatePair{idx.positions[q], idx.positions[r], counts[r]});
        counts[r] = 0;
      }
      touched.clear();
    }
  });

  std::size_t total = 0;
  for (const auto& v : per_task) total += v.size();
  std::vector<CandidatePair> pairs;
  pairs.reserve(total);
  for (auto& v : per_task) pairs.insert(pairs.end(), v.begin(), v.end());
  return pairs;
}

Consortium make_consortium(const Corpus& corpus, std::span<const std::size_t> positions) {
  Consortium c;
  c.article_ids.reserve(positions.size());
  bool first = true;
  for (const std::size_t pos : positions) {
    const Article& a = corpus[pos];
    c.article_ids.push_back(a.id);
    if (first || a.year < c.first_year) c.first_year = a.year;
    if (first || a.year > c.last_year) c.last_year = a.year;
    first = false;
  }
  std::sort(c.article_ids.begin(), c.article_ids.end());
  if (!c.article_ids.empty()) c.id = c.article_ids.front();
  return c;
}

void sort_consortia(std::vector<Consortium>& consortia) {
  std::sort(consortia.begin(), consortia.end(), [](const Consortium& x, const Consortium& y) {
    if (x.size() != y.size()) return x.size() > y.size();
    return x.id < y.id;
  });
}

std::vector<Consortium> detect_consortia(const Corpus& corpus, const ClusterParams& params,
                                         unsigned workers, DetectionSummary& summary) {
  params.validate();
  const auto pairs = build_candidate_pairs(corpus, params, workers);
  const OverlapThreshold threshold(params.min_overlap);

  summary = DetectionSummary{};
  summary.articles = corpus.size();
  summary.candidate_pairs = pairs.size();

  DisjointSets sets(corpus.size());
  for (const auto& pair : pairs) {
    const std::size_t size_a = corpus[pair.a].authors.size();
    const std::size_t size_b = corpus[pair.b].authors.size();
    const std::size_t denom = params.overlap_mode == OverlapMode::MaxDenominator
                                  ? std::max(size_a, size_b)
                                  : std::min(size_a, size_b);
    if (threshold.admits(pair.shared, denom)) {
      ++summary.links;
      sets.unite(pair.a, pair.b);
    }
  }

  std::unordered_map<std::size_t, std::vector<std::size_t>> components;
  for (std::size_t pos = 0; pos < corpus.size(); ++pos) {
    if (!qualifies(corpus[pos], params)) continue;
    ++summary.qualifying;
    if (sets.component_size(pos) < params.min_cluster_size) continue;
    components[sets.find(pos)].push_back(pos);
  }

  std::vector<Consortium> out;
  out.reserve(components.size());
  for (const auto& [root, members] : components) out.push_back(make_consortium(corpus, members));
  sort_consortia(out);
  return out;
}

std::vector<Consortium> cluster_consortia(const Corpus& corpus, const ClusterParams& params,
                                          unsigned workers) {
  DetectionSummary summary;
  return detect_consortia(corpus, params, workers, summary);
}

std::vector<Consortium> brute_force_cluster(const Corpus& corpus, const ClusterParams& params) {
  params.validate();
  std::vector<std::size_t> qualifying;
  for (std::size_t pos = 0; pos < corpus.size(); ++pos) {
    if (qualifies(corpus[pos], params)) qualifying.push_back(pos);
  }
  if (qualifying.size() > kBruteForceLimit) {
    throw Error(ErrorCode::TooLarge, std::to_string(qualifying.size()) +
                                         " qualifying articles exceed the brute-force limit");
  }
  const std::size_t n = qualifying.size();
  std::vector<std::vector<std::size_t>> adjacent(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (link_predicate(corpus[qualifying[i]], corpus[qualifying[j]], params)) {
        adjacent[i].push_back(j);
        adjacent[j].push_back(i);
      }
    }
  }

  std::vector<bool> visited(n, false);
  std::vector<Consortium> out;
  for (std::size_t start = 0; start < n; ++start) {
    if (visited[start]) continue;
    std::vector<std::size_t> members;
    std::deque<std::size_t> frontier{start};
    visited[start] = true;
    while (!frontier.empty()) {
      const std::size_t v = frontier.front();
      frontier.pop_front();
      members.push_back(qualifying[v]);
      for (const std::size_t w : adjacent[v]) {
        if (!visited[w]) {
          visited[w] = true;
          frontier.push_back(w);
        }
      }
    }
    if (members.size() >= params.min_cluster_size) out.push_back(make_consortium(corpus, members));
  }
  sort_consortia(out);
  return out;
}

void write_consortia_json(std::ostream& out, std::span<const Consortium> consortia) {
  out << json_codec::Json{{"consortia", json_codec::to_json(consortia)}}.dump(2) << '\n';
}

std::vector<Consortium> read_consortia_json(std::istream& in) {
  json_codec::Json doc;
  try {
    doc = json_codec::Json::parse(in);
  } catch (const json_codec::Json::exception& e) {
    throw Error(ErrorCode::MalformedLine, std::string("invalid consortia JSON: ") + e.what());
  }
  const json_codec::Json& list = doc.is_object() && doc.contains("consortia") ? doc["consortia"] : doc;
  return json_codec::consortia_from_json(list);
}

void write_consortia_csv(std::ostream& out, std::span<const Consortium> consortia) {
  out << "consortium_id,size,first_year,last_year,article_ids\n";
  for (const auto& c : consortia) {
    std::string members;
    for (std::size_t i = 0; i < c.article_ids.size(); ++i) {
      if (i) members.push_back(';');
      members += c.article_ids[i];
    }
    out << csv::cell(c.id) << ',' << c.size() << ',' << c.first_year << ','
        << c.last_year << ',' << csv::cell(members) << '\n';
  }
}

}  // namespace consortia
