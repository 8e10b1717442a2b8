#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "consortia/ingest.hpp"
#include "consortia/model.hpp"

namespace testing {

inline consortia::Article article(std::string id, std::vector<std::string> author_ids,
                                  int year = 2000, std::int64_t citations = 0,
                                  std::vector<std::string> fields = {"F"}) {
  consortia::Article a;
  a.id = std::move(id);
  a.year = year;
  a.fields = std::move(fields);
  a.citations = citations;
  for (auto& au : author_ids) a.authors.push_back(consortia::make_author(au, au, "x"));
  return a;
}

// prefix1..prefixN
inline std::vector<std::string> ids(const std::string& prefix, int from, int to) {
  std::vector<std::string> out;
  for (int i = from; i <= to; ++i) out.push_back(prefix + std::to_string(i));
  return out;
}

inline std::vector<std::string> concat(std::vector<std::vector<std::string>> parts) {
  std::vector<std::string> out;
  for (auto& p : parts) out.insert(out.end(), p.begin(), p.end());
  return out;
}

// art1 {a1..a20}; art2 {a1..a16, b1..b4}; art3 {a1..a12, b1..b4, c1..c4}.
inline std::vector<consortia::Article> chain_trio() {
  return {
      article("art1", ids("a", 1, 20), 2001),
      article("art2", concat({ids("a", 1, 16), ids("b", 1, 4)}), 2002),
      article("art3", concat({ids("a", 1, 12), ids("b", 1, 4), ids("c", 1, 4)}), 2003),
  };
}

// Random corpus where articles draw authors from a few small pools, so
// linked and near-threshold pairs both occur.
inline consortia::Corpus random_pool_corpus(std::uint64_t seed, std::size_t n) {
  std::mt19937_64 rng(seed);
  auto uniform = [&](std::size_t lo, std::size_t hi) {
    return lo + static_cast<std::size_t>(rng() % (hi - lo + 1));
  };
  std::vector<consortia::Article> out;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t pool = uniform(0, 3);
    const std::size_t size = uniform(15, 30);
    std::vector<std::string> authors;
    std::vector<std::size_t> picks;
    for (std::size_t k = 0; k < 34; ++k) picks.push_back(k);
    std::shuffle(picks.begin(), picks.end(), rng);
    for (std::size_t k = 0; k < size; ++k) {
      authors.push_back("q" + std::to_string(pool) + "-" + std::to_string(picks[k]));
    }
    out.push_back(article("r" + std::to_string(i), authors, 1990 + static_cast<int>(uniform(0, 20)),
                          static_cast<std::int64_t>(uniform(0, 50))));
  }
  return consortia::Corpus(std::move(out));
}

}  // namespace testing
