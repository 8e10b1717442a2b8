#include "doctest.h"

#include <algorithm>
#include <numeric>
#include <random>
#include <sstream>

#include "consortia/authorship.hpp"
#include "consortia/error.hpp"
#include "support.hpp"

using namespace consortia;

namespace {

std::vector<AuthorRef> named(std::vector<std::pair<std::string, std::string>> keys) {
  std::vector<AuthorRef> out;
  for (std::size_t i = 0; i < keys.size(); ++i) {
    out.push_back(make_author("id" + std::to_string(i), keys[i].first, keys[i].second));
  }
  return out;
}

std::vector<AuthorRef> distinct_sorted(std::size_t n) {
  std::vector<AuthorRef> out;
  for (std::size_t i = 0; i < n; ++i) {
    std::string last = "name";
    last += static_cast<char>('a' + i / 26);
    last += static_cast<char>('a' + i % 26);
    out.push_back(make_author("id" + std::to_string(i), last, "a"));
  }
  return out;
}

}  // namespace

TEST_CASE("one inverted pair in twenty authors scores 18/19") {
  auto authors = distinct_sorted(20);
  // ... 6, 8, 7, 9 ...: only the middle pair is inverted.
  std::swap(authors[7], authors[8]);
  const auto counts = count_alpha_pairs(authors);
  CHECK(counts.pairs_counted == 19);
  CHECK(counts.pairs_in_order == 18);
  CHECK(*alpha_score(authors) == 18.0 / 19.0);
}

TEST_CASE("sorted, reversed and equal-key lists") {
  auto abc = named({{"Adams", "A"}, {"Baker", "B"}, {"Chen", "C"}});
  CHECK(*alpha_score(abc) == 1.0);
  std::reverse(abc.begin(), abc.end());
  CHECK(*alpha_score(abc) == 0.0);

  const auto dup = named({{"Smith", "A"}, {"Smith", "A"}, {"Young", "B"}});
  CHECK(count_alpha_pairs(dup).pairs_counted == 1);
  CHECK(*alpha_score(dup) == 1.0);

  CHECK_FALSE(alpha_score(named({{"Solo", "S"}})).has_value());
  CHECK_FALSE(alpha_score(named({{"Same", "S"}, {"same ", "s"}})).has_value());
}

TEST_CASE("order keys compare last name then initial, empty initial first") {
  CHECK(order_key(make_author("1", "Smith", "")) < order_key(make_author("2", "Smith", "A")));
  CHECK(order_key(make_author("1", "Smith", "Z")) < order_key(make_author("2", "Smithe", "A")));
  CHECK(*alpha_score(named({{"smith", "b"}, {"SMITH", "A"}})) == 0.0);
}

TEST_CASE("band boundaries") {
  CHECK(classify_alpha(1.0) == AlphaBand::CloseAlphabetical);
  CHECK(classify_alpha(0.90) == AlphaBand::CloseAlphabetical);
  CHECK(classify_alpha(0.95) == AlphaBand::CloseAlphabetical);
  CHECK(classify_alpha(0.8999999) == AlphaBand::PartialAlphabetical);
  CHECK(classify_alpha(0.80) == AlphaBand::PartialAlphabetical);
  CHECK(classify_alpha(0.6000001) == AlphaBand::PartialAlphabetical);
  CHECK(classify_alpha(0.60) == AlphaBand::CloseNonAlphabetical);
  CHECK(classify_alpha(0.50) == AlphaBand::CloseNonAlphabetical);
  CHECK(classify_alpha(0.40) == AlphaBand::CloseNonAlphabetical);
  CHECK(classify_alpha(0.39) == AlphaBand::AntiAlphabetical);
  CHECK(classify_alpha(0.0) == AlphaBand::AntiAlphabetical);
  CHECK_THROWS_AS(classify_alpha(-0.01), Error);
  CHECK_THROWS_AS(classify_alpha(1.01), Error);
  CHECK_THROWS_AS(classify_alpha(std::nan("")), Error);
}

TEST_CASE("bands partition the unit interval") {
  for (int i = 0; i <= 10000; ++i) {
    const double s = i / 10000.0;
    const AlphaBand b = classify_alpha(s);
    const int hits = (s >= 0.9) + (s > 0.6 && s < 0.9) + (s >= 0.4 && s <= 0.6) + (s < 0.4);
    REQUIRE(hits == 1);
    if (s >= 0.9) CHECK(b == AlphaBand::CloseAlphabetical);
    else if (s > 0.6) CHECK(b == AlphaBand::PartialAlphabetical);
    else if (s >= 0.4) CHECK(b == AlphaBand::CloseNonAlphabetical);
    else CHECK(b == AlphaBand::AntiAlphabetical);
  }
}

TEST_CASE("range, reversal antisymmetry and sorted completeness") {
  std::mt19937_64 rng(21);
  for (int round = 0; round < 500; ++round) {
    auto authors = distinct_sorted(2 + rng() % 40);
    std::shuffle(authors.begin(), authors.end(), rng);
    const double s = *alpha_score(authors);
    CHECK(s >= 0.0);
    CHECK(s <= 1.0);
    auto rev = authors;
    std::reverse(rev.begin(), rev.end());
    const auto fwd = count_alpha_pairs(authors);
    const auto bwd = count_alpha_pairs(rev);
    CHECK(bwd.pairs_in_order == fwd.pairs_counted - fwd.pairs_in_order);
    CHECK(*alpha_score(rev) == doctest::Approx(1.0 - s).epsilon(1e-12));

    // Repeated keys: sorting still gives exactly 1.
    std::vector<AuthorRef> repeated;
    for (std::size_t i = 0; i < authors.size(); ++i) {
      repeated.push_back(make_author("r" + std::to_string(i), "k" + std::to_string(rng() % 6), ""));
    }
    std::stable_sort(repeated.begin(), repeated.end(), [](const AuthorRef& a, const AuthorRef& b) {
      return order_key(a) < order_key(b);
    });
    if (const auto v = alpha_score(repeated)) CHECK(*v == 1.0);
  }
}

TEST_CASE("random permutations average one half") {
  std::mt19937_64 rng(2024);
  auto authors = distinct_sorted(20);
  double total = 0.0;
  for (int i = 0; i < 10000; ++i) {
    std::shuffle(authors.begin(), authors.end(), rng);
    total += *alpha_score(authors);
  }
  CHECK(total / 10000.0 == doctest::Approx(0.5).epsilon(0.04));
}

TEST_CASE("consortium averages") {
  auto sorted20 = distinct_sorted(20);
  auto one_off = sorted20;
  std::swap(one_off[3], one_off[4]);
  std::vector<std::string> ids20;
  for (const auto& a : sorted20) ids20.push_back(a.id);

  Article a = testing::article("p1", ids20);
  a.authors = sorted20;
  Article b = a;
  b.id = "p2";
  b.authors = one_off;
  Article c = a;
  c.id = "p3";
  c.authors = {make_author("solo", "x", "")};
  const Corpus corpus({a, b, c});

  const auto r = consortium_alpha(Consortium{"p1", {"p1", "p2"}, 2000, 2000}, corpus);
  CHECK(*r.alpha_mean == doctest::Approx((1.0 + 18.0 / 19.0) / 2.0).epsilon(1e-15));
  CHECK(*r.alpha_mean == doctest::Approx(0.9737).epsilon(1e-4));
  CHECK(*r.band == AlphaBand::CloseAlphabetical);

  const auto with_unscored = consortium_alpha(Consortium{"p1", {"p1", "p2", "p3"}, 2000, 2000}, corpus);
  REQUIRE(with_unscored.per_paper.size() == 3);
  CHECK_FALSE(with_unscored.per_paper[2].has_value());
  CHECK(*with_unscored.alpha_mean == *r.alpha_mean);

  const auto none = consortium_alpha(Consortium{"p3", {"p3"}, 2000, 2000}, corpus);
  CHECK_FALSE(none.alpha_mean.has_value());
  CHECK_FALSE(none.band.has_value());

  CHECK_THROWS_AS(consortium_alpha(Consortium{"zz", {"zz"}, 0, 0}, corpus), Error);

  std::ostringstream csv;
  const std::vector<Consortium> cs{{"p1", {"p1", "p3"}, 2000, 2000}};
  write_paper_alpha_csv(csv, cs, corpus);
  CHECK(csv.str().find("p1,19,19,1\n") != std::string::npos);
  CHECK(csv.str().find("p3,0,0,\n") != std::string::npos);
}
