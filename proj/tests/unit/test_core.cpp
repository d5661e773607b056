#include <doctest.h>

#include "../oracles.hpp"
#include "tlab/core.hpp"

using namespace tlab;

namespace {
SetSystem fam(int n, std::vector<std::vector<int>> lists) { return SetSystem::from_lists(n, lists); }
} // namespace

TEST_SUITE("core") {

TEST_CASE("subset basics and canonical order") {
  const Subset a{0, 2, 5};
  CHECK(a.size() == 3);
  CHECK(a.contains(2));
  CHECK_FALSE(a.contains(1));
  CHECK(a.min_element() == 0);
  CHECK(a.max_element() == 5);
  CHECK((a - Subset{2}) == Subset{0, 5});
  CHECK(Subset{200, 255}.size() == 2);
  // size first, then lexicographic
  CHECK(Subset{7} < Subset{0, 1});
  CHECK(Subset{0, 5} < Subset{1, 2});
  CHECK(Subset{0, 1, 9} < Subset{0, 2, 3});
  CHECK_FALSE(Subset{1} < Subset{1});
  CHECK_THROWS_AS(Subset{256}, InputError);
  CHECK_THROWS_AS(Subset{-1}, InputError);
}

TEST_CASE("k-subsets in lexicographic order") {
  std::vector<Subset> seen;
  for_each_subset_of_size(Subset{1, 3, 4, 6}, 2, [&](const Subset& s) {
    seen.push_back(s);
    return true;
  });
  REQUIRE(seen.size() == 6);
  CHECK(seen.front() == Subset{1, 3});
  CHECK(seen[1] == Subset{1, 4});
  CHECK(seen.back() == Subset{4, 6});
  CHECK(std::is_sorted(seen.begin(), seen.end()));
}

TEST_CASE("ground set and set system validation") {
  CHECK_THROWS_AS(GroundSet(0), InputError);
  CHECK_THROWS_AS(GroundSet(257), InputError);
  CHECK_THROWS_AS(fam(3, {{0, 3}}), InputError);
  const auto f = fam(4, {{2, 3}, {0}, {2, 3}, {1, 0}});
  CHECK(f.size() == 3); // deduplicated
  CHECK(f[0] == Subset{0});
  CHECK(f[1] == Subset{0, 1});
  CHECK(f[2] == Subset{2, 3});
  CHECK(f.index_of(Subset{2, 3}) == 2);
  CHECK(f.index_of(Subset{1}) == -1);
  CHECK(f.max_member_size() == 2);
}

TEST_CASE("is_cover examples") {
  const auto any = fam(4, {{0, 1, 3}, {2, 3}});
  CHECK(is_cover(SetSystem(GroundSet(4), {Subset{}}), any));
  CHECK(is_cover(fam(4, {{0, 1}, {2}}), any));
  CHECK_FALSE(is_cover(fam(3, {{0, 2}}), fam(3, {{0, 1}})));
  CHECK_THROWS_AS(is_cover(fam(3, {{0}}), fam(4, {{0}})), InputError);
}

TEST_CASE("cover_cost examples") {
  CHECK(cover_cost(SetSystem(GroundSet(3), {Subset{}}), 0.3) == doctest::Approx(1.0));
  CHECK(cover_cost(fam(6, {{0, 1}, {2, 3}, {4, 5}}), 0.5) == doctest::Approx(0.75));
  CHECK(cover_cost(fam(2, {{0}, {1}, {0, 1}}), 0.1) == doctest::Approx(0.21));
  CHECK_THROWS_AS(cover_cost(fam(2, {{0}}), 1.5), InputError);
  CHECK_THROWS_AS(cover_cost(fam(2, {{0}}), -0.1), InputError);
}

TEST_CASE("is_fractional_cover examples") {
  const GroundSet g(3);
  CHECK(is_fractional_cover(FractionalCover(g, {{Subset{}, 1.0}}), fam(3, {{0}, {1, 2}})));
  CHECK(is_fractional_cover(FractionalCover(g, {{Subset{0, 1}, 0.5}, {Subset{1, 2}, 0.5}}),
                            fam(3, {{0, 1, 2}})));
  CHECK_FALSE(is_fractional_cover(FractionalCover(g, {{Subset{0, 1}, 0.5}}), fam(3, {{0, 1}})));
  CHECK_THROWS_AS(FractionalCover(g, {{Subset{0}, 1.5}}), InputError);
  CHECK_THROWS_AS(FractionalCover(g, {{Subset{0}, 0.5}, {Subset{0}, 0.5}}), InputError);
}

TEST_CASE("weighted_mass examples") {
  Vector<double> w(4);
  w << 0.4, 0.3, 0.2, 0.1;
  const WeightVector lam(4, Subset{0, 1, 2, 3}, w);
  CHECK(weighted_mass(lam, Subset{}) == 0.0);
  CHECK(weighted_mass(lam, Subset{2, 3}) == doctest::Approx(0.3));
  const auto u = WeightVector::uniform(5, Subset{1, 2, 4});
  CHECK(weighted_mass(u, Subset{0, 1, 2, 3, 4}) == doctest::Approx(1.0));
  Vector<double> outside = Vector<double>::Zero(3);
  outside(2) = 0.5;
  CHECK_THROWS_AS(WeightVector(3, Subset{0, 1}, outside), InputError);
}

TEST_CASE("properties on random inputs") {
  for (int i = 0; i < 200; ++i) {
    CounterRng rng(11, "core-props", i);
    const int n = 2 + static_cast<int>(rng.below(8));
    const auto family = oracle::random_family(rng, n, 1 + static_cast<int>(rng.below(5)), n);
    // {∅} covers everything
    CHECK(is_cover(SetSystem(family.ground(), {Subset{}}), family));
    // cost monotone in p
    const double p1 = rng.uniform(), p2 = rng.uniform();
    CHECK(cover_cost(family, std::min(p1, p2)) <= cover_cost(family, std::max(p1, p2)) + 1e-15);
    // mass subadditive, additive on disjoint sets
    const Subset H = family[0];
    const auto lam = oracle::random_lambda(rng, n, H);
    Subset a, b;
    for (int x = 0; x < n; ++x) {
      if (rng.bernoulli(0.5)) a.insert(x);
      if (rng.bernoulli(0.5)) b.insert(x);
    }
    CHECK(weighted_mass(lam, a | b) <= weighted_mass(lam, a) + weighted_mass(lam, b) + 1e-12);
    CHECK(weighted_mass(lam, a | (b - a)) ==
          doctest::Approx(weighted_mass(lam, a) + weighted_mass(lam, b - a)));
    // raising a weight keeps a fractional cover a cover
    std::vector<FractionalCover::Entry> entries;
    for (const auto& h : family.members()) entries.emplace_back(h, 0.5 + 0.5 * rng.uniform());
    const FractionalCover w(family.ground(), entries);
    const bool before = is_fractional_cover(w, family);
    auto raised = entries;
    raised[rng.below(raised.size())].second = 1.0;
    if (before) CHECK(is_fractional_cover(FractionalCover(family.ground(), raised), family));
  }
}

} // TEST_SUITE
