#include <doctest.h>

#include "tlab/instances.hpp"

#include <set>

using namespace tlab;

TEST_SUITE("instances") {

TEST_CASE("edge indices are lexicographic") {
  CHECK(edge_index(4, 0, 1) == 0);
  CHECK(edge_index(4, 0, 3) == 2);
  CHECK(edge_index(4, 1, 2) == 3);
  CHECK(edge_index(4, 2, 3) == 5);
}

TEST_CASE("perfect matchings") {
  const int expected[] = {1, 3, 15, 105, 945};
  for (int n = 2; n <= 10; n += 2) {
    const auto f = gen_perfect_matchings(n);
    CHECK(f.n() == n * (n - 1) / 2);
    CHECK(f.size() == static_cast<std::size_t>(expected[n / 2 - 1]));
    for (const auto& m : f.members()) {
      CHECK(m.size() == n / 2);
      std::set<int> touched;
      m.for_each([&](int e) {
        for (int i = 0; i < n; ++i)
          for (int j = i + 1; j < n; ++j)
            if (edge_index(n, i, j) == e) {
              touched.insert(i);
              touched.insert(j);
            }
      });
      CHECK(static_cast<int>(touched.size()) == n);
    }
  }
  CHECK(gen_perfect_matchings(4).to_lists() ==
        std::vector<std::vector<int>>{{0, 5}, {1, 4}, {2, 3}});
  CHECK_THROWS_AS(gen_perfect_matchings(5), InputError);
  CHECK_THROWS_AS(gen_perfect_matchings(14), InputError);
}

TEST_CASE("cliques") {
  const auto c = gen_cliques(5, 3);
  CHECK(c.family.size() == 10u);
  for (const auto& m : c.family.members()) CHECK(m.size() == 3);
  CHECK(is_fractional_cover(c.cover, c.family));
  CHECK(c.cover.entries().size() == 10u);
  CHECK_THROWS_AS(gen_cliques(3, 4), InputError);
}

TEST_CASE("disjoint blocks") {
  const auto b = gen_disjoint_blocks(3, 2);
  CHECK(b.to_lists() == std::vector<std::vector<int>>{{0, 1}, {2, 3}, {4, 5}});
  CHECK(gen_disjoint_blocks(40, 4).size() == 40u);
  CHECK_THROWS_AS(gen_disjoint_blocks(65, 4), InputError);
}

TEST_CASE("random k-uniform") {
  const auto a = gen_random_kuniform(10, 3, 20, 7);
  const auto b = gen_random_kuniform(10, 3, 20, 7);
  const auto c = gen_random_kuniform(10, 3, 20, 8);
  CHECK(a.to_lists() == b.to_lists());
  CHECK(a.to_lists() != c.to_lists());
  CHECK(a.size() == 20u);
  for (const auto& m : a.members()) CHECK(m.size() == 3);
  CHECK(gen_random_kuniform(6, 3, 20, 1).size() == 20u);
  CHECK_THROWS_AS(gen_random_kuniform(6, 3, 21, 1), InputError);
}

TEST_CASE("random fractional covers") {
  const auto w = gen_random_fractional(8, 3, 6, 11);
  CHECK(w.entries().size() == 6u);
  CHECK(w.support_bound() <= 3);
  for (const auto& [set, weight] : w.entries()) {
    CHECK_FALSE(set.empty());
    CHECK(weight >= 0.25);
    CHECK(weight <= 1.0);
  }
  CHECK(gen_random_fractional(8, 3, 6, 11).entries() == w.entries());
}

TEST_CASE("build_Hw") {
  const FractionalCover half(GroundSet(2), {{Subset{0}, 0.5}, {Subset{1}, 0.5}});
  CHECK(build_Hw(half, HwMode::minimal).to_lists() == std::vector<std::vector<int>>{{0, 1}});
  CHECK(build_Hw(half, HwMode::all).to_lists() == std::vector<std::vector<int>>{{0, 1}});

  const FractionalCover w(GroundSet(4), {{Subset{0}, 1.0}, {Subset{1, 2}, 0.6}, {Subset{3}, 0.5}});
  const auto all = build_Hw(w, HwMode::all);
  const auto minimal = build_Hw(w, HwMode::minimal);
  CHECK(minimal.to_lists() == std::vector<std::vector<int>>{{0}, {1, 2, 3}});
  for (const auto& h : all.members()) {
    CHECK(w.mass_inside(h) >= 1.0 - 1e-12);
    for (int x = 0; x < 4; ++x) {
      Subset up = h;
      up.insert(x);
      CHECK(all.index_of(up) >= 0);
    }
  }
  for (const auto& h : minimal.members()) CHECK(all.index_of(h) >= 0);
  CHECK_THROWS_AS(build_Hw(FractionalCover(GroundSet(21), {{Subset{0}, 1.0}}), HwMode::all),
                  ResourceError);
}

TEST_CASE("generator dispatch") {
  CHECK(parse_generator_kind("cliques") == GeneratorKind::cliques);
  CHECK_FALSE(parse_generator_kind("wheels"));
  CHECK(to_string(GeneratorKind::random_kuniform) == "random_kuniform");
  GeneratorSpec spec;
  spec.kind = GeneratorKind::from_fractional;
  spec.n = 6;
  spec.t = 2;
  spec.m = 5;
  spec.seed = 3;
  const auto g = generate(spec);
  REQUIRE(g.cover);
  CHECK(is_fractional_cover(*g.cover, g.family));
}

} // TEST_SUITE
