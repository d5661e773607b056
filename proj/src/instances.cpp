#include "tlab/instances.hpp"

#include "tlab/rng.hpp"

#include <functional>
#include <unordered_set>

namespace tlab {

namespace {

/// C(n, k), saturating at `cap`.
std::uint64_t binomial_capped(int n, int k, std::uint64_t cap) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  unsigned __int128 c = 1;
  for (int i = 1; i <= k; ++i) {
    c = c * static_cast<unsigned>(n - k + i) / static_cast<unsigned>(i);
    if (c > cap) return cap;
  }
  return static_cast<std::uint64_t>(c);
}

std::vector<std::pair<int, int>> edges_of(const std::vector<int>& vertices) {
  std::vector<std::pair<int, int>> out;
  for (std::size_t a = 0; a < vertices.size(); ++a)
    for (std::size_t b = a + 1; b < vertices.size(); ++b)
      out.emplace_back(vertices[a], vertices[b]);
  return out;
}

} // namespace

int edge_index(int n, int i, int j) {
  if (i > j) std::swap(i, j);
  if (i < 0 || j >= n || i == j) throw InputError("not an edge of K_n");
  return i * (2 * n - i - 1) / 2 + (j - i - 1);
}

SetSystem gen_perfect_matchings(int n) {
  if (n < 2 || n % 2 != 0) throw InputError("perfect matchings need an even n >= 2");
  if (n > 12) throw InputError("perfect matchings limited to n <= 12");
  std::vector<Subset> members;
  std::vector<char> used(n, 0);
  Subset current;
  std::function<void()> extend = [&] {
    int i = 0;
    while (i < n && used[i]) ++i;
    if (i == n) {
      members.push_back(current);
      return;
    }
    used[i] = 1;
    for (int j = i + 1; j < n; ++j) {
      if (used[j]) continue;
      used[j] = 1;
      current.insert(edge_index(n, i, j));
      extend();
      current.erase(edge_index(n, i, j));
      used[j] = 0;
    }
    used[i] = 0;
  };
  extend();
  return SetSystem(GroundSet(n * (n - 1) / 2), std::move(members));
}

CliqueInstance gen_cliques(int n, int k) {
  if (k < 2 || k > n || n > 12) throw InputError("cliques need 2 <= k <= n <= 12");
  const GroundSet ground(n * (n - 1) / 2);
  std::vector<Subset> members;
  for_each_subset_of_size(Subset::full(n), k, [&](const Subset& vertices) {
    Subset edges;
    for (auto [i, j] : edges_of(vertices.elements())) edges.insert(edge_index(n, i, j));
    members.push_back(edges);
    return true;
  });
  SetSystem family(ground, members);
  std::vector<FractionalCover::Entry> entries;
  for (const auto& h : family.members()) entries.emplace_back(h, 1.0);
  return {family, FractionalCover(ground, std::move(entries))};
}

SetSystem gen_disjoint_blocks(int m, int k) {
  if (m < 1 || k < 1 || m * k > kMaxElements)
    throw InputError("disjoint blocks need m, k >= 1 and m*k <= " +
                     std::to_string(kMaxElements));
  std::vector<Subset> members;
  for (int b = 0; b < m; ++b) {
    Subset s;
    for (int x = 0; x < k; ++x) s.insert(b * k + x);
    members.push_back(s);
  }
  return SetSystem(GroundSet(m * k), std::move(members));
}

SetSystem gen_random_kuniform(int n, int k, int m, std::uint64_t seed) {
  const GroundSet ground(n);
  if (k < 0 || k > n) throw InputError("need 0 <= k <= n");
  if (m < 0) throw InputError("need m >= 0");
  const std::uint64_t total = binomial_capped(n, k, std::uint64_t{1} << 40);
  if (static_cast<std::uint64_t>(m) > total)
    throw InputError("m = " + std::to_string(m) + " exceeds C(n,k) = " + std::to_string(total));

  CounterRng rng(seed, "kuniform", 0);
  std::vector<Subset> members;
  if (total <= 200000) {
    std::vector<Subset> all;
    for_each_subset_of_size(Subset::full(n), k, [&](const Subset& s) {
      all.push_back(s);
      return true;
    });
    for (int i = 0; i < m; ++i) {
      const auto j = i + rng.below(all.size() - i);
      std::swap(all[i], all[j]);
      members.push_back(all[i]);
    }
  } else {
    std::unordered_set<Subset, SubsetHash> seen;
    while (static_cast<int>(members.size()) < m) {
      Subset s;
      while (s.size() < k) s.insert(static_cast<int>(rng.below(n)));
      if (seen.insert(s).second) members.push_back(s);
    }
  }
  return SetSystem(ground, std::move(members));
}

FractionalCover gen_random_fractional(int n, int t, int support, std::uint64_t seed) {
  const GroundSet ground(n);
  if (t < 1 || t > n) throw InputError("need 1 <= t <= n");
  std::uint64_t available = 0;
  for (int k = 1; k <= t; ++k) available += binomial_capped(n, k, std::uint64_t{1} << 40);
  if (support < 1 || static_cast<std::uint64_t>(support) > available)
    throw InputError("support count out of range");
  CounterRng rng(seed, "fractional", 0);
  std::unordered_set<Subset, SubsetHash> seen;
  std::vector<FractionalCover::Entry> entries;
  while (static_cast<int>(entries.size()) < support) {
    const int size = 1 + static_cast<int>(rng.below(t));
    Subset s;
    while (s.size() < size) s.insert(static_cast<int>(rng.below(n)));
    if (!seen.insert(s).second) continue;
    entries.emplace_back(s, 0.25 + 0.75 * rng.uniform());
  }
  return FractionalCover(ground, std::move(entries));
}

SetSystem build_Hw(const FractionalCover& w, HwMode mode, int max_n) {
  const int n = w.n();
  if (n > max_n)
    throw ResourceError("H_w enumeration needs 2^n subsets; n = " + std::to_string(n) +
                        " exceeds " + std::to_string(max_n));
  if (w.empty()) throw InputError("fractional cover has empty support");
  const auto covered = [&](const Subset& h) {
    return w.mass_inside(h) >= 1.0 - kTolerance;
  };
  std::vector<Subset> members;
  const std::uint64_t count = std::uint64_t{1} << n;
  for (std::uint64_t mask = 0; mask < count; ++mask) {
    Subset h;
    for (int x = 0; x < n; ++x)
      if ((mask >> x) & 1u) h.insert(x);
    if (!covered(h)) continue;
    if (mode == HwMode::minimal) {
      bool minimal = true;
      h.for_each([&](int x) {
        if (minimal && covered(h - Subset::singleton(x))) minimal = false;
      });
      if (!minimal) continue;
    }
    members.push_back(h);
  }
  return SetSystem(w.ground(), std::move(members));
}

std::optional<GeneratorKind> parse_generator_kind(const std::string& name) {
  if (name == "perfect_matchings") return GeneratorKind::perfect_matchings;
  if (name == "cliques") return GeneratorKind::cliques;
  if (name == "disjoint_blocks") return GeneratorKind::disjoint_blocks;
  if (name == "random_kuniform") return GeneratorKind::random_kuniform;
  if (name == "from_fractional") return GeneratorKind::from_fractional;
  return std::nullopt;
}

std::string to_string(GeneratorKind kind) {
  switch (kind) {
  case GeneratorKind::perfect_matchings: return "perfect_matchings";
  case GeneratorKind::cliques: return "cliques";
  case GeneratorKind::disjoint_blocks: return "disjoint_blocks";
  case GeneratorKind::random_kuniform: return "random_kuniform";
  case GeneratorKind::from_fractional: return "from_fractional";
  }
  return "unknown";
}

GeneratedInstance generate(const GeneratorSpec& spec) {
  switch (spec.kind) {
  case GeneratorKind::perfect_matchings:
    return {gen_perfect_matchings(spec.n), std::nullopt};
  case GeneratorKind::cliques: {
    auto c = gen_cliques(spec.n, spec.k);
    return {std::move(c.family), std::move(c.cover)};
  }
  case GeneratorKind::disjoint_blocks:
    return {gen_disjoint_blocks(spec.m, spec.k), std::nullopt};
  case GeneratorKind::random_kuniform:
    return {gen_random_kuniform(spec.n, spec.k, spec.m, spec.seed), std::nullopt};
  case GeneratorKind::from_fractional: {
    auto w = gen_random_fractional(spec.n, spec.t, spec.m, spec.seed);
    auto family = build_Hw(w, HwMode::minimal);
    return {std::move(family), std::move(w)};
  }
  }
  throw InputError("unknown generator kind");
}

} // namespace tlab
