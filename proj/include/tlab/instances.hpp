#ifndef TLAB_INSTANCES_HPP
#define TLAB_INSTANCES_HPP

#include "tlab/core.hpp"

#include <cstdint>
#include <optional>
#include <string>

namespace tlab {

/// Index of edge {i, j}, i < j, in the lexicographic order of the edges of K_n.
int edge_index(int n, int i, int j);

/// Ground set = edges of K_n; members = all perfect matchings. n even, 2 <= n <= 12.
SetSystem gen_perfect_matchings(int n);

struct CliqueInstance {
  SetSystem family;
  FractionalCover cover; // weight 1 on every member
};

/// Edge sets of all k-cliques of K_n with the companion cover. 2 <= k <= n <= 12.
CliqueInstance gen_cliques(int n, int k);

/// m pairwise-disjoint blocks of k consecutive elements. m k <= kMaxElements.
SetSystem gen_disjoint_blocks(int m, int k);

/// m distinct uniformly random k-subsets of [0, n), deterministic per seed.
SetSystem gen_random_kuniform(int n, int k, int m, std::uint64_t seed);

/// `support` distinct random nonempty sets of size <= t with weights in
/// [1/4, 1]; deterministic per seed. Total weight is at least 1 when support >= 4.
FractionalCover gen_random_fractional(int n, int t, int support, std::uint64_t seed);

enum class HwMode { all, minimal };

/// H_w = {H : sum_{W in H} w(W) >= 1}; `minimal` keeps inclusion-minimal members.
SetSystem build_Hw(const FractionalCover& w, HwMode mode, int max_n = 20);

enum class GeneratorKind {
  perfect_matchings,
  cliques,
  disjoint_blocks,
  random_kuniform,
  from_fractional
};

std::optional<GeneratorKind> parse_generator_kind(const std::string& name);
std::string to_string(GeneratorKind kind);

struct GeneratorSpec {
  GeneratorKind kind = GeneratorKind::perfect_matchings;
  int n = 4;
  int k = 2;
  int m = 1;
  int t = 2;
  std::uint64_t seed = 0;
};

struct GeneratedInstance {
  SetSystem family;
  std::optional<FractionalCover> cover;
};

GeneratedInstance generate(const GeneratorSpec& spec);

} // namespace tlab

#endif // TLAB_INSTANCES_HPP
