#ifndef TLAB_FRAGMENTS_HPP
#define TLAB_FRAGMENTS_HPP

#include "tlab/core.hpp"

#include <optional>
#include <span>

namespace tlab {

/// A tuple of sampled sets (W_1, ..., W_s).
using SampleTuple = std::vector<Subset>;

struct CutoffResult {
  int b = 1;                 // 1-based cut position, in [1, |H|+1]
  std::vector<int> ordered;  // H by weight descending, ties by index ascending
  Subset below;              // first b-1 elements of `ordered`
  Subset at_or_above;        // the remaining suffix
};

/**
 * Smallest b whose suffix S = {h_b, ...} of the weight-ordered host
 * satisfies lambda(W & S) >= lambda(S) / 2. The empty suffix (b = |H|+1)
 * always qualifies.
 */
CutoffResult cutoff(const Subset& W, const Subset& H, const WeightVector& lambda);

/// The iterated cutoff procedure: H_1 = H, R_i = (H_i)_{<b_i},
/// H_{i+1} = (H_i)_{>=b_i} \ W_i.
struct ResidualTrace {
  SampleTuple samples;
  std::vector<int> b;
  std::vector<Subset> residuals; // R_1..R_s
  std::vector<Subset> chain;     // H_1..H_{s+1}

  Subset residual_union() const;
};

ResidualTrace residual_trace(std::span<const Subset> samples, const Subset& H,
                             const WeightVector& lambda);

/// A feasibility witness (b, W, H) of a tuple Z for a size vector t, with
/// the trace of (W, H) attached.
struct Witness {
  std::size_t member = 0; // index of H in the family
  Subset host;
  ResidualTrace trace;    // trace.samples = W-hat, trace.b = b-hat

  const std::vector<int>& b() const { return trace.b; }
  const SampleTuple& samples() const { return trace.samples; }
  const std::vector<Subset>& residuals() const { return trace.residuals; }
};

/**
 * First witness of the t-feasibility of Z in a fixed enumeration: members
 * in family order, then W_1, ..., W_s (W_1 outermost), each ranging over the
 * (|Z_i| - t_i)-subsets of Z_i in lexicographic order. Absent iff Z is not
 * t-feasible.
 */
std::optional<Witness> find_witness(std::span<const Subset> Z, std::span<const int> t,
                                    const SetSystem& family,
                                    std::span<const WeightVector> lambdas);

struct TowerBudget {
  int max_host = 8;
  int max_rounds = 3;
  std::size_t max_family = 32;
};

struct TowerCertificate {
  SampleTuple samples;          // W
  Subset host;                  // H
  std::vector<Subset> fragments; // T
  std::vector<Subset> unions;    // Z, Z_i = T_i | W_i
  std::vector<int> sizes;        // t
  Witness witness;

  Subset fragment_union() const;
  int u() const;
};

/**
 * The minimum tower of fragments of (W, H): fragments T_i in H \ W_i,
 * pairwise disjoint, with lexicographically smallest size vector such that
 * Z = (T_i | W_i) is t-feasible. Ties in size are broken by the
 * enumeration order (T_1 outermost, canonical subset order).
 * Throws ResourceError beyond `budget`, InputError if H is not a member.
 */
TowerCertificate minimum_tower(std::span<const Subset> samples, const Subset& H,
                               const SetSystem& family,
                               std::span<const WeightVector> lambdas,
                               const TowerBudget& budget = {});

/// The always-valid tower T_i = R_i(W, H) \ W_i.
std::vector<Subset> fallback_tower(std::span<const Subset> samples, const Subset& H,
                                   const WeightVector& lambda);

/// {union of T(W, H) : H in family}, deduplicated. Always a cover of the family.
SetSystem tower_cover(std::span<const Subset> samples, const SetSystem& family,
                      std::span<const WeightVector> lambdas,
                      const TowerBudget& budget = {});

struct DecodedTower {
  SampleTuple samples;
  std::vector<Subset> fragments;
};

/// Recovers (W, T) from (Z, t, U) through the canonical witness of (Z, t):
/// T_i = U & R_i(W-hat, H-hat), W_i = Z_i \ T_i.
DecodedTower decode_fragments(std::span<const Subset> Z, std::span<const int> t,
                              const Subset& U, const SetSystem& family,
                              std::span<const WeightVector> lambdas);

/// T_i lies inside the witness residual R_i and covers at least half of it.
bool verify_key_property(const TowerCertificate& cert);

/// Separate verdicts for one certificate.
struct TowerAudit {
  bool fragments_valid = false; // T_i in H \ W_i, pairwise disjoint, Z_i = T_i | W_i
  bool witness_valid = false;   // the witness reproduces Z with sizes t
  bool fallback_valid = false;  // (R_i \ W_i) is itself a feasible tower
  bool size_not_above_fallback = false;
  bool containment = false;     // T_i in R-hat_i
  bool half_size = false;       // 2|T_i| >= |R-hat_i|
  bool round_trip = false;      // decoding (Z, t, union T) returns (W, T)
};

TowerAudit audit_tower(const TowerCertificate& cert, const SetSystem& family,
                       std::span<const WeightVector> lambdas);

} // namespace tlab

#endif // TLAB_FRAGMENTS_HPP
