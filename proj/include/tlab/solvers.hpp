#ifndef TLAB_SOLVERS_HPP
#define TLAB_SOLVERS_HPP

#include "tlab/core.hpp"

#include <cstddef>
#include <functional>

namespace tlab {

enum class LpArithmetic { automatic, floating, exact };

struct SolverOptions {
  /// Cap on the number of candidate sets (the empty set plus all subsets of members).
  std::size_t budget = std::size_t{1} << 20;
  /// Cap on branch-and-bound nodes for the integer program.
  std::size_t max_nodes = 2'000'000;
  /// Cost level defining "p-small".
  double small_threshold = 0.5;
  /// automatic: exact rational pivoting when n <= 10 and the LP is small.
  LpArithmetic arithmetic = LpArithmetic::automatic;
};

struct IntegerSolution {
  SetSystem cover;
  double cost = 0.0;
  double p = 0.0;
  bool optimal = true;
};

struct FractionalSolution {
  FractionalCover weights;
  double cost = 0.0;
  double p = 0.0;
  bool exact_arithmetic = false;
};

struct ThresholdEstimate {
  double value = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  double tol = 0.0;
  /// Predicate already holds at p = 1; the bracket is [1,1].
  bool degenerate = false;
};

/// The empty set plus every subset of some member, in canonical order.
/// Throws ResourceError once the count exceeds `budget`.
std::vector<Subset> candidate_universe(const SetSystem& family, std::size_t budget);

/// Candidates equal to the intersection of all members containing them, plus
/// the empty set. Replacing any candidate by this closure keeps its coverage
/// and never raises its cost, so the optimum is unchanged.
std::vector<Subset> closed_candidates(const SetSystem& family, std::size_t budget);

IntegerSolution solve_int(const SetSystem& family, double p,
                          const SolverOptions& opts = {});
FractionalSolution solve_frac(const SetSystem& family, double p,
                              const SolverOptions& opts = {});
bool is_p_small(const SetSystem& family, double p, const SolverOptions& opts = {});

/// Greedy cost-per-coverage heuristic over members, pairwise intersections
/// and the empty set. Always a valid cover; `optimal` is false.
IntegerSolution greedy_int_cover(const SetSystem& family, double p);

/// Bisection for the largest p in [0,1] where a monotone predicate holds.
ThresholdEstimate bisect_threshold(const std::function<bool(double)>& holds,
                                   double tol);

ThresholdEstimate threshold_pE(const SetSystem& family, double tol = 1e-6,
                               const SolverOptions& opts = {});
ThresholdEstimate threshold_pf(const SetSystem& family, double tol = 1e-6,
                               const SolverOptions& opts = {});

} // namespace tlab

#endif // TLAB_SOLVERS_HPP
