#ifndef TLAB_ROUNDING_HPP
#define TLAB_ROUNDING_HPP

#include "tlab/montecarlo.hpp"
#include "tlab/solvers.hpp"

#include <json.hpp>

#include <optional>
#include <type_traits>

namespace tlab {

/**
 * Weight vector on H induced by a fractional cover:
 *
 *   lambda_H(x) = sum_{W in supp w, x in W, W in H} w(W)/|W|  /  normaliser,
 *
 * where the normaliser is the same sum taken over all y in H, which equals
 * the total weight of nonempty support sets inside H. Sums to 1 over H.
 */
template <class Scalar>
BasicWeightVector<Scalar> build_lambda(const BasicFractionalCover<Scalar>& w,
                                       const Subset& H) {
  Vector<Scalar> share = Vector<Scalar>::Zero(w.n());
  for (const auto& [set, weight] : w.entries()) {
    if (set.empty() || !set.is_subset_of(H) || weight == Scalar(0)) continue;
    const Scalar part = weight / Scalar(set.size());
    set.for_each([&](int x) { share(x) += part; });
  }
  const Scalar total = share.sum();
  if (!(total > Scalar(0)))
    throw InputError("host " + H.to_string() + " contains no weighted support set");
  Vector<Scalar> lambda = share / total;
  return BasicWeightVector<Scalar>(w.n(), H, std::move(lambda));
}

/// The quantities in the rounding inequality chain for one (H, S).
template <class Scalar>
struct CoverageTerms {
  Scalar mass;      // lambda_H(S)
  Scalar inside;    // sum of w(W), nonempty W in H, W in S
  Scalar outside;   // sum of w(W), W in H, W not in S
  Scalar deficit;   // sum of w(W) |W \ S| / |W| over the same W
  Scalar total;     // inside + outside
  int t = 0;        // support bound of w

  /// 1 - deficit / total; equals `mass` exactly.
  Scalar identity_rhs() const { return Scalar(1) - deficit / total; }
  /// 1 - (1/t) outside / total; upper-bounds `mass` since |W| <= t.
  Scalar size_bound() const { return Scalar(1) - outside / (Scalar(t) * total); }
  /// 1 - 1/t + inside / (t total); equals size_bound().
  Scalar closing_form() const {
    return Scalar(1) - Scalar(1) / Scalar(t) + inside / (Scalar(t) * total);
  }
};

template <class Scalar>
CoverageTerms<Scalar> coverage_terms(const BasicFractionalCover<Scalar>& w,
                                     const Subset& H, const Subset& S) {
  CoverageTerms<Scalar> c{weighted_mass(build_lambda(w, H), S), Scalar(0), Scalar(0),
                          Scalar(0), Scalar(0), w.support_bound()};
  for (const auto& [set, weight] : w.entries()) {
    if (set.empty() || !set.is_subset_of(H)) continue;
    if (set.is_subset_of(S)) {
      c.inside += weight;
    } else {
      c.outside += weight;
      c.deficit += weight * Scalar((set - S).size()) / Scalar(set.size());
    }
  }
  c.total = c.inside + c.outside;
  return c;
}

namespace detail {
template <class Scalar>
bool close(const Scalar& a, const Scalar& b) {
  if constexpr (std::is_same_v<Scalar, Rational>)
    return a == b;
  else
    return std::abs(a - b) <= 1e-9;
}
} // namespace detail

/// lambda_H(S) = 1 - [sum_{W in H, W not in S} w(W)|W \ S|/|W|] / sum_{W in H} w(W).
/// Exact for Rational, within 1e-9 for double.
template <class Scalar>
bool verify_coverage_identity(const BasicFractionalCover<Scalar>& w, const Subset& H,
                              const Subset& S) {
  const auto c = coverage_terms(w, H, S);
  return detail::close(c.mass, c.identity_rhs());
}

/// mass <= size_bound() (+ slack) and size_bound() == closing_form().
template <class Scalar>
bool verify_coverage_bound(const BasicFractionalCover<Scalar>& w, const Subset& H,
                           const Subset& S) {
  const auto c = coverage_terms(w, H, S);
  if (c.t < 1) return false;
  const Scalar slack = std::is_same_v<Scalar, Rational> ? Scalar(0) : Scalar(1e-9);
  return c.mass <= c.size_bound() + slack && detail::close(c.size_bound(), c.closing_form());
}

/// build_lambda for every member of the family.
std::vector<WeightVector> lambdas_from_cover(const FractionalCover& w,
                                             const SetSystem& family);

struct RoundingConfig {
  int s = 1;
  /// Sampling density for tower covers; defaults to p.
  std::optional<double> q;
  SampleConfig sample{0, 0, 0};
  double tol = 1e-6;
  SolverOptions solver{};
  TowerBudget budget{};
};

struct TowerRoundResult {
  double q = 0.0;
  std::vector<std::pair<std::size_t, double>> costs; // (trial, cost at q)
  std::optional<SetSystem> best_cover;
  double best_cost = 0.0;
};

/// Seeded tower covers from samples W_1..W_s ~ X_q, keeping the cheapest.
TowerRoundResult tower_round(const FractionalCover& w, const SetSystem& family, double p,
                             const RoundingConfig& cfg);

struct RoundingReport {
  double p = 0.0;
  int t = 0;
  double w_cost_at_p = 0.0;    // sum w(W) p^|W|
  double frac_cost_at_p = 0.0; // LP optimum at p
  ThresholdEstimate integral;  // p_E bracket
  ThresholdEstimate fractional; // p_f bracket
  double best_q = 0.0;
  double gap_ratio = 0.0;      // p / best_q
  double log_comparator = 0.0; // log(t + 1)
  double ratio_over_log = 0.0;
  std::optional<TowerRoundResult> towers;

  nlohmann::json to_json() const;
};

/**
 * Checks the rounding hypotheses (w covers the family, sum w(W)p^|W| <= 1/2,
 * t >= 1), then measures the largest q at which the family is q-small and
 * reports p / q against log(t+1). No constant is asserted.
 */
RoundingReport verify_main_theorem(const FractionalCover& w, const SetSystem& family,
                                   double p, const RoundingConfig& cfg = {});

} // namespace tlab

#endif // TLAB_ROUNDING_HPP
