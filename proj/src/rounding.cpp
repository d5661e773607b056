#include "tlab/rounding.hpp"

#include <cmath>

namespace tlab {

std::vector<WeightVector> lambdas_from_cover(const FractionalCover& w,
                                             const SetSystem& family) {
  std::vector<WeightVector> out;
  out.reserve(family.size());
  for (const auto& h : family.members()) out.push_back(build_lambda(w, h));
  return out;
}

TowerRoundResult tower_round(const FractionalCover& w, const SetSystem& family, double p,
                             const RoundingConfig& cfg) {
  if (!is_fractional_cover(w, family))
    throw InputError("tower rounding needs a fractional cover of the family");
  TowerRoundResult out;
  out.q = cfg.q.value_or(p);
  if (!(out.q >= 0.0 && out.q <= 1.0)) throw InputError("sampling density outside [0,1]");
  const auto lambdas = lambdas_from_cover(w, family);

  std::vector<std::optional<SetSystem>> covers(cfg.sample.trials);
  const auto costs = run_trials(cfg.sample.trials, cfg.sample.threads, [&](std::size_t i) {
    CounterRng rng(cfg.sample.seed, "tower-round", i);
    const auto samples = sample_tuple(family.n(), out.q, cfg.s, rng);
    covers[i] = tower_cover(samples, family, lambdas, cfg.budget);
    return cover_cost(*covers[i], out.q);
  });
  for (std::size_t i = 0; i < costs.size(); ++i) {
    if (!is_cover(*covers[i], family))
      throw std::logic_error("tower cover failed to cover the family");
    out.costs.emplace_back(i, costs[i]);
    if (!out.best_cover || costs[i] < out.best_cost) {
      out.best_cover = covers[i];
      out.best_cost = costs[i];
    }
  }
  return out;
}

nlohmann::json RoundingReport::to_json() const {
  const auto bracket = [](const ThresholdEstimate& e) {
    return nlohmann::json{{"value", e.value}, {"lo", e.lo}, {"hi", e.hi},
                          {"tol", e.tol}, {"degenerate", e.degenerate}};
  };
  nlohmann::json j = {{"p", p},
                      {"t", t},
                      {"w_cost_at_p", w_cost_at_p},
                      {"frac_cost_at_p", frac_cost_at_p},
                      {"p_E", bracket(integral)},
                      {"p_f", bracket(fractional)},
                      {"best_q", best_q},
                      {"gap_ratio", gap_ratio},
                      {"log_comparator", log_comparator},
                      {"gap_over_log", ratio_over_log}};
  if (towers) {
    j["tower_q"] = towers->q;
    auto& list = j["tower_cover_costs"] = nlohmann::json::array();
    for (const auto& [trial, cost] : towers->costs)
      list.push_back({{"trial", trial}, {"cost", cost}});
    if (towers->best_cover) {
      j["best_tower_cover"] = towers->best_cover->to_lists();
      j["best_tower_cost"] = towers->best_cost;
    }
  }
  return j;
}

RoundingReport verify_main_theorem(const FractionalCover& w, const SetSystem& family,
                                   double p, const RoundingConfig& cfg) {
  if (!(p > 0.0 && p <= 1.0)) throw InputError("p must lie in (0,1]");
  RoundingReport r;
  r.p = p;
  r.t = w.support_bound();
  if (r.t < 1) throw InputError("fractional cover must have a nonempty support set");
  if (!is_fractional_cover(w, family))
    throw InputError("w is not a fractional cover of the family");
  r.w_cost_at_p = w.cost(p);
  if (r.w_cost_at_p > 0.5 + kTolerance)
    throw InputError("w is not fractionally p-small: sum w(W) p^|W| = " +
                     std::to_string(r.w_cost_at_p));

  r.frac_cost_at_p = solve_frac(family, p, cfg.solver).cost;
  r.integral = threshold_pE(family, cfg.tol, cfg.solver);
  r.fractional = threshold_pf(family, cfg.tol, cfg.solver);
  r.best_q = r.integral.lo;
  if (!(r.best_q > 0.0))
    throw InputError("p_E is below the bisection tolerance; lower tol");
  r.gap_ratio = p / r.best_q;
  r.log_comparator = std::log(r.t + 1.0);
  r.ratio_over_log = r.gap_ratio / r.log_comparator;
  if (cfg.sample.trials > 0) r.towers = tower_round(w, family, p, cfg);
  return r;
}

} // namespace tlab
