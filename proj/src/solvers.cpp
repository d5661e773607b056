#include "tlab/solvers.hpp"

#include "tlab/simplex.hpp"

#include <limits>
#include <unordered_set>

namespace tlab {

namespace {

void require_probability(double p) {
  if (!(p >= 0.0 && p <= 1.0))
    throw InputError("probability " + std::to_string(p) + " outside [0,1]");
}

/// Weighted set cover data over a fixed candidate list.
struct CoverProblem {
  std::vector<Subset> cands;
  std::vector<double> cost;
  std::vector<std::vector<int>> cands_of_member;  // sorted by (cost, index)
  std::vector<std::vector<int>> members_of_cand;

  CoverProblem(const SetSystem& family, std::vector<Subset> candidates, double p)
      : cands(std::move(candidates)) {
    const std::size_t m = family.size();
    cost.resize(cands.size());
    members_of_cand.resize(cands.size());
    cands_of_member.resize(m);
    for (std::size_t j = 0; j < cands.size(); ++j) {
      cost[j] = power(p, cands[j].size());
      for (std::size_t i = 0; i < m; ++i)
        if (cands[j].is_subset_of(family[i])) {
          members_of_cand[j].push_back(static_cast<int>(i));
          cands_of_member[i].push_back(static_cast<int>(j));
        }
    }
    for (auto& list : cands_of_member)
      std::stable_sort(list.begin(), list.end(),
                       [&](int a, int b) { return cost[a] < cost[b]; });
  }
};

std::vector<int> greedy_over(const CoverProblem& prob, std::size_t members) {
  std::vector<char> covered(members, 0);
  std::size_t remaining = members;
  std::vector<int> picked;
  while (remaining > 0) {
    int best = -1;
    double best_ratio = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < prob.cands.size(); ++j) {
      std::size_t gain = 0;
      for (int i : prob.members_of_cand[j]) gain += covered[i] ? 0 : 1;
      if (gain == 0) continue;
      const double ratio = prob.cost[j] / static_cast<double>(gain);
      if (ratio < best_ratio) {
        best_ratio = ratio;
        best = static_cast<int>(j);
      }
    }
    if (best < 0) throw InputError("greedy cover: a member has no candidate");
    picked.push_back(best);
    for (int i : prob.members_of_cand[best])
      if (!covered[i]) {
        covered[i] = 1;
        --remaining;
      }
  }
  // Drop redundant picks, latest first.
  std::vector<int> count(members, 0);
  for (int j : picked)
    for (int i : prob.members_of_cand[j]) ++count[i];
  std::vector<int> kept;
  for (auto it = picked.rbegin(); it != picked.rend(); ++it) {
    const auto& mem = prob.members_of_cand[*it];
    const bool redundant =
        std::all_of(mem.begin(), mem.end(), [&](int i) { return count[i] > 1; });
    if (redundant) {
      for (int i : mem) --count[i];
    } else {
      kept.push_back(*it);
    }
  }
  return kept;
}

SetSystem cover_from(const SetSystem& family, const CoverProblem& prob,
                     const std::vector<int>& picks) {
  std::vector<Subset> sets;
  sets.reserve(picks.size());
  for (int j : picks) sets.push_back(prob.cands[j]);
  return SetSystem(family.ground(), std::move(sets));
}

SetSystem empty_cover(const SetSystem& family) {
  return SetSystem(family.ground(), {Subset{}});
}

/// Depth-first branch and bound. Branches on the uncovered member with the
/// fewest allowed candidates; in the k-th branch the first k-1 candidates of
/// that member are forbidden, so each cover is reached once per first-hit.
class BranchAndBound {
public:
  BranchAndBound(const CoverProblem& prob, std::size_t members, std::size_t max_nodes)
      : prob_(prob), members_(members), max_nodes_(max_nodes),
        count_(members, 0), forbidden_(prob.cands.size(), 0) {}

  void set_incumbent(std::vector<int> picks, double cost) {
    best_ = std::move(picks);
    best_cost_ = cost;
  }

  void run() { dfs(0.0); }

  const std::vector<int>& best() const { return best_; }
  double best_cost() const { return best_cost_; }
  std::size_t nodes() const { return nodes_; }

private:
  static constexpr double kImprove = 1e-12;
  static constexpr double kLpSlack = 1e-9;

  double lp_bound(const std::vector<int>& uncovered) const {
    std::vector<int> cols;
    std::vector<char> seen(prob_.cands.size(), 0);
    for (int i : uncovered)
      for (int j : prob_.cands_of_member[i])
        if (!forbidden_[j] && !seen[j]) {
          seen[j] = 1;
          cols.push_back(j);
        }
    Matrix<double> A = Matrix<double>::Zero(static_cast<Eigen::Index>(uncovered.size()),
                                            static_cast<Eigen::Index>(cols.size()));
    Vector<double> c(static_cast<Eigen::Index>(cols.size()));
    std::vector<int> row_of(members_, -1);
    for (std::size_t r = 0; r < uncovered.size(); ++r)
      row_of[uncovered[r]] = static_cast<int>(r);
    for (std::size_t k = 0; k < cols.size(); ++k) {
      c(static_cast<Eigen::Index>(k)) = prob_.cost[cols[k]];
      for (int i : prob_.members_of_cand[cols[k]])
        if (row_of[i] >= 0) A(row_of[i], static_cast<Eigen::Index>(k)) = 1.0;
    }
    return solve_covering_lp<double>(A, c).value;
  }

  void dfs(double cost) {
    if (++nodes_ > max_nodes_)
      throw ResourceError("branch and bound exceeded " + std::to_string(max_nodes_) +
                          " nodes");
    std::vector<int> uncovered;
    int pivot = -1;
    std::size_t pivot_options = std::numeric_limits<std::size_t>::max();
    double cheap_bound = 0.0;
    for (std::size_t i = 0; i < members_; ++i) {
      if (count_[i] > 0) continue;
      uncovered.push_back(static_cast<int>(i));
      std::size_t options = 0;
      double cheapest = std::numeric_limits<double>::infinity();
      for (int j : prob_.cands_of_member[i])
        if (!forbidden_[j]) {
          ++options;
          cheapest = std::min(cheapest, prob_.cost[j]);
        }
      if (options == 0) return;
      cheap_bound = std::max(cheap_bound, cheapest);
      if (options < pivot_options) {
        pivot_options = options;
        pivot = static_cast<int>(i);
      }
    }
    if (uncovered.empty()) {
      if (cost < best_cost_ - kImprove) {
        best_cost_ = cost;
        best_ = chosen_;
      }
      return;
    }
    if (cost + cheap_bound >= best_cost_ - kImprove) return;
    if (uncovered.size() > 1 &&
        cost + lp_bound(uncovered) - kLpSlack >= best_cost_ - kImprove)
      return;

    std::vector<int> newly_forbidden;
    for (int j : prob_.cands_of_member[pivot]) {
      if (forbidden_[j]) continue;
      chosen_.push_back(j);
      for (int i : prob_.members_of_cand[j]) ++count_[i];
      dfs(cost + prob_.cost[j]);
      for (int i : prob_.members_of_cand[j]) --count_[i];
      chosen_.pop_back();
      forbidden_[j] = 1;
      newly_forbidden.push_back(j);
    }
    for (int j : newly_forbidden) forbidden_[j] = 0;
  }

  const CoverProblem& prob_;
  std::size_t members_;
  std::size_t max_nodes_;
  std::vector<int> count_;
  std::vector<char> forbidden_;
  std::vector<int> chosen_;
  std::vector<int> best_;
  double best_cost_ = std::numeric_limits<double>::infinity();
  std::size_t nodes_ = 0;
};

bool use_exact(const SetSystem& family, std::size_t cands, LpArithmetic mode) {
  switch (mode) {
  case LpArithmetic::exact: return true;
  case LpArithmetic::floating: return false;
  case LpArithmetic::automatic: break;
  }
  return family.n() <= 10 && cands <= 256 && family.size() <= 256;
}

template <class Scalar>
CoveringLpResult<Scalar> frac_lp(const SetSystem& family,
                                 const std::vector<Subset>& cands, const Scalar& p) {
  const auto m = static_cast<Eigen::Index>(family.size());
  const auto k = static_cast<Eigen::Index>(cands.size());
  Matrix<Scalar> A = Matrix<Scalar>::Zero(m, k);
  Vector<Scalar> c(k);
  for (Eigen::Index j = 0; j < k; ++j) {
    Scalar cost(1);
    for (int e = 0; e < cands[j].size(); ++e) cost *= p;
    c(j) = cost;
    for (Eigen::Index i = 0; i < m; ++i)
      if (cands[j].is_subset_of(family[i])) A(i, j) = Scalar(1);
  }
  return solve_covering_lp<Scalar>(A, c);
}

void require_threshold_family(const SetSystem& family) {
  if (family.empty()) throw InputError("threshold of an empty family is undefined");
  for (const auto& h : family.members())
    if (h.empty()) throw InputError("threshold needs nonempty members");
}

} // namespace

std::vector<Subset> candidate_universe(const SetSystem& family, std::size_t budget) {
  std::unordered_set<Subset, SubsetHash> seen;
  seen.insert(Subset{});
  for (const auto& h : family.members()) {
    for_each_subset(h, [&](const Subset& s) {
      seen.insert(s);
      if (seen.size() > budget)
        throw ResourceError("candidate universe exceeds budget: more than " +
                            std::to_string(budget) + " subsets (member " +
                            h.to_string() + ")");
      return true;
    });
  }
  std::vector<Subset> out(seen.begin(), seen.end());
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Subset> closed_candidates(const SetSystem& family, std::size_t budget) {
  const auto universe = candidate_universe(family, budget);
  std::vector<Subset> out;
  for (const auto& w : universe) {
    if (w.empty()) {
      out.push_back(w);
      continue;
    }
    Subset closure = family.ground().all();
    for (const auto& h : family.members())
      if (w.is_subset_of(h)) closure &= h;
    if (closure == w) out.push_back(w);
  }
  return out;
}

IntegerSolution solve_int(const SetSystem& family, double p, const SolverOptions& opts) {
  require_probability(p);
  if (family.empty()) return {SetSystem(family.ground()), 0.0, p, true};

  CoverProblem prob(family, closed_candidates(family, opts.budget), p);
  BranchAndBound bnb(prob, family.size(), opts.max_nodes);

  // Incumbent: the empty set alone (cost 1), improved by greedy when cheaper.
  const auto empty_idx = static_cast<int>(
      std::find(prob.cands.begin(), prob.cands.end(), Subset{}) - prob.cands.begin());
  bnb.set_incumbent({empty_idx}, 1.0);
  const auto greedy = greedy_over(prob, family.size());
  double greedy_cost = 0.0;
  for (int j : greedy) greedy_cost += prob.cost[j];
  if (greedy_cost < 1.0 - 1e-12) bnb.set_incumbent(greedy, greedy_cost);
  bnb.run();

  SetSystem cover = cover_from(family, prob, bnb.best());
  const double cost = cover_cost(cover, p);
  return {std::move(cover), cost, p, true};
}

FractionalSolution solve_frac(const SetSystem& family, double p,
                              const SolverOptions& opts) {
  require_probability(p);
  if (family.empty())
    return {FractionalCover(family.ground(), {}), 0.0, p, false};

  const auto cands = closed_candidates(family, opts.budget);
  const bool exact = use_exact(family, cands.size(), opts.arithmetic);
  std::vector<FractionalCover::Entry> entries;
  double value = 0.0;
  if (exact) {
    const auto lp = frac_lp<Rational>(family, cands, Rational(p));
    for (std::size_t j = 0; j < cands.size(); ++j) {
      const Rational& x = lp.primal(static_cast<Eigen::Index>(j));
      if (x > 0) entries.emplace_back(cands[j], x >= 1 ? 1.0 : static_cast<double>(x));
    }
    value = static_cast<double>(lp.value);
  } else {
    const auto lp = frac_lp<double>(family, cands, p);
    for (std::size_t j = 0; j < cands.size(); ++j) {
      const double x = lp.primal(static_cast<Eigen::Index>(j));
      if (x > 1e-15) entries.emplace_back(cands[j], std::min(1.0, x));
    }
    value = lp.value;
  }
  return {FractionalCover(family.ground(), std::move(entries)), value, p, exact};
}

bool is_p_small(const SetSystem& family, double p, const SolverOptions& opts) {
  return solve_int(family, p, opts).cost <= opts.small_threshold;
}

IntegerSolution greedy_int_cover(const SetSystem& family, double p) {
  require_probability(p);
  if (family.empty()) return {SetSystem(family.ground()), 0.0, p, false};

  std::unordered_set<Subset, SubsetHash> pool(family.members().begin(),
                                              family.members().end());
  pool.insert(Subset{});
  const std::size_t m = family.size();
  if (m <= 2000)
    for (std::size_t a = 0; a < m; ++a)
      for (std::size_t b = a + 1; b < m; ++b) pool.insert(family[a] & family[b]);
  std::vector<Subset> cands(pool.begin(), pool.end());
  std::sort(cands.begin(), cands.end());

  CoverProblem prob(family, std::move(cands), p);
  const auto picks = greedy_over(prob, m);
  SetSystem cover = cover_from(family, prob, picks);
  double cost = cover_cost(cover, p);
  if (cost > 1.0) {
    cover = empty_cover(family);
    cost = 1.0;
  }
  return {std::move(cover), cost, p, false};
}

ThresholdEstimate bisect_threshold(const std::function<bool(double)>& holds, double tol) {
  if (!(tol > 0.0)) throw InputError("bisection tolerance must be positive");
  if (holds(1.0)) return {1.0, 1.0, 1.0, tol, true};
  double lo = 0.0, hi = 1.0;
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    (holds(mid) ? lo : hi) = mid;
  }
  return {0.5 * (lo + hi), lo, hi, tol, false};
}

ThresholdEstimate threshold_pE(const SetSystem& family, double tol,
                               const SolverOptions& opts) {
  require_threshold_family(family);
  return bisect_threshold([&](double p) { return is_p_small(family, p, opts); }, tol);
}

ThresholdEstimate threshold_pf(const SetSystem& family, double tol,
                               const SolverOptions& opts) {
  require_threshold_family(family);
  return bisect_threshold(
      [&](double p) { return solve_frac(family, p, opts).cost <= opts.small_threshold; },
      tol);
}

} // namespace tlab
