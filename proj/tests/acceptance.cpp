// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.
#include "oracles.hpp"

#include "tlab/fragments.hpp"
#include "tlab/instances.hpp"
#include "tlab/montecarlo.hpp"
#include "tlab/rounding.hpp"
#include "tlab/solvers.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>

using namespace tlab;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

std::vector<WeightVector> uniform_lambdas_of(const SetSystem& family) {
  return uniform_lambdas(family);
}

// 1 ---------------------------------------------------------------------------
Outcome solver_exactness(std::vector<SetSystem>& families) {
  const auto t0 = Clock::now();
  std::size_t cost_mismatch = 0, invalid = 0, duality = 0, checks = 0;
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    CounterRng rng(1, "acceptance-solvers", i);
    const int n = 3 + static_cast<int>(rng.below(6));
    const int m = 1 + static_cast<int>(rng.below(10));
    const auto family = oracle::random_family(rng, n, m, n);
    families.push_back(family);
    for (double p : {0.05, 0.2 + 0.6 * rng.uniform(), 0.9}) {
      ++checks;
      const auto sol = solve_int(family, p);
      const double truth = oracle::min_cover_cost(family, p);
      worst = std::max(worst, std::abs(sol.cost - truth));
      if (std::abs(sol.cost - truth) > 1e-12) ++cost_mismatch;
      if (!sol.optimal || !is_cover(sol.cover, family) ||
          std::abs(cover_cost(sol.cover, p) - sol.cost) > 1e-12)
        ++invalid;
      if (solve_frac(family, p).cost > sol.cost + 1e-9) ++duality;
    }
  }
  const double secs = since(t0);
  Outcome o;
  o.pass = cost_mismatch == 0 && invalid == 0 && duality == 0 && secs < 60.0;
  o.detail = fmt("%zu solves on 50 families; cost mismatches %zu (max |diff| %.1e), "
                 "invalid covers %zu, frac > int %zu; %.1f s (limit 60)",
                 checks, cost_mismatch, worst, invalid, duality, secs);
  return o;
}

// 2 ---------------------------------------------------------------------------
Outcome threshold_values(const std::vector<SetSystem>& random_families) {
  const double tol = 1e-8;
  const auto k4 = gen_perfect_matchings(4);
  const auto singles = gen_disjoint_blocks(50, 1);
  const auto pe_k4 = threshold_pE(k4, tol);
  const auto pe_s = threshold_pE(singles, tol);
  const double err_k4 = std::abs(pe_k4.value - 1.0 / std::sqrt(6.0));
  const double err_s = std::abs(pe_s.value - 0.01);

  std::vector<SetSystem> suite = {k4, singles, gen_perfect_matchings(6),
                                  gen_disjoint_blocks(40, 4), gen_cliques(5, 3).family};
  suite.insert(suite.end(), random_families.begin(), random_families.end());
  std::size_t order_fail = 0;
  double worst = 0.0;
  for (const auto& f : suite) {
    const double pe = threshold_pE(f, 1e-6).value;
    const double pf = threshold_pf(f, 1e-6).value;
    worst = std::max(worst, pe - pf);
    if (pf < pe - 1e-9) ++order_fail;
  }
  Outcome o;
  o.pass = err_k4 <= 1e-5 && err_s <= 1e-6 && order_fail == 0;
  o.detail = fmt("p_E(K4 matchings) = %.8f (|err| %.1e, limit 1e-5); p_E(50 singletons) = "
                 "%.9f (|err| %.1e, limit 1e-6); p_f < p_E - 1e-9 on %zu/%zu instances "
                 "(max p_E - p_f %.1e)",
                 pe_k4.value, err_k4, pe_s.value, err_s, order_fail, suite.size(), worst);
  return o;
}

// 3 ---------------------------------------------------------------------------
Outcome cutoff_suite() {
  const auto t0 = Clock::now();
  std::size_t half = 0, mismatch = 0, minimality = 0;
  const int trials = 10000;
  for (int i = 0; i < trials; ++i) {
    CounterRng rng(3, "acceptance-cutoff", i);
    const int n = 12;
    Subset H;
    const int size = 1 + static_cast<int>(rng.below(12));
    while (H.size() < size) H.insert(static_cast<int>(rng.below(n)));
    const auto lambda = oracle::random_lambda(rng, n, H);
    const Subset W = sample_subset(n, rng.uniform(), rng);
    const auto cut = cutoff(W, H, lambda);
    if (2 * (cut.below & W).size() > cut.below.size()) ++half;
    const auto ref = oracle::cutoff(W, H, lambda);
    if (ref.b != cut.b || ref.below != cut.below) ++mismatch;
    // no earlier suffix qualifies
    for (int b = 1; b < cut.b; ++b) {
      double inside = 0, total = 0;
      for (std::size_t j = b - 1; j < cut.ordered.size(); ++j) {
        total += lambda(cut.ordered[j]);
        if (W.contains(cut.ordered[j])) inside += lambda(cut.ordered[j]);
      }
      if (inside >= 0.5 * total - 1e-12) {
        ++minimality;
        break;
      }
    }
  }
  const double secs = since(t0);
  Outcome o;
  o.pass = half == 0 && mismatch == 0 && minimality == 0 && secs < 10.0;
  o.detail = fmt("%d triples; |H_<b & W| > |H_<b|/2 in %zu; cutoff vs reference mismatches %zu; "
                 "minimality failures %zu; %.2f s (limit 10)",
                 trials, half, mismatch, minimality, secs);
  return o;
}

// 4 ---------------------------------------------------------------------------
Outcome tower_suite() {
  const auto t0 = Clock::now();
  struct Counter {
    const char* name;
    std::size_t bad = 0;
  };
  Counter found{"minimum_tower failed"}, fallback{"fallback invalid"},
      lexmin{"lex-min differs from exhaustive"}, contain{"containment"}, halfsize{"half-size"},
      encoding{"sum |R-hat| > 2u"}, cover{"tower_cover not a cover"}, roundtrip{"round-trip"},
      wellformed{"malformed certificate"};
  std::size_t towers = 0, covers = 0;
  for (int i = 0; i < 1000; ++i) {
    CounterRng rng(4, "acceptance-towers", i);
    const int n = 7;
    const int m = 1 + static_cast<int>(rng.below(8));
    const auto family = oracle::random_family(rng, n, m, 6);
    std::vector<WeightVector> lambdas;
    for (const auto& h : family.members()) lambdas.push_back(oracle::random_lambda(rng, n, h));
    const int s = 1 + static_cast<int>(rng.below(2));
    const auto W = sample_tuple(n, 0.15 + 0.35 * rng.uniform(), s, rng);

    for (const auto& h : family.members()) {
      ++towers;
      std::optional<TowerCertificate> cert;
      try {
        cert = minimum_tower(W, h, family, lambdas);
      } catch (const std::exception&) {
        ++found.bad;
        continue;
      }
      const auto a = audit_tower(*cert, family, lambdas);
      if (!a.fragments_valid || !a.witness_valid) ++wellformed.bad;
      if (!a.fallback_valid || !a.size_not_above_fallback) ++fallback.bad;
      if (!a.containment) ++contain.bad;
      if (!a.half_size) ++halfsize.bad;
      if (!a.round_trip) ++roundtrip.bad;
      int residual_total = 0;
      for (const auto& r : cert->witness.residuals()) residual_total += r.size();
      if (residual_total > 2 * cert->u()) ++encoding.bad;
      if (oracle::min_tower_sizes(W, h, family, lambdas) != cert->sizes) ++lexmin.bad;
    }
    ++covers;
    if (!is_cover(tower_cover(W, family, lambdas), family)) ++cover.bad;
  }
  const double secs = since(t0);
  Outcome o;
  std::ostringstream os;
  os << towers << " towers on 1000 instances (" << covers << " covers); violations:";
  for (const Counter* c : {&found, &wellformed, &fallback, &lexmin, &contain, &halfsize,
                           &encoding, &cover, &roundtrip}) {
    os << ' ' << c->name << ' ' << c->bad << ';';
    if (c->bad) o.pass = false;
  }
  os << fmt(" %.1f s (limit 300)", secs);
  if (secs >= 300.0) o.pass = false;
  o.detail = os.str();
  return o;
}

// 5 ---------------------------------------------------------------------------
Outcome bad_nonempty() {
  std::size_t bad_tuples = 0, violations = 0, draws = 0;
  for (int i = 0; bad_tuples < 1000 && i < 100000; ++i) {
    CounterRng rng(5, "acceptance-bad", i);
    const int n = 6;
    const auto family = oracle::random_family(rng, n, 1 + static_cast<int>(rng.below(6)), 5);
    std::vector<WeightVector> lambdas;
    for (const auto& h : family.members()) lambdas.push_back(oracle::random_lambda(rng, n, h));
    const int s = 1 + static_cast<int>(rng.below(2));
    const auto W = sample_tuple(n, 0.1 + 0.3 * rng.uniform(), s, rng);
    ++draws;
    // badness recomputed by hand
    Subset all;
    for (const auto& w : W) all |= w;
    bool bad = true;
    for (const auto& lam : lambdas) {
      double mass = 0;
      all.for_each([&](int x) { mass += lam(x); });
      if (mass >= 1.0 - std::ldexp(1.0, -s) - 1e-12) bad = false;
    }
    if (bad != is_bad(W, family, lambdas, s)) ++violations;
    if (!bad) continue;
    ++bad_tuples;
    const bool empty_tower_feasible =
        oracle::feasible(W, std::vector<int>(s, 0), family, lambdas);
    if (empty_tower_feasible || !bad_implies_nonempty_check(W, family, lambdas, s)) ++violations;
  }
  Outcome o;
  o.pass = bad_tuples >= 1000 && violations == 0;
  o.detail = fmt("%zu bad tuples from %zu draws; violations of u > 0: %zu", bad_tuples, draws,
                 violations);
  return o;
}

// 6 ---------------------------------------------------------------------------
Outcome key_lemma() {
  struct Case {
    std::string name;
    SetSystem family;
    std::vector<WeightVector> lambdas;
    double p;
    int s;
  };
  std::vector<Case> cases;
  {
    const auto f = SetSystem::from_lists(2, {{0, 1}});
    cases.push_back({"{{0,1}} p=0.05 s=1", f, uniform_lambdas_of(f), 0.05, 1});
    const auto k4 = gen_perfect_matchings(4);
    cases.push_back({"K4 p=1/32 s=1", k4, uniform_lambdas_of(k4), 1.0 / 32, 1});
    cases.push_back({"K4 p=1/20 s=2", k4, uniform_lambdas_of(k4), 1.0 / 20, 2});
  }
  for (int i = 0; i < 4; ++i) {
    CounterRng rng(6, "acceptance-key-instances", i);
    const int n = 5 + (i % 2);
    const auto f = oracle::random_family(rng, n, 2 + static_cast<int>(rng.below(4)), 4);
    std::vector<WeightVector> lambdas;
    for (const auto& h : f.members()) lambdas.push_back(oracle::random_lambda(rng, n, h));
    cases.push_back({fmt("random#%d n=%d", i, n), f, lambdas, i < 2 ? 1.0 / 16 : 1.0 / 40,
                     1 + (i % 2)});
  }

  Outcome o;
  std::ostringstream os;
  std::size_t above = 0, off = 0;
  for (std::size_t c = 0; c < cases.size(); ++c) {
    const auto& k = cases[c];
    const auto report = estimate_key_lemma(k.family, k.lambdas, k.p, k.s, {60 + c, 10000, 0});
    const double q = 16 * k.p;
    const auto f = [&](const std::vector<Subset>& W) {
      return key_lemma_integrand(W, k.family, k.lambdas, k.p);
    };
    const double mean = oracle::expectation(k.family.n(), q, k.s, f);
    const double second = oracle::expectation(k.family.n(), q, k.s, [&](const auto& W) {
      const double v = f(W);
      return v * v;
    });
    const double se_exact = std::sqrt(std::max(0.0, second - mean * mean) / report.trials);
    const bool bound_ok = report.estimate <= 1.0 / 3.0 + 3.0 * report.std_error;
    const bool match_ok = std::abs(report.estimate - mean) <= 3.0 * se_exact + 1e-15;
    if (!bound_ok) ++above;
    if (!match_ok) ++off;
    os << (c ? "; " : "") << k.name << fmt(": mc %.5f+-%.5f exact %.5f", report.estimate,
                                           report.std_error, mean);
  }
  o.pass = above == 0 && off == 0;
  o.detail = fmt("%zu instances, 10^4 trials; above 1/3+3se: %zu; off the exhaustive oracle by "
                 "> 3se: %zu [",
                 cases.size(), above, off) +
             os.str() + "]";
  return o;
}

// 7 ---------------------------------------------------------------------------
Outcome amplified_success() {
  std::ostringstream os;
  std::size_t checks = 0, failures = 0, trivial = 0;
  const std::size_t trials = 10000;

  const auto run = [&](const std::string& name, const SetSystem& family,
                       const std::vector<WeightVector>& lambdas, double p, int s, double alpha,
                       const std::function<double(double)>& closed_form, std::uint64_t seed) {
    const auto not_small = solve_int(family, p);
    const auto r = estimate_amplified_success(family, lambdas, p, s, not_small,
                                              {seed, trials, 0}, alpha);
    if (r.clamped) {
      ++trivial;
      os << name << fmt(" s=%d alpha=%g: clamped, trivial; ", s, alpha);
      return;
    }
    const double cf = closed_form(r.density);
    const double se_cf = std::sqrt(cf * (1.0 - cf) / trials);
    const bool match = std::abs(r.estimate - cf) <= 3.0 * std::max(se_cf, r.std_error) + 1e-12;
    const bool third = r.estimate >= 1.0 / 3.0 - 3.0 * r.std_error;
    ++checks;
    // the 1/3 guarantee is claimed at alpha = 16 only
    if (!match || (alpha == 16.0 && !third)) ++failures;
    os << name
       << fmt(" s=%d alpha=%g q=%.4f: freq %.5f+-%.5f closed form %.5f%s; ", s, alpha, r.density,
              r.estimate, r.std_error, cf, third ? "" : " (below 1/3)");
  };

  const auto singles = gen_disjoint_blocks(50, 1);
  const auto ls = uniform_lambdas_of(singles);
  const double p_singles = 1.05 * threshold_pE(singles, 1e-9).value;
  for (int s : {1, 2})
    run("50 singletons", singles, ls, p_singles, s, 16.0,
        [](double q) { return 1.0 - std::pow(1.0 - q, 50); }, 70 + s);

  const auto blocks = gen_disjoint_blocks(40, 4);
  const auto lb = uniform_lambdas_of(blocks);
  const double p_blocks = 1.05 * threshold_pE(blocks, 1e-9).value;
  for (int s : {1, 2}) {
    const int need = static_cast<int>(std::ceil(4.0 * (1.0 - std::ldexp(1.0, -s)) - 1e-12));
    const auto cf = [need](double q) {
      return 1.0 - std::pow(1.0 - oracle::binomial_tail(4, q, need), 40);
    };
    for (double alpha : {16.0, 8.0, 4.0, 2.0, 1.0})
      run("40x4 blocks", blocks, lb, p_blocks, s, alpha, cf, static_cast<std::uint64_t>(700 + s * 10 + alpha));
  }
  Outcome o;
  o.pass = failures == 0 && checks > 0;
  o.detail = fmt("%zu non-clamped runs, %zu failures, %zu clamped (excluded); p_singles=%.5f "
                 "p_blocks=%.5f [",
                 checks, failures, trivial, p_singles, p_blocks) +
             os.str() + "]";
  return o;
}

// 8 ---------------------------------------------------------------------------
Outcome union_distribution() {
  std::size_t checks = 0, off = 0;
  double worst = 0.0;
  for (int s : {1, 2, 3}) {
    const auto u = union_inclusion(10, 0.1, s, {80 + static_cast<std::uint64_t>(s), 10000, 0});
    for (double f : u.frequency) {
      ++checks;
      const double z = std::abs(f - u.expected) / u.std_error;
      worst = std::max(worst, z);
      if (z > 3.0) ++off;
    }
  }
  Outcome o;
  o.pass = off == 0;
  o.detail = fmt("%zu per-element frequencies (n=10, q=0.1, s=1..3, 10^4 trials); beyond 3se: "
                 "%zu; max |z| %.2f",
                 checks, off, worst);
  return o;
}

// 9 ---------------------------------------------------------------------------
Outcome coverage_identity() {
  std::size_t identity = 0, bound = 0, sums = 0, exact_norm = 0;
  double worst_sum = 0.0;
  for (int i = 0; i < 1000; ++i) {
    CounterRng rng(9, "acceptance-coverage", i);
    const int n = 3 + static_cast<int>(rng.below(8));
    const int support = 1 + static_cast<int>(rng.below(6));
    std::vector<RationalFractionalCover::Entry> exact;
    std::vector<FractionalCover::Entry> approx;
    std::vector<Subset> seen;
    while (static_cast<int>(seen.size()) < support) {
      Subset w;
      const int size = 1 + static_cast<int>(rng.below(3));
      while (w.size() < size) w.insert(static_cast<int>(rng.below(n)));
      if (std::find(seen.begin(), seen.end(), w) != seen.end()) continue;
      seen.push_back(w);
      const int k = 1 + static_cast<int>(rng.below(24));
      exact.emplace_back(w, Rational(k, 24));
      approx.emplace_back(w, k / 24.0);
    }
    const RationalFractionalCover wr(GroundSet(n), exact);
    const FractionalCover wd(GroundSet(n), approx);
    Subset H = seen[rng.below(seen.size())] | sample_subset(n, 0.4, rng);
    const Subset S = sample_subset(n, rng.uniform(), rng);
    if (!verify_coverage_identity(wr, H, S)) ++identity;
    if (!verify_coverage_bound(wr, H, S)) ++bound;
    if (build_lambda(wr, H).total() != Rational(1)) ++exact_norm;
    const double total = build_lambda(wd, H).total();
    worst_sum = std::max(worst_sum, std::abs(total - 1.0));
    if (std::abs(total - 1.0) > 1e-12) ++sums;
  }
  Outcome o;
  o.pass = identity == 0 && bound == 0 && sums == 0 && exact_norm == 0;
  o.detail = fmt("1000 rational (w,H,S); identity failures %zu; bound-chain failures %zu; exact "
                 "normalisation failures %zu; float sums off by > 1e-12: %zu (max %.1e)",
                 identity, bound, exact_norm, sums, worst_sum);
  return o;
}

// 10 --------------------------------------------------------------------------
Outcome rounding_report() {
  const auto t0 = Clock::now();
  std::size_t completed = 0, zero_q = 0, infinite = 0, order = 0;
  double worst = 0.0;
  std::ostringstream os;
  for (int i = 0; i < 20; ++i) {
    CounterRng rng(10, "acceptance-rounding", i);
    const int n = 6 + static_cast<int>(rng.below(5));
    const int t = 1 + i % 3;
    const int support = 4 + static_cast<int>(rng.below(4));
    const auto w = gen_random_fractional(n, t, support, 1000 + i);
    const auto family = build_Hw(w, HwMode::minimal);
    const double pf = threshold_pf(family, 1e-6).value;
    const double pw =
        bisect_threshold([&](double p) { return w.cost(p) <= 0.5; }, 1e-9).lo;
    const double p = std::min(pf, pw) / 1.05;
    try {
      const auto r = verify_main_theorem(w, family, p);
      ++completed;
      if (!(r.best_q > 0.0)) ++zero_q;
      if (!std::isfinite(r.gap_ratio)) ++infinite;
      if (r.integral.value > r.fractional.value + 1e-9) ++order;
      worst = std::max(worst, r.ratio_over_log);
      os << fmt("%s(t=%d,|F|=%zu,gap %.3f)", i ? " " : "", r.t, family.size(), r.gap_ratio);
    } catch (const std::exception& e) {
      os << (i ? " " : "") << "error: " << e.what();
    }
  }
  Outcome o;
  o.pass = completed == 20 && zero_q == 0 && infinite == 0 && order == 0;
  o.detail = fmt("%zu/20 reports completed; best_q <= 0: %zu; non-finite gap: %zu; p_E > p_f: "
                 "%zu; max gap_ratio/log(t+1) = %.4f; %.1f s [",
                 completed, zero_q, infinite, order, worst, since(t0)) +
             os.str() + "]";
  return o;
}

// 11 --------------------------------------------------------------------------
Outcome sharpness() {
  const auto t0 = Clock::now();
  std::size_t off = 0;
  std::ostringstream os;
  for (int s : {1, 2, 3}) {
    const auto r = sharpness_demo(100, s, {110 + static_cast<std::uint64_t>(s), 10000, 0});
    const double cf = 100.0 * std::pow(1.0 - s / 100.0, 99);
    const bool ok = std::abs(r.estimate - cf) <= 3.0 * r.std_error;
    if (!ok) ++off;
    os << fmt("%ss=%d: %.4f+-%.4f vs %.4f", s == 1 ? "" : "; ", s, r.estimate, r.std_error, cf);
  }
  const double secs = since(t0);
  Outcome o;
  o.pass = off == 0 && secs < 30.0;
  o.detail = fmt("mismatches beyond 3se: %zu; %.1f s (limit 30) [", off, secs) + os.str() + "]";
  return o;
}

} // namespace

int main() {
  std::vector<SetSystem> random_families;
  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "solver exactness", [&] { return solver_exactness(random_families); }},
      {2, "threshold values", [&] { return threshold_values(random_families); }},
      {3, "cutoff half-bound", cutoff_suite},
      {4, "tower suite", tower_suite},
      {5, "bad tuples have nonempty towers", bad_nonempty},
      {6, "key expectation bound", key_lemma},
      {7, "amplified selector success", amplified_success},
      {8, "union of samples distribution", union_distribution},
      {9, "coverage identity", coverage_identity},
      {10, "rounding report", rounding_report},
      {11, "isolated-vertex sharpness", sharpness},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    if (!o.pass) ++failed;
    std::printf("%s  #%d %s: %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - failed, criteria.size());
  return failed ? 1 : 0;
}
