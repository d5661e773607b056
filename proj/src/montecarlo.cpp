#include "tlab/montecarlo.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <sstream>

namespace tlab {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

void require_probability(double p, const char* what) {
  if (!(p >= 0.0 && p <= 1.0))
    throw InputError(std::string(what) + " = " + std::to_string(p) + " outside [0,1]");
}

nlohmann::json echo(const SampleConfig& cfg) {
  return {{"seed", cfg.seed}, {"trials", cfg.trials}};
}

} // namespace

nlohmann::json ExperimentReport::to_json() const {
  nlohmann::json j = {{"experiment", experiment},
                      {"estimate", estimate},
                      {"stderr", std_error},
                      {"trials", trials},
                      {"density", density},
                      {"clamped", clamped},
                      {"config", config},
                      {"wall_seconds", wall_seconds}};
  for (const auto& [k, v] : metrics) j["metrics"][k] = v;
  return j;
}

std::string ExperimentReport::to_csv() const {
  std::ostringstream os;
  os.precision(17);
  os << "experiment,estimate,stderr,trials,density,clamped";
  for (const auto& [k, v] : metrics) os << ',' << k;
  os << '\n'
     << experiment << ',' << estimate << ',' << std_error << ',' << trials << ','
     << density << ',' << (clamped ? 1 : 0);
  for (const auto& [k, v] : metrics) os << ',' << v;
  os << '\n';
  return os.str();
}

unsigned worker_count(unsigned requested) {
  unsigned n = requested ? requested : std::max(1u, std::thread::hardware_concurrency());
  if (const char* cap = std::getenv("THRESHOLD_LAB_THREADS")) {
    const long c = std::strtol(cap, nullptr, 10);
    if (c >= 1) n = std::min<unsigned>(n, static_cast<unsigned>(c));
  }
  return n;
}

std::pair<double, double> mean_and_error(const std::vector<double>& values) {
  const double n = static_cast<double>(values.size());
  if (values.empty()) return {0.0, 0.0};
  double sum = 0.0;
  for (double v : values) sum += v;
  const double mean = sum / n;
  if (values.size() < 2) return {mean, 0.0};
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return {mean, std::sqrt(ss / (n - 1.0) / n)};
}

std::pair<double, double> frequency_and_error(const std::vector<double>& indicators) {
  if (indicators.empty()) return {0.0, 0.0};
  double hits = 0.0;
  for (double v : indicators) hits += v;
  const double n = static_cast<double>(indicators.size());
  const double f = hits / n;
  return {f, std::sqrt(f * (1.0 - f) / n)};
}

Subset sample_subset(int n, double p, CounterRng& rng) {
  require_probability(p, "p");
  Subset s;
  for (int x = 0; x < n; ++x)
    if (rng.bernoulli(p)) s.insert(x);
  return s;
}

SampleTuple sample_tuple(int n, double q, int s, CounterRng& rng) {
  SampleTuple out;
  out.reserve(s);
  for (int i = 0; i < s; ++i) out.push_back(sample_subset(n, q, rng));
  return out;
}

bool is_bad(std::span<const Subset> samples, const SetSystem& family,
            std::span<const WeightVector> lambdas, int s) {
  if (lambdas.size() != family.size())
    throw InputError("need one weight vector per family member");
  Subset all;
  for (const auto& w : samples) all |= w;
  const double target = 1.0 - std::ldexp(1.0, -s);
  for (const auto& lambda : lambdas)
    if (weighted_mass(lambda, all) >= target - kTolerance) return false;
  return true;
}

bool bad_implies_nonempty_check(std::span<const Subset> samples, const SetSystem& family,
                                std::span<const WeightVector> lambdas, int s,
                                const TowerBudget& budget) {
  if (!is_bad(samples, family, lambdas, s)) return true;
  for (const auto& h : family.members())
    if (minimum_tower(samples, h, family, lambdas, budget).u() == 0) return false;
  return true;
}

double key_lemma_integrand(std::span<const Subset> samples, const SetSystem& family,
                           std::span<const WeightVector> lambdas, double p,
                           const TowerBudget& budget) {
  if (!is_bad(samples, family, lambdas, static_cast<int>(samples.size()))) return 0.0;
  return cover_cost(tower_cover(samples, family, lambdas, budget), p);
}

ExperimentReport estimate_key_lemma(const SetSystem& family,
                                    std::span<const WeightVector> lambdas, double p, int s,
                                    const SampleConfig& cfg, const TowerBudget& budget) {
  require_probability(p, "p");
  const double q = 16.0 * p;
  if (q > 1.0)
    throw InputError("key lemma needs q = 16p <= 1; use p <= 0.0625 (got p = " +
                     std::to_string(p) + ")");
  if (s < 1) throw InputError("s must be positive");
  const auto start = Clock::now();
  const auto values = run_trials(cfg.trials, cfg.threads, [&](std::size_t i) {
    CounterRng rng(cfg.seed, "key-lemma", i);
    const auto w = sample_tuple(family.n(), q, s, rng);
    return key_lemma_integrand(w, family, lambdas, p, budget);
  });
  ExperimentReport r;
  r.experiment = "key-lemma";
  std::tie(r.estimate, r.std_error) = mean_and_error(values);
  r.trials = cfg.trials;
  r.density = q;
  r.config = echo(cfg);
  r.config["p"] = p;
  r.config["s"] = s;
  r.metrics["bound"] = 1.0 / 3.0;
  r.wall_seconds = seconds_since(start);
  return r;
}

ExperimentReport estimate_amplified_success(const SetSystem& family,
                                            std::span<const WeightVector> lambdas,
                                            double p, int s,
                                            const IntegerSolution& not_small,
                                            const SampleConfig& cfg, double alpha) {
  require_probability(p, "p");
  if (s < 1) throw InputError("s must be positive");
  if (lambdas.size() != family.size())
    throw InputError("need one weight vector per family member");
  if (!not_small.optimal || not_small.p != p || not_small.cost <= 0.5)
    throw InputError("amplified success needs an optimal integer solution at p "
                     "certifying cost > 1/2");
  for (const auto& lambda : lambdas)
    if (lambda.total() < 1.0 - kTolerance)
      throw InputError("every weight vector must have total mass at least 1");

  const double raw = alpha * s * p;
  const double q = std::min(1.0, raw);
  const double target = 1.0 - std::ldexp(1.0, -s);
  const auto start = Clock::now();
  const auto hits = run_trials(cfg.trials, cfg.threads, [&](std::size_t i) {
    CounterRng rng(cfg.seed, "selector", i);
    const Subset x = sample_subset(family.n(), q, rng);
    for (const auto& lambda : lambdas)
      if (weighted_mass(lambda, x) >= target - kTolerance) return 1.0;
    return 0.0;
  });
  ExperimentReport r;
  r.experiment = "selector";
  std::tie(r.estimate, r.std_error) = frequency_and_error(hits);
  r.trials = cfg.trials;
  r.density = q;
  r.clamped = raw > 1.0;
  r.config = echo(cfg);
  r.config["p"] = p;
  r.config["s"] = s;
  r.config["alpha"] = alpha;
  r.metrics["target_mass"] = target;
  r.metrics["guarantee"] = 1.0 / 3.0;
  r.metrics["integer_cost_at_p"] = not_small.cost;
  r.wall_seconds = seconds_since(start);
  return r;
}

PcEstimate estimate_pc(const SetSystem& family, const SampleConfig& cfg, double tol) {
  if (family.empty()) throw InputError("p_c of an empty family is undefined");
  if (cfg.trials == 0) throw InputError("trials must be positive");
  // X_p contains H iff every u_x < p for x in H, so each trial has a
  // critical density min_H max_{x in H} u_x.
  const auto crit = run_trials(cfg.trials, cfg.threads, [&](std::size_t i) {
    CounterRng rng(cfg.seed, "pc", i);
    std::vector<double> u(family.n());
    for (auto& v : u) v = rng.uniform();
    double best = 1.0;
    for (const auto& h : family.members()) {
      double worst = 0.0;
      h.for_each([&](int x) { worst = std::max(worst, u[x]); });
      best = std::min(best, worst);
    }
    return best;
  });
  const auto probability = [&](double p) {
    std::size_t hit = 0;
    for (double c : crit) hit += c < p ? 1 : 0;
    return static_cast<double>(hit) / static_cast<double>(crit.size());
  };
  PcEstimate out;
  out.trials = cfg.trials;
  out.threshold = bisect_threshold([&](double p) { return probability(p) < 0.5; }, tol);

  std::vector<double> sorted = crit;
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  const double half_width = 3.0 * 0.5 * std::sqrt(n);
  const auto rank = [&](double r) {
    const auto k = static_cast<long>(std::clamp(r, 0.0, n - 1.0));
    return sorted[static_cast<std::size_t>(k)];
  };
  out.band_lo = rank(std::floor(0.5 * n - half_width));
  out.band_hi = rank(std::ceil(0.5 * n + half_width));
  return out;
}

ExperimentReport sharpness_demo(int n, int s, const SampleConfig& cfg) {
  if (n < 2 || n % 2 != 0) throw InputError("sharpness demo needs an even n >= 2");
  if (s < 0 || s > n) throw InputError("sharpness demo needs 0 <= s <= n");
  const double q = static_cast<double>(s) / n;
  const auto start = Clock::now();
  std::vector<double> bound(cfg.trials);
  const auto isolated = run_trials(cfg.trials, cfg.threads, [&](std::size_t t) {
    CounterRng rng(cfg.seed, "sharpness", t);
    std::vector<int> degree(n, 0);
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (rng.bernoulli(q)) {
          ++degree[i];
          ++degree[j];
        }
    const auto count = std::count(degree.begin(), degree.end(), 0);
    bound[t] = 1.0 - static_cast<double>(count) / n;
    return static_cast<double>(count);
  });
  ExperimentReport r;
  r.experiment = "sharpness";
  std::tie(r.estimate, r.std_error) = mean_and_error(isolated);
  r.trials = cfg.trials;
  r.density = q;
  r.config = echo(cfg);
  r.config["n"] = n;
  r.config["s"] = s;
  r.metrics["closed_form"] = n * std::pow(1.0 - q, n - 1);
  r.metrics["coverage_bound_mean"] = mean_and_error(bound).first;
  r.metrics["exp_minus_s"] = std::exp(-static_cast<double>(s));
  r.wall_seconds = seconds_since(start);
  return r;
}

UnionFrequencies union_inclusion(int n, double q, int s, const SampleConfig& cfg) {
  require_probability(q, "q");
  if (s < 1) throw InputError("s must be positive");
  std::vector<Subset> unions(cfg.trials);
  run_trials(cfg.trials, cfg.threads, [&](std::size_t t) {
    CounterRng rng(cfg.seed, "union", t);
    Subset u;
    for (const auto& w : sample_tuple(n, q, s, rng)) u |= w;
    unions[t] = u;
    return 0.0;
  });
  UnionFrequencies out;
  out.trials = cfg.trials;
  out.expected = 1.0 - std::pow(1.0 - q, s);
  out.frequency.assign(n, 0.0);
  for (const auto& u : unions) u.for_each([&](int x) { out.frequency[x] += 1.0; });
  for (auto& f : out.frequency) f /= static_cast<double>(cfg.trials);
  out.std_error = std::sqrt(out.expected * (1.0 - out.expected) / cfg.trials);
  return out;
}

} // namespace tlab
