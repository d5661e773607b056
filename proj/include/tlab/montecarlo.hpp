#ifndef TLAB_MONTECARLO_HPP
#define TLAB_MONTECARLO_HPP

#include "tlab/fragments.hpp"
#include "tlab/rng.hpp"
#include "tlab/solvers.hpp"

#include <json.hpp>

#include <map>
#include <string>
#include <exception>
#include <mutex>
#include <thread>

namespace tlab {

struct SampleConfig {
  std::uint64_t seed = 0;
  std::size_t trials = 10000;
  /// 0: THRESHOLD_LAB_THREADS or the hardware concurrency.
  unsigned threads = 0;
};

struct ExperimentReport {
  std::string experiment;
  double estimate = 0.0;
  double std_error = 0.0;
  std::size_t trials = 0;
  /// Density actually sampled, after clamping to 1.
  double density = 0.0;
  bool clamped = false;
  nlohmann::json config = nlohmann::json::object();
  std::map<std::string, double> metrics;
  double wall_seconds = 0.0;

  nlohmann::json to_json() const;
  std::string to_csv() const;
};

/// Worker threads to use: the explicit request, capped by THRESHOLD_LAB_THREADS.
unsigned worker_count(unsigned requested = 0);

/**
 * Evaluates `per_trial(i)` for i in [0, trials), possibly in parallel, and
 * returns the values in index order. Reductions over the result are
 * therefore independent of the thread count.
 */
template <class F>
std::vector<double> run_trials(std::size_t trials, unsigned threads, F&& per_trial) {
  std::vector<double> values(trials);
  const unsigned workers = std::max(1u, std::min<unsigned>(worker_count(threads),
                                                           static_cast<unsigned>(trials)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < trials; ++i) values[i] = per_trial(i);
    return values;
  }
  std::exception_ptr failure;
  std::mutex failure_mutex;
  {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w)
      pool.emplace_back([&, w] {
        try {
          for (std::size_t i = w; i < trials; i += workers) values[i] = per_trial(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      });
  }
  if (failure) std::rethrow_exception(failure);
  return values;
}

/// Mean and standard error (sample standard deviation over sqrt(N)).
std::pair<double, double> mean_and_error(const std::vector<double>& values);

/// Frequency and its binomial standard error sqrt(f(1-f)/N).
std::pair<double, double> frequency_and_error(const std::vector<double>& indicators);

/// X_p: each element of [0, n) independently with probability p.
Subset sample_subset(int n, double p, CounterRng& rng);

/// s independent copies of X_q.
SampleTuple sample_tuple(int n, double q, int s, CounterRng& rng);

/// No member reaches weighted mass 1 - 2^-s on the union of the samples.
bool is_bad(std::span<const Subset> samples, const SetSystem& family,
            std::span<const WeightVector> lambdas, int s);

/// True unless the tuple is bad and some minimum tower is empty.
bool bad_implies_nonempty_check(std::span<const Subset> samples, const SetSystem& family,
                                std::span<const WeightVector> lambdas, int s,
                                const TowerBudget& budget = {});

/// 1(W bad) * sum over U in the tower cover of p^|U|.
double key_lemma_integrand(std::span<const Subset> samples, const SetSystem& family,
                           std::span<const WeightVector> lambdas, double p,
                           const TowerBudget& budget = {});

/// Monte Carlo estimate of E[1(W bad) sum_{U in U(W)} p^|U|] with W_i ~ X_{16p}.
ExperimentReport estimate_key_lemma(const SetSystem& family,
                                    std::span<const WeightVector> lambdas, double p, int s,
                                    const SampleConfig& cfg, const TowerBudget& budget = {});

/**
 * Frequency of max_H lambda_H(X_q) >= 1 - 2^-s at q = min(1, alpha*s*p).
 * `not_small` must be an optimal integer solution at p with cost above 1/2.
 */
ExperimentReport estimate_amplified_success(const SetSystem& family,
                                            std::span<const WeightVector> lambdas,
                                            double p, int s,
                                            const IntegerSolution& not_small,
                                            const SampleConfig& cfg, double alpha = 16.0);

struct PcEstimate {
  ThresholdEstimate threshold;
  /// Three-sigma band of the empirical median from order statistics.
  double band_lo = 0.0;
  double band_hi = 1.0;
  std::size_t trials = 0;
};

/// p with P(X_p contains a member) = 1/2, by bisection on the empirical
/// probability (common random numbers across p, so it is monotone).
PcEstimate estimate_pc(const SetSystem& family, const SampleConfig& cfg, double tol = 1e-6);

/// Isolated vertices of G(n, s/n) against n (1 - s/n)^(n-1).
ExperimentReport sharpness_demo(int n, int s, const SampleConfig& cfg);

struct UnionFrequencies {
  std::vector<double> frequency; // per element
  double expected = 0.0;         // 1 - (1-q)^s
  double std_error = 0.0;        // binomial, at the expected value
  std::size_t trials = 0;
};

/// Per-element inclusion frequency of W_1 | ... | W_s with W_i ~ X_q.
UnionFrequencies union_inclusion(int n, double q, int s, const SampleConfig& cfg);

} // namespace tlab

#endif // TLAB_MONTECARLO_HPP
