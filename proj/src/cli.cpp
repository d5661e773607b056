#include "tlab/cli.hpp"

#include "tlab/fragments.hpp"
#include "tlab/instances.hpp"
#include "tlab/montecarlo.hpp"
#include "tlab/rounding.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iostream>
#include <sstream>

namespace tlab {

using nlohmann::json;

namespace {

// ---------------------------------------------------------------- verify-all

void tally(InvariantResult& r, bool ok) {
  ++r.checked;
  if (!ok) ++r.failed;
}

bool has_empty_member(const SetSystem& family) {
  for (const auto& h : family.members())
    if (h.empty()) return true;
  return false;
}

} // namespace

bool VerifySummary::passed() const {
  for (const auto& r : invariants)
    if (r.failed > 0) return false;
  return true;
}

json VerifySummary::to_json() const {
  json list = json::array();
  for (const auto& r : invariants) {
    json e = {{"name", r.name},
              {"checked", r.checked},
              {"failed", r.failed},
              {"status", r.skipped ? "skipped" : (r.failed ? "fail" : "pass")}};
    if (!r.note.empty()) e["note"] = r.note;
    list.push_back(std::move(e));
  }
  return {{"passed", passed()}, {"partial", partial}, {"invariants", list}};
}

VerifySummary verify_all(const Instance& inst, const VerifyOptions& o) {
  VerifySummary out;
  const SetSystem& F = inst.family;
  const int n = F.n();
  const std::span<const WeightVector> lambdas(inst.lambdas);

  const auto run = [&](const std::string& name, const auto& body) {
    InvariantResult r;
    r.name = name;
    try {
      body(r);
    } catch (const ResourceError& e) {
      r.skipped = true;
      r.note = e.what();
      out.partial = true;
    }
    out.invariants.push_back(std::move(r));
  };
  const auto skip = [&](const std::string& name, const std::string& why) {
    InvariantResult r;
    r.name = name;
    r.skipped = true;
    r.note = why;
    out.invariants.push_back(std::move(r));
  };

  run("family_canonical", [&](InvariantResult& r) {
    for (std::size_t i = 1; i < F.size(); ++i) tally(r, F[i - 1] < F[i]);
  });
  run("lambda_normalised", [&](InvariantResult& r) {
    for (const auto& lam : inst.lambdas) {
      if (lam.host().empty()) continue;
      tally(r, std::abs(lam.total() - 1.0) <= 1e-9);
    }
  });

  const bool thresholds_defined = !F.empty() && !has_empty_member(F);
  const std::vector<double> probes = {0.05, 0.2, 0.4, 0.6, 0.9};

  run("int_cover_valid", [&](InvariantResult& r) {
    for (double p : probes) {
      const auto sol = solve_int(F, p, o.solver);
      tally(r, is_cover(sol.cover, F) && std::abs(cover_cost(sol.cover, p) - sol.cost) <= 1e-12);
    }
  });
  run("frac_at_most_int", [&](InvariantResult& r) {
    for (double p : probes) {
      const auto i = solve_int(F, p, o.solver);
      const auto f = solve_frac(F, p, o.solver);
      tally(r, f.cost <= i.cost + 1e-9 && is_fractional_cover(f.weights, F));
    }
  });
  if (thresholds_defined) {
    run("pf_at_least_pE", [&](InvariantResult& r) {
      const auto pe = threshold_pE(F, 1e-6, o.solver);
      const auto pf = threshold_pf(F, 1e-6, o.solver);
      tally(r, pf.value >= pe.value - 1e-9);
      tally(r, is_p_small(F, pe.lo, o.solver));
    });
  } else {
    skip("pf_at_least_pE", "thresholds need a nonempty family without an empty member");
  }

  CounterRng draw(o.seed, "verify-all", 0);
  run("cutoff_half", [&](InvariantResult& r) {
    for (std::size_t h = 0; h < F.size(); ++h)
      for (std::size_t k = 0; k < o.samples; ++k) {
        const Subset W = sample_subset(n, 0.5, draw);
        const auto cut = cutoff(W, F[h], inst.lambdas[h]);
        tally(r, 2 * (cut.below & W).size() <= cut.below.size());
      }
  });

  run("bad_implies_nonempty", [&](InvariantResult& r) {
    const int s = 2;
    for (std::size_t k = 0; k < o.samples; ++k) {
      const auto W = sample_tuple(n, 0.3, s, draw);
      if (!is_bad(W, F, lambdas, s)) continue;
      tally(r, bad_implies_nonempty_check(W, F, lambdas, s, o.towers));
    }
  });

  {
    std::vector<InvariantResult> tower(9);
    const char* names[] = {"tower_found",          "tower_fragments_valid",
                           "tower_witness_valid",  "tower_fallback_valid",
                           "tower_not_above_fallback", "tower_containment",
                           "tower_half_size",      "tower_round_trip",
                           "tower_cover_is_cover"};
    for (std::size_t i = 0; i < tower.size(); ++i) tower[i].name = names[i];
    const int s = std::min(2, o.towers.max_rounds);
    try {
      for (std::size_t k = 0; k < o.samples; ++k) {
        const auto W = sample_tuple(n, 0.3, s, draw);
        for (std::size_t h = 0; h < F.size(); ++h) {
          const auto cert = minimum_tower(W, F[h], F, lambdas, o.towers);
          tally(tower[0], true);
          const auto a = audit_tower(cert, F, lambdas);
          tally(tower[1], a.fragments_valid);
          tally(tower[2], a.witness_valid);
          tally(tower[3], a.fallback_valid);
          tally(tower[4], a.size_not_above_fallback);
          tally(tower[5], a.containment);
          tally(tower[6], a.half_size);
          tally(tower[7], a.round_trip);
        }
        tally(tower[8], is_cover(tower_cover(W, F, lambdas, o.towers), F));
      }
    } catch (const ResourceError& e) {
      for (auto& t : tower) {
        t.skipped = true;
        t.note = e.what();
      }
      out.partial = true;
    }
    for (auto& t : tower) out.invariants.push_back(std::move(t));
  }

  if (inst.candidate_cover) {
    run("candidate_is_cover", [&](InvariantResult& r) { tally(r, is_cover(*inst.candidate_cover, F)); });
  }

  if (inst.fractional_cover) {
    const auto& w = *inst.fractional_cover;
    run("fractional_cover_valid", [&](InvariantResult& r) { tally(r, is_fractional_cover(w, F)); });
    if (is_fractional_cover(w, F) && w.support_bound() >= 1) {
      run("coverage_identity", [&](InvariantResult& r) {
        for (const auto& h : F.members())
          for (std::size_t k = 0; k < o.samples; ++k)
            tally(r, verify_coverage_identity(w, h, sample_subset(n, 0.5, draw)));
      });
      run("coverage_bound", [&](InvariantResult& r) {
        for (const auto& h : F.members())
          for (std::size_t k = 0; k < o.samples; ++k)
            tally(r, verify_coverage_bound(w, h, sample_subset(n, 0.5, draw)));
      });
      run("build_lambda_sums_to_one", [&](InvariantResult& r) {
        for (const auto& h : F.members()) {
          if (h.empty()) continue;
          tally(r, std::abs(build_lambda(w, h).total() - 1.0) <= 1e-12);
        }
      });
    }
  }
  return out;
}

// ------------------------------------------------------------------ dispatch

namespace {

struct Options {
  std::string instance;
  std::uint64_t seed = 0;
  std::size_t trials = 10000;
  double p = 0.0;
  double q = 0.0;
  int s = 1;
  double tol = 1e-6;
  std::size_t budget = SolverOptions{}.budget;
  std::string arithmetic = "auto";
  std::string format = "json";
  std::string out;
  unsigned threads = 0;
  std::string clamp_policy = "flag";
  double alpha = 16.0;
  std::string kind = "perfect_matchings";
  int n = 4, k = 2, m = 1, t = 2;
  std::string samples;
  std::string host;
  std::string sweep_csv;
  int sweep_points = 9;
  std::size_t verify_samples = 20;
};

std::string utc_now() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t tt = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&tt, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

json flag_values(const CLI::App& sub) {
  json flags = json::object();
  for (const CLI::Option* opt : sub.get_options()) {
    const std::string name = opt->get_name(false, true);
    if (name.empty() || opt == sub.get_help_ptr()) continue;
    if (opt->count() > 0) {
      const auto& res = opt->results();
      std::string joined;
      for (std::size_t i = 0; i < res.size(); ++i) joined += (i ? " " : "") + res[i];
      flags[name] = joined;
    } else {
      flags[name] = opt->get_default_str();
    }
  }
  return flags;
}

SolverOptions solver_options(const Options& o) {
  SolverOptions so;
  so.budget = o.budget;
  if (o.arithmetic == "float") so.arithmetic = LpArithmetic::floating;
  else if (o.arithmetic == "exact") so.arithmetic = LpArithmetic::exact;
  return so;
}

SampleConfig sample_config(const Options& o) { return {o.seed, o.trials, o.threads}; }

json subsets_json(std::span<const Subset> sets) {
  json a = json::array();
  for (const auto& s : sets) a.push_back(subset_to_json(s));
  return a;
}

json bracket_json(const ThresholdEstimate& e) {
  return {{"value", e.value}, {"lo", e.lo}, {"hi", e.hi}, {"tol", e.tol},
          {"degenerate", e.degenerate}};
}

std::string number(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

/// Geometric grid of `points` densities in [lo, hi], with the columns q, c_int, c_frac.
std::string sweep_csv(const SetSystem& family, double lo, double hi, int points,
                      const SolverOptions& so) {
  std::string csv = "q,c_int,c_frac\n";
  if (points < 1) return csv;
  for (int i = 0; i < points; ++i) {
    const double q = points == 1 ? hi : lo * std::pow(hi / lo, static_cast<double>(i) / (points - 1));
    csv += number(q) + ',' + number(solve_int(family, q, so).cost) + ',' +
           number(solve_frac(family, q, so).cost) + '\n';
  }
  return csv;
}

/// Largest p with sum_W w(W) p^|W| <= 1/2, by bisection.
double cover_half_point(const FractionalCover& w, double tol) {
  return bisect_threshold([&](double p) { return w.cost(p) <= 0.5; }, tol).lo;
}

json certificate_json(const TowerCertificate& c, const TowerAudit& a) {
  json wit = {{"member", c.witness.member},
              {"host", subset_to_json(c.witness.host)},
              {"samples", subsets_json(c.witness.samples())},
              {"b", c.witness.b()},
              {"residuals", subsets_json(c.witness.residuals())}};
  json audit = {{"fragments_valid", a.fragments_valid},
                {"witness_valid", a.witness_valid},
                {"fallback_valid", a.fallback_valid},
                {"not_above_fallback", a.size_not_above_fallback},
                {"containment", a.containment},
                {"half_size", a.half_size},
                {"round_trip", a.round_trip}};
  return {{"host", subset_to_json(c.host)},
          {"fragments", subsets_json(c.fragments)},
          {"unions", subsets_json(c.unions)},
          {"sizes", c.sizes},
          {"u", c.u()},
          {"fragment_union", subset_to_json(c.fragment_union())},
          {"witness", wit},
          {"audit", audit}};
}

std::vector<Subset> parse_samples(const std::string& text, int n) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error&) {
    std::ifstream in(text);
    if (!in) throw InputError("--samples is neither JSON nor a readable file: " + text);
    try {
      j = json::parse(in);
    } catch (const json::parse_error& e) {
      throw InputError("malformed JSON in " + text + ": " + e.what());
    }
  }
  if (!j.is_array()) throw InputError("--samples must be a JSON array of sets");
  std::vector<Subset> out;
  for (const auto& e : j) out.push_back(subset_from_json(e, n));
  return out;
}

class Runner {
public:
  Runner(std::string command, const CLI::App& sub, const Options& o)
      : command_(std::move(command)), sub_(sub), o_(o), started_(utc_now()) {}

  const Instance& instance() {
    if (!instance_) {
      instance_ = read_instance(o_.instance);
      hash_ = content_hash(instance_to_json(*instance_));
    }
    return *instance_;
  }

  void set_hash(std::string h) { hash_ = std::move(h); }

  /// Writes `body` (with the manifest) or `csv` depending on --format.
  void emit(json body, const std::optional<std::string>& csv = std::nullopt) {
    std::string text;
    if (o_.format == "csv") {
      if (!csv) throw InputError("--format csv is not available for " + command_);
      text = *csv;
    } else {
      body["manifest"] = {{"command", command_},
                          {"flags", flag_values(sub_)},
                          {"seed", o_.seed},
                          {"instance_hash", hash_ ? json(*hash_) : json(nullptr)},
                          {"version", kVersion},
                          {"started", started_},
                          {"finished", utc_now()}};
      text = body.dump(2) + "\n";
    }
    if (o_.out.empty())
      std::cout << text;
    else
      write_atomic(o_.out, text);
  }

private:
  std::string command_;
  const CLI::App& sub_;
  const Options& o_;
  std::string started_;
  std::optional<Instance> instance_;
  std::optional<std::string> hash_;
};

int run_command(const std::string& cmd, const CLI::App& sub, const Options& o,
                bool p_given, bool q_given) {
  Runner run(cmd, sub, o);
  const SolverOptions so = solver_options(o);

  if (cmd == "gen") {
    const auto kind = parse_generator_kind(o.kind);
    if (!kind) throw InputError("unknown generator kind " + o.kind);
    GeneratorSpec spec{*kind, o.n, o.k, o.m, o.t, o.seed};
    auto g = generate(spec);
    const json body = instance_to_json(Instance::from_family(std::move(g.family), std::move(g.cover)));
    run.set_hash(content_hash(body));
    std::string text = body.dump(2) + "\n";
    if (o.out.empty()) std::cout << text;
    else write_atomic(o.out, text);
    return exit_ok;
  }

  if (cmd == "cint" || cmd == "cfrac") {
    const auto& inst = run.instance();
    if (!p_given) throw InputError(cmd + " needs --p");
    json body;
    std::string csv = "p,cost,optimal\n";
    if (cmd == "cint") {
      const auto sol = solve_int(inst.family, o.p, so);
      body = {{"p", o.p}, {"cost", sol.cost}, {"cover", sol.cover.to_lists()}, {"optimal", sol.optimal}};
      csv += number(o.p) + ',' + number(sol.cost) + ',' + (sol.optimal ? "1" : "0") + '\n';
    } else {
      const auto sol = solve_frac(inst.family, o.p, so);
      json weights = json::array();
      for (const auto& [set, wt] : sol.weights.entries())
        weights.push_back({{"set", subset_to_json(set)}, {"weight", wt}});
      std::vector<Subset> support;
      for (const auto& e : sol.weights.entries()) support.push_back(e.first);
      body = {{"p", o.p},
              {"cost", sol.cost},
              {"cover", subsets_json(support)},
              {"weights", weights},
              {"optimal", true},
              {"exact_arithmetic", sol.exact_arithmetic}};
      csv += number(o.p) + ',' + number(sol.cost) + ",1\n";
    }
    run.emit(std::move(body), csv);
    return exit_ok;
  }

  if (cmd == "pe" || cmd == "pf") {
    const auto& inst = run.instance();
    const auto est = cmd == "pe" ? threshold_pE(inst.family, o.tol, so)
                                 : threshold_pf(inst.family, o.tol, so);
    std::string csv = "value,lo,hi,tol,degenerate\n" + number(est.value) + ',' + number(est.lo) +
                      ',' + number(est.hi) + ',' + number(est.tol) + ',' +
                      (est.degenerate ? "1" : "0") + '\n';
    run.emit(bracket_json(est), csv);
    return exit_ok;
  }

  if (cmd == "pc-mc") {
    const auto& inst = run.instance();
    const auto est = estimate_pc(inst.family, sample_config(o), o.tol);
    json body = bracket_json(est.threshold);
    body["band_lo"] = est.band_lo;
    body["band_hi"] = est.band_hi;
    body["trials"] = est.trials;
    std::string csv = "value,band_lo,band_hi,trials\n" + number(est.threshold.value) + ',' +
                      number(est.band_lo) + ',' + number(est.band_hi) + ',' +
                      std::to_string(est.trials) + '\n';
    run.emit(std::move(body), csv);
    return exit_ok;
  }

  if (cmd == "selector-mc") {
    const auto& inst = run.instance();
    if (!p_given) throw InputError("selector-mc needs --p");
    if (o.clamp_policy == "error" && o.alpha * o.s * o.p > 1.0)
      throw InputError("alpha*s*p exceeds 1 and --clamp-policy is error");
    const auto not_small = solve_int(inst.family, o.p, so);
    if (not_small.cost <= 0.5)
      throw InputError("the family is p-small at p = " + number(o.p) + "; choose p above p_E");
    const auto r = estimate_amplified_success(inst.family, inst.lambdas, o.p, o.s, not_small,
                                              sample_config(o), o.alpha);
    run.emit(r.to_json(), r.to_csv());
    return exit_ok;
  }

  if (cmd == "key-lemma-mc") {
    const auto& inst = run.instance();
    if (!p_given) throw InputError("key-lemma-mc needs --p");
    if (o.clamp_policy == "error" && 16.0 * o.p > 1.0)
      throw InputError("16p exceeds 1 and --clamp-policy is error");
    TowerBudget budget;
    const auto r = estimate_key_lemma(inst.family, inst.lambdas, o.p, o.s, sample_config(o), budget);
    run.emit(r.to_json(), r.to_csv());
    return exit_ok;
  }

  if (cmd == "sharpness") {
    const auto r = sharpness_demo(o.n, o.s, sample_config(o));
    run.emit(r.to_json(), r.to_csv());
    return exit_ok;
  }

  if (cmd == "tower") {
    const auto& inst = run.instance();
    if (o.samples.empty()) throw InputError("tower needs --samples");
    const auto W = parse_samples(o.samples, inst.family.n());
    std::vector<std::size_t> hosts;
    if (!o.host.empty()) {
      const Subset h = parse_samples("[" + o.host + "]", inst.family.n()).at(0);
      const int idx = inst.family.index_of(h);
      if (idx < 0) throw InputError("--host " + h.to_string() + " is not a family member");
      hosts.push_back(static_cast<std::size_t>(idx));
    } else {
      for (std::size_t i = 0; i < inst.family.size(); ++i) hosts.push_back(i);
    }
    json certs = json::array();
    for (std::size_t h : hosts) {
      const auto cert = minimum_tower(W, inst.family[h], inst.family, inst.lambdas);
      certs.push_back(certificate_json(cert, audit_tower(cert, inst.family, inst.lambdas)));
      certs.back()["fallback"] = subsets_json(fallback_tower(W, inst.family[h], inst.lambdas[h]));
    }
    json body = {{"samples", subsets_json(W)}, {"certificates", certs}};
    if (o.host.empty()) {
      const auto cover = tower_cover(W, inst.family, inst.lambdas);
      body["tower_cover"] = cover.to_lists();
      body["tower_cover_is_cover"] = is_cover(cover, inst.family);
    }
    run.emit(std::move(body));
    return exit_ok;
  }

  if (cmd == "round" || cmd == "verify-main") {
    const auto& inst = run.instance();
    std::optional<FractionalCover> w = inst.fractional_cover;
    std::string source = "instance";
    double p = o.p;
    if (!w) {
      if (!p_given) throw InputError(cmd + " needs --p when the instance has no fractional_cover");
      w = solve_frac(inst.family, p, so).weights;
      source = "lp";
    } else if (!p_given) {
      p = cover_half_point(*w, o.tol) / 1.05;
    }
    RoundingConfig cfg;
    cfg.s = o.s;
    if (q_given) cfg.q = o.q;
    cfg.sample = sample_config(o);
    cfg.tol = o.tol;
    cfg.solver = so;

    json body;
    double lo = p / 8.0, hi = std::min(1.0, 8.0 * p);
    if (cmd == "round") {
      const auto r = tower_round(*w, inst.family, p, cfg);
      double mean = 0.0;
      for (const auto& c : r.costs) mean += c.second;
      if (!r.costs.empty()) mean /= static_cast<double>(r.costs.size());
      body = {{"p", p},
              {"q", r.q},
              {"s", o.s},
              {"trials", r.costs.size()},
              {"mean_tower_cost", mean},
              {"c_int_at_q", solve_int(inst.family, r.q, so).cost},
              {"c_frac_at_q", solve_frac(inst.family, r.q, so).cost}};
      if (r.best_cover) {
        body["best_cover"] = r.best_cover->to_lists();
        body["best_cost"] = r.best_cost;
      }
    } else {
      const auto r = verify_main_theorem(*w, inst.family, p, cfg);
      body = r.to_json();
      lo = std::min(lo, r.best_q / 4.0);
    }
    body["cover_source"] = source;
    const std::string csv = sweep_csv(inst.family, lo, hi, o.sweep_points, so);
    if (!o.sweep_csv.empty()) write_atomic(o.sweep_csv, csv);
    run.emit(std::move(body), csv);
    return exit_ok;
  }

  if (cmd == "verify-all") {
    const auto& inst = run.instance();
    VerifyOptions vo;
    vo.seed = o.seed;
    vo.samples = o.verify_samples;
    vo.solver = so;
    const auto summary = verify_all(inst, vo);
    for (const auto& r : summary.invariants)
      std::cerr << (r.skipped ? "SKIP " : r.failed ? "FAIL " : "PASS ") << r.name << "  "
                << (r.checked - r.failed) << "/" << r.checked
                << (r.note.empty() ? "" : "  (" + r.note + ")") << "\n";
    run.emit(summary.to_json());
    if (!summary.passed()) return exit_verification;
    return summary.partial ? exit_resource : exit_ok;
  }

  throw InputError("unknown command " + cmd);
}

} // namespace

int dispatch(int argc, const char* const* argv) {
  CLI::App app{"Expectation thresholds, fractional covers and tower rounding at desk scale",
               "threshold_lab"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);
  app.option_defaults()->always_capture_default();

  Options o;
  std::map<std::string, std::pair<CLI::Option*, CLI::Option*>> pq; // --p, --q per command

  const auto add_instance = [&](CLI::App* sub) {
    sub->add_option("instance", o.instance, "Instance JSON file")->required();
  };
  const auto add_output = [&](CLI::App* sub) {
    sub->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--out", o.out, "Write output here instead of stdout");
  };
  const auto add_solver = [&](CLI::App* sub) {
    sub->add_option("--budget", o.budget, "Candidate-set budget for the exact solvers");
    sub->add_option("--arithmetic", o.arithmetic, "LP arithmetic")
        ->check(CLI::IsMember({"auto", "float", "exact"}));
  };
  std::map<std::string, std::pair<CLI::Option*, std::size_t>> trials_default;
  const auto add_mc = [&](CLI::App* sub, std::size_t trials) {
    sub->add_option("--seed", o.seed, "Master seed");
    trials_default[sub->get_name()] = {
        sub->add_option("--trials", o.trials, "Monte Carlo trials")->default_str(std::to_string(trials)),
        trials};
    sub->add_option("--threads", o.threads, "Worker threads (0 = hardware)");
  };
  const auto add_p = [&](CLI::App* sub, const std::string& name) {
    pq[name].first = sub->add_option("--p", o.p, "Density p")->check(CLI::Range(0.0, 1.0));
  };

  auto* gen = app.add_subcommand("gen", "Generate an instance");
  gen->add_option("--kind", o.kind, "Generator")
      ->check(CLI::IsMember({"perfect_matchings", "cliques", "disjoint_blocks", "random_kuniform",
                             "from_fractional"}));
  gen->add_option("--n", o.n, "Ground-set or vertex count");
  gen->add_option("--k", o.k, "Member or clique size");
  gen->add_option("--m", o.m, "Member, block or support count");
  gen->add_option("--t", o.t, "Support-size bound (from_fractional)");
  gen->add_option("--seed", o.seed, "Seed");
  gen->add_option("--out", o.out, "Write here instead of stdout");

  for (const char* name : {"cint", "cfrac"}) {
    auto* sub = app.add_subcommand(name, std::string(name) == "cint"
                                             ? "Minimum p-weighted integer cover"
                                             : "Minimum p-weighted fractional cover");
    add_instance(sub);
    add_p(sub, name);
    add_solver(sub);
    add_output(sub);
  }
  for (const char* name : {"pe", "pf"}) {
    auto* sub = app.add_subcommand(name, std::string(name) == "pe" ? "Expectation threshold"
                                                                   : "Fractional expectation threshold");
    add_instance(sub);
    sub->add_option("--tol", o.tol, "Bisection tolerance");
    add_solver(sub);
    add_output(sub);
  }

  auto* pc = app.add_subcommand("pc-mc", "Monte Carlo estimate of the critical density");
  add_instance(pc);
  add_mc(pc, 10000);
  pc->add_option("--tol", o.tol, "Bisection tolerance");
  add_output(pc);

  auto* tower = app.add_subcommand("tower", "Minimum towers of fragments for explicit samples");
  add_instance(tower);
  tower->add_option("--samples", o.samples, "JSON array of sample sets W_1..W_s, or a file")->required();
  tower->add_option("--host", o.host, "Restrict to one member, as a JSON element list");
  add_output(tower);

  auto* selector = app.add_subcommand("selector-mc", "Success frequency of the amplified sample");
  add_instance(selector);
  add_p(selector, "selector-mc");
  selector->add_option("--s", o.s, "Rounds")->check(CLI::PositiveNumber);
  selector->add_option("--alpha", o.alpha, "Amplification factor")->check(CLI::PositiveNumber);
  selector->add_option("--clamp-policy", o.clamp_policy, "flag: clamp and report; error: refuse")
      ->check(CLI::IsMember({"flag", "error"}));
  add_mc(selector, 10000);
  add_solver(selector);
  add_output(selector);

  auto* key = app.add_subcommand("key-lemma-mc", "Expected tower-cover cost at 16p");
  add_instance(key);
  add_p(key, "key-lemma-mc");
  key->add_option("--s", o.s, "Rounds")->check(CLI::PositiveNumber);
  key->add_option("--clamp-policy", o.clamp_policy, "flag or error")
      ->check(CLI::IsMember({"flag", "error"}));
  add_mc(key, 10000);
  add_output(key);

  auto* sharp = app.add_subcommand("sharpness", "Isolated vertices in G(n, s/n)");
  auto* sharp_n = sharp->add_option("--n", o.n, "Vertices")->default_str("100");
  sharp->add_option("--s", o.s, "Edge-density multiplier")->check(CLI::PositiveNumber);
  sharp->add_option("--clamp-policy", o.clamp_policy, "Accepted for uniformity")
      ->check(CLI::IsMember({"flag", "error"}));
  add_mc(sharp, 10000);
  add_output(sharp);

  for (const char* name : {"round", "verify-main"}) {
    const bool is_round = std::string(name) == "round";
    auto* sub = app.add_subcommand(name, is_round ? "Tower rounding of a fractional cover"
                                                  : "Integrality-gap report for a fractional cover");
    add_instance(sub);
    add_p(sub, name);
    pq[name].second = sub->add_option("--q", o.q, "Sampling density")->check(CLI::Range(0.0, 1.0));
    sub->add_option("--s", o.s, "Rounds")->check(CLI::PositiveNumber);
    sub->add_option("--tol", o.tol, "Bisection tolerance");
    sub->add_option("--sweep-csv", o.sweep_csv, "Also write the (q, c_int, c_frac) sweep here");
    sub->add_option("--sweep-points", o.sweep_points, "Points in the sweep");
    add_mc(sub, is_round ? 100 : 20);
    add_solver(sub);
    add_output(sub);
  }

  auto* verify = app.add_subcommand("verify-all", "Run every invariant against one instance");
  add_instance(verify);
  verify->add_option("--seed", o.seed, "Seed");
  verify->add_option("--samples", o.verify_samples, "Random draws per sampled invariant");
  add_solver(verify);
  add_output(verify);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return exit_usage;
  }

  const CLI::App* sub = app.get_subcommands().front();
  const std::string cmd = sub->get_name();
  if (const auto td = trials_default.find(cmd); td != trials_default.end() && td->second.first->count() == 0)
    o.trials = td->second.second;
  if (cmd == "sharpness" && sharp_n->count() == 0) o.n = 100;
  const auto it = pq.find(cmd);
  const bool p_given = it != pq.end() && it->second.first && it->second.first->count() > 0;
  const bool q_given = it != pq.end() && it->second.second && it->second.second->count() > 0;
  try {
    return run_command(cmd, *sub, o, p_given, q_given);
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return exit_input;
  } catch (const ResourceError& e) {
    std::cerr << "resource error: " << e.what() << "\n";
    return exit_resource;
  }
}

} // namespace tlab
