#ifndef TLAB_CLI_HPP
#define TLAB_CLI_HPP

#include "tlab/fragments.hpp"
#include "tlab/io.hpp"
#include "tlab/solvers.hpp"

#include <json.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace tlab {

inline constexpr const char* kVersion = "0.1.0";

enum ExitCode : int {
  exit_ok = 0,
  exit_usage = 1,
  exit_input = 2,
  exit_resource = 3,
  exit_verification = 4,
};

struct VerifyOptions {
  std::uint64_t seed = 0;
  std::size_t samples = 20; // random draws per sampled invariant
  SolverOptions solver{};
  TowerBudget towers{};
};

struct InvariantResult {
  std::string name;
  std::size_t checked = 0;
  std::size_t failed = 0;
  bool skipped = false;
  std::string note;
};

struct VerifySummary {
  std::vector<InvariantResult> invariants;
  bool partial = false; // some invariant hit a budget

  bool passed() const;
  nlohmann::json to_json() const;
};

/// Runs every module's invariants against one instance. Deterministic per seed.
VerifySummary verify_all(const Instance& instance, const VerifyOptions& opts = {});

/// Entry point of the command-line tool.
int dispatch(int argc, const char* const* argv);

} // namespace tlab

#endif // TLAB_CLI_HPP
