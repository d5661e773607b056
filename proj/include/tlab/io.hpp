#ifndef TLAB_IO_HPP
#define TLAB_IO_HPP

#include "tlab/core.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

namespace tlab {

struct Instance {
  SetSystem family{GroundSet(1)};
  std::optional<FractionalCover> fractional_cover;
  /// One per member of `family`; members without a given weighting get the uniform one.
  std::vector<WeightVector> lambdas;
  std::vector<bool> lambda_given;
  /// Extra set system checked by the is_cover invariant of verify-all.
  std::optional<SetSystem> candidate_cover;

  /// Rebuilds `lambdas` against the current family (uniform where not given).
  static Instance from_family(SetSystem family, std::optional<FractionalCover> cover = {});
};

Instance instance_from_json(const nlohmann::json& j);
nlohmann::json instance_to_json(const Instance& instance);

Instance read_instance(const std::filesystem::path& path);

nlohmann::json subset_to_json(const Subset& s);
Subset subset_from_json(const nlohmann::json& j, int n);
nlohmann::json family_to_json(const SetSystem& family);
nlohmann::json cover_to_json(const FractionalCover& w);

/// FNV-1a of the canonical JSON dump, as 16 hex digits.
std::string content_hash(const nlohmann::json& j);

/// Writes via a temporary sibling and rename.
void write_atomic(const std::filesystem::path& path, const std::string& content);

} // namespace tlab

#endif // TLAB_IO_HPP
