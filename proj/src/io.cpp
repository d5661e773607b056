#include "tlab/io.hpp"

#include "tlab/rng.hpp"

#include <fstream>
#include <sstream>
#include <unistd.h>

namespace tlab {

using nlohmann::json;

namespace {

int require_int(const json& j, const char* what) {
  if (!j.is_number_integer()) throw InputError(std::string(what) + " must be an integer");
  return j.get<int>();
}

double require_number(const json& j, const char* what) {
  if (!j.is_number()) throw InputError(std::string(what) + " must be a number");
  return j.get<double>();
}

} // namespace

Instance Instance::from_family(SetSystem family, std::optional<FractionalCover> cover) {
  Instance out;
  out.family = std::move(family);
  out.fractional_cover = std::move(cover);
  for (const auto& h : out.family.members()) {
    out.lambdas.push_back(WeightVector::uniform(out.family.n(), h));
    out.lambda_given.push_back(false);
  }
  return out;
}

json subset_to_json(const Subset& s) { return s.elements(); }

Subset subset_from_json(const json& j, int n) {
  if (!j.is_array()) throw InputError("a set must be a JSON array of element indices");
  Subset s;
  for (const auto& e : j) {
    const int x = require_int(e, "set element");
    if (x < 0 || x >= n)
      throw InputError("element " + std::to_string(x) + " outside ground set of size " +
                       std::to_string(n));
    s.insert(x);
  }
  return s;
}

json family_to_json(const SetSystem& family) {
  json out = json::array();
  for (const auto& h : family.members()) out.push_back(subset_to_json(h));
  return out;
}

json cover_to_json(const FractionalCover& w) {
  json out = json::array();
  for (const auto& [set, weight] : w.entries())
    out.push_back({{"set", subset_to_json(set)}, {"weight", weight}});
  return out;
}

Instance instance_from_json(const json& j) {
  if (!j.is_object()) throw InputError("instance must be a JSON object");
  if (!j.contains("n")) throw InputError("instance is missing \"n\"");
  if (!j.contains("family")) throw InputError("instance is missing \"family\"");
  const int n = require_int(j.at("n"), "n");
  const GroundSet ground(n);
  if (!j.at("family").is_array()) throw InputError("\"family\" must be an array");
  std::vector<Subset> members;
  for (const auto& m : j.at("family")) members.push_back(subset_from_json(m, n));

  std::optional<FractionalCover> cover;
  if (j.contains("fractional_cover") && !j.at("fractional_cover").is_null()) {
    std::vector<FractionalCover::Entry> entries;
    for (const auto& e : j.at("fractional_cover")) {
      if (!e.is_object() || !e.contains("set") || !e.contains("weight"))
        throw InputError("fractional_cover entries need \"set\" and \"weight\"");
      entries.emplace_back(subset_from_json(e.at("set"), n),
                           require_number(e.at("weight"), "weight"));
    }
    cover = FractionalCover(ground, std::move(entries));
  }

  Instance out = Instance::from_family(SetSystem(ground, std::move(members)), std::move(cover));

  if (j.contains("lambdas") && !j.at("lambdas").is_null()) {
    for (const auto& e : j.at("lambdas")) {
      if (!e.is_object() || !e.contains("host") || !e.contains("weights"))
        throw InputError("lambdas entries need \"host\" and \"weights\"");
      const Subset host = subset_from_json(e.at("host"), n);
      const int idx = out.family.index_of(host);
      if (idx < 0) throw InputError("lambda host " + host.to_string() + " is not a member");
      Vector<double> weights = Vector<double>::Zero(n);
      if (!e.at("weights").is_object()) throw InputError("lambda weights must be an object");
      for (const auto& [key, value] : e.at("weights").items()) {
        int x = -1;
        try {
          std::size_t used = 0;
          x = std::stoi(key, &used);
          if (used != key.size()) x = -1;
        } catch (const std::exception&) {
          x = -1;
        }
        if (x < 0 || x >= n) throw InputError("lambda weight key \"" + key + "\" is not an element");
        weights(x) = require_number(value, "lambda weight");
      }
      out.lambdas[idx] = WeightVector(n, host, std::move(weights));
      out.lambda_given[idx] = true;
    }
  }

  if (j.contains("candidate_cover") && !j.at("candidate_cover").is_null()) {
    std::vector<Subset> sets;
    for (const auto& m : j.at("candidate_cover")) sets.push_back(subset_from_json(m, n));
    out.candidate_cover = SetSystem(ground, std::move(sets));
  }
  return out;
}

json instance_to_json(const Instance& instance) {
  json out;
  out["n"] = instance.family.n();
  out["family"] = family_to_json(instance.family);
  if (instance.fractional_cover) out["fractional_cover"] = cover_to_json(*instance.fractional_cover);
  json lambdas = json::array();
  for (std::size_t i = 0; i < instance.lambdas.size(); ++i) {
    if (!instance.lambda_given[i]) continue;
    const auto& lam = instance.lambdas[i];
    json weights = json::object();
    lam.host().for_each([&](int x) { weights[std::to_string(x)] = lam(x); });
    lambdas.push_back({{"host", subset_to_json(lam.host())}, {"weights", weights}});
  }
  if (!lambdas.empty()) out["lambdas"] = lambdas;
  if (instance.candidate_cover) out["candidate_cover"] = family_to_json(*instance.candidate_cover);
  return out;
}

Instance read_instance(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open instance file " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw InputError("malformed JSON in " + path.string() + ": " + e.what());
  }
  return instance_from_json(j);
}

std::string content_hash(const json& j) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(fnv1a(j.dump())));
  return buf;
}

void write_atomic(const std::filesystem::path& path, const std::string& content) {
  auto tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw InputError("write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw InputError("cannot rename onto " + path.string() + ": " + ec.message());
  }
}

} // namespace tlab
