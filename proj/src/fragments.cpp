#include "tlab/fragments.hpp"

#include <functional>
#include <unordered_set>

namespace tlab {

namespace {

void check_lambdas(const SetSystem& family, std::span<const WeightVector> lambdas) {
  if (lambdas.size() != family.size())
    throw InputError("need one weight vector per family member");
}

/// Enumerates disjoint fragment tuples with prescribed sizes.
bool for_each_tower(std::span<const Subset> avail, std::span<const int> sizes,
                    std::size_t i, Subset used, std::vector<Subset>& out,
                    const std::function<bool(const std::vector<Subset>&)>& f) {
  if (i == avail.size()) return f(out);
  return for_each_subset_of_size(avail[i] - used, sizes[i], [&](const Subset& T) {
    out[i] = T;
    return for_each_tower(avail, sizes, i + 1, used | T, out, f);
  });
}

} // namespace

CutoffResult cutoff(const Subset& W, const Subset& H, const WeightVector& lambda) {
  CutoffResult r;
  r.ordered = H.elements();
  std::stable_sort(r.ordered.begin(), r.ordered.end(),
                   [&](int a, int b) { return lambda(a) > lambda(b); });
  const int k = static_cast<int>(r.ordered.size());

  // suffix sums over positions b..k (0-based index b-1)
  std::vector<double> total(k + 1, 0.0), inside(k + 1, 0.0);
  for (int pos = k - 1; pos >= 0; --pos) {
    const int x = r.ordered[pos];
    total[pos] = total[pos + 1] + lambda(x);
    inside[pos] = inside[pos + 1] + (W.contains(x) ? lambda(x) : 0.0);
  }
  int cut = k;
  for (int pos = 0; pos <= k; ++pos)
    if (inside[pos] >= 0.5 * total[pos] - kTolerance) {
      cut = pos;
      break;
    }
  r.b = cut + 1;
  for (int pos = 0; pos < k; ++pos)
    (pos < cut ? r.below : r.at_or_above).insert(r.ordered[pos]);
  return r;
}

Subset ResidualTrace::residual_union() const {
  Subset u;
  for (const auto& r : residuals) u |= r;
  return u;
}

ResidualTrace residual_trace(std::span<const Subset> samples, const Subset& H,
                             const WeightVector& lambda) {
  ResidualTrace tr;
  tr.samples.assign(samples.begin(), samples.end());
  tr.chain.push_back(H);
  for (const auto& w : samples) {
    const auto cut = cutoff(w, tr.chain.back(), lambda);
    tr.b.push_back(cut.b);
    tr.residuals.push_back(cut.below);
    tr.chain.push_back(cut.at_or_above - w);
  }
  return tr;
}

std::optional<Witness> find_witness(std::span<const Subset> Z, std::span<const int> t,
                                    const SetSystem& family,
                                    std::span<const WeightVector> lambdas) {
  check_lambdas(family, lambdas);
  const std::size_t s = Z.size();
  if (t.size() != s) throw InputError("Z and t have different lengths");
  for (std::size_t i = 0; i < s; ++i)
    if (t[i] < 0 || t[i] > Z[i].size())
      throw InputError("fragment size out of range for Z_" + std::to_string(i + 1));

  for (std::size_t h = 0; h < family.size(); ++h) {
    const Subset& host = family[h];
    const WeightVector& lambda = lambdas[h];
    ResidualTrace tr;
    tr.chain.push_back(host);

    std::function<bool(std::size_t)> descend = [&](std::size_t i) -> bool {
      if (i == s) return true;
      const Subset current = tr.chain.back();
      // Candidates agreeing inside the current chain set produce the same
      // trace; only the lexicographically first of each class is expanded.
      std::unordered_set<Subset, SubsetHash> tried;
      return !for_each_subset_of_size(Z[i], Z[i].size() - t[i], [&](const Subset& w) {
        if (!tried.insert(w & current).second) return true;
        const auto cut = cutoff(w, current, lambda);
        if (!cut.below.is_subset_of(Z[i])) return true;
        tr.samples.push_back(w);
        tr.b.push_back(cut.b);
        tr.residuals.push_back(cut.below);
        tr.chain.push_back(cut.at_or_above - w);
        if (descend(i + 1)) return false;
        tr.samples.pop_back();
        tr.b.pop_back();
        tr.residuals.pop_back();
        tr.chain.pop_back();
        return true;
      });
    };
    if (descend(0)) return Witness{h, host, std::move(tr)};
  }
  return std::nullopt;
}

Subset TowerCertificate::fragment_union() const {
  Subset u;
  for (const auto& f : fragments) u |= f;
  return u;
}

int TowerCertificate::u() const {
  int total = 0;
  for (int k : sizes) total += k;
  return total;
}

std::vector<Subset> fallback_tower(std::span<const Subset> samples, const Subset& H,
                                   const WeightVector& lambda) {
  const auto tr = residual_trace(samples, H, lambda);
  std::vector<Subset> out;
  for (std::size_t i = 0; i < samples.size(); ++i)
    out.push_back(tr.residuals[i] - samples[i]);
  return out;
}

TowerCertificate minimum_tower(std::span<const Subset> samples, const Subset& H,
                               const SetSystem& family,
                               std::span<const WeightVector> lambdas,
                               const TowerBudget& budget) {
  check_lambdas(family, lambdas);
  const long member = family.index_of(H);
  if (member < 0) throw InputError("host " + H.to_string() + " is not a family member");
  if (H.size() > budget.max_host || static_cast<int>(samples.size()) > budget.max_rounds ||
      family.size() > budget.max_family)
    throw ResourceError("tower search beyond budget: |H|=" + std::to_string(H.size()) +
                        ", s=" + std::to_string(samples.size()) +
                        ", |family|=" + std::to_string(family.size()));

  const std::size_t s = samples.size();
  std::vector<Subset> avail(s);
  for (std::size_t i = 0; i < s; ++i) avail[i] = H - samples[i];

  std::optional<TowerCertificate> found;
  std::vector<int> sizes(s, 0);
  std::vector<Subset> fragments(s);

  // Size vectors in lexicographic order; the first feasible one is minimal.
  std::function<bool(std::size_t, int)> over_sizes = [&](std::size_t i, int used) -> bool {
    if (i == s) {
      return !for_each_tower(avail, sizes, 0, Subset{}, fragments,
                             [&](const std::vector<Subset>& T) {
                               std::vector<Subset> Z(s);
                               for (std::size_t j = 0; j < s; ++j) Z[j] = T[j] | samples[j];
                               auto wit = find_witness(Z, sizes, family, lambdas);
                               if (!wit) return true;
                               found = TowerCertificate{
                                   SampleTuple(samples.begin(), samples.end()), H, T,
                                   Z, sizes, std::move(*wit)};
                               return false;
                             });
    }
    for (int k = 0; k <= avail[i].size() && used + k <= H.size(); ++k) {
      sizes[i] = k;
      if (over_sizes(i + 1, used + k)) return true;
    }
    sizes[i] = 0;
    return false;
  };
  over_sizes(0, 0);
  if (!found) throw std::logic_error("no tower of fragments found; fallback must exist");
  return std::move(*found);
}

SetSystem tower_cover(std::span<const Subset> samples, const SetSystem& family,
                      std::span<const WeightVector> lambdas, const TowerBudget& budget) {
  std::vector<Subset> unions;
  unions.reserve(family.size());
  for (const auto& h : family.members())
    unions.push_back(minimum_tower(samples, h, family, lambdas, budget).fragment_union());
  return SetSystem(family.ground(), std::move(unions));
}

DecodedTower decode_fragments(std::span<const Subset> Z, std::span<const int> t,
                              const Subset& U, const SetSystem& family,
                              std::span<const WeightVector> lambdas) {
  const auto wit = find_witness(Z, t, family, lambdas);
  if (!wit) throw InputError("Z is not t-feasible; nothing to decode");
  int total = 0;
  for (int k : t) total += k;
  if (!U.is_subset_of(wit->trace.residual_union()) || U.size() != total)
    throw InputError("U must be a subset of the witness residuals with |U| = sum t");
  DecodedTower out;
  for (std::size_t i = 0; i < Z.size(); ++i) {
    const Subset T = U & wit->residuals()[i];
    out.fragments.push_back(T);
    out.samples.push_back(Z[i] - T);
  }
  return out;
}

bool verify_key_property(const TowerCertificate& cert) {
  const auto& res = cert.witness.residuals();
  if (res.size() != cert.fragments.size()) return false;
  for (std::size_t i = 0; i < res.size(); ++i) {
    if (!cert.fragments[i].is_subset_of(res[i])) return false;
    if (2 * cert.fragments[i].size() < res[i].size()) return false;
  }
  return true;
}

TowerAudit audit_tower(const TowerCertificate& cert, const SetSystem& family,
                       std::span<const WeightVector> lambdas) {
  TowerAudit a;
  const std::size_t s = cert.samples.size();
  const auto& W = cert.samples;
  const auto& T = cert.fragments;

  a.fragments_valid = T.size() == s && cert.unions.size() == s && cert.sizes.size() == s;
  Subset used;
  for (std::size_t i = 0; a.fragments_valid && i < s; ++i) {
    a.fragments_valid = T[i].is_subset_of(cert.host - W[i]) && !T[i].intersects(used) &&
                        cert.unions[i] == (T[i] | W[i]) && T[i].size() == cert.sizes[i];
    used |= T[i];
  }

  const auto& wit = cert.witness;
  a.witness_valid = wit.samples().size() == s;
  if (a.witness_valid) {
    const auto& lambda = lambdas[wit.member];
    const auto replay = residual_trace(wit.samples(), wit.host, lambda);
    a.witness_valid = family[wit.member] == wit.host && replay.residuals == wit.residuals();
    for (std::size_t i = 0; a.witness_valid && i < s; ++i)
      a.witness_valid = wit.samples()[i].is_subset_of(cert.unions[i]) &&
                        wit.samples()[i].size() == cert.unions[i].size() - cert.sizes[i] &&
                        wit.residuals()[i].is_subset_of(cert.unions[i]);
  }

  const long member = family.index_of(cert.host);
  if (member >= 0) {
    const auto fb = fallback_tower(W, cert.host, lambdas[member]);
    std::vector<Subset> Z(s);
    std::vector<int> t(s);
    for (std::size_t i = 0; i < s; ++i) {
      Z[i] = fb[i] | W[i];
      t[i] = fb[i].size();
    }
    a.fallback_valid = find_witness(Z, t, family, lambdas).has_value();
    a.size_not_above_fallback = !std::lexicographical_compare(t.begin(), t.end(),
                                                              cert.sizes.begin(),
                                                              cert.sizes.end());
  }

  if (wit.residuals().size() == s) {
    a.containment = a.half_size = true;
    for (std::size_t i = 0; i < s; ++i) {
      a.containment = a.containment && T[i].is_subset_of(wit.residuals()[i]);
      a.half_size = a.half_size && 2 * T[i].size() >= wit.residuals()[i].size();
    }
  }

  try {
    const auto back = decode_fragments(cert.unions, cert.sizes, cert.fragment_union(),
                                       family, lambdas);
    a.round_trip = back.samples == W && back.fragments == T;
  } catch (const InputError&) {
    a.round_trip = false;
  }
  return a;
}

} // namespace tlab
