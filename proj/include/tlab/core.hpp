#ifndef TLAB_CORE_HPP
#define TLAB_CORE_HPP

#include "tlab/subset.hpp"

#include <Eigen/Dense>
#include <boost/multiprecision/cpp_int.hpp>
#include <boost/multiprecision/eigen.hpp>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace tlab {

/// Bad input: malformed instance, violated precondition.
class InputError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// A computation would exceed its configured budget.
class ResourceError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Exact rational scalar (expression templates off so it plays well with Eigen).
using Rational = boost::multiprecision::number<
    boost::multiprecision::cpp_rational_backend, boost::multiprecision::et_off>;

template <class Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <class Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

/// Comparison slack used for closed inequalities. Zero for exact scalars.
template <class Scalar>
struct ScalarTraits {
  static Scalar tolerance() { return Scalar(1e-12); }
};
template <>
struct ScalarTraits<Rational> {
  static Rational tolerance() { return Rational(0); }
};

inline constexpr double kTolerance = 1e-12;

class GroundSet {
public:
  explicit GroundSet(int n);
  int size() const { return n_; }
  Subset all() const { return Subset::full(n_); }
  bool contains(const Subset& s) const { return s.is_subset_of(all()); }
  friend bool operator==(const GroundSet&, const GroundSet&) = default;

private:
  int n_;
};

/**
 * A finite family of distinct subsets of a ground set. Members are
 * deduplicated and kept in canonical order.
 */
class SetSystem {
public:
  explicit SetSystem(GroundSet ground, std::vector<Subset> members = {});
  static SetSystem from_lists(int n, const std::vector<std::vector<int>>& lists);

  const GroundSet& ground() const { return ground_; }
  int n() const { return ground_.size(); }
  const std::vector<Subset>& members() const { return members_; }
  std::size_t size() const { return members_.size(); }
  bool empty() const { return members_.empty(); }
  const Subset& operator[](std::size_t i) const { return members_[i]; }

  /// Index of `s` among the members, or -1.
  long index_of(const Subset& s) const;
  bool contains(const Subset& s) const { return index_of(s) >= 0; }
  int max_member_size() const;

  std::vector<std::vector<int>> to_lists() const;

  friend bool operator==(const SetSystem&, const SetSystem&) = default;

private:
  GroundSet ground_;
  std::vector<Subset> members_;
};

/// Sparse weights on subsets, each weight in [0,1]; entries in canonical order.
template <class Scalar>
class BasicFractionalCover {
public:
  using Entry = std::pair<Subset, Scalar>;

  BasicFractionalCover(GroundSet ground, std::vector<Entry> entries)
      : ground_(ground), entries_(std::move(entries)) {
    std::sort(entries_.begin(), entries_.end(),
              [](const Entry& a, const Entry& b) { return a.first < b.first; });
    for (std::size_t i = 0; i < entries_.size(); ++i) {
      const auto& [set, weight] = entries_[i];
      if (!ground_.contains(set))
        throw InputError("fractional cover set " + set.to_string() +
                         " leaves the ground set");
      if (weight < Scalar(0) || weight > Scalar(1))
        throw InputError("fractional cover weight outside [0,1] on " +
                         set.to_string());
      if (i > 0 && entries_[i - 1].first == set)
        throw InputError("duplicate fractional cover set " + set.to_string());
    }
  }

  const GroundSet& ground() const { return ground_; }
  int n() const { return ground_.size(); }
  const std::vector<Entry>& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }

  /// Largest support set size (entries with positive weight).
  int support_bound() const {
    int t = 0;
    for (const auto& [set, weight] : entries_)
      if (weight > Scalar(0)) t = std::max(t, set.size());
    return t;
  }

  /// Sum of w(W) over support sets W contained in `host`.
  Scalar mass_inside(const Subset& host) const {
    Scalar sum(0);
    for (const auto& [set, weight] : entries_)
      if (set.is_subset_of(host)) sum += weight;
    return sum;
  }

  /// Sum of w(W) p^|W|.
  Scalar cost(const Scalar& p) const {
    Scalar sum(0);
    for (const auto& [set, weight] : entries_) {
      Scalar term = weight;
      for (int k = 0; k < set.size(); ++k) term *= p;
      sum += term;
    }
    return sum;
  }

private:
  GroundSet ground_;
  std::vector<Entry> entries_;
};

using FractionalCover = BasicFractionalCover<double>;
using RationalFractionalCover = BasicFractionalCover<Rational>;

/// Element weights supported on a host set; zero outside the host.
template <class Scalar>
class BasicWeightVector {
public:
  BasicWeightVector(int n, Subset host, Vector<Scalar> weights)
      : host_(host), weights_(std::move(weights)) {
    if (weights_.size() != n)
      throw InputError("weight vector length does not match the ground set");
    for (int x = 0; x < n; ++x) {
      if (weights_(x) < Scalar(0) || weights_(x) > Scalar(1))
        throw InputError("weight outside [0,1] at element " + std::to_string(x));
      if (!host_.contains(x) && weights_(x) != Scalar(0))
        throw InputError("weight vector not supported on its host");
    }
  }

  /// 1/|H| on every element of H.
  static BasicWeightVector uniform(int n, const Subset& host) {
    Vector<Scalar> w = Vector<Scalar>::Zero(n);
    const int k = host.size();
    host.for_each([&](int x) { w(x) = Scalar(1) / Scalar(k); });
    return BasicWeightVector(n, host, std::move(w));
  }

  int n() const { return static_cast<int>(weights_.size()); }
  const Subset& host() const { return host_; }
  const Vector<Scalar>& weights() const { return weights_; }
  const Scalar& operator()(int x) const { return weights_(x); }
  Scalar total() const { return weights_.sum(); }

private:
  Subset host_;
  Vector<Scalar> weights_;
};

using WeightVector = BasicWeightVector<double>;
using RationalWeightVector = BasicWeightVector<Rational>;

/// True iff every member of `family` contains some member of `candidate`.
bool is_cover(const SetSystem& candidate, const SetSystem& family);

/// Sum of p^|G| over the candidate's members.
double cover_cost(const SetSystem& candidate, double p);

/// Total weight captured inside every member, up to the closed-inequality tolerance.
template <class Scalar>
bool is_fractional_cover(const BasicFractionalCover<Scalar>& w,
                         const SetSystem& family) {
  if (!(w.ground() == family.ground()))
    throw InputError("fractional cover and family use different ground sets");
  const Scalar one_minus = Scalar(1) - ScalarTraits<Scalar>::tolerance();
  for (const auto& h : family.members())
    if (w.mass_inside(h) < one_minus) return false;
  return true;
}

/// lambda(S) = sum of lambda(x) over x in S and in the host.
template <class Scalar>
Scalar weighted_mass(const BasicWeightVector<Scalar>& lambda, const Subset& s) {
  Scalar sum(0);
  (s & lambda.host()).for_each([&](int x) { sum += lambda(x); });
  return sum;
}

/// Uniform weight vector for every member (empty members get zero weights).
std::vector<WeightVector> uniform_lambdas(const SetSystem& family);

/// p^k for small integer k; exact 1 at k = 0.
inline double power(double p, int k) {
  double r = 1.0;
  for (int i = 0; i < k; ++i) r *= p;
  return r;
}

} // namespace tlab

#endif // TLAB_CORE_HPP
