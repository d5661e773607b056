#include "tlab/core.hpp"

#include <sstream>

namespace tlab {

Subset::Subset(std::initializer_list<int> elements)
    : Subset(std::span<const int>(elements.begin(), elements.size())) {}

Subset::Subset(std::span<const int> elements) {
  for (int x : elements) {
    if (x < 0 || x >= kMaxElements)
      throw InputError("element " + std::to_string(x) + " outside [0, " +
                       std::to_string(kMaxElements) + ")");
    insert(x);
  }
}

Subset Subset::full(int n) {
  Subset s;
  for (int i = 0; i < kWords && n > 0; ++i, n -= 64)
    s.words_[i] = n >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;
  return s;
}

Subset Subset::singleton(int x) {
  Subset s;
  s.insert(x);
  return s;
}

int Subset::min_element() const {
  for (int i = 0; i < kWords; ++i)
    if (words_[i]) return i * 64 + std::countr_zero(words_[i]);
  return -1;
}

int Subset::max_element() const {
  for (int i = kWords - 1; i >= 0; --i)
    if (words_[i]) return i * 64 + 63 - std::countl_zero(words_[i]);
  return -1;
}

std::vector<int> Subset::elements() const {
  std::vector<int> out;
  out.reserve(size());
  for_each([&](int x) { out.push_back(x); });
  return out;
}

bool operator<(const Subset& a, const Subset& b) {
  const int sa = a.size(), sb = b.size();
  if (sa != sb) return sa < sb;
  // Equal sizes: the smallest element of the symmetric difference decides.
  const int x = (a ^ b).min_element();
  return x >= 0 && a.contains(x);
}

std::size_t Subset::hash() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (auto w : words_) {
    h ^= w;
    h *= 0x100000001b3ULL;
    h ^= h >> 29;
  }
  return static_cast<std::size_t>(h);
}

std::string Subset::to_string() const {
  std::ostringstream os;
  os << '{';
  bool first = true;
  for_each([&](int x) {
    if (!first) os << ',';
    os << x;
    first = false;
  });
  os << '}';
  return os.str();
}

GroundSet::GroundSet(int n) : n_(n) {
  if (n < 1 || n > kMaxElements)
    throw InputError("ground set size " + std::to_string(n) + " outside [1, " +
                     std::to_string(kMaxElements) + "]");
}

SetSystem::SetSystem(GroundSet ground, std::vector<Subset> members)
    : ground_(ground), members_(std::move(members)) {
  for (const auto& m : members_)
    if (!ground_.contains(m))
      throw InputError("member " + m.to_string() + " leaves the ground set of size " +
                       std::to_string(ground_.size()));
  std::sort(members_.begin(), members_.end());
  members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
}

SetSystem SetSystem::from_lists(int n, const std::vector<std::vector<int>>& lists) {
  GroundSet ground(n);
  std::vector<Subset> members;
  members.reserve(lists.size());
  for (const auto& l : lists) {
    for (int x : l)
      if (x < 0 || x >= n)
        throw InputError("element " + std::to_string(x) + " outside [0, " +
                         std::to_string(n) + ")");
    members.emplace_back(std::span<const int>(l));
  }
  return SetSystem(ground, std::move(members));
}

long SetSystem::index_of(const Subset& s) const {
  auto it = std::lower_bound(members_.begin(), members_.end(), s);
  if (it == members_.end() || !(*it == s)) return -1;
  return static_cast<long>(it - members_.begin());
}

int SetSystem::max_member_size() const {
  int k = 0;
  for (const auto& m : members_) k = std::max(k, m.size());
  return k;
}

std::vector<std::vector<int>> SetSystem::to_lists() const {
  std::vector<std::vector<int>> out;
  out.reserve(members_.size());
  for (const auto& m : members_) out.push_back(m.elements());
  return out;
}

bool is_cover(const SetSystem& candidate, const SetSystem& family) {
  if (!(candidate.ground() == family.ground()))
    throw InputError("candidate and family use different ground sets");
  for (const auto& h : family.members()) {
    const bool hit = std::any_of(candidate.members().begin(), candidate.members().end(),
                                 [&](const Subset& g) { return g.is_subset_of(h); });
    if (!hit) return false;
  }
  return true;
}

double cover_cost(const SetSystem& candidate, double p) {
  if (!(p >= 0.0 && p <= 1.0))
    throw InputError("probability " + std::to_string(p) + " outside [0,1]");
  double sum = 0.0;
  for (const auto& g : candidate.members()) sum += power(p, g.size());
  return sum;
}

std::vector<WeightVector> uniform_lambdas(const SetSystem& family) {
  std::vector<WeightVector> out;
  out.reserve(family.size());
  for (const auto& h : family.members())
    out.push_back(WeightVector::uniform(family.n(), h));
  return out;
}

} // namespace tlab
