#ifndef TLAB_SUBSET_HPP
#define TLAB_SUBSET_HPP

#include <array>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace tlab {

/// Largest ground set a Subset can index.
inline constexpr int kMaxElements = 256;

/**
 * A subset of a ground set {0, ..., kMaxElements-1} stored as a fixed-width
 * bitset. All set operations are constant time.
 *
 * The canonical order (operator<) sorts by size first, then
 * lexicographically by the sorted element indices.
 */
class Subset {
public:
  static constexpr int kWords = kMaxElements / 64;

  Subset() = default;
  Subset(std::initializer_list<int> elements);
  explicit Subset(std::span<const int> elements);

  static Subset full(int n);
  static Subset singleton(int x);

  bool contains(int x) const {
    return (words_[x >> 6] >> (x & 63)) & 1u;
  }
  void insert(int x) { words_[x >> 6] |= std::uint64_t{1} << (x & 63); }
  void erase(int x) { words_[x >> 6] &= ~(std::uint64_t{1} << (x & 63)); }

  int size() const {
    int c = 0;
    for (auto w : words_) c += std::popcount(w);
    return c;
  }
  bool empty() const {
    for (auto w : words_)
      if (w) return false;
    return true;
  }

  bool is_subset_of(const Subset& other) const {
    for (int i = 0; i < kWords; ++i)
      if (words_[i] & ~other.words_[i]) return false;
    return true;
  }
  bool intersects(const Subset& other) const {
    for (int i = 0; i < kWords; ++i)
      if (words_[i] & other.words_[i]) return true;
    return false;
  }

  /// Smallest element, or -1 when empty.
  int min_element() const;
  /// Largest element, or -1 when empty.
  int max_element() const;

  std::vector<int> elements() const;

  template <class F>
  void for_each(F&& f) const {
    for (int i = 0; i < kWords; ++i) {
      std::uint64_t w = words_[i];
      while (w) {
        f(i * 64 + std::countr_zero(w));
        w &= w - 1;
      }
    }
  }

  Subset& operator|=(const Subset& o) {
    for (int i = 0; i < kWords; ++i) words_[i] |= o.words_[i];
    return *this;
  }
  Subset& operator&=(const Subset& o) {
    for (int i = 0; i < kWords; ++i) words_[i] &= o.words_[i];
    return *this;
  }
  /// Set difference.
  Subset& operator-=(const Subset& o) {
    for (int i = 0; i < kWords; ++i) words_[i] &= ~o.words_[i];
    return *this;
  }
  Subset& operator^=(const Subset& o) {
    for (int i = 0; i < kWords; ++i) words_[i] ^= o.words_[i];
    return *this;
  }

  friend Subset operator|(Subset a, const Subset& b) { return a |= b; }
  friend Subset operator&(Subset a, const Subset& b) { return a &= b; }
  friend Subset operator-(Subset a, const Subset& b) { return a -= b; }
  friend Subset operator^(Subset a, const Subset& b) { return a ^= b; }

  friend bool operator==(const Subset&, const Subset&) = default;
  /// Canonical order: size, then lexicographic on sorted elements.
  friend bool operator<(const Subset& a, const Subset& b);

  std::size_t hash() const;
  std::string to_string() const;

private:
  std::array<std::uint64_t, kWords> words_{};
};

struct SubsetHash {
  std::size_t operator()(const Subset& s) const { return s.hash(); }
};

/// Visits the k-subsets of `mask` in lexicographic order of their sorted
/// elements. `f` returns false to stop; the function returns false iff
/// stopped early.
template <class F>
bool for_each_subset_of_size(const Subset& mask, int k, F&& f) {
  const std::vector<int> elems = mask.elements();
  const int m = static_cast<int>(elems.size());
  if (k < 0 || k > m) return true;
  std::vector<int> idx(k);
  for (int i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    Subset s;
    for (int i : idx) s.insert(elems[i]);
    if (!f(s)) return false;
    int i = k - 1;
    while (i >= 0 && idx[i] == m - k + i) --i;
    if (i < 0) return true;
    ++idx[i];
    for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

/// Visits every subset of `mask` in canonical order.
template <class F>
bool for_each_subset(const Subset& mask, F&& f) {
  const int m = mask.size();
  for (int k = 0; k <= m; ++k)
    if (!for_each_subset_of_size(mask, k, f)) return false;
  return true;
}

} // namespace tlab

#endif // TLAB_SUBSET_HPP
