#ifndef TLAB_RNG_HPP
#define TLAB_RNG_HPP

#include <cstdint>
#include <limits>
#include <string_view>

namespace tlab {

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Stable 64-bit FNV-1a, used to name substreams.
constexpr std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

/**
 * Counter-based generator: the i-th output of the stream keyed by
 * (seed, substream, index) is mix64(key + i * golden). Streams for
 * different trial indices are independent of evaluation order, so trials
 * can run in any order or in parallel and still reproduce bit for bit.
 */
class CounterRng {
public:
  using result_type = std::uint64_t;

  CounterRng(std::uint64_t seed, std::uint64_t substream, std::uint64_t index)
      : key_(mix64(mix64(seed ^ 0x6a09e667f3bcc909ULL) ^ substream) + mix64(index)) {}
  CounterRng(std::uint64_t seed, std::string_view substream, std::uint64_t index)
      : CounterRng(seed, fnv1a(substream), index) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() { return mix64(key_ + (++counter_) * 0x9e3779b97f4a7c15ULL); }

  /// Uniform on [0,1) with 53 random bits.
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return uniform() < p; }

  std::uint64_t below(std::uint64_t bound) {
    // multiply-shift reduction
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>((*this)()) * bound) >> 64);
  }

private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

} // namespace tlab

#endif // TLAB_RNG_HPP
