#pragma once

#include <cstdint>
#include <random>

namespace lmk {

inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

/// Seeded uniform source. Built on mt19937_64, whose output stream is fixed
/// by the standard; the double mapping below is ours, so the same seed gives
/// the same draws on every platform. (The std:: distributions are
/// implementation-defined and are deliberately not used.)
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), gen_(seed) {}

  /// Uniform on [0, 1), 53 random bits.
  double unit() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  /// Uniform on [lo, hi). Degenerate ranges return lo + 0 exactly.
  double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }

  std::uint64_t next_u64() { return gen_(); }

  /// Child stream keyed by (original seed, stream id); independent of how
  /// much this generator has been consumed.
  Rng derive(std::uint64_t stream) const { return Rng(mix64(seed_ + mix64(stream + 1))); }

  std::uint64_t seed() const noexcept { return seed_; }

 private:
  std::uint64_t seed_;
  std::mt19937_64 gen_;
};

}  // namespace lmk
