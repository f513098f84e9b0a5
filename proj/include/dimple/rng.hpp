#pragma once

#include <array>
#include <cstdint>
#include <cstring>
#include <vector>

namespace dimple {

/// One step of the splitmix64 sequence; advances `x` and returns the output.
inline std::uint64_t splitmix64(std::uint64_t& x) {
  x += 0x9E3779B97F4A7C15ull;
  std::uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

/// Mixes a value into a hash/seed. Used for deriving independent RNG streams
/// and for the experiment grid's per-task seeds.
inline std::uint64_t hash_combine(std::uint64_t h, std::uint64_t v) {
  std::uint64_t x = h ^ (v + 0x9E3779B97F4A7C15ull + (h << 6) + (h >> 2));
  return splitmix64(x);
}

inline std::uint64_t hash_combine(std::uint64_t h, double v) {
  std::uint64_t bits;
  std::memcpy(&bits, &v, sizeof bits);
  return hash_combine(h, bits);
}

/// Deterministic xoshiro256++ generator, seeded through splitmix64.
///
/// All draws go through next_u64(), so the stream is bit-stable across
/// platforms and standard-library versions. Independent sub-streams are
/// derived with split(tag); splitting does not advance the parent.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed) {
    std::uint64_t x = seed;
    for (auto& word : state_) word = splitmix64(x);
    if ((state_[0] | state_[1] | state_[2] | state_[3]) == 0) state_[0] = 1;
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double a, double b) { return a + (b - a) * next_double(); }

  /// Always consumes exactly one draw, so the stream layout does not depend
  /// on the probability values.
  bool bernoulli(double p) { return next_double() < p; }

  /// Index in [0, probs.size()) by inverse-CDF walk; ties resolve to the
  /// lowest index. probs must be nonnegative and sum to ~1.
  int multinomial(const std::vector<double>& probs) {
    const double u = next_double();
    double cum = 0.0;
    for (std::size_t k = 0; k < probs.size(); ++k) {
      cum += probs[k];
      if (u < cum) return static_cast<int>(k);
    }
    return static_cast<int>(probs.size()) - 1;
  }

  /// Independent stream keyed by (this generator's seed, tag).
  Rng split(std::uint64_t tag) const { return Rng(hash_combine(seed_, tag)); }

  std::uint64_t seed() const { return seed_; }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

  std::uint64_t seed_;
  std::array<std::uint64_t, 4> state_;
};

}  // namespace dimple
