#ifndef DFP_RNG_HPP_
#define DFP_RNG_HPP_

#include <cmath>
#include <cstdint>

namespace dfp {

// Counter-based generator: output i is a pure hash of (key, i), so streams
// are bit-identical across platforms and trials can be split without
// touching shared state.
inline uint64_t mix64(uint64_t x) {
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

inline uint64_t counter_hash(uint64_t key, uint64_t counter) {
  return mix64(key + counter * 0x9E3779B97F4A7C15ull);
}

// Per-trial seed derivation: distinct (master, index) pairs give
// statistically independent streams.
inline uint64_t split_seed(uint64_t master, uint64_t trial_index) {
  return counter_hash(mix64(master ^ 0x6A09E667F3BCC909ull), trial_index);
}

class Rng {
 public:
  explicit Rng(uint64_t seed) : key_(mix64(seed ^ 0xA5A5A5A5DEADBEEFull)) {}

  uint64_t next_u64() { return counter_hash(key_, counter_++); }

  // Uniform on [0,1), 53-bit resolution.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform on (0,1]; safe as a log() argument.
  double uniform_pos() {
    return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
  }

  // Unbiased integer in [0, n) by rejection.
  uint64_t below(uint64_t n) {
    uint64_t threshold = (0 - n) % n;
    for (;;) {
      uint64_t r = next_u64();
      if (r >= threshold) return r % n;
    }
  }

  // Box-Muller; second deviate cached. Used instead of std::normal_distribution
  // because the latter's stream is implementation-defined.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform_pos();
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double theta = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(theta);
    have_spare_ = true;
    return r * std::cos(theta);
  }

 private:
  uint64_t key_;
  uint64_t counter_ = 0;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace dfp

#endif  // DFP_RNG_HPP_
