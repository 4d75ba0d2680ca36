// Seeded random streams. Every consumer of randomness owns an Rng built from
// (master seed, stream tag, index), so runs are reproducible bit-for-bit and
// independent streams never alias. Distribution transforms are done by hand
// from raw engine output because the std:: distribution algorithms are
// implementation-defined and would break cross-build reproducibility.
#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace smartran {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// well-known stream tags; any uint64 works, these keep call sites readable
namespace stream {
inline constexpr std::uint64_t topology = 0x01;
inline constexpr std::uint64_t channel = 0x02;
inline constexpr std::uint64_t agent_init = 0x03;
inline constexpr std::uint64_t agent_noise = 0x04;
inline constexpr std::uint64_t replay = 0x05;
inline constexpr std::uint64_t oracle = 0x06;
}  // namespace stream

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}
  Rng(std::uint64_t seed, std::uint64_t tag, std::uint64_t index = 0)
      : engine_(splitmix64(splitmix64(splitmix64(seed) ^ tag) ^ index)) {}

  std::uint64_t next_u64() { return engine_(); }

  // uniform on [0, 1): 53 mantissa bits
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // [0, n)
  int uniform_int(int n) { return static_cast<int>(engine_() % static_cast<std::uint64_t>(n)); }

  // unit-mean exponential
  double exponential() { return -std::log1p(-uniform()); }

  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = uniform(), u2 = uniform();
    double r = std::sqrt(-2.0 * std::log1p(-u1));
    double th = 2.0 * M_PI * u2;
    spare_ = r * std::sin(th);
    has_spare_ = true;
    return r * std::cos(th);
  }

  // standard Gumbel, for categorical sampling via argmax(logits + gumbel)
  double gumbel() {
    double u = uniform();
    if (u <= 0.0) u = 0x1.0p-53;
    return -std::log(-std::log(u));
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace smartran
