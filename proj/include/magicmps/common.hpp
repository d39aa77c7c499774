#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

#define MAGICMPS_VERSION "0.1.0"

namespace magicmps {

using cx = std::complex<double>;

// Exit-code-relevant error classes (see the CLI): config problems,
// numerical aborts (excessive truncation, non-positive contractions),
// and iteration limits reached without convergence.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ConvergenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Deterministic RNG. Distributions are implemented on top of the raw
/// mt19937_64 stream so results do not depend on the standard library's
/// distribution internals.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : s_(splitmix(seed)), s2_(splitmix(s_ ^ 0x9e3779b97f4a7c15ull)) {}

  std::uint64_t next_u64() {
    // xoshiro-style mix over two splitmix-updated words
    std::uint64_t x = s_;
    s_ = splitmix(s_);
    std::uint64_t y = s2_;
    s2_ = splitmix(s2_ + 0x9e3779b97f4a7c15ull);
    x ^= y >> 17;
    return splitmix(x);
  }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, n). Rejection sampling, unbiased.
  std::uint64_t uniform_int(std::uint64_t n) {
    if (n == 0) throw ConfigError("uniform_int: n must be positive");
    std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do {
      x = next_u64();
    } while (x >= limit);
    return x % n;
  }

  /// Standard normal via Box-Muller.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1, u2;
    do {
      u1 = uniform();
    } while (u1 <= 0.0);
    u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  cx complex_normal() {
    double re = normal();
    double im = normal();
    return {re, im};
  }

  /// Independent stream for worker `id`; derivation is fixed so parallel
  /// runs are reproducible: seed' = splitmix(seed ^ splitmix(id + 1)).
  static Rng derive(std::uint64_t seed, std::uint64_t id) {
    return Rng(splitmix(seed ^ splitmix(id + 1)));
  }

 private:
  static std::uint64_t splitmix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
  }

  std::uint64_t s_;
  std::uint64_t s2_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace magicmps
