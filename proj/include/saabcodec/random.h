#ifndef SAABCODEC_RANDOM_H_
#define SAABCODEC_RANDOM_H_

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace saabcodec {

// Draws built directly on mt19937_64, whose output sequence is fixed by the
// standard. The <random> distributions are implementation-defined, so they
// would make trained banks and synthetic clips platform-dependent.
class SeededRng {
 public:
  explicit SeededRng(uint64_t seed) : engine_(seed) {}

  uint64_t Next() { return engine_(); }

  // Uniform in [0, n), n > 0, by rejection.
  uint64_t Below(uint64_t n) {
    const uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    uint64_t v;
    do {
      v = engine_();
    } while (v >= limit);
    return v % n;
  }

  // Uniform in the open interval (0, 1).
  double Uniform() {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  }

  // Standard normal, Box-Muller.
  double Gaussian() {
    const double u1 = Uniform();
    const double u2 = Uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  // Laplace(0, scale), inverse CDF.
  double Laplace(double scale) {
    const double u = Uniform() - 0.5;
    const double mag = -scale * std::log(1.0 - 2.0 * std::abs(u));
    return u < 0 ? -mag : mag;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace saabcodec

#endif  // SAABCODEC_RANDOM_H_
