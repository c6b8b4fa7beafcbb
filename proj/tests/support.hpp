#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>

namespace specanom::test {

/// Fixed-seed generator shared by the property tests.
class Gen {
 public:
  explicit Gen(std::uint32_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  bool coin() { return integer(0, 1) == 1; }
  /// A rational p/q with small terms.
  std::pair<long, long> rational(int max_num, int max_den) {
    return {integer(-max_num, max_num), integer(1, max_den)};
  }

 private:
  std::mt19937 rng_;
};

inline bool close(double a, double b, double tol) { return std::abs(a - b) <= tol; }
inline bool close(std::complex<double> a, std::complex<double> b, double tol) { return std::abs(a - b) <= tol; }

}  // namespace specanom::test
