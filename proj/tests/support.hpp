// Shared helpers for the unit tests: central-difference oracles used to
// cross-check every analytic derivative in the library, plus a tiny
// deterministic rng for test data.
#pragma once

#include <cmath>
#include <cstdint>
#include <functional>

namespace testsup {

using Fn1 = std::function<double(double)>;

inline double fd1(const Fn1& f, double x, double h = 1e-5) {
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

inline double fd2(const Fn1& f, double x, double h = 1e-4) {
  return (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h);
}

using Fn2 = std::function<double(double, double)>;

inline double fd_mixed(const Fn2& f, double x, double y, double hx = 1e-4,
                       double hy = 1e-4) {
  return (f(x + hx, y + hy) - f(x + hx, y - hy) - f(x - hx, y + hy) +
          f(x - hx, y - hy)) /
         (4.0 * hx * hy);
}

// Relative closeness with an absolute floor, for derivative comparisons
// where the exact value may vanish.
inline bool close_rel(double got, double want, double rtol, double afloor = 1e-12) {
  const double scale = std::max(std::abs(want), afloor);
  return std::abs(got - want) <= rtol * scale;
}

// splitmix64: deterministic, platform-independent test rng.
struct TestRng {
  std::uint64_t state;
  explicit TestRng(std::uint64_t seed) : state(seed) {}
  std::uint64_t next_u64() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  // uniform in [0, 1)
  double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }
  // uniform in [a, b)
  double uniform(double a, double b) { return a + (b - a) * next_unit(); }
};

}  // namespace testsup
