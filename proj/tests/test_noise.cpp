#include <doctest.h>

#include <cmath>
#include <cstdint>

#include "mrl/noise.hpp"

using namespace mrl;

TEST_CASE("mix64 matches the splitmix64 finalizer reference values") {
  CHECK(mix64(0) == 0xe220a8397b1dcdafULL);
  CHECK(mix64(1) == 0x910a2dec89025cc1ULL);
  CHECK(mix64(0xdeadbeefULL) == 0x4adfb90f68c9eb9bULL);
}

TEST_CASE("noise draws are pure functions of their keys") {
  CHECK(noise_unit(42, 0, 0, 0) ==
        doctest::Approx(0.51077770293497582).epsilon(1e-16));
  CHECK(noise_unit(42, 7, 3, 1) ==
        doctest::Approx(-0.80210772574310329).epsilon(1e-16));
  // repeat calls are identical
  CHECK(noise_unit(9, 2, 5, 0) == noise_unit(9, 2, 5, 0));
  // every key participates
  CHECK(noise_unit(9, 2, 5, 0) != noise_unit(10, 2, 5, 0));
  CHECK(noise_unit(9, 2, 5, 0) != noise_unit(9, 3, 5, 0));
  CHECK(noise_unit(9, 2, 5, 0) != noise_unit(9, 2, 6, 0));
  CHECK(noise_unit(9, 2, 5, 0) != noise_unit(9, 2, 5, 1));
}

TEST_CASE("noise units stay in [-1, 1) and average near zero") {
  double lo = 1.0, hi = -1.0, sum = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const double u = noise_unit(123, std::uint64_t(i), std::uint64_t(i) >> 4);
    lo = std::min(lo, u);
    hi = std::max(hi, u);
    sum += u;
  }
  CHECK(lo >= -1.0);
  CHECK(hi < 1.0);
  CHECK(std::abs(sum / n) < 0.02);
}

TEST_CASE("amplitude factor is 1 + fluctuation * unit, exactly 1 when off") {
  CHECK(amplitude_factor(0.0, 42, 0, 0) == 1.0);
  CHECK(amplitude_factor(0.0, 7, 9, 9, 9) == 1.0);
  const double f = amplitude_factor(0.1, 42, 0, 0);
  CHECK(f == doctest::Approx(1.0 + 0.1 * 0.51077770293497582).epsilon(1e-16));
  for (int i = 0; i < 1000; ++i) {
    const double a = amplitude_factor(0.1, 5, std::uint64_t(i), 0);
    CHECK(a >= 0.9);
    CHECK(a < 1.1);
  }
}
