#include "mrl/noise.hpp"

namespace mrl {

std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double noise_unit(std::uint64_t seed, std::uint64_t spin, std::uint64_t pulse,
                  std::uint64_t sample) {
  std::uint64_t h = mix64(seed);
  h = mix64(h ^ spin);
  h = mix64(h ^ pulse);
  h = mix64(h ^ sample);
  // top 53 bits -> [0,1), then map to [-1,1)
  const double r = static_cast<double>(h >> 11) * 0x1.0p-53;
  return 2.0 * r - 1.0;
}

double amplitude_factor(double fluctuation, std::uint64_t seed,
                        std::uint64_t spin, std::uint64_t pulse,
                        std::uint64_t sample) {
  if (fluctuation == 0.0) return 1.0;
  return 1.0 + fluctuation * noise_unit(seed, spin, pulse, sample);
}

}  // namespace mrl
