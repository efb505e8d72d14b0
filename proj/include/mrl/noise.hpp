#pragma once

#include <cstdint>

namespace mrl {

// Counter-based deterministic noise. Every draw is a pure function of
// (seed, spin, pulse, sample), so results are bit-identical for any worker
// count and any evaluation order -- a sequential engine (mt19937 etc.) would
// tie draws to scheduling.
//
// mix64 is the splitmix64 output finalizer.
std::uint64_t mix64(std::uint64_t x);

// Uniform in [-1, 1), keyed by the counters.
double noise_unit(std::uint64_t seed, std::uint64_t spin, std::uint64_t pulse,
                  std::uint64_t sample = 0);

enum class NoiseMode { per_pulse, per_sample };

// Multiplicative amplitude factor 1 + fluctuation * u, u in [-1, 1).
double amplitude_factor(double fluctuation, std::uint64_t seed,
                        std::uint64_t spin, std::uint64_t pulse,
                        std::uint64_t sample = 0);

}  // namespace mrl
