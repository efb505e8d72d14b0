#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "mrl/density_matrix.hpp"
#include "mrl/field_model.hpp"
#include "mrl/noise.hpp"
#include "mrl/quantum.hpp"
#include "mrl/sequence.hpp"

namespace mrl {

// Static field geometry seen by the spins. y_wires may be absent for 1D runs;
// using a Y-gradient step without them is an error.
struct FieldContext {
  WirePair x_wires;
  std::optional<WirePair> y_wires;
  ZeemanModel zeeman;
};

struct SpinSite {
  double x_nm = 0.0;
  double y_nm = 0.0;
  std::uint64_t index = 0;  // noise key and output slot
};

// Lazily evaluated per-(spin, pulse[, sample]) amplitude factors; a pure
// function of the keys, so identical for any execution order or worker count.
struct NoiseRealization {
  std::uint64_t seed = 0;
  double fluctuation = 0.0;  // fraction, e.g. 0.1 for +-10%
  NoiseMode mode = NoiseMode::per_pulse;

  double factor(std::uint64_t spin, std::uint64_t pulse,
                std::uint64_t sample = 0) const {
    return amplitude_factor(fluctuation, seed, spin, pulse, sample);
  }
};

struct EvolveOptions {
  double max_step_angle = default_max_step_angle;  // rad per RK4 substep
  // Skip a pulse when d(rho)/dt is exactly zero for it (diagonal state,
  // equal populations on the driven pair). Bit-exact with the unskipped
  // evolution; purely a time saver.
  bool idle_skip = true;
};

// Evolve one spin through the whole sequence from `initial`. Each held
// sample is integrated with ceil(dt*max|H|/max_step_angle) RK4 substeps,
// where max|H| bounds the step's entries (|2*pi*detuning| and
// pi*(1+fluctuation)*peak Rabi).
Matrix3c evolve_spin(const Matrix3c& initial, const PulseSequence& seq,
                     const FieldContext& ctx, const SpinSite& site,
                     const DephasingParams& deph, const NoiseRealization& noise,
                     const EvolveOptions& opts = {});

struct LatticeResult {
  std::vector<Matrix3c> rho;       // indexed like `sites`
  std::uint64_t rk4_substeps = 0;  // work actually performed
};

// Parallel map of evolve_spin over sites. Workers claim spins through an
// atomic cursor and write into per-spin slots; results are identical for any
// worker count. progress (optional) is called from worker threads with the
// number of spins completed so far.
LatticeResult evolve_lattice(const Matrix3c& initial, const PulseSequence& seq,
                             const FieldContext& ctx,
                             const std::vector<SpinSite>& sites,
                             const DephasingParams& deph,
                             const NoiseRealization& noise,
                             const EvolveOptions& opts, int workers,
                             const std::function<void(std::size_t)>& progress = {});

}  // namespace mrl
