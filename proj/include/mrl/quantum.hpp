#pragma once

#include <functional>
#include <limits>

#include "mrl/density_matrix.hpp"

namespace mrl {

// Complex Rabi envelope in cyclic MHz as a function of time (us).
using Envelope = std::function<cx(double)>;

// Rotating-frame Hamiltonian of the three-level system (H/hbar, rad/us):
//
//   [ 2*pi*delta1   pi*omega1(t)      0        ]
//   [ conj(...)     0                 pi*omega2(t) ]
//   [ 0             conj(...)         2*pi*delta2  ]
//
// delta1/delta2 are the detunings (cyclic MHz) of levels 0 and 2 relative to
// the drive carriers; omega1 drives 0<->1 and omega2 drives 1<->2. The
// coupling element is *half* the angular Rabi rate (pi*omega, not 2*pi*omega)
// so that a resonant drive transfers population as (1 - cos(2*pi*omega*t))/2
// and a pulse of area integral(2*pi*omega dt) = pi inverts the transition.
struct HamiltonianParams {
  double delta1_mhz = 0.0;
  double delta2_mhz = 0.0;
  Envelope omega1;  // empty = channel off
  Envelope omega2;
};

// Pure dephasing: single-quantum coherences (0,1) and (1,2) decay at 1/T2;
// the (0,2) coherence decays at double_quantum_factor/T2. Populations are
// untouched (T1 effects neglected). t2_us = +infinity disables decay.
struct DephasingParams {
  double t2_us = std::numeric_limits<double>::infinity();
  double double_quantum_factor = 2.0;
};

inline constexpr double default_max_step_angle = 0.1;  // rad per RK4 step

Matrix3c build_hamiltonian(const HamiltonianParams& p, double t_us);

// The decay term L(rho) to be subtracted from -i[H, rho].
Matrix3c dephasing_term(const Matrix3c& rho, const DephasingParams& d);

// d(rho)/dt = -i[H(t), rho] - L(rho)
Matrix3c master_rhs(const Matrix3c& rho, const HamiltonianParams& p,
                    const DephasingParams& d, double t_us);

// One classic fixed-step RK4 update, then re-Hermitization (rho+rho^H)/2.
// Throws NumericError if dt times the largest |H| entry (sampled at t,
// t+dt/2, t+dt) exceeds max_step_angle -- the caller must subdivide.
Matrix3c rk4_step(const Matrix3c& rho, const HamiltonianParams& p,
                  const DephasingParams& d, double t_us, double dt_us,
                  double max_step_angle = default_max_step_angle);

}  // namespace mrl
