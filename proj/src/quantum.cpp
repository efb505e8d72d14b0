#include "mrl/quantum.hpp"

#include <cmath>
#include <string>

#include "mrl/errors.hpp"

namespace mrl {

Matrix3c build_hamiltonian(const HamiltonianParams& p, double t_us) {
  Matrix3c h = Matrix3c::Zero();
  h(0, 0) = 2.0 * M_PI * p.delta1_mhz;
  h(2, 2) = 2.0 * M_PI * p.delta2_mhz;
  if (p.omega1) {
    const cx w1 = M_PI * p.omega1(t_us);
    h(0, 1) = w1;
    h(1, 0) = std::conj(w1);
  }
  if (p.omega2) {
    const cx w2 = M_PI * p.omega2(t_us);
    h(1, 2) = w2;
    h(2, 1) = std::conj(w2);
  }
  return h;
}

Matrix3c dephasing_term(const Matrix3c& rho, const DephasingParams& d) {
  Matrix3c l = Matrix3c::Zero();
  if (std::isinf(d.t2_us)) return l;
  if (!(d.t2_us > 0.0))
    throw NumericError("dephasing: T2 must be > 0, got " + std::to_string(d.t2_us));
  const double g1 = 1.0 / d.t2_us;
  const double g2 = d.double_quantum_factor / d.t2_us;
  l(0, 1) = g1 * rho(0, 1);
  l(1, 0) = g1 * rho(1, 0);
  l(1, 2) = g1 * rho(1, 2);
  l(2, 1) = g1 * rho(2, 1);
  l(0, 2) = g2 * rho(0, 2);
  l(2, 0) = g2 * rho(2, 0);
  return l;
}

Matrix3c master_rhs(const Matrix3c& rho, const HamiltonianParams& p,
                    const DephasingParams& d, double t_us) {
  const Matrix3c h = build_hamiltonian(p, t_us);
  const cx i_unit(0.0, 1.0);
  return -i_unit * (h * rho - rho * h) - dephasing_term(rho, d);
}

static double max_abs_entry(const Matrix3c& h) {
  double m = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) m = std::max(m, std::abs(h(i, j)));
  return m;
}

Matrix3c rk4_step(const Matrix3c& rho, const HamiltonianParams& p,
                  const DephasingParams& d, double t_us, double dt_us,
                  double max_step_angle) {
  if (!(dt_us > 0.0)) throw NumericError("rk4_step: dt must be > 0");
  double hmax = max_abs_entry(build_hamiltonian(p, t_us));
  hmax = std::max(hmax, max_abs_entry(build_hamiltonian(p, t_us + 0.5 * dt_us)));
  hmax = std::max(hmax, max_abs_entry(build_hamiltonian(p, t_us + dt_us)));
  if (dt_us * hmax > max_step_angle)
    throw NumericError(
        "rk4_step: dt*max|H| = " + std::to_string(dt_us * hmax) +
        " rad exceeds the stability bound " + std::to_string(max_step_angle) +
        "; subdivide to dt <= " + std::to_string(max_step_angle / hmax));

  const Matrix3c k1 = master_rhs(rho, p, d, t_us);
  const Matrix3c k2 = master_rhs(rho + 0.5 * dt_us * k1, p, d, t_us + 0.5 * dt_us);
  const Matrix3c k3 = master_rhs(rho + 0.5 * dt_us * k2, p, d, t_us + 0.5 * dt_us);
  const Matrix3c k4 = master_rhs(rho + dt_us * k3, p, d, t_us + dt_us);
  Matrix3c next = rho + (dt_us / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  return 0.5 * (next + next.adjoint().eval());
}

}  // namespace mrl
