#include "mrl/density_matrix.hpp"

#include <algorithm>
#include <cmath>

namespace mrl {

Matrix3c pure_state(Level l) {
  Matrix3c rho = Matrix3c::Zero();
  rho(l, l) = 1.0;
  return rho;
}

double bright_population(const Matrix3c& rho) {
  return std::clamp(rho(level_bright, level_bright).real(), 0.0, 1.0);
}

double trace_error(const Matrix3c& rho) {
  return std::fabs(rho.trace().real() - 1.0) + std::fabs(rho.trace().imag());
}

double hermiticity_defect(const Matrix3c& rho) {
  double worst = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      worst = std::max(worst, std::abs(rho(i, j) - std::conj(rho(j, i))));
  return worst;
}

bool is_physical(const Matrix3c& rho, double tol_trace, double tol_herm) {
  if (trace_error(rho) > tol_trace) return false;
  if (hermiticity_defect(rho) > tol_herm) return false;
  for (int i = 0; i < 3; ++i) {
    const double p = rho(i, i).real();
    if (p < -tol_trace || p > 1.0 + tol_trace) return false;
  }
  return true;
}

}  // namespace mrl
