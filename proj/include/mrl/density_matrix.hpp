#pragma once

#include <Eigen/Dense>
#include <complex>

namespace mrl {

using cx = std::complex<double>;
using Matrix3c = Eigen::Matrix3cd;

// Basis order for the three magnetic sublevels. Index 1 (m = 0) is the
// optically bright level used for readout.
enum Level : int { level_minus = 0, level_bright = 1, level_plus = 2 };

// |l><l| in the fixed basis.
Matrix3c pure_state(Level l);

// Population of the bright level, clamped to [0, 1] against float drift.
double bright_population(const Matrix3c& rho);

// |tr(rho) - 1|
double trace_error(const Matrix3c& rho);

// max_ij |rho_ij - conj(rho_ji)|
double hermiticity_defect(const Matrix3c& rho);

// Trace within tol_trace of one, Hermitian within tol_herm, diagonal
// populations within tol_trace of [0, 1].
bool is_physical(const Matrix3c& rho, double tol_trace = 1e-9,
                 double tol_herm = 1e-10);

}  // namespace mrl
