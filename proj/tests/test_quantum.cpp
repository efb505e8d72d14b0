#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "mrl/density_matrix.hpp"
#include "mrl/errors.hpp"
#include "mrl/quantum.hpp"
#include "oracle.hpp"

using namespace mrl;

namespace {

constexpr double kPi = oracle::pi;

// Fixed-step RK4 integration of the master equation over [t0, t0+T].
Matrix3c integrate(Matrix3c rho, const HamiltonianParams& p,
                   const DephasingParams& d, double t0, double T, int n) {
  const double dt = T / n;
  for (int k = 0; k < n; ++k) rho = rk4_step(rho, p, d, t0 + k * dt, dt);
  return rho;
}

HamiltonianParams resonant_drive(int channel, double rabi_mhz,
                                 double detuning_mhz = 0.0) {
  HamiltonianParams p;
  p.delta1_mhz = detuning_mhz;
  if (channel == 1)
    p.omega1 = [rabi_mhz](double) { return cx(rabi_mhz, 0.0); };
  else
    p.omega2 = [rabi_mhz](double) { return cx(rabi_mhz, 0.0); };
  return p;
}

double frob(const Matrix3c& a, const Matrix3c& b) { return (a - b).norm(); }

}  // namespace

TEST_CASE("hamiltonian matrix carries detunings and half-rate couplings") {
  HamiltonianParams p;
  p.delta1_mhz = 0.3;
  p.delta2_mhz = -0.2;
  p.omega1 = [](double) { return cx(0.7, 0.1); };
  p.omega2 = [](double) { return cx(-0.4, 0.0); };
  const Matrix3c h = build_hamiltonian(p, 0.0);
  CHECK(h(0, 0).real() == doctest::Approx(2.0 * kPi * 0.3).epsilon(1e-15));
  CHECK(h(1, 1) == cx(0.0, 0.0));
  CHECK(h(2, 2).real() == doctest::Approx(2.0 * kPi * -0.2).epsilon(1e-15));
  CHECK(std::abs(h(0, 1) - kPi * cx(0.7, 0.1)) < 1e-15);
  CHECK(std::abs(h(1, 2) - kPi * cx(-0.4, 0.0)) < 1e-15);
  CHECK(h(0, 2) == cx(0.0, 0.0));
  CHECK((h - h.adjoint()).norm() < 1e-15);

  HamiltonianParams off;  // empty envelopes mean no coupling
  const Matrix3c h0 = build_hamiltonian(off, 1.0);
  CHECK(h0.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("resonant drive transfers (1 - cos(2 pi Omega t))/2") {
  const double rabi = 0.8;  // MHz
  const HamiltonianParams p = resonant_drive(1, rabi);
  const DephasingParams d{};  // T2 = inf
  Matrix3c rho = pure_state(level_minus);
  double worst = 0.0;
  const double T = 2.5, seg = T / 100.0;
  for (int k = 1; k <= 100; ++k) {
    rho = integrate(rho, p, d, (k - 1) * seg, seg, 2);
    const double expect = 0.5 * (1.0 - std::cos(2.0 * kPi * rabi * k * seg));
    worst = std::max(worst, std::abs(bright_population(rho) - expect));
  }
  CHECK(worst < 1e-6);
}

TEST_CASE("detuned drive follows the two-level flopping formula") {
  const double rabi = 1.0, det = 1.0;
  const HamiltonianParams p = resonant_drive(1, rabi, det);
  const DephasingParams d{};

  // frozen closed-form point: rabi 1 MHz, detuning 1 MHz, t = 0.3 us
  const double frozen = 0.472224439376696;
  CHECK(oracle::rabi_population(rabi, det, 0.3) ==
        doctest::Approx(frozen).epsilon(1e-14));
  Matrix3c rho = integrate(pure_state(level_minus), p, d, 0.0, 0.3, 60);
  CHECK(bright_population(rho) == doctest::Approx(frozen).epsilon(1e-8));

  // peak transfer = rabi^2 / (rabi^2 + det^2) = 1/2, at half a generalized
  // flop; scan a fine grid around it
  double peak = 0.0;
  rho = pure_state(level_minus);
  const double T = 1.0 / std::sqrt(2.0), seg = T / 400.0;
  for (int k = 1; k <= 400; ++k) {
    rho = integrate(rho, p, d, (k - 1) * seg, seg, 1);
    peak = std::max(peak, bright_population(rho));
  }
  CHECK(peak == doctest::Approx(0.5).epsilon(1e-4));
}

TEST_CASE("a dephasing-free rectangular pi pulse inverts exactly") {
  const double tau = 5.6, rabi = 1.0 / (2.0 * tau);
  Matrix3c rho = integrate(pure_state(level_minus), resonant_drive(1, rabi),
                           DephasingParams{}, 0.0, tau, 256);
  CHECK(bright_population(rho) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("pi-pulse transfer under dephasing matches frozen references") {
  // References computed with an independent Liouvillian matrix-exponential
  // implementation (gamma = 1/20 per us on single-quantum coherences).
  const DephasingParams d{20.0, 2.0};
  struct Case {
    double tau_us;
    double expect;
  };
  const Case cases[] = {
      {1.4, 0.982801650171950},
      {5.6, 0.934616484739238},
      {20.0, 0.801065017981389},
  };
  for (const Case& c : cases) {
    CAPTURE(c.tau_us);
    const double rabi = 1.0 / (2.0 * c.tau_us);
    const int n = 8 * int(std::ceil(c.tau_us * kPi * rabi / 0.1));
    Matrix3c rho = integrate(pure_state(level_minus), resonant_drive(1, rabi),
                             d, 0.0, c.tau_us, n);
    CHECK(bright_population(rho) == doctest::Approx(c.expect).epsilon(1e-9));
  }
}

TEST_CASE("channel 2 obeys the same transfer law from the bright level") {
  const DephasingParams d{20.0, 2.0};
  const double tau = 5.6, rabi = 1.0 / (2.0 * tau);
  Matrix3c rho = integrate(pure_state(level_bright), resonant_drive(2, rabi),
                           d, 0.0, tau, 160);
  CHECK(rho(2, 2).real() == doctest::Approx(0.934616484739238).epsilon(1e-9));
}

TEST_CASE("master equation right-hand side matches a hand commutator") {
  Matrix3c rho;
  rho << cx(0.5, 0.0), cx(0.1, 0.2), cx(0.0, -0.1),  //
      cx(0.1, -0.2), cx(0.3, 0.0), cx(0.05, 0.0),    //
      cx(0.0, 0.1), cx(0.05, 0.0), cx(0.2, 0.0);
  HamiltonianParams p;
  p.delta1_mhz = 0.3;
  p.delta2_mhz = -0.2;
  p.omega1 = [](double) { return cx(0.7, 0.1); };
  p.omega2 = [](double) { return cx(-0.4, 0.3); };
  const DephasingParams d{10.0, 2.0};

  const Matrix3c h = build_hamiltonian(p, 0.0);
  Matrix3c expect = cx(0.0, -1.0) * (h * rho - rho * h);
  const double g1 = 1.0 / 10.0, g2 = 2.0 / 10.0;
  expect(0, 1) -= g1 * rho(0, 1);
  expect(1, 0) -= g1 * rho(1, 0);
  expect(1, 2) -= g1 * rho(1, 2);
  expect(2, 1) -= g1 * rho(2, 1);
  expect(0, 2) -= g2 * rho(0, 2);
  expect(2, 0) -= g2 * rho(2, 0);
  CHECK(frob(master_rhs(rho, p, d, 0.0), expect) < 1e-15);
}

TEST_CASE("dephasing term never touches populations") {
  Matrix3c rho;
  rho << cx(0.4, 0.0), cx(1.0, 1.0), cx(1.0, 1.0),  //
      cx(1.0, -1.0), cx(0.4, 0.0), cx(1.0, 1.0),    //
      cx(1.0, -1.0), cx(1.0, -1.0), cx(0.2, 0.0);
  const Matrix3c term = dephasing_term(rho, DephasingParams{4.0, 2.0});
  CHECK(term(0, 0) == cx(0.0, 0.0));
  CHECK(term(1, 1) == cx(0.0, 0.0));
  CHECK(term(2, 2) == cx(0.0, 0.0));
  CHECK(std::abs(term(0, 1) - 0.25 * rho(0, 1)) < 1e-15);
  CHECK(std::abs(term(1, 2) - 0.25 * rho(1, 2)) < 1e-15);
  CHECK(std::abs(term(0, 2) - 0.50 * rho(0, 2)) < 1e-15);
}

TEST_CASE("trace and hermiticity stay clean through long integration") {
  const DephasingParams d{20.0, 2.0};
  HamiltonianParams p = resonant_drive(1, 0.5, 0.9);
  p.omega2 = [](double t) { return cx(0.3 * std::sin(0.7 * t), 0.1); };
  Matrix3c rho = pure_state(level_minus);
  rho = integrate(rho, p, d, 0.0, 50.0, 4000);
  CHECK(trace_error(rho) < 1e-12);
  CHECK(hermiticity_defect(rho) < 1e-14);
  CHECK(is_physical(rho));
}

TEST_CASE("halving the RK4 step shrinks the error at least 8-fold") {
  const double rabi = 1.0, det = 0.7, T = 1.0;
  const HamiltonianParams p = resonant_drive(1, rabi, det);
  const DephasingParams d{};
  const Matrix3c h = build_hamiltonian(p, 0.0);
  const Matrix3c exact = oracle::exact_step(pure_state(level_minus), h, T);
  const Matrix3c coarse = integrate(pure_state(level_minus), p, d, 0.0, T, 50);
  const Matrix3c fine = integrate(pure_state(level_minus), p, d, 0.0, T, 100);
  const double e1 = frob(coarse, exact);
  const double e2 = frob(fine, exact);
  CHECK(e1 > 1e-9);  // above the floating-point floor, so the ratio means something
  CHECK(e1 / e2 >= 8.0);
}

TEST_CASE("oversized RK4 steps are rejected, not silently integrated") {
  const HamiltonianParams p = resonant_drive(1, 1.0);
  CHECK_THROWS_AS(
      rk4_step(pure_state(level_minus), p, DephasingParams{}, 0.0, 0.1, 0.01),
      NumericError);
  CHECK_NOTHROW(
      rk4_step(pure_state(level_minus), p, DephasingParams{}, 0.0, 0.01));
}

TEST_CASE("density-matrix helpers report the basics") {
  CHECK(bright_population(pure_state(level_bright)) == 1.0);
  CHECK(bright_population(pure_state(level_minus)) == 0.0);
  CHECK(trace_error(pure_state(level_plus)) == 0.0);
  CHECK(hermiticity_defect(pure_state(level_plus)) == 0.0);
  Matrix3c bad = pure_state(level_minus);
  bad(0, 0) = cx(1.5, 0.0);
  CHECK_FALSE(is_physical(bad));
}
