#include "mrl/evolve.hpp"

#include <atomic>
#include <cmath>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>

#include "mrl/errors.hpp"

namespace mrl {
namespace {

constexpr double two_pi = 6.283185307179586476925286766559;
constexpr double pi = 3.1415926535897932384626433832795;

// Hermitian density matrix stored as three real populations plus the upper
// coherences. Evolving this directly keeps the state Hermitian by
// construction and halves the arithmetic of a full-matrix step.
struct State9 {
  double p0, p1, p2;
  cx r01, r02, r12;
};

State9 from_matrix(const Matrix3c& m) {
  return {m(0, 0).real(), m(1, 1).real(), m(2, 2).real(),
          m(0, 1),        m(0, 2),        m(1, 2)};
}

Matrix3c to_matrix(const State9& s) {
  Matrix3c m;
  m(0, 0) = s.p0;
  m(1, 1) = s.p1;
  m(2, 2) = s.p2;
  m(0, 1) = s.r01;
  m(1, 0) = std::conj(s.r01);
  m(0, 2) = s.r02;
  m(2, 0) = std::conj(s.r02);
  m(1, 2) = s.r12;
  m(2, 1) = std::conj(s.r12);
  return m;
}

// Constant generator for one held waveform sample: level shifts a, b
// (rad/us), couplings w1, w2 (rad/us, already the half-rate matrix
// elements), coherence decay rates g1 (single-quantum) and g2
// (double-quantum).
struct ConstGen {
  double a, b, g1, g2;
  cx w1, w2;
};

inline State9 rhs(const State9& s, const ConstGen& g) {
  const cx i_unit(0.0, 1.0);
  const double im1 = std::imag(g.w1 * std::conj(s.r01));
  const double im2 = std::imag(g.w2 * std::conj(s.r12));
  State9 d;
  d.p0 = 2.0 * im1;
  d.p2 = -2.0 * im2;
  d.p1 = -d.p0 - d.p2;
  d.r01 = -i_unit * (g.a * s.r01 + g.w1 * (s.p1 - s.p0) -
                     std::conj(g.w2) * s.r02) -
          g.g1 * s.r01;
  d.r02 = -i_unit * ((g.a - g.b) * s.r02 + g.w1 * s.r12 - g.w2 * s.r01) -
          g.g2 * s.r02;
  d.r12 = -i_unit * (-g.b * s.r12 + std::conj(g.w1) * s.r02 +
                     g.w2 * (s.p2 - s.p1)) -
          g.g1 * s.r12;
  return d;
}

inline State9 axpy(const State9& s, double h, const State9& d) {
  return {s.p0 + h * d.p0,   s.p1 + h * d.p1,   s.p2 + h * d.p2,
          s.r01 + h * d.r01, s.r02 + h * d.r02, s.r12 + h * d.r12};
}

inline void rk4_const(State9& s, const ConstGen& g, double h) {
  const State9 k1 = rhs(s, g);
  const State9 k2 = rhs(axpy(s, 0.5 * h, k1), g);
  const State9 k3 = rhs(axpy(s, 0.5 * h, k2), g);
  const State9 k4 = rhs(axpy(s, h, k3), g);
  s.p0 += h / 6.0 * (k1.p0 + 2.0 * k2.p0 + 2.0 * k3.p0 + k4.p0);
  s.p1 += h / 6.0 * (k1.p1 + 2.0 * k2.p1 + 2.0 * k3.p1 + k4.p1);
  s.p2 += h / 6.0 * (k1.p2 + 2.0 * k2.p2 + 2.0 * k3.p2 + k4.p2);
  s.r01 += h / 6.0 * (k1.r01 + 2.0 * k2.r01 + 2.0 * k3.r01 + k4.r01);
  s.r02 += h / 6.0 * (k1.r02 + 2.0 * k2.r02 + 2.0 * k3.r02 + k4.r02);
  s.r12 += h / 6.0 * (k1.r12 + 2.0 * k2.r12 + 2.0 * k3.r12 + k4.r12);
}

// A pulse leaves the state exactly unchanged when there are no coherences to
// rotate or decay and the driven pair has equal populations. Comparisons are
// exact on purpose: the skip must be bit-identical to integrating the step.
bool exactly_idle(const State9& s, int channel) {
  if (s.r01 != cx(0.0, 0.0) || s.r02 != cx(0.0, 0.0) || s.r12 != cx(0.0, 0.0))
    return false;
  if (channel == 1) return s.p0 == s.p1;
  if (channel == 2) return s.p1 == s.p2;
  return false;
}

struct SpinScratch {
  double dx_mhz = 0.0;  // X-gradient detuning at the site
  double dy_mhz = 0.0;  // Y-gradient detuning at the site (0 when unused)
};

std::uint64_t evolve_state(State9& s, const PulseSequence& seq,
                           const std::vector<double>& step_peaks,
                           const SpinScratch& site_det, std::uint64_t spin_key,
                           const DephasingParams& deph,
                           const NoiseRealization& noise,
                           const EvolveOptions& opts) {
  const double g1 = std::isinf(deph.t2_us) ? 0.0 : 1.0 / deph.t2_us;
  const double g2 = g1 * deph.double_quantum_factor;
  std::uint64_t substeps = 0;

  for (std::size_t istep = 0; istep < seq.steps.size(); ++istep) {
    const SequenceStep& step = seq.steps[istep];
    const Pulse& pulse = step.pulse;
    if (pulse.samples_mhz.empty()) continue;
    if (opts.idle_skip && exactly_idle(s, pulse.channel)) continue;

    const double delta_mhz =
        step.x_grad * site_det.dx_mhz + step.y_grad * site_det.dy_mhz;
    ConstGen g;
    g.a = two_pi * delta_mhz;
    g.b = two_pi * delta_mhz;
    g.g1 = g1;
    g.g2 = g2;
    g.w1 = cx(0.0, 0.0);
    g.w2 = cx(0.0, 0.0);

    // One substep count for the whole step, from a bound on the generator
    // that is independent of the drawn noise values.
    const double coupling_bound =
        pi * (1.0 + noise.fluctuation) * step_peaks[istep];
    const double rate_bound = std::max(std::abs(g.a), coupling_bound);
    const double dt = pulse.dt_us;
    const int n_sub = std::max(
        1, static_cast<int>(std::ceil(dt * rate_bound / opts.max_step_angle)));
    const double h = dt / n_sub;

    double factor = (noise.mode == NoiseMode::per_pulse)
                        ? noise.factor(spin_key, istep)
                        : 1.0;
    for (std::size_t k = 0; k < pulse.samples_mhz.size(); ++k) {
      if (noise.mode == NoiseMode::per_sample)
        factor = noise.factor(spin_key, istep, k);
      const cx w = pi * factor * pulse.samples_mhz[k];
      if (pulse.channel == 1)
        g.w1 = w;
      else
        g.w2 = w;
      for (int j = 0; j < n_sub; ++j) rk4_const(s, g, h);
      substeps += static_cast<std::uint64_t>(n_sub);
    }
  }
  return substeps;
}

std::vector<double> pulse_peaks(const PulseSequence& seq) {
  std::vector<double> peaks;
  peaks.reserve(seq.steps.size());
  for (const SequenceStep& step : seq.steps)
    peaks.push_back(peak_rabi_mhz(step.pulse));
  return peaks;
}

bool needs_y(const PulseSequence& seq) {
  for (const SequenceStep& step : seq.steps)
    if (step.y_grad != 0.0) return true;
  return false;
}

SpinScratch site_detunings(const FieldContext& ctx, const SpinSite& site,
                           bool want_y) {
  SpinScratch det;
  det.dx_mhz = detuning_at(ctx.x_wires, ctx.zeeman, site.x_nm);
  if (want_y) {
    if (!ctx.y_wires)
      throw ConfigError(
          "sequence uses a Y gradient but no Y wire pair is configured");
    det.dy_mhz = detuning_at(*ctx.y_wires, ctx.zeeman, site.y_nm);
  }
  return det;
}

}  // namespace

Matrix3c evolve_spin(const Matrix3c& initial, const PulseSequence& seq,
                     const FieldContext& ctx, const SpinSite& site,
                     const DephasingParams& deph, const NoiseRealization& noise,
                     const EvolveOptions& opts) {
  const std::vector<double> peaks = pulse_peaks(seq);
  const SpinScratch det = site_detunings(ctx, site, needs_y(seq));
  State9 s = from_matrix(initial);
  evolve_state(s, seq, peaks, det, site.index, deph, noise, opts);
  return to_matrix(s);
}

LatticeResult evolve_lattice(const Matrix3c& initial, const PulseSequence& seq,
                             const FieldContext& ctx,
                             const std::vector<SpinSite>& sites,
                             const DephasingParams& deph,
                             const NoiseRealization& noise,
                             const EvolveOptions& opts, int workers,
                             const std::function<void(std::size_t)>& progress) {
  LatticeResult result;
  result.rho.resize(sites.size());
  if (sites.empty()) return result;

  const std::vector<double> peaks = pulse_peaks(seq);
  const bool want_y = needs_y(seq);
  const State9 s0 = from_matrix(initial);

  const int n_workers = std::max(
      1, std::min<int>(workers, static_cast<int>(sites.size())));

  std::atomic<std::size_t> cursor{0};
  std::atomic<std::uint64_t> total_substeps{0};
  std::atomic<std::size_t> done{0};
  std::mutex progress_mutex;
  std::mutex error_mutex;
  std::exception_ptr first_error;

  auto body = [&]() {
    std::uint64_t local_substeps = 0;
    try {
      for (;;) {
        const std::size_t i = cursor.fetch_add(1);
        if (i >= sites.size()) break;
        const SpinScratch det = site_detunings(ctx, sites[i], want_y);
        State9 s = s0;
        local_substeps +=
            evolve_state(s, seq, peaks, det, sites[i].index, deph, noise, opts);
        result.rho[i] = to_matrix(s);
        const std::size_t completed = done.fetch_add(1) + 1;
        if (progress) {
          std::lock_guard<std::mutex> lock(progress_mutex);
          progress(completed);
        }
      }
    } catch (...) {
      std::lock_guard<std::mutex> lock(error_mutex);
      if (!first_error) first_error = std::current_exception();
      // Drain the queue so sibling workers stop promptly.
      cursor.store(sites.size());
    }
    total_substeps.fetch_add(local_substeps);
  };

  if (n_workers == 1) {
    body();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(n_workers));
    for (int t = 0; t < n_workers; ++t) pool.emplace_back(body);
    for (std::thread& t : pool) t.join();
  }

  if (first_error) std::rethrow_exception(first_error);
  result.rk4_substeps = total_substeps.load();
  return result;
}

}  // namespace mrl
