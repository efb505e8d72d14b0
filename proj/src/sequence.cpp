#include "mrl/sequence.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "mrl/errors.hpp"

namespace mrl {

void validate(const PatternGrid& g) {
  if (g.width < 1 || g.height < 1)
    throw ConfigError("pattern grid: dimensions must be >= 1, got " +
                      std::to_string(g.width) + "x" + std::to_string(g.height));
  if (!(g.pitch_nm > 0.0)) throw ConfigError("pattern grid: pitch must be > 0");
  if (g.values.size() != std::size_t(g.width) * g.height)
    throw ConfigError("pattern grid: value count " + std::to_string(g.values.size()) +
                      " does not match " + std::to_string(g.width) + "x" +
                      std::to_string(g.height));
  for (double v : g.values)
    if (!(v >= 0.0 && v <= 1.0))
      throw ConfigError("pattern grid: fill values must be in [0,1], got " +
                        std::to_string(v));
}

double PulseSequence::total_duration_us() const {
  double t = 0.0;
  for (const auto& s : steps) t += s.pulse.duration_us();
  return t;
}

// Pattern extent must fit inside the wire gap with the configured margin.
static void check_extent(const char* axis, double lo_nm, double hi_nm,
                         const WirePair& wires, double margin_frac) {
  const double half_gap = 0.5 * (wires.hi_nm() - wires.lo_nm());
  const double mid = wires.midpoint_nm();
  const double allowed = (1.0 - margin_frac) * half_gap;
  if (std::fabs(lo_nm - mid) > allowed || std::fabs(hi_nm - mid) > allowed)
    throw ConfigError(std::string("pattern extent on ") + axis + " [" +
                      std::to_string(lo_nm) + ", " + std::to_string(hi_nm) +
                      "] nm leaves less than " +
                      std::to_string(100.0 * margin_frac) +
                      "% margin inside the wire gap");
}

PulseSequence compile_1d(const PatternProfile& profile, const WirePair& x_wires,
                         const ZeemanModel& zeeman, const CompilerConfig& cfg) {
  if (profile.position_nm.empty())
    throw ConfigError("compile_1d: empty profile");
  double lo = profile.position_nm.front(), hi = lo;
  for (double x : profile.position_nm) {
    lo = std::min(lo, x);
    hi = std::max(hi, x);
  }
  check_extent("x", lo, hi, x_wires, cfg.gap_margin_frac);

  PulseSequence seq;
  const Spectrum spec = pattern_to_spectrum(profile, x_wires, zeeman, cfg.tau_b_us);
  if (spec.empty()) return seq;  // nothing to write
  seq.steps.push_back({+1, 0,
                       spectrum_to_waveform(spec, cfg.tau_b_us, cfg.n_steps_b,
                                            /*channel=*/1, "1D", cfg.limits)});
  return seq;
}

// Spectral selectivity of the Gaussian column-select pulse: its frequency-
// domain FWHM must be well below the adjacent-column detuning spacing.
static void check_selectivity(const std::vector<double>& col_det_mhz,
                              const CompilerConfig& cfg) {
  constexpr double fwhm_factor = 2.3548200450309493;  // 2*sqrt(2 ln 2)
  const double spectral_fwhm = fwhm_factor / (2.0 * M_PI * cfg.sigma_a_us);
  for (std::size_t j = 0; j + 1 < col_det_mhz.size(); ++j) {
    const double spacing = std::fabs(col_det_mhz[j + 1] - col_det_mhz[j]);
    if (spectral_fwhm > cfg.selectivity_margin * spacing)
      throw ConfigError(
          "columns " + std::to_string(j) + " and " + std::to_string(j + 1) +
          " are " + std::to_string(spacing) +
          " MHz apart but the select pulse spectral FWHM is " +
          std::to_string(spectral_fwhm) + " MHz (margin " +
          std::to_string(cfg.selectivity_margin) +
          "); lengthen sigma_a or the gradient");
  }
}

PulseSequence compile_2d(const PatternGrid& grid, const WirePair& x_wires,
                         const WirePair& y_wires, const ZeemanModel& zeeman,
                         const CompilerConfig& cfg) {
  validate(grid);
  check_extent("x", grid.pixel_x_nm(0), grid.pixel_x_nm(grid.width - 1), x_wires,
               cfg.gap_margin_frac);
  check_extent("y", grid.pixel_y_nm(grid.height - 1), grid.pixel_y_nm(0), y_wires,
               cfg.gap_margin_frac);

  std::vector<double> col_det(grid.width);
  for (int ix = 0; ix < grid.width; ++ix)
    col_det[ix] = detuning_at(x_wires, zeeman, grid.pixel_x_nm(ix));
  check_selectivity(col_det, cfg);

  // Row positions are shared by every column's spectrum.
  std::vector<double> row_y(grid.height);
  for (int iy = 0; iy < grid.height; ++iy) row_y[iy] = grid.pixel_y_nm(iy);

  PulseSequence seq;
  for (int ix = 0; ix < grid.width; ++ix) {
    PatternProfile col;
    col.position_nm = row_y;
    col.fill.resize(grid.height);
    bool any = false;
    for (int iy = 0; iy < grid.height; ++iy) {
      col.fill[iy] = grid.at(ix, iy);
      any = any || col.fill[iy] > 0.0;
    }
    if (!any && cfg.skip_empty_columns) continue;

    const std::string sfx = "[" + std::to_string(ix) + "]";
    const Pulse a = gaussian_pi_pulse(col_det[ix], cfg.sigma_a_us, cfg.tau_a_us,
                                      cfg.n_steps_a, 1, "A" + sfx, cfg.limits);
    const Pulse b = spectrum_to_waveform(
        pattern_to_spectrum(col, y_wires, zeeman, cfg.tau_b_us), cfg.tau_b_us,
        cfg.n_steps_b, 2, "B" + sfx, cfg.limits);

    Pulse a_erase, b_erase;
    int g_erase;
    if (cfg.erase_mode == EraseMode::negated_gradient) {
      // Re-synthesize against the flipped detuning map, then negate: the
      // samples come out as -conj(write pulse), the exact coherent undo.
      WirePair xf = x_wires, yf = y_wires;
      xf.polarity = -xf.polarity;
      yf.polarity = -yf.polarity;
      a_erase = negate_pulse(
          gaussian_pi_pulse(detuning_at(xf, zeeman, grid.pixel_x_nm(ix)),
                            cfg.sigma_a_us, cfg.tau_a_us, cfg.n_steps_a, 1,
                            "A" + sfx, cfg.limits));
      b_erase = negate_pulse(spectrum_to_waveform(
          pattern_to_spectrum(col, yf, zeeman, cfg.tau_b_us), cfg.tau_b_us,
          cfg.n_steps_b, 2, "B" + sfx, cfg.limits));
      g_erase = -1;
    } else {
      a_erase = negate_pulse(a);
      b_erase = negate_pulse(b);
      g_erase = +1;
    }

    seq.steps.push_back({+1, 0, a});
    seq.steps.push_back({0, +1, b});
    seq.steps.push_back({g_erase, 0, a_erase});
    seq.steps.push_back({0, g_erase, b_erase});
  }
  return seq;
}

ScheduleReport schedule_report(const PulseSequence& seq) {
  ScheduleReport r;
  r.n_steps = static_cast<int>(seq.steps.size());
  for (const auto& s : seq.steps) {
    const double dur = s.pulse.duration_us();
    r.total_us += dur;
    if (s.x_grad != 0) r.duty_x += dur;
    if (s.y_grad != 0) r.duty_y += dur;
    double energy = 0.0;
    for (const auto& v : s.pulse.samples_mhz) energy += std::norm(v);
    energy *= s.pulse.dt_us;
    const double peak = peak_rabi_mhz(s.pulse);
    if (s.pulse.channel == 1) {
      r.energy_ch1 += energy;
      r.peak_rabi_ch1_mhz = std::max(r.peak_rabi_ch1_mhz, peak);
    } else {
      r.energy_ch2 += energy;
      r.peak_rabi_ch2_mhz = std::max(r.peak_rabi_ch2_mhz, peak);
    }
  }
  if (r.total_us > 0.0) {
    r.duty_x /= r.total_us;
    r.duty_y /= r.total_us;
  }
  return r;
}

std::string format_report(const ScheduleReport& r) {
  char buf[512];
  std::snprintf(buf, sizeof buf,
                "steps=%d total_us=%.6g peak_ch1_mhz=%.6g peak_ch2_mhz=%.6g "
                "energy_ch1=%.6g energy_ch2=%.6g duty_x=%.4f duty_y=%.4f",
                r.n_steps, r.total_us, r.peak_rabi_ch1_mhz, r.peak_rabi_ch2_mhz,
                r.energy_ch1, r.energy_ch2, r.duty_x, r.duty_y);
  return buf;
}

}  // namespace mrl
