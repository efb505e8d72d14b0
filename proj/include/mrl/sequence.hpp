#pragma once

#include <string>
#include <vector>

#include "mrl/field_model.hpp"
#include "mrl/pulse.hpp"

namespace mrl {

// Binary-or-gray target pattern on a square grid. values[iy*width + ix],
// ix = 0 is the leftmost column (smallest x), iy = 0 is the TOP row (largest
// y) so pattern files read naturally.
struct PatternGrid {
  int width = 0;
  int height = 0;
  double pitch_nm = 3.0;
  double center_x_nm = 0.0;
  double center_y_nm = 0.0;
  std::vector<double> values;

  double at(int ix, int iy) const { return values[std::size_t(iy) * width + ix]; }
  double pixel_x_nm(int ix) const {
    return (ix - 0.5 * (width - 1)) * pitch_nm + center_x_nm;
  }
  double pixel_y_nm(int iy) const {
    return (0.5 * (height - 1) - iy) * pitch_nm + center_y_nm;
  }
};

// Throws ConfigError unless dimensions, pitch and fill values are sane.
void validate(const PatternGrid& g);

// One schedule entry: gradient switch state (-1, 0, +1 per axis, at most one
// axis active) while the pulse plays.
struct SequenceStep {
  int x_grad = 0;
  int y_grad = 0;
  Pulse pulse;
};

struct PulseSequence {
  std::vector<SequenceStep> steps;
  double total_duration_us() const;
};

// How the two erase pulses of each column are realized.
//  negated_gradient: gradient polarity flips and the erase pulse is the
//    amplitude-negated re-synthesis against the flipped detuning map; the
//    resulting samples are -conj(write pulse), so U_erase = conj(U_write)
//    and the unwanted rotations undo exactly.
//  positive_gradient: gradient keeps its polarity and the erase pulse is the
//    amplitude-negated write pulse itself (equivalent undo, no switch flip).
enum class EraseMode { negated_gradient, positive_gradient };

struct CompilerConfig {
  double tau_a_us = 5.6;    // column-select pulse duration (channel 1)
  double sigma_a_us = 1.5 / 2.3548200450309493;  // Gaussian FWHM 1.5 us
  double tau_b_us = 5.6;    // row-spectrum pulse duration (channel 2)
  int n_steps_a = 7000;
  int n_steps_b = 7000;
  SynthesisLimits limits{};
  // Gaussian spectral FWHM of pulse A must be <= margin * the smallest
  // adjacent-column detuning spacing.
  double selectivity_margin = 0.5;
  // Pattern extent must stay inside the wire gap by this fraction per side.
  double gap_margin_frac = 0.10;
  bool skip_empty_columns = false;
  EraseMode erase_mode = EraseMode::negated_gradient;
};

// Single spectral pulse on channel 1 under the +X gradient.
PulseSequence compile_1d(const PatternProfile& profile, const WirePair& x_wires,
                         const ZeemanModel& zeeman, const CompilerConfig& cfg);

// Column sweep, 4 steps per written column: select (A, +X), write rows
// (B, +Y), deselect (-A) and unwrite (-B) per the erase mode.
PulseSequence compile_2d(const PatternGrid& grid, const WirePair& x_wires,
                         const WirePair& y_wires, const ZeemanModel& zeeman,
                         const CompilerConfig& cfg);

struct ScheduleReport {
  int n_steps = 0;
  double total_us = 0.0;
  double peak_rabi_ch1_mhz = 0.0;
  double peak_rabi_ch2_mhz = 0.0;
  double energy_ch1 = 0.0;  // integral |rabi|^2 dt, MHz^2*us
  double energy_ch2 = 0.0;
  double duty_x = 0.0;  // fraction of total time with the X gradient on
  double duty_y = 0.0;
};
ScheduleReport schedule_report(const PulseSequence& seq);

std::string format_report(const ScheduleReport& r);

}  // namespace mrl
