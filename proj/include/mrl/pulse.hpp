#pragma once

#include <complex>
#include <string>
#include <vector>

#include "mrl/density_matrix.hpp"
#include "mrl/field_model.hpp"

namespace mrl {

// A microwave pulse as a zero-order-hold complex Rabi envelope: samples_mhz[k]
// is held over [k*dt, (k+1)*dt) and was synthesized at the interval midpoint
// t_k = (k + 0.5)*dt. Channel 1 drives the 0<->1 transition, channel 2 the
// 1<->2 transition.
struct Pulse {
  int channel = 1;
  std::vector<cx> samples_mhz;
  double dt_us = 0.0;
  std::string label;

  int n_steps() const { return static_cast<int>(samples_mhz.size()); }
  double duration_us() const { return n_steps() * dt_us; }
};

// Target 1D fill profile sampled at spin positions.
struct PatternProfile {
  std::vector<double> position_nm;
  std::vector<double> fill;  // each in [0, 1]
};

// One spectral line: drive this detuning at this Rabi rate.
struct SpectrumLine {
  double detuning_mhz = 0.0;
  double rabi_mhz = 0.0;
};
using Spectrum = std::vector<SpectrumLine>;

struct SynthesisLimits {
  double rabi_ceiling_mhz = 10.0;  // max |envelope| after summing lines
  double nyquist_margin = 4.0;     // sample rate >= margin * max detuning
};

// Rabi rate (cyclic MHz) such that a constant tone of duration tau transfers
// fill = (1 - cos(2*pi*rabi*tau))/2; rabi*tau stays in the first half period
// (2*pi*rabi*tau = arccos(1 - 2*fill) in [0, pi]). fill = 1 -> the pi pulse
// 1/(2*tau). Throws NumericError outside fill in [0, 1] or tau <= 0.
double invert_rabi(double fill, double tau_us);

// One line per profile point with fill > 0: detuning from the wire field at
// that position, amplitude from invert_rabi.
Spectrum pattern_to_spectrum(const PatternProfile& profile, const WirePair& wires,
                             const ZeemanModel& zeeman, double tau_us);

// Sum of tones: samples[k] = sum_l rabi_l * exp(sign * i * 2*pi * det_l * t_k)
// with midpoint sampling. sign is -1 on channel 1 and +1 on channel 2 -- the
// detuned level is the first index of channel 1's pair but the second of
// channel 2's, so resonant tones rotate oppositely. Enforces the Nyquist
// margin and the Rabi ceiling (ConfigError).
Pulse spectrum_to_waveform(const Spectrum& spectrum, double tau_us, int n_steps,
                           int channel, const std::string& label,
                           const SynthesisLimits& lim = {});

// Gaussian pi pulse at a single detuning: amplitude normalized so the held
// samples integrate to exactly pi of Rabi area (sum 2*pi*|env_k|*dt = pi).
// Requires sigma > 0 and total >= 3*sigma (truncation guard).
Pulse gaussian_pi_pulse(double center_detuning_mhz, double sigma_us,
                        double total_us, int n_steps, int channel,
                        const std::string& label,
                        const SynthesisLimits& lim = {});

// Amplitude-negated copy (samples *= -1), label prefixed with '-'.
Pulse negate_pulse(const Pulse& p);

// Copy scaled by one multiplicative factor.
Pulse scale_pulse(const Pulse& p, double factor);

double peak_rabi_mhz(const Pulse& p);

// Text round-trip: versioned header, one "index t_us re im" row per sample.
void export_waveform(const Pulse& p, const std::string& path);
Pulse import_waveform(const std::string& path);

}  // namespace mrl
