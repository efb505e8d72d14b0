#include "mrl/pulse.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "mrl/errors.hpp"

namespace mrl {

double invert_rabi(double fill, double tau_us) {
  if (!(tau_us > 0.0))
    throw NumericError("invert_rabi: tau must be > 0, got " + std::to_string(tau_us));
  if (!(fill >= 0.0 && fill <= 1.0))
    throw NumericError("invert_rabi: fill must be in [0,1], got " + std::to_string(fill));
  // (1 - cos(2*pi*rabi*tau))/2 = fill, first branch
  return std::acos(1.0 - 2.0 * fill) / (2.0 * M_PI * tau_us);
}

Spectrum pattern_to_spectrum(const PatternProfile& profile, const WirePair& wires,
                             const ZeemanModel& zeeman, double tau_us) {
  if (profile.position_nm.size() != profile.fill.size())
    throw ConfigError("pattern_to_spectrum: profile arrays differ in length");
  Spectrum spec;
  spec.reserve(profile.fill.size());
  for (std::size_t i = 0; i < profile.fill.size(); ++i) {
    if (profile.fill[i] == 0.0) continue;
    spec.push_back({detuning_at(wires, zeeman, profile.position_nm[i]),
                    invert_rabi(profile.fill[i], tau_us)});
  }
  return spec;
}

static int tone_sign(int channel) {
  if (channel == 1) return -1;
  if (channel == 2) return +1;
  throw ConfigError("pulse channel must be 1 or 2, got " + std::to_string(channel));
}

static void check_nyquist(double max_det_mhz, double tau_us, int n_steps,
                          const SynthesisLimits& lim) {
  if (n_steps < 2) throw ConfigError("waveform needs at least 2 steps");
  const double fs = n_steps / tau_us;  // MHz
  const double need = lim.nyquist_margin * max_det_mhz;
  if (fs < need) {
    const int required = static_cast<int>(std::ceil(need * tau_us));
    throw ConfigError("waveform sample rate " + std::to_string(fs) +
                      " MHz is below " + std::to_string(lim.nyquist_margin) +
                      "x the max detuning " + std::to_string(max_det_mhz) +
                      " MHz; need n_steps >= " + std::to_string(required));
  }
}

static void check_ceiling(const Pulse& p, const SynthesisLimits& lim) {
  const double peak = peak_rabi_mhz(p);
  if (peak > lim.rabi_ceiling_mhz)
    throw ConfigError("waveform '" + p.label + "' peak Rabi " +
                      std::to_string(peak) + " MHz exceeds the ceiling " +
                      std::to_string(lim.rabi_ceiling_mhz) + " MHz");
}

Pulse spectrum_to_waveform(const Spectrum& spectrum, double tau_us, int n_steps,
                           int channel, const std::string& label,
                           const SynthesisLimits& lim) {
  if (!(tau_us > 0.0)) throw ConfigError("waveform duration must be > 0");
  const int sign = tone_sign(channel);
  double max_det = 0.0;
  for (const auto& l : spectrum) max_det = std::max(max_det, std::fabs(l.detuning_mhz));
  check_nyquist(max_det, tau_us, n_steps, lim);

  Pulse p;
  p.channel = channel;
  p.dt_us = tau_us / n_steps;
  p.label = label;
  p.samples_mhz.assign(n_steps, cx(0.0, 0.0));
  for (int k = 0; k < n_steps; ++k) {
    const double t = (k + 0.5) * p.dt_us;
    cx acc(0.0, 0.0);
    for (const auto& l : spectrum)
      acc += l.rabi_mhz * std::exp(cx(0.0, sign * 2.0 * M_PI * l.detuning_mhz * t));
    p.samples_mhz[k] = acc;
  }
  check_ceiling(p, lim);
  return p;
}

Pulse gaussian_pi_pulse(double center_detuning_mhz, double sigma_us,
                        double total_us, int n_steps, int channel,
                        const std::string& label, const SynthesisLimits& lim) {
  if (!(sigma_us > 0.0)) throw ConfigError("gaussian pulse: sigma must be > 0");
  if (!(total_us >= 3.0 * sigma_us))
    throw ConfigError("gaussian pulse: total " + std::to_string(total_us) +
                      " us must be >= 3*sigma = " + std::to_string(3.0 * sigma_us) +
                      " us to avoid truncation artifacts");
  const int sign = tone_sign(channel);
  check_nyquist(std::fabs(center_detuning_mhz), total_us, n_steps, lim);

  Pulse p;
  p.channel = channel;
  p.dt_us = total_us / n_steps;
  p.label = label;
  p.samples_mhz.assign(n_steps, cx(0.0, 0.0));
  const double t0 = 0.5 * total_us;
  double area = 0.0;  // sum of held envelope values * dt
  std::vector<double> env(n_steps);
  for (int k = 0; k < n_steps; ++k) {
    const double t = (k + 0.5) * p.dt_us;
    env[k] = std::exp(-0.5 * (t - t0) * (t - t0) / (sigma_us * sigma_us));
    area += env[k] * p.dt_us;
  }
  // exact discrete pi area: sum 2*pi*amp*env_k*dt = pi
  const double amp = 1.0 / (2.0 * area);
  for (int k = 0; k < n_steps; ++k) {
    const double t = (k + 0.5) * p.dt_us;
    p.samples_mhz[k] =
        amp * env[k] *
        std::exp(cx(0.0, sign * 2.0 * M_PI * center_detuning_mhz * t));
  }
  check_ceiling(p, lim);
  return p;
}

Pulse negate_pulse(const Pulse& p) {
  Pulse q = p;
  for (auto& s : q.samples_mhz) s = -s;
  q.label = "-" + p.label;
  return q;
}

Pulse scale_pulse(const Pulse& p, double factor) {
  Pulse q = p;
  for (auto& s : q.samples_mhz) s *= factor;
  return q;
}

double peak_rabi_mhz(const Pulse& p) {
  double peak = 0.0;
  for (const auto& s : p.samples_mhz) peak = std::max(peak, std::abs(s));
  return peak;
}

void export_waveform(const Pulse& p, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write waveform file: " + path);
  char buf[160];
  out << "# mrl waveform v1\n";
  out << "# channel=" << p.channel << " n_steps=" << p.n_steps();
  std::snprintf(buf, sizeof buf, " dt_us=%.17g", p.dt_us);
  out << buf << " label=" << p.label << "\n";
  out << "# index t_us rabi_re_mhz rabi_im_mhz\n";
  for (int k = 0; k < p.n_steps(); ++k) {
    const double t = (k + 0.5) * p.dt_us;
    std::snprintf(buf, sizeof buf, "%d %.17g %.17g %.17g\n", k, t,
                  p.samples_mhz[k].real(), p.samples_mhz[k].imag());
    out << buf;
  }
  if (!out) throw IoError("short write on waveform file: " + path);
}

Pulse import_waveform(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read waveform file: " + path);
  std::string line;
  if (!std::getline(in, line) || line != "# mrl waveform v1")
    throw IoError("waveform file " + path + ": missing 'mrl waveform v1' header");
  if (!std::getline(in, line))
    throw IoError("waveform file " + path + ": truncated header");
  Pulse p;
  int n = 0;
  {
    std::istringstream ss(line);
    std::string tok;
    ss >> tok;  // '#'
    while (ss >> tok) {
      const auto eq = tok.find('=');
      if (eq == std::string::npos) continue;
      const std::string key = tok.substr(0, eq), val = tok.substr(eq + 1);
      if (key == "channel") p.channel = std::stoi(val);
      else if (key == "n_steps") n = std::stoi(val);
      else if (key == "dt_us") p.dt_us = std::stod(val);
      else if (key == "label") p.label = val;
    }
  }
  if (n <= 0 || !(p.dt_us > 0.0))
    throw IoError("waveform file " + path + ": bad header fields");
  p.samples_mhz.reserve(n);
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    int idx;
    double t, re, im;
    if (!(ss >> idx >> t >> re >> im))
      throw IoError("waveform file " + path + ": bad sample row: " + line);
    p.samples_mhz.emplace_back(re, im);
  }
  if (p.n_steps() != n)
    throw IoError("waveform file " + path + ": expected " + std::to_string(n) +
                  " samples, found " + std::to_string(p.n_steps()));
  return p;
}

}  // namespace mrl
