#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "mrl/noise.hpp"
#include "mrl/sequence.hpp"

namespace mrl {

// Fully-resolved run configuration. Defaults reproduce the 2D logo-writing
// setup; individual runs override keys through a key=value config file and
// the CLI flags. Every artifact bundle echoes the resolved values.
struct RunConfig {
  // Lattice and field of view. A zero extent is resolved from the pattern
  // footprint. The lattice center sits at (center_x_nm, center_y_nm)
  // relative to the wire-pair midpoints.
  double fov_x_nm = 0.0;
  double fov_y_nm = 0.0;
  double pitch_nm = 3.0;
  double center_x_nm = 0.0;
  double center_y_nm = 0.0;

  // Gradient wire pairs (separation between wire centers; line-current
  // model). The X pair makes the field vary along x, the Y pair along y.
  double x_separation_nm = 2000.0;
  double x_current_ma = 100.0;
  double y_separation_nm = 2000.0;
  double y_current_ma = 100.0;
  double gyromagnetic_mhz_per_gauss = 2.8;

  // Coherence and drive-amplitude noise.
  double t2_us = 20.0;  // "inf" accepted in config files
  double double_quantum_factor = 2.0;
  double fluctuation = 0.1;
  NoiseMode noise_mode = NoiseMode::per_pulse;

  // Pulse synthesis and scheduling.
  double tau_a_us = 5.6;
  double sigma_a_us = 1.5 / 2.3548200450309493;  // Gaussian with 1.5 us FWHM
  int n_steps_a = 7000;
  double tau_b_us = 5.6;
  int n_steps_b = 7000;
  double rabi_ceiling_mhz = 10.0;
  double nyquist_margin = 4.0;
  double selectivity_margin = 0.5;
  double gap_margin_frac = 0.10;
  bool skip_empty_columns = false;
  EraseMode erase_mode = EraseMode::negated_gradient;

  // Integration.
  double max_step_angle = 0.1;
  bool idle_skip = true;

  // Readout.
  double fret_r0_nm = 5.0;
  double fret_depth_nm = 5.0;
  double fret_contrast = 1.0;
  double surface_pitch_nm = 0.0;  // 0: pattern pitch / 3

  // Run control. The seed has no default: omitting it is an error wherever
  // randomness is consumed, so every result is reproducible by construction.
  std::optional<std::uint64_t> seed;
  int workers = 0;  // 0: MRL_WORKERS env var, else 1
  std::string out_dir = "out";
  std::string pattern_path;
};

// Parse key=value text ('#' comments, blank lines ignored). Unknown or
// duplicate keys, malformed numbers, and out-of-range values raise
// ConfigError naming the offending line. source_name labels error messages.
RunConfig parse_config_text(const std::string& text,
                            const std::string& source_name,
                            const RunConfig& base = RunConfig{});

// load_config reads the file at path (IoError when unreadable) and parses it.
RunConfig load_config(const std::string& path,
                      const RunConfig& base = RunConfig{});

// Canonical echo of every key in a fixed order, parseable by
// parse_config_text; doubles are printed round-trip exact.
std::string echo_config(const RunConfig& cfg);

// Resolved worker count: explicit value, else MRL_WORKERS, else 1.
int resolve_workers(const RunConfig& cfg);

}  // namespace mrl
