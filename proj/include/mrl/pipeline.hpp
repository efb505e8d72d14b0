#pragma once

#include <string>
#include <vector>

#include "mrl/config.hpp"
#include "mrl/evolve.hpp"
#include "mrl/fret.hpp"
#include "mrl/pattern_io.hpp"
#include "mrl/sequence.hpp"

namespace mrl {

// ---- Config-derived building blocks -------------------------------------

WirePair x_wire_pair(const RunConfig& cfg);
WirePair y_wire_pair(const RunConfig& cfg);
FieldContext field_context(const RunConfig& cfg);
CompilerConfig compiler_config(const RunConfig& cfg);
DephasingParams dephasing_of(const RunConfig& cfg);
EvolveOptions evolve_options(const RunConfig& cfg);
FretParams fret_params(const RunConfig& cfg);

// Throws ConfigError when cfg.seed is unset: every noisy run must be
// explicitly seeded to stay reproducible.
NoiseRealization noise_of(const RunConfig& cfg);

// Load cfg.pattern_path at the configured pitch, centered at
// (center_x_nm, center_y_nm).
PatternGrid load_positioned_pattern(const RunConfig& cfg);

// Field of view in nm; zeros resolve to the pattern footprint (requires a
// pattern path).
struct Extent {
  double x_nm = 0.0;
  double y_nm = 0.0;
};
Extent resolve_fov(const RunConfig& cfg);

// Square spin lattice covering the field of view at the configured pitch:
// round(extent/pitch) sites per axis at cell centers, site index row-major
// from the top-left site (largest y first, matching pattern rows).
struct Lattice {
  int nx = 0;
  int ny = 0;
  std::vector<SpinSite> sites;
};
Lattice make_lattice(const RunConfig& cfg);

// Compile the pattern into the full write schedule: one multi-tone pulse for
// single-row patterns, the per-column select/write/erase schedule otherwise.
PulseSequence compile_pattern(const RunConfig& cfg, const PatternGrid& pattern);

// ---- Artifact files -------------------------------------------------------
// Every artifact starts with a "# mrl <kind> v1" header line; readers reject
// anything else as a schema mismatch. Numbers are printed round-trip exact,
// so re-reading is lossless and byte comparisons are meaningful.

void export_sequence(const PulseSequence& seq, const std::string& dir);
PulseSequence import_sequence(const std::string& dir);

struct PopulationRow {
  int ix = 0;
  int iy = 0;
  double x_nm = 0.0;
  double y_nm = 0.0;
  double p_minus = 0.0;
  double p_bright = 0.0;
  double p_plus = 0.0;
};
void write_populations_csv(const std::string& path,
                           const std::vector<PopulationRow>& rows);
std::vector<PopulationRow> read_populations_csv(const std::string& path);

void write_dose_csv(const std::string& path, const ExposureMap& map);
void write_dose_pgm(const std::string& path, const ExposureMap& map);

// ---- Stages ----------------------------------------------------------------
// All stages write into cfg.out_dir (created if missing) and echo the
// resolved config to config.txt there. Wall time and throughput go to
// stderr; artifact files stay timestamp-free so equal runs compare equal.
//   synth    pattern -> waveforms/ + waveforms.txt manifest
//   compile  pattern -> sequence.txt + waveforms/ + schedule.txt
//   evolve   sequence.txt + lattice -> populations.csv
//   readout  populations.csv + pattern -> dose.csv/.pgm + metrics.txt
//   run      all of the above in one process
void stage_synth(const RunConfig& cfg);
void stage_compile(const RunConfig& cfg);
void stage_evolve(const RunConfig& cfg);
void stage_readout(const RunConfig& cfg);

struct RunOutputs {
  PatternMetrics metrics;
  double pop_on_mean = 0.0;
  double pop_off_mean = 0.0;
  double total_sequence_us = 0.0;
};
RunOutputs stage_run(const RunConfig& cfg);

}  // namespace mrl
