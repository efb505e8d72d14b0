#pragma once

#include <cstddef>
#include <vector>

#include "mrl/sequence.hpp"

namespace mrl {

// Near-field energy-transfer readout: each spin's emitter excites acceptors
// in a surface layer with efficiency 1/(1 + (R/r0)^6), R the 3D distance
// from the emitter (buried depth_nm below the surface) to the surface point.
struct FretParams {
  double r0_nm = 5.0;            // half-transfer distance
  double depth_nm = 5.0;         // emitter depth below the acceptor layer
  double bright_contrast = 1.0;  // 1: dark spins emit nothing;
                                 // c<1: dark spins emit (1-c) of a bright one
};

// Transfer efficiency at 3D separation r_nm. Throws NumericError unless
// r0_nm > 0 and r_nm >= 0.
double fret_efficiency(double r_nm, double r0_nm);

// Regular surface sampling grid; y_at ascends with index.
struct SurfaceGrid {
  int nx = 0;
  int ny = 0;
  double x0_nm = 0.0;
  double y0_nm = 0.0;
  double pitch_nm = 1.0;

  double x_at(int i) const { return x0_nm + i * pitch_nm; }
  double y_at(int j) const { return y0_nm + j * pitch_nm; }
};

// Surface grid covering the full footprint of a pattern (width*pitch by
// height*pitch around its center), sampled at surface_pitch_nm with points
// at cell midpoints, so each pattern pixel owns an equal block of surface
// points. Throws ConfigError unless surface_pitch_nm divides the pattern
// pitch to rounding accuracy.
SurfaceGrid surface_for_pattern(const PatternGrid& grid,
                                double surface_pitch_nm);

struct EmitterState {
  double x_nm = 0.0;
  double y_nm = 0.0;
  double p_bright = 0.0;
};

struct ExposureMap {
  SurfaceGrid grid;
  std::vector<double> dose;  // row-major, index j*nx + i

  double at(int i, int j) const {
    return dose[std::size_t(j) * grid.nx + i];
  }
  double max_dose() const;
};

// Accumulates every emitter's contribution at every surface point:
// ((1 - c) + c * p_bright) * efficiency(distance). Emitters are summed in
// input order with compensated addition, so the map is bit-identical for a
// given emitter list regardless of how the populations were computed.
ExposureMap exposure_map(const std::vector<EmitterState>& emitters,
                         const SurfaceGrid& grid, const FretParams& params);

// 0/1 mask of points at or above frac * max dose.
std::vector<int> resist_mask(const ExposureMap& map, double frac);

// Full width at half maximum of a sampled profile by linear interpolation
// around the global peak. Throws NumericError if the profile never falls to
// half maximum on either side of the peak.
double fwhm(const std::vector<double>& xs, const std::vector<double>& ys);

// Dose-vs-target comparison. The dose map is resampled to the pattern's
// pixels by averaging the surface points inside each pixel cell, then
// normalized by the resampled maximum.
struct PatternMetrics {
  double on_mean = 0.0;      // mean normalized dose over target-1 pixels
  double off_mean = 0.0;     // mean normalized dose over target-0 pixels
  double contrast = 0.0;     // (on_mean - off_mean) / (on_mean + off_mean)
  double mae = 0.0;          // mean |normalized dose - target|
  double correlation = 0.0;  // Pearson correlation of dose vs target
};
PatternMetrics pattern_metrics(const ExposureMap& map,
                               const PatternGrid& target);

}  // namespace mrl
