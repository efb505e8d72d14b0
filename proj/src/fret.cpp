#include "mrl/fret.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mrl/errors.hpp"

namespace mrl {

double fret_efficiency(double r_nm, double r0_nm) {
  if (!(r0_nm > 0.0))
    throw NumericError("fret_efficiency: r0 must be positive");
  if (!(r_nm >= 0.0))
    throw NumericError("fret_efficiency: distance must be non-negative");
  const double u = r_nm / r0_nm;
  const double u2 = u * u;
  return 1.0 / (1.0 + u2 * u2 * u2);
}

SurfaceGrid surface_for_pattern(const PatternGrid& grid,
                                double surface_pitch_nm) {
  validate(grid);
  if (!(surface_pitch_nm > 0.0))
    throw ConfigError("surface pitch must be positive");
  const double ratio = grid.pitch_nm / surface_pitch_nm;
  const double rounded = std::round(ratio);
  if (std::abs(ratio - rounded) > 1e-9 * ratio || rounded < 1.0)
    throw ConfigError("surface pitch " + std::to_string(surface_pitch_nm) +
                      " nm must divide the pattern pitch " +
                      std::to_string(grid.pitch_nm) + " nm");

  SurfaceGrid s;
  s.pitch_nm = surface_pitch_nm;
  s.nx = grid.width * static_cast<int>(rounded);
  s.ny = grid.height * static_cast<int>(rounded);
  s.x0_nm = grid.center_x_nm -
            0.5 * grid.width * grid.pitch_nm + 0.5 * surface_pitch_nm;
  s.y0_nm = grid.center_y_nm -
            0.5 * grid.height * grid.pitch_nm + 0.5 * surface_pitch_nm;
  return s;
}

double ExposureMap::max_dose() const {
  double m = 0.0;
  for (double d : dose) m = std::max(m, d);
  return m;
}

ExposureMap exposure_map(const std::vector<EmitterState>& emitters,
                         const SurfaceGrid& grid, const FretParams& params) {
  if (grid.nx <= 0 || grid.ny <= 0)
    throw ConfigError("exposure_map: surface grid is empty");
  if (!(params.r0_nm > 0.0))
    throw ConfigError("exposure_map: r0 must be positive");
  if (!(params.depth_nm >= 0.0))
    throw ConfigError("exposure_map: emitter depth must be non-negative");
  if (!(params.bright_contrast >= 0.0 && params.bright_contrast <= 1.0))
    throw ConfigError("exposure_map: bright contrast must be in [0, 1]");

  ExposureMap map;
  map.grid = grid;
  map.dose.assign(std::size_t(grid.nx) * grid.ny, 0.0);

  const double d2 = params.depth_nm * params.depth_nm;
  const double c = params.bright_contrast;
  const double r0_2 = params.r0_nm * params.r0_nm;

  for (int j = 0; j < grid.ny; ++j) {
    const double ys = grid.y_at(j);
    for (int i = 0; i < grid.nx; ++i) {
      const double xs = grid.x_at(i);
      double sum = 0.0, comp = 0.0;  // Kahan accumulator
      for (const EmitterState& e : emitters) {
        const double dx = xs - e.x_nm;
        const double dy = ys - e.y_nm;
        const double u2 = (dx * dx + dy * dy + d2) / r0_2;
        const double eff = 1.0 / (1.0 + u2 * u2 * u2);
        const double term = ((1.0 - c) + c * e.p_bright) * eff;
        const double t = sum + term;
        comp += std::abs(sum) >= std::abs(term) ? (sum - t) + term
                                                : (term - t) + sum;
        sum = t;
      }
      map.dose[std::size_t(j) * grid.nx + i] = sum + comp;
    }
  }
  return map;
}

std::vector<int> resist_mask(const ExposureMap& map, double frac) {
  if (!(frac >= 0.0 && frac <= 1.0))
    throw ConfigError("resist_mask: threshold fraction must be in [0, 1]");
  const double cut = frac * map.max_dose();
  std::vector<int> mask(map.dose.size(), 0);
  for (std::size_t k = 0; k < map.dose.size(); ++k)
    mask[k] = map.dose[k] >= cut ? 1 : 0;
  return mask;
}

double fwhm(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size() || xs.size() < 3)
    throw NumericError("fwhm: need matching profiles of at least 3 points");
  std::size_t im = 0;
  for (std::size_t k = 1; k < ys.size(); ++k)
    if (ys[k] > ys[im]) im = k;
  const double half = 0.5 * ys[im];
  if (!(half > 0.0)) throw NumericError("fwhm: profile peak is not positive");

  auto interp = [&](std::size_t lo, std::size_t hi) {
    return xs[lo] + (half - ys[lo]) * (xs[hi] - xs[lo]) / (ys[hi] - ys[lo]);
  };

  double x_left = 0.0;
  bool found = false;
  for (std::size_t k = im; k-- > 0;) {
    if (ys[k] <= half) {
      x_left = interp(k, k + 1);
      found = true;
      break;
    }
  }
  if (!found)
    throw NumericError("fwhm: profile never falls to half maximum left of peak");

  double x_right = 0.0;
  found = false;
  for (std::size_t k = im + 1; k < ys.size(); ++k) {
    if (ys[k] <= half) {
      x_right = interp(k - 1, k);
      found = true;
      break;
    }
  }
  if (!found)
    throw NumericError(
        "fwhm: profile never falls to half maximum right of peak");
  return x_right - x_left;
}

PatternMetrics pattern_metrics(const ExposureMap& map,
                               const PatternGrid& target) {
  validate(target);
  const SurfaceGrid& g = map.grid;
  if (g.nx <= 0 || g.ny <= 0)
    throw NumericError("pattern_metrics: empty exposure map");

  // Average the surface points falling inside each pixel cell.
  std::vector<double> cell(std::size_t(target.width) * target.height, 0.0);
  std::vector<int> count(cell.size(), 0);
  const double x_left = target.center_x_nm - 0.5 * target.width * target.pitch_nm;
  const double y_bottom =
      target.center_y_nm - 0.5 * target.height * target.pitch_nm;
  for (int j = 0; j < g.ny; ++j) {
    const double ys = g.y_at(j);
    const int iy_up = static_cast<int>(std::floor((ys - y_bottom) /
                                                  target.pitch_nm));
    if (iy_up < 0 || iy_up >= target.height) continue;
    const int iy = target.height - 1 - iy_up;  // pattern row 0 is the top
    for (int i = 0; i < g.nx; ++i) {
      const double xs = g.x_at(i);
      const int ix = static_cast<int>(std::floor((xs - x_left) /
                                                 target.pitch_nm));
      if (ix < 0 || ix >= target.width) continue;
      cell[std::size_t(iy) * target.width + ix] += map.at(i, j);
      ++count[std::size_t(iy) * target.width + ix];
    }
  }
  double peak = 0.0;
  for (std::size_t k = 0; k < cell.size(); ++k) {
    if (count[k] == 0)
      throw NumericError(
          "pattern_metrics: exposure map does not cover the pattern");
    cell[k] /= count[k];
    peak = std::max(peak, cell[k]);
  }
  if (!(peak > 0.0))
    throw NumericError("pattern_metrics: exposure map is identically zero");

  double on_sum = 0.0, off_sum = 0.0, mae_sum = 0.0;
  std::size_t on_n = 0, off_n = 0;
  double sx = 0.0, sy = 0.0, sxx = 0.0, syy = 0.0, sxy = 0.0;
  const std::size_t n = cell.size();
  for (int iy = 0; iy < target.height; ++iy) {
    for (int ix = 0; ix < target.width; ++ix) {
      const double d = cell[std::size_t(iy) * target.width + ix] / peak;
      const double t = target.at(ix, iy);
      mae_sum += std::abs(d - t);
      if (t > 0.5) {
        on_sum += d;
        ++on_n;
      } else {
        off_sum += d;
        ++off_n;
      }
      sx += d;
      sy += t;
      sxx += d * d;
      syy += t * t;
      sxy += d * t;
    }
  }

  PatternMetrics m;
  m.on_mean = on_n ? on_sum / on_n : 0.0;
  m.off_mean = off_n ? off_sum / off_n : 0.0;
  const double denom = m.on_mean + m.off_mean;
  m.contrast = denom > 0.0 ? (m.on_mean - m.off_mean) / denom : 0.0;
  m.mae = mae_sum / n;
  const double vx = sxx - sx * sx / n;
  const double vy = syy - sy * sy / n;
  if (vx > 0.0 && vy > 0.0)
    m.correlation = (sxy - sx * sy / n) / std::sqrt(vx * vy);
  else
    m.correlation = 0.0;
  return m;
}

}  // namespace mrl
