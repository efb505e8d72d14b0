#include "mrl/pipeline.hpp"

#include <chrono>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <sstream>

#include "mrl/density_matrix.hpp"
#include "mrl/errors.hpp"

namespace mrl {
namespace {

std::string fmt17(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

double wall_seconds_since(
    const std::chrono::steady_clock::time_point& start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                       start)
      .count();
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory " + dir + ": " + ec.message());
}

std::string join(const std::string& dir, const std::string& name) {
  return (std::filesystem::path(dir) / name).string();
}

// First line of every artifact; readers reject other versions/kinds.
void expect_header(const std::string& got, const std::string& want,
                   const std::string& path) {
  if (got != want)
    throw IoError(path + ": expected header '" + want + "', got '" + got +
                  "'");
}

void echo_config_file(const RunConfig& cfg) {
  write_text_file(join(cfg.out_dir, "config.txt"),
                  "# mrl config v1\n" + echo_config(cfg));
}

}  // namespace

// ---- Config-derived building blocks ----------------------------------------

WirePair x_wire_pair(const RunConfig& cfg) {
  WirePair w;
  w.wire_a_nm = -0.5 * cfg.x_separation_nm;
  w.wire_b_nm = +0.5 * cfg.x_separation_nm;
  w.current_amp = cfg.x_current_ma * 1e-3;
  validate(w);
  return w;
}

WirePair y_wire_pair(const RunConfig& cfg) {
  WirePair w;
  w.wire_a_nm = -0.5 * cfg.y_separation_nm;
  w.wire_b_nm = +0.5 * cfg.y_separation_nm;
  w.current_amp = cfg.y_current_ma * 1e-3;
  validate(w);
  return w;
}

FieldContext field_context(const RunConfig& cfg) {
  FieldContext ctx;
  ctx.x_wires = x_wire_pair(cfg);
  ctx.y_wires = y_wire_pair(cfg);
  ctx.zeeman.gyromagnetic_mhz_per_gauss = cfg.gyromagnetic_mhz_per_gauss;
  return ctx;
}

CompilerConfig compiler_config(const RunConfig& cfg) {
  CompilerConfig cc;
  cc.tau_a_us = cfg.tau_a_us;
  cc.sigma_a_us = cfg.sigma_a_us;
  cc.tau_b_us = cfg.tau_b_us;
  cc.n_steps_a = cfg.n_steps_a;
  cc.n_steps_b = cfg.n_steps_b;
  cc.limits.rabi_ceiling_mhz = cfg.rabi_ceiling_mhz;
  cc.limits.nyquist_margin = cfg.nyquist_margin;
  cc.selectivity_margin = cfg.selectivity_margin;
  cc.gap_margin_frac = cfg.gap_margin_frac;
  cc.skip_empty_columns = cfg.skip_empty_columns;
  cc.erase_mode = cfg.erase_mode;
  return cc;
}

DephasingParams dephasing_of(const RunConfig& cfg) {
  DephasingParams d;
  d.t2_us = cfg.t2_us;
  d.double_quantum_factor = cfg.double_quantum_factor;
  return d;
}

EvolveOptions evolve_options(const RunConfig& cfg) {
  EvolveOptions o;
  o.max_step_angle = cfg.max_step_angle;
  o.idle_skip = cfg.idle_skip;
  return o;
}

FretParams fret_params(const RunConfig& cfg) {
  FretParams f;
  f.r0_nm = cfg.fret_r0_nm;
  f.depth_nm = cfg.fret_depth_nm;
  f.bright_contrast = cfg.fret_contrast;
  return f;
}

NoiseRealization noise_of(const RunConfig& cfg) {
  if (!cfg.seed)
    throw ConfigError(
        "seed is required (set --seed or 'seed' in the config file); there is "
        "no wall-clock default");
  NoiseRealization n;
  n.seed = *cfg.seed;
  n.fluctuation = cfg.fluctuation;
  n.mode = cfg.noise_mode;
  return n;
}

PatternGrid load_positioned_pattern(const RunConfig& cfg) {
  if (cfg.pattern_path.empty())
    throw ConfigError("no pattern file given (set --pattern or 'pattern')");
  PatternGrid g = load_pattern(cfg.pattern_path, cfg.pitch_nm);
  g.center_x_nm = cfg.center_x_nm;
  g.center_y_nm = cfg.center_y_nm;
  return g;
}

Extent resolve_fov(const RunConfig& cfg) {
  Extent e{cfg.fov_x_nm, cfg.fov_y_nm};
  if (e.x_nm > 0.0 && e.y_nm > 0.0) return e;
  if (cfg.pattern_path.empty())
    throw ConfigError(
        "field of view is not set and there is no pattern to infer it from");
  const PatternGrid g = load_pattern(cfg.pattern_path, cfg.pitch_nm);
  if (e.x_nm <= 0.0) e.x_nm = g.width * cfg.pitch_nm;
  if (e.y_nm <= 0.0) e.y_nm = g.height * cfg.pitch_nm;
  return e;
}

Lattice make_lattice(const RunConfig& cfg) {
  const Extent e = resolve_fov(cfg);
  Lattice lat;
  lat.nx = std::max(1, static_cast<int>(std::lround(e.x_nm / cfg.pitch_nm)));
  lat.ny = std::max(1, static_cast<int>(std::lround(e.y_nm / cfg.pitch_nm)));
  lat.sites.reserve(std::size_t(lat.nx) * lat.ny);
  for (int iy = 0; iy < lat.ny; ++iy) {
    for (int ix = 0; ix < lat.nx; ++ix) {
      SpinSite s;
      s.x_nm = (ix - 0.5 * (lat.nx - 1)) * cfg.pitch_nm + cfg.center_x_nm;
      s.y_nm = (0.5 * (lat.ny - 1) - iy) * cfg.pitch_nm + cfg.center_y_nm;
      s.index = std::uint64_t(iy) * lat.nx + ix;
      lat.sites.push_back(s);
    }
  }
  return lat;
}

PulseSequence compile_pattern(const RunConfig& cfg,
                              const PatternGrid& pattern) {
  const CompilerConfig cc = compiler_config(cfg);
  const ZeemanModel zeeman{cfg.gyromagnetic_mhz_per_gauss};
  if (pattern.height == 1) {
    PatternProfile profile;
    profile.position_nm.reserve(pattern.width);
    profile.fill.reserve(pattern.width);
    for (int ix = 0; ix < pattern.width; ++ix) {
      profile.position_nm.push_back(pattern.pixel_x_nm(ix));
      profile.fill.push_back(pattern.at(ix, 0));
    }
    return compile_1d(profile, x_wire_pair(cfg), zeeman, cc);
  }
  return compile_2d(pattern, x_wire_pair(cfg), y_wire_pair(cfg), zeeman, cc);
}

// ---- Artifact files ---------------------------------------------------------

void export_sequence(const PulseSequence& seq, const std::string& dir) {
  ensure_dir(join(dir, "waveforms"));
  std::ostringstream manifest;
  manifest << "# mrl sequence v1\n";
  manifest << "# steps = " << seq.steps.size() << "\n";
  manifest << "# columns: step x_grad y_grad waveform\n";
  for (std::size_t k = 0; k < seq.steps.size(); ++k) {
    char name[32];
    std::snprintf(name, sizeof name, "waveforms/wave_%03zu.txt", k);
    export_waveform(seq.steps[k].pulse, join(dir, name));
    manifest << k << " " << seq.steps[k].x_grad << " " << seq.steps[k].y_grad
             << " " << name << "\n";
  }
  write_text_file(join(dir, "sequence.txt"), manifest.str());
}

PulseSequence import_sequence(const std::string& dir) {
  const std::string path = join(dir, "sequence.txt");
  std::istringstream in(read_text_file(path));
  std::string line;
  if (!std::getline(in, line))
    throw IoError(path + ": empty sequence file");
  expect_header(line, "# mrl sequence v1", path);

  PulseSequence seq;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::size_t step = 0;
    int xg = 0, yg = 0;
    char name[512];
    if (std::sscanf(line.c_str(), "%zu %d %d %511s", &step, &xg, &yg, name) !=
        4)
      throw IoError(path + ":" + std::to_string(line_no) +
                    ": malformed step row '" + line + "'");
    if (step != seq.steps.size())
      throw IoError(path + ":" + std::to_string(line_no) +
                    ": steps out of order");
    SequenceStep s;
    s.x_grad = xg;
    s.y_grad = yg;
    s.pulse = import_waveform(join(dir, name));
    seq.steps.push_back(std::move(s));
  }
  return seq;
}

void write_populations_csv(const std::string& path,
                           const std::vector<PopulationRow>& rows) {
  std::ostringstream out;
  out << "# mrl populations v1\n";
  out << "# columns: ix,iy,x_nm,y_nm,p_minus,p_bright,p_plus\n";
  for (const PopulationRow& r : rows) {
    out << r.ix << "," << r.iy << "," << fmt17(r.x_nm) << "," << fmt17(r.y_nm)
        << "," << fmt17(r.p_minus) << "," << fmt17(r.p_bright) << ","
        << fmt17(r.p_plus) << "\n";
  }
  write_text_file(path, out.str());
}

std::vector<PopulationRow> read_populations_csv(const std::string& path) {
  std::istringstream in(read_text_file(path));
  std::string line;
  if (!std::getline(in, line)) throw IoError(path + ": empty populations file");
  expect_header(line, "# mrl populations v1", path);

  std::vector<PopulationRow> rows;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    PopulationRow r;
    if (std::sscanf(line.c_str(), "%d,%d,%lf,%lf,%lf,%lf,%lf", &r.ix, &r.iy,
                    &r.x_nm, &r.y_nm, &r.p_minus, &r.p_bright,
                    &r.p_plus) != 7)
      throw IoError(path + ":" + std::to_string(line_no) +
                    ": malformed population row '" + line + "'");
    rows.push_back(r);
  }
  if (rows.empty()) throw IoError(path + ": no population rows");
  return rows;
}

void write_dose_csv(const std::string& path, const ExposureMap& map) {
  std::ostringstream out;
  out << "# mrl dose v1\n";
  out << "# columns: i,j,x_nm,y_nm,dose\n";
  for (int j = 0; j < map.grid.ny; ++j) {
    for (int i = 0; i < map.grid.nx; ++i) {
      out << i << "," << j << "," << fmt17(map.grid.x_at(i)) << ","
          << fmt17(map.grid.y_at(j)) << "," << fmt17(map.at(i, j)) << "\n";
    }
  }
  write_text_file(path, out.str());
}

void write_dose_pgm(const std::string& path, const ExposureMap& map) {
  std::vector<double> rows_top_first;
  rows_top_first.reserve(map.dose.size());
  for (int j = map.grid.ny - 1; j >= 0; --j)
    for (int i = 0; i < map.grid.nx; ++i)
      rows_top_first.push_back(map.at(i, j));
  write_pgm16(path, map.grid.nx, map.grid.ny, rows_top_first);
}

// ---- Stages -----------------------------------------------------------------

namespace {

// Print one always-on perf line per stage (stderr keeps artifacts
// timestamp-free).
struct StageTimer {
  const char* name;
  std::chrono::steady_clock::time_point start =
      std::chrono::steady_clock::now();
  double seconds() const { return wall_seconds_since(start); }
};

std::vector<PopulationRow> populations_of(const Lattice& lat,
                                          const std::vector<Matrix3c>& rho) {
  std::vector<PopulationRow> rows;
  rows.reserve(lat.sites.size());
  for (std::size_t k = 0; k < lat.sites.size(); ++k) {
    PopulationRow r;
    r.ix = static_cast<int>(k % lat.nx);
    r.iy = static_cast<int>(k / lat.nx);
    r.x_nm = lat.sites[k].x_nm;
    r.y_nm = lat.sites[k].y_nm;
    r.p_minus = rho[k](0, 0).real();
    r.p_bright = rho[k](1, 1).real();
    r.p_plus = rho[k](2, 2).real();
    rows.push_back(r);
  }
  return rows;
}

std::vector<PopulationRow> run_evolution(const RunConfig& cfg,
                                         const PulseSequence& seq,
                                         std::uint64_t* substeps_out) {
  const StageTimer timer{"evolve"};
  const Lattice lat = make_lattice(cfg);
  const FieldContext ctx = field_context(cfg);
  const NoiseRealization noise = noise_of(cfg);
  const int workers = resolve_workers(cfg);

  const std::size_t n = lat.sites.size();
  const std::size_t chunk = std::max<std::size_t>(1, n / 20);
  auto progress = [&](std::size_t done) {
    if (done % chunk == 0 || done == n)
      std::fprintf(stderr, "[evolve] %zu/%zu spins\n", done, n);
  };

  const LatticeResult res =
      evolve_lattice(pure_state(level_minus), seq, ctx, lat.sites,
                     dephasing_of(cfg), noise, evolve_options(cfg), workers,
                     n >= 64 ? progress : std::function<void(std::size_t)>{});

  const double secs = timer.seconds();
  std::fprintf(stderr,
               "[evolve] %.2f s, %zu spins, %" PRIu64
               " rk4 substeps, %.3g substeps/s, %d worker(s)\n",
               secs, n, res.rk4_substeps,
               secs > 0 ? res.rk4_substeps / secs : 0.0, workers);
  if (substeps_out) *substeps_out = res.rk4_substeps;
  return populations_of(lat, res.rho);
}

struct ReadoutArtifacts {
  PatternMetrics metrics;
  double pop_on_mean = 0.0;
  double pop_off_mean = 0.0;
  double max_dose = 0.0;
};

ReadoutArtifacts run_readout(const RunConfig& cfg,
                             const std::vector<PopulationRow>& rows) {
  const StageTimer timer{"readout"};
  const PatternGrid pattern = load_positioned_pattern(cfg);
  const double surface_pitch =
      cfg.surface_pitch_nm > 0.0 ? cfg.surface_pitch_nm : cfg.pitch_nm / 3.0;
  const SurfaceGrid grid = surface_for_pattern(pattern, surface_pitch);

  std::vector<EmitterState> emitters;
  emitters.reserve(rows.size());
  for (const PopulationRow& r : rows)
    emitters.push_back({r.x_nm, r.y_nm, r.p_bright});

  const ExposureMap map = exposure_map(emitters, grid, fret_params(cfg));
  ReadoutArtifacts art;
  art.metrics = pattern_metrics(map, pattern);
  art.max_dose = map.max_dose();

  // Population-level on/off means over spins that sit on pattern pixels.
  double on_sum = 0.0, off_sum = 0.0;
  std::size_t on_n = 0, off_n = 0;
  for (const PopulationRow& r : rows) {
    const int ix = static_cast<int>(std::lround(
        (r.x_nm - pattern.center_x_nm) / pattern.pitch_nm +
        0.5 * (pattern.width - 1)));
    const int iy = static_cast<int>(std::lround(
        0.5 * (pattern.height - 1) -
        (r.y_nm - pattern.center_y_nm) / pattern.pitch_nm));
    if (ix < 0 || ix >= pattern.width || iy < 0 || iy >= pattern.height)
      continue;
    if (std::abs(pattern.pixel_x_nm(ix) - r.x_nm) > 0.501 * pattern.pitch_nm ||
        std::abs(pattern.pixel_y_nm(iy) - r.y_nm) > 0.501 * pattern.pitch_nm)
      continue;
    if (pattern.at(ix, iy) > 0.5) {
      on_sum += r.p_bright;
      ++on_n;
    } else {
      off_sum += r.p_bright;
      ++off_n;
    }
  }
  art.pop_on_mean = on_n ? on_sum / on_n : 0.0;
  art.pop_off_mean = off_n ? off_sum / off_n : 0.0;

  write_dose_csv(join(cfg.out_dir, "dose.csv"), map);
  write_dose_pgm(join(cfg.out_dir, "dose.pgm"), map);

  std::ostringstream m;
  m << "# mrl metrics v1\n";
  m << "on_mean = " << fmt17(art.metrics.on_mean) << "\n";
  m << "off_mean = " << fmt17(art.metrics.off_mean) << "\n";
  m << "contrast = " << fmt17(art.metrics.contrast) << "\n";
  m << "mae = " << fmt17(art.metrics.mae) << "\n";
  m << "correlation = " << fmt17(art.metrics.correlation) << "\n";
  m << "pop_on_mean = " << fmt17(art.pop_on_mean) << "\n";
  m << "pop_off_mean = " << fmt17(art.pop_off_mean) << "\n";
  m << "max_dose = " << fmt17(art.max_dose) << "\n";
  write_text_file(join(cfg.out_dir, "metrics.txt"), m.str());

  std::fprintf(stderr, "[readout] %.2f s, %d x %d surface points\n",
               timer.seconds(), grid.nx, grid.ny);
  return art;
}

PulseSequence run_compile(const RunConfig& cfg, bool export_files) {
  const StageTimer timer{"compile"};
  const PatternGrid pattern = load_positioned_pattern(cfg);
  const PulseSequence seq = compile_pattern(cfg, pattern);
  if (export_files) {
    export_sequence(seq, cfg.out_dir);
    write_text_file(join(cfg.out_dir, "schedule.txt"),
                    "# mrl schedule v1\n" + format_report(schedule_report(seq)));
  }
  std::fprintf(stderr, "[compile] %.2f s, %zu steps, %.4g us total\n",
               timer.seconds(), seq.steps.size(), seq.total_duration_us());
  return seq;
}

}  // namespace

void stage_synth(const RunConfig& cfg) {
  const StageTimer timer{"synth"};
  ensure_dir(join(cfg.out_dir, "waveforms"));
  echo_config_file(cfg);
  const PatternGrid pattern = load_positioned_pattern(cfg);
  const PulseSequence seq = compile_pattern(cfg, pattern);

  std::ostringstream manifest;
  manifest << "# mrl waveforms v1\n";
  manifest << "# columns: index channel n_steps dt_us label file\n";
  for (std::size_t k = 0; k < seq.steps.size(); ++k) {
    const Pulse& p = seq.steps[k].pulse;
    char name[32];
    std::snprintf(name, sizeof name, "waveforms/wave_%03zu.txt", k);
    export_waveform(p, join(cfg.out_dir, name));
    manifest << k << " " << p.channel << " " << p.n_steps() << " "
             << fmt17(p.dt_us) << " " << p.label << " " << name << "\n";
  }
  write_text_file(join(cfg.out_dir, "waveforms.txt"), manifest.str());
  std::fprintf(stderr, "[synth] %.2f s, %zu waveforms\n", timer.seconds(),
               seq.steps.size());
}

void stage_compile(const RunConfig& cfg) {
  ensure_dir(cfg.out_dir);
  echo_config_file(cfg);
  run_compile(cfg, /*export_files=*/true);
}

void stage_evolve(const RunConfig& cfg) {
  ensure_dir(cfg.out_dir);
  echo_config_file(cfg);
  const PulseSequence seq = import_sequence(cfg.out_dir);
  const std::vector<PopulationRow> rows = run_evolution(cfg, seq, nullptr);
  write_populations_csv(join(cfg.out_dir, "populations.csv"), rows);
}

void stage_readout(const RunConfig& cfg) {
  ensure_dir(cfg.out_dir);
  echo_config_file(cfg);
  const std::vector<PopulationRow> rows =
      read_populations_csv(join(cfg.out_dir, "populations.csv"));
  run_readout(cfg, rows);
}

RunOutputs stage_run(const RunConfig& cfg) {
  const StageTimer timer{"run"};
  ensure_dir(cfg.out_dir);
  echo_config_file(cfg);

  const PulseSequence seq = run_compile(cfg, /*export_files=*/true);
  const std::vector<PopulationRow> rows = run_evolution(cfg, seq, nullptr);
  write_populations_csv(join(cfg.out_dir, "populations.csv"), rows);
  const ReadoutArtifacts art = run_readout(cfg, rows);

  RunOutputs out;
  out.metrics = art.metrics;
  out.pop_on_mean = art.pop_on_mean;
  out.pop_off_mean = art.pop_off_mean;
  out.total_sequence_us = seq.total_duration_us();
  std::fprintf(stderr, "[run] %.2f s total\n", timer.seconds());
  return out;
}

}  // namespace mrl
