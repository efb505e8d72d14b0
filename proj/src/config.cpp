#include "mrl/config.hpp"

#include <cctype>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "mrl/errors.hpp"

namespace mrl {
namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

[[noreturn]] void fail(const std::string& src, int line,
                       const std::string& what) {
  throw ConfigError(src + ":" + std::to_string(line) + ": " + what);
}

double parse_double(const std::string& v, const std::string& src, int line,
                    const std::string& key) {
  if (v == "inf" || v == "infinity")
    return std::numeric_limits<double>::infinity();
  errno = 0;
  char* end = nullptr;
  const double x = std::strtod(v.c_str(), &end);
  if (end == v.c_str() || *end != '\0' || errno == ERANGE)
    fail(src, line, "key '" + key + "': not a number: '" + v + "'");
  return x;
}

std::uint64_t parse_u64(const std::string& v, const std::string& src, int line,
                        const std::string& key) {
  errno = 0;
  char* end = nullptr;
  const unsigned long long x = std::strtoull(v.c_str(), &end, 10);
  if (end == v.c_str() || *end != '\0' || errno == ERANGE || v[0] == '-')
    fail(src, line, "key '" + key + "': not an unsigned integer: '" + v + "'");
  return static_cast<std::uint64_t>(x);
}

int parse_int(const std::string& v, const std::string& src, int line,
              const std::string& key) {
  errno = 0;
  char* end = nullptr;
  const long x = std::strtol(v.c_str(), &end, 10);
  if (end == v.c_str() || *end != '\0' || errno == ERANGE)
    fail(src, line, "key '" + key + "': not an integer: '" + v + "'");
  return static_cast<int>(x);
}

bool parse_bool(const std::string& v, const std::string& src, int line,
                const std::string& key) {
  if (v == "1" || v == "true") return true;
  if (v == "0" || v == "false") return false;
  fail(src, line, "key '" + key + "': expected 0/1/true/false, got '" + v + "'");
}

std::string fmt_double(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

RunConfig parse_config_text(const std::string& text,
                            const std::string& source_name,
                            const RunConfig& base) {
  RunConfig cfg = base;
  std::set<std::string> seen;
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::size_t hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    const std::string line = trim(raw);
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      fail(source_name, line_no, "expected key=value, got '" + line + "'");
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (key.empty()) fail(source_name, line_no, "empty key");
    if (!seen.insert(key).second)
      fail(source_name, line_no, "duplicate key '" + key + "'");

    auto num = [&]() { return parse_double(val, source_name, line_no, key); };
    auto integer = [&]() { return parse_int(val, source_name, line_no, key); };
    auto boolean = [&]() { return parse_bool(val, source_name, line_no, key); };

    if (key == "fov_x_nm") cfg.fov_x_nm = num();
    else if (key == "fov_y_nm") cfg.fov_y_nm = num();
    else if (key == "pitch_nm") cfg.pitch_nm = num();
    else if (key == "center_x_nm") cfg.center_x_nm = num();
    else if (key == "center_y_nm") cfg.center_y_nm = num();
    else if (key == "x_separation_nm") cfg.x_separation_nm = num();
    else if (key == "x_current_ma") cfg.x_current_ma = num();
    else if (key == "y_separation_nm") cfg.y_separation_nm = num();
    else if (key == "y_current_ma") cfg.y_current_ma = num();
    else if (key == "gyromagnetic_mhz_per_gauss")
      cfg.gyromagnetic_mhz_per_gauss = num();
    else if (key == "t2_us") cfg.t2_us = num();
    else if (key == "double_quantum_factor") cfg.double_quantum_factor = num();
    else if (key == "fluctuation") cfg.fluctuation = num();
    else if (key == "noise_mode") {
      if (val == "per_pulse") cfg.noise_mode = NoiseMode::per_pulse;
      else if (val == "per_sample") cfg.noise_mode = NoiseMode::per_sample;
      else fail(source_name, line_no,
                "noise_mode must be per_pulse or per_sample, got '" + val + "'");
    } else if (key == "tau_a_us") cfg.tau_a_us = num();
    else if (key == "sigma_a_us") cfg.sigma_a_us = num();
    else if (key == "n_steps_a") cfg.n_steps_a = integer();
    else if (key == "tau_b_us") cfg.tau_b_us = num();
    else if (key == "n_steps_b") cfg.n_steps_b = integer();
    else if (key == "rabi_ceiling_mhz") cfg.rabi_ceiling_mhz = num();
    else if (key == "nyquist_margin") cfg.nyquist_margin = num();
    else if (key == "selectivity_margin") cfg.selectivity_margin = num();
    else if (key == "gap_margin_frac") cfg.gap_margin_frac = num();
    else if (key == "skip_empty_columns") cfg.skip_empty_columns = boolean();
    else if (key == "erase_mode") {
      if (val == "negated_gradient") cfg.erase_mode = EraseMode::negated_gradient;
      else if (val == "positive_gradient")
        cfg.erase_mode = EraseMode::positive_gradient;
      else fail(source_name, line_no,
                "erase_mode must be negated_gradient or positive_gradient, "
                "got '" + val + "'");
    } else if (key == "max_step_angle") cfg.max_step_angle = num();
    else if (key == "idle_skip") cfg.idle_skip = boolean();
    else if (key == "fret_r0_nm") cfg.fret_r0_nm = num();
    else if (key == "fret_depth_nm") cfg.fret_depth_nm = num();
    else if (key == "fret_contrast") cfg.fret_contrast = num();
    else if (key == "surface_pitch_nm") cfg.surface_pitch_nm = num();
    else if (key == "seed") cfg.seed = parse_u64(val, source_name, line_no, key);
    else if (key == "workers") cfg.workers = integer();
    else if (key == "out_dir") cfg.out_dir = val;
    else if (key == "pattern") cfg.pattern_path = val;
    else fail(source_name, line_no, "unknown config key '" + key + "'");
  }

  // Range checks that do not depend on how the config is used.
  if (!(cfg.pitch_nm > 0.0)) throw ConfigError("pitch_nm must be positive");
  if (!(cfg.fov_x_nm >= 0.0) || !(cfg.fov_y_nm >= 0.0))
    throw ConfigError("field of view must be non-negative");
  if (!(cfg.x_separation_nm > 0.0) || !(cfg.y_separation_nm > 0.0))
    throw ConfigError("wire separations must be positive");
  if (!(cfg.x_current_ma > 0.0) || !(cfg.y_current_ma > 0.0))
    throw ConfigError("wire currents must be positive");
  if (!(cfg.gyromagnetic_mhz_per_gauss > 0.0))
    throw ConfigError("gyromagnetic ratio must be positive");
  if (!(cfg.t2_us > 0.0)) throw ConfigError("t2_us must be positive (or inf)");
  if (!(cfg.double_quantum_factor >= 0.0))
    throw ConfigError("double_quantum_factor must be non-negative");
  if (!(cfg.fluctuation >= 0.0))
    throw ConfigError("fluctuation must be non-negative");
  if (!(cfg.tau_a_us > 0.0) || !(cfg.tau_b_us > 0.0) || !(cfg.sigma_a_us > 0.0))
    throw ConfigError("pulse durations must be positive");
  if (cfg.n_steps_a < 1 || cfg.n_steps_b < 1)
    throw ConfigError("pulse step counts must be at least 1");
  if (!(cfg.max_step_angle > 0.0))
    throw ConfigError("max_step_angle must be positive");
  if (!(cfg.surface_pitch_nm >= 0.0))
    throw ConfigError("surface_pitch_nm must be non-negative");
  if (cfg.workers < 0) throw ConfigError("workers must be non-negative");
  return cfg;
}

RunConfig load_config(const std::string& path, const RunConfig& base) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str(), path, base);
}

std::string echo_config(const RunConfig& cfg) {
  std::ostringstream out;
  auto kv = [&out](const char* key, const std::string& val) {
    out << key << " = " << val << "\n";
  };
  kv("fov_x_nm", fmt_double(cfg.fov_x_nm));
  kv("fov_y_nm", fmt_double(cfg.fov_y_nm));
  kv("pitch_nm", fmt_double(cfg.pitch_nm));
  kv("center_x_nm", fmt_double(cfg.center_x_nm));
  kv("center_y_nm", fmt_double(cfg.center_y_nm));
  kv("x_separation_nm", fmt_double(cfg.x_separation_nm));
  kv("x_current_ma", fmt_double(cfg.x_current_ma));
  kv("y_separation_nm", fmt_double(cfg.y_separation_nm));
  kv("y_current_ma", fmt_double(cfg.y_current_ma));
  kv("gyromagnetic_mhz_per_gauss", fmt_double(cfg.gyromagnetic_mhz_per_gauss));
  kv("t2_us", fmt_double(cfg.t2_us));
  kv("double_quantum_factor", fmt_double(cfg.double_quantum_factor));
  kv("fluctuation", fmt_double(cfg.fluctuation));
  kv("noise_mode",
     cfg.noise_mode == NoiseMode::per_pulse ? "per_pulse" : "per_sample");
  kv("tau_a_us", fmt_double(cfg.tau_a_us));
  kv("sigma_a_us", fmt_double(cfg.sigma_a_us));
  kv("n_steps_a", std::to_string(cfg.n_steps_a));
  kv("tau_b_us", fmt_double(cfg.tau_b_us));
  kv("n_steps_b", std::to_string(cfg.n_steps_b));
  kv("rabi_ceiling_mhz", fmt_double(cfg.rabi_ceiling_mhz));
  kv("nyquist_margin", fmt_double(cfg.nyquist_margin));
  kv("selectivity_margin", fmt_double(cfg.selectivity_margin));
  kv("gap_margin_frac", fmt_double(cfg.gap_margin_frac));
  kv("skip_empty_columns", cfg.skip_empty_columns ? "1" : "0");
  kv("erase_mode", cfg.erase_mode == EraseMode::negated_gradient
                       ? "negated_gradient"
                       : "positive_gradient");
  kv("max_step_angle", fmt_double(cfg.max_step_angle));
  kv("idle_skip", cfg.idle_skip ? "1" : "0");
  kv("fret_r0_nm", fmt_double(cfg.fret_r0_nm));
  kv("fret_depth_nm", fmt_double(cfg.fret_depth_nm));
  kv("fret_contrast", fmt_double(cfg.fret_contrast));
  kv("surface_pitch_nm", fmt_double(cfg.surface_pitch_nm));
  if (cfg.seed) kv("seed", std::to_string(*cfg.seed));
  kv("workers", std::to_string(cfg.workers));
  kv("out_dir", cfg.out_dir);
  if (!cfg.pattern_path.empty()) kv("pattern", cfg.pattern_path);
  return out.str();
}

int resolve_workers(const RunConfig& cfg) {
  if (cfg.workers > 0) return cfg.workers;
  if (const char* env = std::getenv("MRL_WORKERS")) {
    errno = 0;
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || errno == ERANGE || n < 1)
      throw ConfigError(std::string("MRL_WORKERS is not a positive integer: '") +
                        env + "'");
    return static_cast<int>(n);
  }
  return 1;
}

}  // namespace mrl
