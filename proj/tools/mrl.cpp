// Command-line driver for the magnetic-resonance pattern-writing simulator.
//
// Stages (as subcommands or --stage <name>):
//   synth    pattern -> microwave waveform files
//   compile  pattern -> full gradient+pulse schedule (sequence.txt)
//   evolve   sequence.txt + spin lattice -> populations.csv
//   readout  populations.csv -> dose map + metrics
//   run      all of the above in one process
//   oracle   closed-form two-level drive checks (used by the test suite)
//
// Exit codes: 0 success, 2 configuration error, 3 numeric/stability error,
// 4 I/O error, 1 anything else.

#include <cstdint>
#include <cstdio>
#include <cmath>
#include <filesystem>
#include <string>

#include <CLI11.hpp>

#include "mrl/config.hpp"
#include "mrl/errors.hpp"
#include "mrl/pattern_io.hpp"
#include "mrl/pipeline.hpp"

namespace {

struct OracleArgs {
  double rabi_mhz = 0.0;
  double detuning_mhz = 0.0;
  double time_us = -1.0;
};

// Analytic detuned-drive law for a constant two-level tone:
// P(t) = Omega^2/(Omega^2 + Delta^2) * sin^2(pi * sqrt(Omega^2 + Delta^2) * t)
int run_oracle(const OracleArgs& a) {
  if (!(a.rabi_mhz > 0.0))
    throw mrl::ConfigError("oracle: --rabi must be positive");
  const double w2 = a.rabi_mhz * a.rabi_mhz;
  const double f2 = w2 + a.detuning_mhz * a.detuning_mhz;
  const double p_max = w2 / f2;
  constexpr double pi = 3.1415926535897932384626433832795;
  std::printf("p_max = %.17g\n", p_max);
  if (a.time_us >= 0.0) {
    const double s = std::sin(pi * std::sqrt(f2) * a.time_us);
    std::printf("p_t = %.17g\n", p_max * s * s);
  }
  return 0;
}

void write_error_record(const std::string& out_dir, const char* kind,
                        const std::string& message) {
  if (out_dir.empty()) return;
  try {
    std::filesystem::create_directories(out_dir);
    mrl::write_text_file(out_dir + "/error.txt", std::string("# mrl error v1\n") +
                                                     "kind = " + kind + "\n" +
                                                     "message = " + message +
                                                     "\n");
  } catch (...) {
    // The record is best-effort; the exit code and stderr carry the error.
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"magnetic-resonance pattern writing: pulse compiler and spin simulator"};
  app.fallthrough();
  app.require_subcommand(0, 1);

  std::string config_path, pattern_path, out_dir, stage;
  std::uint64_t seed = 0;
  int workers = 0;
  auto* opt_config = app.add_option("--config", config_path,
                                    "key=value config file ('#' comments)");
  auto* opt_pattern =
      app.add_option("--pattern", pattern_path, "target pattern file");
  auto* opt_seed =
      app.add_option("--seed", seed, "RNG seed (required for noisy stages)");
  auto* opt_workers =
      app.add_option("--workers", workers,
                     "worker threads (default: MRL_WORKERS env var or 1)");
  auto* opt_out = app.add_option("--out", out_dir, "artifact output directory");
  app.add_option("--stage", stage,
                 "stage name (alternative to the subcommand form)");

  app.add_subcommand("synth", "pattern -> waveform files");
  app.add_subcommand("compile", "pattern -> gradient+pulse schedule");
  app.add_subcommand("evolve", "schedule + lattice -> populations");
  app.add_subcommand("readout", "populations -> dose map + metrics");
  app.add_subcommand("run", "full pipeline");

  OracleArgs oracle;
  auto* oracle_cmd =
      app.add_subcommand("oracle", "closed-form two-level drive values");
  oracle_cmd->add_option("--rabi", oracle.rabi_mhz, "Rabi rate, cyclic MHz")
      ->required();
  oracle_cmd->add_option("--detuning", oracle.detuning_mhz,
                         "drive detuning, MHz");
  oracle_cmd->add_option("--time", oracle.time_us, "evaluate P at this time, us");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return 2;
  }

  std::string picked = stage;
  for (const auto* sub : app.get_subcommands()) {
    if (!picked.empty() && picked != sub->get_name()) {
      std::fprintf(stderr,
                   "error: give either a subcommand or --stage, not both\n");
      return 2;
    }
    picked = sub->get_name();
  }

  try {
    if (picked.empty())
      throw mrl::ConfigError(
          "no stage selected: use a subcommand (synth/compile/evolve/readout/"
          "run/oracle) or --stage");
    if (picked == "oracle") return run_oracle(oracle);

    mrl::RunConfig cfg;
    if (opt_config->count()) cfg = mrl::load_config(config_path);
    if (opt_pattern->count()) cfg.pattern_path = pattern_path;
    if (opt_seed->count()) cfg.seed = seed;
    if (opt_workers->count()) cfg.workers = workers;
    if (opt_out->count()) cfg.out_dir = out_dir;
    out_dir = cfg.out_dir;  // for the error record

    if (picked == "synth") mrl::stage_synth(cfg);
    else if (picked == "compile") mrl::stage_compile(cfg);
    else if (picked == "evolve") mrl::stage_evolve(cfg);
    else if (picked == "readout") mrl::stage_readout(cfg);
    else if (picked == "run") mrl::stage_run(cfg);
    else
      throw mrl::ConfigError("unknown stage '" + picked + "'");
    return 0;
  } catch (const mrl::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    write_error_record(out_dir, "config", e.what());
    return 2;
  } catch (const mrl::NumericError& e) {
    std::fprintf(stderr, "numeric error: %s\n", e.what());
    write_error_record(out_dir, "numeric", e.what());
    return 3;
  } catch (const mrl::IoError& e) {
    std::fprintf(stderr, "io error: %s\n", e.what());
    write_error_record(out_dir, "io", e.what());
    return 4;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    write_error_record(out_dir, "internal", e.what());
    return 1;
  }
}
