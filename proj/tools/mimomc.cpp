// SPDX-License-Identifier: Apache-2.0
//
// mimomc - MIMO radar with matrix completion, simulation toolkit
// ------------------------------------------------------------------------
//
// Command line front end.
//
//   mimomc presets
//   mimomc config   --preset doa-s1 --override snr=10
//   mimomc run      --preset recov-s1 --trials 20 --out results/
//   mimomc spectrum --preset doa-s1 --override delta_theta=0.3 --trial 0

#include "mimomc/experiments.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>

namespace fs = std::filesystem;
using namespace mimomc;

namespace {

struct Common {
  std::string preset_name;
  std::string config_file;
  std::vector<std::string> overrides;
  std::optional<int> trials;
  std::optional<std::uint64_t> seed;
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("-p,--preset", c.preset_name, "Named configuration (see `mimomc presets`)");
  app->add_option("-c,--config", c.config_file, "key = value config file, applied after the preset");
  app->add_option("-o,--override", c.overrides, "key=value, applied last (repeatable)");
  app->add_option("-n,--trials", c.trials, "Monte-Carlo trials per point");
  app->add_option("-s,--seed", c.seed, "Master seed");
}

ExperimentConfig resolve(const Common& c) {
  ExperimentConfig cfg;
  if (!c.preset_name.empty()) cfg = preset(c.preset_name);
  if (!c.config_file.empty()) load_config_file(c.config_file, cfg);
  for (const auto& o : c.overrides) {
    const auto [k, v] = parse_override(o);
    apply_override(cfg, k, v);
  }
  if (c.trials) cfg.trials = *c.trials;
  if (c.seed) cfg.seed = *c.seed;
  cfg.validate();
  return cfg;
}

std::ofstream open_out(const fs::path& p) {
  std::ofstream os(p);
  if (!os) throw Error(ErrorKind::Input, "cannot write " + p.string());
  return os;
}

void print_table(const SweepTable& t) {
  std::printf("%-40s %10s %6s %10s %10s %10s %8s\n", "series", t.base.sweep_key.empty() ? "-" : t.base.sweep_key.c_str(),
              "fail", "phi", "mu_max", "P_res", "P_full");
  for (const auto& p : t.points) {
    const auto& s = p.summary;
    std::printf("%-40s %10.4g %6d %10.4g %10.4g %10.4g %8.4g\n", p.series.c_str(), p.sweep_value, s.failed,
                s.mean_phi, s.mean_mu_max, s.resolution_prob, s.full_resolution_prob);
  }
}

int cmd_run(const Common& c, const std::string& out_dir, bool per_trial) {
  const ExperimentConfig cfg = resolve(c);
  fs::create_directories(out_dir);
  const std::string stem = cfg.preset;
  {
    auto os = open_out(fs::path(out_dir) / (stem + "_config.txt"));
    write_config(os, cfg);
  }
  if (cfg.kind == ExperimentKind::WaveSpectrum) {
    auto os = open_out(fs::path(out_dir) / (stem + "_spectrum.csv"));
    write_wave_spectrum_csv(os, cfg);
    std::cout << "wrote " << (fs::path(out_dir) / (stem + "_spectrum.csv")).string() << "\n";
    return 0;
  }

  const auto t0 = std::chrono::steady_clock::now();
  const SweepTable table = run_sweep(cfg);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  {
    auto os = open_out(fs::path(out_dir) / (stem + "_summary.csv"));
    write_summary_csv(os, table);
  }
  if (!cfg.mu0_grid.empty()) {
    auto os = open_out(fs::path(out_dir) / (stem + "_coherence.csv"));
    write_coherence_csv(os, table);
  }
  if (per_trial) {
    auto os = open_out(fs::path(out_dir) / (stem + "_trials.csv"));
    write_trials_csv(os, table);
  }
  print_table(table);
  int failed = 0;
  for (const auto& p : table.points) failed += p.summary.failed;
  std::printf("%zu points, %d failed trials, %.1f s\n", table.points.size(), failed, secs);
  return 0;
}

int cmd_spectrum(const Common& c, int trial, bool full, const std::string& out_file) {
  ExperimentConfig cfg = resolve(c);
  if (cfg.kind != ExperimentKind::Resolution) cfg.kind = ExperimentKind::Resolution;
  const SpectrumResult s = trial_spectrum(cfg, trial, full);
  if (out_file.empty()) {
    write_spectrum_csv(std::cout, s);
  } else {
    auto os = open_out(out_file);
    write_spectrum_csv(os, s);
  }
  std::cerr << "peaks:";
  for (const auto& p : s.peaks) std::cerr << ' ' << format_number(p.theta_deg);
  std::cerr << '\n';
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"MIMO radar with matrix completion: simulation experiments"};
  app.require_subcommand(1);

  app.add_subcommand("presets", "List named configurations");

  Common common;
  auto* cfg_cmd = app.add_subcommand("config", "Print the resolved configuration");
  add_common(cfg_cmd, common);

  auto* run = app.add_subcommand("run", "Run a Monte-Carlo sweep and write CSV files");
  add_common(run, common);
  std::string out_dir = ".";
  bool per_trial = false;
  run->add_option("--out", out_dir, "Output directory");
  run->add_flag("--per-trial", per_trial, "Also write one CSV row per trial");
  int threads = 0;
  run->add_option("-j,--threads", threads, "Worker threads (0: runtime default)");

  auto* spec = app.add_subcommand("spectrum", "Dump the MUSIC pseudo-spectrum of one realization");
  add_common(spec, common);
  int trial = 0;
  bool full = false;
  std::string out_file;
  spec->add_option("-t,--trial", trial, "Trial index");
  spec->add_flag("--full", full, "Use the full noisy data instead of the completed matrices");
  spec->add_option("--out", out_file, "Output CSV (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand("presets")) {
      for (const auto& name : preset_names()) {
        const auto p = preset(name);
        std::cout << name << "  " << to_string(p.kind) << ", scheme " << to_string(p.scheme) << ", " << p.mr
                  << "x" << p.matrix_cols() << ", " << p.trials << " trials\n";
      }
      return 0;
    }
    if (app.got_subcommand("config")) {
      write_config(std::cout, resolve(common));
      return 0;
    }
    if (app.got_subcommand("run")) {
      if (threads > 0) common.overrides.push_back("threads=" + std::to_string(threads));
      return cmd_run(common, out_dir, per_trial);
    }
    return cmd_spectrum(common, trial, full, out_file);
  } catch (const Error& e) {
    std::cerr << "mimomc: " << e.what() << '\n';
    return e.kind() == ErrorKind::Config ? 2 : 1;
  } catch (const std::exception& e) {
    std::cerr << "mimomc: " << e.what() << '\n';
    return 1;
  }
}
