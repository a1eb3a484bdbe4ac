// SPDX-License-Identifier: Apache-2.0
//
// mimomc - MIMO radar with matrix completion, simulation toolkit
// ------------------------------------------------------------------------

#pragma once

#include "mimomc/config.hpp"
#include "mimomc/estimation.hpp"
#include "mimomc/matcomp.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace mimomc {

/// Named figure-class configurations. Throws Error(Config) for unknown names.
ExperimentConfig preset(const std::string& name);
std::vector<std::string> preset_names();

/// Result of one Monte-Carlo realization. A failed trial keeps its error
/// message and leaves the numeric fields at their defaults.
struct TrialOutcome {
  int trial_index = 0;
  std::uint64_t trial_seed = 0;
  bool failed = false;
  std::string error;

  Scene scene;
  double phi = 0.0;                 ///< relative recovery error (mean over pulses)
  CoherenceReport coherence;        ///< at the numerical rank
  std::optional<CoherenceReport> coherence_at_k;  ///< at rank K, when K fits
  int iterations = 0;               ///< solver iterations (sum over pulses)
  bool converged = true;

  std::optional<bool> resolution;       ///< MC pipeline
  std::optional<bool> full_resolution;  ///< full-data baseline
  std::vector<double> doa_estimates;
  std::vector<double> full_doa_estimates;
  std::vector<double> speed_estimates;  ///< 2D-MUSIC only
};

/// Scene drawn for a trial: first DOA uniform so that the last target stays
/// inside [doa_min, doa_max], later targets spaced by delta_theta, speeds
/// uniform, reflectivities CN(0, 1). Fixed doas / first_doa / speeds win.
Scene draw_scene(const ExperimentConfig& cfg, std::uint64_t scene_seed);

/// Seeds of one trial, all derived from derive_row_seed.
struct TrialSeeds {
  std::uint64_t trial = 0;
  std::uint64_t scene = 0;
  std::uint64_t waveform = 0;
  std::uint64_t mask = 0;
  std::uint64_t noise(int pulse) const;
};
TrialSeeds trial_seeds(std::uint64_t master_seed, int trial_index);

/// Runs one realization of cfg.kind. Never throws for in-pipeline errors;
/// those produce a failed outcome. Invalid configs throw Error(Config).
TrialOutcome run_trial(const ExperimentConfig& cfg, int trial_index);

struct PointSummary {
  int trials = 0;
  int failed = 0;
  int converged = 0;
  int per_row_count = 0;
  double occupancy = 0.0;
  double m_over_df = 0.0;       ///< nominal, with r = K
  double mean_phi = 0.0;
  double std_phi = 0.0;
  double mean_mu_max = 0.0;
  double mean_mu_max_k = 0.0;   ///< NaN when rank K was not evaluated
  double mean_iterations = 0.0;
  double resolution_prob = 0.0;       ///< NaN when not a resolution run
  double full_resolution_prob = 0.0;  ///< NaN without a full-data baseline
  std::vector<double> prob_mu_above;    ///< Pr(mu_max > mu0) per mu0_grid value
  std::vector<double> prob_mu_k_above;  ///< same at rank K
};

/// Aggregates outcomes in index order; failed trials count towards
/// `failed` only.
PointSummary summarize(const ExperimentConfig& cfg, const std::vector<TrialOutcome>& outcomes);

struct SweepPoint {
  std::string series;
  double sweep_value = 0.0;
  ExperimentConfig config;
  std::vector<TrialOutcome> outcomes;
  PointSummary summary;
};

struct SweepTable {
  ExperimentConfig base;
  std::vector<SweepPoint> points;
};

/// Config for one (series, sweep value) point.
ExperimentConfig point_config(const ExperimentConfig& base, const OverrideSet& series,
                              const std::optional<double>& sweep_value);

/// Runs every series at every sweep value. Trials may run in parallel;
/// results do not depend on the thread count.
SweepTable run_sweep(const ExperimentConfig& cfg);

/// One row per point, with provenance columns.
void write_summary_csv(std::ostream& os, const SweepTable& table);
/// One row per (point, mu0).
void write_coherence_csv(std::ostream& os, const SweepTable& table);
/// One row per trial.
void write_trials_csv(std::ostream& os, const SweepTable& table);

/// Maximum column power spectra of both waveform families on a uniform
/// omega grid over [-1/2, 1/2]; header omega,hadamard,gorth.
void write_wave_spectrum_csv(std::ostream& os, const ExperimentConfig& cfg);

/// Spatial frequency d_t sin(theta) / lambda at which a transmit steering
/// vector enters the column spectra.
double spatial_frequency(double doa_deg, const RadarConfig& radar);

/// Pseudo-spectrum of a single realization: the MC-recovered (or full, if
/// `full_data`) stack for trial `trial_index`, 1D over the search grid or
/// 2D when cfg.music2d.
SpectrumResult trial_spectrum(const ExperimentConfig& cfg, int trial_index, bool full_data);

} // namespace mimomc
