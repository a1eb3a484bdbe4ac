// SPDX-License-Identifier: Apache-2.0
//
// mimomc - MIMO radar with matrix completion, simulation toolkit
// ------------------------------------------------------------------------

#pragma once

#include "mimomc/signal_model.hpp"

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <string>
#include <utility>
#include <vector>

namespace mimomc {

enum class ExperimentKind { Coherence, Recovery, Resolution, WaveSpectrum };

using Override = std::pair<std::string, std::string>;
using OverrideSet = std::vector<Override>;

/// Flat experiment description. Every field is addressable by the key named
/// in its comment, both in config files and as `--override key=value`.
struct ExperimentConfig {
  std::string preset = "custom";            // preset
  ExperimentKind kind = ExperimentKind::Recovery;  // kind: coherence|recovery|resolution|spectrum
  Scheme scheme = Scheme::MatchedFilterBank;  // scheme: I|II
  WaveformKind waveform = WaveformKind::GaussianOrthogonal;  // waveform: gorth|hadamard

  // array and timing
  int mt = 40;                 // mt
  int mr = 40;                 // mr
  int n_nyquist = 256;         // n
  int pulses = 1;              // q
  double dt_wavelengths = 0.5; // dt
  double dr_wavelengths = 0.5; // dr
  double carrier_freq = 1e9;   // carrier
  double t_pri = 1e-4;         // t_pri
  double t_sample = 1e-8;      // t_sample
  double energy = 0.0;         // energy (0 means mt)

  // scene law
  int targets = 2;                 // targets
  std::vector<double> doas;        // doas: fixed DOA list, overrides the random law
  double first_doa = std::numeric_limits<double>::quiet_NaN();  // first_doa: fixed first DOA
  double doa_min = -90.0;          // doa_min
  double doa_max = 90.0;           // doa_max
  double delta_theta = 5.0;        // delta_theta
  std::vector<double> speeds;      // speeds: fixed speeds
  double speed_min = 0.0;          // speed_min
  double speed_max = 500.0;        // speed_max

  // acquisition
  double snr_db = 25.0;            // snr (inf for noise-free)
  double occupancy = 0.5;          // occupancy
  double m_over_df = 0.0;          // m_over_df (> 0 takes precedence over occupancy)

  // solver
  double tau = 0.0;                // tau (0 means 5 sqrt(n1 n2))
  double tol = 1e-4;               // tol
  int max_iter = 500;              // max_iter
  bool use_noise_radius = true;    // noise_radius: 1|0

  // estimation
  bool full_baseline = false;      // full_baseline
  bool music2d = false;            // music2d
  double coarse_step = 0.1;        // coarse_step
  double fine_step = 0.005;        // fine_step
  double refine_halfwidth = 0.5;   // refine_halfwidth
  double speed_step = 5.0;         // speed_step (2D-MUSIC speed grid over [speed_min, speed_max])
  double theta2d_halfwidth = 2.0;  // theta2d_halfwidth (2D grid around the 1D estimates)
  double theta2d_step = 0.01;      // theta2d_step
  double eps = 0.1;                // eps

  // coherence
  std::vector<double> mu0_grid;    // mu0_grid

  // waveform spectrum
  int omega_points = 1001;         // omega_points

  // run control
  int trials = 100;                // trials
  std::uint64_t seed = 1;          // seed
  int threads = 0;                 // threads (0: runtime default)

  // sweep
  std::string sweep_key;           // sweep: any numeric key above, or mtmr / mtn
  std::vector<double> sweep_values;   // sweep_values
  std::vector<OverrideSet> series; // series: k=v&k=v | k=v ...

  /// Radar configuration implied by the array/timing fields.
  RadarConfig radar() const;
  /// Per-row sample count L for the current occupancy or m/df target.
  int per_row_count() const;
  int matrix_cols() const { return scheme == Scheme::MatchedFilterBank ? mt : n_nyquist; }
  /// Throws Error(Config) on invalid combinations.
  void validate() const;
};

/// Applies one key/value pair. Unknown keys and malformed values throw
/// Error(Config).
void apply_override(ExperimentConfig& cfg, const std::string& key, const std::string& value);
void apply_overrides(ExperimentConfig& cfg, const OverrideSet& overrides);

/// Parses "key=value".
Override parse_override(const std::string& text);

/// Config file grammar, one statement per line:
///   line    := blank | comment | key ws? '=' ws? value
///   comment := '#' anything
///   value   := scalar | list ; list := scalar (',' scalar)*
/// Keys are those of apply_override. `series` values use '|' between
/// series and '&' between the pairs of one series.
void load_config(std::istream& is, ExperimentConfig& cfg);
void load_config_file(const std::string& path, ExperimentConfig& cfg);

/// Serializes every key (round-trips through load_config).
void write_config(std::ostream& os, const ExperimentConfig& cfg);

std::string to_string(ExperimentKind kind);
std::string to_string(Scheme scheme);
std::string to_string(WaveformKind kind);
std::string series_label(const OverrideSet& series);
/// Shortest round-tripping decimal form; inf/-inf/nan spelled out.
std::string format_number(double value);

} // namespace mimomc
