// SPDX-License-Identifier: Apache-2.0
//
// mimomc - MIMO radar with matrix completion, simulation toolkit
// ------------------------------------------------------------------------

#include "mimomc/experiments.hpp"

namespace mimomc {

namespace {

std::vector<double> range(double lo, double hi, double step) {
  std::vector<double> v;
  for (int i = 0; lo + i * step <= hi + 1e-9; ++i) v.push_back(lo + i * step);
  return v;
}

OverrideSet set(std::initializer_list<Override> kv) { return OverrideSet(kv); }

// Sparse arrays used by the numerical study: the transmit aperture spans
// the receive aperture (dt = mr / 2 wavelengths).
void sparse_tx(ExperimentConfig& c) {
  c.dt_wavelengths = 0.5 * c.mr;
  c.dr_wavelengths = 0.5;
}

ExperimentConfig coh_s1() {
  ExperimentConfig c;
  c.preset = "coh-s1";
  c.kind = ExperimentKind::Coherence;
  c.scheme = Scheme::MatchedFilterBank;
  c.delta_theta = 5.0;
  c.snr_db = kNoNoise;
  c.trials = 500;
  c.mu0_grid = range(1.0, 8.0, 0.25);
  c.sweep_key = "mtmr";
  c.sweep_values = {10, 20, 40};
  return c;
}

ExperimentConfig coh_s2() {
  ExperimentConfig c = coh_s1();
  c.preset = "coh-s2";
  c.scheme = Scheme::SubNyquist;
  c.waveform = WaveformKind::GaussianOrthogonal;
  c.mt = c.mr = 20;
  c.speed_min = 150.0;
  c.speed_max = 450.0;
  c.sweep_key = "n";
  c.sweep_values = {32, 64, 128, 256};
  return c;
}

ExperimentConfig recov_s1() {
  ExperimentConfig c;
  c.preset = "recov-s1";
  c.kind = ExperimentKind::Recovery;
  c.scheme = Scheme::MatchedFilterBank;
  c.mt = c.mr = 40;
  sparse_tx(c);
  c.snr_db = 25.0;
  c.trials = 100;
  c.sweep_key = "m_over_df";
  c.sweep_values = range(1.0, 6.0, 0.5);
  c.series = {set({{"delta_theta", "0"}}), set({{"delta_theta", "1"}}), set({{"delta_theta", "5"}})};
  return c;
}

ExperimentConfig recov_s2() {
  ExperimentConfig c = recov_s1();
  c.preset = "recov-s2";
  c.scheme = Scheme::SubNyquist;
  c.n_nyquist = 256;
  c.series.clear();
  for (const char* w : {"hadamard", "gorth"})
    for (const char* d : {"0", "1", "5"}) c.series.push_back(set({{"waveform", w}, {"delta_theta", d}}));
  return c;
}

ExperimentConfig wave_spectrum() {
  ExperimentConfig c;
  c.preset = "wave-spectrum";
  c.kind = ExperimentKind::WaveSpectrum;
  c.scheme = Scheme::SubNyquist;
  c.mt = 10;
  c.n_nyquist = 32;
  c.trials = 1;
  c.omega_points = 1001;
  return c;
}

ExperimentConfig wave_recov() {
  ExperimentConfig c;
  c.preset = "wave-recov";
  c.kind = ExperimentKind::Recovery;
  c.scheme = Scheme::SubNyquist;
  c.mr = 128;
  c.mt = 10;
  c.n_nyquist = 32;
  c.snr_db = 25.0;
  c.trials = 50;
  c.sweep_key = "m_over_df";
  c.sweep_values = range(1.0, 6.0, 0.5);
  for (const char* d : {"20,40", "0,80"})
    for (const char* w : {"hadamard", "gorth"}) c.series.push_back(set({{"doas", d}, {"waveform", w}}));
  return c;
}

ExperimentConfig doa_s1() {
  ExperimentConfig c;
  c.preset = "doa-s1";
  c.kind = ExperimentKind::Resolution;
  c.scheme = Scheme::MatchedFilterBank;
  c.mt = c.mr = 20;
  sparse_tx(c);
  c.pulses = 5;
  c.first_doa = 10.0;
  c.speeds = {150.0, 400.0};
  c.occupancy = 0.5;
  c.full_baseline = true;
  c.trials = 200;
  c.sweep_key = "delta_theta";
  c.sweep_values = {0.05, 0.08, 0.1, 0.12, 0.15, 0.18, 0.2, 0.22, 0.25, 0.3};
  c.series = {set({{"snr", "10"}}), set({{"snr", "25"}})};
  return c;
}

ExperimentConfig doa_s2() {
  ExperimentConfig c = doa_s1();
  c.preset = "doa-s2";
  c.scheme = Scheme::SubNyquist;
  c.n_nyquist = 256;
  c.series.clear();
  for (const char* w : {"gorth", "hadamard"})
    for (const char* s : {"10", "25"}) c.series.push_back(set({{"waveform", w}, {"snr", s}}));
  return c;
}

ExperimentConfig scheme_compare() {
  ExperimentConfig c;
  c.preset = "scheme-compare";
  c.kind = ExperimentKind::Recovery;
  c.waveform = WaveformKind::GaussianOrthogonal;
  c.mr = 40;
  sparse_tx(c);
  c.snr_db = 25.0;
  c.occupancy = 0.5;
  c.trials = 100;
  c.sweep_key = "mtn";
  c.sweep_values = {8, 16, 32, 64, 128};
  for (const char* mr : {"40", "80"})
    for (const char* d : {"5", "30"})
      for (const char* s : {"I", "II"}) {
        const std::string dt = mr == std::string("40") ? "20" : "40";
        c.series.push_back(set({{"scheme", s}, {"mr", mr}, {"dt", dt}, {"delta_theta", d}}));
      }
  return c;
}

struct Entry {
  const char* name;
  ExperimentConfig (*make)();
};

constexpr Entry kPresets[] = {
    {"coh-s1", coh_s1},         {"coh-s2", coh_s2},         {"recov-s1", recov_s1},
    {"recov-s2", recov_s2},     {"wave-spectrum", wave_spectrum}, {"wave-recov", wave_recov},
    {"doa-s1", doa_s1},         {"doa-s2", doa_s2},         {"scheme-compare", scheme_compare},
};

} // namespace

ExperimentConfig preset(const std::string& name) {
  for (const auto& e : kPresets)
    if (name == e.name) return e.make();
  throw Error(ErrorKind::Config, "unknown preset '" + name + "'");
}

std::vector<std::string> preset_names() {
  std::vector<std::string> names;
  for (const auto& e : kPresets) names.emplace_back(e.name);
  return names;
}

} // namespace mimomc
