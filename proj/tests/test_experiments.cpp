// SPDX-License-Identifier: Apache-2.0
//
// mimomc - MIMO radar with matrix completion, simulation toolkit
// ------------------------------------------------------------------------

#include "mimomc/experiments.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <sstream>

using namespace mimomc;

namespace {

ExperimentConfig small_recovery() {
  ExperimentConfig c;
  c.preset = "unit";
  c.kind = ExperimentKind::Recovery;
  c.mt = c.mr = 12;
  c.targets = 2;
  c.trials = 6;
  c.seed = 77;
  return c;
}

std::string csv_of(const SweepTable& t, void (*writer)(std::ostream&, const SweepTable&)) {
  std::ostringstream os;
  writer(os, t);
  return os.str();
}

} // namespace

TEST_CASE("scene law", "[experiments]") {
  ExperimentConfig c;
  c.targets = 3;
  c.delta_theta = 4.0;
  c.doa_min = -10.0;
  c.doa_max = 20.0;
  for (std::uint64_t s = 0; s < 200; ++s) {
    const Scene scene = draw_scene(c, s);
    REQUIRE(scene.size() == 3u);
    REQUIRE(scene[0].doa_deg >= -10.0);
    REQUIRE(scene[2].doa_deg <= 20.0 + 1e-12);
    REQUIRE(scene[1].doa_deg - scene[0].doa_deg == Catch::Approx(4.0));
    for (const auto& t : scene) REQUIRE((t.speed >= 0.0 && t.speed <= 500.0));
  }
  // pinning a field leaves the other draws unchanged
  const Scene free_scene = draw_scene(c, 9);
  c.first_doa = 1.0;
  const Scene pinned = draw_scene(c, 9);
  CHECK(pinned[0].doa_deg == 1.0);
  CHECK(pinned[1].speed == free_scene[1].speed);
  CHECK(pinned[2].reflectivity == free_scene[2].reflectivity);

  c.doas = {5.0, -5.0, 0.0};
  CHECK(draw_scene(c, 9)[1].doa_deg == -5.0);

  ExperimentConfig crowded;
  crowded.targets = 5;
  crowded.delta_theta = 50.0;
  CHECK_THROWS_AS(draw_scene(crowded, 1), Error);
}

TEST_CASE("trial seeds are distinct streams", "[experiments]") {
  const TrialSeeds a = trial_seeds(1, 0), b = trial_seeds(1, 1);
  CHECK(a.trial != b.trial);
  CHECK(a.scene != a.mask);
  CHECK(a.noise(1) != a.noise(2));
  CHECK(trial_seeds(1, 0).mask == a.mask);
  CHECK(trial_seeds(2, 0).trial != a.trial);
}

TEST_CASE("run_trial is deterministic", "[experiments]") {
  const auto c = small_recovery();
  const TrialOutcome a = run_trial(c, 3), b = run_trial(c, 3);
  CHECK(a.phi == b.phi);
  CHECK(a.iterations == b.iterations);
  CHECK(a.scene[0].doa_deg == b.scene[0].doa_deg);
  CHECK(run_trial(c, 4).phi != a.phi);
}

TEST_CASE("full noise-free observation recovers the matrix", "[experiments]") {
  auto c = small_recovery();
  c.snr_db = kNoNoise;
  c.occupancy = 1.0;
  // near-endfire pairs are badly conditioned and need more than the default budget
  c.max_iter = 20000;
  c.tol = 1e-6;
  for (int t = 0; t < 3; ++t) {
    const TrialOutcome o = run_trial(c, t);
    REQUIRE_FALSE(o.failed);
    CHECK(o.converged);
    CHECK(o.phi < 1e-5);
  }
  c.scheme = Scheme::SubNyquist;
  c.n_nyquist = 32;
  const TrialOutcome o = run_trial(c, 0);
  REQUIRE_FALSE(o.failed);
  CHECK(o.phi < 1e-5);
}

TEST_CASE("in-pipeline errors become failed trials", "[experiments][error]") {
  auto c = small_recovery();
  c.scheme = Scheme::SubNyquist;
  c.waveform = WaveformKind::Hadamard;
  c.n_nyquist = 48;
  const TrialOutcome o = run_trial(c, 0);
  CHECK(o.failed);
  CHECK(o.error.find("power of two") != std::string::npos);

  c.trials = 2;
  const SweepTable t = run_sweep(c);
  REQUIRE(t.points.size() == 1u);
  CHECK(t.points[0].summary.failed == 2);
  CHECK(csv_of(t, write_trials_csv).find("power of two") != std::string::npos);

  auto bad = small_recovery();
  bad.trials = 0;
  CHECK_THROWS_AS(run_trial(bad, 0), Error);
}

TEST_CASE("coherence trials report mu at rank K", "[experiments]") {
  auto c = small_recovery();
  c.kind = ExperimentKind::Coherence;
  c.snr_db = kNoNoise;
  c.mu0_grid = {1.0, 100.0};
  c.trials = 5;
  const SweepTable t = run_sweep(c);
  const auto& s = t.points[0].summary;
  CHECK(s.prob_mu_above.size() == 2u);
  CHECK(s.prob_mu_above[1] == 0.0);
  CHECK(s.mean_mu_max >= 1.0);
  CHECK(std::isnan(s.resolution_prob));
}

TEST_CASE("thread count does not change results", "[experiments]") {
  auto c = small_recovery();
  c.sweep_key = "occupancy";
  c.sweep_values = {0.5, 0.9};
  c.series = {{{"delta_theta", "0"}}, {{"delta_theta", "10"}}};
  c.threads = 1;
  const SweepTable serial = run_sweep(c);
  c.threads = 2;
  const SweepTable parallel = run_sweep(c);
  CHECK(csv_of(serial, write_summary_csv) == csv_of(parallel, write_summary_csv));
  CHECK(csv_of(serial, write_trials_csv) == csv_of(parallel, write_trials_csv));
}

TEST_CASE("summary CSV carries provenance", "[experiments]") {
  auto c = small_recovery();
  c.trials = 2;
  c.sweep_key = "m_over_df";
  c.sweep_values = {3.0};
  const SweepTable t = run_sweep(c);
  const std::string text = csv_of(t, write_summary_csv);
  CHECK(text.rfind("preset,seed,trial_first,trial_last,series,sweep_key,sweep_value,", 0) == 0);
  const std::string row = text.substr(text.find('\n') + 1);
  CHECK(row.rfind("unit,77,0,1,base,m_over_df,3,2,", 0) == 0);
  CHECK(t.points[0].config.m_over_df == 3.0);
  CHECK(t.points[0].config.sweep_key.empty());
}

TEST_CASE("point config applies series then sweep value", "[experiments]") {
  auto c = small_recovery();
  c.sweep_key = "mtmr";
  const auto p = point_config(c, {{"mt", "5"}, {"snr", "10"}}, 20.0);
  CHECK(p.mt == 20);
  CHECK(p.mr == 20);
  CHECK(p.snr_db == 10.0);
  CHECK(p.series.empty());
  CHECK_THROWS_AS(point_config(c, {{"nope", "1"}}, std::nullopt), Error);
}

TEST_CASE("resolution probability is a probability", "[experiments]") {
  auto c = preset("doa-s1");
  c.trials = 4;
  c.sweep_values = {0.3};
  c.series = {{{"snr", "25"}}};
  const SweepTable t = run_sweep(c);
  const auto& s = t.points[0].summary;
  CHECK(s.resolution_prob >= 0.0);
  CHECK(s.resolution_prob <= 1.0);
  CHECK(s.full_resolution_prob >= 0.0);
  CHECK(s.full_resolution_prob <= 1.0);
  for (const auto& o : t.points[0].outcomes) {
    REQUIRE(o.resolution.has_value());
    CHECK(o.doa_estimates.size() <= 2u);
  }
}

TEST_CASE("2D spectrum of a trial", "[experiments]") {
  auto c = preset("doa-s2");
  c.music2d = true;
  c.targets = 1;
  c.doas = {10.0};
  c.speeds = {200.0};
  c.pulses = 6;
  c.speed_step = 10.0;
  c.theta2d_step = 0.05;
  c.theta2d_halfwidth = 0.5;
  c.snr_db = kNoNoise;
  c.occupancy = 1.0;
  c.n_nyquist = 64;
  c.sweep_key.clear();
  c.sweep_values.clear();
  c.series.clear();
  const SpectrumResult s = trial_spectrum(c, 0, false);
  REQUIRE(s.peaks.size() == 1u);
  CHECK(std::abs(s.peaks[0].theta_deg - 10.0) <= 0.05 + 1e-9);
  CHECK(std::abs(s.peaks[0].speed - 200.0) <= 10.0 + 1e-9);
}

TEST_CASE("waveform spectrum CSV", "[experiments]") {
  auto c = preset("wave-spectrum");
  c.omega_points = 11;
  std::ostringstream os;
  write_wave_spectrum_csv(os, c);
  const std::string text = os.str();
  CHECK(text.rfind("omega,hadamard,gorth\n", 0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == 12);
  const auto radar = c.radar();
  CHECK(spatial_frequency(0.0, radar) == 0.0);
  CHECK(spatial_frequency(90.0, radar) == Catch::Approx(radar.dt / radar.wavelength));
}
