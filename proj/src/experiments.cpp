// SPDX-License-Identifier: Apache-2.0
//
// mimomc - MIMO radar with matrix completion, simulation toolkit
// ------------------------------------------------------------------------

#include "mimomc/experiments.hpp"

#include "mimomc/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <set>
#include <sstream>

#ifdef MIMOMC_HAVE_OPENMP
#include <omp.h>
#endif

namespace mimomc {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string join(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ";" : "") + format_number(v[i]);
  return s;
}

std::string tri(const std::optional<bool>& b) { return b ? (*b ? "1" : "0") : ""; }

std::vector<double> doas_of(const Scene& scene) {
  std::vector<double> d;
  for (const auto& t : scene) d.push_back(t.doa_deg);
  return d;
}

double nominal_m_over_df(const ExperimentConfig& cfg) {
  const int n1 = cfg.mr, n2 = cfg.matrix_cols();
  const int r = std::min({cfg.targets, n1, n2});
  return static_cast<double>(cfg.per_row_count()) * n1 / (static_cast<double>(r) * (n1 + n2 - r));
}

// Everything a trial produces before estimation.
struct Simulation {
  RadarConfig radar;
  Scene scene;
  std::optional<WaveformMatrix> wave;
  CMatrix first_clean;
  std::vector<CMatrix> recovered_mf;  // per pulse, mr x mt
  std::vector<CMatrix> full_mf;
};

CMatrix clean_matrix(const ExperimentConfig& cfg, const Simulation& sim, int q) {
  if (cfg.scheme == Scheme::MatchedFilterBank) return noise_free_mf_matrix(sim.scene, sim.radar, q).values;
  return noise_free_raw_matrix(sim.scene, sim.radar, *sim.wave, q).values;
}

CMatrix to_mf(const ExperimentConfig& cfg, const Simulation& sim, const CMatrix& m) {
  return cfg.scheme == Scheme::SubNyquist ? matched_filter(m, *sim.wave) : m;
}

Simulation simulate(const ExperimentConfig& cfg, const TrialSeeds& seeds, TrialOutcome& out, bool complete,
                    bool keep_full) {
  Simulation sim;
  sim.radar = cfg.radar();
  sim.scene = draw_scene(cfg, seeds.scene);
  out.scene = sim.scene;
  if (cfg.scheme == Scheme::SubNyquist) {
    const double energy = cfg.energy > 0 ? cfg.energy : static_cast<double>(cfg.mt);
    sim.wave = gen_waveforms(cfg.waveform, cfg.mt, cfg.n_nyquist, energy, seeds.waveform);
  }
  sim.first_clean = clean_matrix(cfg, sim, 1);
  if (!complete) return sim;

  const int n1 = cfg.mr, n2 = cfg.matrix_cols();
  const int per_row = cfg.per_row_count();
  double phi_sum = 0.0;
  out.iterations = 0;
  out.converged = true;
  for (int q = 1; q <= cfg.pulses; ++q) {
    const CMatrix clean = q == 1 ? sim.first_clean : clean_matrix(cfg, sim, q);
    const DataMatrix noisy = add_noise(DataMatrix{clean, cfg.scheme, q}, cfg.snr_db, seeds.noise(q));
    const ObservationMask mask = make_mask(cfg.scheme, n1, n2, per_row, seeds.mask, q);

    SvtParams params;
    if (cfg.tau > 0) params.tau = cfg.tau;
    params.tol = cfg.tol;
    params.max_iter = cfg.max_iter;
    if (cfg.use_noise_radius && std::isfinite(cfg.snr_db))
      params.noise_radius =
          noise_radius(static_cast<double>(mask.size()), std::sqrt(noise_variance_for_snr(clean, cfg.snr_db)));

    const CompletionResult res = svt_complete(observe(noisy, mask), params);
    phi_sum += relative_error(res.recovered, clean);
    out.iterations += res.iterations;
    out.converged = out.converged && res.converged;
    sim.recovered_mf.push_back(to_mf(cfg, sim, res.recovered));
    if (keep_full) sim.full_mf.push_back(to_mf(cfg, sim, noisy.values));
  }
  out.phi = phi_sum / cfg.pulses;
  return sim;
}

MusicSearch search_of(const ExperimentConfig& cfg) {
  MusicSearch s;
  s.coarse_step = cfg.coarse_step;
  s.fine_step = cfg.fine_step;
  s.refine_halfwidth = cfg.refine_halfwidth;
  return s;
}

StackedData stacked(const std::vector<CMatrix>& per_pulse) {
  return stack_pulses(std::span<const CMatrix>(per_pulse.data(), per_pulse.size()));
}

std::vector<double> sorted_peaks(const SpectrumResult& s) {
  std::vector<double> d;
  for (const auto& p : s.peaks) d.push_back(p.theta_deg);
  std::sort(d.begin(), d.end());
  return d;
}

SpectrumResult spectrum_1d(const ExperimentConfig& cfg, const RadarConfig& radar, const StackedData& s) {
  return music_search(NoiseSubspace::from_data(s.y, cfg.targets), cfg.targets, radar, search_of(cfg));
}

// 2D grid: theta windows around the 1D estimates, the full speed range.
SpectrumResult spectrum_2d(const ExperimentConfig& cfg, const RadarConfig& radar, const StackedData& s,
                           const std::vector<double>& theta_centers) {
  std::set<long> idx;
  const double st = cfg.theta2d_step;
  for (double c : theta_centers) {
    const long lo = static_cast<long>(std::ceil((std::max(-90.0, c - cfg.theta2d_halfwidth)) / st - 1e-9));
    const long hi = static_cast<long>(std::floor((std::min(90.0, c + cfg.theta2d_halfwidth)) / st + 1e-9));
    for (long j = lo; j <= hi; ++j) idx.insert(j);
  }
  std::vector<double> thetas;
  for (long j : idx) thetas.push_back(std::clamp(static_cast<double>(j) * st, -90.0, 90.0));
  const auto speeds = uniform_grid(cfg.speed_min, cfg.speed_max, cfg.speed_step);
  return music2d_spectrum(joint_covariance(reshape_joint(s)), cfg.targets, thetas, speeds, radar);
}

bool resolved(const ExperimentConfig& cfg, const Scene& scene, const std::vector<double>& est) {
  if (est.size() != scene.size()) return false;
  return resolution_success(doas_of(scene), est, cfg.delta_theta, cfg.eps);
}

} // namespace

std::uint64_t TrialSeeds::noise(int pulse) const {
  return derive_row_seed(trial, 3, static_cast<std::uint64_t>(pulse));
}

TrialSeeds trial_seeds(std::uint64_t master_seed, int trial_index) {
  TrialSeeds s;
  s.trial = derive_row_seed(master_seed, static_cast<std::uint64_t>(trial_index), 0);
  s.scene = derive_row_seed(s.trial, 1, 0);
  s.waveform = derive_row_seed(s.trial, 2, 0);
  s.mask = derive_row_seed(s.trial, 4, 0);
  return s;
}

Scene draw_scene(const ExperimentConfig& cfg, std::uint64_t scene_seed) {
  const int k = cfg.targets;
  Xoshiro256 rng(scene_seed);
  // fixed draw order keeps the streams aligned when fields are pinned
  const double span_hi = cfg.doa_max - (k - 1) * cfg.delta_theta;
  if (cfg.doas.empty() && std::isnan(cfg.first_doa) && span_hi < cfg.doa_min)
    throw Error(ErrorKind::Config, "targets do not fit in [doa_min, doa_max] at this delta_theta");
  const double u = rng.uniform();
  Scene scene(static_cast<std::size_t>(k));
  const double first = !std::isnan(cfg.first_doa) ? cfg.first_doa : cfg.doa_min + u * (span_hi - cfg.doa_min);
  for (int i = 0; i < k; ++i) {
    scene[i].doa_deg = cfg.doas.empty() ? first + i * cfg.delta_theta : cfg.doas[i];
    const double speed = rng.uniform(cfg.speed_min, cfg.speed_max);
    scene[i].speed = cfg.speeds.empty() ? speed : cfg.speeds[i];
  }
  for (int i = 0; i < k; ++i) scene[i].reflectivity = rng.complex_normal(1.0);
  return scene;
}

TrialOutcome run_trial(const ExperimentConfig& cfg, int trial_index) {
  cfg.validate();
  TrialOutcome out;
  out.trial_index = trial_index;
  const TrialSeeds seeds = trial_seeds(cfg.seed, trial_index);
  out.trial_seed = seeds.trial;
  try {
    const bool complete = cfg.kind == ExperimentKind::Recovery || cfg.kind == ExperimentKind::Resolution;
    const bool resolution = cfg.kind == ExperimentKind::Resolution;
    const Simulation sim = simulate(cfg, seeds, out, complete, resolution && cfg.full_baseline);

    out.coherence = matrix_coherence(sim.first_clean);
    if (cfg.targets <= std::min(sim.first_clean.rows(), sim.first_clean.cols()))
      out.coherence_at_k = matrix_coherence_at_rank(sim.first_clean, cfg.targets);

    if (resolution) {
      const StackedData mc = stacked(sim.recovered_mf);
      out.doa_estimates = sorted_peaks(spectrum_1d(cfg, sim.radar, mc));
      out.resolution = resolved(cfg, sim.scene, out.doa_estimates);
      if (cfg.music2d) {
        const SpectrumResult s2 = spectrum_2d(cfg, sim.radar, mc, out.doa_estimates);
        std::vector<Peak> peaks = s2.peaks;
        std::sort(peaks.begin(), peaks.end(), [](const Peak& a, const Peak& b) { return a.theta_deg < b.theta_deg; });
        for (const auto& p : peaks) out.speed_estimates.push_back(p.speed);
      }
      if (cfg.full_baseline) {
        const StackedData full = stacked(sim.full_mf);
        out.full_doa_estimates = sorted_peaks(spectrum_1d(cfg, sim.radar, full));
        out.full_resolution = resolved(cfg, sim.scene, out.full_doa_estimates);
      }
    }
  } catch (const std::exception& e) {
    out.failed = true;
    out.error = e.what();
  }
  return out;
}

PointSummary summarize(const ExperimentConfig& cfg, const std::vector<TrialOutcome>& outcomes) {
  PointSummary s;
  s.trials = static_cast<int>(outcomes.size());
  s.per_row_count = cfg.per_row_count();
  s.occupancy = static_cast<double>(s.per_row_count) / cfg.matrix_cols();
  s.m_over_df = nominal_m_over_df(cfg);
  s.prob_mu_above.assign(cfg.mu0_grid.size(), 0.0);
  s.prob_mu_k_above.assign(cfg.mu0_grid.size(), 0.0);

  int ok = 0, with_k = 0, res = 0, full_res = 0;
  bool any_res = false, any_full = false;
  double phi = 0, phi2 = 0, mu = 0, mu_k = 0, iters = 0;
  for (const auto& o : outcomes) {
    if (o.failed) {
      ++s.failed;
      continue;
    }
    ++ok;
    if (o.converged) ++s.converged;
    phi += o.phi;
    phi2 += o.phi * o.phi;
    mu += o.coherence.mu_max;
    iters += o.iterations;
    if (o.coherence_at_k) {
      ++with_k;
      mu_k += o.coherence_at_k->mu_max;
    }
    for (std::size_t i = 0; i < cfg.mu0_grid.size(); ++i) {
      if (o.coherence.mu_max > cfg.mu0_grid[i]) s.prob_mu_above[i] += 1;
      if (o.coherence_at_k && o.coherence_at_k->mu_max > cfg.mu0_grid[i]) s.prob_mu_k_above[i] += 1;
    }
    if (o.resolution) any_res = true, res += *o.resolution ? 1 : 0;
    if (o.full_resolution) any_full = true, full_res += *o.full_resolution ? 1 : 0;
  }
  const double n = ok > 0 ? ok : kNaN;
  s.mean_phi = phi / n;
  s.std_phi = ok > 1 ? std::sqrt(std::max(0.0, (phi2 - phi * phi / ok) / (ok - 1))) : 0.0;
  s.mean_mu_max = mu / n;
  s.mean_mu_max_k = with_k > 0 ? mu_k / with_k : kNaN;
  s.mean_iterations = iters / n;
  for (auto& p : s.prob_mu_above) p /= n;
  for (auto& p : s.prob_mu_k_above) p = with_k > 0 ? p / with_k : kNaN;
  // failed trials count as unresolved
  s.resolution_prob = any_res ? static_cast<double>(res) / s.trials : kNaN;
  s.full_resolution_prob = any_full ? static_cast<double>(full_res) / s.trials : kNaN;
  return s;
}

ExperimentConfig point_config(const ExperimentConfig& base, const OverrideSet& series,
                              const std::optional<double>& sweep_value) {
  ExperimentConfig cfg = base;
  apply_overrides(cfg, series);
  if (sweep_value) apply_override(cfg, base.sweep_key, format_number(*sweep_value));
  cfg.series.clear();
  cfg.sweep_key.clear();
  cfg.sweep_values.clear();
  return cfg;
}

SweepTable run_sweep(const ExperimentConfig& cfg) {
  cfg.validate();
  SweepTable table;
  table.base = cfg;
  const std::vector<OverrideSet> series = cfg.series.empty() ? std::vector<OverrideSet>{OverrideSet{}} : cfg.series;
  std::vector<std::optional<double>> values;
  if (cfg.sweep_values.empty())
    values.emplace_back();
  else
    for (double v : cfg.sweep_values) values.emplace_back(v);

  for (const auto& s : series)
    for (const auto& v : values) {
      SweepPoint point;
      point.series = series_label(s);
      point.sweep_value = v ? *v : kNaN;
      point.config = point_config(cfg, s, v);
      point.config.validate();
      const ExperimentConfig& pc = point.config;
      point.outcomes.resize(static_cast<std::size_t>(pc.trials));
#ifdef MIMOMC_HAVE_OPENMP
      const int threads = pc.threads > 0 ? pc.threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(threads)
#endif
      for (int t = 0; t < pc.trials; ++t) point.outcomes[static_cast<std::size_t>(t)] = run_trial(pc, t);
      point.summary = summarize(pc, point.outcomes);
      table.points.push_back(std::move(point));
    }
  return table;
}

void write_summary_csv(std::ostream& os, const SweepTable& table) {
  const auto& b = table.base;
  os << "preset,seed,trial_first,trial_last,series,sweep_key,sweep_value,trials,failed,converged,L,occupancy,"
        "m_over_df,mean_phi,std_phi,mean_mu_max,mean_mu_max_k,mean_iterations,resolution_prob,"
        "full_resolution_prob\n";
  for (const auto& p : table.points) {
    const auto& s = p.summary;
    os << csv_field(b.preset) << ',' << b.seed << ',' << 0 << ',' << p.config.trials - 1 << ','
       << csv_field(p.series) << ',' << b.sweep_key << ',' << format_number(p.sweep_value) << ',' << s.trials
       << ',' << s.failed << ',' << s.converged << ',' << s.per_row_count << ',' << format_number(s.occupancy)
       << ',' << format_number(s.m_over_df) << ',' << format_number(s.mean_phi) << ','
       << format_number(s.std_phi) << ',' << format_number(s.mean_mu_max) << ','
       << format_number(s.mean_mu_max_k) << ',' << format_number(s.mean_iterations) << ','
       << format_number(s.resolution_prob) << ',' << format_number(s.full_resolution_prob) << '\n';
  }
}

void write_coherence_csv(std::ostream& os, const SweepTable& table) {
  const auto& b = table.base;
  os << "preset,seed,trial_first,trial_last,series,sweep_key,sweep_value,mu0,prob_mu_max_gt,prob_mu_max_k_gt\n";
  for (const auto& p : table.points)
    for (std::size_t i = 0; i < p.config.mu0_grid.size(); ++i)
      os << csv_field(b.preset) << ',' << b.seed << ',' << 0 << ',' << p.config.trials - 1 << ','
         << csv_field(p.series) << ',' << b.sweep_key << ',' << format_number(p.sweep_value) << ','
         << format_number(p.config.mu0_grid[i]) << ',' << format_number(p.summary.prob_mu_above[i]) << ','
         << format_number(p.summary.prob_mu_k_above[i]) << '\n';
}

void write_trials_csv(std::ostream& os, const SweepTable& table) {
  const auto& b = table.base;
  os << "preset,seed,series,sweep_value,trial,trial_seed,failed,error,phi,mu_max,mu_max_k,iterations,converged,"
        "resolution,full_resolution,doas,doa_estimates,full_doa_estimates\n";
  for (const auto& p : table.points)
    for (const auto& o : p.outcomes)
      os << csv_field(b.preset) << ',' << b.seed << ',' << csv_field(p.series) << ','
         << format_number(p.sweep_value) << ',' << o.trial_index << ',' << o.trial_seed << ','
         << (o.failed ? 1 : 0) << ',' << csv_field(o.error) << ',' << format_number(o.phi) << ','
         << format_number(o.coherence.mu_max) << ','
         << (o.coherence_at_k ? format_number(o.coherence_at_k->mu_max) : std::string()) << ','
         << o.iterations << ',' << (o.converged ? 1 : 0) << ',' << tri(o.resolution) << ','
         << tri(o.full_resolution) << ',' << join(doas_of(o.scene)) << ',' << join(o.doa_estimates) << ','
         << join(o.full_doa_estimates) << '\n';
}

double spatial_frequency(double doa_deg, const RadarConfig& radar) {
  return radar.dt * std::sin(deg2rad(doa_deg)) / radar.wavelength;
}

void write_wave_spectrum_csv(std::ostream& os, const ExperimentConfig& cfg) {
  if (cfg.omega_points < 2) throw Error(ErrorKind::Config, "omega_points must be at least 2");
  std::vector<double> omega(static_cast<std::size_t>(cfg.omega_points));
  for (int i = 0; i < cfg.omega_points; ++i) omega[i] = -0.5 + static_cast<double>(i) / (cfg.omega_points - 1);
  const auto seeds = trial_seeds(cfg.seed, 0);
  const RVector had =
      column_power_spectrum(gen_waveforms(WaveformKind::Hadamard, cfg.mt, cfg.n_nyquist, seeds.waveform), omega);
  const RVector gorth = column_power_spectrum(
      gen_waveforms(WaveformKind::GaussianOrthogonal, cfg.mt, cfg.n_nyquist, seeds.waveform), omega);
  os << "omega,hadamard,gorth\n";
  for (std::size_t i = 0; i < omega.size(); ++i) {
    const auto k = static_cast<Eigen::Index>(i);
    os << format_number(omega[i]) << ',' << format_number(had(k)) << ',' << format_number(gorth(k)) << '\n';
  }
}

SpectrumResult trial_spectrum(const ExperimentConfig& cfg, int trial_index, bool full_data) {
  cfg.validate();
  TrialOutcome scratch;
  const Simulation sim = simulate(cfg, trial_seeds(cfg.seed, trial_index), scratch, true, full_data);
  const StackedData s = stacked(full_data ? sim.full_mf : sim.recovered_mf);
  SpectrumResult one = spectrum_1d(cfg, sim.radar, s);
  if (!cfg.music2d) return one;
  return spectrum_2d(cfg, sim.radar, s, sorted_peaks(one));
}

} // namespace mimomc
