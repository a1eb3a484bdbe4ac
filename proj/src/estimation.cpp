// SPDX-License-Identifier: Apache-2.0
//
// mimomc - MIMO radar with matrix completion, simulation toolkit
// ------------------------------------------------------------------------

#include "mimomc/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <set>
#include <string>

namespace mimomc {

CMatrix matched_filter(const CMatrix& zhat, const WaveformMatrix& wave) {
  if (zhat.cols() != wave.samples.cols())
    throw Error(ErrorKind::DimensionMismatch, "data has " + std::to_string(zhat.cols()) +
                                                  " columns, waveform has " + std::to_string(wave.n()));
  return zhat * wave.samples.adjoint() / wave.amplitude();
}

StackedData stack_pulses(std::span<const CMatrix> per_pulse) {
  if (per_pulse.empty()) throw Error(ErrorKind::Domain, "no pulses to stack");
  const auto rows = per_pulse.front().rows();
  const auto cols = per_pulse.front().cols();
  StackedData s;
  s.mr = static_cast<int>(rows);
  s.mt = static_cast<int>(cols);
  s.y.resize(rows * cols, static_cast<Eigen::Index>(per_pulse.size()));
  for (std::size_t q = 0; q < per_pulse.size(); ++q) {
    const auto& m = per_pulse[q];
    if (m.rows() != rows || m.cols() != cols) throw Error(ErrorKind::DimensionMismatch, "pulse shapes differ");
    s.y.col(static_cast<Eigen::Index>(q)) = m.reshaped();  // column-major
  }
  return s;
}

CMatrix sample_covariance(const CMatrix& y) {
  if (y.cols() < 1) throw Error(ErrorKind::Domain, "no snapshots");
  CMatrix r = y * y.adjoint() / static_cast<double>(y.cols());
  return (r + r.adjoint()) / 2.0;
}

CMatrix reshape_joint(const StackedData& s) {
  const int q_count = s.pulses();
  if (s.y.rows() != static_cast<Eigen::Index>(s.mt) * s.mr)
    throw Error(ErrorKind::DimensionMismatch, "stacked rows != mt * mr");
  CMatrix joint(static_cast<Eigen::Index>(q_count) * s.mt, s.mr);
  for (int q = 0; q < q_count; ++q)
    for (int i = 0; i < s.mt; ++i)
      for (int l = 0; l < s.mr; ++l)
        joint(static_cast<Eigen::Index>(q) * s.mt + i, l) = s.y(static_cast<Eigen::Index>(i) * s.mr + l, q);
  return joint;
}

StackedData unreshape_joint(const CMatrix& joint, int mt, int mr) {
  if (mt <= 0 || joint.rows() % mt != 0 || joint.cols() != mr)
    throw Error(ErrorKind::DimensionMismatch, "joint matrix shape inconsistent with mt, mr");
  const auto q_count = joint.rows() / mt;
  StackedData s;
  s.mt = mt;
  s.mr = mr;
  s.y.resize(static_cast<Eigen::Index>(mt) * mr, q_count);
  for (Eigen::Index q = 0; q < q_count; ++q)
    for (int i = 0; i < mt; ++i)
      for (int l = 0; l < mr; ++l) s.y(static_cast<Eigen::Index>(i) * mr + l, q) = joint(q * mt + i, l);
  return s;
}

CMatrix joint_covariance(const CMatrix& joint) {
  CMatrix r = joint * joint.adjoint() / static_cast<double>(joint.cols());
  return (r + r.adjoint()) / 2.0;
}

NoiseSubspace NoiseSubspace::from_covariance(const CMatrix& covariance, int k) {
  const auto n = covariance.rows();
  if (covariance.cols() != n) throw Error(ErrorKind::DimensionMismatch, "covariance must be square");
  if (k < 0 || k >= n)
    throw Error(ErrorKind::Domain, "K = " + std::to_string(k) + " must be below the dimension " + std::to_string(n));
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(covariance);
  NoiseSubspace ns;
  ns.dim_ = static_cast<int>(n);
  ns.basis_ = eig.eigenvectors().leftCols(n - k);  // ascending eigenvalues
  return ns;
}

NoiseSubspace NoiseSubspace::from_data(const CMatrix& y, int k) {
  const auto n = y.rows();
  if (k < 0 || k >= n)
    throw Error(ErrorKind::Domain, "K = " + std::to_string(k) + " must be below the dimension " + std::to_string(n));
  if (k > y.cols()) throw Error(ErrorKind::Domain, "K exceeds the number of snapshots");
  Eigen::BDCSVD<CMatrix> svd(y, Eigen::ComputeThinU);
  NoiseSubspace ns;
  ns.dim_ = static_cast<int>(n);
  ns.complement_ = true;
  ns.basis_ = svd.matrixU().leftCols(k);
  return ns;
}

double NoiseSubspace::denominator(const CVector& v) const {
  if (v.size() != dim_) throw Error(ErrorKind::DimensionMismatch, "steering vector length");
  if (complement_) return v.squaredNorm() - (basis_.adjoint() * v).squaredNorm();
  return (basis_.adjoint() * v).squaredNorm();
}

namespace {

double pseudo(double denominator) { return 1.0 / std::max(denominator, kMinDenominator); }

// Strict local maxima of a sampled curve. Endpoints qualify only when
// `open_ends` is set (they are then compared with their single neighbour).
std::vector<std::size_t> local_maxima(const std::vector<double>& v, bool open_ends) {
  std::vector<std::size_t> out;
  const auto n = v.size();
  if (n == 1) {
    if (open_ends) out.push_back(0);
    return out;
  }
  for (std::size_t i = 0; i < n; ++i) {
    const bool left = i == 0 ? open_ends : v[i] > v[i - 1];
    const bool right = i + 1 == n ? open_ends : v[i] > v[i + 1];
    if (left && right) out.push_back(i);
  }
  return out;
}

void keep_top(std::vector<Peak>& peaks, int k) {
  std::stable_sort(peaks.begin(), peaks.end(), [](const Peak& a, const Peak& b) { return a.value > b.value; });
  if (static_cast<int>(peaks.size()) > k) peaks.resize(static_cast<std::size_t>(k));
}

void check_grid(std::span<const double> grid) {
  if (grid.empty()) throw Error(ErrorKind::Domain, "empty grid");
  for (double t : grid)
    if (!(t >= -90.0 && t <= 90.0)) throw Error(ErrorKind::Domain, "grid angle outside [-90, 90]");
}

} // namespace

std::vector<double> uniform_grid(double lo, double hi, double step) {
  if (!(step > 0) || hi < lo) throw Error(ErrorKind::Domain, "bad grid");
  const auto n = static_cast<long>(std::floor((hi - lo) / step + 1e-9));
  std::vector<double> g;
  g.reserve(static_cast<std::size_t>(n + 1));
  for (long i = 0; i <= n; ++i) g.push_back(lo + step * static_cast<double>(i));
  return g;
}

SpectrumResult music_spectrum(const NoiseSubspace& noise, int k, std::span<const double> theta_grid,
                              const RadarConfig& cfg) {
  check_grid(theta_grid);
  if (noise.dim() != cfg.mt * cfg.mr) throw Error(ErrorKind::DimensionMismatch, "subspace vs array size");
  SpectrumResult res;
  res.theta_grid.assign(theta_grid.begin(), theta_grid.end());
  std::vector<double> p(theta_grid.size());
  for (std::size_t i = 0; i < theta_grid.size(); ++i)
    p[i] = pseudo(noise.denominator(virtual_steering(theta_grid[i], cfg)));
  res.values = Eigen::Map<const RVector>(p.data(), static_cast<Eigen::Index>(p.size()));
  for (auto i : local_maxima(p, true)) res.peaks.push_back({theta_grid[i], 0.0, p[i]});
  keep_top(res.peaks, k);
  return res;
}

SpectrumResult music_spectrum(const CMatrix& covariance, int k, std::span<const double> theta_grid,
                              const RadarConfig& cfg) {
  return music_spectrum(NoiseSubspace::from_covariance(covariance, k), k, theta_grid, cfg);
}

SpectrumResult music_search(const NoiseSubspace& noise, int k, const RadarConfig& cfg,
                            const MusicSearch& search) {
  const auto coarse_grid = uniform_grid(search.theta_min, search.theta_max, search.coarse_step);
  SpectrumResult coarse = music_spectrum(noise, k, coarse_grid, cfg);

  // fine grid indices j: theta = j * fine_step
  const double fs = search.fine_step;
  const auto jmin = static_cast<long>(std::ceil(search.theta_min / fs - 1e-9));
  const auto jmax = static_cast<long>(std::floor(search.theta_max / fs + 1e-9));
  std::set<long> fine;
  for (const auto& pk : coarse.peaks) {
    const auto lo = std::max(jmin, static_cast<long>(std::ceil((pk.theta_deg - search.refine_halfwidth) / fs - 1e-9)));
    const auto hi = std::min(jmax, static_cast<long>(std::floor((pk.theta_deg + search.refine_halfwidth) / fs + 1e-9)));
    for (long j = lo; j <= hi; ++j) fine.insert(j);
  }

  std::vector<Peak> candidates;
  SpectrumResult res = std::move(coarse);
  std::vector<long> run;
  auto flush_run = [&]() {
    if (run.empty()) return;
    std::vector<double> vals(run.size());
    for (std::size_t i = 0; i < run.size(); ++i) {
      const double theta = std::clamp(static_cast<double>(run[i]) * fs, -90.0, 90.0);
      vals[i] = pseudo(noise.denominator(virtual_steering(theta, cfg)));
      res.fine_theta.push_back(theta);
      res.fine_values.push_back(vals[i]);
    }
    const auto n = vals.size();
    for (std::size_t i = 0; i < n; ++i) {
      const bool at_lo = i == 0, at_hi = i + 1 == n;
      const bool left = at_lo ? run.front() == jmin && (n == 1 || vals[0] > vals[1]) : vals[i] > vals[i - 1];
      const bool right = at_hi ? run.back() == jmax && (n == 1 || vals[n - 1] > vals[n - 2]) : vals[i] > vals[i + 1];
      if (left && right) candidates.push_back({res.fine_theta[res.fine_theta.size() - n + i], 0.0, vals[i]});
    }
    run.clear();
  };
  for (long j : fine) {
    if (!run.empty() && j != run.back() + 1) flush_run();
    run.push_back(j);
  }
  flush_run();

  keep_top(candidates, k);
  if (static_cast<int>(candidates.size()) < k) {
    // coarse peaks never refined (outside every window) fill remaining slots
    std::vector<Peak> extra;
    for (std::size_t i : local_maxima(std::vector<double>(res.values.data(), res.values.data() + res.values.size()), true)) {
      const double theta = res.theta_grid[i];
      const bool covered = std::any_of(candidates.begin(), candidates.end(), [&](const Peak& c) {
        return std::abs(c.theta_deg - theta) <= search.refine_halfwidth;
      });
      if (!covered) extra.push_back({theta, 0.0, res.values(static_cast<Eigen::Index>(i))});
    }
    keep_top(extra, k - static_cast<int>(candidates.size()));
    candidates.insert(candidates.end(), extra.begin(), extra.end());
    keep_top(candidates, k);
  }
  res.peaks = std::move(candidates);
  return res;
}

SpectrumResult music2d_spectrum(const CMatrix& joint_cov, int k, std::span<const double> theta_grid,
                                std::span<const double> speed_grid, const RadarConfig& cfg) {
  check_grid(theta_grid);
  if (speed_grid.empty()) throw Error(ErrorKind::Domain, "empty speed grid");
  const int n = cfg.pulses_q * cfg.mt;
  if (joint_cov.rows() != n) throw Error(ErrorKind::DimensionMismatch, "joint covariance must be (Q mt) square");
  if (k >= n) throw Error(ErrorKind::Domain, "K must be below Q mt");
  const auto noise = NoiseSubspace::from_covariance(joint_cov, k);

  SpectrumResult res;
  res.theta_grid.assign(theta_grid.begin(), theta_grid.end());
  res.speed_grid.assign(speed_grid.begin(), speed_grid.end());
  const auto nt = static_cast<Eigen::Index>(theta_grid.size());
  const auto nv = static_cast<Eigen::Index>(speed_grid.size());
  res.values.resize(nt, nv);

  std::vector<CVector> a(theta_grid.size());
  for (Eigen::Index i = 0; i < nt; ++i) a[i] = transmit_steering(theta_grid[i], cfg);
  CVector steer(n);
  for (Eigen::Index j = 0; j < nv; ++j) {
    const CVector d = doppler_steering(speed_grid[j], cfg);
    for (Eigen::Index i = 0; i < nt; ++i) {
      for (int q = 0; q < cfg.pulses_q; ++q) steer.segment(q * cfg.mt, cfg.mt) = d(q) * a[i];
      res.values(i, j) = pseudo(noise.denominator(steer));
    }
  }

  // strict maxima over the 8-neighbourhood; grid borders compare with the
  // neighbours that exist
  for (Eigen::Index i = 0; i < nt; ++i)
    for (Eigen::Index j = 0; j < nv; ++j) {
      const double v = res.values(i, j);
      bool is_max = true;
      for (Eigen::Index di = -1; di <= 1 && is_max; ++di)
        for (Eigen::Index dj = -1; dj <= 1; ++dj) {
          if (di == 0 && dj == 0) continue;
          const auto ii = i + di, jj = j + dj;
          if (ii < 0 || jj < 0 || ii >= nt || jj >= nv) continue;
          if (!(v > res.values(ii, jj))) {
            is_max = false;
            break;
          }
        }
      if (is_max) res.peaks.push_back({theta_grid[i], speed_grid[j], v});
    }
  keep_top(res.peaks, k);
  return res;
}

bool resolution_success(std::span<const double> true_doas, std::span<const double> estimated_doas,
                        double delta_theta, double eps) {
  if (true_doas.size() != estimated_doas.size())
    throw Error(ErrorKind::Domain, "estimate count " + std::to_string(estimated_doas.size()) +
                                       " != target count " + std::to_string(true_doas.size()));
  std::vector<double> t(true_doas.begin(), true_doas.end());
  std::vector<double> e(estimated_doas.begin(), estimated_doas.end());
  std::sort(t.begin(), t.end());
  std::sort(e.begin(), e.end());
  const double bound = eps * std::abs(delta_theta) * (1.0 + 1e-9);
  for (std::size_t i = 0; i < t.size(); ++i)
    if (!(std::abs(t[i] - e[i]) <= bound)) return false;
  return true;
}

void write_spectrum_csv(std::ostream& os, const SpectrumResult& s) {
  const auto prec = os.precision(12);
  if (s.speed_grid.empty()) {
    os << "theta_deg,P\n";
    for (std::size_t i = 0; i < s.theta_grid.size(); ++i)
      os << s.theta_grid[i] << ',' << s.values(static_cast<Eigen::Index>(i), 0) << '\n';
  } else {
    os << "theta_deg,speed,P\n";
    for (std::size_t i = 0; i < s.theta_grid.size(); ++i)
      for (std::size_t j = 0; j < s.speed_grid.size(); ++j)
        os << s.theta_grid[i] << ',' << s.speed_grid[j] << ','
           << s.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) << '\n';
  }
  os.precision(prec);
}

} // namespace mimomc
