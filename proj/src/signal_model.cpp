// SPDX-License-Identifier: Apache-2.0
//
// mimomc - MIMO radar with matrix completion, simulation toolkit
// ------------------------------------------------------------------------

#include "mimomc/signal_model.hpp"

#include "mimomc/rng.hpp"

#include <cmath>
#include <string>

namespace mimomc {

namespace {

void check_doa(double doa_deg) {
  if (!(doa_deg >= -90.0 && doa_deg <= 90.0))
    throw Error(ErrorKind::Domain, "DOA " + std::to_string(doa_deg) + " deg outside [-90, 90]");
}

CVector ula_steering(double doa_deg, int count, double spacing, double wavelength) {
  check_doa(doa_deg);
  const double step = 2.0 * kPi / wavelength * spacing * std::sin(deg2rad(doa_deg));
  CVector v(count);
  for (int i = 0; i < count; ++i) v(i) = std::polar(1.0, step * i);
  return v;
}

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

} // namespace

void RadarConfig::validate() const {
  auto fail = [](const std::string& what) { throw Error(ErrorKind::Domain, what); };
  if (mt <= 0 || mr <= 0) fail("antenna counts must be positive");
  if (!(dt > 0) || !(dr > 0)) fail("antenna spacings must be positive");
  if (!(carrier_freq > 0) || !(wavelength > 0)) fail("carrier must be positive");
  if (std::abs(wavelength * carrier_freq / kSpeedOfLight - 1.0) > 1e-12)
    fail("wavelength * carrier_freq != c");
  if (pulses_q <= 0) fail("pulse count must be positive");
  if (!(t_pri > 0) || !(t_pulse > 0) || !(t_sample > 0)) fail("timing must be positive");
  if (n_nyquist <= 0) fail("Nyquist sample count must be positive");
  if (n_nyquist != static_cast<int>(std::lround(t_pulse / t_sample)))
    fail("n_nyquist != round(t_pulse / t_sample)");
}

RadarConfig make_radar_config(int mt, int mr, double dt_wavelengths, double dr_wavelengths,
                              int pulses_q, int n_nyquist, double carrier_freq, double t_pri,
                              double t_sample) {
  RadarConfig cfg;
  cfg.mt = mt;
  cfg.mr = mr;
  cfg.carrier_freq = carrier_freq;
  cfg.wavelength = kSpeedOfLight / carrier_freq;
  cfg.dt = dt_wavelengths * cfg.wavelength;
  cfg.dr = dr_wavelengths * cfg.wavelength;
  cfg.pulses_q = pulses_q;
  cfg.t_pri = t_pri;
  cfg.t_sample = t_sample;
  cfg.n_nyquist = n_nyquist;
  cfg.t_pulse = n_nyquist * t_sample;
  cfg.validate();
  return cfg;
}

CVector transmit_steering(double doa_deg, const RadarConfig& cfg) {
  return ula_steering(doa_deg, cfg.mt, cfg.dt, cfg.wavelength);
}

CVector receive_steering(double doa_deg, const RadarConfig& cfg) {
  return ula_steering(doa_deg, cfg.mr, cfg.dr, cfg.wavelength);
}

cd doppler_phase(double speed, int q, const RadarConfig& cfg) {
  if (q < 1) throw Error(ErrorKind::Domain, "pulse index is 1-based");
  return std::polar(1.0, 2.0 * kPi / cfg.wavelength * 2.0 * speed * (q - 1) * cfg.t_pri);
}

CVector doppler_steering(double speed, const RadarConfig& cfg) {
  CVector d(cfg.pulses_q);
  for (int q = 1; q <= cfg.pulses_q; ++q) d(q - 1) = doppler_phase(speed, q, cfg);
  return d;
}

CVector virtual_steering(double doa_deg, const RadarConfig& cfg) {
  const CVector a = transmit_steering(doa_deg, cfg);
  const CVector b = receive_steering(doa_deg, cfg);
  CVector v(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) v.segment(i * b.size(), b.size()) = a(i) * b;
  return v;
}

RMatrix hadamard(int n) {
  if (!is_power_of_two(n))
    throw Error(ErrorKind::Unsupported, "Hadamard order " + std::to_string(n) + " is not a power of two");
  RMatrix h = RMatrix::Ones(1, 1);
  while (h.rows() < n) {
    const auto m = h.rows();
    RMatrix next(2 * m, 2 * m);
    next << h, h, h, -h;
    h = std::move(next);
  }
  return h;
}

WaveformMatrix gen_waveforms(WaveformKind kind, int mt, int n, double energy, std::uint64_t seed) {
  if (mt <= 0) throw Error(ErrorKind::Domain, "mt must be positive");
  if (n < mt)
    throw Error(ErrorKind::InfeasibleOrthogonality,
                std::to_string(mt) + " orthogonal rows need N >= mt, got N = " + std::to_string(n));
  if (!(energy > 0)) throw Error(ErrorKind::Domain, "waveform energy must be positive");

  WaveformMatrix w;
  w.kind = kind;
  w.energy = energy;
  if (kind == WaveformKind::Hadamard) {
    const RMatrix h = hadamard(n);
    w.samples = (h.topRows(mt) / std::sqrt(static_cast<double>(n))).cast<cd>();
    return w;
  }

  Xoshiro256 rng(seed);
  CMatrix g(n, mt);  // columns become the rows of the waveform matrix
  for (int i = 0; i < mt; ++i)
    for (int j = 0; j < n; ++j) g(j, i) = rng.complex_normal();
  Eigen::HouseholderQR<CMatrix> qr(g);
  const CMatrix q = qr.householderQ() * CMatrix::Identity(n, mt);
  w.samples = q.adjoint();
  return w;
}

DataMatrix noise_free_mf_matrix(const Scene& scene, const RadarConfig& cfg, int q) {
  if (scene.empty()) throw Error(ErrorKind::Domain, "scene has no targets");
  if (q < 1 || q > cfg.pulses_q) throw Error(ErrorKind::Domain, "pulse index out of range");
  DataMatrix z;
  z.scheme = Scheme::MatchedFilterBank;
  z.pulse_index = q;
  z.values = CMatrix::Zero(cfg.mr, cfg.mt);
  for (const auto& t : scene) {
    if (!std::isfinite(t.reflectivity.real()) || !std::isfinite(t.reflectivity.imag()))
      throw Error(ErrorKind::Domain, "non-finite reflectivity");
    const cd gain = t.reflectivity * doppler_phase(t.speed, q, cfg);
    z.values.noalias() += gain * receive_steering(t.doa_deg, cfg) * transmit_steering(t.doa_deg, cfg).transpose();
  }
  return z;
}

DataMatrix noise_free_raw_matrix(const Scene& scene, const RadarConfig& cfg,
                                 const WaveformMatrix& wave, int q) {
  if (wave.mt() != cfg.mt || wave.n() != cfg.n_nyquist)
    throw Error(ErrorKind::DimensionMismatch,
                "waveform is " + std::to_string(wave.mt()) + "x" + std::to_string(wave.n()) +
                    ", config expects " + std::to_string(cfg.mt) + "x" + std::to_string(cfg.n_nyquist));
  DataMatrix z = noise_free_mf_matrix(scene, cfg, q);
  z.values = z.values * wave.transmitted();
  z.scheme = Scheme::SubNyquist;
  return z;
}

double noise_variance_for_snr(const CMatrix& z, double snr_db) {
  if (std::isinf(snr_db) && snr_db > 0) return 0.0;
  const double signal_power = z.squaredNorm() / static_cast<double>(z.size());
  return signal_power * std::pow(10.0, -snr_db / 10.0);
}

DataMatrix add_noise(const DataMatrix& z, double snr_db, std::uint64_t seed) {
  if (std::isnan(snr_db) || (std::isinf(snr_db) && snr_db < 0))
    throw Error(ErrorKind::Domain, "SNR must be finite or +inf");
  DataMatrix out = z;
  if (std::isinf(snr_db)) return out;
  const double variance = noise_variance_for_snr(z.values, snr_db);
  Xoshiro256 rng(seed);
  // column-major fill order is part of the determinism contract
  for (Eigen::Index j = 0; j < out.values.cols(); ++j)
    for (Eigen::Index i = 0; i < out.values.rows(); ++i) out.values(i, j) += rng.complex_normal(variance);
  return out;
}

RVector column_spectrum(const CVector& column, std::span<const double> omega_grid) {
  RVector p(static_cast<Eigen::Index>(omega_grid.size()));
  for (std::size_t k = 0; k < omega_grid.size(); ++k) {
    cd acc{0.0, 0.0};
    for (Eigen::Index n = 0; n < column.size(); ++n)
      acc += column(n) * std::polar(1.0, -2.0 * kPi * omega_grid[k] * static_cast<double>(n));
    p(static_cast<Eigen::Index>(k)) = std::norm(acc);
  }
  return p;
}

RVector column_power_spectrum(const WaveformMatrix& wave, std::span<const double> omega_grid) {
  if (omega_grid.empty()) throw Error(ErrorKind::Domain, "empty omega grid");
  for (double w : omega_grid)
    if (!(w >= -0.5 && w <= 0.5)) throw Error(ErrorKind::Domain, "omega outside [-1/2, 1/2]");
  RVector best = RVector::Zero(static_cast<Eigen::Index>(omega_grid.size()));
  for (Eigen::Index i = 0; i < wave.samples.cols(); ++i)
    best = best.cwiseMax(column_spectrum(wave.samples.col(i), omega_grid));
  return best;
}

} // namespace mimomc
