// SPDX-License-Identifier: Apache-2.0
//
// mimomc - MIMO radar with matrix completion, simulation toolkit
// ------------------------------------------------------------------------

#pragma once

#include "mimomc/types.hpp"

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

namespace mimomc {

/// Colocated MIMO pulse radar with uniform linear transmit and receive arrays.
struct RadarConfig {
  int mt = 0;               ///< transmit antennas
  int mr = 0;               ///< receive antennas
  double dt = 0.0;          ///< transmit spacing [m]
  double dr = 0.0;          ///< receive spacing [m]
  double carrier_freq = 0;  ///< [Hz]
  double wavelength = 0;    ///< [m], c / carrier_freq
  int pulses_q = 1;         ///< pulses per coherent processing interval
  double t_pri = 1e-4;      ///< pulse repetition interval [s]
  double t_pulse = 0;       ///< pulse duration [s]
  double t_sample = 0;      ///< Nyquist sampling period [s]
  int n_nyquist = 0;        ///< Nyquist samples per pulse, round(t_pulse / t_sample)

  /// Throws Error(Domain) when an invariant does not hold.
  void validate() const;
};

/// Builds a consistent configuration. Spacings are given in wavelengths,
/// e.g. 0.5 for half-wavelength arrays.
RadarConfig make_radar_config(int mt, int mr, double dt_wavelengths, double dr_wavelengths,
                              int pulses_q = 1, int n_nyquist = 256,
                              double carrier_freq = 1e9, double t_pri = 1e-4,
                              double t_sample = 1e-8);

struct Target {
  double doa_deg = 0.0;  ///< direction of arrival, [-90, 90]
  double speed = 0.0;    ///< radial speed [m/s]
  cd reflectivity{1.0, 0.0};
};

using Scene = std::vector<Target>;

enum class WaveformKind { Hadamard, GaussianOrthogonal };

/// Transmit snapshots. `samples` has orthonormal rows (S S^H = I); the
/// transmitted amplitude is sqrt(energy / mt) times that.
struct WaveformMatrix {
  CMatrix samples;
  WaveformKind kind = WaveformKind::GaussianOrthogonal;
  double energy = 0.0;

  int mt() const { return static_cast<int>(samples.rows()); }
  int n() const { return static_cast<int>(samples.cols()); }
  double amplitude() const { return std::sqrt(energy / samples.rows()); }
  CMatrix transmitted() const { return amplitude() * samples; }
};

enum class Scheme {
  MatchedFilterBank,  ///< scheme I: mr x mt matched-filter outputs
  SubNyquist,         ///< scheme II: mr x N raw Nyquist-grid samples
};

struct DataMatrix {
  CMatrix values;
  Scheme scheme = Scheme::MatchedFilterBank;
  int pulse_index = 1;  ///< 1-based
};

inline constexpr double kNoNoise = std::numeric_limits<double>::infinity();

CVector transmit_steering(double doa_deg, const RadarConfig& cfg);
CVector receive_steering(double doa_deg, const RadarConfig& cfg);

/// exp(j (2 pi / lambda) 2 speed (q - 1) T_PRI), q is 1-based.
cd doppler_phase(double speed, int q, const RadarConfig& cfg);

/// [doppler_phase(speed, 1), ..., doppler_phase(speed, Q)].
CVector doppler_steering(double speed, const RadarConfig& cfg);

/// a(theta) (x) b(theta); the receive index varies fastest.
CVector virtual_steering(double doa_deg, const RadarConfig& cfg);

WaveformMatrix gen_waveforms(WaveformKind kind, int mt, int n, double energy,
                             std::uint64_t seed);
inline WaveformMatrix gen_waveforms(WaveformKind kind, int mt, int n, std::uint64_t seed) {
  return gen_waveforms(kind, mt, n, static_cast<double>(mt), seed);
}

/// Sylvester Hadamard matrix of order n (power of two), entries +-1.
RMatrix hadamard(int n);

/// Z_q^MF = B Sigma D_q A^T, mr x mt.
DataMatrix noise_free_mf_matrix(const Scene& scene, const RadarConfig& cfg, int q);

/// Z~_q = B Sigma D_q A^T S~, mr x N.
DataMatrix noise_free_raw_matrix(const Scene& scene, const RadarConfig& cfg,
                                 const WaveformMatrix& wave, int q);

/// Per-entry noise variance: (||Z||_F^2 / (n1 n2)) 10^(-snr_db / 10).
double noise_variance_for_snr(const CMatrix& z, double snr_db);

/// Adds circular white Gaussian noise at the given per-entry SNR. An
/// infinite SNR returns the input unchanged.
DataMatrix add_noise(const DataMatrix& z, double snr_db, std::uint64_t seed);

/// For each omega, the maximum over the columns of the waveform matrix of
/// |sum_n s[n, i] exp(-j 2 pi omega n)|^2.
RVector column_power_spectrum(const WaveformMatrix& wave, std::span<const double> omega_grid);

/// Power spectrum of a single column (sum over antenna index n).
RVector column_spectrum(const CVector& column, std::span<const double> omega_grid);

} // namespace mimomc
