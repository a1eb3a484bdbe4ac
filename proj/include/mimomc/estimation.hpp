// SPDX-License-Identifier: Apache-2.0
//
// mimomc - MIMO radar with matrix completion, simulation toolkit
// ------------------------------------------------------------------------

#pragma once

#include "mimomc/signal_model.hpp"
#include "mimomc/types.hpp"

#include <iosfwd>
#include <span>
#include <vector>

namespace mimomc {

/// Inverts the waveform mixing of a scheme-II matrix: Z S^H (S S^H)^-1,
/// which is Z S^H for unit-energy rows.
CMatrix matched_filter(const CMatrix& zhat, const WaveformMatrix& wave);

/// Y = [vec(Y_1), ..., vec(Y_Q)], column-major vec (receive index fastest).
struct StackedData {
  CMatrix y;
  int mr = 0;
  int mt = 0;
  int pulses() const { return static_cast<int>(y.cols()); }
};

StackedData stack_pulses(std::span<const CMatrix> per_pulse);

/// (1 / Q) Y Y^H.
CMatrix sample_covariance(const CMatrix& y);

/// Reshapes the stacked data into the (Q mt) x mr matrix whose row
/// (q - 1) mt + i, column l holds transmit i, receive l, pulse q.
CMatrix reshape_joint(const StackedData& stacked);
StackedData unreshape_joint(const CMatrix& joint, int mt, int mr);

/// (1 / mr) Y~ Y~^H.
CMatrix joint_covariance(const CMatrix& joint);

/// Orthogonal complement of the K-dimensional signal subspace.
class NoiseSubspace {
public:
  /// Eigenvectors of the n - K smallest eigenvalues of a Hermitian covariance.
  static NoiseSubspace from_covariance(const CMatrix& covariance, int k);
  /// Same projector from the data matrix: the signal subspace is spanned by
  /// the K leading left singular vectors of Y, and the noise projector is
  /// I - E_s E_s^H.
  static NoiseSubspace from_data(const CMatrix& y, int k);

  int dim() const { return dim_; }
  /// v^H E_n E_n^H v.
  double denominator(const CVector& v) const;
  const CMatrix& basis() const { return basis_; }
  bool is_complement() const { return complement_; }

private:
  CMatrix basis_;  // E_n, or E_s when complement_
  bool complement_ = false;
  int dim_ = 0;
};

struct Peak {
  double theta_deg = 0.0;
  double speed = 0.0;
  double value = 0.0;
};

struct SpectrumResult {
  std::vector<double> theta_grid;
  std::vector<double> speed_grid;  ///< empty for 1D spectra
  RMatrix values;                  ///< theta x max(1, speeds)
  std::vector<double> fine_theta;  ///< refinement samples, if any
  std::vector<double> fine_values;
  std::vector<Peak> peaks;         ///< descending by value, at most K
};

/// Pseudo-spectrum clamp: P = 1 / max(denominator, kMinDenominator).
inline constexpr double kMinDenominator = 1e-18;

/// MUSIC pseudo-spectrum on a given angle grid; peaks are the K largest
/// strict local maxima of the sampled spectrum.
SpectrumResult music_spectrum(const CMatrix& covariance, int k, std::span<const double> theta_grid,
                              const RadarConfig& cfg);
SpectrumResult music_spectrum(const NoiseSubspace& noise, int k, std::span<const double> theta_grid,
                              const RadarConfig& cfg);

struct MusicSearch {
  double theta_min = -90.0;
  double theta_max = 90.0;
  double coarse_step = 0.1;
  double fine_step = 0.005;
  double refine_halfwidth = 0.5;
};

/// Coarse grid search followed by refinement on the fine grid (integer
/// multiples of fine_step) around the K best coarse peaks.
SpectrumResult music_search(const NoiseSubspace& noise, int k, const RadarConfig& cfg,
                            const MusicSearch& search = {});

std::vector<double> uniform_grid(double lo, double hi, double step);

/// 2D-MUSIC over (theta, speed) with steering d(speed) (x) a(theta).
SpectrumResult music2d_spectrum(const CMatrix& joint_cov, int k, std::span<const double> theta_grid,
                                std::span<const double> speed_grid, const RadarConfig& cfg);

/// True iff after sorting both lists every |theta_i - theta_hat_i| <= eps * delta_theta.
/// A relative slack of 1e-9 absorbs grid rounding at the boundary.
bool resolution_success(std::span<const double> true_doas, std::span<const double> estimated_doas,
                        double delta_theta, double eps = 0.1);

/// CSV with header: theta_deg[,speed],P
void write_spectrum_csv(std::ostream& os, const SpectrumResult& spectrum);

} // namespace mimomc
