// SPDX-License-Identifier: Apache-2.0
//
// mimomc - MIMO radar with matrix completion, simulation toolkit
// ------------------------------------------------------------------------

#pragma once

#include "mimomc/sampling.hpp"
#include "mimomc/types.hpp"

#include <optional>
#include <vector>

namespace mimomc {

/// Parameters of the singular value thresholding iteration
///
///   X_k     = shrink(Y_{k-1}, tau)
///   Y_k     = Y_{k-1} + step * P_Omega(M - X_k)
///
/// started from Y_0 = k0 * step * P_Omega(M), k0 = ceil(tau / (step ||P_Omega(M)||_2)).
/// Unset tau/step take the defaults tau = 5 sqrt(n1 n2) and step = 1.2 / p.
/// tau is absolute: it acts on the data in the caller's units.
struct SvtParams {
  std::optional<double> tau;
  std::optional<double> step;
  double tol = 1e-4;
  int max_iter = 500;
  /// When set, also stop once ||P_Omega(X - Y)||_F <= noise_radius.
  std::optional<double> noise_radius;

  double tau_for(int n1, int n2) const;
  double step_for(double occupancy) const;
  /// Throws Error(Domain) unless tau > 0, 0 < step * p < 2, tol > 0, max_iter >= 1.
  void validate(int n1, int n2, double occupancy) const;
};

struct CompletionResult {
  CMatrix recovered;
  int iterations = 0;
  double final_residual = 0.0;  ///< ||P_Omega(X - Y)||_F
  bool converged = false;
  int rank = 0;                 ///< rank of the last shrinkage
  std::vector<double> residual_history;  ///< relative residual per iteration
};

/// Singular value soft-thresholding: U diag(max(s - tau, 0)) V^H.
CMatrix shrink_singular_values(const CMatrix& m, double tau, int* rank_out = nullptr);

CompletionResult svt_complete(const ObservedMatrix& observed, const SvtParams& params = {});

struct CoherenceReport {
  int rank_used = 0;
  double mu_u = 0.0;
  double mu_v = 0.0;
  double mu_max = 0.0;
  double mu1 = 0.0;  ///< max |sum_k u_k v_k^H| * sqrt(n1 n2 / r)
};

/// (n / r) max_i ||P_U e_i||^2 for an orthonormal n x r basis.
double coherence_of_subspace(const CMatrix& basis);

/// Coherence at the numerical rank (singular values > rank_threshold * s_1).
CoherenceReport matrix_coherence(const CMatrix& m, double rank_threshold = 1e-8);

/// Coherence computed from the leading `rank` singular vectors.
CoherenceReport matrix_coherence_at_rank(const CMatrix& m, int rank);

/// Singular values of m, descending.
RVector singular_values(const CMatrix& m);
int numerical_rank(const CMatrix& m, double rank_threshold = 1e-8);

struct SampleBound {
  double general = 0.0;   ///< C max{mu1^2, mu0^(1/2) mu1, mu0 n^(1/4)} n r beta log n
  double improved = 0.0;  ///< C mu0 n^(6/5) r beta log n
  bool improved_applies = false;  ///< r <= n^(1/5) / mu0
};

SampleBound theorem1_bound(int n1, int n2, int r, double mu0, double mu1, double beta, double c);

/// sigma sqrt(m + sqrt(8 m)).
double noise_radius(double m, double sigma);

/// 4 sqrt((2 + p) min(n1, n2) / p) delta + 2 delta.
double recovery_error_bound(double p, int n1, int n2, double delta);

/// ||zhat - z||_F / ||z||_F.
double relative_error(const CMatrix& zhat, const CMatrix& z);

/// m / (r (n1 + n2 - r)).
double samples_per_df(double m, int n1, int n2, int r);

} // namespace mimomc
