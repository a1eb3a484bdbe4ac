// SPDX-License-Identifier: Apache-2.0
//
// mimomc - MIMO radar with matrix completion, simulation toolkit
// ------------------------------------------------------------------------

#include "mimomc/matcomp.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace mimomc {

double SvtParams::tau_for(int n1, int n2) const {
  return tau ? *tau : 5.0 * std::sqrt(static_cast<double>(n1) * n2);
}

double SvtParams::step_for(double occupancy) const { return step ? *step : 1.2 / occupancy; }

void SvtParams::validate(int n1, int n2, double occupancy) const {
  if (!(tau_for(n1, n2) > 0)) throw Error(ErrorKind::Domain, "tau must be positive");
  const double s = step_for(occupancy);
  if (!(s > 0) || !(s * occupancy < 2.0))
    throw Error(ErrorKind::Domain, "step must satisfy 0 < step * p < 2");
  if (!(tol > 0)) throw Error(ErrorKind::Domain, "tol must be positive");
  if (max_iter < 1) throw Error(ErrorKind::Domain, "max_iter must be at least 1");
  if (noise_radius && !(*noise_radius >= 0)) throw Error(ErrorKind::Domain, "noise radius must be >= 0");
}

// Thresholding through the eigendecomposition of the smaller Gram matrix.
// Only singular values above tau survive, and those are resolved to
// working precision relative to s_1.
CMatrix shrink_singular_values(const CMatrix& m, double tau, int* rank_out) {
  const bool wide = m.rows() <= m.cols();
  const CMatrix gram = wide ? CMatrix(m * m.adjoint()) : CMatrix(m.adjoint() * m);
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(gram);
  const RVector& lambda = eig.eigenvalues();  // ascending
  const Eigen::Index n = lambda.size();
  Eigen::Index keep = 0;
  while (keep < n && lambda(n - 1 - keep) > tau * tau) ++keep;
  if (rank_out) *rank_out = static_cast<int>(keep);
  if (keep == 0) return CMatrix::Zero(m.rows(), m.cols());

  const CMatrix basis = eig.eigenvectors().rightCols(keep);
  RVector gain(keep);
  for (Eigen::Index i = 0; i < keep; ++i) {
    const double s = std::sqrt(lambda(n - keep + i));
    gain(i) = (s - tau) / s;
  }
  if (wide) return basis * gain.asDiagonal() * (basis.adjoint() * m);
  return (m * basis) * gain.asDiagonal() * basis.adjoint();
}

CompletionResult svt_complete(const ObservedMatrix& observed, const SvtParams& params) {
  const auto& mask = observed.mask;
  const int n1 = mask.n_rows;
  const int n2 = mask.n_cols;
  if (observed.values.rows() != n1 || observed.values.cols() != n2)
    throw Error(ErrorKind::DimensionMismatch, "observed values do not match mask");
  if (mask.size() == 0) throw Error(ErrorKind::Domain, "no observed entries");
  if (!observed.values.allFinite()) throw Error(ErrorKind::Input, "non-finite observed entries");
  const double p = mask.occupancy();
  params.validate(n1, n2, p);

  CompletionResult result;
  const double norm_y = observed.values.norm();
  if (norm_y == 0.0) {
    result.recovered = CMatrix::Zero(n1, n2);
    result.converged = true;
    return result;
  }

  const CMatrix& y = observed.values;
  const double tau = params.tau_for(n1, n2);
  const double step = params.step_for(p);
  const auto& radius = params.noise_radius;

  Eigen::JacobiSVD<CMatrix> top(y);
  const double spectral = top.singularValues()(0);
  const double k0 = std::ceil(tau / (step * spectral));
  CMatrix dual = k0 * step * y;

  CMatrix x = CMatrix::Zero(n1, n2);
  for (int k = 1; k <= params.max_iter; ++k) {
    CMatrix next = shrink_singular_values(dual, tau, &result.rank);
    const CMatrix residual = project(next, mask) - y;
    const double res = residual.norm();
    // a diverging iteration keeps the last finite iterate
    if (!std::isfinite(res) || !next.allFinite()) break;
    x = std::move(next);
    result.iterations = k;
    result.final_residual = res;
    result.residual_history.push_back(res / norm_y);
    if (res / norm_y <= params.tol || (radius && res <= *radius)) {
      result.converged = true;
      break;
    }
    dual -= step * residual;
  }
  result.recovered = std::move(x);
  return result;
}

RVector singular_values(const CMatrix& m) {
  Eigen::JacobiSVD<CMatrix> svd(m);
  return svd.singularValues();
}

int numerical_rank(const CMatrix& m, double rank_threshold) {
  const RVector s = singular_values(m);
  if (s.size() == 0 || s(0) == 0.0) return 0;
  return static_cast<int>((s.array() > rank_threshold * s(0)).count());
}

double coherence_of_subspace(const CMatrix& basis) {
  const auto n = basis.rows();
  const auto r = basis.cols();
  if (r == 0 || n == 0) throw Error(ErrorKind::Input, "empty basis");
  const CMatrix gram = basis.adjoint() * basis;
  if ((gram - CMatrix::Identity(r, r)).cwiseAbs().maxCoeff() > 1e-10)
    throw Error(ErrorKind::Input, "basis columns are not orthonormal");
  return static_cast<double>(n) / static_cast<double>(r) * basis.rowwise().squaredNorm().maxCoeff();
}

namespace {

CoherenceReport coherence_from_svd(const Eigen::JacobiSVD<CMatrix>& svd, int r) {
  const CMatrix u = svd.matrixU().leftCols(r);
  const CMatrix v = svd.matrixV().leftCols(r);
  CoherenceReport rep;
  rep.rank_used = r;
  rep.mu_u = coherence_of_subspace(u);
  rep.mu_v = coherence_of_subspace(v);
  rep.mu_max = std::max(rep.mu_u, rep.mu_v);
  const double n1 = static_cast<double>(u.rows());
  const double n2 = static_cast<double>(v.rows());
  rep.mu1 = (u * v.adjoint()).cwiseAbs().maxCoeff() * std::sqrt(n1 * n2 / r);
  return rep;
}

} // namespace

CoherenceReport matrix_coherence(const CMatrix& m, double rank_threshold) {
  Eigen::JacobiSVD<CMatrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const RVector& s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0.0) throw Error(ErrorKind::Domain, "coherence of a zero matrix");
  const int r = static_cast<int>((s.array() > rank_threshold * s(0)).count());
  return coherence_from_svd(svd, r);
}

CoherenceReport matrix_coherence_at_rank(const CMatrix& m, int rank) {
  if (rank < 1 || rank > std::min(m.rows(), m.cols()))
    throw Error(ErrorKind::Domain, "rank " + std::to_string(rank) + " out of range");
  Eigen::JacobiSVD<CMatrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (svd.singularValues()(0) == 0.0) throw Error(ErrorKind::Domain, "coherence of a zero matrix");
  return coherence_from_svd(svd, rank);
}

SampleBound theorem1_bound(int n1, int n2, int r, double mu0, double mu1, double beta, double c) {
  if (!(beta > 2)) throw Error(ErrorKind::Domain, "beta must exceed 2");
  if (!(c > 0)) throw Error(ErrorKind::Domain, "C must be positive");
  if (n1 < 1 || n2 < 1 || r < 1) throw Error(ErrorKind::Domain, "dimensions and rank must be positive");
  const double n = std::max(n1, n2);
  const double common = n * r * beta * std::log(n);
  SampleBound b;
  b.general = c * std::max({mu1 * mu1, std::sqrt(mu0) * mu1, mu0 * std::pow(n, 0.25)}) * common;
  b.improved = c * mu0 * std::pow(n, 1.2) * r * beta * std::log(n);
  b.improved_applies = r <= std::pow(n, 0.2) / mu0;
  return b;
}

double noise_radius(double m, double sigma) {
  if (!(m >= 1)) throw Error(ErrorKind::Domain, "m must be at least 1");
  if (!(sigma >= 0)) throw Error(ErrorKind::Domain, "sigma must be non-negative");
  return sigma * std::sqrt(m + std::sqrt(8.0 * m));
}

double recovery_error_bound(double p, int n1, int n2, double delta) {
  if (!(p > 0 && p <= 1)) throw Error(ErrorKind::Domain, "occupancy must lie in (0, 1]");
  const double nmin = std::min(n1, n2);
  return 4.0 * std::sqrt((2.0 + p) * nmin / p) * delta + 2.0 * delta;
}

double relative_error(const CMatrix& zhat, const CMatrix& z) {
  if (zhat.rows() != z.rows() || zhat.cols() != z.cols())
    throw Error(ErrorKind::DimensionMismatch, "relative_error operands differ in shape");
  const double ref = z.norm();
  if (ref == 0.0) throw Error(ErrorKind::Domain, "relative error against a zero reference");
  return (zhat - z).norm() / ref;
}

double samples_per_df(double m, int n1, int n2, int r) {
  if (r < 1 || r > std::min(n1, n2)) throw Error(ErrorKind::Domain, "rank out of range");
  return m / (static_cast<double>(r) * (n1 + n2 - r));
}

} // namespace mimomc
