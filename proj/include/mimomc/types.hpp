// SPDX-License-Identifier: Apache-2.0
//
// mimomc - MIMO radar with matrix completion, simulation toolkit
// ------------------------------------------------------------------------

#pragma once

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>

namespace mimomc {

using cd = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kSpeedOfLight = 2.99792458e8; // m/s

enum class ErrorKind {
  Domain,                  // argument outside the operation's domain
  Input,                   // malformed numerical input (non-finite, non-orthonormal, ...)
  DimensionMismatch,
  Protocol,                // fusion-center assembly inconsistencies
  Unsupported,
  InfeasibleOrthogonality,
  Config,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

private:
  ErrorKind kind_;
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
  case ErrorKind::Domain: return "domain error";
  case ErrorKind::Input: return "input error";
  case ErrorKind::DimensionMismatch: return "dimension mismatch";
  case ErrorKind::Protocol: return "protocol error";
  case ErrorKind::Unsupported: return "unsupported";
  case ErrorKind::InfeasibleOrthogonality: return "infeasible orthogonality";
  case ErrorKind::Config: return "config error";
  }
  return "error";
}

inline double deg2rad(double deg) { return deg * kPi / 180.0; }
inline double rad2deg(double rad) { return rad * 180.0 / kPi; }

} // namespace mimomc
