// SPDX-License-Identifier: MIT
// Radial influence kernels rho_delta and their moments.
#pragma once

#include <string>
#include <vector>

#include "peridyn/common.hpp"

namespace peridyn {

/// Dimensionless radial profile rho(t) on (0,1], zero outside.
/// Supported families:
///   inverse_distance : rho(t) = c / t          (c = 3/(2 pi) by default,
///                                               which normalizes m = 1 in 2D)
///   constant         : rho(t) = c
///   polynomial       : rho(t) = sum_k a_k t^k
struct KernelProfile {
  enum class Kind { InverseDistance, Constant, Polynomial };

  Kind kind = Kind::InverseDistance;
  double c = 3.0 / (2.0 * 3.14159265358979323846);
  std::vector<double> coeffs;  // polynomial only

  double value(double t) const;
  /// True when rho(t) -> infinity as t -> 0 (inverse_distance).
  bool singular_at_zero() const { return kind == Kind::InverseDistance; }
  /// Closed-form radial moment  int_0^1 rho(t) t^p dt  (p >= 1).
  double radial_moment(int p) const;

  static KernelProfile parse(const std::string& name, double c,
                             const std::vector<double>& coeffs);
};

/// Scaled kernel rho_delta(r) = delta^-(d+2) rho(r/delta), support (0,delta].
struct RadialKernel {
  KernelProfile profile;
  double delta = 0.25;
  int dim = 2;

  /// Pointwise value; r >= delta gives 0, r == 0 on a singular profile
  /// is a caller error (quadrature never places nodes at the origin).
  double value(double r) const;
};

/// Weighted moments of rho_delta over the ball B_delta:
///   m       = int rho_delta |s|^2 ds           (delta-independent)
///   M4[i][j]= int rho_delta s_i^2 s_j^2/|s|^2  (delta-independent)
///   M6      = int rho_delta |s|^4 ds = M6_unit * delta^2
struct KernelMoments {
  double m = 0.0;
  double M4[3][3] = {};
  double M6 = 0.0;
};

/// Closed-form moments (separates exactly into radial x angular factors).
KernelMoments compute_moments(const RadialKernel& kernel);

/// Same moments by 1D Gauss quadrature of the radial factors; used as an
/// independent cross-check of the closed forms in the tests.
KernelMoments compute_moments_numeric(const RadialKernel& kernel);

}  // namespace peridyn
