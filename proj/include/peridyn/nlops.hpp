// SPDX-License-Identifier: MIT
// Continuous and quasi-discrete nonlocal operators (bond, divergence,
// dilatation, gradient, full Navier) on smooth callables and RK trial fields.
#pragma once

#include <optional>
#include <vector>

#include "peridyn/common.hpp"
#include "peridyn/grid.hpp"
#include "peridyn/kernel.hpp"
#include "peridyn/quadrature.hpp"
#include "peridyn/rk.hpp"

namespace peridyn {

/// Isotropic linear-elastic material in the nonlocal scaling.
struct Material {
  double lambda = 10.0 / 7.0;
  double mu = 5.0 / 14.0;
  int dim = 2;
  double C_alpha = 16.0;  // (16, 2) for d=2 plane strain, (30, 3) for d=3
  double C_beta = 2.0;

  static Material from_lame(double lambda, double mu, int dim);
  /// Plane-strain conversion: lambda = E nu/((1+nu)(1-2 nu)),
  /// mu = E/(2(1+nu)); same formulas carry the d=3 case.
  static Material from_enu(double E, double nu, int dim);

  /// The stability analysis assumes lambda >= mu (Poisson ratio >= 1/4);
  /// callers warn or reject when this fails.
  bool lambda_ge_mu() const { return lambda >= mu; }
  /// Bond-part constant C_alpha mu / m.
  double c_bond(double m) const { return C_alpha * mu / m; }
  /// State-part constant C_beta d (lambda - mu) / m^2.
  double c_state(double m) const { return C_beta * dim * (lambda - mu) / (m * m); }
};

enum class Mode { Continuous, Quasi };

/// One integration scheme over the horizon ball: either a polar rule
/// (continuous) or a rigidly translated quasi-discrete point set scaled to
/// the physical horizon.  for_each visits offsets s with combined weights
/// that already include the kernel factor:
///   continuous: w = rho_delta(|s|) * quadrature weight,
///   quasi:      w = omega_delta(s) * rho_delta(|s|)
///                 = delta^-2 * omega(s/delta) * rho(|s|/delta).
struct BallScheme {
  Mode mode = Mode::Continuous;
  RadialKernel kernel;
  PolarRule rule;     // continuous
  QuadSet qset;       // quasi (unit ball; scaled by delta on the fly)
  double m = 0.0;     // kernel weighted volume (continuous definition)

  void for_each(const std::function<void(const Vec&, double)>& visit) const;
  /// Largest |s| the scheme can visit (= delta).
  double reach() const { return kernel.delta; }
};

/// Continuous scheme with quadrature sized for spacing h_min.
BallScheme make_ball_scheme(const RadialKernel& kernel, double h_min);
/// Continuous scheme with a caller-chosen rule (e.g. exact_poly_rule).
BallScheme make_ball_scheme(const RadialKernel& kernel, const PolarRule& rule);
/// Quasi-discrete scheme from a solved QuadSet.
BallScheme make_ball_scheme(const RadialKernel& kernel, const QuadSet& qset);

/// A displacement field the operators can sample: either a smooth callable
/// or an RK trial function (grid + nodal coefficients, constrained entries
/// already holding prescribed data).
struct FieldSource {
  std::function<Vec(const Vec&)> fn;  // smooth path when set
  const GridSpec* grid = nullptr;     // trial path otherwise
  const NodalField* field = nullptr;

  bool smooth() const { return static_cast<bool>(fn); }
  Vec eval(const Vec& x, int dim) const;
};

/// Scalar analog (used by the gradient operator).
struct ScalarSource {
  std::function<double(const Vec&)> fn;
  const GridSpec* grid = nullptr;
  const std::vector<double>* coeffs = nullptr;

  bool smooth() const { return static_cast<bool>(fn); }
  double eval(const Vec& x) const;
};

/// L^B u (x) = int/sum rho_delta(|s|) (s s^T/|s|^2) (u(x+s) - u(x)).
Vec apply_bond(const FieldSource& src, const Vec& x, const BallScheme& scheme);

/// D u (x) = int/sum rho_delta(|s|) s . (u(x+s) - u(x)).
double apply_divergence(const FieldSource& src, const Vec& x,
                        const BallScheme& scheme);

/// Nonlocal dilatation theta = (d/m) D u; returns d for the identity field
/// regardless of the kernel normalization.
double dilatation(const FieldSource& src, const Vec& x, const BallScheme& scheme,
                  int dim, double m);

/// G theta (x) = int/sum rho_delta(|s|) s (theta(x+s) - theta(x)).
Vec apply_gradient(const ScalarSource& theta, const Vec& x,
                   const BallScheme& scheme);

/// D u at every grid node within delta + 2 h_max of the domain (zero at
/// nodes farther out, whose gradient-row contribution to collocation points
/// inside the domain vanishes identically).
std::vector<double> divergence_nodal_field(const GridSpec& grid,
                                           const NodalField& u,
                                           const BallScheme& scheme);

/// Full peridynamic Navier operator
///   L^S u = (C_alpha mu/m) L^B u + (C_beta d (lambda-mu)/m^2) G(D u).
/// Smooth sources integrate D u directly; trial sources interpolate the
/// precomputed nodal divergence (div_nodal from divergence_nodal_field),
/// realizing the back-substituted G(Pi^h(D u)) of the collocation scheme.
Vec apply_navier(const FieldSource& src, const Vec& x, const BallScheme& scheme,
                 const Material& mat,
                 const std::vector<double>* div_nodal = nullptr);

/// Analytic local Navier operator L^S_0 u = mu lap(u) + (mu+lambda) grad
/// div(u) for callers supplying exact derivatives: lap_u = componentwise
/// Laplacian, grad_div = gradient of the divergence, both at x.
Vec local_navier(const Vec& lap_u, const Vec& grad_div, const Material& mat);

}  // namespace peridyn
