// SPDX-License-Identifier: MIT
// Gauss-Legendre rules, polar quadrature over the horizon ball, and the
// quasi-discrete point set with moment-matched positive weights.
#pragma once

#include <vector>

#include "peridyn/common.hpp"
#include "peridyn/kernel.hpp"

namespace peridyn {

/// Gauss-Legendre rule on [-1, 1].  Nodes are computed by Newton iteration
/// on the Legendre polynomial (deterministic, no tables), accurate to 1 ulp.
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule, n >= 1 (exact for polynomials of degree
/// 2n - 1).
const GaussRule& gauss_legendre(int n);

/// Composite polar (spherical for d=3) product rule over the ball B_delta.
/// The radial coordinate absorbs the Jacobian r^{d-1}, which cancels the
/// admissible kernels' 1/r singularity analytically, so integrands stay
/// bounded at every node.
struct PolarRule {
  int radial_panels = 1;
  int radial_order = 4;  // Gauss points per radial panel (>= 2)
  int angular_panels = 16;
  int angular_order = 4;  // Gauss points per angular panel (>= 2)
  int polar_panels = 1;   // d = 3 only: colatitude panels
  int polar_order = 4;

  long total_points(int dim) const;
};

/// Auto-sized rule for operator quadrature on a grid with smallest spacing
/// h_min: radial panel width <= h_min/2 at 4 points per panel, angular panel
/// count >= max(16, ceil(8*delta/h_min)*4).  Over-resolves piecewise-cubic
/// integrands so the quadrature error is far below the h^2 discretization
/// error.
PolarRule polar_rule(double delta, double h_min);

/// Fixed small rule that is exact (to roundoff) for integrands of the form
/// rho_delta(|s|) * polynomial(s) with polynomial degree <= max_degree
/// (radial factor exact for the inverse-distance and polynomial profiles;
/// angular factor exact for trigonometric degree 2 + max_degree).
PolarRule exact_poly_rule(int max_degree);

/// Visit every quadrature node of `rule` for the ball B_delta of `kernel`:
/// calls visit(s, w) where s is the offset from the ball center and w the
/// combined weight rho_delta(|s|) * Jacobian * Gauss weights.  Panel-major
/// deterministic order.
void for_each_ball_point(const PolarRule& rule, const RadialKernel& kernel,
                         const std::function<void(const Vec&, double)>& visit);

/// integral over B_delta of rho_delta(|s|) * f(s), where f writes its
/// `ncomp` components into the provided slot array.  Compensated summation
/// per component; deterministic.
std::vector<double> integrate_ball(
    const PolarRule& rule, const RadialKernel& kernel, int ncomp,
    const std::function<void(const Vec&, double*)>& f);

/// Symmetric quasi-discrete quadrature set on the unit ball: lattice points
/// eps1 * k (k integer, nonzero) with |eps1 * k| <= 1 and positive weights
/// matching the kernel's fourth moments.  Physical-ball weights follow the
/// scaling omega_delta(s) = delta^d * omega(s/delta).
struct QuadSet {
  std::vector<Vec> points;  // on the unit ball, centrally symmetric
  std::vector<double> weights;
  double eps1 = 0.25;
  int dim = 2;
};

/// All lattice points eps1 * k, k != 0, inside the closed unit ball, in
/// lexicographic index order.  Throws config_error when the set is empty
/// (eps1 >= 1 can leave no interior points) or eps1 is not in (0, 1).
std::vector<Vec> generate_point_set(double eps1, int dim);

struct WeightSolveOptions {
  /// Orbit group for the one-weight-per-orbit parameterization: sign flips
  /// always; additionally coordinate swaps when the caller's grid is
  /// isotropic.  Sign-flip-only is the default because the reference grids
  /// are anisotropic (h_hat = (1, 1/2)).
  bool include_swap = false;
  double constraint_tol = 1e-10;
};

/// Weights minimizing sum (omega - eps1^d)^2 subject to the distinct
/// fourth-moment constraints
///   sum omega(s) rho(|s|) s_i^2 s_j^2 / |s|^2 = integral over B_1,
/// solved on symmetry orbits.  Throws numerical_error("infeasible-constraints
/// ...") when the constraints cannot be met to constraint_tol and
/// numerical_error("nonpositive-weight ...") when any weight fails strict
/// positivity (refine eps1 in that case).
QuadSet solve_weights(const std::vector<Vec>& points, const RadialKernel& kernel,
                      const WeightSolveOptions& options = {});

}  // namespace peridyn
