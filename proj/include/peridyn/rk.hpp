// SPDX-License-Identifier: MIT
// Cubic B-spline reproducing-kernel shape functions, the quasi-interpolant,
// and the discrete |.|_h norm.
#pragma once

#include <vector>

#include "peridyn/common.hpp"
#include "peridyn/grid.hpp"

namespace peridyn {

/// Normalized cubic B-spline on t in [0, 1]:
///   2/3 - 4 t^2 + 4 t^3          for t <= 1/2,
///   (4/3) (1 - t)^3              for 1/2 < t < 1,
///   0                            for t >= 1.
/// C^2 across the breakpoints.  Negative t throws config_error (callers
/// pass |.|).
double cubic_bspline(double t);

/// k-th derivative of the spline w.r.t. t, k in {0, 1, 2}.
double cubic_bspline_deriv(double t, int order);

/// Tensor-product RK shape function
///   Psi_k(x) = prod_j phi(|x_j - x_{k j}| / (2 h_j))
/// or its exact partial derivative; deriv[j] is the order along axis j,
/// total order <= 2 (higher throws config_error).  Support is the open box
/// |x_j - x_{k j}| < 2 h_j.
double shape_value(const GridSpec& grid, const Index& k, const Vec& x,
                   const Index& deriv = {});

/// Coefficient lookup outside the indexed region: Error rejects (the
/// interpolant is undefined there), Zero extends by zero (the convention of
/// the |.|_h norm).
enum class Extension { Error, Zero };

/// Quasi-interpolant of one scalar coefficient sequence:
///   i^h(u)(x) = sum_k Psi_k(x) u_k
/// (or its derivative), summing only the <= 4^d nodes whose support
/// contains x.  Extension::Error throws config_error("missing-coefficient
/// ...") when the stencil leaves the grid.
double quasi_interpolant(const GridSpec& grid, const std::vector<double>& coeffs,
                         const Vec& x, const Index& deriv = {},
                         Extension ext = Extension::Error);

/// Vector-valued variant over a NodalField component.
double quasi_interpolant(const GridSpec& grid, const NodalField& field, int comp,
                         const Vec& x, const Index& deriv = {},
                         Extension ext = Extension::Error);

/// Discrete norm |u|_h = L2 norm of the zero-extended quasi-interpolant over
/// all of R^d, computed exactly (to roundoff) by per-cell Gauss quadrature
/// with 4 points per axis (the squared interpolant is piecewise polynomial
/// of degree <= 6 per axis on the grid cells).
double norm_h(const GridSpec& grid, const std::vector<double>& coeffs);

/// Vector field version: sqrt(sum over components of norm_h^2).
double norm_h(const GridSpec& grid, const NodalField& field);

}  // namespace peridyn
