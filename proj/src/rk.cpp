// SPDX-License-Identifier: MIT
#include "peridyn/rk.hpp"

#include <cmath>

#include "peridyn/quadrature.hpp"

namespace peridyn {

double cubic_bspline(double t) {
  if (t < 0.0) throw config_error("cubic_bspline: negative argument");
  if (t >= 1.0) return 0.0;
  if (t <= 0.5) return 2.0 / 3.0 - 4.0 * t * t + 4.0 * t * t * t;
  const double u = 1.0 - t;
  return (4.0 / 3.0) * u * u * u;
}

double cubic_bspline_deriv(double t, int order) {
  if (t < 0.0) throw config_error("cubic_bspline: negative argument");
  if (order == 0) return cubic_bspline(t);
  if (t >= 1.0) return 0.0;
  if (order == 1) {
    if (t <= 0.5) return -8.0 * t + 12.0 * t * t;
    const double u = 1.0 - t;
    return -4.0 * u * u;
  }
  if (order == 2) {
    if (t <= 0.5) return -8.0 + 24.0 * t;
    return 8.0 * (1.0 - t);
  }
  throw config_error("cubic_bspline: derivative order > 2");
}

double shape_value(const GridSpec& grid, const Index& k, const Vec& x,
                   const Index& deriv) {
  int total = 0;
  for (int j = 0; j < grid.dim; ++j) total += deriv[j];
  if (total > 2) throw config_error("shape_value: derivative order > 2");
  double v = 1.0;
  for (int j = 0; j < grid.dim; ++j) {
    const double a = 2.0 * grid.h[j];
    const double u = (x[j] - k[j] * grid.h[j]) / a;
    const double t = std::abs(u);
    if (t >= 1.0) return 0.0;
    double f = cubic_bspline_deriv(t, deriv[j]);
    if (deriv[j] == 1) {
      // d/dx phi(|u|) = phi'(t) sign(u) / a; phi'(0) = 0 keeps u = 0 smooth.
      f *= (u < 0.0 ? -1.0 : 1.0) / a;
    } else if (deriv[j] == 2) {
      f /= a * a;
    }
    v *= f;
  }
  return v;
}

namespace {

/// Per-axis index window of the nodes whose support contains x.
void support_window(const GridSpec& grid, const Vec& x, int j, int& lo,
                    int& hi) {
  // |x - k h| < 2h  <=>  k in (x/h - 2, x/h + 2).
  const double c = x[j] / grid.h[j];
  lo = static_cast<int>(std::floor(c - 2.0)) + 1;
  hi = static_cast<int>(std::ceil(c + 2.0)) - 1;
}

template <typename Lookup>
double interpolate(const GridSpec& grid, const Vec& x, const Index& deriv,
                   Extension ext, Lookup&& coeff) {
  Index lo{}, hi{};
  for (int j = 0; j < grid.dim; ++j) support_window(grid, x, j, lo[j], hi[j]);
  const int k3lo = grid.dim == 3 ? lo[2] : 0;
  const int k3hi = grid.dim == 3 ? hi[2] : 0;
  Kahan acc;
  Index k{};
  for (k[0] = lo[0]; k[0] <= hi[0]; ++k[0])
    for (k[1] = lo[1]; k[1] <= hi[1]; ++k[1])
      for (k[2] = k3lo; k[2] <= k3hi; ++k[2]) {
        const double psi = shape_value(grid, k, x, deriv);
        if (psi == 0.0) continue;
        if (!grid.in_range(k)) {
          if (ext == Extension::Error)
            throw config_error(
                "missing-coefficient: interpolation stencil leaves the "
                "indexed grid");
          continue;  // zero extension
        }
        acc.add(psi * coeff(grid.node_id(k)));
      }
  return acc.value();
}

}  // namespace

double quasi_interpolant(const GridSpec& grid, const std::vector<double>& coeffs,
                         const Vec& x, const Index& deriv, Extension ext) {
  return interpolate(grid, x, deriv, ext,
                     [&](long id) { return coeffs[id]; });
}

double quasi_interpolant(const GridSpec& grid, const NodalField& field, int comp,
                         const Vec& x, const Index& deriv, Extension ext) {
  return interpolate(grid, x, deriv, ext,
                     [&](long id) { return field.at(id, comp); });
}

namespace {

template <typename Eval>
double norm_h_impl(const GridSpec& grid, Eval&& eval) {
  // Integrate over the support of the zero-extended interpolant: two cells
  // beyond the outermost nodes per side; 4-point Gauss per axis per cell is
  // exact for the squared piecewise-cubic interpolant.
  const auto& gr = gauss_legendre(4);
  Kahan acc;
  Index clo{}, chi{};
  for (int j = 0; j < grid.dim; ++j) {
    clo[j] = grid.k_lo[j] - 2;
    chi[j] = grid.k_hi[j] + 2;  // cell c spans [c h, (c+1) h]
  }
  const int c3lo = grid.dim == 3 ? clo[2] : 0;
  const int c3hi = grid.dim == 3 ? chi[2] - 1 : 0;
  Index c{};
  for (c[0] = clo[0]; c[0] < chi[0]; ++c[0])
    for (c[1] = clo[1]; c[1] < chi[1]; ++c[1])
      for (c[2] = c3lo; c[2] <= c3hi; ++c[2]) {
        // Gauss points within the cell per axis.
        double wcell = 1.0;
        for (int j = 0; j < grid.dim; ++j) wcell *= 0.5 * grid.h[j];
        if (grid.dim == 2) {
          for (int a = 0; a < 4; ++a)
            for (int b = 0; b < 4; ++b) {
              Vec x = make_vec((c[0] + 0.5 * (gr.nodes[a] + 1.0)) * grid.h[0],
                               (c[1] + 0.5 * (gr.nodes[b] + 1.0)) * grid.h[1]);
              const double w = wcell * gr.weights[a] * gr.weights[b];
              const double v = eval(x);
              acc.add(w * v);
            }
        } else {
          for (int a = 0; a < 4; ++a)
            for (int b = 0; b < 4; ++b)
              for (int e = 0; e < 4; ++e) {
                Vec x =
                    make_vec((c[0] + 0.5 * (gr.nodes[a] + 1.0)) * grid.h[0],
                             (c[1] + 0.5 * (gr.nodes[b] + 1.0)) * grid.h[1],
                             (c[2] + 0.5 * (gr.nodes[e] + 1.0)) * grid.h[2]);
                const double w =
                    wcell * gr.weights[a] * gr.weights[b] * gr.weights[e];
                acc.add(w * eval(x));
              }
        }
      }
  return std::sqrt(std::max(0.0, acc.value()));
}

}  // namespace

double norm_h(const GridSpec& grid, const std::vector<double>& coeffs) {
  return norm_h_impl(grid, [&](const Vec& x) {
    const double v =
        quasi_interpolant(grid, coeffs, x, Index{}, Extension::Zero);
    return v * v;
  });
}

double norm_h(const GridSpec& grid, const NodalField& field) {
  return norm_h_impl(grid, [&](const Vec& x) {
    double s = 0.0;
    for (int cmp = 0; cmp < field.comps; ++cmp) {
      const double v =
          quasi_interpolant(grid, field, cmp, x, Index{}, Extension::Zero);
      s += v * v;
    }
    return s;
  });
}

}  // namespace peridyn
