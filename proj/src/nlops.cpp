// SPDX-License-Identifier: MIT
#include "peridyn/nlops.hpp"

#include <cmath>

namespace peridyn {

Material Material::from_lame(double lambda, double mu, int dim) {
  if (!(mu > 0.0)) throw config_error("material: mu must be positive");
  Material m;
  m.lambda = lambda;
  m.mu = mu;
  m.dim = dim;
  if (dim == 2) {
    m.C_alpha = 16.0;
    m.C_beta = 2.0;
  } else if (dim == 3) {
    m.C_alpha = 30.0;
    m.C_beta = 3.0;
  } else {
    throw config_error("material: dimension must be 2 or 3");
  }
  return m;
}

Material Material::from_enu(double E, double nu, int dim) {
  if (!(E > 0.0)) throw config_error("material: E must be positive");
  if (!(nu > -1.0 && nu < 0.5))
    throw config_error("material: nu must lie in (-1, 1/2)");
  const double lambda = E * nu / ((1.0 + nu) * (1.0 - 2.0 * nu));
  const double mu = E / (2.0 * (1.0 + nu));
  return from_lame(lambda, mu, dim);
}

void BallScheme::for_each(
    const std::function<void(const Vec&, double)>& visit) const {
  if (mode == Mode::Continuous) {
    for_each_ball_point(rule, kernel, visit);
    return;
  }
  // Quasi points scale rigidly to the horizon; combined weight
  // omega_delta(s) rho_delta(|s|) = delta^{-2} omega(t) rho(|t|), t = s/delta.
  const double delta = kernel.delta;
  const double scale = 1.0 / (delta * delta);
  for (std::size_t i = 0; i < qset.points.size(); ++i) {
    const Vec& t = qset.points[i];
    const double rho = kernel.profile.value(norm(t, kernel.dim));
    Vec s = make_vec(delta * t[0], delta * t[1], delta * t[2]);
    visit(s, scale * qset.weights[i] * rho);
  }
}

BallScheme make_ball_scheme(const RadialKernel& kernel, double h_min) {
  BallScheme b;
  b.mode = Mode::Continuous;
  b.kernel = kernel;
  b.rule = polar_rule(kernel.delta, h_min);
  b.m = compute_moments(kernel).m;
  return b;
}

BallScheme make_ball_scheme(const RadialKernel& kernel, const PolarRule& rule) {
  BallScheme b;
  b.mode = Mode::Continuous;
  b.kernel = kernel;
  b.rule = rule;
  b.m = compute_moments(kernel).m;
  return b;
}

BallScheme make_ball_scheme(const RadialKernel& kernel, const QuadSet& qset) {
  BallScheme b;
  b.mode = Mode::Quasi;
  b.kernel = kernel;
  b.qset = qset;
  b.m = compute_moments(kernel).m;
  return b;
}

Vec FieldSource::eval(const Vec& x, int dim) const {
  if (smooth()) return fn(x);
  Vec v{};
  for (int c = 0; c < dim; ++c)
    v[c] = quasi_interpolant(*grid, *field, c, x);
  return v;
}

double ScalarSource::eval(const Vec& x) const {
  if (smooth()) return fn(x);
  return quasi_interpolant(*grid, *coeffs, x);
}

Vec apply_bond(const FieldSource& src, const Vec& x, const BallScheme& scheme) {
  const int d = scheme.kernel.dim;
  const Vec ux = src.eval(x, d);
  Kahan acc[3];
  scheme.for_each([&](const Vec& s, double w) {
    const Vec us = src.eval(make_vec(x[0] + s[0], x[1] + s[1], x[2] + s[2]), d);
    const double n2 = norm2(s, d);
    double proj = 0.0;  // s . (u(x+s) - u(x))
    for (int c = 0; c < d; ++c) proj += s[c] * (us[c] - ux[c]);
    const double f = w * proj / n2;
    for (int i = 0; i < d; ++i) acc[i].add(f * s[i]);
  });
  Vec out{};
  for (int i = 0; i < d; ++i) out[i] = acc[i].value();
  return out;
}

double apply_divergence(const FieldSource& src, const Vec& x,
                        const BallScheme& scheme) {
  const int d = scheme.kernel.dim;
  const Vec ux = src.eval(x, d);
  Kahan acc;
  scheme.for_each([&](const Vec& s, double w) {
    const Vec us = src.eval(make_vec(x[0] + s[0], x[1] + s[1], x[2] + s[2]), d);
    double proj = 0.0;
    for (int c = 0; c < d; ++c) proj += s[c] * (us[c] - ux[c]);
    acc.add(w * proj);
  });
  return acc.value();
}

double dilatation(const FieldSource& src, const Vec& x, const BallScheme& scheme,
                  int dim, double m) {
  return (dim / m) * apply_divergence(src, x, scheme);
}

Vec apply_gradient(const ScalarSource& theta, const Vec& x,
                   const BallScheme& scheme) {
  const int d = scheme.kernel.dim;
  const double tx = theta.eval(x);
  Kahan acc[3];
  scheme.for_each([&](const Vec& s, double w) {
    const double ts =
        theta.eval(make_vec(x[0] + s[0], x[1] + s[1], x[2] + s[2]));
    const double f = w * (ts - tx);
    for (int i = 0; i < d; ++i) acc[i].add(f * s[i]);
  });
  Vec out{};
  for (int i = 0; i < d; ++i) out[i] = acc[i].value();
  return out;
}

std::vector<double> divergence_nodal_field(const GridSpec& grid,
                                           const NodalField& u,
                                           const BallScheme& scheme) {
  std::vector<double> dn(grid.num_nodes, 0.0);
  const double reach = scheme.kernel.delta + 2.0 * grid.h_max + 1e-12;
  FieldSource src;
  src.grid = &grid;
  src.field = &u;
  parallel_for(grid.num_nodes, [&](long id) {
    const Vec x = grid.coord(grid.node_at(id));
    if (grid.domain.distance(x) > reach) return;  // zero contribution rows
    dn[id] = apply_divergence(src, x, scheme);
  });
  return dn;
}

Vec apply_navier(const FieldSource& src, const Vec& x, const BallScheme& scheme,
                 const Material& mat, const std::vector<double>* div_nodal) {
  const int d = scheme.kernel.dim;
  const double cb = mat.c_bond(scheme.m);
  const double cs = mat.c_state(scheme.m);
  const Vec bond = apply_bond(src, x, scheme);

  Vec grad{};
  if (src.smooth()) {
    ScalarSource theta;
    theta.fn = [&](const Vec& y) { return apply_divergence(src, y, scheme); };
    grad = apply_gradient(theta, x, scheme);
  } else {
    if (div_nodal == nullptr)
      throw config_error(
          "apply_navier: trial sources need the precomputed nodal divergence");
    ScalarSource theta;
    theta.grid = src.grid;
    theta.coeffs = div_nodal;
    grad = apply_gradient(theta, x, scheme);
  }

  Vec out{};
  for (int i = 0; i < d; ++i) out[i] = cb * bond[i] + cs * grad[i];
  return out;
}

Vec local_navier(const Vec& lap_u, const Vec& grad_div, const Material& mat) {
  Vec out{};
  for (int i = 0; i < mat.dim; ++i)
    out[i] = mat.mu * lap_u[i] + (mat.mu + mat.lambda) * grad_div[i];
  return out;
}

}  // namespace peridyn
