// SPDX-License-Identifier: MIT
#include "peridyn/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "peridyn/rk.hpp"
#include "peridyn/stencil.hpp"

namespace peridyn {

namespace {

double now_seconds() {
  using clock = std::chrono::steady_clock;
  return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

DomainBox unit_square() {
  DomainBox d;
  d.dim = 2;
  d.lo = make_vec(0.0, 0.0);
  d.hi = make_vec(1.0, 1.0);
  return d;
}

/// Least-squares slope of log2(e) against log2(h).
double ls_slope(const std::vector<double>& h, const std::vector<double>& e) {
  const size_t n = h.size();
  double sx = 0.0, sy = 0.0;
  for (size_t i = 0; i < n; ++i) {
    sx += std::log2(h[i]);
    sy += std::log2(e[i]);
  }
  const double mx = sx / n, my = sy / n;
  double num = 0.0, den = 0.0;
  for (size_t i = 0; i < n; ++i) {
    num += (std::log2(h[i]) - mx) * (std::log2(e[i]) - my);
    den += (std::log2(h[i]) - mx) * (std::log2(h[i]) - mx);
  }
  return num / den;
}

void check_ladder(const std::vector<double>& ladder) {
  if (ladder.size() < 3)
    throw config_error(
        "ladder-too-short: a convergence ladder needs at least 3 spacings");
  for (size_t i = 1; i < ladder.size(); ++i)
    if (std::abs(ladder[i] - 0.5 * ladder[i - 1]) > 1e-12 * ladder[i - 1])
      throw config_error(
          "ladder-too-short: ladder entries must halve (got " +
          format_g(ladder[i - 1]) + " -> " + format_g(ladder[i]) + ")");
}

}  // namespace

ManufacturedCase ManufacturedCase::standard() {
  ManufacturedCase mc;
  mc.mat = Material::from_enu(1.0, 0.4, 2);
  mc.profile = KernelProfile{};  // inverse-distance, c = 3/(2 pi)
  return mc;
}

Vec ManufacturedCase::exact_u(const Vec& x) {
  const double a = x[0] * (1.0 - x[0]);
  const double b = x[1] * (1.0 - x[1]);
  return make_vec(a * a + b * b, 0.0);
}

Vec ManufacturedCase::exact_lap_u(const Vec& x) {
  const double g1 = 2.0 - 12.0 * x[0] + 12.0 * x[0] * x[0];
  const double g2 = 2.0 - 12.0 * x[1] + 12.0 * x[1] * x[1];
  return make_vec(g1 + g2, 0.0);
}

Vec ManufacturedCase::exact_grad_div(const Vec& x) {
  return make_vec(2.0 - 12.0 * x[0] + 12.0 * x[0] * x[0], 0.0);
}

Vec ManufacturedCase::rhs_local(const Vec& x) const {
  const double t1 = 1.0 - 6.0 * x[0] + 6.0 * x[0] * x[0];
  const double t2 = 1.0 - 4.0 * x[0] + 4.0 * x[0] * x[0] - 2.0 * x[1] +
                    2.0 * x[1] * x[1];
  return make_vec(-(2.0 * mat.lambda * t1 + 6.0 * mat.mu * t2), 0.0);
}

Vec ManufacturedCase::rhs_nonlocal(const Vec& x, double delta) const {
  const RadialKernel kern{profile, delta, 2};
  const BallScheme scheme = make_ball_scheme(kern, exact_poly_rule(4));
  FieldSource src;
  src.fn = &ManufacturedCase::exact_u;
  const Vec lu = apply_navier(src, x, scheme, mat);
  return make_vec(-lu[0], -lu[1], -lu[2]);
}

Vec ManufacturedCase::rhs_shift(double delta) const {
  return make_vec(-18.0 * mat.lambda * delta * delta / 5.0, 0.0);
}

std::string coupling_name(Coupling c) {
  switch (c) {
    case Coupling::FixedDelta:
      return "fixed-delta";
    case Coupling::DeltaEqH:
      return "delta-eq-h";
    case Coupling::DeltaEqHSquared:
      return "delta-eq-h2";
    case Coupling::DeltaEqSqrtH:
      return "delta-eq-sqrt-h";
    case Coupling::Quasi:
      return "quasi";
  }
  throw config_error("coupling_name: unknown coupling");
}

Coupling parse_coupling(const std::string& name) {
  if (name == "fixed-delta") return Coupling::FixedDelta;
  if (name == "delta-eq-h") return Coupling::DeltaEqH;
  if (name == "delta-eq-h2") return Coupling::DeltaEqHSquared;
  if (name == "delta-eq-sqrt-h") return Coupling::DeltaEqSqrtH;
  if (name == "quasi") return Coupling::Quasi;
  throw config_error("unknown coupling \"" + name +
                     "\" (expected fixed-delta, delta-eq-h, delta-eq-h2, "
                     "delta-eq-sqrt-h, or quasi)");
}

ConvergenceRecord run_convergence(Coupling coupling,
                                  const std::vector<double>& ladder,
                                  const BenchConfig& config) {
  check_ladder(ladder);
  ConvergenceRecord rec;
  rec.coupling = coupling;
  ManufacturedCase mc;
  mc.mat = config.mat;
  mc.profile = config.profile;
  DomainBox domain = config.domain;
  if (domain.hi[0] <= domain.lo[0]) domain = unit_square();

  auto delta_of = [&](double h) {
    switch (coupling) {
      case Coupling::FixedDelta:
        return config.fixed_delta;
      case Coupling::DeltaEqH:
        return h;
      case Coupling::DeltaEqHSquared:
        return h * h;
      case Coupling::DeltaEqSqrtH:
        return std::sqrt(h);
      case Coupling::Quasi:
        return config.M0 * h;
    }
    return h;
  };
  const bool small_horizon_ok = coupling == Coupling::DeltaEqHSquared;

  QuadSet qset;
  if (coupling == Coupling::Quasi) {
    const RadialKernel unit{config.profile, 1.0, config.mat.dim};
    qset = solve_weights(generate_point_set(config.eps1, config.mat.dim), unit,
                         config.weights);
  }

  auto solve_one = [&](double h_max, double delta, GridSpec& grid,
                       NodalField& field) {
    grid = build_grid(domain, h_max, config.h_hat, delta, small_horizon_ok);
    const RadialKernel kern{config.profile, delta, config.mat.dim};
    const BallScheme scheme = coupling == Coupling::Quasi
                                  ? make_ball_scheme(kern, qset)
                                  : make_ball_scheme(kern, grid.h_min);
    std::function<Vec(const Vec&)> rhs_fn;
    if (coupling == Coupling::FixedDelta) {
      const Vec shift = mc.rhs_shift(delta);
      rhs_fn = [&mc, shift](const Vec& x) {
        const Vec f0 = mc.rhs_local(x);
        return make_vec(f0[0] + shift[0], f0[1] + shift[1], f0[2] + shift[2]);
      };
    } else {
      rhs_fn = [&mc](const Vec& x) { return mc.rhs_local(x); };
    }
    SparseSystem sys = assemble(grid, scheme, config.mat,
                                &ManufacturedCase::exact_u, rhs_fn,
                                config.solver);
    auto [f, rep] = solve(sys, config.solver);
    field = std::move(f);
  };

  // Fixed-horizon reference: same equation on a 4x finer grid.
  GridSpec ref_grid;
  NodalField ref_field;
  if (coupling == Coupling::FixedDelta) {
    const double h_ref = *std::min_element(ladder.begin(), ladder.end()) / 4.0;
    solve_one(h_ref, config.fixed_delta, ref_grid, ref_field);
  }

  std::vector<double> hs, es;
  for (double h_max : ladder) {
    const double t0 = now_seconds();
    const double delta = delta_of(h_max);
    GridSpec grid;
    NodalField field;
    solve_one(h_max, delta, grid, field);
    ConvergenceRow row;
    row.h_max = h_max;
    row.delta = delta;
    row.eps1 = coupling == Coupling::Quasi ? config.eps1 : 0.0;
    row.dofs = grid.num_unknown * grid.dim;
    if (coupling == Coupling::FixedDelta) {
      row.l2_error = l2_error(grid, field, [&](const Vec& x) {
        Vec u{};
        for (int c = 0; c < ref_grid.dim; ++c)
          u[c] = quasi_interpolant(ref_grid, ref_field, c, x);
        return u;
      });
    } else {
      row.l2_error = l2_error(grid, field, &ManufacturedCase::exact_u);
    }
    row.wall_seconds = now_seconds() - t0;
    if (!rec.rows.empty())
      row.rate = std::log2(rec.rows.back().l2_error / row.l2_error);
    rec.rows.push_back(row);
    hs.push_back(h_max);
    es.push_back(row.l2_error);
  }
  rec.summary_rate = ls_slope(hs, es);
  return rec;
}

TruncationConfig TruncationConfig::manufactured() {
  TruncationConfig tc;
  const ManufacturedCase mc = ManufacturedCase::standard();
  tc.mat = mc.mat;
  tc.profile = mc.profile;
  tc.domain = unit_square();
  tc.u = &ManufacturedCase::exact_u;
  tc.local_Lu = [mc](const Vec& x) {
    const Vec f0 = mc.rhs_local(x);
    return make_vec(-f0[0], -f0[1], -f0[2]);
  };
  tc.nonlocal_Lu = [mc](const Vec& x, double delta) {
    const Vec f0 = mc.rhs_local(x);
    const Vec sh = mc.rhs_shift(delta);
    return make_vec(-(f0[0] + sh[0]), -(f0[1] + sh[1]), -(f0[2] + sh[2]));
  };
  return tc;
}

TruncationRecord truncation_study(const std::vector<double>& h_ladder,
                                  const TruncationConfig& config) {
  check_ladder(h_ladder);
  if (!config.u || !config.local_Lu)
    throw config_error("truncation_study: u and local_Lu are required");
  TruncationRecord rec;
  const int d = config.mat.dim;

  QuadSet qset;
  {
    const RadialKernel unit{config.profile, 1.0, d};
    qset = solve_weights(generate_point_set(config.eps1, d), unit,
                         config.weights);
  }

  // One residual: |r^h(L Pi^h u - reference)|_h with zeros at constrained
  // nodes.
  auto residual = [&](double h_max, double delta, const BallScheme& scheme,
                      const std::function<Vec(const Vec&)>& reference) {
    const GridSpec grid =
        build_grid(config.domain, h_max, config.h_hat, delta, true);
    const StencilSet st = build_stencils(grid, scheme, config.mat);
    NodalField coeffs(grid.num_nodes, d);
    for (long id = 0; id < grid.num_nodes; ++id) {
      const Vec uv = config.u(grid.coord(grid.node_at(id)));
      for (int c = 0; c < d; ++c) coeffs.at(id, c) = uv[c];
    }
    NodalField lphu(grid.num_nodes, d);
    stencil_apply(grid, st, coeffs, lphu);
    NodalField resid(grid.num_nodes, d);
    for (long u = 0; u < grid.num_unknown; ++u) {
      const long id = grid.unknown_nodes[u];
      const Vec ref = reference(grid.coord(grid.node_at(id)));
      for (int c = 0; c < d; ++c) resid.at(id, c) = lphu.at(id, c) - ref[c];
    }
    return norm_h(grid, resid);
  };

  std::vector<double> hs, e1, e2, e3;
  for (double h : h_ladder) {
    TruncationRow row;
    row.h_max = h;
    {
      const double delta = config.fixed_delta;
      const RadialKernel kern{config.profile, delta, d};
      const GridSpec probe =
          build_grid(config.domain, h, config.h_hat, delta, true);
      const BallScheme scheme = make_ball_scheme(kern, probe.h_min);
      std::function<Vec(const Vec&)> ref;
      if (config.nonlocal_Lu) {
        ref = [&](const Vec& x) { return config.nonlocal_Lu(x, delta); };
      } else {
        ref = [&, scheme](const Vec& x) {
          FieldSource src;
          src.fn = config.u;
          return apply_navier(src, x, scheme, config.mat);
        };
      }
      row.fixed_delta_resid = residual(h, delta, scheme, ref);
    }
    {
      const double delta = h;
      const RadialKernel kern{config.profile, delta, d};
      const GridSpec probe =
          build_grid(config.domain, h, config.h_hat, delta, true);
      const BallScheme scheme = make_ball_scheme(kern, probe.h_min);
      row.local_resid = residual(h, delta, scheme, config.local_Lu);
    }
    {
      const double delta = config.M0 * h;
      const RadialKernel kern{config.profile, delta, d};
      const BallScheme scheme = make_ball_scheme(kern, qset);
      row.quasi_resid = residual(h, delta, scheme, config.local_Lu);
    }
    if (!rec.rows.empty()) {
      const TruncationRow& prev = rec.rows.back();
      row.rate_fixed = std::log2(prev.fixed_delta_resid / row.fixed_delta_resid);
      row.rate_local = std::log2(prev.local_resid / row.local_resid);
      row.rate_quasi = std::log2(prev.quasi_resid / row.quasi_resid);
    }
    rec.rows.push_back(row);
    hs.push_back(h);
    e1.push_back(row.fixed_delta_resid);
    e2.push_back(row.local_resid);
    e3.push_back(row.quasi_resid);
  }
  rec.summary_rate_fixed = ls_slope(hs, e1);
  rec.summary_rate_local = ls_slope(hs, e2);
  rec.summary_rate_quasi = ls_slope(hs, e3);
  return rec;
}

}  // namespace peridyn
