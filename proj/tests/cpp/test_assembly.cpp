// SPDX-License-Identifier: MIT
#include <cmath>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "peridyn/assembly.hpp"
#include "peridyn/fftconv.hpp"
#include "peridyn/stencil.hpp"

using namespace peridyn;

namespace {
struct Setup {
  GridSpec grid;
  Material mat;
  BallScheme scheme;
  Setup(double h_max, double delta)
      : grid(build_grid(DomainBox{}, h_max, make_vec(1.0, 0.5), delta)),
        mat(Material::from_enu(1.0, 0.4, 2)),
        scheme(make_ball_scheme(RadialKernel{KernelProfile{}, delta, 2},
                                grid.h_min)) {}
};

// u = (x1^2 + 2 x1 x2, x2^2 - x1 x2): a quadratic exact solution; the
// collocation operator maps quadratic trial fields to the constant local
// image, so the discrete solution reproduces the nodal values exactly.
Vec quad_solution(const Vec& x) {
  return make_vec(x[0] * x[0] + 2.0 * x[0] * x[1],
                  x[1] * x[1] - x[0] * x[1]);
}

Vec quad_rhs(const Material& mat) {
  // lap u = (2, 2); div u = (2x1 + 2x2) + (2x2 - x1) = x1 + 4x2, so
  // grad div u = (1, 4).
  const Vec lap = make_vec(2.0, 2.0);
  const Vec gd = make_vec(1.0, 4.0);
  const Vec Lu = local_navier(lap, gd, mat);
  return make_vec(-Lu[0], -Lu[1]);
}

double field_max_diff(const GridSpec& g, const NodalField& a,
                      const NodalField& b) {
  double m = 0.0;
  for (long id = 0; id < g.num_nodes; ++id)
    for (int c = 0; c < 2; ++c)
      m = std::max(m, std::abs(a.at(id, c) - b.at(id, c)));
  return m;
}

std::uint64_t rng_state = 88172645463325252ull;
double rand_unit() {
  rng_state ^= rng_state << 13;
  rng_state ^= rng_state >> 7;
  rng_state ^= rng_state << 17;
  return double(rng_state >> 11) * 0x1.0p-52 - 1.0;
}
}  // namespace

TEST_SUITE("assembly") {
  TEST_CASE("stencils annihilate constants") {
    const Setup s(0.25, 0.25);
    const StencilSet st = build_stencils(s.grid, s.scheme, s.mat);
    CHECK(st.m == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(st.reach[0] == 3);
    CHECK(st.reach[1] == 4);
    for (int i = 0; i < 2; ++i)
      for (int c = 0; c < 2; ++c) {
        double sum = 0.0, scale = 0.0;
        for (double w : st.bond[i][c]) {
          sum += w;
          scale += std::abs(w);
        }
        CHECK(std::abs(sum) <= 1e-13 * std::max(scale, 1.0));
      }
    for (int c = 0; c < 2; ++c) {
      double sum = 0.0, scale = 0.0;
      for (double w : st.grad[c]) {
        sum += w;
        scale += std::abs(w);
      }
      CHECK(std::abs(sum) <= 1e-13 * std::max(scale, 1.0));
    }
    // Symmetry of the bond blocks in (i, c).
    REQUIRE(st.bond[0][1].size() == st.bond[1][0].size());
    for (std::size_t k = 0; k < st.bond[0][1].size(); ++k)
      CHECK(st.bond[0][1][k] == st.bond[1][0][k]);
  }

  TEST_CASE("stencil_apply reproduces the operator on quadratic trial fields") {
    const Setup s(0.125, 0.25);
    StencilSet st = build_stencils(s.grid, s.scheme, s.mat);
    const NodalField u = restrict_field(s.grid, quad_solution, 2);
    NodalField out(s.grid.num_nodes, 2);
    stencil_apply(s.grid, st, u, out);
    const Vec expect = local_navier(make_vec(2.0, 2.0), make_vec(1.0, 4.0), s.mat);
    for (long slot = 0; slot < s.grid.num_unknown; ++slot) {
      const long id = s.grid.unknown_nodes[slot];
      CHECK(out.at(id, 0) == doctest::Approx(expect[0]).epsilon(1e-10));
      CHECK(out.at(id, 1) == doctest::Approx(expect[1]).epsilon(1e-10));
    }
  }

  TEST_CASE("spectral operator equals the stencil operator") {
    const Setup s(0.125, 0.25);
    const StencilSet st = build_stencils(s.grid, s.scheme, s.mat);
    const SpectralOp op(s.grid, st);
    NodalField u(s.grid.num_nodes, 2);
    for (long id = 0; id < s.grid.num_nodes; ++id)
      for (int c = 0; c < 2; ++c) u.at(id, c) = rand_unit();
    NodalField a(s.grid.num_nodes, 2), b(s.grid.num_nodes, 2);
    stencil_apply(s.grid, st, u, a);
    op.apply(u, b);
    // Compare at the nodes where both are defined (>= 2*reach inside).
    double scale = 0.0;
    for (long slot = 0; slot < s.grid.num_unknown; ++slot) {
      const long id = s.grid.unknown_nodes[slot];
      for (int c = 0; c < 2; ++c) scale = std::max(scale, std::abs(a.at(id, c)));
    }
    for (long slot = 0; slot < s.grid.num_unknown; ++slot) {
      const long id = s.grid.unknown_nodes[slot];
      for (int c = 0; c < 2; ++c)
        CHECK(std::abs(a.at(id, c) - b.at(id, c)) <= 1e-12 * scale);
    }
  }

  TEST_CASE("explicit matrix agrees with the spectral operator") {
    const Setup s(0.125, 0.25);
    AssemblyOptions opt;
    opt.solver = AssemblyOptions::Solver::Direct;
    const SparseSystem sys =
        assemble(s.grid, s.scheme, s.mat, [](const Vec&) { return Vec{}; },
                 [](const Vec&) { return Vec{}; }, opt);
    REQUIRE(sys.matrix_built);
    REQUIRE(sys.num_dofs == 2 * s.grid.num_unknown);

    std::vector<double> x(sys.num_dofs);
    for (double& v : x) v = rand_unit();
    // A x explicitly.
    std::vector<double> ax(sys.num_dofs, 0.0);
    for (int k = 0; k < sys.A.outerSize(); ++k)
      for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(sys.A, k);
           it; ++it)
        ax[it.row()] += it.value() * x[it.col()];
    // -L applied spectrally to the zero-extended field.
    const SpectralOp op(s.grid, sys.stencils);
    NodalField u(s.grid.num_nodes, 2), lu(s.grid.num_nodes, 2);
    for (long slot = 0; slot < s.grid.num_unknown; ++slot) {
      const long id = s.grid.unknown_nodes[slot];
      for (int c = 0; c < 2; ++c) u.at(id, c) = x[2 * slot + c];
    }
    op.apply(u, lu);
    double scale = 1.0;
    for (double v : ax) scale = std::max(scale, std::abs(v));
    for (long slot = 0; slot < s.grid.num_unknown; ++slot) {
      const long id = s.grid.unknown_nodes[slot];
      for (int c = 0; c < 2; ++c)
        CHECK(std::abs(ax[2 * slot + c] + lu.at(id, c)) <= 1e-12 * scale);
    }
  }

  TEST_CASE("direct, iterative, and spectral solves agree on a quadratic problem") {
    const Setup s(0.125, 0.25);
    const Vec f = quad_rhs(s.mat);
    auto rhs_fn = [f](const Vec&) { return f; };

    AssemblyOptions direct;
    direct.solver = AssemblyOptions::Solver::Direct;
    const SparseSystem sys_d =
        assemble(s.grid, s.scheme, s.mat, quad_solution, rhs_fn, direct);
    const auto [ud, rep_d] = solve(sys_d, direct);
    CHECK(rep_d.method == "sparse-lu");

    // The exact quadratic is reproduced at the nodes.
    const NodalField exact = restrict_field(s.grid, quad_solution, 2);
    CHECK(field_max_diff(s.grid, ud, exact) <= 1e-9);

    // Residual of the exact nodal solution against the assembled system.
    std::vector<double> xs(sys_d.num_dofs);
    for (long slot = 0; slot < s.grid.num_unknown; ++slot) {
      const long id = s.grid.unknown_nodes[slot];
      for (int c = 0; c < 2; ++c) xs[2 * slot + c] = exact.at(id, c);
    }
    double rmax = 0.0, bscale = 0.0;
    std::vector<double> ax(sys_d.num_dofs, 0.0);
    for (int k = 0; k < sys_d.A.outerSize(); ++k)
      for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(sys_d.A, k);
           it; ++it)
        ax[it.row()] += it.value() * xs[it.col()];
    for (long i = 0; i < sys_d.num_dofs; ++i) {
      rmax = std::max(rmax, std::abs(ax[i] - sys_d.rhs[i]));
      bscale = std::max(bscale, std::abs(sys_d.rhs[i]));
    }
    CHECK(rmax <= 1e-10 * std::max(bscale, 1.0));

    AssemblyOptions iter;
    iter.solver = AssemblyOptions::Solver::Iterative;
    const SparseSystem sys_i =
        assemble(s.grid, s.scheme, s.mat, quad_solution, rhs_fn, iter);
    const auto [ui, rep_i] = solve(sys_i, iter);
    CHECK(rep_i.method == "bicgstab");
    CHECK(rep_i.iterations >= 1);
    CHECK(rep_i.rel_residual <= iter.tol);
    CHECK(field_max_diff(s.grid, ui, ud) <= 1e-7);

    AssemblyOptions spec;
    spec.solver = AssemblyOptions::Solver::Spectral;
    const SparseSystem sys_s =
        assemble(s.grid, s.scheme, s.mat, quad_solution, rhs_fn, spec);
    CHECK_FALSE(sys_s.matrix_built);
    const auto [us, rep_s] = solve(sys_s, spec);
    CHECK(rep_s.method == "bicgstab-spectral");
    CHECK(field_max_diff(s.grid, us, ud) <= 1e-7);
  }

  TEST_CASE("auto routing by size and budget") {
    const Setup s(0.25, 0.25);  // 42 DOFs -> direct
    AssemblyOptions opt;  // Auto
    const SparseSystem small =
        assemble(s.grid, s.scheme, s.mat, [](const Vec&) { return Vec{}; },
                 [](const Vec&) { return make_vec(1.0, 0.0); }, opt);
    CHECK(small.matrix_built);
    const auto [u1, rep1] = solve(small, opt);
    CHECK(rep1.method == "sparse-lu");

    AssemblyOptions tiny_direct = opt;
    tiny_direct.direct_dof_limit = 10;  // force Krylov on the same grid
    const auto [u2, rep2] = solve(small, tiny_direct);
    CHECK(rep2.method == "bicgstab");
    CHECK(field_max_diff(s.grid, u1, u2) <= 1e-7);

    AssemblyOptions tiny_budget = opt;
    tiny_budget.explicit_budget_bytes = 100.0;  // force the spectral path
    const SparseSystem specsys =
        assemble(s.grid, s.scheme, s.mat, [](const Vec&) { return Vec{}; },
                 [](const Vec&) { return make_vec(1.0, 0.0); }, tiny_budget);
    CHECK_FALSE(specsys.matrix_built);
    const auto [u3, rep3] = solve(specsys, tiny_budget);
    CHECK(rep3.method == "bicgstab-spectral");
    CHECK(field_max_diff(s.grid, u1, u3) <= 1e-7);

    // Direct solve on a spectral-only system is a configuration error.
    AssemblyOptions want_direct = tiny_budget;
    want_direct.solver = AssemblyOptions::Solver::Direct;
    CHECK_THROWS_AS((void)solve(specsys, want_direct), config_error);
    std::ostringstream oss;
    CHECK_THROWS_AS(export_coo(specsys, oss), config_error);
  }

  TEST_CASE("iterative stagnation raises numerical_error") {
    const Setup s(0.25, 0.25);
    AssemblyOptions opt;
    opt.solver = AssemblyOptions::Solver::Iterative;
    opt.tol = 1e-30;  // unattainable in double precision
    const SparseSystem sys =
        assemble(s.grid, s.scheme, s.mat, [](const Vec&) { return Vec{}; },
                 [](const Vec&) { return make_vec(1.0, 0.0); }, opt);
    try {
      (void)solve(sys, opt);
      FAIL("expected stagnation");
    } catch (const numerical_error& e) {
      CHECK(std::string(e.what()).find("iterative-stagnation") !=
            std::string::npos);
    }
  }

  TEST_CASE("bicgstab solves a reference dense system") {
    const long n = 12;
    std::vector<double> M(n * n, 0.0);
    for (long i = 0; i < n; ++i) {
      M[i * n + i] = 4.0 + 0.1 * double(i);
      if (i + 1 < n) {
        M[i * n + i + 1] = -1.0 + 0.05 * double(i);
        M[(i + 1) * n + i] = -1.2;
      }
    }
    LinearOperator A;
    A.n = n;
    A.apply = [&M, n](const std::vector<double>& x, std::vector<double>& y) {
      for (long i = 0; i < n; ++i) {
        double s = 0.0;
        for (long j = 0; j < n; ++j) s += M[i * n + j] * x[j];
        y[i] = s;
      }
    };
    std::vector<double> want(n), b(n, 0.0);
    for (long i = 0; i < n; ++i) want[i] = std::sin(double(i) + 1.0);
    A.apply(want, b);
    std::vector<double> x(n, 0.0);
    const KrylovResult kr = bicgstab(A, nullptr, b, x, 1e-12, 10 * n);
    CHECK(kr.converged);
    CHECK(kr.rel_residual <= 1e-12);
    for (long i = 0; i < n; ++i)
      CHECK(x[i] == doctest::Approx(want[i]).epsilon(1e-9));
  }

  TEST_CASE("l2_error measures the domain L2 distance") {
    const Setup s(0.25, 0.25);
    auto lin = [](const Vec& x) { return make_vec(x[0] - 0.5 * x[1], 2.0 * x[1]); };
    const NodalField f = restrict_field(s.grid, lin, 2);
    CHECK(l2_error(s.grid, f, lin) <= 1e-13);
    // Constant offset c in component 1 over the unit square: error = |c|.
    NodalField g = f;
    for (long id = 0; id < s.grid.num_nodes; ++id) g.at(id, 0) += 0.3;
    CHECK(l2_error(s.grid, g, lin) == doctest::Approx(0.3).epsilon(1e-12));
  }

  TEST_CASE("export and determinism of assembly") {
    const Setup s(0.25, 0.25);
    AssemblyOptions opt;
    opt.solver = AssemblyOptions::Solver::Direct;
    auto bc = [](const Vec& x) { return make_vec(x[0], x[1]); };
    auto ff = [](const Vec&) { return make_vec(0.5, -0.25); };
    const SparseSystem a = assemble(s.grid, s.scheme, s.mat, bc, ff, opt);
    const SparseSystem b = assemble(s.grid, s.scheme, s.mat, bc, ff, opt);
    REQUIRE(a.A.nonZeros() == b.A.nonZeros());
    for (long k = 0; k < a.A.nonZeros(); ++k)
      CHECK(a.A.valuePtr()[k] == b.A.valuePtr()[k]);
    for (std::size_t i = 0; i < a.rhs.size(); ++i)
      CHECK(a.rhs[i] == b.rhs[i]);

    std::ostringstream oss;
    export_coo(a, oss);
    std::istringstream iss(oss.str());
    long rows = 0;
    std::string line;
    while (std::getline(iss, line))
      if (!line.empty()) ++rows;
    CHECK(rows == a.A.nonZeros());
  }

  TEST_CASE("next_fast_size returns 5-smooth bounds") {
    CHECK(next_fast_size(1) == 1);
    CHECK(next_fast_size(17) == 18);
    CHECK(next_fast_size(31) == 32);
    CHECK(next_fast_size(121) == 125);
    CHECK(next_fast_size(243) == 243);
  }
}
