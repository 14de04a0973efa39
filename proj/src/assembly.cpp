// SPDX-License-Identifier: MIT
#include "peridyn/assembly.hpp"

#include <Eigen/SparseLU>
#include <chrono>
#include <cmath>
#include <ostream>

#include "peridyn/quadrature.hpp"
#include "peridyn/rk.hpp"

namespace peridyn {

namespace {

double now_seconds() {
  using clock = std::chrono::steady_clock;
  return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

/// Estimated bytes for the explicit CSR matrix (values + indices + build
/// scratch); the stencil spans d * box2 candidate columns per row, capped by
/// the system size.
double explicit_bytes_estimate(const GridSpec& grid, const StencilSet& st) {
  const long dofs = grid.num_unknown * grid.dim;
  double box2 = 1.0;
  for (int j = 0; j < grid.dim; ++j) box2 *= 2.0 * st.reach2[j] + 1.0;
  const double cols = std::min(static_cast<double>(dofs), grid.dim * box2);
  return 20.0 * static_cast<double>(dofs) * cols;
}

double norm2_vec(const std::vector<double>& v) {
  Kahan acc;
  for (double x : v) acc.add(x * x);
  return std::sqrt(std::max(0.0, acc.value()));
}

double dot_vec(const std::vector<double>& a, const std::vector<double>& b) {
  Kahan acc;
  for (size_t i = 0; i < a.size(); ++i) acc.add(a[i] * b[i]);
  return acc.value();
}

}  // namespace

SparseSystem assemble(const GridSpec& grid, const BallScheme& scheme,
                      const Material& mat,
                      const std::function<Vec(const Vec&)>& boundary,
                      const std::function<Vec(const Vec&)>& rhs_fn,
                      const AssemblyOptions& options) {
  const double t0 = now_seconds();
  const int d = grid.dim;
  SparseSystem sys;
  sys.grid = &grid;
  sys.num_dofs = grid.num_unknown * d;
  sys.stencils = build_stencils(grid, scheme, mat);
  const StencilSet& st = sys.stencils;

  bool spectral = options.solver == AssemblyOptions::Solver::Spectral;
  if (options.solver == AssemblyOptions::Solver::Auto && d == 2 &&
      explicit_bytes_estimate(grid, st) > options.explicit_budget_bytes)
    spectral = true;
  sys.matrix_built = !spectral;

  // Prescribed data on constrained nodes; zero at unknowns.
  sys.boundary_values = NodalField(grid.num_nodes, d);
  for (long id = 0; id < grid.num_nodes; ++id) {
    if (grid.node_class[id] != NodeClass::Constrained) continue;
    const Vec g = boundary(grid.coord(grid.node_at(id)));
    for (int i = 0; i < d; ++i) sys.boundary_values.at(id, i) = g[i];
  }

  // RHS: f at the collocation point plus the folded constrained
  // contribution [L g_ext] from one operator application.
  NodalField lg(grid.num_nodes, d);
  if (spectral) {
    SpectralOp op(grid, st);
    op.apply(sys.boundary_values, lg);
  } else {
    stencil_apply(grid, st, sys.boundary_values, lg);
  }
  sys.rhs.assign(sys.num_dofs, 0.0);
  for (long u = 0; u < grid.num_unknown; ++u) {
    const long id = grid.unknown_nodes[u];
    const Vec f = rhs_fn(grid.coord(grid.node_at(id)));
    for (int i = 0; i < d; ++i) sys.rhs[u * d + i] = f[i] + lg.at(id, i);
  }

  if (!spectral) {
    compose_state(sys.stencils);
    std::vector<Eigen::Triplet<double>> trip;
    {
      double box2 = 1.0;
      for (int j = 0; j < d; ++j) box2 *= 2.0 * st.reach2[j] + 1.0;
      const double cols =
          std::min(static_cast<double>(sys.num_dofs), d * box2);
      trip.reserve(static_cast<size_t>(
          std::min(1.6e8, cols * static_cast<double>(sys.num_dofs))));
    }
    const int z2 = d > 2 ? st.reach2[2] : 0;
    for (long u = 0; u < grid.num_unknown; ++u) {
      const Index k = grid.node_at(grid.unknown_nodes[u]);
      Index o{};
      for (o[0] = -st.reach2[0]; o[0] <= st.reach2[0]; ++o[0])
        for (o[1] = -st.reach2[1]; o[1] <= st.reach2[1]; ++o[1])
          for (o[2] = -z2; o[2] <= z2; ++o[2]) {
            Index kk{};
            for (int j = 0; j < d; ++j) kk[j] = k[j] + o[j];
            if (!grid.in_range(kk)) continue;
            const long col_node = grid.node_id(kk);
            const long cslot = grid.unknown_slot[col_node];
            if (cslot < 0) continue;  // constrained: folded into the RHS
            bool in_r = true;
            for (int j = 0; j < d; ++j)
              if (o[j] < -st.reach[j] || o[j] > st.reach[j]) in_r = false;
            const long s1 = in_r ? st.slot(o, st.reach) : -1;
            const long s2 = st.slot(o, st.reach2);
            for (int i = 0; i < d; ++i)
              for (int c = 0; c < d; ++c) {
                double v = st.c_state * st.state[i][c][s2];
                if (in_r) v += st.c_bond * st.bond[i][c][s1];
                if (v == 0.0) continue;
                trip.emplace_back(static_cast<int>(u * d + i),
                                  static_cast<int>(cslot * d + c), -v);
              }
          }
    }
    sys.A.resize(sys.num_dofs, sys.num_dofs);
    sys.A.setFromTriplets(trip.begin(), trip.end());
    sys.A.makeCompressed();
  }
  sys.assemble_seconds = now_seconds() - t0;
  return sys;
}

KrylovResult bicgstab(const LinearOperator& A, const LinearOperator* precond,
                      const std::vector<double>& b, std::vector<double>& x,
                      double tol, long max_iter) {
  const long n = A.n;
  x.assign(n, 0.0);
  std::vector<double> r = b, rhat = b, p(n, 0.0), v(n, 0.0);
  std::vector<double> phat(n), s(n), shat(n), t(n), xh(n), ax(n);
  const double bnorm = norm2_vec(b);
  KrylovResult res;
  if (bnorm == 0.0) {
    res.converged = true;
    return res;
  }
  // Convergence is certified on the true residual b - A x, not the recursive
  // one: the recursion keeps shrinking below attainable accuracy, so gating on
  // it alone would accept tolerances the computed iterate never satisfies.
  auto true_rel = [&](const std::vector<double>& xc) {
    A.apply(xc, ax);
    double acc = 0.0;
    for (long i = 0; i < n; ++i) {
      const double d = b[i] - ax[i];
      acc += d * d;
    }
    return std::sqrt(acc) / bnorm;
  };
  double rho = 1.0, alpha = 1.0, omega = 1.0;
  double rnorm = bnorm;
  for (long it = 1; it <= max_iter; ++it) {
    const double rho_new = dot_vec(rhat, r);
    if (rho_new == 0.0) break;
    if (it == 1) {
      p = r;
    } else {
      const double beta = (rho_new / rho) * (alpha / omega);
      for (long i = 0; i < n; ++i) p[i] = r[i] + beta * (p[i] - omega * v[i]);
    }
    if (precond != nullptr)
      precond->apply(p, phat);
    else
      phat = p;
    A.apply(phat, v);
    const double rv = dot_vec(rhat, v);
    if (rv == 0.0) break;
    alpha = rho_new / rv;
    for (long i = 0; i < n; ++i) s[i] = r[i] - alpha * v[i];
    res.iterations = it;
    const double snorm = norm2_vec(s);
    if (snorm / bnorm <= tol) {
      for (long i = 0; i < n; ++i) xh[i] = x[i] + alpha * phat[i];
      const double tr = true_rel(xh);
      if (tr <= tol) {
        x = xh;
        res.rel_residual = tr;
        res.converged = true;
        return res;
      }
    }
    if (precond != nullptr)
      precond->apply(s, shat);
    else
      shat = s;
    A.apply(shat, t);
    const double tt = dot_vec(t, t);
    if (tt == 0.0) break;
    omega = dot_vec(t, s) / tt;
    for (long i = 0; i < n; ++i) {
      x[i] += alpha * phat[i] + omega * shat[i];
      r[i] = s[i] - omega * t[i];
    }
    rnorm = norm2_vec(r);
    res.rel_residual = rnorm / bnorm;
    if (rnorm / bnorm <= tol) {
      const double tr = true_rel(x);
      if (tr <= tol) {
        res.rel_residual = tr;
        res.converged = true;
        return res;
      }
    }
    if (omega == 0.0) break;
    rho = rho_new;
  }
  res.rel_residual = true_rel(x);
  return res;
}

std::pair<NodalField, SolveReport> solve(const SparseSystem& sys,
                                         const AssemblyOptions& options) {
  const double t0 = now_seconds();
  const GridSpec& grid = *sys.grid;
  const int d = grid.dim;
  const long n = sys.num_dofs;
  SolveReport report;
  std::vector<double> x(n, 0.0);

  AssemblyOptions::Solver method = options.solver;
  if (method == AssemblyOptions::Solver::Auto) {
    if (!sys.matrix_built)
      method = AssemblyOptions::Solver::Spectral;
    else if (n <= options.direct_dof_limit)
      method = AssemblyOptions::Solver::Direct;
    else
      method = AssemblyOptions::Solver::Iterative;
  }
  if (method != AssemblyOptions::Solver::Spectral && !sys.matrix_built)
    throw config_error("solve: explicit matrix was not assembled");

  if (method == AssemblyOptions::Solver::Direct) {
    report.method = "sparse-lu";
    Eigen::SparseMatrix<double> acol = sys.A;
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    lu.analyzePattern(acol);
    lu.factorize(acol);
    if (lu.info() != Eigen::Success)
      throw numerical_error("singular-matrix: sparse LU factorization failed");
    Eigen::Map<const Eigen::VectorXd> bmap(sys.rhs.data(), n);
    Eigen::VectorXd sol = lu.solve(bmap);
    if (lu.info() != Eigen::Success)
      throw numerical_error("singular-matrix: sparse LU solve failed");
    for (long i = 0; i < n; ++i) x[i] = sol[i];
    const double rnorm = (sys.A * sol - bmap).norm();
    const double bnorm = bmap.norm();
    report.rel_residual = bnorm > 0.0 ? rnorm / bnorm : rnorm;
  } else if (method == AssemblyOptions::Solver::Iterative) {
    report.method = "bicgstab";
    std::vector<double> diag(n, 1.0);
    for (long r = 0; r < n; ++r)
      for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(
               sys.A, r);
           it; ++it)
        if (it.col() == r && it.value() != 0.0) diag[r] = it.value();
    LinearOperator A{n, [&](const std::vector<double>& in,
                            std::vector<double>& out) {
                       Eigen::Map<const Eigen::VectorXd> vi(in.data(), n);
                       Eigen::VectorXd vo = sys.A * vi;
                       out.assign(vo.data(), vo.data() + n);
                     }};
    LinearOperator M{n, [&](const std::vector<double>& in,
                            std::vector<double>& out) {
                       out.resize(in.size());
                       for (long i = 0; i < n; ++i) out[i] = in[i] / diag[i];
                     }};
    const KrylovResult kr = bicgstab(A, &M, sys.rhs, x, options.tol, 10 * n);
    report.iterations = kr.iterations;
    report.rel_residual = kr.rel_residual;
    if (!kr.converged)
      throw numerical_error(
          "iterative-stagnation: bicgstab did not reach tolerance " +
          format_g(options.tol) + " (relative residual " +
          format_g(kr.rel_residual) + ")");
  } else {
    report.method = "bicgstab-spectral";
    SpectralOp op(grid, sys.stencils);
    CirculantPrecond pc(grid, sys.stencils);
    NodalField uin(grid.num_nodes, d), uout(grid.num_nodes, d);
    LinearOperator A{n, [&](const std::vector<double>& in,
                            std::vector<double>& out) {
                       std::fill(uin.data.begin(), uin.data.end(), 0.0);
                       for (long u = 0; u < grid.num_unknown; ++u) {
                         const long id = grid.unknown_nodes[u];
                         for (int c = 0; c < d; ++c)
                           uin.at(id, c) = in[u * d + c];
                       }
                       op.apply(uin, uout);
                       out.resize(n);
                       for (long u = 0; u < grid.num_unknown; ++u) {
                         const long id = grid.unknown_nodes[u];
                         for (int i = 0; i < d; ++i)
                           out[u * d + i] = -uout.at(id, i);
                       }
                     }};
    LinearOperator M{n, [&](const std::vector<double>& in,
                            std::vector<double>& out) { pc.apply(in, out); }};
    const KrylovResult kr = bicgstab(A, &M, sys.rhs, x, options.tol, 10 * n);
    report.iterations = kr.iterations;
    report.rel_residual = kr.rel_residual;
    if (!kr.converged)
      throw numerical_error(
          "iterative-stagnation: spectral bicgstab did not reach tolerance " +
          format_g(options.tol) + " (relative residual " +
          format_g(kr.rel_residual) + ")");
  }

  NodalField field = sys.boundary_values;
  for (long u = 0; u < grid.num_unknown; ++u) {
    const long id = grid.unknown_nodes[u];
    for (int i = 0; i < d; ++i) field.at(id, i) = x[u * d + i];
  }
  report.wall_seconds = now_seconds() - t0;
  return {std::move(field), report};
}

double l2_error(const GridSpec& grid, const NodalField& field,
                const std::function<Vec(const Vec&)>& exact) {
  const int d = grid.dim;
  const GaussRule& gr = gauss_legendre(4);
  // Cell ranges per axis, clipped to the domain.
  int a_lo[3] = {0, 0, 0}, a_hi[3] = {-1, -1, -1};
  for (int j = 0; j < d; ++j) {
    a_lo[j] = static_cast<int>(
        std::floor(grid.domain.lo[j] / grid.h[j] + 1e-12));
    a_hi[j] = static_cast<int>(
        std::ceil(grid.domain.hi[j] / grid.h[j] - 1e-12)) - 1;
  }
  Kahan acc;
  auto cell_edges = [&](int j, int a, double& lo, double& hi) {
    lo = std::max(grid.domain.lo[j], a * grid.h[j]);
    hi = std::min(grid.domain.hi[j], (a + 1) * grid.h[j]);
  };
  const int zlo = d > 2 ? a_lo[2] : 0, zhi = d > 2 ? a_hi[2] : 0;
  for (int a0 = a_lo[0]; a0 <= a_hi[0]; ++a0)
    for (int a1 = a_lo[1]; a1 <= a_hi[1]; ++a1)
      for (int a2 = zlo; a2 <= zhi; ++a2) {
        double lo[3], hi[3];
        cell_edges(0, a0, lo[0], hi[0]);
        cell_edges(1, a1, lo[1], hi[1]);
        if (d > 2) cell_edges(2, a2, lo[2], hi[2]);
        bool empty = false;
        for (int j = 0; j < d; ++j)
          if (hi[j] <= lo[j]) empty = true;
        if (empty) continue;
        const int nq = static_cast<int>(gr.nodes.size());
        const int q2 = d > 2 ? nq : 1;
        for (int i0 = 0; i0 < nq; ++i0)
          for (int i1 = 0; i1 < nq; ++i1)
            for (int i2 = 0; i2 < q2; ++i2) {
              Vec xq{};
              double w = 1.0;
              const int qq[3] = {i0, i1, i2};
              for (int j = 0; j < d; ++j) {
                const double half = 0.5 * (hi[j] - lo[j]);
                xq[j] = 0.5 * (lo[j] + hi[j]) + half * gr.nodes[qq[j]];
                w *= half * gr.weights[qq[j]];
              }
              const Vec ue = exact(xq);
              double e2 = 0.0;
              for (int c = 0; c < d; ++c) {
                const double uh =
                    quasi_interpolant(grid, field, c, xq, {}, Extension::Error);
                e2 += (uh - ue[c]) * (uh - ue[c]);
              }
              acc.add(w * e2);
            }
      }
  return std::sqrt(std::max(0.0, acc.value()));
}

void export_coo(const SparseSystem& sys, std::ostream& os) {
  if (!sys.matrix_built)
    throw config_error("export_coo: explicit matrix was not assembled");
  for (long r = 0; r < sys.num_dofs; ++r)
    for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(sys.A,
                                                                        r);
         it; ++it)
      os << r << ' ' << it.col() << ' ' << format_g(it.value()) << '\n';
}

}  // namespace peridyn
