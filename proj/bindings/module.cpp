// SPDX-License-Identifier: MIT
// Python bindings for the main library operations.  Thin wrappers: inputs
// are plain floats/strings/lists, outputs are dicts of floats and lists, so
// the module has no numpy dependency of its own.
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <vector>

#include "peridyn/assembly.hpp"
#include "peridyn/bench.hpp"
#include "peridyn/grid.hpp"
#include "peridyn/kernel.hpp"
#include "peridyn/nlops.hpp"
#include "peridyn/quadrature.hpp"
#include "peridyn/rk.hpp"
#include "peridyn/stencil.hpp"
#include "peridyn/symbols.hpp"

namespace py = pybind11;
using namespace peridyn;

namespace {

py::list matrix_to_list(const SymbolMatrix& s) {
  py::list rows;
  for (int i = 0; i < s.dim; ++i) {
    py::list row;
    for (int j = 0; j < s.dim; ++j) row.append(s.M[i][j]);
    rows.append(row);
  }
  return rows;
}

py::dict symbol_to_dict(const SymbolMatrix& s) {
  py::dict d;
  d["dim"] = s.dim;
  d["matrix"] = matrix_to_list(s);
  d["min_eig"] = s.min_eig();
  d["max_eig"] = s.max_eig();
  if (s.has_decomp) {
    d["transverse"] = s.transverse;
    d["longitudinal"] = s.longitudinal;
  }
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() =
      "Reproducing-kernel collocation for the linearized state-based "
      "peridynamic Navier equation: operators, Fourier symbols, quadrature "
      "weights, and the manufactured-solution harness.";

  py::register_exception<config_error>(m, "ConfigError");
  py::register_exception<numerical_error>(m, "NumericalError");

  m.def(
      "material",
      [](double e, double nu, int dim) {
        const Material mat = Material::from_enu(e, nu, dim);
        py::dict d;
        d["lambda"] = mat.lambda;
        d["mu"] = mat.mu;
        d["dim"] = mat.dim;
        d["c_alpha"] = mat.C_alpha;
        d["c_beta"] = mat.C_beta;
        d["lambda_ge_mu"] = mat.lambda_ge_mu();
        return d;
      },
      py::arg("e") = 1.0, py::arg("nu") = 0.4, py::arg("dim") = 2,
      "Plane-strain Lame parameters and operator constants from (E, nu).");

  m.def(
      "grid_info",
      [](double h_max, double delta, std::vector<double> h_hat) {
        Vec hh = make_vec(1.0, 0.5);
        for (size_t j = 0; j < h_hat.size() && j < 3; ++j) hh[j] = h_hat[j];
        const GridSpec g = build_grid(DomainBox{}, h_max, hh, delta);
        py::dict d;
        d["n"] = py::make_tuple(g.n[0], g.n[1]);
        d["h"] = py::make_tuple(g.h[0], g.h[1]);
        d["num_nodes"] = g.num_nodes;
        d["num_unknown"] = g.num_unknown;
        d["collar_lo"] = py::make_tuple(g.collar_lo[0], g.collar_lo[1]);
        d["collar_hi"] = py::make_tuple(g.collar_hi[0], g.collar_hi[1]);
        return d;
      },
      py::arg("h_max"), py::arg("delta"),
      py::arg("h_hat") = std::vector<double>{1.0, 0.5},
      "Node counts and extents of the collocation grid over the unit box.");

  m.def(
      "quadrature_weights",
      [](double eps1, int dim, bool include_swap) {
        WeightSolveOptions opt;
        opt.include_swap = include_swap;
        const QuadSet qs = solve_weights(
            generate_point_set(eps1, dim),
            RadialKernel{KernelProfile{}, 1.0, dim}, opt);
        py::list pts, ws;
        for (size_t n = 0; n < qs.points.size(); ++n) {
          py::list p;
          for (int j = 0; j < dim; ++j) p.append(qs.points[n][j]);
          pts.append(p);
          ws.append(qs.weights[n]);
        }
        py::dict d;
        d["points"] = pts;
        d["weights"] = ws;
        d["eps1"] = qs.eps1;
        return d;
      },
      py::arg("eps1") = 0.25, py::arg("dim") = 2,
      py::arg("include_swap") = false,
      "Moment-matched positive quadrature weights on the unit-ball lattice.");

  m.def(
      "navier_symbol",
      [](double xi1, double xi2, double delta, double e, double nu) {
        const Material mat = Material::from_enu(e, nu, 2);
        const ScalarSymbolEngine eng(KernelProfile{}, 2);
        return symbol_to_dict(
            navier_symbol(make_vec(xi1, xi2), delta, mat, 1.0, eng));
      },
      py::arg("xi1"), py::arg("xi2"), py::arg("delta") = 0.25,
      py::arg("e") = 1.0, py::arg("nu") = 0.4,
      "Continuous Fourier symbol of the peridynamic Navier operator.");

  m.def(
      "lattice_symbol",
      [](double xi1, double xi2, double delta, std::vector<double> h,
         const std::string& form, double e, double nu, double eps1) {
        const Material mat = Material::from_enu(e, nu, 2);
        Vec hv = make_vec(0.125, 0.0625);
        for (size_t j = 0; j < h.size() && j < 3; ++j) hv[j] = h[j];
        LatticeForm lf;
        if (form == "galerkin")
          lf = LatticeForm::Galerkin;
        else if (form == "collocation")
          lf = LatticeForm::Collocation;
        else if (form == "quasi")
          lf = LatticeForm::QuasiCollocation;
        else
          throw config_error("unknown lattice form: " + form +
                             " (want galerkin|collocation|quasi)");
        const KernelProfile prof;
        ScalarSymbolEngine eng =
            lf == LatticeForm::QuasiCollocation
                ? ScalarSymbolEngine(
                      prof, solve_weights(generate_point_set(eps1, 2),
                                          RadialKernel{prof, 1.0, 2}))
                : ScalarSymbolEngine(prof, 2);
        const LatticeEval ev = lattice_symbol_detail(
            make_vec(xi1, xi2), delta, hv, mat, 1.0, eng, lf);
        py::dict d = symbol_to_dict(ev.M);
        d["shells_used"] = ev.shells_used;
        d["converged"] = ev.converged;
        return d;
      },
      py::arg("xi1"), py::arg("xi2"), py::arg("delta") = 0.25,
      py::arg("h") = std::vector<double>{0.125, 0.0625},
      py::arg("form") = "collocation", py::arg("e") = 1.0,
      py::arg("nu") = 0.4, py::arg("eps1") = 0.25,
      "Aliased lattice symbol (Galerkin / collocation / quasi-collocation).");

  m.def(
      "solve_manufactured",
      [](double h_max, double delta, const std::string& solver) {
        const ManufacturedCase mc = ManufacturedCase::standard();
        const GridSpec grid =
            build_grid(DomainBox{}, h_max, make_vec(1.0, 0.5), delta);
        const RadialKernel kern{mc.profile, delta, 2};
        const BallScheme scheme = make_ball_scheme(kern, grid.h_min);
        AssemblyOptions opt;
        if (solver == "direct")
          opt.solver = AssemblyOptions::Solver::Direct;
        else if (solver == "iterative")
          opt.solver = AssemblyOptions::Solver::Iterative;
        else if (solver == "spectral")
          opt.solver = AssemblyOptions::Solver::Spectral;
        else if (solver != "auto")
          throw config_error("unknown solver: " + solver +
                             " (want auto|direct|iterative|spectral)");
        const Vec shift = mc.rhs_shift(delta);
        const SparseSystem sys = assemble(
            grid, scheme, mc.mat,
            [](const Vec& x) { return ManufacturedCase::exact_u(x); },
            [&](const Vec& x) {
              Vec f = mc.rhs_local(x);
              for (int c = 0; c < 2; ++c) f[c] += shift[c];
              return f;
            },
            opt);
        const auto [field, rep] = solve(sys, opt);
        py::dict d;
        d["dofs"] = sys.num_dofs;
        d["l2_error"] = l2_error(
            grid, field, [](const Vec& x) { return ManufacturedCase::exact_u(x); });
        d["method"] = rep.method;
        d["iterations"] = rep.iterations;
        d["rel_residual"] = rep.rel_residual;
        return d;
      },
      py::arg("h_max") = 0.125, py::arg("delta") = 0.25,
      py::arg("solver") = "auto",
      "Solve the manufactured nonlocal problem once; returns the nodal L2 "
      "error against the exact solution.");

  m.def(
      "convergence",
      [](const std::string& coupling, std::vector<double> ladder) {
        const ConvergenceRecord rec =
            run_convergence(parse_coupling(coupling), ladder, BenchConfig{});
        py::list rows;
        for (const ConvergenceRow& r : rec.rows) {
          py::dict row;
          row["h_max"] = r.h_max;
          row["delta"] = r.delta;
          row["eps1"] = r.eps1;
          row["dofs"] = r.dofs;
          row["l2_error"] = r.l2_error;
          row["rate"] = r.rate;
          rows.append(row);
        }
        py::dict d;
        d["coupling"] = coupling_name(rec.coupling);
        d["rows"] = rows;
        d["summary_rate"] = rec.summary_rate;
        return d;
      },
      py::arg("coupling") = "delta-eq-h",
      py::arg("ladder") = std::vector<double>{0.25, 0.125, 0.0625},
      "Manufactured-solution convergence ladder for one coupling.");

  m.def(
      "truncation",
      [](std::vector<double> ladder) {
        const TruncationRecord rec =
            truncation_study(ladder, TruncationConfig::manufactured());
        py::list rows;
        for (const TruncationRow& r : rec.rows) {
          py::dict row;
          row["h_max"] = r.h_max;
          row["fixed_delta_resid"] = r.fixed_delta_resid;
          row["local_resid"] = r.local_resid;
          row["quasi_resid"] = r.quasi_resid;
          rows.append(row);
        }
        py::dict d;
        d["rows"] = rows;
        d["summary_rate_fixed"] = rec.summary_rate_fixed;
        d["summary_rate_local"] = rec.summary_rate_local;
        d["summary_rate_quasi"] = rec.summary_rate_quasi;
        return d;
      },
      py::arg("ladder") = std::vector<double>{0.25, 0.125, 0.0625},
      "Truncation residual ladders for the three couplings.");

  m.def(
      "interpolate",
      [](double h_max, const std::function<double(double, double)>& f,
         double x1, double x2, int d1, int d2) {
        const GridSpec g =
            build_grid(DomainBox{}, h_max, make_vec(1.0, 0.5), 2.0 * h_max);
        std::vector<double> c(g.num_nodes);
        for (long id = 0; id < g.num_nodes; ++id) {
          const Vec x = g.coord(g.node_at(id));
          c[id] = f(x[0], x[1]);
        }
        return quasi_interpolant(g, c, make_vec(x1, x2), Index{d1, d2, 0});
      },
      py::arg("h_max"), py::arg("f"), py::arg("x1"), py::arg("x2"),
      py::arg("d1") = 0, py::arg("d2") = 0,
      "Sample f on the grid and evaluate the RK quasi-interpolant (or a "
      "derivative) at one point.");

  m.attr("__version__") = "0.1.0";
}
