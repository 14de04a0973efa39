// SPDX-License-Identifier: MIT
// Collocation system assembly (pure displacement form with volumetric
// Dirichlet constraints folded into the right-hand side) and the linear
// solvers: sparse direct, preconditioned BiCGSTAB, and the spectral
// stencil path for grids too large to assemble explicitly.
#pragma once

#include <Eigen/Sparse>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "peridyn/common.hpp"
#include "peridyn/fftconv.hpp"
#include "peridyn/grid.hpp"
#include "peridyn/nlops.hpp"
#include "peridyn/stencil.hpp"

namespace peridyn {

struct AssemblyOptions {
  enum class Solver { Auto, Direct, Iterative, Spectral };
  Solver solver = Solver::Auto;
  /// Auto: direct below this many scalar DOFs (the 2 delta-wide stencil
  /// makes fill-in near-dense, so direct stays confined to small systems).
  long direct_dof_limit = 2500;
  /// Auto: spectral (no explicit matrix) when the estimated explicit
  /// storage exceeds this budget.
  double explicit_budget_bytes = 1.0e9;
  double tol = 1e-10;  // relative residual for the iterative paths
};

/// Square sparse system over Unknown scalar DOFs, d per node, row/column
/// order (unknown node id, component).  Rows realize
///   -[L^S (trial expansion)]_i(x_j) = f_i(x_j),
/// with constrained-node contributions moved to the RHS.  On grids over the
/// explicit budget only the stencils and RHS are materialized and solves go
/// through the spectral path.
struct SparseSystem {
  const GridSpec* grid = nullptr;
  StencilSet stencils;
  long num_dofs = 0;
  bool matrix_built = false;
  Eigen::SparseMatrix<double, Eigen::RowMajor> A;
  std::vector<double> rhs;
  /// Prescribed values at constrained nodes (zero at unknowns); the solved
  /// coefficients are reattached onto this background.
  NodalField boundary_values;
  double assemble_seconds = 0.0;
};

struct SolveReport {
  std::string method;  // "sparse-lu" | "bicgstab" | "bicgstab-spectral"
  long iterations = 0;
  double rel_residual = 0.0;
  double wall_seconds = 0.0;
};

/// Assemble rows for all Unknown DOFs.  `boundary` supplies prescribed
/// displacement on every constrained node (collar and fringe); `rhs_fn` is
/// the body force f at collocation points.  Entry order and summation are
/// deterministic.  The explicit matrix is built unless options route the
/// system to the spectral path.
SparseSystem assemble(const GridSpec& grid, const BallScheme& scheme,
                      const Material& mat,
                      const std::function<Vec(const Vec&)>& boundary,
                      const std::function<Vec(const Vec&)>& rhs_fn,
                      const AssemblyOptions& options = {});

/// Solve and reattach constrained values: returns the full nodal coefficient
/// field (boundary data at constrained nodes, solved coefficients at
/// unknowns).  Throws numerical_error("singular-matrix ...") or
/// numerical_error("iterative-stagnation ...").
std::pair<NodalField, SolveReport> solve(const SparseSystem& sys,
                                         const AssemblyOptions& options = {});

/// || i^h(field) - exact ||_{L2(Omega)} by per-cell Gauss quadrature with 4
/// points per axis on the cells tiling Omega.
double l2_error(const GridSpec& grid, const NodalField& field,
                const std::function<Vec(const Vec&)>& exact);

/// Coordinate-format text export "row col value" (appends one line per
/// stored entry, deterministic order) for external inspection.
void export_coo(const SparseSystem& sys, std::ostream& os);

/// Matrix-shaped callable for the hand-rolled Krylov solver.
struct LinearOperator {
  long n = 0;
  std::function<void(const std::vector<double>&, std::vector<double>&)> apply;
};

struct KrylovResult {
  long iterations = 0;
  double rel_residual = 0.0;
  bool converged = false;
};

/// Preconditioned BiCGSTAB with deterministic recurrences; `precond` (may
/// be null) applies an approximate inverse.  Iteration cap per the solver
/// contract is 10 * n unless the caller lowers it.
KrylovResult bicgstab(const LinearOperator& A, const LinearOperator* precond,
                      const std::vector<double>& b, std::vector<double>& x,
                      double tol, long max_iter);

}  // namespace peridyn
