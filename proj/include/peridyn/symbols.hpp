// SPDX-License-Identifier: MIT
// Fourier symbols of the continuous, quasi-discrete, Galerkin, and
// collocation forms, and the positive-definiteness scans.
#pragma once

#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "peridyn/common.hpp"
#include "peridyn/kernel.hpp"
#include "peridyn/nlops.hpp"
#include "peridyn/quadrature.hpp"

namespace peridyn {

/// d x d real symmetric symbol matrix at one wave vector, with the
/// transverse/longitudinal decomposition when xi != 0.
struct SymbolMatrix {
  int dim = 2;
  double M[3][3] = {};
  bool has_decomp = false;
  double transverse = 0.0;
  double longitudinal = 0.0;

  double min_eig() const;
  double max_eig() const;
};

/// Scalar symbol functions of a unit-horizon kernel,
///   p1(r) = int_{B_1} rho(|s|) (s_1^2/|s|^2) (1 - cos(r s_d)) ds
///   q1(r) = same with s_d^2/|s|^2
///   b1(r) = int_{B_1} rho(|s|) s_d sin(r s_d) ds,
/// or their quasi-discrete finite-sum analogs on a QuadSet.
///
/// Continuous evaluation reduces the ball integral to a 1D chord-density
/// integral in w = s_d (closed-form densities for the inverse-distance and
/// constant profiles); small arguments use direct panel quadrature and
/// large arguments a uniformly spaced lazily grown table with local cubic
/// interpolation, so lattice sums with |r| in the thousands stay cheap.
class ScalarSymbolEngine {
 public:
  /// Continuous scalars.
  ScalarSymbolEngine(const KernelProfile& profile, int dim);
  /// Quasi-discrete scalars (finite cosine sums; exact at every r).
  ScalarSymbolEngine(const KernelProfile& profile, const QuadSet& qset);

  double p1(double r) const;
  double q1(double r) const;
  double b1(double r) const;

  /// Large-r mean level of p1 and q1 (they share it): continuous
  /// int rho s_1^2/|s|^2 = int rho s_d^2/|s|^2; quasi sum of the weights'
  /// cosine-free part.  The lattice-sum tail acceleration subtracts it.
  double saturation() const { return saturation_; }
  bool quasi() const { return quasi_; }
  int dim() const { return dim_; }
  const KernelProfile& profile() const { return profile_; }
  /// Quasi engines only: the generating point set.
  const QuadSet& point_set() const { return qset_; }

 private:
  struct Table;
  double eval(int which, double r) const;
  double direct_eval(int which, double r) const;

  KernelProfile profile_;
  int dim_ = 2;
  bool quasi_ = false;
  QuadSet qset_;
  double saturation_ = 0.0;
  mutable std::mutex mutex_;
  mutable std::shared_ptr<Table> table_;
};

enum class SymbolPath {
  Direct,      // d-dimensional quadrature/sum of the operator definition
  Decomposed,  // p (I - xh xh^T) + q xh xh^T and b^2 xh xh^T via scalars
};

/// Symbol of the peridynamic Navier operator at physical wave vector xi:
///   M^S = (C_alpha mu/m)[p_d (I - xh xh^T) + q_d xh xh^T]
///       + (C_beta d (lambda-mu)/m^2) b_d^2 xh xh^T,
/// where p_d = p1(delta |xi|)/delta^2 etc.  xi = 0 returns the zero matrix
/// without decomposition.  The Direct path integrates/sums the definition
/// independently of the scalar engine (cross-validation route).
SymbolMatrix navier_symbol(const Vec& xi, double delta, const Material& mat,
                           double m, const ScalarSymbolEngine& scalars,
                           SymbolPath path = SymbolPath::Decomposed);

enum class LatticeForm { Galerkin, Collocation, QuasiCollocation };

struct LatticeOptions {
  int max_shells = 64;
  double rel_tol = 1e-10;  // last-shell Frobenius vs accumulated
};

struct LatticeEval {
  SymbolMatrix M;
  int shells_used = 0;
  double last_rel = 0.0;
  bool converged = false;
};

/// Truncated lattice sum over r in Z^d of the aliased symbol.  Each
/// aliased branch carries the spline window
///   B_r(xi) = prod_j [2 sin(xi_j/2)]^4 / (xi_j + 2 pi r_j)^4.
/// The collocation forms weight the bond term by B_r and build the
/// dilatation term as the outer product of the B_r-weighted drift sum
/// with itself (two successive lattice quadratures); the Galerkin form
/// weights both terms by B_r^2 (test and trial branches pair up).
/// Shells max|r_j| = n are added until the assembled matrix's relative
/// Frobenius change falls below rel_tol.  The collocation bond term's
/// saturated tail is summed in closed form per axis
///   sum_r [2 sin(xi_j/2)]^4/(xi_j + 2 pi r_j)^4 = (2 + cos xi_j)/3
/// so only the decaying remainder is summed shell by shell.
/// lattice_symbol throws numerical_error("nonconvergent-sum ...") when the
/// shell cap is insufficient (the quasi-collocation form's oscillatory
/// bond tail can exceed any fixed cap at corner wave vectors);
/// lattice_symbol_detail reports the capped value instead of throwing.
LatticeEval lattice_symbol_detail(const Vec& xi, double delta, const Vec& h,
                                  const Material& mat, double m,
                                  const ScalarSymbolEngine& scalars,
                                  LatticeForm form,
                                  const LatticeOptions& options = {});

SymbolMatrix lattice_symbol(const Vec& xi, double delta, const Vec& h,
                            const Material& mat, double m,
                            const ScalarSymbolEngine& scalars, LatticeForm form,
                            const LatticeOptions& options = {});

struct ScanOptions {
  int grid_n = 33;          // uniform xi grid over (-pi, pi)^d, 0 excluded
  int radial_samples = 64;  // log-spaced |xi| samples per direction
  int radial_dirs = 8;
  std::vector<double> deltas = {0.25, 0.0625};  // M^S_delta scan horizons
  /// Lattice sweep pairs (delta, h); default set in stability_scan:
  /// delta/h_max = 2 with h_max in {1/8, 1/16, 1/32}, h_hat = (1, 1/2).
  std::vector<std::pair<double, Vec>> lattice_pairs;
  double eps1 = 0.25;  // quasi-collocation point set
  LatticeOptions lattice;
};

struct ScanReport {
  bool hypothesis_ok = true;  // lambda >= mu
  bool all_positive = true;

  struct ContinuousSummary {
    double delta = 0.0;
    double min_eig = 0.0;  // over all scanned xi != 0
    Vec argmin_xi{};
  };
  std::vector<ContinuousSummary> continuous;

  struct LatticeSummary {
    double delta = 0.0;
    Vec h{};
    double min_eig_galerkin = 0.0;
    double min_eig_collocation = 0.0;
    double min_eig_quasi = 0.0;
    double c_min = 0.0;  // min over xi of lambda_min(M_G^{-1} M_C)
    long nonconvergent = 0;  // quasi-form points hitting the shell cap
  };
  std::vector<LatticeSummary> lattice;

  /// Printed-vs-derived state constant (suspected typo in the source
  /// lemma's C_{lambda,mu}); both recorded, never silently chosen.
  double printed_state_constant = 0.0;   // C_beta (lambda - mu)
  double derived_state_constant = 0.0;   // C_beta (lambda - mu) / d
  std::vector<std::string> notes;

  struct Row {
    std::string form;  // "MS" | "MG" | "MC" | "MCeps" | "gen"
    double delta = 0.0;
    Vec h{};
    Vec xi{};
    double value = 0.0;  // min eigenvalue (or generalized min eigenvalue)
    bool converged = true;
  };
  std::vector<Row> rows;
};

/// Evaluate every scanned wave vector for every requested horizon/grid and
/// form; reports violations (and quasi-form nonconvergence) rather than
/// erroring -- this is a diagnostic tool.
ScanReport stability_scan(const Material& mat, const KernelProfile& profile,
                          const ScanOptions& options = {});

}  // namespace peridyn
