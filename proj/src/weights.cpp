// SPDX-License-Identifier: MIT
// Quasi-discrete point-set generation and moment-matched weight solving.
#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <map>

#include "peridyn/kernel.hpp"
#include "peridyn/quadrature.hpp"

namespace peridyn {

std::vector<Vec> generate_point_set(double eps1, int dim) {
  if (!(eps1 > 0.0) || !(eps1 < 1.0))
    throw config_error("eps1 must lie in (0, 1)");
  const int kmax = static_cast<int>(std::floor(1.0 / eps1 + 1e-9));
  // |eps1 k| <= 1  <=>  |k|^2 <= (1/eps1)^2 (closed ball, tolerant of the
  // representation of 1/eps1).
  const double r2 = (1.0 / eps1) * (1.0 / eps1) * (1.0 + 1e-12);
  std::vector<Vec> pts;
  const int k3lo = dim == 3 ? -kmax : 0;
  const int k3hi = dim == 3 ? kmax : 0;
  for (int k1 = -kmax; k1 <= kmax; ++k1)
    for (int k2 = -kmax; k2 <= kmax; ++k2)
      for (int k3 = k3lo; k3 <= k3hi; ++k3) {
        if (k1 == 0 && k2 == 0 && k3 == 0) continue;
        const double n2 = double(k1) * k1 + double(k2) * k2 + double(k3) * k3;
        if (n2 <= r2)
          pts.push_back(make_vec(eps1 * k1, eps1 * k2, eps1 * k3));
      }
  if (pts.empty())
    throw config_error("empty-set: eps1 = " + format_g(eps1) +
                       " leaves no lattice points inside the unit ball");
  return pts;
}

namespace {

/// Canonical orbit key: sorted absolute indices (swap) or plain absolute
/// indices (sign flips only).  Points are eps1 * integer, so keys computed
/// from rounded |k| are exact.
std::array<int, 3> orbit_key(const Vec& p, double eps1, bool swap, int dim) {
  std::array<int, 3> key{};
  for (int j = 0; j < dim; ++j)
    key[j] = static_cast<int>(std::lround(std::abs(p[j]) / eps1));
  if (swap) std::sort(key.begin(), key.end(), std::greater<int>());
  return key;
}

}  // namespace

QuadSet solve_weights(const std::vector<Vec>& points, const RadialKernel& kernel,
                      const WeightSolveOptions& options) {
  if (points.empty()) throw config_error("solve_weights: empty point set");
  const int d = kernel.dim;

  // Central symmetry is a precondition; verify cheaply via orbit pairing.
  {
    std::map<std::array<long, 3>, long> seen;
    for (const auto& p : points) {
      std::array<long, 3> key{};
      for (int j = 0; j < d; ++j) key[j] = std::lround(p[j] * 1e12);
      seen[key] += 1;
    }
    for (const auto& p : points) {
      std::array<long, 3> neg{};
      for (int j = 0; j < d; ++j) neg[j] = std::lround(-p[j] * 1e12);
      if (seen.find(neg) == seen.end())
        throw config_error("solve_weights: point set is not centrally "
                           "symmetric");
    }
  }

  // Infer eps1 from the smallest nonzero coordinate magnitude.
  double eps1 = 0.0;
  for (const auto& p : points)
    for (int j = 0; j < d; ++j) {
      const double a = std::abs(p[j]);
      if (a > 1e-14 && (eps1 == 0.0 || a < eps1)) eps1 = a;
    }
  if (eps1 == 0.0) eps1 = 1.0;

  // Orbit reduction.
  std::map<std::array<int, 3>, int> orbit_of;
  std::vector<int> point_orbit(points.size());
  std::vector<double> orbit_count;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto key = orbit_key(points[i], eps1, options.include_swap, d);
    auto it = orbit_of.find(key);
    if (it == orbit_of.end()) {
      it = orbit_of.emplace(key, static_cast<int>(orbit_count.size())).first;
      orbit_count.push_back(0.0);
    }
    point_orbit[i] = it->second;
    orbit_count[it->second] += 1.0;
  }
  const int nv = static_cast<int>(orbit_count.size());

  // Distinct fourth-moment constraints (i <= j).
  std::vector<std::pair<int, int>> cons;
  for (int i = 0; i < d; ++i)
    for (int j = i; j < d; ++j) cons.emplace_back(i, j);
  const int nc = static_cast<int>(cons.size());

  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(nc, nv);
  for (std::size_t p = 0; p < points.size(); ++p) {
    const Vec& s = points[p];
    const double n2 = norm2(s, d);
    const double rho = kernel.profile.value(std::sqrt(n2));
    for (int r = 0; r < nc; ++r) {
      const auto [i, j] = cons[r];
      A(r, point_orbit[p]) += rho * s[i] * s[i] * s[j] * s[j] / n2;
    }
  }

  // Targets: continuous unit-ball moments (computed-m convention).
  RadialKernel unit = kernel;
  unit.delta = 1.0;
  const KernelMoments mom = compute_moments(unit);
  Eigen::VectorXd b(nc);
  for (int r = 0; r < nc; ++r) b(r) = mom.M4[cons[r].first][cons[r].second];

  // Equality-constrained least squares around the uniform reference weight
  // w0 = eps1^d:  min (w - w0)^T D (w - w0)  s.t.  A w = b, with D the
  // orbit sizes.  KKT: w = w0 + D^-1 A^T nu, (A D^-1 A^T) nu = b - A w0.
  const double w0 = std::pow(eps1, d);
  Eigen::VectorXd w0v = Eigen::VectorXd::Constant(nv, w0);
  Eigen::MatrixXd Dinv = Eigen::MatrixXd::Zero(nv, nv);
  for (int v = 0; v < nv; ++v) Dinv(v, v) = 1.0 / orbit_count[v];
  const Eigen::MatrixXd S = A * Dinv * A.transpose();
  const Eigen::VectorXd rhs = b - A * w0v;

  Eigen::FullPivLU<Eigen::MatrixXd> lu(S);
  lu.setThreshold(1e-12);
  Eigen::VectorXd nu;
  if (lu.rank() == nc) {
    nu = lu.solve(rhs);
  } else {
    // Rank-deficient: minimal-norm multiplier; consistency checked below.
    nu = S.completeOrthogonalDecomposition().solve(rhs);
  }
  Eigen::VectorXd w = w0v + Dinv * A.transpose() * nu;

  const double resid = (A * w - b).lpNorm<Eigen::Infinity>();
  if (!(resid <= options.constraint_tol) || !w.allFinite())
    throw numerical_error(
        "infeasible-constraints: fourth-moment residual " + format_g(resid) +
        " exceeds " + format_g(options.constraint_tol) +
        " (point set cannot match the kernel moments)");

  QuadSet qs;
  qs.dim = d;
  qs.eps1 = eps1;
  qs.points = points;
  qs.weights.resize(points.size());
  for (std::size_t p = 0; p < points.size(); ++p) {
    const double wp = w(point_orbit[p]);
    if (!(wp > 0.0))
      throw numerical_error("nonpositive-weight: orbit weight " +
                            format_g(wp) +
                            " violates strict positivity; refine eps1");
    qs.weights[p] = wp;
  }
  return qs;
}

}  // namespace peridyn
