// SPDX-License-Identifier: MIT
#include "peridyn/symbols.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cfloat>
#include <cmath>

namespace peridyn {

namespace {

constexpr double kPi = 3.14159265358979323846;

/// Slice densities of the unit-ball kernel integrals at fixed last
/// coordinate w in (0, 1):
///   P(w) = int_slice rho(|s|) s_1^2/|s|^2,   Q(w) = same with s_d^2,
///   R(w) = int_slice rho(|s|),
/// so that p1(r) = int_-1^1 (1 - cos(r w)) P(w) dw etc.  They satisfy
/// (d-1) P + Q = R.
struct Chord {
  double P = 0.0, Q = 0.0, R = 0.0;
};

Chord chord_density(const KernelProfile& prof, int dim, double w) {
  Chord ch;
  const double L = std::sqrt(std::max(0.0, 1.0 - w * w));
  switch (prof.kind) {
    case KernelProfile::Kind::InverseDistance:
      if (dim == 2) {
        const double lg = std::log((1.0 + L) / w);
        ch.P = 2.0 * prof.c * (lg - L);
        ch.Q = 2.0 * prof.c * L;
        ch.R = 2.0 * prof.c * lg;
      } else {
        ch.P = kPi * prof.c * (1.0 - w) * (1.0 - w);
        ch.Q = 2.0 * kPi * prof.c * w * (1.0 - w);
        ch.R = 2.0 * kPi * prof.c * (1.0 - w);
      }
      break;
    case KernelProfile::Kind::Constant:
      if (dim == 2) {
        const double at = std::atan2(L, w);
        ch.P = 2.0 * prof.c * (L - w * at);
        ch.Q = 2.0 * prof.c * w * at;
        ch.R = 2.0 * prof.c * L;
      } else {
        const double lw = std::log(w);
        ch.P = kPi * prof.c * (0.5 * L * L + w * w * lw);
        ch.Q = -2.0 * kPi * prof.c * w * w * lw;
        ch.R = kPi * prof.c * L * L;
      }
      break;
    case KernelProfile::Kind::Polynomial: {
      const GaussRule& g = gauss_legendre(16);
      Kahan accP, accQ, accR;
      for (size_t i = 0; i < g.nodes.size(); ++i) {
        const double s = 0.5 * L * (1.0 + g.nodes[i]);
        const double gw = 0.5 * L * g.weights[i];
        const double rr = std::sqrt(s * s + w * w);
        const double rho = prof.value(rr);
        if (dim == 2) {
          // Line slice, both signs of s_1.
          accP.add(2.0 * gw * rho * s * s / (rr * rr));
          accQ.add(2.0 * gw * rho * w * w / (rr * rr));
          accR.add(2.0 * gw * rho);
        } else {
          // Disc slice of radius L; angular average of s_1^2 is s^2/2.
          accP.add(kPi * gw * rho * s * s * s / (rr * rr));
          accQ.add(2.0 * kPi * gw * rho * s * w * w / (rr * rr));
          accR.add(2.0 * kPi * gw * rho * s);
        }
      }
      ch.P = accP.value();
      ch.Q = accQ.value();
      ch.R = accR.value();
      break;
    }
  }
  return ch;
}

/// All three scalars at once by panelwise Gauss over w in [0, 1]:
/// geometric panels toward the w = 0 log singularity and phase-limited
/// subpanels for the oscillation, 10 Gauss points each.
std::array<double, 3> chord_integrate(const KernelProfile& prof, int dim,
                                      double r) {
  const GaussRule& g = gauss_legendre(10);
  Kahan acc[3];
  // Dyadic refinement toward both endpoints: w -> 0 has the logarithmic
  // kernel singularity, w -> 1 the sqrt(1-w^2) chord-length edge.
  std::vector<double> brk;
  brk.push_back(1.0);
  for (int k = 40; k >= 2; --k) brk.push_back(1.0 - std::ldexp(1.0, -k));
  for (int k = 1; k <= 40; ++k) brk.push_back(std::ldexp(1.0, -k));
  brk.push_back(0.0);
  for (size_t i = 0; i + 1 < brk.size(); ++i) {
    const double hi = brk[i], lo = brk[i + 1];
    const long nsub = std::max<long>(
        1, static_cast<long>(std::ceil(std::abs(r) * (hi - lo) / 2.5)));
    for (long sp = 0; sp < nsub; ++sp) {
      const double a = lo + (hi - lo) * static_cast<double>(sp) / nsub;
      const double b = lo + (hi - lo) * static_cast<double>(sp + 1) / nsub;
      const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
      for (size_t q = 0; q < g.nodes.size(); ++q) {
        const double w = mid + half * g.nodes[q];
        if (w <= 0.0 || w >= 1.0) continue;
        const double gw = half * g.weights[q];
        const Chord ch = chord_density(prof, dim, w);
        const double cw = std::cos(r * w), sw = std::sin(r * w);
        acc[0].add(gw * 2.0 * (1.0 - cw) * ch.P);
        acc[1].add(gw * 2.0 * (1.0 - cw) * ch.Q);
        acc[2].add(gw * 2.0 * sw * w * ch.R);
      }
    }
  }
  return {acc[0].value(), acc[1].value(), acc[2].value()};
}

double frobenius(const double M[3][3], int d) {
  double s = 0.0;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) s += M[i][j] * M[i][j];
  return std::sqrt(s);
}

}  // namespace

struct ScalarSymbolEngine::Table {
  // Continuous large-argument table: values (p1, q1, b1) at r = idx * dr.
  double dr = 0.02;
  long base = 95;  // first stored index (r = 1.9, below the direct cut)
  std::vector<std::array<double, 3>> vals;
  std::vector<char> built;
  double memo_r = -1.0;
  std::array<double, 3> memo_v = {0.0, 0.0, 0.0};
  // Quasi-discrete cosine sums: distinct |t_d| levels and their
  // coefficients (cp, cq, cb).
  std::vector<double> levels;
  std::vector<std::array<double, 3>> coef;
};

ScalarSymbolEngine::ScalarSymbolEngine(const KernelProfile& profile, int dim)
    : profile_(profile), dim_(dim), quasi_(false) {
  if (dim != 2 && dim != 3)
    throw config_error("ScalarSymbolEngine: dim must be 2 or 3");
  const double surface = dim == 2 ? 2.0 * kPi : 4.0 * kPi;
  saturation_ = surface / dim * profile.radial_moment(dim - 1);
  table_ = std::make_shared<Table>();
}

ScalarSymbolEngine::ScalarSymbolEngine(const KernelProfile& profile,
                                       const QuadSet& qset)
    : profile_(profile), dim_(qset.dim), quasi_(true), qset_(qset) {
  table_ = std::make_shared<Table>();
  const int d = dim_;
  const long kmax = std::lround(1.0 / qset.eps1);
  table_->levels.resize(kmax + 1);
  table_->coef.assign(kmax + 1, {0.0, 0.0, 0.0});
  for (long k = 0; k <= kmax; ++k) table_->levels[k] = k * qset.eps1;
  Kahan sat;
  for (size_t i = 0; i < qset_.points.size(); ++i) {
    const Vec& t = qset_.points[i];
    const double tn2 = norm2(t, d);
    const double wr = qset_.weights[i] * profile.value(std::sqrt(tn2));
    const double td = t[d - 1];
    const long vi = std::lround(std::abs(td) / qset.eps1);
    table_->coef[vi][0] += wr * t[0] * t[0] / tn2;
    table_->coef[vi][1] += wr * td * td / tn2;
    table_->coef[vi][2] += wr * std::abs(td);
    sat.add(wr * td * td / tn2);
  }
  saturation_ = sat.value();
}

double ScalarSymbolEngine::direct_eval(int which, double r) const {
  return chord_integrate(profile_, dim_, r)[which];
}

double ScalarSymbolEngine::eval(int which, double r) const {
  const double a = std::abs(r);
  if (a == 0.0) return 0.0;
  const double sign = (which == 2 && r < 0.0) ? -1.0 : 1.0;

  if (quasi_) {
    const Table& tab = *table_;
    Kahan acc;
    for (size_t v = 1; v < tab.levels.size(); ++v) {
      const double lv = tab.levels[v];
      if (which == 2)
        acc.add(tab.coef[v][2] * std::sin(a * lv));
      else
        acc.add(tab.coef[v][which] * (1.0 - std::cos(a * lv)));
    }
    return sign * acc.value();
  }

  std::lock_guard<std::mutex> lock(mutex_);
  Table& tab = *table_;
  if (tab.memo_r == a) return sign * tab.memo_v[which];
  std::array<double, 3> v{};
  if (a <= 2.0) {
    v = chord_integrate(profile_, dim_, a);
  } else {
    // 6-point Lagrange on the dr-spaced table: with dr = 0.02 and the
    // integrands' unit-bounded r-derivatives the interpolation error stays
    // below ~1e-11, preserving the direct-vs-decomposed cross-check.
    const long i0 = static_cast<long>(std::floor(a / tab.dr)) - 2;
    const long need = i0 + 6 - tab.base;
    if (static_cast<long>(tab.vals.size()) < need) {
      tab.vals.resize(need);
      tab.built.resize(need, 0);
    }
    for (long i = i0; i < i0 + 6; ++i) {
      if (!tab.built[i - tab.base]) {
        tab.vals[i - tab.base] = chord_integrate(profile_, dim_, i * tab.dr);
        tab.built[i - tab.base] = 1;
      }
    }
    const double t = a / tab.dr - static_cast<double>(i0);
    double lag[6];
    for (int k = 0; k < 6; ++k) {
      double num = 1.0, den = 1.0;
      for (int j = 0; j < 6; ++j) {
        if (j == k) continue;
        num *= t - static_cast<double>(j);
        den *= static_cast<double>(k - j);
      }
      lag[k] = num / den;
    }
    for (int c = 0; c < 3; ++c) {
      double s = 0.0;
      for (int k = 0; k < 6; ++k) s += lag[k] * tab.vals[i0 + k - tab.base][c];
      v[c] = s;
    }
  }
  tab.memo_r = a;
  tab.memo_v = v;
  return sign * v[which];
}

double ScalarSymbolEngine::p1(double r) const { return eval(0, r); }
double ScalarSymbolEngine::q1(double r) const { return eval(1, r); }
double ScalarSymbolEngine::b1(double r) const { return eval(2, r); }

double SymbolMatrix::min_eig() const {
  if (dim == 2) {
    const double a = M[0][0], b = M[0][1], c = M[1][1];
    return 0.5 * (a + c) -
           std::sqrt(0.25 * (a - c) * (a - c) + b * b);
  }
  Eigen::Matrix3d A;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) A(i, j) = M[i][j];
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(A);
  return es.eigenvalues()(0);
}

double SymbolMatrix::max_eig() const {
  if (dim == 2) {
    const double a = M[0][0], b = M[0][1], c = M[1][1];
    return 0.5 * (a + c) +
           std::sqrt(0.25 * (a - c) * (a - c) + b * b);
  }
  Eigen::Matrix3d A;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) A(i, j) = M[i][j];
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(A);
  return es.eigenvalues()(2);
}

SymbolMatrix navier_symbol(const Vec& xi, double delta, const Material& mat,
                           double m, const ScalarSymbolEngine& scalars,
                           SymbolPath path) {
  const int d = scalars.dim();
  SymbolMatrix out;
  out.dim = d;
  const double xin = norm(xi, d);
  if (xin == 0.0) return out;
  const double cb = mat.c_bond(m), cs = mat.c_state(m);

  if (path == SymbolPath::Decomposed) {
    const double r = delta * xin;
    const double pd = scalars.p1(r) / (delta * delta);
    const double qd = scalars.q1(r) / (delta * delta);
    const double bd = scalars.b1(r) / delta;
    out.transverse = cb * pd;
    out.longitudinal = cb * qd + cs * bd * bd;
    out.has_decomp = true;
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        const double pij = (xi[i] / xin) * (xi[j] / xin);
        out.M[i][j] =
            out.transverse * ((i == j ? 1.0 : 0.0) - pij) +
            out.longitudinal * pij;
      }
    return out;
  }

  // Direct: quadrature/sum of the operator definition, independent of the
  // scalar reduction.
  double bmat[3][3] = {};
  double v[3] = {};
  if (!scalars.quasi()) {
    RadialKernel kern{scalars.profile(), delta, d};
    const double r = delta * xin;
    PolarRule rule;
    rule.radial_panels = std::max(8, static_cast<int>(std::ceil(2.0 * r)));
    rule.radial_order = 8;
    rule.angular_panels = std::max(16, static_cast<int>(std::ceil(2.0 * r)));
    rule.angular_order = 8;
    rule.polar_panels = std::max(4, static_cast<int>(std::ceil(r)));
    rule.polar_order = 8;
    const int nc = d * d + d;
    const std::vector<double> vals =
        integrate_ball(rule, kern, nc, [&](const Vec& s, double* slot) {
          const double ph = dot(xi, s, d);
          const double omc = 1.0 - std::cos(ph), sn = std::sin(ph);
          const double n2 = norm2(s, d);
          for (int i = 0; i < d; ++i) {
            for (int j = 0; j < d; ++j)
              slot[i * d + j] = s[i] * s[j] / n2 * omc;
            slot[d * d + i] = s[i] * sn;
          }
        });
    for (int i = 0; i < d; ++i) {
      for (int j = 0; j < d; ++j) bmat[i][j] = vals[i * d + j];
      v[i] = vals[d * d + i];
    }
  } else {
    const QuadSet& qs = scalars.point_set();
    const double inv2 = 1.0 / (delta * delta);
    Kahan accB[3][3], accv[3];
    for (size_t n = 0; n < qs.points.size(); ++n) {
      const Vec& t = qs.points[n];
      const double tn2 = norm2(t, d);
      const double wr =
          qs.weights[n] * scalars.profile().value(std::sqrt(tn2)) * inv2;
      const double ph = delta * dot(xi, t, d);
      const double omc = 1.0 - std::cos(ph), sn = std::sin(ph);
      for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j)
          accB[i][j].add(wr * t[i] * t[j] / tn2 * omc);
        accv[i].add(wr * delta * t[i] * sn);
      }
    }
    for (int i = 0; i < d; ++i) {
      for (int j = 0; j < d; ++j) bmat[i][j] = accB[i][j].value();
      v[i] = accv[i].value();
    }
  }
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      out.M[i][j] = cb * bmat[i][j] + cs * v[i] * v[j];
  out.has_decomp = true;
  double lon = 0.0, tr = 0.0;
  for (int i = 0; i < d; ++i) {
    tr += out.M[i][i];
    for (int j = 0; j < d; ++j)
      lon += (xi[i] / xin) * out.M[i][j] * (xi[j] / xin);
  }
  out.longitudinal = lon;
  out.transverse = (tr - lon) / (d - 1);
  return out;
}

LatticeEval lattice_symbol_detail(const Vec& xi, double delta, const Vec& h,
                                  const Material& mat, double m,
                                  const ScalarSymbolEngine& scalars,
                                  LatticeForm form,
                                  const LatticeOptions& options) {
  const int d = scalars.dim();
  if ((form == LatticeForm::QuasiCollocation) != scalars.quasi())
    throw config_error(
        "lattice_symbol: quasi-collocation form needs the quasi scalar "
        "engine (and vice versa)");
  const double cb = mat.c_bond(m), cs = mat.c_state(m);
  // Window of the cubic spline: B_r(xi) = prod_j [2 sin(xi_j/2)]^4 / den_j^4
  // with den_j = xi_j + 2 pi r_j, so B_0 -> 1 as xi -> 0 and B_r -> 0 for
  // r != 0.  The collocation operator carries one window per aliased branch;
  // the Galerkin form (test and trial both splines) carries B_r^2.  The
  // dilatation route is two successive lattice quadratures, so its collocated
  // symbol is the outer product of one aliased drift sum with itself, while
  // the Galerkin form collapses to a single B_r^2-weighted sum of products
  // (branches of test and trial pair up in the inner product).
  const bool galerkin = (form == LatticeForm::Galerkin);
  const bool accel = !galerkin;
  const double sat_d = scalars.saturation() / (delta * delta);
  double vol = 1.0;
  for (int j = 0; j < d; ++j) vol *= h[j];

  LatticeEval ev;
  ev.M.dim = d;
  Kahan bond_acc[3][3], state_acc[3][3], drift_acc[3];
  if (accel) {
    // Saturated bond tail in closed form:
    //   sum_{r in Z} [2 sin(xi_j/2)]^4 / (xi_j + 2 pi r)^4 = (2 + cos xi_j)/3
    // per axis (partition identity of the spline window).
    double mass = vol;
    for (int j = 0; j < d; ++j) mass *= (2.0 + std::cos(xi[j])) / 3.0;
    for (int i = 0; i < d; ++i) bond_acc[i][i].add(cb * sat_d * mass);
  }

  auto add_point = [&](const Index& rv) {
    Vec zeta{};
    double win = 1.0;
    for (int j = 0; j < d; ++j) {
      const double den = xi[j] + 2.0 * kPi * rv[j];
      zeta[j] = den / h[j];
      double t;
      if (rv[j] == 0 && xi[j] == 0.0)
        t = 0.5;
      else
        t = std::sin(0.5 * xi[j]) / den;
      const double t2 = t * t;
      win *= 16.0 * t2 * t2;
    }
    const double zn = norm(zeta, d);
    if (zn == 0.0) return;
    const double r = delta * zn;
    const double p = scalars.p1(r) / (delta * delta);
    const double q = scalars.q1(r) / (delta * delta);
    const double b = scalars.b1(r) / delta;
    const double psub = p - (accel ? sat_d : 0.0);
    const double qsub = q - (accel ? sat_d : 0.0);
    const double wb = vol * (galerkin ? win * win : win);
    for (int i = 0; i < d; ++i) {
      const double zi = zeta[i] / zn;
      for (int j = 0; j < d; ++j) {
        const double pij = zi * (zeta[j] / zn);
        bond_acc[i][j].add(
            wb * cb * (psub * ((i == j ? 1.0 : 0.0) - pij) + qsub * pij));
        if (galerkin) state_acc[i][j].add(wb * cs * b * b * pij);
      }
      if (!galerkin) drift_acc[i].add(win * b * zi);
    }
  };

  auto assemble_current = [&](double out[3][3]) {
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        out[i][j] = bond_acc[i][j].value() + state_acc[i][j].value();
        if (!galerkin)
          out[i][j] += vol * cs * drift_acc[i].value() * drift_acc[j].value();
      }
  };

  Index rv{};
  add_point(rv);  // r = 0
  double prev[3][3];
  assemble_current(prev);
  ev.shells_used = 0;
  for (int n = 1; n <= options.max_shells; ++n) {
    const int z2 = d > 2 ? n : 0;
    for (rv[0] = -n; rv[0] <= n; ++rv[0])
      for (rv[1] = -n; rv[1] <= n; ++rv[1])
        for (rv[2] = -z2; rv[2] <= z2; ++rv[2]) {
          int mx = std::max(std::abs(rv[0]), std::abs(rv[1]));
          if (d > 2) mx = std::max(mx, std::abs(rv[2]));
          if (mx != n) continue;
          add_point(rv);
        }
    double cur[3][3];
    assemble_current(cur);
    double diff[3][3];
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) diff[i][j] = cur[i][j] - prev[i][j];
    const double cum = frobenius(cur, d);
    ev.shells_used = n;
    ev.last_rel = frobenius(diff, d) / std::max(cum, DBL_MIN);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) prev[i][j] = cur[i][j];
    if (ev.last_rel <= options.rel_tol) {
      ev.converged = true;
      break;
    }
  }
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) ev.M.M[i][j] = prev[i][j];
  return ev;
}

SymbolMatrix lattice_symbol(const Vec& xi, double delta, const Vec& h,
                            const Material& mat, double m,
                            const ScalarSymbolEngine& scalars, LatticeForm form,
                            const LatticeOptions& options) {
  const LatticeEval ev =
      lattice_symbol_detail(xi, delta, h, mat, m, scalars, form, options);
  if (!ev.converged)
    throw numerical_error(
        "nonconvergent-sum: lattice symbol still above tolerance after " +
        std::to_string(options.max_shells) + " shells at xi = (" +
        format_g(xi[0]) + ", " + format_g(xi[1]) + ")");
  return ev.M;
}

ScanReport stability_scan(const Material& mat, const KernelProfile& profile,
                          const ScanOptions& options) {
  if (mat.dim != 2)
    throw config_error("stability_scan: the scan grids are defined for dim 2");
  ScanReport rep;
  rep.hypothesis_ok = mat.lambda_ge_mu();
  if (!rep.hypothesis_ok)
    rep.notes.push_back(
        "material has lambda < mu: the sign condition behind the state-term "
        "bound fails, results are diagnostic only");
  rep.printed_state_constant = mat.C_beta * (mat.lambda - mat.mu);
  rep.derived_state_constant = rep.printed_state_constant / mat.dim;
  rep.notes.push_back(
      "state-term constant recorded both ways: printed C_beta*(lambda-mu) = " +
      format_g(rep.printed_state_constant) +
      ", dimension-normalized C_beta*(lambda-mu)/d = " +
      format_g(rep.derived_state_constant) +
      "; the operator and symbols use the printed convention");

  const double m = compute_moments(RadialKernel{profile, 1.0, mat.dim}).m;
  const ScalarSymbolEngine cont(profile, mat.dim);

  // Wave-vector samples: uniform grid over (-pi, pi]^2 (0 excluded) plus
  // log-radial rays.
  std::vector<Vec> xis;
  const int n = options.grid_n;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double x0 = -kPi + 2.0 * kPi * i / (n - 1);
      const double x1 = -kPi + 2.0 * kPi * j / (n - 1);
      if (x0 == 0.0 && x1 == 0.0) continue;
      xis.push_back(make_vec(x0, x1));
    }
  std::vector<Vec> rad;
  const double rmin = 1e-3, rmax = 4.0 * kPi;
  for (int kdir = 0; kdir < options.radial_dirs; ++kdir) {
    const double th = kPi * kdir / options.radial_dirs;
    for (int i = 0; i < options.radial_samples; ++i) {
      const double rr =
          rmin * std::pow(rmax / rmin,
                          static_cast<double>(i) /
                              std::max(1, options.radial_samples - 1));
      rad.push_back(make_vec(rr * std::cos(th), rr * std::sin(th)));
    }
  }

  for (double delta : options.deltas) {
    ScanReport::ContinuousSummary cs;
    cs.delta = delta;
    cs.min_eig = DBL_MAX;
    auto visit = [&](const Vec& xi) {
      const SymbolMatrix M = navier_symbol(xi, delta, mat, m, cont);
      const double ev = M.min_eig();
      rep.rows.push_back({"MS", delta, Vec{}, xi, ev, true});
      if (ev < cs.min_eig) {
        cs.min_eig = ev;
        cs.argmin_xi = xi;
      }
      if (!(ev > 0.0)) rep.all_positive = false;
    };
    for (const Vec& xi : xis) visit(xi);
    for (const Vec& xi : rad) visit(xi);
    rep.continuous.push_back(cs);
  }

  std::vector<std::pair<double, Vec>> pairs = options.lattice_pairs;
  if (pairs.empty())
    pairs = {{0.25, make_vec(1.0 / 8.0, 1.0 / 16.0)},
             {0.125, make_vec(1.0 / 16.0, 1.0 / 32.0)},
             {0.0625, make_vec(1.0 / 32.0, 1.0 / 64.0)}};

  std::unique_ptr<ScalarSymbolEngine> quasi;
  if (!pairs.empty()) {
    const RadialKernel unit{profile, 1.0, mat.dim};
    const QuadSet qs =
        solve_weights(generate_point_set(options.eps1, mat.dim), unit);
    quasi = std::make_unique<ScalarSymbolEngine>(profile, qs);
  }

  // Lattice forms are 2 pi periodic: restrict to the fundamental cell.
  std::vector<Vec> lat_xis = xis;
  for (const Vec& xi : rad)
    if (std::abs(xi[0]) <= kPi && std::abs(xi[1]) <= kPi)
      lat_xis.push_back(xi);

  for (const auto& [delta, hh] : pairs) {
    ScanReport::LatticeSummary ls;
    ls.delta = delta;
    ls.h = hh;
    ls.min_eig_galerkin = DBL_MAX;
    ls.min_eig_collocation = DBL_MAX;
    ls.min_eig_quasi = DBL_MAX;
    ls.c_min = DBL_MAX;
    for (const Vec& xi : lat_xis) {
      const LatticeEval eg = lattice_symbol_detail(
          xi, delta, hh, mat, m, cont, LatticeForm::Galerkin, options.lattice);
      const LatticeEval ec =
          lattice_symbol_detail(xi, delta, hh, mat, m, cont,
                                LatticeForm::Collocation, options.lattice);
      const LatticeEval eq =
          lattice_symbol_detail(xi, delta, hh, mat, m, *quasi,
                                LatticeForm::QuasiCollocation, options.lattice);
      const double vg = eg.M.min_eig(), vc = ec.M.min_eig(),
                   vq = eq.M.min_eig();
      rep.rows.push_back({"MG", delta, hh, xi, vg, eg.converged});
      rep.rows.push_back({"MC", delta, hh, xi, vc, ec.converged});
      rep.rows.push_back({"MCeps", delta, hh, xi, vq, eq.converged});
      ls.min_eig_galerkin = std::min(ls.min_eig_galerkin, vg);
      ls.min_eig_collocation = std::min(ls.min_eig_collocation, vc);
      ls.min_eig_quasi = std::min(ls.min_eig_quasi, vq);
      if (!eq.converged) ++ls.nonconvergent;
      if (!(vg > 0.0) || !(vc > 0.0) || !(vq > 0.0)) rep.all_positive = false;

      if (vg > 0.0) {
        Eigen::Matrix2d G, C;
        for (int i = 0; i < 2; ++i)
          for (int j = 0; j < 2; ++j) {
            G(i, j) = eg.M.M[i][j];
            C(i, j) = ec.M.M[i][j];
          }
        Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::Matrix2d> ges(C, G);
        const double cmin = ges.eigenvalues().minCoeff();
        rep.rows.push_back({"gen", delta, hh, xi, cmin, eg.converged &&
                                                            ec.converged});
        ls.c_min = std::min(ls.c_min, cmin);
      }
    }
    if (ls.nonconvergent > 0)
      rep.notes.push_back(
          "quasi-collocation lattice sum hit the shell cap at " +
          std::to_string(ls.nonconvergent) + " wave vectors for delta = " +
          format_g(delta) + "; capped partial sums recorded");
    rep.lattice.push_back(ls);
  }
  return rep;
}

}  // namespace peridyn
