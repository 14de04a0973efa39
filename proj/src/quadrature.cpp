// SPDX-License-Identifier: MIT
#include "peridyn/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>

namespace peridyn {

namespace {
constexpr double kPi = 3.14159265358979323846;

GaussRule make_gauss(int n) {
  GaussRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  // Newton iteration on P_n; standard asymptotic initial guess.
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      if (n == 1) p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      // p1 = P_n(x), p0 = P_{n-1}(x).
      pp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * pp * pp);
    // nodes ascending:
    rule.nodes[i] = -x;
    rule.weights[i] = w;
    rule.nodes[n - 1 - i] = x;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) {
    // Center node of odd rules is exactly zero.
    rule.nodes[n / 2] = 0.0;
  }
  return rule;
}

}  // namespace

const GaussRule& gauss_legendre(int n) {
  if (n < 1) throw config_error("gauss_legendre requires n >= 1");
  static std::map<int, GaussRule> cache;
  static std::mutex mutex;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(n);
  if (it == cache.end()) {
    if (n == 1) {
      GaussRule r;
      r.nodes = {0.0};
      r.weights = {2.0};
      it = cache.emplace(1, std::move(r)).first;
    } else {
      it = cache.emplace(n, make_gauss(n)).first;
    }
  }
  return it->second;
}

long PolarRule::total_points(int dim) const {
  long pts = static_cast<long>(radial_panels) * radial_order *
             angular_panels * angular_order;
  if (dim == 3) pts *= static_cast<long>(polar_panels) * polar_order;
  return pts;
}

PolarRule polar_rule(double delta, double h_min) {
  if (!(delta > 0.0) || !(h_min > 0.0))
    throw config_error("polar_rule requires positive delta and h_min");
  PolarRule rule;
  rule.radial_panels =
      std::max(2, static_cast<int>(std::ceil(delta / (0.5 * h_min))));
  rule.radial_order = 4;
  const long want = static_cast<long>(std::ceil(8.0 * delta / h_min)) * 4;
  rule.angular_panels = static_cast<int>(std::max<long>(16, want));
  rule.angular_order = 4;
  rule.polar_panels = std::max(8, rule.angular_panels / 4);
  rule.polar_order = 4;
  return rule;
}

PolarRule exact_poly_rule(int max_degree) {
  PolarRule rule;
  rule.radial_panels = 1;
  // Radial integrand r^{d-1} rho(r) poly(r): for the supported profiles the
  // degree is at most (d - 1) + max_degree + profile degree; order 8 covers
  // degree 15, comfortably past every quartic-solution use.
  rule.radial_order = std::max(4, (max_degree + 2 + 10) / 2);
  // Composite Gauss on equal angular panels is a union of equispaced
  // equal-weight families, each exact for trigonometric degree panels-1.
  rule.angular_panels = 16;
  rule.angular_order = 4;
  rule.polar_panels = 8;
  rule.polar_order = std::max(4, (max_degree + 4) / 2 + 1);
  return rule;
}

void for_each_ball_point(const PolarRule& rule, const RadialKernel& kernel,
                         const std::function<void(const Vec&, double)>& visit) {
  const double delta = kernel.delta;
  const auto& gr = gauss_legendre(rule.radial_order);
  const auto& ga = gauss_legendre(rule.angular_order);
  const double dr = delta / rule.radial_panels;
  const double dth = 2.0 * kPi / rule.angular_panels;

  if (kernel.dim == 2) {
    for (int ip = 0; ip < rule.radial_panels; ++ip) {
      const double r0 = ip * dr;
      for (int ig = 0; ig < rule.radial_order; ++ig) {
        const double r = r0 + 0.5 * dr * (gr.nodes[ig] + 1.0);
        const double wr = 0.5 * dr * gr.weights[ig];
        const double radial = kernel.value(r) * r * wr;  // rho * Jacobian
        if (radial == 0.0) continue;
        for (int ap = 0; ap < rule.angular_panels; ++ap) {
          const double t0 = ap * dth;
          for (int ag = 0; ag < rule.angular_order; ++ag) {
            const double th = t0 + 0.5 * dth * (ga.nodes[ag] + 1.0);
            const double w = radial * 0.5 * dth * ga.weights[ag];
            visit(make_vec(r * std::cos(th), r * std::sin(th)), w);
          }
        }
      }
    }
    return;
  }

  const auto& gp = gauss_legendre(rule.polar_order);
  const double dph = kPi / rule.polar_panels;
  for (int ip = 0; ip < rule.radial_panels; ++ip) {
    const double r0 = ip * dr;
    for (int ig = 0; ig < rule.radial_order; ++ig) {
      const double r = r0 + 0.5 * dr * (gr.nodes[ig] + 1.0);
      const double wr = 0.5 * dr * gr.weights[ig];
      const double radial = kernel.value(r) * r * r * wr;
      if (radial == 0.0) continue;
      for (int pp = 0; pp < rule.polar_panels; ++pp) {
        const double p0 = pp * dph;
        for (int pg = 0; pg < rule.polar_order; ++pg) {
          const double ph = p0 + 0.5 * dph * (gp.nodes[pg] + 1.0);
          const double wp = 0.5 * dph * gp.weights[pg] * std::sin(ph);
          const double z = r * std::cos(ph);
          const double rs = r * std::sin(ph);
          for (int ap = 0; ap < rule.angular_panels; ++ap) {
            const double t0 = ap * dth;
            for (int ag = 0; ag < rule.angular_order; ++ag) {
              const double th = t0 + 0.5 * dth * (ga.nodes[ag] + 1.0);
              const double w = radial * wp * 0.5 * dth * ga.weights[ag];
              visit(make_vec(rs * std::cos(th), rs * std::sin(th), z), w);
            }
          }
        }
      }
    }
  }
}

std::vector<double> integrate_ball(
    const PolarRule& rule, const RadialKernel& kernel, int ncomp,
    const std::function<void(const Vec&, double*)>& f) {
  std::vector<Kahan> acc(ncomp);
  std::vector<double> slots(ncomp);
  for_each_ball_point(rule, kernel, [&](const Vec& s, double w) {
    for (int c = 0; c < ncomp; ++c) slots[c] = 0.0;
    f(s, slots.data());
    for (int c = 0; c < ncomp; ++c) acc[c].add(w * slots[c]);
  });
  std::vector<double> out(ncomp);
  for (int c = 0; c < ncomp; ++c) out[c] = acc[c].value();
  return out;
}

}  // namespace peridyn
