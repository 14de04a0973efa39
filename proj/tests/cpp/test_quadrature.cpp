// SPDX-License-Identifier: MIT
#include <algorithm>
#include <cmath>
#include <numeric>

#include "doctest.h"
#include "peridyn/kernel.hpp"
#include "peridyn/quadrature.hpp"

using namespace peridyn;

namespace {
constexpr double kPi = 3.14159265358979323846;

RadialKernel unit_ball_kernel(int dim) {
  return RadialKernel{KernelProfile{}, 1.0, dim};
}

double weight_at(const QuadSet& qs, double x, double y, double z = 0.0) {
  for (std::size_t i = 0; i < qs.points.size(); ++i) {
    const Vec& p = qs.points[i];
    if (std::abs(p[0] - x) < 1e-14 && std::abs(p[1] - y) < 1e-14 &&
        std::abs(p[2] - z) < 1e-14)
      return qs.weights[i];
  }
  FAIL("point not found in quadrature set");
  return 0.0;
}
}  // namespace

TEST_SUITE("quadrature") {
  TEST_CASE("Gauss-Legendre nodes and exactness") {
    const GaussRule& g1 = gauss_legendre(1);
    REQUIRE(g1.nodes.size() == 1);
    CHECK(g1.nodes[0] == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(g1.weights[0] == doctest::Approx(2.0).epsilon(1e-15));

    for (int n : {2, 4, 8, 16}) {
      const GaussRule& g = gauss_legendre(n);
      REQUIRE(int(g.nodes.size()) == n);
      const double wsum =
          std::accumulate(g.weights.begin(), g.weights.end(), 0.0);
      CHECK(wsum == doctest::Approx(2.0).epsilon(1e-14));
      // Symmetric nodes.
      for (int i = 0; i < n; ++i)
        CHECK(g.nodes[i] == doctest::Approx(-g.nodes[n - 1 - i]).epsilon(1e-14));
      // Exact through degree 2n-1: check x^(2n-2) against 2/(2n-1).
      double s = 0.0;
      for (int i = 0; i < n; ++i)
        s += g.weights[i] * std::pow(g.nodes[i], 2 * n - 2);
      CHECK(s == doctest::Approx(2.0 / (2 * n - 1)).epsilon(1e-13));
      // Odd powers vanish.
      double sodd = 0.0;
      for (int i = 0; i < n; ++i)
        sodd += g.weights[i] * std::pow(g.nodes[i], 2 * n - 3 > 0 ? 2 * n - 3 : 1);
      CHECK(sodd == doctest::Approx(0.0).epsilon(1e-14));
    }
    CHECK_THROWS_AS((void)gauss_legendre(0), config_error);
  }

  TEST_CASE("polar rule auto-sizing") {
    const PolarRule r = polar_rule(0.25, 0.0625);
    CHECK(r.radial_panels == 8);       // panel width <= h_min/2
    CHECK(r.angular_panels == 128);    // max(16, ceil(8*delta/h_min)*4)
    CHECK(r.radial_order >= 4);
    CHECK(r.angular_order >= 4);
    CHECK(r.total_points(2) ==
          long(r.radial_panels) * r.radial_order * r.angular_panels *
              r.angular_order);
  }

  TEST_CASE("ball quadrature is exact on kernel-weighted polynomials") {
    const RadialKernel k{KernelProfile{}, 0.25, 2};
    const PolarRule rule = exact_poly_rule(6);

    auto integ1 = [&](const std::function<double(const Vec&)>& f) {
      return integrate_ball(rule, k, 1,
                            [&](const Vec& s, double* out) { out[0] = f(s); })[0];
    };
    // Mass-type integrals: int rho_delta = 2 pi c / delta^2 = 3/delta^2.
    CHECK(integ1([](const Vec&) { return 1.0; }) ==
          doctest::Approx(48.0).epsilon(1e-13));
    // m = int rho_delta |s|^2 = 1.
    CHECK(integ1([&](const Vec& s) { return norm2(s, 2); }) ==
          doctest::Approx(1.0).epsilon(1e-13));
    // Fourth moments: 3/8 and 1/8.
    CHECK(integ1([&](const Vec& s) {
            return s[0] * s[0] * s[0] * s[0] / norm2(s, 2);
          }) == doctest::Approx(3.0 / 8.0).epsilon(1e-13));
    CHECK(integ1([&](const Vec& s) {
            return s[0] * s[0] * s[1] * s[1] / norm2(s, 2);
          }) == doctest::Approx(1.0 / 8.0).epsilon(1e-13));
    // Odd integrands vanish by symmetry of the rule.
    CHECK(integ1([](const Vec& s) { return s[0]; }) ==
          doctest::Approx(0.0).epsilon(1e-14));

    // d = 3: m is delta-independent; inverse-distance with c = 1 gives pi.
    const RadialKernel k3{KernelProfile::parse("inverse_distance", 1.0, {}),
                          0.5, 3};
    const double m3 = integrate_ball(
        exact_poly_rule(6), k3, 1,
        [&](const Vec& s, double* out) { out[0] = norm2(s, 3); })[0];
    CHECK(m3 == doctest::Approx(kPi).epsilon(1e-13));
  }

  TEST_CASE("quadrature nodes stay inside the punctured ball") {
    const RadialKernel k{KernelProfile{}, 0.25, 2};
    const PolarRule rule = polar_rule(0.25, 0.125);
    long count = 0;
    for_each_ball_point(rule, k, [&](const Vec& s, double w) {
      const double r = norm(s, 2);
      CHECK(r > 0.0);
      CHECK(r < 0.25);
      CHECK(w > 0.0);
      ++count;
    });
    CHECK(count == rule.total_points(2));
  }

  TEST_CASE("polar rule converges on a non-polynomial integrand") {
    const RadialKernel k{KernelProfile{}, 0.25, 2};
    auto f = [&](const Vec& s, double* out) {
      out[0] = std::cos(3.0 * s[0] + 5.0 * s[1]) * norm2(s, 2);
    };
    const double coarse = integrate_ball(polar_rule(0.25, 0.125), k, 1, f)[0];
    const double fine = integrate_ball(polar_rule(0.25, 0.015625), k, 1, f)[0];
    CHECK(std::abs(coarse - fine) <= 1e-9);
  }

  TEST_CASE("lattice point sets on the closed unit ball") {
    const std::vector<Vec> p25 = generate_point_set(0.25, 2);
    CHECK(p25.size() == 48);
    // Lexicographic index order: first k = (-4, 0), last k = (4, 0).
    CHECK(p25.front()[0] == doctest::Approx(-1.0).epsilon(1e-15));
    CHECK(p25.front()[1] == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(p25.back()[0] == doctest::Approx(1.0).epsilon(1e-15));
    for (const Vec& p : p25) {
      CHECK(norm(p, 2) <= 1.0 + 1e-14);
      CHECK(norm(p, 2) > 0.0);
    }

    CHECK(generate_point_set(0.5, 2).size() == 12);
    CHECK(generate_point_set(0.5, 3).size() == 32);

    CHECK_THROWS_AS((void)generate_point_set(1.2, 2), config_error);
    CHECK_THROWS_AS((void)generate_point_set(0.0, 2), config_error);
  }

  TEST_CASE("moment-matched weights, eps1 = 1/4") {
    const RadialKernel k = unit_ball_kernel(2);
    const QuadSet qs = solve_weights(generate_point_set(0.25, 2), k);
    REQUIRE(qs.points.size() == 48);
    REQUIRE(qs.weights.size() == 48);

    // Frozen representative weights (one per symmetry orbit sample).
    CHECK(weight_at(qs, 0.25, 0.0) ==
          doctest::Approx(0.061959106704054821).epsilon(1e-12));
    CHECK(weight_at(qs, 0.25, 0.25) ==
          doctest::Approx(0.065773922918380703).epsilon(1e-12));
    CHECK(weight_at(qs, 0.75, 0.5) ==
          doctest::Approx(0.069323656273041698).epsilon(1e-12));
    CHECK(weight_at(qs, 1.0, 0.0) ==
          doctest::Approx(0.060336426816219285).epsilon(1e-12));

    const double wsum =
        std::accumulate(qs.weights.begin(), qs.weights.end(), 0.0);
    CHECK(wsum == doctest::Approx(3.1075872525827783).epsilon(1e-12));
    CHECK(*std::min_element(qs.weights.begin(), qs.weights.end()) > 0.0);

    // Independent residual check against the closed-form moment targets.
    // The unit-ball profile is evaluated inclusively at |t| = 1 (the closed
    // ball contains the boundary lattice points).
    const KernelMoments mom = compute_moments(k);
    double resid = 0.0;
    double sum_t1sq = 0.0;
    for (int i = 0; i < 2; ++i)
      for (int j = i; j < 2; ++j) {
        double s = 0.0;
        for (std::size_t q = 0; q < qs.points.size(); ++q) {
          const Vec& t = qs.points[q];
          s += qs.weights[q] * k.profile.value(norm(t, 2)) * t[i] * t[i] *
               t[j] * t[j] / norm2(t, 2);
        }
        resid = std::max(resid, std::abs(s - mom.M4[i][j]));
      }
    for (std::size_t q = 0; q < qs.points.size(); ++q)
      sum_t1sq += qs.weights[q] * k.profile.value(norm(qs.points[q], 2)) *
                  qs.points[q][0] * qs.points[q][0];
    CHECK(resid <= 1e-10);
    // Exact consequence of the matched moments: sum w rho t1^2 = m/2.
    CHECK(sum_t1sq == doctest::Approx(0.5).epsilon(1e-12));
  }

  TEST_CASE("moment-matched weights, eps1 = 1/2") {
    const QuadSet qs =
        solve_weights(generate_point_set(0.5, 2), unit_ball_kernel(2));
    REQUIRE(qs.points.size() == 12);
    CHECK(weight_at(qs, 1.0, 0.0) ==
          doctest::Approx(0.15943951023931954).epsilon(1e-12));
    CHECK(weight_at(qs, 0.5, 0.5) ==
          doctest::Approx(0.37024024484653051).epsilon(1e-12));
    CHECK(weight_at(qs, 0.5, 0.0) ==
          doctest::Approx(0.20471975511965979).epsilon(1e-12));
    CHECK(weight_at(qs, 0.0, 0.5) ==
          doctest::Approx(0.20471975511965979).epsilon(1e-12));
    CHECK(weight_at(qs, 0.0, 1.0) ==
          doctest::Approx(0.15943951023931957).epsilon(1e-12));
    const double wsum =
        std::accumulate(qs.weights.begin(), qs.weights.end(), 0.0);
    CHECK(wsum == doctest::Approx(2.9375980408220395).epsilon(1e-12));
  }

  TEST_CASE("swap orbits change the parameterization, not the solution") {
    // The flip-only least-squares solution of this swap-symmetric problem is
    // itself swap-symmetric, so enabling swap orbits must reproduce it.
    const std::vector<Vec> pts = generate_point_set(0.25, 2);
    const QuadSet a = solve_weights(pts, unit_ball_kernel(2));
    WeightSolveOptions opt;
    opt.include_swap = true;
    const QuadSet b = solve_weights(pts, unit_ball_kernel(2), opt);
    for (std::size_t i = 0; i < a.weights.size(); ++i)
      CHECK(a.weights[i] == doctest::Approx(b.weights[i]).epsilon(1e-11));
  }

  TEST_CASE("infeasible moment constraints are reported") {
    // eps1 = 0.9 leaves only the four axis points, which cannot produce the
    // mixed moment 1/8.
    try {
      (void)solve_weights(generate_point_set(0.9, 2), unit_ball_kernel(2));
      FAIL("expected numerical_error");
    } catch (const numerical_error& e) {
      CHECK(std::string(e.what()).find("infeasible-constraints") !=
            std::string::npos);
    }
  }
}
