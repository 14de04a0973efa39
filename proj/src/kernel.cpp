// SPDX-License-Identifier: MIT
#include "peridyn/kernel.hpp"

#include <cmath>

#include "peridyn/quadrature.hpp"

namespace peridyn {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

double KernelProfile::value(double t) const {
  switch (kind) {
    case Kind::InverseDistance:
      return c / t;
    case Kind::Constant:
      return c;
    case Kind::Polynomial: {
      double v = 0.0;
      for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) v = v * t + *it;
      return v;
    }
  }
  return 0.0;
}

double KernelProfile::radial_moment(int p) const {
  if (p < 1) throw config_error("kernel radial moment requires p >= 1");
  switch (kind) {
    case Kind::InverseDistance:
      return c / p;  // c * int_0^1 t^(p-1)
    case Kind::Constant:
      return c / (p + 1);
    case Kind::Polynomial: {
      double v = 0.0;
      for (std::size_t k = 0; k < coeffs.size(); ++k)
        v += coeffs[k] / static_cast<double>(k + p + 1);
      return v;
    }
  }
  return 0.0;
}

KernelProfile KernelProfile::parse(const std::string& name, double c,
                                   const std::vector<double>& coeffs) {
  KernelProfile profile;
  profile.c = c;
  profile.coeffs = coeffs;
  if (name == "inverse_distance") {
    profile.kind = Kind::InverseDistance;
  } else if (name == "constant") {
    profile.kind = Kind::Constant;
  } else if (name == "polynomial") {
    profile.kind = Kind::Polynomial;
    if (coeffs.empty())
      throw config_error("kernel 'polynomial' needs kernel_coeffs");
  } else {
    throw config_error("unknown kernel profile '" + name +
                       "' (expected inverse_distance, constant, polynomial)");
  }
  if (profile.kind != Kind::Polynomial && c <= 0.0)
    throw config_error("kernel amplitude must be positive");
  // The theory requires a nonnegative, nonincreasing profile; sample-check
  // so misconfigured polynomials fail fast.
  double prev = 0.0;
  for (int i = 0; i <= 32; ++i) {
    const double t = (i + 0.5) / 33.0;
    const double v = profile.value(t);
    if (v < 0.0) throw config_error("kernel profile is negative on (0,1)");
    if (i > 0 && v > prev * (1.0 + 1e-12) + 1e-14)
      throw config_error("kernel profile is not nonincreasing on (0,1)");
    prev = v;
  }
  return profile;
}

double RadialKernel::value(double r) const {
  if (r >= delta) return 0.0;
  if (r <= 0.0) {
    if (profile.singular_at_zero())
      throw numerical_error("singularity: kernel evaluated at r = 0");
    r = 0.0;
  }
  const double scale = std::pow(delta, -(dim + 2));
  return scale * profile.value(r / delta);
}

namespace {

/// Angular factors: integral over the unit sphere S^{d-1} of n_i^2 n_j^2.
void angular_fourth(int dim, double& diag, double& off, double& total) {
  if (dim == 2) {
    diag = 3.0 * kPi / 4.0;  // int cos^4
    off = kPi / 4.0;         // int cos^2 sin^2
    total = 2.0 * kPi;
  } else {
    diag = 4.0 * kPi / 5.0;
    off = 4.0 * kPi / 15.0;
    total = 4.0 * kPi;
  }
}

KernelMoments from_radial(const KernelProfile& profile, int dim, double delta,
                          double i_m, double i_4, double i_6) {
  // i_m = int rho t^{d+1}, i_4 = int rho t^{d+1} (same radial factor as m),
  // i_6 = int rho t^{d+3}; the fourth moments share m's radial factor
  // because of the 1/|s|^2 normalization.
  (void)profile;
  double diag, off, total;
  angular_fourth(dim, diag, off, total);
  KernelMoments mom;
  mom.m = total * i_m;
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) mom.M4[i][j] = i_4 * (i == j ? diag : off);
  mom.M6 = total * i_6 * delta * delta;
  return mom;
}

}  // namespace

KernelMoments compute_moments(const RadialKernel& kernel) {
  const int d = kernel.dim;
  const double i_m = kernel.profile.radial_moment(d + 1);
  const double i_6 = kernel.profile.radial_moment(d + 3);
  KernelMoments mom =
      from_radial(kernel.profile, d, kernel.delta, i_m, i_m, i_6);
  if (!(mom.m > 0.0) || !std::isfinite(mom.m))
    throw numerical_error("non-integrable kernel profile: second moment "
                          "diverges or vanishes");
  return mom;
}

KernelMoments compute_moments_numeric(const RadialKernel& kernel) {
  // Independent route: composite Gauss on the radial factor and on the
  // angular factor (no closed forms).
  const int d = kernel.dim;
  const auto& gr = gauss_legendre(8);
  auto radial = [&](int p) {
    // int_0^1 rho(t) t^p dt over 32 panels; the integrand rho * t^p is
    // bounded for every admissible profile once p >= 1.
    Kahan acc;
    const int panels = 32;
    for (int i = 0; i < panels; ++i) {
      const double a = static_cast<double>(i) / panels;
      const double w = 1.0 / panels;
      for (std::size_t g = 0; g < gr.nodes.size(); ++g) {
        const double t = a + 0.5 * w * (gr.nodes[g] + 1.0);
        acc.add(0.5 * w * gr.weights[g] * kernel.profile.value(t) *
                std::pow(t, p));
      }
    }
    return acc.value();
  };
  auto angular = [&](int which) {
    // which: 0 -> n_1^4, 1 -> n_1^2 n_2^2, 2 -> 1, over S^{d-1}.
    Kahan acc;
    const int panels = 64;
    if (d == 2) {
      for (int i = 0; i < panels; ++i) {
        const double a = 2.0 * kPi * i / panels;
        const double w = 2.0 * kPi / panels;
        for (std::size_t g = 0; g < gr.nodes.size(); ++g) {
          const double th = a + 0.5 * w * (gr.nodes[g] + 1.0);
          const double c = std::cos(th), s = std::sin(th);
          const double f = which == 0 ? c * c * c * c
                           : which == 1 ? c * c * s * s
                                        : 1.0;
          acc.add(0.5 * w * gr.weights[g] * f);
        }
      }
    } else {
      for (int i = 0; i < panels; ++i) {
        const double a = kPi * i / panels;
        const double w = kPi / panels;
        for (std::size_t g = 0; g < gr.nodes.size(); ++g) {
          const double ph = a + 0.5 * w * (gr.nodes[g] + 1.0);
          const double sp = std::sin(ph), cp = std::cos(ph);
          // Average over azimuth analytically-free: integrate numerically.
          Kahan az;
          for (int k = 0; k < panels; ++k) {
            const double b = 2.0 * kPi * k / panels;
            const double wb = 2.0 * kPi / panels;
            for (std::size_t g2 = 0; g2 < gr.nodes.size(); ++g2) {
              const double th = b + 0.5 * wb * (gr.nodes[g2] + 1.0);
              const double n1 = sp * std::cos(th);
              const double n2 = sp * std::sin(th);
              const double f = which == 0   ? n1 * n1 * n1 * n1
                               : which == 1 ? n1 * n1 * n2 * n2
                                            : 1.0;
              az.add(0.5 * wb * gr.weights[g2] * f);
            }
          }
          (void)cp;
          acc.add(0.5 * w * gr.weights[g] * sp * az.value());
        }
      }
    }
    return acc.value();
  };

  const double i_m = radial(d + 1);
  const double i_6 = radial(d + 3);
  const double diag = angular(0);
  const double off = angular(1);
  const double total = angular(2);

  KernelMoments mom;
  mom.m = total * i_m;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) mom.M4[i][j] = i_m * (i == j ? diag : off);
  mom.M6 = total * i_6 * kernel.delta * kernel.delta;
  return mom;
}

}  // namespace peridyn
