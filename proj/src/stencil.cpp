// SPDX-License-Identifier: MIT
#include "peridyn/stencil.hpp"

#include <cmath>

#include "peridyn/rk.hpp"

namespace peridyn {

namespace {

/// Kahan-compensated scatter target.
struct CompArray {
  std::vector<double> sum, comp;
  void init(long n) {
    sum.assign(n, 0.0);
    comp.assign(n, 0.0);
  }
  void add(long i, double x) {
    const double t = sum[i] + x;
    if (std::abs(sum[i]) >= std::abs(x))
      comp[i] += (sum[i] - t) + x;
    else
      comp[i] += (x - t) + sum[i];
    sum[i] = t;
  }
  double value(long i) const { return sum[i] + comp[i]; }
};

}  // namespace

StencilSet build_stencils(const GridSpec& grid, const BallScheme& scheme,
                          const Material& mat) {
  StencilSet st;
  const int d = grid.dim;
  st.dim = d;
  st.m = scheme.m;
  st.c_bond = mat.c_bond(scheme.m);
  st.c_state = mat.c_state(scheme.m);
  const double delta = scheme.kernel.delta;
  for (int j = 0; j < d; ++j) {
    st.reach[j] = static_cast<int>(std::ceil(delta / grid.h[j])) + 2;
    st.reach2[j] = 2 * st.reach[j];
  }
  const long box = st.box_size(st.reach);

  CompArray bond[3][3], grad[3];
  for (int i = 0; i < d; ++i) {
    grad[i].init(box);
    for (int c = i; c < d; ++c) bond[i][c].init(box);
  }
  // Center-value accumulators int rho s_i s_c / |s|^2 and int rho s_c from
  // the same quadrature pass (the latter vanishes by symmetry but carrying
  // it keeps constant-annihilation exact to roundoff).
  Kahan kbond[3][3], kgrad[3];

  scheme.for_each([&](const Vec& s, double w) {
    const double n2 = norm2(s, d);
    // Basis offsets whose support contains s.
    Index lo{}, hi{};
    for (int j = 0; j < d; ++j) {
      const double c = s[j] / grid.h[j];
      lo[j] = static_cast<int>(std::floor(c - 2.0)) + 1;
      hi[j] = static_cast<int>(std::ceil(c + 2.0)) - 1;
    }
    double phi[3][8];
    int cnt[3] = {1, 1, 1};
    for (int j = 0; j < d; ++j) {
      cnt[j] = hi[j] - lo[j] + 1;
      for (int o = lo[j]; o <= hi[j]; ++o) {
        const double t = std::abs(s[j] - o * grid.h[j]) / (2.0 * grid.h[j]);
        phi[j][o - lo[j]] = t < 1.0 ? cubic_bspline(t) : 0.0;
      }
    }
    const int c2 = d > 2 ? cnt[2] : 1;
    for (int a = 0; a < cnt[0]; ++a)
      for (int b = 0; b < cnt[1]; ++b)
        for (int e = 0; e < c2; ++e) {
          double psi = phi[0][a] * phi[1][b];
          if (d > 2) psi *= phi[2][e];
          if (psi == 0.0) continue;
          Index o = {lo[0] + a, lo[1] + b, d > 2 ? lo[2] + e : 0};
          const long slot = st.slot(o, st.reach);
          const double wpsi = w * psi;
          for (int i = 0; i < d; ++i) {
            grad[i].add(slot, wpsi * s[i]);
            for (int c = i; c < d; ++c)
              bond[i][c].add(slot, wpsi * s[i] * s[c] / n2);
          }
        }
    for (int i = 0; i < d; ++i) {
      kgrad[i].add(w * s[i]);
      for (int c = i; c < d; ++c) kbond[i][c].add(w * s[i] * s[c] / n2);
    }
  });

  for (int i = 0; i < d; ++i) {
    st.grad[i].resize(box);
    for (int c = i; c < d; ++c) st.bond[i][c].resize(box);
  }
  for (long slot = 0; slot < box; ++slot)
    for (int i = 0; i < d; ++i) {
      st.grad[i][slot] = grad[i].value(slot);
      for (int c = i; c < d; ++c) st.bond[i][c][slot] = bond[i][c].value(slot);
    }

  // Subtract Psi_o(0) * (center integrals): nonzero only for |o_j| <= 1.
  const double phi0 = cubic_bspline(0.0), phi1 = cubic_bspline(0.5);
  Index o{};
  const int z2 = d > 2 ? 1 : 0;
  for (o[0] = -1; o[0] <= 1; ++o[0])
    for (o[1] = -1; o[1] <= 1; ++o[1])
      for (o[2] = -z2; o[2] <= z2; ++o[2]) {
        double psi0 = (o[0] == 0 ? phi0 : phi1) * (o[1] == 0 ? phi0 : phi1);
        if (d > 2) psi0 *= o[2] == 0 ? phi0 : phi1;
        const long slot = st.slot(o, st.reach);
        for (int i = 0; i < d; ++i) {
          st.grad[i][slot] -= psi0 * kgrad[i].value();
          for (int c = i; c < d; ++c)
            st.bond[i][c][slot] -= psi0 * kbond[i][c].value();
        }
      }

  // Mirror the symmetric bond blocks.
  for (int i = 0; i < d; ++i)
    for (int c = 0; c < i; ++c) st.bond[i][c] = st.bond[c][i];
  return st;
}

void compose_state(StencilSet& st) {
  const int d = st.dim;
  const long box2 = st.box_size(st.reach2);
  for (int i = 0; i < d; ++i)
    for (int c = i; c < d; ++c) st.state[i][c].assign(box2, 0.0);

  // state[i][c][t1 + t2] += grad[i][t1] * grad[c][t2].
  const long box = st.box_size(st.reach);
  std::vector<Index> offsets(box);
  {
    Index t{};
    const int z2 = d > 2 ? st.reach[2] : 0;
    long n = 0;
    for (t[0] = -st.reach[0]; t[0] <= st.reach[0]; ++t[0])
      for (t[1] = -st.reach[1]; t[1] <= st.reach[1]; ++t[1])
        for (t[2] = -z2; t[2] <= z2; ++t[2])
          offsets[n++] = t;
  }
  for (long a = 0; a < box; ++a) {
    bool any = false;
    for (int i = 0; i < d && !any; ++i) any = st.grad[i][a] != 0.0;
    if (!any) continue;
    for (long b = 0; b < box; ++b) {
      Index o{};
      for (int j = 0; j < d; ++j) o[j] = offsets[a][j] + offsets[b][j];
      const long slot = st.slot(o, st.reach2);
      for (int i = 0; i < d; ++i)
        for (int c = i; c < d; ++c)
          st.state[i][c][slot] += st.grad[i][a] * st.grad[c][b];
    }
  }
  for (int i = 0; i < d; ++i)
    for (int c = 0; c < i; ++c) st.state[i][c] = st.state[c][i];
}

void stencil_apply(const GridSpec& grid, const StencilSet& st,
                   const NodalField& u, NodalField& out) {
  const int d = grid.dim;
  if (out.nodes() != grid.num_nodes || out.comps != d)
    out = NodalField(grid.num_nodes, d);
  std::fill(out.data.begin(), out.data.end(), 0.0);

  // Pass 1: nodal divergence dn = sum_o grad[c][o] u_c[k + o] wherever the
  // stencil box fits.
  std::vector<double> dn(grid.num_nodes, 0.0);
  Index ilo{}, ihi{};
  for (int j = 0; j < d; ++j) {
    ilo[j] = grid.k_lo[j] + st.reach[j];
    ihi[j] = grid.k_hi[j] - st.reach[j];
  }
  const int z2 = d > 2 ? st.reach[2] : 0;

  auto core_nodes = [&](const Index& lo, const Index& hi,
                        const std::function<void(long, const Index&)>& body) {
    std::vector<Index> ks;
    Index k{};
    const int k3lo = d > 2 ? lo[2] : 0;
    const int k3hi = d > 2 ? hi[2] : 0;
    for (k[0] = lo[0]; k[0] <= hi[0]; ++k[0])
      for (k[1] = lo[1]; k[1] <= hi[1]; ++k[1])
        for (k[2] = k3lo; k[2] <= k3hi; ++k[2]) ks.push_back(k);
    parallel_for(static_cast<long>(ks.size()),
                 [&](long i) { body(i, ks[i]); });
  };

  core_nodes(ilo, ihi, [&](long, const Index& k) {
    const long id = grid.node_id(k);
    double acc = 0.0;
    Index o{};
    for (o[0] = -st.reach[0]; o[0] <= st.reach[0]; ++o[0])
      for (o[1] = -st.reach[1]; o[1] <= st.reach[1]; ++o[1])
        for (o[2] = -z2; o[2] <= z2; ++o[2]) {
          const long slot = st.slot(o, st.reach);
          Index kk{};
          for (int j = 0; j < d; ++j) kk[j] = k[j] + o[j];
          const long nid = grid.node_id(kk);
          for (int c = 0; c < d; ++c)
            acc += st.grad[c][slot] * u.at(nid, c);
        }
    dn[id] = acc;
  });

  // Pass 2: bond part plus gradient of the interpolated divergence, valid
  // where both stencil passes stay in range.
  Index jlo{}, jhi{};
  for (int j = 0; j < d; ++j) {
    jlo[j] = grid.k_lo[j] + 2 * st.reach[j];
    jhi[j] = grid.k_hi[j] - 2 * st.reach[j];
  }
  core_nodes(jlo, jhi, [&](long, const Index& k) {
    const long id = grid.node_id(k);
    double acc[3] = {0.0, 0.0, 0.0};
    Index o{};
    for (o[0] = -st.reach[0]; o[0] <= st.reach[0]; ++o[0])
      for (o[1] = -st.reach[1]; o[1] <= st.reach[1]; ++o[1])
        for (o[2] = -z2; o[2] <= z2; ++o[2]) {
          const long slot = st.slot(o, st.reach);
          Index kk{};
          for (int j = 0; j < d; ++j) kk[j] = k[j] + o[j];
          const long nid = grid.node_id(kk);
          const double dno = dn[nid];
          for (int i = 0; i < d; ++i) {
            double b = 0.0;
            for (int c = 0; c < d; ++c)
              b += st.bond[i][c][slot] * u.at(nid, c);
            acc[i] += st.c_bond * b + st.c_state * st.grad[i][slot] * dno;
          }
        }
    for (int i = 0; i < d; ++i) out.at(id, i) = acc[i];
  });
}

}  // namespace peridyn
