// SPDX-License-Identifier: MIT
#include "peridyn/grid.hpp"

#include <algorithm>
#include <cmath>

namespace peridyn {

double DomainBox::distance(const Vec& x) const {
  double d2 = 0.0;
  for (int j = 0; j < dim; ++j) {
    double g = 0.0;
    if (x[j] < lo[j]) g = lo[j] - x[j];
    else if (x[j] > hi[j]) g = x[j] - hi[j];
    d2 += g * g;
  }
  return std::sqrt(d2);
}

namespace {

double class_tol(const GridSpec& g) {
  double scale = 1.0;
  for (int j = 0; j < g.dim; ++j)
    scale = std::max({scale, std::abs(g.domain.lo[j]), std::abs(g.domain.hi[j])});
  return 1e-12 * scale;
}

}  // namespace

GridSpec build_grid(const DomainBox& domain, double h_max, const Vec& h_hat,
                    double delta, bool allow_small_horizon) {
  GridSpec g;
  g.domain = domain;
  g.dim = domain.dim;
  if (g.dim < 2 || g.dim > 3) throw config_error("grid dimension must be 2 or 3");
  for (int j = 0; j < g.dim; ++j)
    if (!(domain.hi[j] - domain.lo[j] > 0.0))
      throw config_error("degenerate-domain: extent along axis " +
                         std::to_string(j + 1) + " is not positive");
  if (!(h_max > 0.0)) throw config_error("h_max must be positive");
  if (!(delta > 0.0)) throw config_error("delta must be positive");

  g.delta = delta;
  g.h_max = 0.0;
  g.h_min = 0.0;
  for (int j = 0; j < g.dim; ++j) {
    if (!(h_hat[j] > 0.0))
      throw config_error("h_hat components must be positive");
    g.h[j] = h_max * h_hat[j];
    g.h_max = std::max(g.h_max, g.h[j]);
    g.h_min = g.h_min == 0.0 ? g.h[j] : std::min(g.h_min, g.h[j]);
  }

  if (delta < 0.5 * g.h_max && !allow_small_horizon)
    throw config_error(
        "margin-exceeds-layer: delta = " + format_g(delta) +
        " < h_max/2 = " + format_g(0.5 * g.h_max) +
        " (the evaluation margin would exceed the interaction layer; pass "
        "allow_small_horizon for deliberately local couplings)");

  for (int j = 0; j < g.dim; ++j) {
    g.collar_lo[j] = domain.lo[j] - 2.0 * delta;
    g.collar_hi[j] = domain.hi[j] + 2.0 * delta;
    // Margin: the composed state stencil reaches 2 delta + 4 h_j past the
    // domain; one extra node guards against roundoff at the rim.
    const int margin =
        static_cast<int>(std::ceil((2.0 * delta + 4.0 * g.h[j]) / g.h[j])) + 1;
    g.k_lo[j] = static_cast<int>(std::floor(domain.lo[j] / g.h[j])) - margin;
    g.k_hi[j] = static_cast<int>(std::ceil(domain.hi[j] / g.h[j])) + margin;
    g.n[j] = g.k_hi[j] - g.k_lo[j] + 1;
  }

  g.num_nodes = 1;
  for (int j = 0; j < g.dim; ++j) g.num_nodes *= g.n[j];

  g.node_class.resize(g.num_nodes);
  g.aux_flag.assign(g.num_nodes, 0);
  g.unknown_slot.assign(g.num_nodes, -1);

  const double tol = class_tol(g);
  const double aux_reach = delta + 2.0 * g.h_max + tol;
  for (long id = 0; id < g.num_nodes; ++id) {
    const Index k = g.node_at(id);
    const Vec x = g.coord(k);
    bool inside = true;
    for (int j = 0; j < g.dim; ++j)
      inside = inside && x[j] > domain.lo[j] + tol && x[j] < domain.hi[j] - tol;
    if (inside) {
      g.node_class[id] = NodeClass::Unknown;
      g.unknown_slot[id] = static_cast<long>(g.unknown_nodes.size());
      g.unknown_nodes.push_back(id);
    } else {
      g.node_class[id] = NodeClass::Constrained;
      if (domain.distance(x) <= aux_reach) g.aux_flag[id] = 1;
    }
  }
  g.num_unknown = static_cast<long>(g.unknown_nodes.size());
  return g;
}

NodeClass classify_node(const GridSpec& grid, const Index& k) {
  if (!grid.in_range(k))
    throw config_error("classify_node: index out of range");
  return grid.node_class[grid.node_id(k)];
}

bool auxiliary_node(const GridSpec& grid, const Index& k) {
  if (!grid.in_range(k))
    throw config_error("auxiliary_node: index out of range");
  return grid.aux_flag[grid.node_id(k)] != 0;
}

std::vector<Index> nodes_in_ball(const GridSpec& grid, const Vec& x, double r) {
  if (!(r > 0.0)) throw config_error("nodes_in_ball requires r > 0");
  std::vector<Index> out;
  const double r2 = r * r * (1.0 + 1e-12);
  Index lo{}, hi{};
  for (int j = 0; j < grid.dim; ++j) {
    lo[j] = std::max(grid.k_lo[j],
                     static_cast<int>(std::ceil((x[j] - r) / grid.h[j] - 1e-12)));
    hi[j] = std::min(grid.k_hi[j],
                     static_cast<int>(std::floor((x[j] + r) / grid.h[j] + 1e-12)));
  }
  Index k = lo;
  const int k3lo = grid.dim == 3 ? lo[2] : 0;
  const int k3hi = grid.dim == 3 ? hi[2] : 0;
  for (k[0] = lo[0]; k[0] <= hi[0]; ++k[0])
    for (k[1] = lo[1]; k[1] <= hi[1]; ++k[1])
      for (k[2] = k3lo; k[2] <= k3hi; ++k[2]) {
        const Vec xk = grid.coord(k);
        double d2 = 0.0;
        for (int j = 0; j < grid.dim; ++j) {
          const double g = xk[j] - x[j];
          d2 += g * g;
        }
        if (d2 <= r2) out.push_back(k);
      }
  return out;
}

NodalField restrict_field(const GridSpec& grid,
                          const std::function<Vec(const Vec&)>& u, int comps) {
  NodalField f(grid.num_nodes, comps);
  for (long id = 0; id < grid.num_nodes; ++id) {
    const Vec v = u(grid.coord(grid.node_at(id)));
    for (int c = 0; c < comps; ++c) f.at(id, c) = v[c];
  }
  return f;
}

}  // namespace peridyn
