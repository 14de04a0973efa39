// SPDX-License-Identifier: MIT
// Rectilinear Cartesian grids over the domain and its interaction collar,
// node classification, and nodal coefficient fields.
#pragma once

#include <vector>

#include "peridyn/common.hpp"

namespace peridyn {

/// Open axis-aligned box Omega = (lo_1, hi_1) x ... x (lo_d, hi_d).
struct DomainBox {
  Vec lo = make_vec(0.0, 0.0, 0.0);
  Vec hi = make_vec(1.0, 1.0, 1.0);
  int dim = 2;

  /// Euclidean distance from x to the closure of the box (0 inside).
  double distance(const Vec& x) const;
};

enum class NodeClass { Unknown, Constrained };

/// Anchored lattice covering Omega, the interaction collar Omega_I (width
/// 2*delta), and the extra basis-support fringe the composed state operator
/// reaches (2*delta + 4*h_j per axis).  Node coordinates are always computed
/// as index * spacing -- never accumulated -- so they are bit-reproducible.
struct GridSpec {
  DomainBox domain;
  Vec h = make_vec(0.125, 0.0625, 0.0);  // per-axis spacing
  double h_max = 0.125;
  double h_min = 0.0625;
  double delta = 0.25;
  int dim = 2;

  Index k_lo{};  // inclusive index bounds per axis
  Index k_hi{};
  Index n{};  // nodes per axis = k_hi - k_lo + 1

  /// Interaction collar span per axis: [lo_j - 2 delta, hi_j + 2 delta].
  Vec collar_lo{};
  Vec collar_hi{};

  long num_nodes = 0;
  long num_unknown = 0;

  // Per-node classification, linearized in lexicographic index order.
  std::vector<NodeClass> node_class;
  std::vector<char> aux_flag;       // Constrained and within delta + 2 h_max
  std::vector<long> unknown_slot;   // node -> contiguous unknown id, -1 else
  std::vector<long> unknown_nodes;  // unknown id -> node

  bool in_range(const Index& k) const {
    for (int j = 0; j < dim; ++j)
      if (k[j] < k_lo[j] || k[j] > k_hi[j]) return false;
    return true;
  }
  long node_id(const Index& k) const {
    long id = k[0] - k_lo[0];
    for (int j = 1; j < dim; ++j) id = id * n[j] + (k[j] - k_lo[j]);
    return id;
  }
  Index node_at(long id) const {
    Index k{};
    for (int j = dim - 1; j >= 1; --j) {
      k[j] = static_cast<int>(id % n[j]) + k_lo[j];
      id /= n[j];
    }
    k[0] = static_cast<int>(id) + k_lo[0];
    return k;
  }
  /// Exact coordinate x_k = k (.) h.
  Vec coord(const Index& k) const {
    Vec x{};
    for (int j = 0; j < dim; ++j) x[j] = k[j] * h[j];
    return x;
  }
};

/// Build the grid for the given domain, nominal spacing h_max, anisotropy
/// ratios h_hat (h_j = h_max * h_hat_j), and horizon delta.  Precondition
/// delta >= h_max/2 keeps the interaction layer commensurate with the
/// evaluation margin; couplings that legitimately shrink delta faster
/// (delta = h_max^2 ladders) opt out via allow_small_horizon.
/// Throws config_error("margin-exceeds-layer ...") or
/// config_error("degenerate-domain ...").
GridSpec build_grid(const DomainBox& domain, double h_max, const Vec& h_hat,
                    double delta, bool allow_small_horizon = false);

/// Classification of one node: strictly inside the open box -> Unknown,
/// else Constrained.  Out-of-range indices throw config_error.
NodeClass classify_node(const GridSpec& grid, const Index& k);

/// True when the node is Constrained with dist(x_k, Omega) <= delta+2h_max.
bool auxiliary_node(const GridSpec& grid, const Index& k);

/// Indices k with |x_k - x| <= r (closed Euclidean ball), lexicographic.
std::vector<Index> nodes_in_ball(const GridSpec& grid, const Vec& x, double r);

/// Nodal coefficient field with `comps` interleaved components per node.
struct NodalField {
  int comps = 2;
  std::vector<double> data;  // node-major: data[node * comps + c]

  NodalField() = default;
  NodalField(long nodes, int ncomp) : comps(ncomp), data(nodes * ncomp, 0.0) {}
  double& at(long node, int c) { return data[node * comps + c]; }
  double at(long node, int c) const { return data[node * comps + c]; }
  long nodes() const { return comps ? static_cast<long>(data.size()) / comps : 0; }
};

/// Sample a callable at every grid node (the restriction operator r^h).
NodalField restrict_field(const GridSpec& grid,
                          const std::function<Vec(const Vec&)>& u, int comps);

}  // namespace peridyn
