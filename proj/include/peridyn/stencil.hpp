// SPDX-License-Identifier: MIT
// Translation-invariant collocation stencils of the nonlocal operators on
// the anchored lattice: one quadrature pass builds per-offset weights that
// every matrix row and operator application reuses.
#pragma once

#include <vector>

#include "peridyn/common.hpp"
#include "peridyn/grid.hpp"
#include "peridyn/nlops.hpp"

namespace peridyn {

/// Dense box of per-offset weights, offsets o with |o_j| <= reach_j.
/// For a collocation point x_j and basis node x_{j+o}:
///   bond[i][c][o] = int rho_delta (s_i s_c/|s|^2)(Psi_{j+o}(x_j+s) -
///                   Psi_{j+o}(x_j)) ds
///   grad[c][o]    = int rho_delta s_c (Psi_{j+o}(x_j+s) -
///                   Psi_{j+o}(x_j)) ds
/// (ball integral or quasi-discrete sum, per the BallScheme).  The
/// subtracted center terms use the same quadrature pass, so partition of
/// unity makes every stencil annihilate constants to roundoff.
struct StencilSet {
  int dim = 2;
  Index reach{};   // bond/gradient reach per axis: ceil(delta/h_j) + 2
  Index reach2{};  // composed state reach = 2 * reach (explicit path)
  double m = 0.0;  // kernel weighted volume
  double c_bond = 0.0;   // C_alpha mu / m
  double c_state = 0.0;  // C_beta d (lambda - mu) / m^2

  std::vector<double> bond[3][3];  // symmetric in (i, c)
  std::vector<double> grad[3];
  /// Composed state stencil (grad[i] convolved with grad[c]); empty until
  /// compose_state() fills it.  Only the explicit-matrix path needs it.
  std::vector<double> state[3][3];

  long box_size(const Index& r) const {
    long sz = 1;
    for (int j = 0; j < dim; ++j) sz *= 2 * r[j] + 1;
    return sz;
  }
  /// Linear slot of offset o inside a box of the given reach (lexicographic
  /// over o + reach).
  long slot(const Index& o, const Index& r) const {
    long id = o[0] + r[0];
    for (int j = 1; j < dim; ++j) id = id * (2 * r[j] + 1) + (o[j] + r[j]);
    return id;
  }
};

/// One scatter pass over the BallScheme's quadrature points: every point
/// s contributes to the <= 4^d basis offsets whose support contains s.
/// Deterministic (panel-major points, compensated per-entry accumulation).
StencilSet build_stencils(const GridSpec& grid, const BallScheme& scheme,
                          const Material& mat);

/// Fill StencilSet::state with the spatial convolution
///   state[i][c][o] = sum_t grad[i][t] grad[c][o - t].
/// Cost is O(box^2); intended for the coarse grids the explicit matrix
/// path handles.
void compose_state(StencilSet& st);

/// y = L^S u by two stencil passes over the full node grid (pass 1: nodal
/// divergence; pass 2: bond part + gradient of the interpolated
/// divergence).  Outputs are valid at nodes at least 2*reach inside the
/// indexed box -- in particular at every Unknown node; other entries are
/// left zero.  u must cover the whole grid (constrained entries included).
void stencil_apply(const GridSpec& grid, const StencilSet& st,
                   const NodalField& u, NodalField& out);

}  // namespace peridyn
