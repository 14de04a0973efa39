// SPDX-License-Identifier: MIT
// FFT-based application of the translation-invariant collocation operator
// for grids whose explicit matrix would not fit in memory, plus the
// circulant preconditioner that accelerates the iterative solver there.
#pragma once

#include <complex>
#include <memory>
#include <vector>

#include "peridyn/grid.hpp"
#include "peridyn/stencil.hpp"

namespace peridyn {

/// Smallest 5-smooth integer >= n (FFT-friendly size).
int next_fast_size(int n);

/// Cached-plan complex 2D FFT (FFTW backend), in-place on row-major data.
class Fft2 {
 public:
  Fft2(int n0, int n1);
  ~Fft2();
  Fft2(const Fft2&) = delete;
  Fft2& operator=(const Fft2&) = delete;

  void forward(std::complex<double>* data) const;
  /// Unnormalized inverse (scale by 1/(n0*n1) after).
  void backward(std::complex<double>* data) const;
  int n0() const { return n0_; }
  int n1() const { return n1_; }

 private:
  int n0_, n1_;
  void* plan_f_;
  void* plan_b_;
};

/// The composed operator L^S as a zero-padded linear convolution: the
/// multiplier of block (i, c) on the padded frequency grid is
///   M_ic = c_bond * What_ic + c_state * Vhat_i * conj-free product Vhat_c,
/// built once from FFTs of the stencil boxes (offsets placed negated, so
/// circular convolution realizes the stencil correlation).  Padding
/// P_j >= n_j + 4 reach_j keeps every output at a grid node wrap-free.
class SpectralOp {
 public:
  SpectralOp(const GridSpec& grid, const StencilSet& st);

  /// out = L^S u on the full node grid (valid wherever stencil_apply is;
  /// constrained input entries participate like any other coefficient).
  void apply(const NodalField& u, NodalField& out) const;

  long pad_points() const { return static_cast<long>(P0_) * P1_; }

 private:
  int dim_;
  int n0_, n1_;  // full node box
  int P0_, P1_;  // padded FFT box
  std::shared_ptr<Fft2> fft_;
  std::vector<std::complex<double>> mult_[3][3];  // symmetric in (i, c)
  mutable std::vector<std::complex<double>> buf_[3], acc_[3];
};

/// Jacobi-like spectral preconditioner: the periodization of L^S on the
/// Unknown-node box, inverted per frequency with eigenvalue clamping (the
/// zero frequency of the periodic operator is singular; clamping keeps the
/// preconditioner SPD without disturbing the resolved frequencies).
class CirculantPrecond {
 public:
  CirculantPrecond(const GridSpec& grid, const StencilSet& st);

  /// z = M^{-1} r over Unknown DOFs ordered (unknown node id, component).
  void apply(const std::vector<double>& r, std::vector<double>& z) const;

 private:
  int dim_;
  int n0_, n1_;  // unknown box
  std::shared_ptr<Fft2> fft_;
  std::vector<double> inv_[3][3];  // real symmetric inverse blocks per freq
  mutable std::vector<std::complex<double>> buf_[3];
};

}  // namespace peridyn
