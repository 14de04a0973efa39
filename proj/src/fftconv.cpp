// SPDX-License-Identifier: MIT
#include "peridyn/fftconv.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>

#include "peridyn/common.hpp"

namespace peridyn {

namespace {

std::mutex& plan_mutex() {
  static std::mutex m;
  return m;
}

int mod(int x, int p) { return ((x % p) + p) % p; }

}  // namespace

int next_fast_size(int n) {
  if (n < 1) throw config_error("next_fast_size: n must be positive");
  for (int s = n;; ++s) {
    int r = s;
    for (int f : {2, 3, 5})
      while (r % f == 0) r /= f;
    if (r == 1) return s;
  }
}

Fft2::Fft2(int n0, int n1) : n0_(n0), n1_(n1) {
  if (n0 < 1 || n1 < 1) throw config_error("Fft2: sizes must be positive");
  std::lock_guard<std::mutex> lock(plan_mutex());
  fftw_complex* tmp = fftw_alloc_complex(static_cast<size_t>(n0) * n1);
  if (tmp == nullptr) throw numerical_error("Fft2: allocation failed");
  plan_f_ = fftw_plan_dft_2d(n0, n1, tmp, tmp, FFTW_FORWARD,
                             FFTW_ESTIMATE | FFTW_UNALIGNED);
  plan_b_ = fftw_plan_dft_2d(n0, n1, tmp, tmp, FFTW_BACKWARD,
                             FFTW_ESTIMATE | FFTW_UNALIGNED);
  fftw_free(tmp);
  if (plan_f_ == nullptr || plan_b_ == nullptr)
    throw numerical_error("Fft2: planning failed");
}

Fft2::~Fft2() {
  std::lock_guard<std::mutex> lock(plan_mutex());
  fftw_destroy_plan(static_cast<fftw_plan>(plan_f_));
  fftw_destroy_plan(static_cast<fftw_plan>(plan_b_));
}

void Fft2::forward(std::complex<double>* data) const {
  fftw_complex* p = reinterpret_cast<fftw_complex*>(data);
  fftw_execute_dft(static_cast<fftw_plan>(plan_f_), p, p);
}

void Fft2::backward(std::complex<double>* data) const {
  fftw_complex* p = reinterpret_cast<fftw_complex*>(data);
  fftw_execute_dft(static_cast<fftw_plan>(plan_b_), p, p);
}

SpectralOp::SpectralOp(const GridSpec& grid, const StencilSet& st)
    : dim_(grid.dim) {
  if (dim_ != 2)
    throw config_error("SpectralOp: spectral application requires dim == 2");
  n0_ = grid.n[0];
  n1_ = grid.n[1];
  P0_ = next_fast_size(n0_ + 4 * st.reach[0]);
  P1_ = next_fast_size(n1_ + 4 * st.reach[1]);
  fft_ = std::make_shared<Fft2>(P0_, P1_);
  const long np = pad_points();

  // Place a stencil box at negated offsets so that circular convolution
  // realizes out[k] = sum_o kern[o] u[k + o].
  auto place = [&](const std::vector<double>& kern,
                   std::vector<std::complex<double>>& hat) {
    hat.assign(np, {0.0, 0.0});
    Index o{};
    for (o[0] = -st.reach[0]; o[0] <= st.reach[0]; ++o[0])
      for (o[1] = -st.reach[1]; o[1] <= st.reach[1]; ++o[1]) {
        const double v = kern[st.slot(o, st.reach)];
        if (v == 0.0) continue;
        hat[static_cast<long>(mod(-o[0], P0_)) * P1_ + mod(-o[1], P1_)] = v;
      }
    fft_->forward(hat.data());
  };

  std::vector<std::complex<double>> vhat[2];
  for (int i = 0; i < dim_; ++i) place(st.grad[i], vhat[i]);
  for (int i = 0; i < dim_; ++i)
    for (int c = i; c < dim_; ++c) {
      place(st.bond[i][c], mult_[i][c]);
      for (long f = 0; f < np; ++f)
        mult_[i][c][f] =
            st.c_bond * mult_[i][c][f] + st.c_state * vhat[i][f] * vhat[c][f];
    }
  for (int i = 0; i < dim_; ++i) {
    buf_[i].resize(np);
    acc_[i].resize(np);
  }
}

void SpectralOp::apply(const NodalField& u, NodalField& out) const {
  const long np = pad_points();
  for (int c = 0; c < dim_; ++c) {
    std::fill(buf_[c].begin(), buf_[c].end(), std::complex<double>(0.0, 0.0));
    for (int a = 0; a < n0_; ++a)
      for (int b = 0; b < n1_; ++b)
        buf_[c][static_cast<long>(a) * P1_ + b] =
            u.at(static_cast<long>(a) * n1_ + b, c);
    fft_->forward(buf_[c].data());
  }
  for (int i = 0; i < dim_; ++i) {
    std::fill(acc_[i].begin(), acc_[i].end(), std::complex<double>(0.0, 0.0));
    for (int c = 0; c < dim_; ++c) {
      const auto& m = mult_[std::min(i, c)][std::max(i, c)];
      for (long f = 0; f < np; ++f) acc_[i][f] += m[f] * buf_[c][f];
    }
    fft_->backward(acc_[i].data());
  }
  if (out.nodes() != static_cast<long>(n0_) * n1_ || out.comps != dim_)
    out = NodalField(static_cast<long>(n0_) * n1_, dim_);
  const double scale = 1.0 / static_cast<double>(np);
  for (int i = 0; i < dim_; ++i)
    for (int a = 0; a < n0_; ++a)
      for (int b = 0; b < n1_; ++b)
        out.at(static_cast<long>(a) * n1_ + b, i) =
            scale * acc_[i][static_cast<long>(a) * P1_ + b].real();
}

CirculantPrecond::CirculantPrecond(const GridSpec& grid, const StencilSet& st)
    : dim_(grid.dim) {
  if (dim_ != 2)
    throw config_error(
        "CirculantPrecond: spectral preconditioner requires dim == 2");
  // The Unknown nodes of a box domain form a contiguous index box.
  Index klo = {INT32_MAX, INT32_MAX, 0}, khi = {INT32_MIN, INT32_MIN, 0};
  for (long u = 0; u < grid.num_unknown; ++u) {
    const Index k = grid.node_at(grid.unknown_nodes[u]);
    for (int j = 0; j < dim_; ++j) {
      klo[j] = std::min(klo[j], k[j]);
      khi[j] = std::max(khi[j], k[j]);
    }
  }
  n0_ = khi[0] - klo[0] + 1;
  n1_ = khi[1] - klo[1] + 1;
  if (static_cast<long>(n0_) * n1_ != grid.num_unknown)
    throw config_error("CirculantPrecond: Unknown nodes do not form a box");
  fft_ = std::make_shared<Fft2>(n0_, n1_);
  const long np = static_cast<long>(n0_) * n1_;

  // Periodize bond and gradient stencils onto the Unknown box (negated
  // offsets, wrap-around), then form the per-frequency blocks of -L.
  auto place = [&](const std::vector<double>& kern,
                   std::vector<std::complex<double>>& hat) {
    hat.assign(np, {0.0, 0.0});
    Index o{};
    for (o[0] = -st.reach[0]; o[0] <= st.reach[0]; ++o[0])
      for (o[1] = -st.reach[1]; o[1] <= st.reach[1]; ++o[1]) {
        const double v = kern[st.slot(o, st.reach)];
        if (v == 0.0) continue;
        hat[static_cast<long>(mod(-o[0], n0_)) * n1_ + mod(-o[1], n1_)] += v;
      }
    fft_->forward(hat.data());
  };

  std::vector<std::complex<double>> vhat[2], bhat[2][2];
  for (int i = 0; i < dim_; ++i) place(st.grad[i], vhat[i]);
  for (int i = 0; i < dim_; ++i)
    for (int c = i; c < dim_; ++c) place(st.bond[i][c], bhat[i][c]);

  std::vector<double> blk[2][2];
  for (int i = 0; i < dim_; ++i)
    for (int c = i; c < dim_; ++c) blk[i][c].resize(np);
  double lam_max = 0.0;
  double lam_min_nz = 0.0;  // smallest eigenvalue over nonzero frequencies
  bool have_nz = false;
  for (long f = 0; f < np; ++f) {
    for (int i = 0; i < dim_; ++i)
      for (int c = i; c < dim_; ++c)
        blk[i][c][f] = -(st.c_bond * bhat[i][c][f].real() +
                         st.c_state * (vhat[i][f] * vhat[c][f]).real());
    const double a = blk[0][0][f], b = blk[0][1][f], cc = blk[1][1][f];
    const double mid = 0.5 * (a + cc);
    const double rad = std::sqrt(0.25 * (a - cc) * (a - cc) + b * b);
    lam_max = std::max(lam_max, mid + rad);
    if (f != 0) {
      lam_min_nz = have_nz ? std::min(lam_min_nz, mid - rad) : mid - rad;
      have_nz = true;
    }
  }
  if (!(lam_max > 0.0) || !have_nz || !(lam_min_nz > 0.0))
    throw numerical_error(
        "CirculantPrecond: periodized operator is not positive");
  // The zero frequency of the periodic operator is exactly singular
  // (stencils annihilate constants).  Clamp it -- and any other deficient
  // eigenvalue -- to the slowest genuine mode, which is also the scale of
  // the truncated operator's lowest mode; a much smaller floor would
  // amplify the constant component and destroy the Krylov conditioning.
  const double floor_eig = std::max(lam_min_nz, 1e-12 * lam_max);

  for (int i = 0; i < dim_; ++i)
    for (int c = i; c < dim_; ++c) inv_[i][c].resize(np);
  for (long f = 0; f < np; ++f) {
    const double a = blk[0][0][f], b = blk[0][1][f], cc = blk[1][1][f];
    const double mid = 0.5 * (a + cc);
    const double rad = std::sqrt(0.25 * (a - cc) * (a - cc) + b * b);
    const double l1 = std::max(mid + rad, floor_eig);
    const double l2 = std::max(mid - rad, floor_eig);
    // Eigenvector for l1 of [[a, b], [b, cc]].
    double v0, v1;
    if (std::abs(b) > 1e-300 * (std::abs(a) + std::abs(cc) + 1.0)) {
      v0 = mid + rad - cc;
      v1 = b;
    } else if (a >= cc) {
      v0 = 1.0;
      v1 = 0.0;
    } else {
      v0 = 0.0;
      v1 = 1.0;
    }
    const double nrm = std::sqrt(v0 * v0 + v1 * v1);
    v0 /= nrm;
    v1 /= nrm;
    inv_[0][0][f] = v0 * v0 / l1 + v1 * v1 / l2;
    inv_[0][1][f] = v0 * v1 / l1 - v0 * v1 / l2;
    inv_[1][1][f] = v1 * v1 / l1 + v0 * v0 / l2;
  }
  for (int i = 0; i < dim_; ++i) buf_[i].resize(np);
}

void CirculantPrecond::apply(const std::vector<double>& r,
                             std::vector<double>& z) const {
  const long np = static_cast<long>(n0_) * n1_;
  if (static_cast<long>(r.size()) != np * dim_)
    throw config_error("CirculantPrecond: size mismatch");
  z.assign(r.size(), 0.0);
  for (int c = 0; c < dim_; ++c) {
    for (long u = 0; u < np; ++u) buf_[c][u] = r[u * dim_ + c];
    fft_->forward(buf_[c].data());
  }
  // In place: rhat -> sum_c inv_[i][c] rhat_c per frequency.
  for (long f = 0; f < np; ++f) {
    const std::complex<double> r0 = buf_[0][f], r1 = buf_[1][f];
    buf_[0][f] = inv_[0][0][f] * r0 + inv_[0][1][f] * r1;
    buf_[1][f] = inv_[0][1][f] * r0 + inv_[1][1][f] * r1;
  }
  const double scale = 1.0 / static_cast<double>(np);
  for (int i = 0; i < dim_; ++i) {
    fft_->backward(buf_[i].data());
    for (long u = 0; u < np; ++u) z[u * dim_ + i] = scale * buf_[i][u].real();
  }
}

}  // namespace peridyn
