// SPDX-License-Identifier: MIT
// Shared utilities: error types, compensated summation, thread cap, hashing.
#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>

namespace peridyn {

/// Spatial point / vector, padded to three slots; the active dimension is
/// carried separately (d = 2 or 3).  Unused slots are always zero.
using Vec = std::array<double, 3>;

/// Lattice multi-index, padded like Vec.
using Index = std::array<int, 3>;

inline Vec make_vec(double x, double y, double z = 0.0) { return {x, y, z}; }

inline double dot(const Vec& a, const Vec& b, int dim) {
  double s = a[0] * b[0] + a[1] * b[1];
  if (dim > 2) s += a[2] * b[2];
  return s;
}

inline double norm2(const Vec& a, int dim) { return dot(a, a, dim); }

inline double norm(const Vec& a, int dim) { return std::sqrt(norm2(a, dim)); }

/// Raised for invalid user-facing configuration (bad keys, bad values,
/// violated preconditions that a config change would fix).  CLI exit code 2.
struct config_error : std::runtime_error {
  explicit config_error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Raised when a numerical routine cannot deliver its contract (singular
/// matrix, stagnating iteration, nonconvergent lattice sum, infeasible
/// moment constraints, ...).  CLI exit code 3.
struct numerical_error : std::runtime_error {
  explicit numerical_error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Kahan-Babuska compensated accumulator.  Quadrature loops sum millions of
/// terms of mixed sign; plain summation loses 3-4 digits there.
class Kahan {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }
  void reset() {
    sum_ = 0.0;
    comp_ = 0.0;
  }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

/// Maximum worker threads: min(hardware, PERIDYN_THREADS if set).  All
/// parallel loops produce bitwise-identical results for any thread count
/// (each task writes a preassigned slot; no reductions across threads).
int max_threads();

/// Run body(i) for i in [0,n) over at most max_threads() workers.
void parallel_for(long n, const std::function<void(long)>& body);

/// FNV-1a 64-bit hash (stable across platforms; used for config hashes).
inline std::uint64_t fnv1a64(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

/// Deterministic float formatting for CSV output ("%.12g").
std::string format_g(double v);

}  // namespace peridyn
