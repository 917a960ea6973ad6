#pragma once

// Dense complex LU with partial pivoting for the small fixed-size systems of
// the steady-state solver. The dimension is a handful, so a direct in-place
// factorization beats anything fancier and stays bit-deterministic. The
// factorization is kept so several right-hand sides can share it.

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <string>

#include "tripod/errors.hpp"
#include "tripod/params.hpp"

namespace tripod {

template <std::size_t N>
struct square_matrix {
  std::array<complex, N * N> a{};

  complex& operator()(std::size_t i, std::size_t j) { return a[i * N + j]; }
  const complex& operator()(std::size_t i, std::size_t j) const {
    return a[i * N + j];
  }
};

template <std::size_t N>
using vec = std::array<complex, N>;

template <std::size_t N>
struct linear_system {
  square_matrix<N> matrix;
  vec<N> rhs;
};

// A pivot below 1e-12 times the largest input row norm marks the system as
// numerically rank-deficient and throws singular_system.
template <std::size_t N>
class lu_factorization {
 public:
  explicit lu_factorization(square_matrix<N> m) : lu_(m) {
    double row_norm_max = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      double row = 0.0;
      for (std::size_t j = 0; j < N; ++j) row += std::abs(lu_(i, j));
      row_norm_max = std::max(row_norm_max, row);
    }
    const double pivot_floor = 1e-12 * row_norm_max;

    for (std::size_t col = 0; col < N; ++col) {
      std::size_t pivot_row = col;
      double best = std::abs(lu_(col, col));
      for (std::size_t i = col + 1; i < N; ++i) {
        const double cand = std::abs(lu_(i, col));
        if (cand > best) {
          best = cand;
          pivot_row = i;
        }
      }
      if (best <= pivot_floor)
        throw singular_system("pivot below threshold at column " +
                              std::to_string(col));
      perm_[col] = pivot_row;
      if (pivot_row != col)
        for (std::size_t j = 0; j < N; ++j)
          std::swap(lu_(col, j), lu_(pivot_row, j));
      pivot_min_ = (col == 0) ? best : std::min(pivot_min_, best);
      pivot_max_ = std::max(pivot_max_, best);

      const complex inv_pivot = 1.0 / lu_(col, col);
      for (std::size_t i = col + 1; i < N; ++i) {
        const complex factor = lu_(i, col) * inv_pivot;
        lu_(i, col) = factor;
        if (factor == complex{}) continue;
        for (std::size_t j = col + 1; j < N; ++j)
          lu_(i, j) -= factor * lu_(col, j);
      }
    }
  }

  vec<N> solve(vec<N> b) const {
    // The factorization swapped whole rows, multipliers included, so the
    // stored L is ordered by the final permutation: permute b completely
    // before the triangular sweeps.
    for (std::size_t col = 0; col < N; ++col)
      if (perm_[col] != col) std::swap(b[col], b[perm_[col]]);
    for (std::size_t col = 0; col < N; ++col)
      for (std::size_t i = col + 1; i < N; ++i) b[i] -= lu_(i, col) * b[col];
    vec<N> x{};
    for (std::size_t ii = N; ii-- > 0;) {
      complex acc = b[ii];
      for (std::size_t j = ii + 1; j < N; ++j) acc -= lu_(ii, j) * x[j];
      x[ii] = acc / lu_(ii, ii);
    }
    return x;
  }

  double pivot_min() const { return pivot_min_; }
  double condition_proxy() const {
    return pivot_min_ > 0.0 ? pivot_max_ / pivot_min_ : 0.0;
  }

 private:
  square_matrix<N> lu_;
  std::array<std::size_t, N> perm_{};
  double pivot_min_ = 0.0;
  double pivot_max_ = 0.0;
};

template <std::size_t N>
vec<N> solve_linear(const linear_system<N>& system) {
  return lu_factorization<N>(system.matrix).solve(system.rhs);
}

}
