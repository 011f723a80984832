//
// Copyright © 2026 The turf Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include "turf/fixed_point.hpp"
#include "turf/kernels.hpp"

#include <boost/rational.hpp>

#include <cstdint>
#include <vector>

namespace turf {

using Rational = boost::rational<int64_t>;

/// Small dense row-major matrix used for the transform constants and tiles.
template <class T>
struct Matrix {
  size_t rows = 0;
  size_t cols = 0;
  std::vector<T> values;

  Matrix() = default;
  Matrix(size_t r, size_t c) : rows(r), cols(c), values(r * c, T(0)) {}

  T& operator()(size_t r, size_t c) { return values[r * cols + c]; }
  const T& operator()(size_t r, size_t c) const { return values[r * cols + c]; }

  friend bool operator==(const Matrix&, const Matrix&) = default;
};

template <class T>
Matrix<T> transpose(const Matrix<T>& a) {
  Matrix<T> t(a.cols, a.rows);
  for (size_t i = 0; i < a.rows; ++i) {
    for (size_t j = 0; j < a.cols; ++j) t(j, i) = a(i, j);
  }
  return t;
}

template <class T>
Matrix<T> matmul(const Matrix<T>& a, const Matrix<T>& b) {
  Matrix<T> c(a.rows, b.cols);
  for (size_t i = 0; i < a.rows; ++i) {
    for (size_t k = 0; k < a.cols; ++k) {
      const T aik = a(i, k);
      if (aik == T(0)) continue;
      for (size_t j = 0; j < b.cols; ++j) c(i, j) += aik * b(k, j);
    }
  }
  return c;
}

template <class T>
Matrix<T> hadamard(const Matrix<T>& a, const Matrix<T>& b) {
  Matrix<T> c(a.rows, a.cols);
  for (size_t i = 0; i < a.values.size(); ++i) c.values[i] = a.values[i] * b.values[i];
  return c;
}

template <class To, class From>
Matrix<To> matrix_cast(const Matrix<From>& a) {
  Matrix<To> out(a.rows, a.cols);
  for (size_t i = 0; i < a.values.size(); ++i) {
    if constexpr (std::is_same_v<From, Rational> && std::is_floating_point_v<To>) {
      out.values[i] = boost::rational_cast<To>(a.values[i]);
    } else {
      out.values[i] = static_cast<To>(a.values[i]);
    }
  }
  return out;
}

/// Minimal filtering instance F(m x m, r x r) built by Toom-Cook
/// interpolation over finite points plus the point at infinity.
///
/// Stored matrices follow Y = A^T [(G g G^T) . (B^T d B)] A with
/// A: (m+r-1) x m, B: (m+r-1) x (m+r-1), G: (m+r-1) x r. The 1/f_j
/// interpolation scaling is folded into G so that A and B stay integral.
struct WinogradConfig {
  int m = 4;
  int r = 3;
  std::vector<Rational> points;
  Matrix<Rational> A, B, G;

  /// Supported instances: (m, r) = (2, 3) with points {0, 1, -1} and
  /// (4, 3) with points {0, 1, -1, 2, -2}. Throws UnsupportedConfig.
  static WinogradConfig make(int m, int r);

  int tile() const { return m + r - 1; }
  /// Element-wise multiplies per 2-D tile: (m + r - 1)^2.
  int64_t winograd_multiplies() const { return int64_t{tile()} * tile(); }
  /// Multiplies direct correlation needs for the same m x m outputs: m^2 r^2.
  int64_t direct_multiplies() const { return int64_t{m} * m * r * r; }
  double speedup() const {
    return static_cast<double>(direct_multiplies()) / static_cast<double>(winograd_multiplies());
  }
};

/// True for 0 and +-2^k (k any integer): constants realisable as shifts.
bool is_shift_constant(const Rational& value);

/// Number of entries that need a real multiplier (not a shift or zero).
size_t count_multiplier_constants(const Matrix<Rational>& m);

/// One output tile: A^T [(G g G^T) . (B^T d B)] A for a (m+r-1)^2 input
/// tile `d` and r x r kernel `g`.
template <class T>
Matrix<T> winograd_tile(const WinogradConfig& cfg, const Matrix<T>& d, const Matrix<T>& g) {
  const auto A = matrix_cast<T>(cfg.A);
  const auto B = matrix_cast<T>(cfg.B);
  const auto G = matrix_cast<T>(cfg.G);
  const auto U = matmul(matmul(G, g), transpose(G));
  const auto V = matmul(matmul(transpose(B), d), B);
  return matmul(matmul(transpose(A), hadamard(U, V)), A);
}

/// Direct 2-D correlation of the valid region of `d` with `g`.
template <class T>
Matrix<T> correlate_valid(const Matrix<T>& d, const Matrix<T>& g) {
  Matrix<T> y(d.rows - g.rows + 1, d.cols - g.cols + 1);
  for (size_t i = 0; i < y.rows; ++i) {
    for (size_t j = 0; j < y.cols; ++j) {
      T acc(0);
      for (size_t h = 0; h < g.rows; ++h) {
        for (size_t w = 0; w < g.cols; ++w) acc += d(i + h, j + w) * g(h, w);
      }
      y(i, j) = acc;
    }
  }
  return y;
}

/// Stride-1 correlation through minimal filtering. Edge tiles are zero
/// padded to the full tile size and the output is cropped back. Throws
/// UnsupportedConfig for kernel != cfg.r or stride != 1 and ShapeMismatch
/// for channel mismatches.
Tensor3 conv_winograd(const Tensor3& input, const Filter4& filter, const WinogradConfig& cfg,
                      int padding = 1, int stride = 1);

/// Depthwise variant: one kernel per channel, no cross-channel sum.
Tensor3 conv_winograd_depthwise(const Tensor3& input, const Filter4& filter,
                                const WinogradConfig& cfg, int padding = 1);

/// Format for values after applying `transform` on both sides to data in
/// `fmt`: same word width, fraction bits reduced by the worst-case growth
/// ceil(log2(max row L1 norm ^ 2)) so the transform cannot saturate.
FixedPointFormat transform_format(const FixedPointFormat& fmt, const Matrix<Rational>& transform);

/// Winograd datapath in fixed point. Inputs and weights are quantized to
/// `fmt`; transformed weights and tiles are rounded to transform_format();
/// products accumulate at full precision and the output transform result is
/// rounded to `fmt`.
Tensor3 conv_winograd_fixed(const Tensor3& input, const Filter4& filter,
                            const WinogradConfig& cfg, const FixedPointFormat& fmt,
                            int padding = 1);

/// Direct correlation on quantized inputs and weights with a quantized result.
Tensor3 conv_direct_fixed(const Tensor3& input, const Filter4& filter,
                          const FixedPointFormat& fmt, int padding = 1);

}  // namespace turf
