//
// Copyright © 2026 The turf Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "turf/winograd.hpp"

#include "turf/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

namespace turf {
namespace {

using Poly = std::vector<Rational>;  // coefficient of x^t at index t

Poly times_linear(const Poly& p, const Rational& root) {
  Poly out(p.size() + 1, Rational(0));
  for (size_t t = 0; t < p.size(); ++t) {
    out[t + 1] += p[t];
    out[t] -= root * p[t];
  }
  return out;
}

Poly product_except(const std::vector<Rational>& roots, size_t skip) {
  Poly p{Rational(1)};
  for (size_t l = 0; l < roots.size(); ++l) {
    if (l != skip) p = times_linear(p, roots[l]);
  }
  return p;
}

Rational power(const Rational& base, size_t e) {
  Rational v(1);
  for (size_t i = 0; i < e; ++i) v *= base;
  return v;
}

}  // namespace

WinogradConfig WinogradConfig::make(int m, int r) {
  WinogradConfig cfg;
  cfg.m = m;
  cfg.r = r;
  if (r == 3 && m == 2) {
    cfg.points = {Rational(0), Rational(1), Rational(-1)};
  } else if (r == 3 && m == 4) {
    cfg.points = {Rational(0), Rational(1), Rational(-1), Rational(2), Rational(-2)};
  } else {
    throw Error(ErrorKind::UnsupportedConfig,
                "minimal filtering supports F(2,3) and F(4,3) only, got F(" + std::to_string(m) +
                    "," + std::to_string(r) + ")");
  }
  const size_t n = static_cast<size_t>(cfg.tile());
  const size_t finite = n - 1;
  const auto& a = cfg.points;

  cfg.A = Matrix<Rational>(n, static_cast<size_t>(m));
  cfg.G = Matrix<Rational>(n, static_cast<size_t>(r));
  Matrix<Rational> bt(n, n);
  for (size_t j = 0; j < finite; ++j) {
    Rational f(1);
    for (size_t l = 0; l < finite; ++l) {
      if (l != j) f *= a[j] - a[l];
    }
    for (size_t i = 0; i < static_cast<size_t>(m); ++i) cfg.A(j, i) = power(a[j], i);
    for (size_t k = 0; k < static_cast<size_t>(r); ++k) cfg.G(j, k) = power(a[j], k) / f;
    const Poly mj = product_except(a, j);
    for (size_t t = 0; t < mj.size(); ++t) bt(j, t) = mj[t];
  }
  // Point at infinity: leading coefficients of output and kernel.
  cfg.A(finite, static_cast<size_t>(m) - 1) = Rational(1);
  cfg.G(finite, static_cast<size_t>(r) - 1) = Rational(1);
  const Poly full = product_except(a, a.size());
  for (size_t t = 0; t < full.size(); ++t) bt(finite, t) = full[t];
  cfg.B = transpose(bt);
  return cfg;
}

bool is_shift_constant(const Rational& value) {
  if (value == Rational(0)) return true;
  const auto is_pow2 = [](int64_t v) {
    const uint64_t u = static_cast<uint64_t>(std::llabs(v));
    return (u & (u - 1)) == 0;
  };
  return is_pow2(value.numerator()) && is_pow2(value.denominator());
}

size_t count_multiplier_constants(const Matrix<Rational>& m) {
  size_t count = 0;
  for (const auto& v : m.values) count += is_shift_constant(v) ? 0 : 1;
  return count;
}

namespace {

struct NoRounding {
  double weights(double v) const { return v; }
  double tiles(double v) const { return v; }
  double output(double v) const { return v; }
};

struct FixedRounding {
  FixedPointFormat weight_fmt, tile_fmt, output_fmt;
  double weights(double v) const { return quantize(v, weight_fmt); }
  double tiles(double v) const { return quantize(v, tile_fmt); }
  double output(double v) const { return quantize(v, output_fmt); }
};

template <class Fn>
void round_all(Matrix<double>& m, Fn&& round) {
  for (double& v : m.values) v = round(v);
}

int growth_bits(const Matrix<Rational>& rows_of) {
  double worst = 0.0;
  for (size_t i = 0; i < rows_of.rows; ++i) {
    double l1 = 0.0;
    for (size_t j = 0; j < rows_of.cols; ++j) {
      l1 += std::abs(boost::rational_cast<double>(rows_of(i, j)));
    }
    worst = std::max(worst, l1);
  }
  return std::max(0, static_cast<int>(std::ceil(std::log2(worst * worst))));
}

template <class Round>
Tensor3 run_winograd(const Tensor3& input, const Filter4& filter, const WinogradConfig& cfg,
                     int padding, bool depthwise, const Round& round) {
  if (filter.kernel() != cfg.r) {
    throw Error(ErrorKind::UnsupportedConfig,
                "kernel " + std::to_string(filter.kernel()) + " does not match r = " +
                    std::to_string(cfg.r));
  }
  const int64_t channels = input.shape().channels;
  if (depthwise) {
    if (filter.in_channels() != 1 || filter.out_channels() != channels) {
      throw Error(ErrorKind::ShapeMismatch, "depthwise filter must hold one kernel per channel");
    }
  } else if (filter.in_channels() != channels) {
    throw Error(ErrorKind::ShapeMismatch,
                "filter expects " + std::to_string(filter.in_channels()) +
                    " channels, input has " + std::to_string(channels));
  }
  if (padding < 0) throw Error(ErrorKind::ShapeMismatch, "padding must be >= 0");
  const int64_t out_h = input.shape().height + 2 * padding - cfg.r + 1;
  const int64_t out_w = input.shape().width + 2 * padding - cfg.r + 1;
  if (out_h < 1 || out_w < 1) throw Error(ErrorKind::ShapeMismatch, "kernel exceeds padded input");

  const int64_t filters = filter.out_channels();
  const size_t n = static_cast<size_t>(cfg.tile());
  const size_t m = static_cast<size_t>(cfg.m);
  const size_t r = static_cast<size_t>(cfg.r);
  const auto A = matrix_cast<double>(cfg.A);
  const auto At = transpose(A);
  const auto B = matrix_cast<double>(cfg.B);
  const auto Bt = transpose(B);
  const auto G = matrix_cast<double>(cfg.G);
  const auto Gt = transpose(G);

  const int64_t kernels_per_filter = depthwise ? 1 : channels;
  std::vector<Matrix<double>> U;
  U.reserve(static_cast<size_t>(filters * kernels_per_filter));
  for (int64_t f = 0; f < filters; ++f) {
    for (int64_t c = 0; c < kernels_per_filter; ++c) {
      Matrix<double> g(r, r);
      for (size_t h = 0; h < r; ++h) {
        for (size_t w = 0; w < r; ++w) g(h, w) = filter.at(f, c, static_cast<int>(h), static_cast<int>(w));
      }
      auto u = matmul(matmul(G, g), Gt);
      round_all(u, [&](double v) { return round.weights(v); });
      U.push_back(std::move(u));
    }
  }

  Tensor3 out(TensorShape{out_h, out_w, filters});
  std::vector<Matrix<double>> V(static_cast<size_t>(channels));
  const int64_t tm = cfg.m;
  for (int64_t ty = 0; ty < out_h; ty += tm) {
    for (int64_t tx = 0; tx < out_w; tx += tm) {
      for (int64_t c = 0; c < channels; ++c) {
        Matrix<double> d(n, n);
        for (size_t i = 0; i < n; ++i) {
          for (size_t j = 0; j < n; ++j) {
            d(i, j) = input.at_or_zero(c, ty + static_cast<int64_t>(i) - padding,
                                       tx + static_cast<int64_t>(j) - padding);
          }
        }
        auto v = matmul(matmul(Bt, d), B);
        round_all(v, [&](double x) { return round.tiles(x); });
        V[static_cast<size_t>(c)] = std::move(v);
      }
      for (int64_t f = 0; f < filters; ++f) {
        Matrix<double> acc(n, n);
        if (depthwise) {
          acc = hadamard(U[static_cast<size_t>(f)], V[static_cast<size_t>(f)]);
        } else {
          for (int64_t c = 0; c < channels; ++c) {
            const auto& u = U[static_cast<size_t>(f * channels + c)];
            const auto& v = V[static_cast<size_t>(c)];
            for (size_t e = 0; e < acc.values.size(); ++e) acc.values[e] += u.values[e] * v.values[e];
          }
        }
        auto y = matmul(matmul(At, acc), A);
        round_all(y, [&](double v) { return round.output(v); });
        for (size_t i = 0; i < m; ++i) {
          for (size_t j = 0; j < m; ++j) {
            const int64_t oy = ty + static_cast<int64_t>(i);
            const int64_t ox = tx + static_cast<int64_t>(j);
            if (oy < out_h && ox < out_w) out.at(f, oy, ox) = y(i, j);
          }
        }
      }
    }
  }
  return out;
}

}  // namespace

FixedPointFormat transform_format(const FixedPointFormat& fmt, const Matrix<Rational>& transform) {
  fmt.validate();
  FixedPointFormat out = fmt;
  out.fraction_bits = std::max(1, fmt.fraction_bits - growth_bits(transform));
  return out;
}

Tensor3 conv_winograd(const Tensor3& input, const Filter4& filter, const WinogradConfig& cfg,
                      int padding, int stride) {
  if (stride != 1) {
    throw Error(ErrorKind::UnsupportedConfig, "minimal filtering requires stride 1");
  }
  return run_winograd(input, filter, cfg, padding, false, NoRounding{});
}

Tensor3 conv_winograd_depthwise(const Tensor3& input, const Filter4& filter,
                                const WinogradConfig& cfg, int padding) {
  return run_winograd(input, filter, cfg, padding, true, NoRounding{});
}

Tensor3 conv_winograd_fixed(const Tensor3& input, const Filter4& filter,
                            const WinogradConfig& cfg, const FixedPointFormat& fmt,
                            int padding) {
  fmt.validate();
  return run_winograd(quantize(input, fmt), quantize(filter, fmt), cfg, padding, false,
                      FixedRounding{transform_format(fmt, cfg.G),
                                    transform_format(fmt, transpose(cfg.B)), fmt});
}

Tensor3 conv_direct_fixed(const Tensor3& input, const Filter4& filter,
                          const FixedPointFormat& fmt, int padding) {
  fmt.validate();
  return quantize(conv_direct(quantize(input, fmt), quantize(filter, fmt), 1, padding), fmt);
}

}  // namespace turf
