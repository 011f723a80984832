//
// Copyright © 2026 The turf Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "turf/fixed_point.hpp"

#include "turf/error.hpp"

#include <algorithm>
#include <cmath>

namespace turf {

void FixedPointFormat::validate() const {
  if (fraction_bits < 1 || fraction_bits >= total_bits || total_bits > 32) {
    throw Error(ErrorKind::UnsupportedConfig,
                "fixed-point format needs 1 <= fraction_bits < total_bits <= 32, got (" +
                    std::to_string(total_bits) + ", " + std::to_string(fraction_bits) + ")");
  }
}

double FixedPointFormat::step() const { return std::ldexp(1.0, -fraction_bits); }

double FixedPointFormat::max_value() const {
  return std::ldexp(std::ldexp(1.0, total_bits - 1) - 1.0, -fraction_bits);
}

double FixedPointFormat::min_value() const {
  return std::ldexp(-std::ldexp(1.0, total_bits - 1), -fraction_bits);
}

double quantize(double value, const FixedPointFormat& fmt) {
  fmt.validate();
  // nearbyint honours the default rounding mode, round-half-to-even.
  const double hi = std::ldexp(1.0, fmt.total_bits - 1) - 1.0;
  const double lo = -std::ldexp(1.0, fmt.total_bits - 1);
  const double code = std::clamp(std::nearbyint(std::ldexp(value, fmt.fraction_bits)), lo, hi);
  return std::ldexp(code, -fmt.fraction_bits);
}

Tensor3 quantize(const Tensor3& t, const FixedPointFormat& fmt) {
  Tensor3 out = t;
  for (double& v : out.data()) v = quantize(v, fmt);
  return out;
}

Filter4 quantize(const Filter4& f, const FixedPointFormat& fmt) {
  Filter4 out = f;
  for (double& v : out.data()) v = quantize(v, fmt);
  return out;
}

}  // namespace turf
