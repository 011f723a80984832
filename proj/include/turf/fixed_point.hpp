//
// Copyright © 2026 The turf Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include "turf/kernels.hpp"

namespace turf {

/// Signed two's-complement fixed point, round-to-nearest-even, saturating.
struct FixedPointFormat {
  int total_bits = 16;
  int fraction_bits = 8;

  /// Throws UnsupportedConfig unless 1 <= fraction_bits < total_bits <= 32.
  void validate() const;
  double step() const;
  double max_value() const;
  double min_value() const;
};

double quantize(double value, const FixedPointFormat& fmt);
Tensor3 quantize(const Tensor3& t, const FixedPointFormat& fmt);
Filter4 quantize(const Filter4& f, const FixedPointFormat& fmt);

}  // namespace turf
