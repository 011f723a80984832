//
// Copyright © 2026 The turf Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include "turf/error.hpp"
#include "turf/kernels.hpp"

#include <gtest/gtest.h>

#include <random>

namespace turf::testing {

template <class Fn>
ErrorKind kind_of(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "expected an Error";
  return ErrorKind::FormatError;
}

inline Tensor3 random_tensor(std::mt19937_64& rng, TensorShape shape, double lo = -1.0,
                             double hi = 1.0) {
  std::uniform_real_distribution<double> dist(lo, hi);
  Tensor3 t(shape);
  for (double& v : t.data()) v = dist(rng);
  return t;
}

inline Filter4 random_filter(std::mt19937_64& rng, int64_t f, int64_t c, int k, double lo = -1.0,
                             double hi = 1.0) {
  std::uniform_real_distribution<double> dist(lo, hi);
  Filter4 w(f, c, k);
  for (double& v : w.data()) v = dist(rng);
  return w;
}

}  // namespace turf::testing
