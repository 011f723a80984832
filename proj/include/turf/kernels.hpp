//
// Copyright © 2026 The turf Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include "turf/model_ir.hpp"

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

namespace turf {

/// Dense feature map stored channel-major as [c][y][x].
class Tensor3 {
 public:
  Tensor3() = default;
  explicit Tensor3(TensorShape shape);
  Tensor3(TensorShape shape, std::vector<double> data);

  const TensorShape& shape() const { return shape_; }
  std::span<const double> data() const { return data_; }
  std::span<double> data() { return data_; }

  double& at(int64_t c, int64_t y, int64_t x) {
    return data_[static_cast<size_t>((c * shape_.height + y) * shape_.width + x)];
  }
  double at(int64_t c, int64_t y, int64_t x) const {
    return data_[static_cast<size_t>((c * shape_.height + y) * shape_.width + x)];
  }
  /// Zero outside the tensor bounds.
  double at_or_zero(int64_t c, int64_t y, int64_t x) const {
    if (y < 0 || x < 0 || y >= shape_.height || x >= shape_.width) return 0.0;
    return at(c, y, x);
  }

  friend bool operator==(const Tensor3&, const Tensor3&) = default;

 private:
  TensorShape shape_;
  std::vector<double> data_;
};

/// Convolution weights stored as [f][c][kh][kw]. A depthwise filter is the
/// degenerate case with in_channels() == 1 and one kernel per channel.
class Filter4 {
 public:
  Filter4() = default;
  Filter4(int64_t filters, int64_t channels, int kernel);
  Filter4(int64_t filters, int64_t channels, int kernel, std::vector<double> data);

  static Filter4 depthwise(int64_t channels, int kernel) { return {channels, 1, kernel}; }

  int64_t out_channels() const { return filters_; }
  int64_t in_channels() const { return channels_; }
  int kernel() const { return kernel_; }
  std::span<const double> data() const { return data_; }
  std::span<double> data() { return data_; }

  double& at(int64_t f, int64_t c, int h, int w) {
    return data_[static_cast<size_t>(((f * channels_ + c) * kernel_ + h) * kernel_ + w)];
  }
  double at(int64_t f, int64_t c, int h, int w) const {
    return data_[static_cast<size_t>(((f * channels_ + c) * kernel_ + h) * kernel_ + w)];
  }

 private:
  int64_t filters_ = 0;
  int64_t channels_ = 0;
  int kernel_ = 0;
  std::vector<double> data_;
};

/// Cross-correlation with zero padding. Throws ShapeMismatch when the filter
/// channel count differs from the input.
Tensor3 conv_direct(const Tensor3& input, const Filter4& filter, int stride = 1,
                    int padding = 0);

/// Per-channel spatial correlation; `filter` must be depthwise-shaped.
Tensor3 conv_depthwise(const Tensor3& input, const Filter4& filter, int stride = 1,
                       int padding = 0);

/// Depthwise separable layer: per-channel spatial correlation mixed across
/// channels by a 1x1 filter, evaluated per output pixel.
Tensor3 conv_depthwise_separable(const Tensor3& input, const Filter4& dw_filter,
                                 const Filter4& pw_filter, int stride = 1, int padding = 0);

/// Max |a - b| over all elements. Throws ShapeMismatch on differing shapes.
double max_abs_diff(const Tensor3& a, const Tensor3& b);

/// Flat binary fixture: u64 rank, u64 dims[rank], then f64 values, all
/// little-endian.
void write_tensor(std::ostream& out, std::span<const uint64_t> dims,
                  std::span<const double> values);
struct RawTensor {
  std::vector<uint64_t> dims;
  std::vector<double> values;
};
/// Throws FormatError on truncated or inconsistent input.
RawTensor read_tensor(std::istream& in);

void write_tensor(std::ostream& out, const Tensor3& t);
void write_tensor(std::ostream& out, const Filter4& f);
Tensor3 to_tensor3(const RawTensor& raw);
Filter4 to_filter4(const RawTensor& raw);

}  // namespace turf
