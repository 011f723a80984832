//
// Copyright © 2026 The turf Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "turf/kernels.hpp"

#include "turf/error.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <istream>
#include <ostream>

namespace turf {

Tensor3::Tensor3(TensorShape shape)
    : shape_(TensorShape::make(shape.height, shape.width, shape.channels)),
      data_(static_cast<size_t>(shape.elements()), 0.0) {}

Tensor3::Tensor3(TensorShape shape, std::vector<double> data)
    : shape_(TensorShape::make(shape.height, shape.width, shape.channels)),
      data_(std::move(data)) {
  if (data_.size() != static_cast<size_t>(shape_.elements())) {
    throw Error(ErrorKind::ShapeMismatch, "tensor data length does not match " +
                                              to_string(shape_));
  }
}

Filter4::Filter4(int64_t filters, int64_t channels, int kernel)
    : Filter4(filters, channels, kernel,
              std::vector<double>(static_cast<size_t>(filters * channels * kernel * kernel))) {}

Filter4::Filter4(int64_t filters, int64_t channels, int kernel, std::vector<double> data)
    : filters_(filters), channels_(channels), kernel_(kernel), data_(std::move(data)) {
  if (filters < 1 || channels < 1 || kernel < 1) {
    throw Error(ErrorKind::ShapeMismatch, "filter dimensions must be >= 1");
  }
  if (data_.size() != static_cast<size_t>(filters * channels * kernel * kernel)) {
    throw Error(ErrorKind::ShapeMismatch, "filter data length does not match F*C*K*K");
  }
}

namespace {

TensorShape conv_output(const TensorShape& in, int64_t channels, int kernel, int stride,
                        int padding) {
  if (stride < 1 || padding < 0) {
    throw Error(ErrorKind::ShapeMismatch, "stride must be >= 1 and padding >= 0");
  }
  const int64_t h = in.height + 2 * padding - kernel;
  const int64_t w = in.width + 2 * padding - kernel;
  if (h < 0 || w < 0) throw Error(ErrorKind::ShapeMismatch, "kernel exceeds padded input");
  return TensorShape::make(h / stride + 1, w / stride + 1, channels);
}

}  // namespace

Tensor3 conv_direct(const Tensor3& input, const Filter4& filter, int stride, int padding) {
  if (filter.in_channels() != input.shape().channels) {
    throw Error(ErrorKind::ShapeMismatch,
                "filter expects " + std::to_string(filter.in_channels()) +
                    " channels, input has " + std::to_string(input.shape().channels));
  }
  const int k = filter.kernel();
  Tensor3 out(conv_output(input.shape(), filter.out_channels(), k, stride, padding));
  const auto& os = out.shape();
  for (int64_t f = 0; f < os.channels; ++f) {
    for (int64_t y = 0; y < os.height; ++y) {
      for (int64_t x = 0; x < os.width; ++x) {
        double acc = 0.0;
        for (int64_t c = 0; c < input.shape().channels; ++c) {
          for (int h = 0; h < k; ++h) {
            for (int w = 0; w < k; ++w) {
              acc += input.at_or_zero(c, y * stride + h - padding, x * stride + w - padding) *
                     filter.at(f, c, h, w);
            }
          }
        }
        out.at(f, y, x) = acc;
      }
    }
  }
  return out;
}

Tensor3 conv_depthwise(const Tensor3& input, const Filter4& filter, int stride, int padding) {
  if (filter.in_channels() != 1 || filter.out_channels() != input.shape().channels) {
    throw Error(ErrorKind::ShapeMismatch, "depthwise filter must hold one kernel per channel");
  }
  const int k = filter.kernel();
  Tensor3 out(conv_output(input.shape(), input.shape().channels, k, stride, padding));
  const auto& os = out.shape();
  for (int64_t c = 0; c < os.channels; ++c) {
    for (int64_t y = 0; y < os.height; ++y) {
      for (int64_t x = 0; x < os.width; ++x) {
        double acc = 0.0;
        for (int h = 0; h < k; ++h) {
          for (int w = 0; w < k; ++w) {
            acc += input.at_or_zero(c, y * stride + h - padding, x * stride + w - padding) *
                   filter.at(c, 0, h, w);
          }
        }
        out.at(c, y, x) = acc;
      }
    }
  }
  return out;
}

Tensor3 conv_depthwise_separable(const Tensor3& input, const Filter4& dw_filter,
                                 const Filter4& pw_filter, int stride, int padding) {
  const int64_t channels = input.shape().channels;
  if (dw_filter.in_channels() != 1 || dw_filter.out_channels() != channels) {
    throw Error(ErrorKind::ShapeMismatch, "depthwise filter must hold one kernel per channel");
  }
  if (pw_filter.kernel() != 1 || pw_filter.in_channels() != channels) {
    throw Error(ErrorKind::ShapeMismatch, "pointwise filter must be F x C x 1 x 1");
  }
  const int k = dw_filter.kernel();
  Tensor3 out(conv_output(input.shape(), pw_filter.out_channels(), k, stride, padding));
  const auto& os = out.shape();
  std::vector<double> spatial(static_cast<size_t>(channels));
  for (int64_t y = 0; y < os.height; ++y) {
    for (int64_t x = 0; x < os.width; ++x) {
      for (int64_t c = 0; c < channels; ++c) {
        double acc = 0.0;
        for (int h = 0; h < k; ++h) {
          for (int w = 0; w < k; ++w) {
            acc += input.at_or_zero(c, y * stride + h - padding, x * stride + w - padding) *
                   dw_filter.at(c, 0, h, w);
          }
        }
        spatial[static_cast<size_t>(c)] = acc;
      }
      for (int64_t f = 0; f < os.channels; ++f) {
        double acc = 0.0;
        for (int64_t c = 0; c < channels; ++c) {
          acc += spatial[static_cast<size_t>(c)] * pw_filter.at(f, c, 0, 0);
        }
        out.at(f, y, x) = acc;
      }
    }
  }
  return out;
}

double max_abs_diff(const Tensor3& a, const Tensor3& b) {
  if (!(a.shape() == b.shape())) {
    throw Error(ErrorKind::ShapeMismatch,
                "cannot compare " + to_string(a.shape()) + " with " + to_string(b.shape()));
  }
  double worst = 0.0;
  for (size_t i = 0; i < a.data().size(); ++i) {
    worst = std::max(worst, std::abs(a.data()[i] - b.data()[i]));
  }
  return worst;
}

namespace {

void put_u64(std::ostream& out, uint64_t v) {
  char bytes[8];
  for (int i = 0; i < 8; ++i) bytes[i] = static_cast<char>((v >> (8 * i)) & 0xffu);
  out.write(bytes, 8);
}

uint64_t get_u64(std::istream& in) {
  unsigned char bytes[8];
  if (!in.read(reinterpret_cast<char*>(bytes), 8)) {
    throw Error(ErrorKind::FormatError, "truncated tensor fixture");
  }
  uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<uint64_t>(bytes[i]) << (8 * i);
  return v;
}

}  // namespace

void write_tensor(std::ostream& out, std::span<const uint64_t> dims,
                  std::span<const double> values) {
  put_u64(out, dims.size());
  for (uint64_t d : dims) put_u64(out, d);
  for (double v : values) put_u64(out, std::bit_cast<uint64_t>(v));
}

RawTensor read_tensor(std::istream& in) {
  RawTensor raw;
  const uint64_t rank = get_u64(in);
  if (rank == 0 || rank > 8) throw Error(ErrorKind::FormatError, "bad tensor rank");
  uint64_t count = 1;
  for (uint64_t i = 0; i < rank; ++i) {
    raw.dims.push_back(get_u64(in));
    count *= raw.dims.back();
  }
  if (count > (uint64_t{1} << 32)) throw Error(ErrorKind::FormatError, "tensor too large");
  raw.values.reserve(count);
  for (uint64_t i = 0; i < count; ++i) raw.values.push_back(std::bit_cast<double>(get_u64(in)));
  return raw;
}

void write_tensor(std::ostream& out, const Tensor3& t) {
  const auto& s = t.shape();
  const uint64_t dims[] = {static_cast<uint64_t>(s.channels), static_cast<uint64_t>(s.height),
                           static_cast<uint64_t>(s.width)};
  write_tensor(out, dims, t.data());
}

void write_tensor(std::ostream& out, const Filter4& f) {
  const uint64_t dims[] = {static_cast<uint64_t>(f.out_channels()),
                           static_cast<uint64_t>(f.in_channels()),
                           static_cast<uint64_t>(f.kernel()), static_cast<uint64_t>(f.kernel())};
  write_tensor(out, dims, f.data());
}

Tensor3 to_tensor3(const RawTensor& raw) {
  if (raw.dims.size() != 3) throw Error(ErrorKind::FormatError, "expected a rank-3 tensor");
  return Tensor3(TensorShape{static_cast<int64_t>(raw.dims[1]), static_cast<int64_t>(raw.dims[2]),
                             static_cast<int64_t>(raw.dims[0])},
                 raw.values);
}

Filter4 to_filter4(const RawTensor& raw) {
  if (raw.dims.size() != 4 || raw.dims[2] != raw.dims[3]) {
    throw Error(ErrorKind::FormatError, "expected a rank-4 filter with square kernels");
  }
  return Filter4(static_cast<int64_t>(raw.dims[0]), static_cast<int64_t>(raw.dims[1]),
                 static_cast<int>(raw.dims[2]), raw.values);
}

}  // namespace turf
