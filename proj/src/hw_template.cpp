//
// Copyright © 2026 The turf Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "turf/hw_template.hpp"

#include "turf/error.hpp"

#include <array>
#include <bit>
#include <utility>

namespace turf {
namespace {

constexpr std::array kModuleNames = {
    std::pair{ModuleKind::LineBuffer, "LineBuffer"},
    std::pair{ModuleKind::InputBuffer, "InputBuffer"},
    std::pair{ModuleKind::OutputBuffer, "OutputBuffer"},
    std::pair{ModuleKind::WinogradInputTransform, "WinogradInputTransform"},
    std::pair{ModuleKind::WinogradWeightTransform, "WinogradWeightTransform"},
    std::pair{ModuleKind::WinogradOutputTransform, "WinogradOutputTransform"},
    std::pair{ModuleKind::DotProductArray, "DotProductArray"},
    std::pair{ModuleKind::ElementwiseAdd, "ElementwiseAdd"},
    std::pair{ModuleKind::Activation, "Activation"},
    std::pair{ModuleKind::Norm, "Norm"},
};

int64_t ceil_div(int64_t a, int64_t b) { return (a + b - 1) / b; }

int64_t tree_depth(int64_t inputs) {
  return inputs <= 1 ? 0 : static_cast<int64_t>(std::bit_width(static_cast<uint64_t>(inputs - 1)));
}

[[noreturn]] void unsupported(const std::string& msg) {
  throw Error(ErrorKind::UnsupportedConfig, msg);
}

}  // namespace

std::string_view to_string(ModuleKind kind) {
  for (const auto& [k, name] : kModuleNames) {
    if (k == kind) return name;
  }
  return "Unknown";
}

ModuleKind module_kind_from_string(std::string_view name) {
  for (const auto& [k, n] : kModuleNames) {
    if (name == n) return k;
  }
  throw Error(ErrorKind::FormatError, "unknown module kind '" + std::string(name) + "'");
}

std::string_view to_string(Seq seq) { return seq == Seq::FM ? "FM" : "CM"; }

Seq seq_from_string(std::string_view name) {
  if (name == "FM" || name == "F") return Seq::FM;
  if (name == "CM" || name == "C") return Seq::CM;
  throw Error(ErrorKind::FormatError, "unknown sequence '" + std::string(name) + "'");
}

ModuleDesc line_buffer(int64_t pc, int64_t ph, int64_t pw, int64_t k_prime) {
  return {ModuleKind::LineBuffer,
          {{"P_c", pc}, {"P_h", ph}, {"P_w", pw}, {"K'", k_prime}},
          pc * ph * pw,
          (k_prime + ph - 1) * (k_prime + pw - 1),
          1,
          false,
          k_prime};
}

ModuleDesc input_buffer(int64_t pc, int64_t pw) {
  return {ModuleKind::InputBuffer, {{"P_c", pc}, {"P_w", pw}}, pc * pw, pc * pw, 1, false, 1};
}

ModuleDesc output_buffer(int64_t pf, int64_t pw) {
  return {ModuleKind::OutputBuffer, {{"P_f", pf}, {"P_w", pw}}, pf * pw, pf * pw, 1, false, 1};
}

ModuleDesc winograd_input_transform(int64_t pc, int kernel, int m) {
  const int64_t tk = kernel + m - 1;
  return {ModuleKind::WinogradInputTransform,
          {{"P_c", pc}, {"K", kernel}, {"m", m}},
          pc * tk * tk,
          pc * tk * tk,
          1,
          false,
          2 * tk};
}

ModuleDesc winograd_weight_transform(int64_t pc, int64_t pf, int kernel, int m) {
  const int64_t tk = kernel + m - 1;
  return {ModuleKind::WinogradWeightTransform,
          {{"P_c", pc}, {"P_f", pf}, {"K", kernel}, {"m", m}},
          pc * pf * kernel * kernel,
          pc * pf * tk * tk,
          1,
          true,
          2 * tk};
}

ModuleDesc winograd_output_transform(int64_t pc, int64_t pf, int kernel, int m) {
  const int64_t tk = kernel + m - 1;
  return {ModuleKind::WinogradOutputTransform,
          {{"P_c", pc}, {"P_f", pf}, {"K", kernel}, {"m", m}},
          pc * pf * tk * tk,
          pc * pf * int64_t{m} * m,
          1,
          false,
          2 * tk};
}

void LayerHwConfig::validate(const LayerSpec& layer) const {
  const auto check = [](int64_t t, int64_t p, const char* axis) {
    if (t < 1 || p < 1) unsupported(std::string("tile and parallelism must be >= 1 on ") + axis);
    if (t % p != 0) {
      unsupported(std::string("P_") + axis + " = " + std::to_string(p) + " does not divide T_" +
                  axis + " = " + std::to_string(t));
    }
  };
  check(tile.h, par.h, "h");
  check(tile.w, par.w, "w");
  check(tile.c, par.c, "c");
  check(tile.f, par.f, "f");
  if (layer.kind != layer_kind) {
    unsupported("configuration is for " + std::string(to_string(layer_kind)) + ", layer is " +
                std::string(to_string(layer.kind)));
  }
  if (use_winograd) {
    const bool spatial =
        layer.kind == LayerKind::StandardConv || layer.kind == LayerKind::DepthwiseConv;
    if (!spatial || layer.kernel != 3 || layer.stride != 1) {
      unsupported("Winograd needs a stride-1 3x3 standard or depthwise convolution");
    }
    if (winograd_m != 2 && winograd_m != 4) unsupported("Winograd m must be 2 or 4");
    if (par.h != winograd_m || par.w != winograd_m) {
      unsupported("Winograd requires P_h = P_w = m = " + std::to_string(winograd_m));
    }
  }
  if (layer.kind == LayerKind::DepthwiseConv && par.f != par.c) {
    throw Error(ErrorKind::PortMismatch, "depthwise layer needs P_f = P_c");
  }
}

std::vector<ModuleDesc> instantiate_layer(const LayerSpec& layer, const LayerHwConfig& hw) {
  hw.validate(layer);
  const auto& p = hw.par;
  std::vector<ModuleDesc> chain;
  const auto add = [&](ModuleDesc d, int64_t replicas) {
    d.replicas = replicas;
    chain.push_back(std::move(d));
  };
  switch (layer.kind) {
    case LayerKind::Activation:
      add({ModuleKind::Activation, {{"P", p.c * p.h * p.w}}, p.c * p.h * p.w, p.c * p.h * p.w},
          1);
      return chain;
    case LayerKind::BatchNorm:
      add({ModuleKind::Norm, {{"P", p.c * p.h * p.w}}, p.c * p.h * p.w, p.c * p.h * p.w}, 1);
      return chain;
    case LayerKind::ElementwiseAdd:
      add({ModuleKind::ElementwiseAdd, {{"P", p.c * p.h * p.w}}, p.c * p.h * p.w,
           p.c * p.h * p.w},
          1);
      return chain;
    case LayerKind::MaxPool:
    case LayerKind::AvgPool:
    case LayerKind::GlobalAvgPool:
      unsupported("pooling layers have no module chain");
    default:
      break;
  }

  const bool depthwise = layer.kind == LayerKind::DepthwiseConv;
  const bool fc = layer.kind == LayerKind::FullyConnected;
  const int k = fc ? 1 : layer.kernel;
  const int m = hw.winograd_m;
  const int64_t tk = k + m - 1;
  // Elements per channel lane entering and leaving the dot products.
  int64_t window = (k + p.h - 1) * (k + p.w - 1);
  int64_t spatial_out = p.h * p.w;
  if (hw.use_winograd) window = spatial_out = tk * tk;
  const int64_t out_lanes = depthwise ? p.c : p.f;

  add(input_buffer(p.c, p.w), p.h);
  if (k > 1 || hw.use_winograd) add(line_buffer(1, p.h, p.w, k), p.c);
  if (hw.use_winograd) {
    add(winograd_input_transform(p.c, k, m), 1);
    add(winograd_weight_transform(p.c, depthwise ? 1 : p.f, k, m), 1);
  }
  const int64_t reduction = depthwise ? (hw.use_winograd ? 1 : int64_t{k} * k)
                                      : p.c * (hw.use_winograd ? 1 : int64_t{k} * k);
  add({ModuleKind::DotProductArray,
       {{"P_c", p.c}, {"P_f", depthwise ? 1 : p.f}, {"P_h", p.h}, {"P_w", p.w}, {"K", k},
        {"depthwise", depthwise ? 1 : 0}},
       p.c * window,
       out_lanes * spatial_out,
       1,
       false,
       1 + tree_depth(reduction)},
      1);
  if (hw.use_winograd) add(winograd_output_transform(1, out_lanes, k, m), 1);
  add(output_buffer(out_lanes, p.w), p.h);
  return chain;
}

bool widths_chain(const std::vector<ModuleDesc>& pipeline) {
  const ModuleDesc* prev = nullptr;
  for (const auto& d : pipeline) {
    if (d.side_branch) continue;
    if (prev && prev->stream_out() != d.stream_in()) return false;
    prev = &d;
  }
  return true;
}

int64_t pipeline_fill(const std::vector<ModuleDesc>& pipeline) {
  int64_t fill = 0;
  for (const auto& d : pipeline) {
    if (!d.side_branch) fill += d.latency;
  }
  return fill;
}

CycleCounts layer_cycle_counts(const LayerSpec& layer, const LayerHwConfig& hw,
                               const TileDims& tile) {
  const auto& p = hw.par;
  switch (layer.kind) {
    case LayerKind::StandardConv:
    case LayerKind::PointwiseConv:
    case LayerKind::DepthwiseConv:
    case LayerKind::FullyConnected:
      break;
    default:
      return {0, 1};
  }
  const int64_t spatial = hw.use_winograd
                              ? ceil_div(tile.h, hw.winograd_m) * ceil_div(tile.w, hw.winograd_m)
                              : ceil_div(tile.h, p.h) * ceil_div(tile.w, p.w);
  const int64_t channel_trips = ceil_div(tile.c, p.c);
  if (layer.kind == LayerKind::DepthwiseConv) {
    return {channel_trips * spatial, channel_trips};
  }
  const int64_t filter_trips = ceil_div(tile.f, p.f);
  return {channel_trips * filter_trips * spatial,
          hw.seq == Seq::FM ? filter_trips : channel_trips};
}

CycleCounts layer_cycle_counts(const LayerSpec& layer, const LayerHwConfig& hw) {
  return layer_cycle_counts(layer, hw, hw.tile);
}

std::string_view to_string(BufferOption option) {
  switch (option) {
    case BufferOption::MatchPrev: return "MatchPrev";
    case BufferOption::MatchNext: return "MatchNext";
    case BufferOption::Double: return "Double";
  }
  return "MatchPrev";
}

BufferOption buffer_option_from_string(std::string_view name) {
  if (name == "MatchPrev") return BufferOption::MatchPrev;
  if (name == "MatchNext") return BufferOption::MatchNext;
  if (name == "Double") return BufferOption::Double;
  throw Error(ErrorKind::FormatError, "unknown buffer option '" + std::string(name) + "'");
}

int64_t buffer_words(Seq prev, Seq cur, const TileDims& tile, int64_t pc, BufferOption option) {
  const int64_t plane = tile.h * tile.w;
  const int64_t prev_output = (prev == Seq::FM ? pc : tile.c) * plane;
  switch (option) {
    case BufferOption::MatchPrev:
      return prev_output;
    case BufferOption::MatchNext:
      if (prev == Seq::CM && cur == Seq::CM) {
        throw Error(ErrorKind::InefficientConfig,
                    "(CM,CM) buffer sized to the L(i) input column is inefficient");
      }
      return tile.c * plane;
    case BufferOption::Double:
      return 2 * prev_output;
  }
  return prev_output;
}

int64_t buffer_words(Seq prev, Seq cur, const TileDims& tile, int64_t pc, bool double_buffering) {
  return buffer_words(prev, cur, tile, pc,
                      double_buffering ? BufferOption::Double : BufferOption::MatchPrev);
}

}  // namespace turf
