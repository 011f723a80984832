//
// Copyright © 2026 The turf Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include "turf/model_ir.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace turf {

enum class ModuleKind {
  LineBuffer,
  InputBuffer,
  OutputBuffer,
  WinogradInputTransform,
  WinogradWeightTransform,
  WinogradOutputTransform,
  DotProductArray,
  ElementwiseAdd,
  Activation,
  Norm,
};

std::string_view to_string(ModuleKind kind);
ModuleKind module_kind_from_string(std::string_view name);

/// Computation sequence: filter-major (f, c, i) or channel-major (c, f, i).
enum class Seq { FM, CM };

std::string_view to_string(Seq seq);
Seq seq_from_string(std::string_view name);

/// A building module as the tuple <cfg, in, out>. `replicas` counts parallel
/// copies of the same tuple (one per channel lane or per row); the stream it
/// presents to its neighbours is replicas * width.
struct ModuleDesc {
  ModuleKind kind = ModuleKind::InputBuffer;
  std::map<std::string, int64_t> cfg;
  int64_t in_width = 0;
  int64_t out_width = 0;
  int64_t replicas = 1;
  /// Off the main data path (the weight transform feeds the dot products
  /// from the side and is not part of stream chaining).
  bool side_branch = false;
  /// Pipeline depth in cycles; adds to fill time only.
  int64_t latency = 0;

  int64_t stream_in() const { return replicas * in_width; }
  int64_t stream_out() const { return replicas * out_width; }
};

/// Tuple factories. Each follows the printed module definition.
ModuleDesc line_buffer(int64_t pc, int64_t ph, int64_t pw, int64_t k_prime);
ModuleDesc input_buffer(int64_t pc, int64_t pw);
ModuleDesc output_buffer(int64_t pf, int64_t pw);
ModuleDesc winograd_input_transform(int64_t pc, int kernel, int m);
ModuleDesc winograd_weight_transform(int64_t pc, int64_t pf, int kernel, int m);
ModuleDesc winograd_output_transform(int64_t pc, int64_t pf, int kernel, int m);

struct TileDims {
  int64_t h = 1, w = 1, c = 1, f = 1;
  friend bool operator==(const TileDims&, const TileDims&) = default;
};

struct Parallelism {
  int64_t h = 1, w = 1, c = 1, f = 1;
  friend bool operator==(const Parallelism&, const Parallelism&) = default;
};

/// Per-layer hardware configuration. Tile h and w are the layer's output
/// extents; c and f are its input and output channel extents.
struct LayerHwConfig {
  TileDims tile;
  Parallelism par;
  Seq seq = Seq::FM;
  bool use_winograd = false;
  int winograd_m = 4;
  LayerKind layer_kind = LayerKind::StandardConv;

  /// Throws UnsupportedConfig when P does not divide T, any value is < 1,
  /// Winograd is requested for anything but a stride-1 K=3 standard or
  /// depthwise convolution, or Winograd P_h/P_w differ from m; throws
  /// PortMismatch when a depthwise layer has P_f != P_c.
  void validate(const LayerSpec& layer) const;
};

/// Module chain of one layer in dataflow order. The weight transform, when
/// present, is flagged as a side branch. Throws UnsupportedConfig.
std::vector<ModuleDesc> instantiate_layer(const LayerSpec& layer, const LayerHwConfig& hw);

/// True when every main-path module's stream_out equals the next main-path
/// module's stream_in.
bool widths_chain(const std::vector<ModuleDesc>& pipeline);

/// Sum of module latencies along the main path.
int64_t pipeline_fill(const std::vector<ModuleDesc>& pipeline);

struct CycleCounts {
  int64_t compute_cycles = 0;
  int64_t work_units = 0;
  int64_t cycles_per_unit() const { return work_units ? compute_cycles / work_units : 0; }
};

/// Trip-count model for one tile. compute = ceil(Tc/Pc) * ceil(Tf/Pf) *
/// spatial with spatial = ceil(Th/Ph) * ceil(Tw/Pw), or ceil(Th/m) *
/// ceil(Tw/m) with Winograd. Depthwise drops the filter factor. Work units
/// are the trip count of the major index (filters for FM, channels for CM;
/// channels always for depthwise). Non-arithmetic layers cost zero cycles.
CycleCounts layer_cycle_counts(const LayerSpec& layer, const LayerHwConfig& hw,
                               const TileDims& tile);
CycleCounts layer_cycle_counts(const LayerSpec& layer, const LayerHwConfig& hw);

/// Sizing choice for an intermediate buffer between L(i-1) and L(i).
enum class BufferOption { MatchPrev, MatchNext, Double };

std::string_view to_string(BufferOption option);
BufferOption buffer_option_from_string(std::string_view name);

/// Intermediate buffer size in words. `tile` is layer i's input tile
/// (h, w, c) and `pc` its channel parallelism. MatchPrev sizes to the
/// L(i-1) output column, MatchNext to the L(i) input column, Double to
/// twice the L(i-1) output column. Throws InefficientConfig for (CM, CM)
/// with MatchNext.
int64_t buffer_words(Seq prev, Seq cur, const TileDims& tile, int64_t pc, BufferOption option);

/// Two-option form: single buffering sizes to the L(i-1) output column.
int64_t buffer_words(Seq prev, Seq cur, const TileDims& tile, int64_t pc, bool double_buffering);

}  // namespace turf
