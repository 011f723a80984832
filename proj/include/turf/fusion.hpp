//
// Copyright © 2026 The turf Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include "turf/hw_template.hpp"
#include "turf/model_ir.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace turf {

/// Flattened fused-design parameters <T_h, T_w, T_c^1..T_c^N, T_f>,
/// <P_h, P_w, P_c^1..P_c^N, P_f>, <Seq^1..Seq^N> and one buffer option per
/// intermediate buffer. T_h and T_w are in block-output pixels; channel
/// tiles are clamped to the layer channel counts.
struct FusedDesignConfig {
  int64_t tile_h = 1;
  int64_t tile_w = 1;
  std::vector<int64_t> tile_c;
  int64_t tile_f = 1;
  int64_t par_h = 1;
  int64_t par_w = 1;
  std::vector<int64_t> par_c;
  int64_t par_f = 1;
  std::vector<Seq> seqs;
  std::vector<BufferOption> buffers;
  /// Per layer; empty means no Winograd anywhere.
  std::vector<bool> winograd;
  int winograd_m = 4;

  size_t layers() const { return par_c.size(); }
  bool uses_winograd(size_t i) const { return i < winograd.size() && winograd[i]; }
  /// <P_h, P_w, P_c^i, P_f^i> with P_f^i = P_c^(i+1) and P_f^N = P_f.
  Parallelism layer_parallelism(size_t i) const;

  /// Builds the flattened form from per-layer parallelism. Throws
  /// PortMismatch unless P_h^i = P_h^(i-1), P_w^i = P_w^(i-1) and
  /// P_c^i = P_f^(i-1) for every i >= 2.
  static FusedDesignConfig from_layers(int64_t tile_h, int64_t tile_w,
                                       std::vector<int64_t> tile_c, int64_t tile_f,
                                       const std::vector<Parallelism>& per_layer,
                                       std::vector<Seq> seqs, std::vector<BufferOption> buffers,
                                       std::vector<bool> winograd = {}, int winograd_m = 4);
};

/// Throws PortMismatch when adjacent per-layer parallelism tuples violate
/// the port-matching constraint.
void check_port_matching(const std::vector<Parallelism>& per_layer);

/// Convolution layers of the block's main path with their input shapes.
/// Shapes are propagated layer by layer; the block kind is not checked, so
/// any layer list can be fused.
struct FusedLayer {
  LayerSpec spec;
  TensorShape input;
  TensorShape output;
};
std::vector<FusedLayer> fused_layers(const BlockSpec& block, const TensorShape& input);

/// Hardware configuration of fused layer i with its tile set to its
/// parallelism (the module chain does not depend on the tile).
LayerHwConfig layer_hw_config(const FusedLayer& layer, const FusedDesignConfig& cfg, size_t i);

/// Wraps one layer so it can be simulated as an unfused design.
BlockSpec single_layer_block(const LayerSpec& layer);

// --- Work-unit pipeline -----------------------------------------------------

/// How a stage fills its output buffer.
enum class ProduceMode {
  PerUnit,  ///< one chunk reserved at unit start, finalized at unit end
  PerTile,  ///< all chunks reserved at tile start, finalized at tile end
};

/// How a stage drains its input buffer.
enum class ConsumeMode {
  PerUnit,  ///< unit k needs chunk k and frees it at its end
  PerTile,  ///< every unit needs the whole tile; freed after the last unit
};

struct PipelineStage {
  /// unit_cycles[t][u]: duration of unit u of tile t.
  std::vector<std::vector<int64_t>> unit_cycles;
  ProduceMode produce = ProduceMode::PerUnit;
  ConsumeMode consume = ConsumeMode::PerUnit;
};

struct PipelineBuffer {
  /// Chunks per tile flowing through this buffer.
  int64_t chunks_per_tile = 1;
  int64_t capacity_chunks = 1;
};

struct TraceEvent {
  int64_t time = 0;
  size_t layer = 0;
  int64_t tile = 0;
  int64_t unit = 0;
  bool start = true;
};

struct StageTiming {
  int64_t busy = 0;
  int64_t stall = 0;
  int64_t first_start = 0;
  int64_t last_end = 0;
  int64_t units = 0;
};

struct PipelineResult {
  int64_t makespan = 0;
  std::vector<StageTiming> stages;
  std::vector<int64_t> peak_chunks;
  std::vector<TraceEvent> trace;
};

/// Event-driven simulation of in-order engines linked by chunk buffers
/// (buffers[i] sits between stages i and i+1). Throws InefficientConfig
/// when a buffer cannot hold what its producer reserves or its consumer
/// needs, and SimDeadlock if no engine can make progress.
PipelineResult simulate_pipeline(const std::vector<PipelineStage>& stages,
                                 const std::vector<PipelineBuffer>& buffers,
                                 bool record_trace = false);

// --- Fused block simulation -------------------------------------------------

struct LayerReport {
  std::string label;
  Seq seq = Seq::FM;
  bool winograd = false;
  Parallelism par;
  int64_t busy_cycles = 0;
  int64_t stall_cycles = 0;
  int64_t isolated_cycles = 0;
  int64_t work_units = 0;
  int64_t fill_cycles = 0;
};

struct BufferReport {
  /// Index i of buffer B_i between layers i-1 and i (1-based like layers).
  size_t index = 0;
  BufferOption option = BufferOption::MatchPrev;
  int64_t words = 0;
  int64_t chunk_words = 0;
  int64_t capacity_chunks = 0;
  int64_t peak_words = 0;
};

struct SimReport {
  int64_t total_cycles = 0;
  int64_t makespan = 0;
  int64_t fill_cycles = 0;
  int64_t sequential_cycles = 0;
  int64_t max_layer_cycles = 0;
  int64_t spatial_tiles = 0;
  int64_t channel_passes = 1;
  std::vector<LayerReport> layers;
  std::vector<BufferReport> buffers;
  int64_t input_buffer_words = 0;
  int64_t output_buffer_words = 0;
  int64_t redundant_compute_ops = 0;
  int64_t extra_offchip_bytes = 0;
  std::vector<TraceEvent> trace;

  int64_t total_buffer_words() const;
};

/// Text describing the cycle model, embedded in reports.
std::string_view cycle_model_description();

struct SimOptions {
  bool trace = false;
};

/// Simulates one tile sweep of the fused block. Throws PortMismatch,
/// InefficientConfig, InvalidTiling, UnsupportedConfig or SimDeadlock.
SimReport simulate_fused(const BlockSpec& block, const TensorShape& input,
                         const FusedDesignConfig& cfg, const SimOptions& options = {});

struct SequenceResult {
  std::vector<Seq> seqs;
  std::vector<BufferOption> buffers;
  SimReport report;
};

struct EnumerateOptions {
  size_t max_layers = 6;
  /// Buffer options to try per intermediate buffer; empty keeps cfg.buffers.
  std::vector<BufferOption> buffer_choices = {BufferOption::MatchPrev, BufferOption::MatchNext,
                                              BufferOption::Double};
  /// Keep only the best buffer assignment per sequence combination.
  bool best_per_sequence = false;
};

/// Every sequence combination (and buffer assignment) that is not
/// inefficient, sorted by total cycles, then total buffer words, then
/// sequence and buffer order. Throws UnsupportedConfig when the block has
/// more layers than the bound.
std::vector<SequenceResult> enumerate_sequences(const BlockSpec& block, const TensorShape& input,
                                                const FusedDesignConfig& cfg,
                                                const EnumerateOptions& options = {});

struct TilingOverhead {
  int64_t redundant_ops = 0;
  int64_t extra_offchip_bytes = 0;
  int64_t tiles = 0;
};

/// Smallest block-output tile edge that covers one receptive field.
int64_t block_receptive_field(const BlockSpec& block);

/// Halo recomputation of spatial tiling. Throws InvalidTiling when a tile
/// edge is below the receptive field without spanning the whole map.
TilingOverhead tiling_overhead(const BlockSpec& block, const TensorShape& input, int64_t tile_h,
                               int64_t tile_w);

/// Half-open row or column interval.
struct Interval {
  int64_t begin = 0;
  int64_t end = 0;
  int64_t size() const { return end - begin; }
};

/// Input rows of a layer needed for output rows `out`, clamped to [0, in).
Interval input_interval(const Interval& out, int kernel, int stride, int padding, int64_t in);

}  // namespace turf
