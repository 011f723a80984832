//
// Copyright © 2026 The turf Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include "turf/fusion.hpp"
#include "turf/hw_template.hpp"

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace turf {

struct PlatformSpec {
  std::string name = "custom";
  double bandwidth_gbps = 38.0;
  int64_t dsp_total = 1963;
  int64_t bram_blocks = 2567;
  int64_t alm_total = 262400;
  double clock_mhz = 200.0;

  /// Throws UnsupportedConfig unless every field is positive.
  void validate() const;
  /// Stratix-V 5SGSD8 on a Maxeler MPC-X node.
  static PlatformSpec stratix_v();

  double bytes_per_second() const { return bandwidth_gbps * 1e9; }
  double clock_hz() const { return clock_mhz * 1e6; }
};

struct ModuleCoefficients {
  double fixed = 0.0;
  /// ALMs per stream lane, applied to stream_in + stream_out.
  double per_lane = 0.0;
};

/// Linear resource model. The ALM coefficients are placeholders to be
/// replaced by a fit over synthesised designs.
struct CalibrationTable {
  std::string source = "builtin-placeholder";
  double alm_base = 0.0;
  std::map<ModuleKind, ModuleCoefficients> alm;
  int64_t word_bytes = 2;
  /// M20K: 20 kbit.
  int64_t bram_block_bytes = 2560;

  /// Throws CalibrationError when `kind` has no coefficients.
  const ModuleCoefficients& coefficients(ModuleKind kind) const;
  static CalibrationTable placeholder();
};

struct ResourceEstimate {
  int64_t dsp_used = 0;
  int64_t bram_used = 0;
  int64_t alm_used = 0;
  std::string model_coefficients;

  bool feasible(const PlatformSpec& platform) const;
};

/// M20K blocks for one buffer.
int64_t bram_blocks(int64_t words, const CalibrationTable& calib);

/// Multipliers of one layer: the dot-product array (P_c P_f P_h P_w K^2
/// direct, P_c P_f (m+r-1)^2 with Winograd, P_f dropped for depthwise) plus
/// one multiplier per use of each non-shift transform constant.
int64_t layer_dsp(const LayerSpec& layer, const LayerHwConfig& hw);

/// Resources of a fused design. DSPs and ALMs come from the module chains,
/// BRAM from the buffers of `report` (weights are streamed, not buffered).
/// Throws CalibrationError.
ResourceEstimate estimate_resources(const BlockSpec& block, const TensorShape& input,
                                    const FusedDesignConfig& cfg, const SimReport& report,
                                    const CalibrationTable& calib);

/// Off-chip bytes of one block execution.
struct Traffic {
  int64_t input_bytes = 0;
  int64_t output_bytes = 0;
  int64_t weight_bytes = 0;
  /// Round trips of intermediate maps (baseline only).
  int64_t intermediate_bytes = 0;
  /// Halo rows and columns fetched more than once (fused only).
  int64_t halo_bytes = 0;

  int64_t total() const {
    return input_bytes + output_bytes + weight_bytes + intermediate_bytes + halo_bytes;
  }
};

/// Fused: block input and output once, weights once, plus the tiling halo.
Traffic fused_traffic(const BlockSpec& block, const TensorShape& input, int64_t halo_bytes,
                      int64_t word_bytes = 2);
/// Layer by layer: every convolution reads its input and weights and writes
/// its output.
Traffic baseline_traffic(const BlockSpec& block, const TensorShape& input,
                         int64_t word_bytes = 2);

struct RooflinePoint {
  double arithmetic_intensity = 0.0;
  double attainable_gops = 0.0;
  double compute_roof_gops = 0.0;

  bool bandwidth_bound() const { return attainable_gops < compute_roof_gops; }
};

/// attainable = min(roof, intensity * bandwidth).
RooflinePoint roofline_point(int64_t ops, int64_t bytes, double compute_roof_gops,
                             const PlatformSpec& platform);

/// Fused and layer-by-layer points of one design on a shared compute roof.
/// The roof is the design's simulated throughput, ops * clock / cycles;
/// `peak_gops` is the DSP ceiling 2 * DSP * clock.
struct RooflineAnalysis {
  int64_t ops = 0;
  int64_t cycles = 0;
  double peak_gops = 0.0;
  Traffic fused;
  Traffic baseline;
  RooflinePoint fused_point;
  RooflinePoint baseline_point;
};

RooflineAnalysis roofline(const BlockSpec& block, const TensorShape& input,
                          const SimReport& report, const ResourceEstimate& resources,
                          const PlatformSpec& platform, int64_t word_bytes = 2);

/// One fully evaluated hardware design for a block.
struct DesignCandidate {
  FusedDesignConfig cfg;
  SimReport report;
  ResourceEstimate resources;
  RooflineAnalysis analysis;
  /// max(compute time, fused traffic / bandwidth).
  double latency_s = 0.0;

  double attainable_gops() const { return analysis.fused_point.attainable_gops; }
  /// Canonical text form; used as the final tie-break.
  std::string signature() const;
};

/// Among feasible candidates, the one with the highest attainable GOPS,
/// then the lowest latency, then the fewest DSPs, then the smallest
/// signature. Throws Infeasible when none fits the platform.
size_t pick_best_design(std::span<const DesignCandidate> candidates,
                        const PlatformSpec& platform);

}  // namespace turf
