//
// Copyright © 2026 The turf Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include "turf/fusion.hpp"
#include "turf/model_ir.hpp"
#include "turf/resources.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace turf {

struct DseOptions {
  /// Values tried for P_c and P_f (capped at the next value covering the
  /// channel count).
  std::vector<int64_t> channel_par = {1, 2, 3, 4, 6, 8, 12, 16, 24, 32, 48, 64};
  /// Candidates for P_h = P_w.
  std::vector<int64_t> spatial_par = {1, 2, 4};
  /// Winograd F(m, 3) with m = P_h on every eligible layer.
  bool allow_winograd = true;
  /// Parallelism settings (ranked analytically) that get a full simulation.
  size_t top_k = 6;
  /// Keep every simulated candidate in the result.
  bool keep_evaluated = true;
};

/// Hardware search for one block: parallelism and Winograd choices are
/// ranked with the trip-count model, the best `top_k` get every sequence
/// and buffer assignment simulated, and spatial tiles are halved until the
/// buffers fit in BRAM. Throws Infeasible when nothing fits.
struct BlockDseResult {
  DesignCandidate best;
  std::vector<DesignCandidate> evaluated;
  size_t analytic_candidates = 0;
};

BlockDseResult explore_block(const BlockSpec& block, const TensorShape& input,
                             const PlatformSpec& platform, const CalibrationTable& calib,
                             const DseOptions& options = {});

/// Chosen design of one model stage. Stages without arithmetic (pooling,
/// activation) are folded into the preceding stage and carry no design.
struct StageDesign {
  size_t index = 0;
  std::string label;
  int64_t ops = 0;
  double latency_s = 0.0;
  std::optional<DesignCandidate> design;
  /// Shortcut projection, costed as its own single-layer design.
  std::optional<DesignCandidate> projection;
};

struct ModelDesign {
  std::vector<StageDesign> stages;
  int64_t ops = 0;
  double latency_s = 0.0;
  int64_t traffic_bytes = 0;
  /// Peak over stages: the accelerator is reconfigured per stage.
  ResourceEstimate resources;

  double gops() const { return latency_s > 0 ? static_cast<double>(ops) / latency_s * 1e-9 : 0; }
  double latency_ms() const { return latency_s * 1e3; }
  double arithmetic_intensity() const {
    return traffic_bytes ? static_cast<double>(ops) / static_cast<double>(traffic_bytes) : 0;
  }
};

/// DesignGen with a cache keyed by stage signature, so repeated stages and
/// repeated models (as in the explorer loop) are searched once.
class DesignGenerator {
 public:
  DesignGenerator(PlatformSpec platform, CalibrationTable calib, DseOptions options = {});

  const BlockDseResult& design_block(const BlockSpec& block, const TensorShape& input);
  ModelDesign design_model(const ModelSpec& model);

  const PlatformSpec& platform() const { return platform_; }
  const CalibrationTable& calibration() const { return calib_; }
  size_t cache_size() const { return cache_.size(); }

 private:
  PlatformSpec platform_;
  CalibrationTable calib_;
  DseOptions options_;
  std::map<std::string, BlockDseResult> cache_;
};

/// Cache key of a block applied to an input shape.
std::string stage_signature(const BlockSpec& block, const TensorShape& input);

}  // namespace turf
