//
// Copyright © 2026 The turf Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include "turf/dse.hpp"
#include "turf/fusion.hpp"
#include "turf/hw_template.hpp"
#include "turf/model_ir.hpp"
#include "turf/resources.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace turf {

/// Insertion-ordered so reports keep a stable, readable field order.
using Json = nlohmann::ordered_json;

/// Parses a file as JSON. Throws FormatError.
Json read_json_file(const std::filesystem::path& path);
/// Two-space indented, newline terminated.
std::string dump_json(const Json& j);

Json shape_to_json(const TensorShape& s);
TensorShape shape_from_json(const Json& j);

Json layer_to_json(const LayerSpec& layer);
LayerSpec layer_from_json(const Json& j);
Json block_to_json(const BlockSpec& block);
BlockSpec block_from_json(const Json& j);
Json stage_to_json(const Stage& stage);
Stage stage_from_json(const Json& j);

/// Model files list stages bottom to top. `positions` is optional and
/// defaults to one position per replaceable stage; `{"reference": name}`
/// builds one of the reference networks instead. Throws FormatError and
/// any model-ir error.
Json model_to_json(const ModelSpec& model);
ModelSpec model_from_json(const Json& j);
ModelSpec load_model(const std::filesystem::path& path);

Json op_count_to_json(const OpCount& count);

Json platform_to_json(const PlatformSpec& p);
PlatformSpec platform_from_json(const Json& j);

Json calibration_to_json(const CalibrationTable& c);
CalibrationTable calibration_from_json(const Json& j);

Json parallelism_to_json(const Parallelism& p);
Json module_to_json(const ModuleDesc& m);

/// A fused configuration, either flattened (par_c per layer, par_f) or as
/// per-layer `parallelism` tuples, which are port-checked. Missing tile_c
/// defaults to the layer input channels, missing tile_f to the block output
/// channels. Throws FormatError or PortMismatch.
Json config_to_json(const FusedDesignConfig& cfg);
FusedDesignConfig config_from_json(const Json& j, const std::vector<FusedLayer>& layers);
LayerHwConfig layer_hw_config_from_json(const Json& j, const LayerSpec& layer);

Json sim_report_to_json(const SimReport& r, bool include_trace = false);
Json trace_to_json(const std::vector<TraceEvent>& trace);
Json resources_to_json(const ResourceEstimate& r);
Json traffic_to_json(const Traffic& t);
Json roofline_to_json(const RooflineAnalysis& a);
Json candidate_to_json(const DesignCandidate& c);
Json model_design_to_json(const ModelDesign& d);

}  // namespace turf
