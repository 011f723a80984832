//
// Copyright © 2026 The turf Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "turf/io.hpp"

#include "turf/error.hpp"

#include <fstream>
#include <sstream>

namespace turf {
namespace {

/// Runs `f`, turning JSON access errors into FormatError.
template <typename F>
auto guarded(std::string_view what, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::FormatError, std::string(what) + ": " + e.what());
  }
}

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw Error(ErrorKind::FormatError, std::string("missing field '") + key + "'");
  }
  return j.at(key);
}

template <typename T>
T value_or(const Json& j, const char* key, T fallback) {
  return j.contains(key) ? j.at(key).get<T>() : fallback;
}

Parallelism parallelism_from_json(const Json& j) {
  if (j.is_array()) {
    if (j.size() != 4) throw Error(ErrorKind::FormatError, "parallelism needs 4 entries [h, w, c, f]");
    return {j[0].get<int64_t>(), j[1].get<int64_t>(), j[2].get<int64_t>(), j[3].get<int64_t>()};
  }
  return {field(j, "h").get<int64_t>(), field(j, "w").get<int64_t>(), field(j, "c").get<int64_t>(),
          field(j, "f").get<int64_t>()};
}

std::vector<Seq> seqs_from_json(const Json& j, size_t n) {
  std::vector<Seq> out;
  for (const auto& s : j) out.push_back(seq_from_string(s.get<std::string>()));
  if (out.size() != n) {
    throw Error(ErrorKind::FormatError, "seqs needs " + std::to_string(n) + " entries");
  }
  return out;
}

}  // namespace

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::FormatError, "cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::FormatError, path.string() + ": " + e.what());
  }
}

std::string dump_json(const Json& j) { return j.dump(2) + "\n"; }

Json shape_to_json(const TensorShape& s) { return Json::array({s.height, s.width, s.channels}); }

TensorShape shape_from_json(const Json& j) {
  return guarded("shape", [&] {
    if (j.is_array()) {
      if (j.size() != 3) throw Error(ErrorKind::FormatError, "shape needs [H, W, C]");
      return TensorShape::make(j[0].get<int64_t>(), j[1].get<int64_t>(), j[2].get<int64_t>());
    }
    return TensorShape::make(field(j, "height").get<int64_t>(), field(j, "width").get<int64_t>(),
                             field(j, "channels").get<int64_t>());
  });
}

Json layer_to_json(const LayerSpec& l) {
  Json j;
  j["kind"] = std::string(to_string(l.kind));
  j["kernel"] = l.kernel;
  j["stride"] = l.stride;
  j["padding"] = l.padding;
  if (l.out_channels) j["out_channels"] = *l.out_channels;
  j["bias"] = l.bias;
  return j;
}

LayerSpec layer_from_json(const Json& j) {
  return guarded("layer", [&] {
    LayerSpec l;
    l.kind = layer_kind_from_string(field(j, "kind").get<std::string>());
    l.kernel = value_or<int>(j, "kernel", 1);
    l.stride = value_or<int>(j, "stride", 1);
    // "same" padding unless given.
    l.padding = value_or<int>(j, "padding", is_conv(l.kind) ? l.kernel / 2 : 0);
    if (j.contains("out_channels")) l.out_channels = j.at("out_channels").get<int64_t>();
    l.bias = value_or<bool>(j, "bias", false);
    l.validate();
    return l;
  });
}

Json block_to_json(const BlockSpec& b) {
  Json j;
  j["kind"] = "Block";
  j["block"] = std::string(to_string(b.kind));
  j["shortcut"] = b.has_shortcut;
  Json layers = Json::array();
  for (const auto& l : b.layers) layers.push_back(layer_to_json(l));
  j["layers"] = std::move(layers);
  if (b.projection) j["projection"] = layer_to_json(*b.projection);
  return j;
}

BlockSpec block_from_json(const Json& j) {
  return guarded("block", [&] {
    BlockSpec b;
    b.kind = block_kind_from_string(field(j, "block").get<std::string>());
    b.has_shortcut = value_or<bool>(j, "shortcut", false);
    for (const auto& l : field(j, "layers")) b.layers.push_back(layer_from_json(l));
    if (j.contains("projection")) b.projection = layer_from_json(j.at("projection"));
    b.validate();
    return b;
  });
}

Json stage_to_json(const Stage& stage) {
  if (const auto* l = std::get_if<LayerSpec>(&stage)) return layer_to_json(*l);
  return block_to_json(std::get<BlockSpec>(stage));
}

Stage stage_from_json(const Json& j) {
  return guarded("stage", [&]() -> Stage {
    if (field(j, "kind").get<std::string>() == "Block") return block_from_json(j);
    return layer_from_json(j);
  });
}

Json model_to_json(const ModelSpec& m) {
  Json j;
  j["name"] = m.name();
  j["base"] = std::string(to_string(m.base()));
  j["input"] = shape_to_json(m.input());
  Json stages = Json::array();
  for (const auto& s : m.stages()) stages.push_back(stage_to_json(s));
  j["stages"] = std::move(stages);
  j["positions"] = m.positions();
  return j;
}

ModelSpec model_from_json(const Json& j) {
  return guarded("model", [&] {
    const TensorShape input =
        j.contains("input") ? shape_from_json(j.at("input")) : TensorShape{224, 224, 3};
    if (j.contains("reference")) {
      auto m = build_reference_model(j.at("reference").get<std::string>(), input);
      for (const auto& p : value_or<std::vector<size_t>>(j, "replace", {})) m = replace_layer(m, p);
      return m;
    }
    const auto base = base_model_from_string(value_or<std::string>(j, "base", "Custom"));
    const auto name = value_or<std::string>(j, "name", "model");
    std::vector<Stage> stages;
    const auto& js = field(j, "stages");
    for (size_t i = 0; i < js.size(); ++i) {
      try {
        stages.push_back(stage_from_json(js[i]));
      } catch (const Error& e) {
        throw Error(e.kind(), "stage " + std::to_string(i) + ": " + e.what());
      }
    }
    if (j.contains("positions")) {
      return ModelSpec::create(base, name, input, std::move(stages),
                               j.at("positions").get<std::vector<std::vector<size_t>>>());
    }
    return ModelSpec::create_with_default_positions(base, name, input, std::move(stages));
  });
}

ModelSpec load_model(const std::filesystem::path& path) {
  const auto j = read_json_file(path);
  try {
    return model_from_json(j);
  } catch (const Error& e) {
    throw Error(e.kind(), path.string() + ": " + e.what());
  }
}

Json op_count_to_json(const OpCount& c) {
  Json j;
  j["total_ops"] = c.total_ops;
  j["total_params"] = c.total_params;
  j["gops"] = c.gops();
  j["mparams"] = c.mparams();
  j["block_ops"] = c.block_ops;
  j["conv_ops"] = c.conv_ops;
  j["fc_ops"] = c.fc_ops;
  j["block_params"] = c.block_params;
  j["conv_params"] = c.conv_params;
  j["fc_params"] = c.fc_params;
  Json stages = Json::array();
  for (const auto& s : c.stages) {
    stages.push_back({{"index", s.index},
                      {"label", s.label},
                      {"category", std::string(to_string(s.category))},
                      {"input", shape_to_json(s.input)},
                      {"output", shape_to_json(s.output)},
                      {"ops", s.ops},
                      {"params", s.params}});
  }
  j["stages"] = std::move(stages);
  return j;
}

Json platform_to_json(const PlatformSpec& p) {
  return {{"name", p.name},
          {"bandwidth_gbps", p.bandwidth_gbps},
          {"dsp_total", p.dsp_total},
          {"bram_blocks", p.bram_blocks},
          {"alm_total", p.alm_total},
          {"clock_mhz", p.clock_mhz}};
}

PlatformSpec platform_from_json(const Json& j) {
  return guarded("platform", [&] {
    PlatformSpec d = PlatformSpec::stratix_v();
    PlatformSpec p;
    p.name = value_or<std::string>(j, "name", d.name);
    p.bandwidth_gbps = value_or<double>(j, "bandwidth_gbps", d.bandwidth_gbps);
    p.dsp_total = value_or<int64_t>(j, "dsp_total", d.dsp_total);
    p.bram_blocks = value_or<int64_t>(j, "bram_blocks", d.bram_blocks);
    p.alm_total = value_or<int64_t>(j, "alm_total", d.alm_total);
    p.clock_mhz = value_or<double>(j, "clock_mhz", d.clock_mhz);
    p.validate();
    return p;
  });
}

Json calibration_to_json(const CalibrationTable& c) {
  Json alm = Json::object();
  for (const auto& [k, v] : c.alm) {
    alm[std::string(to_string(k))] = {{"fixed", v.fixed}, {"per_lane", v.per_lane}};
  }
  return {{"source", c.source},
          {"alm_base", c.alm_base},
          {"word_bytes", c.word_bytes},
          {"bram_block_bytes", c.bram_block_bytes},
          {"alm", std::move(alm)}};
}

CalibrationTable calibration_from_json(const Json& j) {
  return guarded("calibration", [&] {
    CalibrationTable c;
    c.source = value_or<std::string>(j, "source", "file");
    c.alm_base = value_or<double>(j, "alm_base", 0.0);
    c.word_bytes = value_or<int64_t>(j, "word_bytes", 2);
    c.bram_block_bytes = value_or<int64_t>(j, "bram_block_bytes", 2560);
    if (c.word_bytes < 1 || c.bram_block_bytes < 1) {
      throw Error(ErrorKind::CalibrationError, "word and block sizes must be positive");
    }
    for (const auto& [name, v] : field(j, "alm").items()) {
      c.alm[module_kind_from_string(name)] = {value_or<double>(v, "fixed", 0.0),
                                              value_or<double>(v, "per_lane", 0.0)};
    }
    return c;
  });
}

Json parallelism_to_json(const Parallelism& p) { return Json::array({p.h, p.w, p.c, p.f}); }

Json module_to_json(const ModuleDesc& m) {
  Json cfg = Json::object();
  for (const auto& [k, v] : m.cfg) cfg[k] = v;
  return {{"kind", std::string(to_string(m.kind))},
          {"cfg", std::move(cfg)},
          {"in_width", m.in_width},
          {"out_width", m.out_width},
          {"replicas", m.replicas},
          {"stream_in", m.stream_in()},
          {"stream_out", m.stream_out()},
          {"side_branch", m.side_branch},
          {"latency", m.latency}};
}

Json config_to_json(const FusedDesignConfig& cfg) {
  Json seqs = Json::array();
  for (auto s : cfg.seqs) seqs.push_back(std::string(to_string(s)));
  Json buffers = Json::array();
  for (auto b : cfg.buffers) buffers.push_back(std::string(to_string(b)));
  Json wino = Json::array();
  for (size_t i = 0; i < cfg.layers(); ++i) wino.push_back(cfg.uses_winograd(i));
  return {{"tile_h", cfg.tile_h}, {"tile_w", cfg.tile_w},   {"tile_c", cfg.tile_c},
          {"tile_f", cfg.tile_f}, {"par_h", cfg.par_h},     {"par_w", cfg.par_w},
          {"par_c", cfg.par_c},   {"par_f", cfg.par_f},     {"seqs", std::move(seqs)},
          {"buffers", std::move(buffers)}, {"winograd", std::move(wino)},
          {"winograd_m", cfg.winograd_m}};
}

FusedDesignConfig config_from_json(const Json& j, const std::vector<FusedLayer>& layers) {
  return guarded("config", [&] {
    const size_t n = layers.size();
    if (n == 0) throw Error(ErrorKind::UnsupportedConfig, "block has no arithmetic layers");
    std::vector<int64_t> tc;
    for (const auto& l : layers) tc.push_back(l.input.channels);
    if (j.contains("tile_c")) tc = j.at("tile_c").get<std::vector<int64_t>>();
    const int64_t tf = value_or<int64_t>(j, "tile_f", layers.back().output.channels);
    const int64_t th = value_or<int64_t>(j, "tile_h", layers.back().output.height);
    const int64_t tw = value_or<int64_t>(j, "tile_w", layers.back().output.width);
    std::vector<Seq> seqs(n, Seq::FM);
    if (j.contains("seqs")) seqs = seqs_from_json(j.at("seqs"), n);
    std::vector<BufferOption> buffers(n - 1, BufferOption::Double);
    if (j.contains("buffers")) {
      buffers.clear();
      for (const auto& b : j.at("buffers")) {
        buffers.push_back(buffer_option_from_string(b.get<std::string>()));
      }
    }
    const auto wino = value_or<std::vector<bool>>(j, "winograd", {});
    const int m = value_or<int>(j, "winograd_m", 4);
    std::vector<Parallelism> per_layer;
    if (j.contains("parallelism")) {
      for (const auto& p : j.at("parallelism")) per_layer.push_back(parallelism_from_json(p));
    } else {
      const auto pc = field(j, "par_c").get<std::vector<int64_t>>();
      const int64_t ph = value_or<int64_t>(j, "par_h", 1);
      const int64_t pw = value_or<int64_t>(j, "par_w", 1);
      const int64_t pf = field(j, "par_f").get<int64_t>();
      for (size_t i = 0; i < pc.size(); ++i) {
        per_layer.push_back({ph, pw, pc[i], i + 1 < pc.size() ? pc[i + 1] : pf});
      }
    }
    if (per_layer.size() != n) {
      throw Error(ErrorKind::FormatError, "config describes " + std::to_string(per_layer.size()) +
                                              " layers, block has " + std::to_string(n));
    }
    return FusedDesignConfig::from_layers(th, tw, std::move(tc), tf, per_layer, std::move(seqs),
                                          std::move(buffers), wino, m);
  });
}

LayerHwConfig layer_hw_config_from_json(const Json& j, const LayerSpec& layer) {
  return guarded("layer config", [&] {
    LayerHwConfig hw;
    hw.par = parallelism_from_json(field(j, "par"));
    hw.tile = {hw.par.h, hw.par.w, hw.par.c, hw.par.f};
    if (j.contains("tile")) {
      const auto t = parallelism_from_json(j.at("tile"));
      hw.tile = {t.h, t.w, t.c, t.f};
    }
    hw.seq = seq_from_string(value_or<std::string>(j, "seq", "FM"));
    hw.use_winograd = value_or<bool>(j, "winograd", false);
    hw.winograd_m = value_or<int>(j, "winograd_m", 4);
    hw.layer_kind = layer.kind;
    hw.validate(layer);
    return hw;
  });
}

Json trace_to_json(const std::vector<TraceEvent>& trace) {
  Json out = Json::array();
  for (const auto& e : trace) {
    out.push_back({{"time", e.time},
                   {"layer", e.layer + 1},
                   {"tile", e.tile},
                   {"unit", e.unit},
                   {"event", e.start ? "start" : "end"}});
  }
  return out;
}

Json sim_report_to_json(const SimReport& r, bool include_trace) {
  Json layers = Json::array();
  for (const auto& l : r.layers) {
    layers.push_back({{"label", l.label},
                      {"seq", std::string(to_string(l.seq))},
                      {"winograd", l.winograd},
                      {"par", parallelism_to_json(l.par)},
                      {"busy_cycles", l.busy_cycles},
                      {"stall_cycles", l.stall_cycles},
                      {"isolated_cycles", l.isolated_cycles},
                      {"work_units", l.work_units},
                      {"fill_cycles", l.fill_cycles}});
  }
  Json buffers = Json::array();
  for (const auto& b : r.buffers) {
    buffers.push_back({{"index", b.index},
                       {"option", std::string(to_string(b.option))},
                       {"words", b.words},
                       {"chunk_words", b.chunk_words},
                       {"capacity_chunks", b.capacity_chunks},
                       {"peak_words", b.peak_words}});
  }
  Json j = {{"total_cycles", r.total_cycles},
            {"makespan", r.makespan},
            {"fill_cycles", r.fill_cycles},
            {"sequential_cycles", r.sequential_cycles},
            {"max_layer_cycles", r.max_layer_cycles},
            {"spatial_tiles", r.spatial_tiles},
            {"channel_passes", r.channel_passes},
            {"layers", std::move(layers)},
            {"buffers", std::move(buffers)},
            {"input_buffer_words", r.input_buffer_words},
            {"output_buffer_words", r.output_buffer_words},
            {"total_buffer_words", r.total_buffer_words()},
            {"redundant_compute_ops", r.redundant_compute_ops},
            {"extra_offchip_bytes", r.extra_offchip_bytes}};
  if (include_trace) j["trace"] = trace_to_json(r.trace);
  return j;
}

Json resources_to_json(const ResourceEstimate& r) {
  return {{"dsp", r.dsp_used},
          {"bram", r.bram_used},
          {"alm", r.alm_used},
          {"model_coefficients", r.model_coefficients}};
}

Json traffic_to_json(const Traffic& t) {
  return {{"input_bytes", t.input_bytes},
          {"output_bytes", t.output_bytes},
          {"weight_bytes", t.weight_bytes},
          {"intermediate_bytes", t.intermediate_bytes},
          {"halo_bytes", t.halo_bytes},
          {"total_bytes", t.total()}};
}

namespace {
Json point_to_json(const RooflinePoint& p) {
  return {{"arithmetic_intensity", p.arithmetic_intensity},
          {"attainable_gops", p.attainable_gops},
          {"compute_roof_gops", p.compute_roof_gops},
          {"bandwidth_bound", p.bandwidth_bound()}};
}
}  // namespace

Json roofline_to_json(const RooflineAnalysis& a) {
  return {{"ops", a.ops},
          {"cycles", a.cycles},
          {"peak_gops", a.peak_gops},
          {"fused", point_to_json(a.fused_point)},
          {"baseline", point_to_json(a.baseline_point)},
          {"fused_traffic", traffic_to_json(a.fused)},
          {"baseline_traffic", traffic_to_json(a.baseline)}};
}

Json candidate_to_json(const DesignCandidate& c) {
  return {{"config", config_to_json(c.cfg)},
          {"latency_s", c.latency_s},
          {"attainable_gops", c.attainable_gops()},
          {"resources", resources_to_json(c.resources)},
          {"roofline", roofline_to_json(c.analysis)},
          {"simulation", sim_report_to_json(c.report)}};
}

Json model_design_to_json(const ModelDesign& d) {
  Json stages = Json::array();
  for (const auto& s : d.stages) {
    Json js = {{"index", s.index}, {"label", s.label}, {"ops", s.ops}, {"latency_s", s.latency_s}};
    js["design"] = s.design ? candidate_to_json(*s.design) : Json(nullptr);
    if (s.projection) js["projection"] = candidate_to_json(*s.projection);
    stages.push_back(std::move(js));
  }
  return {{"ops", d.ops},
          {"latency_ms", d.latency_ms()},
          {"gops", d.gops()},
          {"traffic_bytes", d.traffic_bytes},
          {"arithmetic_intensity", d.arithmetic_intensity()},
          {"resources", resources_to_json(d.resources)},
          {"stages", std::move(stages)}};
}

}  // namespace turf
