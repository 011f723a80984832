//
// Copyright © 2026 The turf Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "turf/resources.hpp"

#include "turf/error.hpp"
#include "turf/winograd.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <tuple>

namespace turf {

void PlatformSpec::validate() const {
  if (!(bandwidth_gbps > 0) || dsp_total <= 0 || bram_blocks <= 0 || alm_total <= 0 ||
      !(clock_mhz > 0)) {
    throw Error(ErrorKind::UnsupportedConfig, "platform '" + name + "' has a non-positive field");
  }
}

PlatformSpec PlatformSpec::stratix_v() {
  return {"stratix-v-5sgsd8", 38.0, 1963, 2567, 262400, 200.0};
}

const ModuleCoefficients& CalibrationTable::coefficients(ModuleKind kind) const {
  const auto it = alm.find(kind);
  if (it == alm.end()) {
    throw Error(ErrorKind::CalibrationError,
                "no ALM coefficients for " + std::string(to_string(kind)) + " in '" + source +
                    "'");
  }
  return it->second;
}

CalibrationTable CalibrationTable::placeholder() {
  CalibrationTable t;
  t.alm_base = 12000.0;
  t.alm = {
      {ModuleKind::InputBuffer, {120.0, 2.0}},
      {ModuleKind::OutputBuffer, {120.0, 2.0}},
      {ModuleKind::LineBuffer, {200.0, 3.0}},
      {ModuleKind::WinogradInputTransform, {300.0, 18.0}},
      {ModuleKind::WinogradWeightTransform, {300.0, 12.0}},
      {ModuleKind::WinogradOutputTransform, {300.0, 18.0}},
      {ModuleKind::DotProductArray, {400.0, 9.0}},
      {ModuleKind::ElementwiseAdd, {100.0, 8.0}},
      {ModuleKind::Activation, {50.0, 2.0}},
      {ModuleKind::Norm, {100.0, 10.0}},
  };
  return t;
}

bool ResourceEstimate::feasible(const PlatformSpec& platform) const {
  return dsp_used <= platform.dsp_total && bram_used <= platform.bram_blocks &&
         alm_used <= platform.alm_total;
}

int64_t bram_blocks(int64_t words, const CalibrationTable& calib) {
  const int64_t bytes = words * calib.word_bytes;
  return (bytes + calib.bram_block_bytes - 1) / calib.bram_block_bytes;
}

int64_t layer_dsp(const LayerSpec& layer, const LayerHwConfig& hw) {
  const auto& p = hw.par;
  const bool depthwise = layer.kind == LayerKind::DepthwiseConv;
  switch (layer.kind) {
    case LayerKind::FullyConnected:
      return p.c * p.f;
    case LayerKind::StandardConv:
    case LayerKind::PointwiseConv:
    case LayerKind::DepthwiseConv:
      break;
    default:
      return 0;
  }
  const int64_t lanes = depthwise ? p.c : p.c * p.f;
  const int64_t k2 = int64_t{layer.kernel} * layer.kernel;
  if (!hw.use_winograd) return lanes * p.h * p.w * k2;
  const auto wc = WinogradConfig::make(hw.winograd_m, layer.kernel);
  const int64_t n = wc.tile();
  const int64_t m = wc.m;
  const int64_t r = wc.r;
  const int64_t out_lanes = depthwise ? p.c : p.f;
  const auto nonshift = [](const Matrix<Rational>& x) {
    return static_cast<int64_t>(count_multiplier_constants(x));
  };
  return lanes * n * n + 2 * n * nonshift(wc.B) * p.c + (r + n) * nonshift(wc.G) * lanes +
         (n + m) * nonshift(wc.A) * out_lanes;
}

ResourceEstimate estimate_resources(const BlockSpec& block, const TensorShape& input,
                                    const FusedDesignConfig& cfg, const SimReport& report,
                                    const CalibrationTable& calib) {
  const auto layers = fused_layers(block, input);
  ResourceEstimate est;
  est.model_coefficients = calib.source;
  double alm = calib.alm_base;
  for (size_t i = 0; i < layers.size(); ++i) {
    const auto hw = layer_hw_config(layers[i], cfg, i);
    est.dsp_used += layer_dsp(layers[i].spec, hw);
    for (const auto& module : instantiate_layer(layers[i].spec, hw)) {
      const auto& c = calib.coefficients(module.kind);
      alm += c.fixed + c.per_lane * static_cast<double>(module.stream_in() + module.stream_out());
    }
  }
  if (block.has_shortcut) {
    const auto& c = calib.coefficients(ModuleKind::ElementwiseAdd);
    const auto last = cfg.layer_parallelism(layers.size() - 1);
    alm += c.fixed + c.per_lane * static_cast<double>(2 * last.f * last.h * last.w);
  }
  est.alm_used = static_cast<int64_t>(std::ceil(alm));
  est.bram_used = bram_blocks(report.input_buffer_words, calib) +
                  bram_blocks(report.output_buffer_words, calib);
  for (const auto& b : report.buffers) est.bram_used += bram_blocks(b.words, calib);
  return est;
}

namespace {

int64_t weight_words(const std::vector<FusedLayer>& layers) {
  int64_t words = 0;
  for (const auto& l : layers) words += layer_params(l.spec, l.input);
  return words;
}

}  // namespace

Traffic fused_traffic(const BlockSpec& block, const TensorShape& input, int64_t halo_bytes,
                      int64_t word_bytes) {
  const auto layers = fused_layers(block, input);
  Traffic t;
  if (layers.empty()) return t;
  t.input_bytes = layers.front().input.elements() * word_bytes;
  t.output_bytes = layers.back().output.elements() * word_bytes;
  t.weight_bytes = weight_words(layers) * word_bytes;
  t.halo_bytes = halo_bytes;
  return t;
}

Traffic baseline_traffic(const BlockSpec& block, const TensorShape& input, int64_t word_bytes) {
  const auto layers = fused_layers(block, input);
  Traffic t;
  if (layers.empty()) return t;
  t.input_bytes = layers.front().input.elements() * word_bytes;
  t.output_bytes = layers.back().output.elements() * word_bytes;
  t.weight_bytes = weight_words(layers) * word_bytes;
  for (size_t i = 0; i + 1 < layers.size(); ++i) {
    t.intermediate_bytes += 2 * layers[i].output.elements() * word_bytes;
  }
  // The residual operand is fetched again by the last layer.
  if (block.has_shortcut) t.intermediate_bytes += t.input_bytes;
  return t;
}

RooflinePoint roofline_point(int64_t ops, int64_t bytes, double compute_roof_gops,
                             const PlatformSpec& platform) {
  RooflinePoint p;
  p.compute_roof_gops = compute_roof_gops;
  p.arithmetic_intensity = static_cast<double>(ops) / static_cast<double>(std::max<int64_t>(bytes, 1));
  p.attainable_gops = std::min(compute_roof_gops, p.arithmetic_intensity * platform.bandwidth_gbps);
  return p;
}

RooflineAnalysis roofline(const BlockSpec& block, const TensorShape& input,
                          const SimReport& report, const ResourceEstimate& resources,
                          const PlatformSpec& platform, int64_t word_bytes) {
  RooflineAnalysis a;
  for (const auto& l : fused_layers(block, input)) a.ops += layer_ops(l.spec, l.input);
  a.cycles = report.total_cycles;
  a.peak_gops = 2.0 * static_cast<double>(resources.dsp_used) * platform.clock_mhz * 1e-3;
  const double roof = static_cast<double>(a.ops) * platform.clock_hz() /
                      static_cast<double>(std::max<int64_t>(a.cycles, 1)) * 1e-9;
  a.fused = fused_traffic(block, input, report.extra_offchip_bytes, word_bytes);
  a.baseline = baseline_traffic(block, input, word_bytes);
  a.fused_point = roofline_point(a.ops, a.fused.total(), roof, platform);
  a.baseline_point = roofline_point(a.ops, a.baseline.total(), roof, platform);
  return a;
}

std::string DesignCandidate::signature() const {
  std::ostringstream os;
  os << "T" << cfg.tile_h << "x" << cfg.tile_w << " P" << cfg.par_h << "x" << cfg.par_w << " c[";
  for (size_t i = 0; i < cfg.par_c.size(); ++i) os << (i ? "," : "") << cfg.par_c[i];
  os << "] f" << cfg.par_f << " seq[";
  for (size_t i = 0; i < cfg.seqs.size(); ++i) os << (i ? "," : "") << to_string(cfg.seqs[i]);
  os << "] buf[";
  for (size_t i = 0; i < cfg.buffers.size(); ++i) {
    os << (i ? "," : "") << to_string(cfg.buffers[i]);
  }
  os << "] wino[";
  for (size_t i = 0; i < cfg.layers(); ++i) os << (cfg.uses_winograd(i) ? "1" : "0");
  os << "]m" << cfg.winograd_m;
  return os.str();
}

size_t pick_best_design(std::span<const DesignCandidate> candidates,
                        const PlatformSpec& platform) {
  std::optional<size_t> best;
  const auto key = [&](const DesignCandidate& c) {
    return std::tuple(-c.attainable_gops(), c.latency_s, c.resources.dsp_used, c.signature());
  };
  for (size_t i = 0; i < candidates.size(); ++i) {
    if (!candidates[i].resources.feasible(platform)) continue;
    if (!best || key(candidates[i]) < key(candidates[*best])) best = i;
  }
  if (!best) {
    throw Error(ErrorKind::Infeasible, "none of " + std::to_string(candidates.size()) +
                                           " candidates fits " + platform.name);
  }
  return *best;
}

}  // namespace turf
