//
// Copyright © 2026 The turf Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "turf/dse.hpp"

#include "turf/error.hpp"

#include <algorithm>
#include <sstream>
#include <tuple>

namespace turf {
namespace {

int64_t ceil_div(int64_t a, int64_t b) { return (a + b - 1) / b; }

/// Candidate values up to and including the first one covering `channels`.
std::vector<int64_t> par_values(int64_t channels, const std::vector<int64_t>& values) {
  std::vector<int64_t> out;
  for (int64_t p : values) {
    out.push_back(p);
    if (p >= channels) break;
  }
  return out;
}

bool winograd_eligible(const LayerSpec& l) {
  return (l.kind == LayerKind::StandardConv || l.kind == LayerKind::DepthwiseConv) &&
         l.kernel == 3 && l.stride == 1;
}

/// A parallelism and Winograd choice before tiling and sequencing.
struct Sketch {
  std::vector<Parallelism> par;
  std::vector<bool> winograd;
  int m = 4;
  int64_t dsp = 0;
  int64_t cycles = 0;
};

FusedDesignConfig base_config(const std::vector<FusedLayer>& layers, const Sketch& s,
                              int64_t tile_h, int64_t tile_w) {
  std::vector<int64_t> tc;
  for (const auto& l : layers) tc.push_back(l.input.channels);
  std::vector<Seq> seqs(layers.size(), Seq::FM);
  std::vector<BufferOption> buffers(layers.size() - 1, BufferOption::MatchNext);
  return FusedDesignConfig::from_layers(tile_h, tile_w, tc, layers.back().output.channels, s.par,
                                        seqs, buffers, s.winograd, s.m);
}

/// Every per-layer parallelism chain that satisfies port matching.
void enumerate_parallelism(const std::vector<FusedLayer>& layers, size_t i, int64_t ph,
                           int64_t pc, const std::vector<int64_t>& values, std::vector<Parallelism>& cur,
                           std::vector<std::vector<Parallelism>>& out) {
  const auto& layer = layers[i];
  const auto pfs = layer.spec.kind == LayerKind::DepthwiseConv
                       ? std::vector<int64_t>{pc}
                       : par_values(layer.output.channels, values);
  for (int64_t pf : pfs) {
    cur.push_back({ph, ph, pc, pf});
    if (i + 1 == layers.size()) {
      out.push_back(cur);
    } else {
      enumerate_parallelism(layers, i + 1, ph, pf, values, cur, out);
    }
    cur.pop_back();
  }
}

}  // namespace

std::string stage_signature(const BlockSpec& block, const TensorShape& input) {
  std::ostringstream os;
  os << to_string(block.kind) << (block.has_shortcut ? "+sc" : "") << "@" << to_string(input);
  for (const auto& l : block.layers) {
    os << "|" << to_string(l.kind) << ":k" << l.kernel << "s" << l.stride << "p" << l.padding
       << "o" << l.out_channels.value_or(0) << (l.bias ? "b" : "");
  }
  if (block.projection) {
    os << "|proj:s" << block.projection->stride << "o" << block.projection->out_channels.value_or(0);
  }
  return os.str();
}

BlockDseResult explore_block(const BlockSpec& block, const TensorShape& input,
                             const PlatformSpec& platform, const CalibrationTable& calib,
                             const DseOptions& options) {
  platform.validate();
  const auto layers = fused_layers(block, input);
  if (layers.empty()) throw Error(ErrorKind::UnsupportedConfig, "block has no arithmetic layers");
  const size_t n = layers.size();
  const bool has_fc = std::any_of(layers.begin(), layers.end(), [](const FusedLayer& l) {
    return l.spec.kind == LayerKind::FullyConnected;
  });
  const bool any_eligible =
      std::any_of(layers.begin(), layers.end(),
                  [](const FusedLayer& l) { return winograd_eligible(l.spec); });
  const auto& out_shape = layers.back().output;
  const int64_t full_bytes = fused_traffic(block, input, 0, calib.word_bytes).total();

  // Analytic ranking over parallelism and Winograd choices.
  std::vector<Sketch> sketches;
  for (int64_t ph : options.spatial_par) {
    if (has_fc && ph != 1) continue;
    std::vector<std::pair<bool, int>> wino = {{false, 4}};
    if (options.allow_winograd && any_eligible && (ph == 2 || ph == 4)) {
      wino.emplace_back(true, static_cast<int>(ph));
    }
    std::vector<std::vector<Parallelism>> chains;
    std::vector<Parallelism> cur;
    for (int64_t pc : par_values(layers.front().input.channels, options.channel_par)) {
      enumerate_parallelism(layers, 0, ph, pc, options.channel_par, cur, chains);
    }
    for (const auto& [use, m] : wino) {
      std::vector<Sketch> partial;
      for (const auto& chain : chains) {
        Sketch sk;
        sk.par = chain;
        sk.m = m;
        for (const auto& l : layers) sk.winograd.push_back(use && winograd_eligible(l.spec));
        partial.push_back(std::move(sk));
      }
      for (auto& s : partial) {
        for (size_t i = 0; i < n; ++i) {
          LayerHwConfig hw;
          hw.par = s.par[i];
          hw.tile = {hw.par.h, hw.par.w, hw.par.c, hw.par.f};
          hw.use_winograd = s.winograd[i];
          hw.winograd_m = s.m;
          hw.layer_kind = layers[i].spec.kind;
          s.dsp += layer_dsp(layers[i].spec, hw);
          const TileDims whole{layers[i].output.height, layers[i].output.width,
                               layers[i].input.channels, layers[i].output.channels};
          s.cycles = std::max(s.cycles, layer_cycle_counts(layers[i].spec, hw, whole).compute_cycles);
        }
        if (s.dsp <= platform.dsp_total) sketches.push_back(std::move(s));
      }
    }
  }
  BlockDseResult result;
  result.analytic_candidates = sketches.size();
  if (sketches.empty()) {
    throw Error(ErrorKind::Infeasible, "no parallelism setting fits " +
                                           std::to_string(platform.dsp_total) + " DSPs");
  }
  const auto estimate = [&](const Sketch& s) {
    return std::max(static_cast<double>(s.cycles) / platform.clock_hz(),
                    static_cast<double>(full_bytes) / platform.bytes_per_second());
  };
  std::stable_sort(sketches.begin(), sketches.end(), [&](const Sketch& a, const Sketch& b) {
    return std::tuple(estimate(a), a.dsp) < std::tuple(estimate(b), b.dsp);
  });
  if (sketches.size() > options.top_k) sketches.resize(options.top_k);

  const int64_t rf = block_receptive_field(block);
  EnumerateOptions enum_opts;
  enum_opts.best_per_sequence = true;
  std::vector<DesignCandidate> evaluated;
  for (const auto& s : sketches) {
    int64_t th = out_shape.height;
    int64_t tw = out_shape.width;
    for (;;) {
      std::vector<DesignCandidate> round;
      const auto cfg = base_config(layers, s, th, tw);
      for (auto& r : enumerate_sequences(block, input, cfg, enum_opts)) {
        DesignCandidate c;
        c.cfg = cfg;
        c.cfg.seqs = r.seqs;
        c.cfg.buffers = r.buffers;
        c.report = std::move(r.report);
        c.resources = estimate_resources(block, input, c.cfg, c.report, calib);
        c.analysis = roofline(block, input, c.report, c.resources, platform, calib.word_bytes);
        c.latency_s = std::max(
            static_cast<double>(c.report.total_cycles) / platform.clock_hz(),
            static_cast<double>(c.analysis.fused.total()) / platform.bytes_per_second());
        round.push_back(std::move(c));
      }
      const bool fits = std::any_of(round.begin(), round.end(), [&](const DesignCandidate& c) {
        return c.resources.feasible(platform);
      });
      for (auto& c : round) evaluated.push_back(std::move(c));
      const int64_t nh = ceil_div(th, 2);
      const int64_t nw = ceil_div(tw, 2);
      if (fits || (nh == th && nw == tw) || nh < std::min(rf, out_shape.height) ||
          nw < std::min(rf, out_shape.width)) {
        break;
      }
      th = nh;
      tw = nw;
    }
  }
  result.best = evaluated.at(pick_best_design(evaluated, platform));
  if (options.keep_evaluated) result.evaluated = std::move(evaluated);
  return result;
}

DesignGenerator::DesignGenerator(PlatformSpec platform, CalibrationTable calib,
                                 DseOptions options)
    : platform_(std::move(platform)), calib_(std::move(calib)), options_(std::move(options)) {
  platform_.validate();
}

const BlockDseResult& DesignGenerator::design_block(const BlockSpec& block,
                                                    const TensorShape& input) {
  const auto key = stage_signature(block, input);
  auto it = cache_.find(key);
  if (it == cache_.end()) {
    it = cache_.emplace(key, explore_block(block, input, platform_, calib_, options_)).first;
  }
  return it->second;
}

ModelDesign DesignGenerator::design_model(const ModelSpec& model) {
  ModelDesign md;
  for (size_t i = 0; i < model.stages().size(); ++i) {
    const auto& stage = model.stages()[i];
    const auto& in = model.stage_input(i);
    StageDesign sd;
    sd.index = i;
    sd.label = stage_label(stage);
    BlockSpec block;
    if (const auto* layer = std::get_if<LayerSpec>(&stage)) {
      block = single_layer_block(*layer);
    } else {
      block = std::get<BlockSpec>(stage);
    }
    if (!fused_layers(block, in).empty()) {
      const auto& best = design_block(block, in).best;
      sd.design = best;
      sd.ops = best.analysis.ops;
      sd.latency_s = best.latency_s;
      md.traffic_bytes += best.analysis.fused.total();
      md.resources.dsp_used = std::max(md.resources.dsp_used, best.resources.dsp_used);
      md.resources.bram_used = std::max(md.resources.bram_used, best.resources.bram_used);
      md.resources.alm_used = std::max(md.resources.alm_used, best.resources.alm_used);
      md.resources.model_coefficients = best.resources.model_coefficients;
    }
    if (block.projection) {
      const auto& proj = design_block(single_layer_block(*block.projection), in).best;
      sd.projection = proj;
      sd.ops += proj.analysis.ops;
      sd.latency_s += proj.latency_s;
      md.traffic_bytes += proj.analysis.fused.total();
      md.resources.dsp_used = std::max(md.resources.dsp_used, proj.resources.dsp_used);
      md.resources.bram_used = std::max(md.resources.bram_used, proj.resources.bram_used);
      md.resources.alm_used = std::max(md.resources.alm_used, proj.resources.alm_used);
    }
    md.ops += sd.ops;
    md.latency_s += sd.latency_s;
    md.stages.push_back(std::move(sd));
  }
  return md;
}

}  // namespace turf
