//
// Copyright © 2026 The turf Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "turf/fusion.hpp"

#include "turf/error.hpp"

#include <algorithm>
#include <limits>
#include <sstream>
#include <tuple>

namespace turf {
namespace {

int64_t ceil_div(int64_t a, int64_t b) { return (a + b - 1) / b; }

[[noreturn]] void config_error(const std::string& msg) {
  throw Error(ErrorKind::UnsupportedConfig, msg);
}

bool is_depthwise(const LayerSpec& l) { return l.kind == LayerKind::DepthwiseConv; }

ProduceMode produce_mode(const LayerSpec& l, Seq seq) {
  return is_depthwise(l) || seq == Seq::FM ? ProduceMode::PerUnit : ProduceMode::PerTile;
}

ConsumeMode consume_mode(const LayerSpec& l, Seq seq) {
  return is_depthwise(l) || seq == Seq::CM ? ConsumeMode::PerUnit : ConsumeMode::PerTile;
}

}  // namespace

Parallelism FusedDesignConfig::layer_parallelism(size_t i) const {
  const int64_t pf = i + 1 < par_c.size() ? par_c[i + 1] : par_f;
  return {par_h, par_w, par_c.at(i), pf};
}

void check_port_matching(const std::vector<Parallelism>& per_layer) {
  for (size_t i = 1; i < per_layer.size(); ++i) {
    const auto& a = per_layer[i - 1];
    const auto& b = per_layer[i];
    if (b.h != a.h || b.w != a.w || b.c != a.f) {
      std::ostringstream os;
      os << "layer " << i + 1 << " ports <P_h=" << b.h << ", P_w=" << b.w << ", P_c=" << b.c
         << "> do not match layer " << i << " <P_h=" << a.h << ", P_w=" << a.w
         << ", P_f=" << a.f << ">";
      throw Error(ErrorKind::PortMismatch, os.str());
    }
  }
}

FusedDesignConfig FusedDesignConfig::from_layers(int64_t tile_h, int64_t tile_w,
                                                 std::vector<int64_t> tile_c, int64_t tile_f,
                                                 const std::vector<Parallelism>& per_layer,
                                                 std::vector<Seq> seqs,
                                                 std::vector<BufferOption> buffers,
                                                 std::vector<bool> winograd, int winograd_m) {
  if (per_layer.empty()) config_error("fused design needs at least one layer");
  check_port_matching(per_layer);
  FusedDesignConfig cfg;
  cfg.tile_h = tile_h;
  cfg.tile_w = tile_w;
  cfg.tile_c = std::move(tile_c);
  cfg.tile_f = tile_f;
  cfg.par_h = per_layer.front().h;
  cfg.par_w = per_layer.front().w;
  for (const auto& p : per_layer) cfg.par_c.push_back(p.c);
  cfg.par_f = per_layer.back().f;
  cfg.seqs = std::move(seqs);
  cfg.buffers = std::move(buffers);
  cfg.winograd = std::move(winograd);
  cfg.winograd_m = winograd_m;
  return cfg;
}

std::vector<FusedLayer> fused_layers(const BlockSpec& block, const TensorShape& input) {
  std::vector<FusedLayer> out;
  TensorShape shape = input;
  for (const auto& layer : block.layers) {
    const TensorShape next = output_shape(layer, shape);
    if (layer.kind == LayerKind::FullyConnected) {
      // Flattened: one pixel carrying every input element.
      out.push_back({layer, TensorShape{1, 1, shape.elements()}, next});
    } else if (is_conv(layer.kind)) {
      out.push_back({layer, shape, next});
    }
    shape = next;
  }
  return out;
}

BlockSpec single_layer_block(const LayerSpec& layer) {
  BlockSpec b;
  b.layers = {layer};
  return b;
}

// --- Work-unit pipeline -----------------------------------------------------

PipelineResult simulate_pipeline(const std::vector<PipelineStage>& stages,
                                 const std::vector<PipelineBuffer>& buffers, bool record_trace) {
  const size_t n = stages.size();
  if (n == 0) config_error("pipeline has no stages");
  if (buffers.size() + 1 != n) config_error("pipeline needs one buffer between adjacent stages");
  const size_t tiles = stages.front().unit_cycles.size();
  for (const auto& s : stages) {
    if (s.unit_cycles.size() != tiles) config_error("stages disagree on the tile count");
  }
  for (size_t b = 0; b < buffers.size(); ++b) {
    const auto& buf = buffers[b];
    const int64_t hold = stages[b].produce == ProduceMode::PerTile ? buf.chunks_per_tile : 1;
    const int64_t need = stages[b + 1].consume == ConsumeMode::PerTile ? buf.chunks_per_tile : 1;
    if (buf.capacity_chunks < std::max(hold, need)) {
      throw Error(ErrorKind::InefficientConfig,
                  "buffer B" + std::to_string(b + 2) + " holds " +
                      std::to_string(buf.capacity_chunks) + " chunks but needs " +
                      std::to_string(std::max(hold, need)));
    }
    for (size_t t = 0; t < tiles; ++t) {
      const auto units_out = static_cast<int64_t>(stages[b].unit_cycles[t].size());
      const auto units_in = static_cast<int64_t>(stages[b + 1].unit_cycles[t].size());
      if ((stages[b].produce == ProduceMode::PerUnit && units_out != buf.chunks_per_tile) ||
          (stages[b + 1].consume == ConsumeMode::PerUnit && units_in != buf.chunks_per_tile)) {
        config_error("per-unit stages must have one unit per chunk");
      }
    }
  }

  struct Engine {
    size_t tile = 0;
    int64_t unit = 0;
    bool running = false;
    int64_t end = 0;
    bool done = false;
    bool started = false;
  };
  struct Buffer {
    int64_t free = 0;
    int64_t finalized = 0;
    int64_t peak = 0;
  };
  std::vector<Engine> engines(n);
  std::vector<Buffer> state(buffers.size());
  for (size_t b = 0; b < buffers.size(); ++b) state[b].free = buffers[b].capacity_chunks;
  PipelineResult result;
  result.stages.resize(n);
  for (size_t i = 0; i < n; ++i) {
    for (const auto& tile : stages[i].unit_cycles) {
      result.stages[i].units += static_cast<int64_t>(tile.size());
    }
    engines[i].done = result.stages[i].units == 0;
  }

  const auto units_in_tile = [&](size_t i, size_t t) {
    return static_cast<int64_t>(stages[i].unit_cycles[t].size());
  };
  const auto advance = [&](Engine& e, size_t i) {
    if (++e.unit == units_in_tile(i, e.tile)) {
      e.unit = 0;
      ++e.tile;
      while (e.tile < tiles && units_in_tile(i, e.tile) == 0) ++e.tile;
    }
    if (e.tile >= tiles) e.done = true;
  };

  int64_t now = 0;
  for (;;) {
    // Completions at `now` release chunks before any new unit starts.
    for (size_t i = 0; i < n; ++i) {
      Engine& e = engines[i];
      if (!e.running || e.end != now) continue;
      e.running = false;
      const int64_t last = units_in_tile(i, e.tile) - 1;
      if (i + 1 < n) {
        Buffer& out = state[i];
        if (stages[i].produce == ProduceMode::PerUnit) {
          out.finalized += 1;
        } else if (e.unit == last) {
          out.finalized += buffers[i].chunks_per_tile;
        }
      }
      if (i > 0) {
        Buffer& in = state[i - 1];
        if (stages[i].consume == ConsumeMode::PerUnit) {
          in.free += 1;
        } else if (e.unit == last) {
          in.free += buffers[i - 1].chunks_per_tile;
        }
      }
      if (record_trace) {
        result.trace.push_back({now, i, static_cast<int64_t>(e.tile), e.unit, false});
      }
      result.stages[i].last_end = now;
      advance(e, i);
    }
    for (size_t i = 0; i < n; ++i) {
      Engine& e = engines[i];
      if (e.running || e.done) continue;
      const auto t = static_cast<int64_t>(e.tile);
      if (i > 0) {
        const int64_t per_tile = buffers[i - 1].chunks_per_tile;
        const int64_t needed = stages[i].consume == ConsumeMode::PerUnit
                                   ? t * per_tile + e.unit + 1
                                   : (t + 1) * per_tile;
        if (state[i - 1].finalized < needed) continue;
      }
      if (i + 1 < n) {
        Buffer& out = state[i];
        int64_t reserve = 0;
        if (stages[i].produce == ProduceMode::PerUnit) {
          reserve = 1;
        } else if (e.unit == 0) {
          reserve = buffers[i].chunks_per_tile;
        }
        if (out.free < reserve) continue;
        out.free -= reserve;
        out.peak = std::max(out.peak, buffers[i].capacity_chunks - out.free);
      }
      const int64_t duration = stages[i].unit_cycles[e.tile][static_cast<size_t>(e.unit)];
      auto& timing = result.stages[i];
      if (!e.started) {
        e.started = true;
        timing.first_start = now;
      }
      timing.busy += duration;
      e.running = true;
      e.end = now + duration;
      if (record_trace) result.trace.push_back({now, i, t, e.unit, true});
    }
    const bool finished =
        std::all_of(engines.begin(), engines.end(), [](const Engine& e) { return e.done; });
    if (finished) break;
    int64_t next = std::numeric_limits<int64_t>::max();
    for (const auto& e : engines) {
      if (e.running) next = std::min(next, e.end);
    }
    if (next == std::numeric_limits<int64_t>::max()) {
      std::ostringstream os;
      os << "no engine can progress at cycle " << now << ":";
      for (size_t i = 0; i < n; ++i) {
        os << " L" << i + 1 << "(tile " << engines[i].tile << ", unit " << engines[i].unit
           << ")";
      }
      for (size_t b = 0; b < state.size(); ++b) {
        os << " B" << b + 2 << "(free " << state[b].free << ", finalized "
           << state[b].finalized << ")";
      }
      throw Error(ErrorKind::SimDeadlock, os.str());
    }
    now = next;
  }
  result.makespan = now;
  for (auto& timing : result.stages) {
    timing.stall = timing.units == 0 ? 0 : (timing.last_end - timing.first_start) - timing.busy;
  }
  for (const auto& b : state) result.peak_chunks.push_back(b.peak);
  return result;
}

// --- Geometry ---------------------------------------------------------------

Interval input_interval(const Interval& out, int kernel, int stride, int padding, int64_t in) {
  const int64_t begin = out.begin * stride - padding;
  const int64_t end = (out.end - 1) * stride - padding + kernel;
  return {std::max<int64_t>(0, begin), std::min(in, end)};
}

namespace {

struct TileGeometry {
  /// Per layer: output rows and columns of this tile.
  std::vector<Interval> rows, cols;
  Interval in_rows, in_cols;
};

std::vector<TileGeometry> tile_geometry(const std::vector<FusedLayer>& layers, int64_t tile_h,
                                        int64_t tile_w) {
  const auto& last = layers.back().output;
  std::vector<TileGeometry> tiles;
  for (int64_t y = 0; y < last.height; y += tile_h) {
    for (int64_t x = 0; x < last.width; x += tile_w) {
      TileGeometry g;
      g.rows.resize(layers.size());
      g.cols.resize(layers.size());
      Interval r{y, std::min(last.height, y + tile_h)};
      Interval c{x, std::min(last.width, x + tile_w)};
      for (size_t i = layers.size(); i-- > 0;) {
        g.rows[i] = r;
        g.cols[i] = c;
        const auto& l = layers[i].spec;
        r = input_interval(r, l.kernel, l.stride, l.padding, layers[i].input.height);
        c = input_interval(c, l.kernel, l.stride, l.padding, layers[i].input.width);
      }
      g.in_rows = r;
      g.in_cols = c;
      tiles.push_back(std::move(g));
    }
  }
  return tiles;
}

void check_tiling(const BlockSpec& block, const std::vector<FusedLayer>& layers, int64_t tile_h,
                  int64_t tile_w) {
  if (tile_h < 1 || tile_w < 1) {
    throw Error(ErrorKind::InvalidTiling, "tile edges must be >= 1");
  }
  const int64_t rf = block_receptive_field(block);
  const auto& out = layers.back().output;
  if ((tile_h < rf && tile_h < out.height) || (tile_w < rf && tile_w < out.width)) {
    throw Error(ErrorKind::InvalidTiling,
                "tile " + std::to_string(tile_h) + "x" + std::to_string(tile_w) +
                    " is smaller than the block receptive field " + std::to_string(rf));
  }
}

}  // namespace

int64_t block_receptive_field(const BlockSpec& block) {
  int64_t rf = 1;
  for (size_t i = block.layers.size(); i-- > 0;) {
    const auto& l = block.layers[i];
    if (is_conv(l.kind)) rf = (rf - 1) * l.stride + l.kernel;
  }
  return rf;
}

TilingOverhead tiling_overhead(const BlockSpec& block, const TensorShape& input, int64_t tile_h,
                               int64_t tile_w) {
  const auto layers = fused_layers(block, input);
  if (layers.empty()) return {};
  check_tiling(block, layers, tile_h, tile_w);
  const auto tiles = tile_geometry(layers, tile_h, tile_w);
  TilingOverhead out;
  out.tiles = static_cast<int64_t>(tiles.size());
  for (size_t i = 0; i < layers.size(); ++i) {
    const auto& l = layers[i];
    const int64_t per_pixel = layer_ops(l.spec, l.input) / l.output.pixels();
    int64_t pixels = 0;
    for (const auto& g : tiles) pixels += g.rows[i].size() * g.cols[i].size();
    out.redundant_ops += (pixels - l.output.pixels()) * per_pixel;
  }
  int64_t in_pixels = 0;
  for (const auto& g : tiles) in_pixels += g.in_rows.size() * g.in_cols.size();
  const auto& in = layers.front().input;
  out.extra_offchip_bytes = (in_pixels - in.pixels()) * in.channels * 2;
  return out;
}

// --- Fused block simulation -------------------------------------------------

int64_t SimReport::total_buffer_words() const {
  int64_t words = input_buffer_words + output_buffer_words;
  for (const auto& b : buffers) words += b.words;
  return words;
}

std::string_view cycle_model_description() {
  return "work-unit granularity; one cycle = one issue of the dot-product array; "
         "compute = ceil(Tc/Pc)*ceil(Tf/Pf)*spatial per tile (depthwise drops Tf), "
         "spatial = ceil(Th/Ph)*ceil(Tw/Pw) or ceil(Th/m)*ceil(Tw/m) with Winograd; "
         "total = makespan + pipeline fill";
}

namespace {

struct LayerPass {
  int64_t h, w, c, f;
};

void validate_config(const std::vector<FusedLayer>& layers, const FusedDesignConfig& cfg) {
  const size_t n = layers.size();
  if (cfg.par_c.size() != n || cfg.tile_c.size() != n || cfg.seqs.size() != n ||
      cfg.buffers.size() + 1 != n || (!cfg.winograd.empty() && cfg.winograd.size() != n)) {
    config_error("configuration lists must match the block's " + std::to_string(n) +
                 " convolution layers");
  }
  if (cfg.par_h < 1 || cfg.par_w < 1 || cfg.par_f < 1 || cfg.tile_f < 1) {
    config_error("parallelism and tiles must be >= 1");
  }
  for (size_t i = 0; i < n; ++i) {
    if (cfg.par_c[i] < 1 || cfg.tile_c[i] < 1) config_error("parallelism and tiles must be >= 1");
    const auto p = cfg.layer_parallelism(i);
    if (is_depthwise(layers[i].spec) && p.f != p.c) {
      throw Error(ErrorKind::PortMismatch,
                  "depthwise layer " + std::to_string(i + 1) + " needs P_f = P_c (P_c^" +
                      std::to_string(i + 2) + " = P_c^" + std::to_string(i + 1) + ")");
    }
  }
  if (n >= 2) {
    for (size_t i = 0; i < n; ++i) {
      if (cfg.tile_c[i] < layers[i].input.channels) {
        throw Error(ErrorKind::InvalidTiling,
                    "fused layers need full channel tiles (T_c^" + std::to_string(i + 1) + " = " +
                        std::to_string(cfg.tile_c[i]) + " < " +
                        std::to_string(layers[i].input.channels) + ")");
      }
    }
    if (cfg.tile_f < layers.back().output.channels) {
      throw Error(ErrorKind::InvalidTiling, "fused layers need a full filter tile");
    }
  }
}

}  // namespace

LayerHwConfig layer_hw_config(const FusedLayer& layer, const FusedDesignConfig& cfg, size_t i) {
  LayerHwConfig hw;
  hw.par = cfg.layer_parallelism(i);
  hw.tile = {hw.par.h, hw.par.w, hw.par.c, hw.par.f};
  hw.seq = cfg.seqs[i];
  hw.use_winograd = cfg.uses_winograd(i);
  hw.winograd_m = cfg.winograd_m;
  hw.layer_kind = layer.spec.kind;
  return hw;
}

SimReport simulate_fused(const BlockSpec& block, const TensorShape& input,
                         const FusedDesignConfig& cfg, const SimOptions& options) {
  const auto layers = fused_layers(block, input);
  if (layers.empty()) config_error("block has no convolution layers");
  const size_t n = layers.size();
  validate_config(layers, cfg);
  check_tiling(block, layers, cfg.tile_h, cfg.tile_w);

  SimReport report;
  std::vector<LayerHwConfig> hw(n);
  for (size_t i = 0; i < n; ++i) {
    hw[i] = layer_hw_config(layers[i], cfg, i);
    const auto chain = instantiate_layer(layers[i].spec, hw[i]);
    LayerReport lr;
    lr.label = std::string(to_string(layers[i].spec.kind));
    lr.seq = cfg.seqs[i];
    lr.winograd = hw[i].use_winograd;
    lr.par = hw[i].par;
    lr.fill_cycles = pipeline_fill(chain);
    report.fill_cycles += lr.fill_cycles;
    report.layers.push_back(lr);
  }

  const auto geometry = tile_geometry(layers, cfg.tile_h, cfg.tile_w);
  report.spatial_tiles = static_cast<int64_t>(geometry.size());

  // Channel passes only exist for single-layer designs.
  const int64_t c_total = layers[0].input.channels;
  const int64_t f_total = layers.back().output.channels;
  const int64_t tc = std::min(cfg.tile_c[0], c_total);
  const int64_t tf = std::min(cfg.tile_f, f_total);
  std::vector<std::pair<int64_t, int64_t>> passes;
  if (n == 1) {
    const bool dw = is_depthwise(layers[0].spec);
    for (int64_t c0 = 0; c0 < c_total; c0 += tc) {
      const int64_t c = std::min(tc, c_total - c0);
      if (dw) {
        passes.emplace_back(c, c);
        continue;
      }
      for (int64_t f0 = 0; f0 < f_total; f0 += tf) passes.emplace_back(c, std::min(tf, f_total - f0));
    }
  } else {
    passes.emplace_back(c_total, f_total);
  }
  report.channel_passes = static_cast<int64_t>(passes.size());

  std::vector<PipelineStage> stages(n);
  for (size_t i = 0; i < n; ++i) {
    stages[i].produce = produce_mode(layers[i].spec, cfg.seqs[i]);
    stages[i].consume = consume_mode(layers[i].spec, cfg.seqs[i]);
  }
  for (const auto& g : geometry) {
    for (const auto& [pc, pf] : passes) {
      for (size_t i = 0; i < n; ++i) {
        TileDims t{g.rows[i].size(), g.cols[i].size(),
                   n == 1 ? pc : layers[i].input.channels,
                   n == 1 ? pf : layers[i].output.channels};
        const auto cc = layer_cycle_counts(layers[i].spec, hw[i], t);
        std::vector<int64_t> units(static_cast<size_t>(cc.work_units), cc.cycles_per_unit());
        stages[i].unit_cycles.push_back(std::move(units));
        report.layers[i].isolated_cycles += cc.compute_cycles;
        report.layers[i].work_units += cc.work_units;
      }
    }
  }

  // Buffers are sized for the largest tile.
  std::vector<int64_t> max_rows(n, 0), max_cols(n, 0);
  int64_t in_plane = 0;
  for (const auto& g : geometry) {
    for (size_t i = 0; i < n; ++i) {
      max_rows[i] = std::max(max_rows[i], g.rows[i].size());
      max_cols[i] = std::max(max_cols[i], g.cols[i].size());
    }
    in_plane = std::max(in_plane, g.in_rows.size() * g.in_cols.size());
  }
  const auto extent = [&](size_t i) { return max_rows[i] * max_cols[i]; };
  std::vector<PipelineBuffer> buffers;
  for (size_t i = 1; i < n; ++i) {
    const int64_t channels = layers[i].input.channels;
    const int64_t pc = cfg.par_c[i];
    const int64_t chunks = ceil_div(channels, pc);
    // Depthwise stages behave like FM producers and CM consumers.
    const Seq prev = stages[i - 1].produce == ProduceMode::PerUnit ? Seq::FM : Seq::CM;
    const Seq cur = stages[i].consume == ConsumeMode::PerUnit ? Seq::CM : Seq::FM;
    const auto option = cfg.buffers[i - 1];
    const TileDims t{max_rows[i - 1], max_cols[i - 1], channels, 1};
    BufferReport br;
    br.index = i + 1;
    br.option = option;
    br.words = buffer_words(prev, cur, t, pc, option);
    br.chunk_words = pc * extent(i - 1);
    const int64_t prev_column = stages[i - 1].produce == ProduceMode::PerUnit ? 1 : chunks;
    switch (option) {
      case BufferOption::MatchPrev: br.capacity_chunks = prev_column; break;
      case BufferOption::MatchNext: br.capacity_chunks = chunks; break;
      case BufferOption::Double: br.capacity_chunks = 2 * prev_column; break;
    }
    report.buffers.push_back(br);
    buffers.push_back({chunks, br.capacity_chunks});
  }
  {
    report.input_buffer_words =
        (stages[0].consume == ConsumeMode::PerTile ? tc : std::min(cfg.par_c[0], tc)) * in_plane;
    const int64_t out_plane = extent(n - 1);
    report.output_buffer_words =
        (stages[n - 1].produce == ProduceMode::PerTile ? tf : std::min(cfg.par_f, tf)) *
        out_plane;
  }

  const auto sim = simulate_pipeline(stages, buffers, options.trace);
  report.makespan = sim.makespan;
  report.total_cycles = sim.makespan + report.fill_cycles;
  for (size_t i = 0; i < n; ++i) {
    report.layers[i].busy_cycles = sim.stages[i].busy;
    report.layers[i].stall_cycles = sim.stages[i].stall;
    report.sequential_cycles += report.layers[i].isolated_cycles;
    report.max_layer_cycles = std::max(report.max_layer_cycles, report.layers[i].isolated_cycles);
  }
  for (size_t b = 0; b < report.buffers.size(); ++b) {
    report.buffers[b].peak_words = sim.peak_chunks[b] * report.buffers[b].chunk_words;
  }
  report.trace = sim.trace;
  const auto overhead = tiling_overhead(block, input, cfg.tile_h, cfg.tile_w);
  report.redundant_compute_ops = overhead.redundant_ops;
  report.extra_offchip_bytes = overhead.extra_offchip_bytes;
  return report;
}

std::vector<SequenceResult> enumerate_sequences(const BlockSpec& block, const TensorShape& input,
                                                const FusedDesignConfig& cfg,
                                                const EnumerateOptions& options) {
  const size_t n = fused_layers(block, input).size();
  if (n == 0) config_error("block has no convolution layers");
  if (n > options.max_layers) {
    config_error("block has " + std::to_string(n) + " layers, enumeration bound is " +
                 std::to_string(options.max_layers));
  }
  std::vector<std::vector<BufferOption>> buffer_sets;
  if (options.buffer_choices.empty() || n == 1) {
    buffer_sets.push_back(n == 1 ? std::vector<BufferOption>{} : cfg.buffers);
  } else {
    const size_t k = options.buffer_choices.size();
    size_t combos = 1;
    for (size_t i = 1; i < n; ++i) combos *= k;
    for (size_t code = 0; code < combos; ++code) {
      std::vector<BufferOption> set;
      size_t rest = code;
      for (size_t i = 1; i < n; ++i) {
        set.push_back(options.buffer_choices[rest % k]);
        rest /= k;
      }
      std::reverse(set.begin(), set.end());
      buffer_sets.push_back(std::move(set));
    }
  }

  std::vector<SequenceResult> results;
  for (size_t mask = 0; mask < (size_t{1} << n); ++mask) {
    std::vector<Seq> seqs(n);
    for (size_t i = 0; i < n; ++i) {
      seqs[i] = (mask >> (n - 1 - i)) & 1 ? Seq::CM : Seq::FM;
    }
    std::optional<SequenceResult> best;
    for (const auto& set : buffer_sets) {
      FusedDesignConfig c = cfg;
      c.seqs = seqs;
      c.buffers = set;
      try {
        SequenceResult r{seqs, set, simulate_fused(block, input, c)};
        if (!options.best_per_sequence) {
          results.push_back(std::move(r));
        } else if (!best || std::pair(r.report.total_cycles, r.report.total_buffer_words()) <
                                std::pair(best->report.total_cycles,
                                          best->report.total_buffer_words())) {
          best = std::move(r);
        }
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::InefficientConfig) throw;
      }
    }
    if (best) results.push_back(std::move(*best));
  }
  std::stable_sort(results.begin(), results.end(),
                   [](const SequenceResult& a, const SequenceResult& b) {
                     return std::tuple(a.report.total_cycles, a.report.total_buffer_words(),
                                       a.seqs, a.buffers) <
                            std::tuple(b.report.total_cycles, b.report.total_buffer_words(),
                                       b.seqs, b.buffers);
                   });
  return results;
}

}  // namespace turf
