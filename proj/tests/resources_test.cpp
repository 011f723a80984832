//
// Copyright © 2026 The turf Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "turf/dse.hpp"
#include "turf/resources.hpp"
#include "turf/winograd.hpp"

#include "test_util.hpp"

#include <algorithm>
#include <random>

namespace turf {
namespace {

using testing::kind_of;

LayerHwConfig hw_for(const LayerSpec& layer, Parallelism p, bool winograd = false, int m = 4) {
  LayerHwConfig hw;
  hw.par = p;
  hw.tile = {p.h, p.w, p.c, p.f};
  hw.use_winograd = winograd;
  hw.winograd_m = m;
  hw.layer_kind = layer.kind;
  return hw;
}

TEST(Resources, DegenerateDesignUsesOneDsp) {
  EXPECT_EQ(layer_dsp(LayerSpec::pointwise(8), hw_for(LayerSpec::pointwise(8), {1, 1, 1, 1})), 1);
}

TEST(Resources, BramBlocksRoundUp) {
  const auto calib = CalibrationTable::placeholder();
  EXPECT_EQ(bram_blocks(2048, calib), 2);
  EXPECT_EQ(bram_blocks(1280, calib), 1);
  EXPECT_EQ(bram_blocks(1281, calib), 2);
  EXPECT_EQ(bram_blocks(0, calib), 0);
}

TEST(Resources, TableThreeDspUsageIsFeasible) {
  ResourceEstimate e;
  e.dsp_used = 1680;
  EXPECT_TRUE(e.feasible(PlatformSpec::stratix_v()));
  e.dsp_used = 1964;
  EXPECT_FALSE(e.feasible(PlatformSpec::stratix_v()));
}

TEST(Resources, DirectAndWinogradMultipliers) {
  const auto conv = LayerSpec::standard(3, 16);
  EXPECT_EQ(layer_dsp(conv, hw_for(conv, {2, 2, 4, 8})), 4 * 8 * 2 * 2 * 9);
  // F(2,3) uses only shift constants: just the 4x4 element-wise products.
  EXPECT_EQ(layer_dsp(conv, hw_for(conv, {2, 2, 4, 8}, true, 2)), 4 * 8 * 16);
  // F(4,3): 36 products plus the non-shift constants of B and G.
  const auto wc = WinogradConfig::make(4, 3);
  const int64_t b = static_cast<int64_t>(count_multiplier_constants(wc.B));
  const int64_t g = static_cast<int64_t>(count_multiplier_constants(wc.G));
  EXPECT_GT(b + g, 0);
  EXPECT_EQ(count_multiplier_constants(wc.A), 0u);
  EXPECT_EQ(layer_dsp(conv, hw_for(conv, {4, 4, 2, 2}, true, 4)),
            2 * 2 * 36 + 2 * 6 * b * 2 + (3 + 6) * g * 4);
  const auto dw = LayerSpec::depthwise(3);
  EXPECT_EQ(layer_dsp(dw, hw_for(dw, {1, 1, 8, 8})), 8 * 9);
  const auto fc = LayerSpec::fully_connected(10);
  EXPECT_EQ(layer_dsp(fc, hw_for(fc, {1, 1, 16, 4})), 64);
}

TEST(Resources, DspMonotoneInParallelism) {
  std::mt19937_64 rng(41);
  const int64_t vals[] = {1, 2, 3, 4, 8};
  std::uniform_int_distribution<int> pick(0, 4);
  const LayerSpec layers[] = {LayerSpec::standard(3, 32), LayerSpec::pointwise(32),
                              LayerSpec::standard(5, 32), LayerSpec::depthwise(3)};
  for (int i = 0; i < 500; ++i) {
    const auto& layer = layers[i % 4];
    Parallelism p{vals[pick(rng)], vals[pick(rng)], vals[pick(rng)], vals[pick(rng)]};
    if (layer.kind == LayerKind::DepthwiseConv) p.f = p.c;
    const int64_t base = layer_dsp(layer, hw_for(layer, p));
    for (int axis = 0; axis < 4; ++axis) {
      Parallelism q = p;
      int64_t* v[] = {&q.h, &q.w, &q.c, &q.f};
      *v[axis] *= 2;
      if (layer.kind == LayerKind::DepthwiseConv) q.f = q.c;
      EXPECT_GE(layer_dsp(layer, hw_for(layer, q)), base);
    }
  }
}

TEST(Resources, MissingCoefficientIsCalibrationError) {
  auto calib = CalibrationTable::placeholder();
  calib.alm.erase(ModuleKind::LineBuffer);
  const auto block = BlockSpec::depthwise_separable(16);
  const TensorShape in{8, 8, 16};
  const auto cfg = FusedDesignConfig::from_layers(8, 8, {16, 16}, 16, {{1, 1, 4, 4}, {1, 1, 4, 4}},
                                                  {Seq::FM, Seq::CM}, {BufferOption::Double});
  const auto report = simulate_fused(block, in, cfg);
  EXPECT_EQ(kind_of([&] { estimate_resources(block, in, cfg, report, calib); }),
            ErrorKind::CalibrationError);
  const auto est = estimate_resources(block, in, cfg, report, CalibrationTable::placeholder());
  EXPECT_EQ(est.dsp_used, 4 * 9 + 4 * 4);
  EXPECT_GT(est.bram_used, 0);
  EXPECT_GT(est.alm_used, 0);
}

TEST(Roofline, PointInvariantsAndBandwidthMonotone) {
  std::mt19937_64 rng(42);
  std::uniform_int_distribution<int64_t> ops(1, 1'000'000'000), bytes(1, 100'000'000);
  std::uniform_real_distribution<double> roof(1, 2000), bw(1, 100);
  for (int i = 0; i < 1000; ++i) {
    auto p = PlatformSpec::stratix_v();
    p.bandwidth_gbps = bw(rng);
    const int64_t o = ops(rng), b = bytes(rng);
    const double r = roof(rng);
    const auto pt = roofline_point(o, b, r, p);
    EXPECT_LE(pt.attainable_gops, pt.compute_roof_gops);
    EXPECT_LE(pt.attainable_gops, pt.arithmetic_intensity * p.bandwidth_gbps * (1 + 1e-12));
    auto faster = p;
    faster.bandwidth_gbps *= 1.5;
    EXPECT_GE(roofline_point(o, b, r, faster).attainable_gops, pt.attainable_gops);
  }
}

TEST(Roofline, FusionRaisesIntensityForMultiLayerBlocks) {
  const std::vector<std::pair<BlockSpec, TensorShape>> blocks = {
      {BlockSpec::stacked(64, 64), {28, 28, 64}},
      {BlockSpec::depthwise_separable(64), {56, 56, 32}},
      {BlockSpec::bottleneck(32, 128), {28, 28, 128}},
      {BlockSpec::separable_bottleneck(96, 24, 2), {56, 56, 16}},
  };
  for (const auto& [block, in] : blocks) {
    const auto f = fused_traffic(block, in, 0);
    const auto b = baseline_traffic(block, in);
    EXPECT_GT(b.intermediate_bytes, 0);
    EXPECT_LT(f.total(), b.total());
    EXPECT_EQ(b.total() - f.total(), b.intermediate_bytes);
  }
}

TEST(Roofline, DepthwiseSeparableBenefitsWhenBandwidthBound) {
  const auto block = BlockSpec::depthwise_separable(16);
  const TensorShape in{112, 112, 32};
  const auto platform = PlatformSpec::stratix_v();
  const auto r = explore_block(block, in, platform, CalibrationTable::placeholder());
  const auto& a = r.best.analysis;
  EXPECT_GT(a.fused_point.arithmetic_intensity, a.baseline_point.arithmetic_intensity);
  EXPECT_TRUE(a.baseline_point.bandwidth_bound());
  EXPECT_GT(a.fused_point.attainable_gops, a.baseline_point.attainable_gops);
}

DesignCandidate candidate(double attainable, double latency, int64_t dsp, int64_t tile = 8) {
  DesignCandidate c;
  c.cfg.tile_h = c.cfg.tile_w = tile;
  c.cfg.par_c = {1};
  c.cfg.seqs = {Seq::FM};
  c.analysis.fused_point.attainable_gops = attainable;
  c.analysis.fused_point.compute_roof_gops = attainable;
  c.latency_s = latency;
  c.resources.dsp_used = dsp;
  return c;
}

TEST(PickBest, SingleAndInfeasible) {
  const auto p = PlatformSpec::stratix_v();
  std::vector<DesignCandidate> one = {candidate(10, 1, 100)};
  EXPECT_EQ(pick_best_design(one, p), 0u);
  std::vector<DesignCandidate> two = {candidate(900, 0.1, 3000), candidate(10, 1, 100)};
  EXPECT_EQ(pick_best_design(two, p), 1u);
  std::vector<DesignCandidate> none = {candidate(900, 0.1, 3000)};
  EXPECT_EQ(kind_of([&] { pick_best_design(none, p); }), ErrorKind::Infeasible);
}

TEST(PickBest, BruteForceAndPermutationInvariant) {
  const auto p = PlatformSpec::stratix_v();
  std::mt19937_64 rng(43);
  std::uniform_int_distribution<int> g(1, 5);
  std::uniform_int_distribution<int64_t> dsp(1, 2500);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<DesignCandidate> cs;
    for (int i = 0; i < 3 + trial % 5; ++i) {
      cs.push_back(candidate(100.0 * g(rng), 0.001 * g(rng), dsp(rng), 4 + i));
    }
    const bool any = std::any_of(cs.begin(), cs.end(),
                                 [&](const DesignCandidate& c) { return c.resources.feasible(p); });
    if (!any) continue;
    const auto& best = cs[pick_best_design(cs, p)];
    for (const auto& c : cs) {
      if (!c.resources.feasible(p)) continue;
      EXPECT_GE(best.attainable_gops(), c.attainable_gops());
      if (c.attainable_gops() == best.attainable_gops()) EXPECT_LE(best.latency_s, c.latency_s);
    }
    const auto sig = best.signature();
    auto shuffled = cs;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    EXPECT_EQ(shuffled[pick_best_design(shuffled, p)].signature(), sig);
  }
}

TEST(Dse, BlockSearchPicksBestFeasibleCandidate) {
  const auto block = BlockSpec::bottleneck(16, 64);
  const TensorShape in{28, 28, 64};
  const auto platform = PlatformSpec::stratix_v();
  const auto r = explore_block(block, in, platform, CalibrationTable::placeholder());
  EXPECT_TRUE(r.best.resources.feasible(platform));
  EXPECT_LE(r.best.resources.dsp_used, 1963);
  for (const auto& c : r.evaluated) {
    if (c.resources.feasible(platform)) {
      EXPECT_GE(r.best.attainable_gops(), c.attainable_gops());
    }
    EXPECT_LE(c.analysis.fused_point.attainable_gops, c.analysis.fused_point.compute_roof_gops);
  }
  const auto again = explore_block(block, in, platform, CalibrationTable::placeholder());
  EXPECT_EQ(again.best.signature(), r.best.signature());
  EXPECT_EQ(again.best.report.total_cycles, r.best.report.total_cycles);
}

TEST(Dse, TilesShrinkUntilBuffersFit) {
  auto platform = PlatformSpec::stratix_v();
  platform.bram_blocks = 60;
  const auto block = BlockSpec::stacked(64, 64);
  const TensorShape in{56, 56, 64};
  const auto r = explore_block(block, in, platform, CalibrationTable::placeholder());
  EXPECT_LE(r.best.resources.bram_used, 60);
  EXPECT_LT(r.best.cfg.tile_h, 56);
  platform.bram_blocks = 1;
  EXPECT_EQ(kind_of([&] { explore_block(block, in, platform, CalibrationTable::placeholder()); }),
            ErrorKind::Infeasible);
}

TEST(Dse, ModelDesignCachesRepeatedStages) {
  const auto model = build_reference_model("MobileNetV1");
  DesignGenerator gen(PlatformSpec::stratix_v(), CalibrationTable::placeholder());
  const auto d = gen.design_model(model);
  EXPECT_EQ(d.ops, count_ops_params(model).total_ops);
  EXPECT_GT(d.gops(), 0);
  EXPECT_LE(d.resources.dsp_used, 1963);
  const size_t cached = gen.cache_size();
  EXPECT_LT(cached, model.stages().size());
  const auto d2 = gen.design_model(model);
  EXPECT_EQ(gen.cache_size(), cached);
  EXPECT_EQ(d2.latency_s, d.latency_s);
}

}  // namespace
}  // namespace turf
