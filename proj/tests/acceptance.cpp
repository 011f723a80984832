//
// Copyright © 2026 The turf Authors.
// SPDX-License-Identifier: Apache-2.0
//
// Acceptance checks, one line per criterion. Tolerances are fixed here.

#include "turf/dse.hpp"
#include "turf/explorer.hpp"
#include "turf/fusion.hpp"
#include "turf/kernels.hpp"
#include "turf/model_ir.hpp"
#include "turf/resources.hpp"
#include "turf/winograd.hpp"

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include <unistd.h>

#ifndef TURF_BINARY
#error "TURF_BINARY must name the turf executable"
#endif

namespace {

using namespace turf;
using Clock = std::chrono::steady_clock;

constexpr double kWinogradTolerance = 1e-9;
constexpr double kWinogradSeconds = 10.0;
constexpr double kTotalsRelTolerance = 0.05;
constexpr double kTotalsSeconds = 1.0;
constexpr int kBufferSettings = 200;
constexpr double kOrderingSeconds = 1.0;
constexpr int kFusedConfigs = 500;
constexpr double kFusedSeconds = 60.0;
constexpr double kExplorerSeconds = 5.0;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, auto... args) {
  std::array<char, 512> buf{};
  std::snprintf(buf.data(), buf.size(), f, args...);
  return buf.data();
}

// 1. Winograd F(2,3) and F(4,3) against direct correlation.
Outcome winograd_equivalence() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(2026);
  std::uniform_int_distribution<int64_t> hw(1, 16), ch(1, 8);
  std::uniform_real_distribution<double> val(-1.0, 1.0);
  double worst = 0.0;
  int cases = 0;
  for (int m : {2, 4}) {
    const auto cfg = WinogradConfig::make(m, 3);
    for (int t = 0; t < 200; ++t) {
      Tensor3 in(TensorShape::make(hw(rng), hw(rng), ch(rng)));
      for (double& v : in.data()) v = val(rng);
      Filter4 w(ch(rng), in.shape().channels, 3);
      for (double& v : w.data()) v = val(rng);
      worst = std::max(worst, max_abs_diff(conv_direct(in, w, 1, 1), conv_winograd(in, w, cfg, 1)));
      ++cases;
    }
  }
  const double s = seconds_since(t0);
  return {worst < kWinogradTolerance && s < kWinogradSeconds,
          fmt("%d cases, max |diff| %.3g < %.0e, %.2f s < %.0f s", cases, worst, kWinogradTolerance, s,
              kWinogradSeconds)};
}

// 2. Multiplies per F(4x4, 3x3) tile.
Outcome winograd_complexity() {
  const auto cfg = WinogradConfig::make(4, 3);
  const bool ok = cfg.winograd_multiplies() == 36 && cfg.direct_multiplies() == 144 &&
                  cfg.speedup() == 4.0;
  return {ok, fmt("%lld vs %lld multiplies, speedup %.1f", static_cast<long long>(cfg.winograd_multiplies()),
                  static_cast<long long>(cfg.direct_multiplies()), cfg.speedup())};
}

// 3. Reference network totals.
Outcome reference_totals() {
  struct Row {
    const char* name;
    double gop, mparams;
  };
  const Row rows[] = {{"VGG16", 30.95, 138.3},
                      {"ResNet50", 7.72, 24.3},
                      {"MobileNetV1", 1.14, 4.01},
                      {"MobileNetV2", 0.61, 3.31}};
  const auto t0 = Clock::now();
  bool ok = true;
  std::string detail;
  for (const auto& r : rows) {
    const auto c = count_ops_params(build_reference_model(r.name));
    const double eo = std::abs(c.gops() - r.gop) / r.gop;
    const double ep = std::abs(c.mparams() - r.mparams) / r.mparams;
    ok = ok && eo <= kTotalsRelTolerance && ep <= kTotalsRelTolerance;
    detail += fmt("%s %.2f GOP (%+.2f%%) %.2f M (%+.2f%%); ", r.name, c.gops(),
                  100 * (c.gops() - r.gop) / r.gop, c.mparams(), 100 * (c.mparams() - r.mparams) / r.mparams);
  }
  const double s = seconds_since(t0);
  return {ok && s < kTotalsSeconds, detail + fmt("%.3f s", s)};
}

// 4. Buffer sizes: each table row transcribed as symbols, evaluated per setting.
Outcome buffer_table() {
  enum class Sym { PcThTw, TcThTw, Inefficient };
  struct Row {
    Seq prev, cur;
    Sym prev_output, next_input, doubled;
  };
  const Row rows[] = {{Seq::FM, Seq::CM, Sym::PcThTw, Sym::TcThTw, Sym::PcThTw},
                      {Seq::CM, Seq::FM, Sym::TcThTw, Sym::TcThTw, Sym::TcThTw},
                      {Seq::FM, Seq::FM, Sym::PcThTw, Sym::TcThTw, Sym::PcThTw},
                      {Seq::CM, Seq::CM, Sym::TcThTw, Sym::Inefficient, Sym::TcThTw}};
  std::mt19937_64 rng(4);
  std::uniform_int_distribution<int64_t> dim(1, 64), par(1, 32);
  int checked = 0, mismatches = 0;
  for (int s = 0; s < kBufferSettings; ++s) {
    const TileDims tile{dim(rng), dim(rng), dim(rng), dim(rng)};
    const int64_t pc = par(rng);
    const auto eval = [&](Sym x) { return (x == Sym::PcThTw ? pc : tile.c) * tile.h * tile.w; };
    for (const auto& r : rows) {
      const auto words = [&](BufferOption o) -> std::optional<int64_t> {
        try {
          return buffer_words(r.prev, r.cur, tile, pc, o);
        } catch (const Error& e) {
          if (e.kind() != ErrorKind::InefficientConfig) throw;
          return std::nullopt;
        }
      };
      const auto next = words(BufferOption::MatchNext);
      const bool next_ok = r.next_input == Sym::Inefficient ? !next.has_value()
                                                            : next == eval(r.next_input);
      const bool ok = words(BufferOption::MatchPrev) == eval(r.prev_output) && next_ok &&
                      words(BufferOption::Double) == 2 * eval(r.doubled) &&
                      buffer_words(r.prev, r.cur, tile, pc, false) == eval(r.prev_output) &&
                      buffer_words(r.prev, r.cur, tile, pc, true) == 2 * eval(r.doubled);
      mismatches += ok ? 0 : 1;
      ++checked;
    }
  }
  return {mismatches == 0, fmt("%d settings x 4 rows x {single, next, double}, %d mismatches",
                               kBufferSettings, mismatches)};
}

// 5. FM,CM beats CM,CM on an equal-work stacked block; toy pipeline matches
//    the hand trace exactly.
Outcome sequence_ordering() {
  const auto t0 = Clock::now();
  const auto block = BlockSpec::stacked(16, 16);
  const TensorShape in{16, 16, 16};
  const std::vector<Parallelism> par = {{1, 1, 4, 4}, {1, 1, 4, 4}};
  const auto run = [&](Seq a, Seq b) {
    const auto cfg = FusedDesignConfig::from_layers(8, 8, {16, 16}, 16, par, {a, b},
                                                    {BufferOption::Double});
    return simulate_fused(block, in, cfg).total_cycles;
  };
  const int64_t fm_cm = run(Seq::FM, Seq::CM);
  const int64_t cm_cm = run(Seq::CM, Seq::CM);

  // Two layers, two 10-cycle units each. FM then CM with two chunks:
  // L1 [0,10) [10,20); L2 [10,20) [20,30). CM then CM: L1 publishes the
  // tile at 20, L2 runs [20,30) [30,40).
  const auto toy = [](ProduceMode p) {
    PipelineStage l1, l2;
    l1.unit_cycles = {{10, 10}};
    l1.produce = p;
    l1.consume = ConsumeMode::PerTile;
    l2.unit_cycles = {{10, 10}};
    l2.produce = ProduceMode::PerUnit;
    l2.consume = ConsumeMode::PerUnit;
    return simulate_pipeline({l1, l2}, {{2, 2}}).makespan;
  };
  const int64_t toy_fm_cm = toy(ProduceMode::PerUnit);
  const int64_t toy_cm_cm = toy(ProduceMode::PerTile);
  const double s = seconds_since(t0);
  const bool ok = fm_cm < cm_cm && toy_fm_cm == 30 && toy_cm_cm == 40 && s < kOrderingSeconds;
  return {ok, fmt("stacked 16x16x16: (FM,CM) %lld < (CM,CM) %lld cycles; toy %lld/%lld vs hand trace 30/40; %.3f s",
                  static_cast<long long>(fm_cm), static_cast<long long>(cm_cm),
                  static_cast<long long>(toy_fm_cm), static_cast<long long>(toy_cm_cm), s)};
}

// 6. Fused latency bounds and double buffering over random designs.
Outcome fusion_bounds() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(6);
  const auto pick = [&](std::initializer_list<int64_t> xs) {
    std::uniform_int_distribution<size_t> d(0, xs.size() - 1);
    return *(xs.begin() + d(rng));
  };
  int valid = 0, attempts = 0, bound_violations = 0, compared = 0, double_slower = 0;
  while (valid < kFusedConfigs && attempts < 50 * kFusedConfigs) {
    ++attempts;
    const int64_t hw = pick({8, 12, 16, 24});
    const int64_t c = pick({8, 16});
    BlockSpec block;
    switch (pick({0, 1, 2, 3})) {
      case 0: block = BlockSpec::stacked(c, pick({8, 16})); break;
      case 1: block = BlockSpec::depthwise_separable(pick({8, 16})); break;
      case 2: block = BlockSpec::bottleneck(pick({4, 8}), c, 1, false); break;
      default: block = BlockSpec::separable_bottleneck(pick({16, 32}), pick({8, 16})); break;
    }
    const TensorShape in{hw, hw, c};
    const auto layers = fused_layers(block, in);
    const int64_t ph = pick({1, 2});
    const bool wino = ph == 2 && pick({0, 1}) == 1;
    std::vector<Parallelism> par;
    std::vector<int64_t> tc;
    int64_t pc = pick({1, 2, 4, 8});
    for (const auto& l : layers) {
      const int64_t pf = l.spec.kind == LayerKind::DepthwiseConv ? pc : pick({1, 2, 4, 8});
      par.push_back({ph, ph, pc, pf});
      tc.push_back(l.input.channels);
      pc = pf;
    }
    std::vector<Seq> seqs;
    for (size_t i = 0; i < layers.size(); ++i) seqs.push_back(pick({0, 1}) ? Seq::CM : Seq::FM);
    std::vector<BufferOption> buffers;
    for (size_t i = 1; i < layers.size(); ++i) {
      buffers.push_back(static_cast<BufferOption>(pick({0, 1, 2})));
    }
    std::vector<bool> winograd;
    for (const auto& l : layers) {
      winograd.push_back(wino && l.spec.kernel == 3 && l.spec.stride == 1);
    }
    const int64_t out_hw = layers.back().output.height;
    const int64_t tile = pick({0, 1}) ? out_hw : out_hw / 2;
    SimReport r;
    FusedDesignConfig cfg;
    try {
      cfg = FusedDesignConfig::from_layers(tile, tile, tc, layers.back().output.channels, par, seqs,
                                           buffers, winograd, 2);
      r = simulate_fused(block, in, cfg);
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::SimDeadlock) ++bound_violations;
      continue;
    }
    ++valid;
    if (!(r.max_layer_cycles <= r.total_cycles && r.total_cycles <= r.sequential_cycles + r.fill_cycles)) {
      ++bound_violations;
    }
    if (!cfg.buffers.empty()) {
      auto single = cfg, dbl = cfg;
      for (auto& b : single.buffers) b = BufferOption::MatchPrev;
      for (auto& b : dbl.buffers) b = BufferOption::Double;
      try {
        const auto a = simulate_fused(block, in, single);
        const auto b = simulate_fused(block, in, dbl);
        ++compared;
        if (b.total_cycles > a.total_cycles) ++double_slower;
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::InefficientConfig) ++bound_violations;
      }
    }
  }
  const double s = seconds_since(t0);
  const bool ok = valid >= kFusedConfigs && bound_violations == 0 && double_slower == 0 &&
                  compared > 0 && s < kFusedSeconds;
  return {ok, fmt("%d configs (%d drawn), %d bound violations; double vs single buffer on %d: %d slower; %.2f s",
                  valid, attempts, bound_violations, compared, double_slower, s)};
}

// 7. Fusion benefit against bandwidth. The design is chosen at 38 GB/s and
//    re-scored at 16 GB/s.
Outcome bandwidth_claim() {
  struct Case {
    const char* name;
    BlockSpec block;
    TensorShape input;
    bool expect_at_38;
  };
  const Case cases[] = {
      {"stacked 7x7x512", BlockSpec::stacked(512, 512), {7, 7, 512}, false},
      {"bottleneck 56x56x64 (16, 64)", BlockSpec::bottleneck(16, 64), {56, 56, 64}, false},
      {"depthwise separable 112x112x32 (16)", BlockSpec::depthwise_separable(16), {112, 112, 32}, true},
  };
  const auto p38 = PlatformSpec::stratix_v();
  auto p16 = p38;
  p16.bandwidth_gbps = 16.0;
  const auto calib = CalibrationTable::placeholder();
  bool ok = true;
  std::string detail;
  for (const auto& c : cases) {
    const auto best = explore_block(c.block, c.input, p38, calib).best;
    const auto a38 = best.analysis;
    const auto a16 = roofline(c.block, c.input, best.report, best.resources, p16, calib.word_bytes);
    const bool gain38 = a38.fused_point.attainable_gops > a38.baseline_point.attainable_gops;
    const bool gain16 = a16.fused_point.attainable_gops > a16.baseline_point.attainable_gops;
    ok = ok && gain38 == c.expect_at_38 && gain16;
    detail += fmt("%s: 38 GB/s %.0f vs %.0f, 16 GB/s %.0f vs %.0f GOPS; ", c.name,
                  a38.fused_point.attainable_gops, a38.baseline_point.attainable_gops,
                  a16.fused_point.attainable_gops, a16.baseline_point.attainable_gops);
  }
  return {ok, detail + "(fused vs layer-by-layer)"};
}

// 8. Redundant tiling work against a per-pixel recount.
Outcome tiling_oracle() {
  BlockSpec block;
  block.kind = BlockKind::Stacked;
  block.layers = {LayerSpec::standard(3, 8), LayerSpec::standard(3, 8)};
  const TensorShape in{16, 16, 8};
  const auto layers = fused_layers(block, in);
  std::vector<int64_t> computed(layers.size(), 0);
  for (int64_t ty = 0; ty < 16; ty += 8) {
    for (int64_t tx = 0; tx < 16; tx += 8) {
      std::set<std::pair<int64_t, int64_t>> need;
      for (int64_t y = ty; y < ty + 8; ++y) {
        for (int64_t x = tx; x < tx + 8; ++x) need.emplace(y, x);
      }
      for (size_t i = layers.size(); i-- > 0;) {
        computed[i] += static_cast<int64_t>(need.size());
        std::set<std::pair<int64_t, int64_t>> prev;
        for (const auto& [y, x] : need) {
          for (int dy = -1; dy <= 1; ++dy) {
            for (int dx = -1; dx <= 1; ++dx) {
              if (y + dy >= 0 && y + dy < 16 && x + dx >= 0 && x + dx < 16) prev.emplace(y + dy, x + dx);
            }
          }
        }
        need = std::move(prev);
      }
    }
  }
  int64_t brute = 0;
  for (size_t i = 0; i < layers.size(); ++i) {
    const int64_t ops_per_pixel = 2 * 9 * layers[i].input.channels * layers[i].output.channels;
    brute += (computed[i] - 16 * 16) * ops_per_pixel;
  }
  const auto o = tiling_overhead(block, in, 8, 8);
  return {o.redundant_ops == brute,
          fmt("tiling_overhead %lld vs brute force %lld redundant ops", static_cast<long long>(o.redundant_ops),
              static_cast<long long>(brute))};
}

class CountOracle : public AccuracyOracle {
 public:
  explicit CountOracle(std::function<double(size_t)> f) : f_(std::move(f)) {}
  double accuracy(const ModelSpec& m, int) override { return f_(m.replaced_count()); }
  std::string name() const override { return "count"; }

 private:
  std::function<double(size_t)> f_;
};

// 9. Greedy search conformance on VGG-16.
Outcome algorithm_one() {
  const auto t0 = Clock::now();
  const auto vgg = build_reference_model("VGG16");
  const size_t n = vgg.positions().size();
  DesignGenerator gen(PlatformSpec::stratix_v(), CalibrationTable::placeholder());
  size_t max_visits = 0;

  SyntheticOracle synthetic;
  Requirements req;
  req.min_accuracy = synthetic.params().base_accuracy - synthetic.params().jitter;
  const auto peak = run_framework("imagenet", req, gen, vgg, synthetic);
  max_visits = std::max(max_visits, peak.log.size());
  const bool peak_ok = peak.best_record().replaced == 1;

  req.min_accuracy = 0.5;
  CountOracle replaced_fail([](size_t k) { return k == 0 ? 0.9 : 0.0; });
  const auto pre = run_framework("imagenet", req, gen, vgg, replaced_fail);
  max_visits = std::max(max_visits, pre.log.size());
  const bool pre_ok = pre.best_record().replaced == 0 && pre.best_model->replaced_count() == 0;

  CountOracle all_fail([](size_t) { return 0.0; });
  bool none_ok = false;
  try {
    run_framework("imagenet", req, gen, vgg, all_fail);
  } catch (const NoSolutionError& e) {
    none_ok = true;
    max_visits = std::max(max_visits, e.partial().log.size());
  }

  req.min_accuracy = 0.0;
  CountOracle perfect([](size_t) { return 1.0; });
  const auto all = run_framework("imagenet", req, gen, vgg, perfect);
  max_visits = std::max(max_visits, all.log.size());
  const bool all_ok = all.log.size() == n + 1 && all.best_record().replaced == n;

  const double s = seconds_since(t0);
  const bool ok = peak_ok && pre_ok && none_ok && all_ok && max_visits <= n + 1 && s < kExplorerSeconds;
  return {ok, fmt("synthetic peak -> %zu replaced; failing replacements -> %s; always failing -> %s; "
                  "perfect oracle visits %zu; max visits %zu <= N+1 = %zu; %.2f s",
                  peak.best_record().replaced, pre_ok ? "pretrained" : "other",
                  none_ok ? "NoSolution" : "other", all.log.size(), max_visits, n + 1, s)};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// 10. Byte-identical reports from two consecutive CLI runs.
Outcome determinism() {
  const auto dir = std::filesystem::temp_directory_path() / ("turf-acceptance-" + std::to_string(::getpid()));
  std::filesystem::create_directories(dir);
  const std::string bin = TURF_BINARY;
  const std::string out = (dir / "report.json").string();
  const std::string commands[] = {
      bin + " dse vgg16 --seed 11 --out " + out,
      bin + " dse mobilenetv2 --seed 11 --out " + out,
      bin + " explore --model vgg16 --seed 11 --min-acc 0.85 --min-gops 400 --exhaustive --out " + out,
  };
  bool ok = true;
  size_t bytes = 0;
  for (const auto& cmd : commands) {
    std::string runs[2];
    for (auto& r : runs) {
      if (std::system((cmd + " 2>/dev/null").c_str()) != 0) ok = false;
      r = slurp(out);
    }
    ok = ok && !runs[0].empty() && runs[0] == runs[1];
    bytes += runs[0].size();
  }
  std::error_code ec;
  std::filesystem::remove_all(dir, ec);
  return {ok, fmt("turf dse x2 models and turf explore, two runs each, %zu report bytes compared", bytes)};
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<Outcome()>> criteria[] = {
      {"Winograd equivalence", winograd_equivalence},
      {"Winograd complexity", winograd_complexity},
      {"Reference network op/param totals", reference_totals},
      {"Intermediate buffer sizes", buffer_table},
      {"FM/CM sequence ordering", sequence_ordering},
      {"Fused latency bounds", fusion_bounds},
      {"Bandwidth and fusion benefit", bandwidth_claim},
      {"Tiling overhead oracle", tiling_oracle},
      {"Greedy search conformance", algorithm_one},
      {"Report determinism", determinism},
  };
  int failed = 0;
  int index = 0;
  for (const auto& [name, check] : criteria) {
    ++index;
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += o.pass ? 0 : 1;
    std::cout << "criterion " << index << " " << (o.pass ? "PASS" : "FAIL") << "  " << name << ": "
              << o.detail << "\n";
  }
  std::cout << (failed ? "FAILED " : "ALL PASSED ") << (10 - failed) << "/10\n";
  return failed ? 1 : 0;
}
