//
// Copyright © 2026 The turf Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "turf/explorer.hpp"
#include "turf/io.hpp"

#include "test_util.hpp"

#include <functional>

namespace turf {
namespace {

using testing::kind_of;

ModelSpec three_position_model() {
  std::vector<Stage> stages = {LayerSpec::standard(3, 16), LayerSpec::activation(),
                               LayerSpec::standard(3, 16), LayerSpec::max_pool(2, 2),
                               LayerSpec::standard(3, 32), LayerSpec::global_avg_pool(),
                               LayerSpec::fully_connected(10)};
  return ModelSpec::create_with_default_positions(BaseModel::Custom, "toy", {16, 16, 8},
                                                  std::move(stages));
}

std::vector<ModelSpec> all_generated(const ModelSpec& pretrained) {
  std::vector<ModelSpec> out;
  auto m = model_gen(pretrained, nullptr);
  while (m) {
    out.push_back(*m);
    m = model_gen(pretrained, &out.back());
  }
  return out;
}

/// Returns a fixed accuracy per replaced count and counts calls.
class FunctionOracle : public AccuracyOracle {
 public:
  explicit FunctionOracle(std::function<double(size_t)> f) : f_(std::move(f)) {}
  double accuracy(const ModelSpec& m, int) override {
    ++calls;
    return f_(m.replaced_count());
  }
  std::string name() const override { return "function"; }
  int calls = 0;

 private:
  std::function<double(size_t)> f_;
};

DesignGenerator stratix_generator() {
  return DesignGenerator(PlatformSpec::stratix_v(), CalibrationTable::placeholder());
}

TEST(ModelGen, TopDownSequenceThenDone) {
  const auto pretrained = three_position_model();
  const auto seq = all_generated(pretrained);
  ASSERT_EQ(seq.size(), 4u);
  EXPECT_EQ(replacement_pattern(seq[0]), "OOO");
  EXPECT_EQ(replacement_pattern(seq[1]), "OOS");
  EXPECT_EQ(replacement_pattern(seq[2]), "OSS");
  EXPECT_EQ(replacement_pattern(seq[3]), "SSS");
  EXPECT_EQ(seq[0].stages(), pretrained.stages());
  EXPECT_FALSE(model_gen(pretrained, &seq[3]).has_value());
}

TEST(ModelGen, RejectsModelsOutsideTheSequence) {
  const auto pretrained = three_position_model();
  const auto bottom_only = replace_layer(pretrained, 0);
  EXPECT_EQ(kind_of([&] { model_gen(pretrained, &bottom_only); }), ErrorKind::InvalidReplacement);
}

TEST(ModelGen, Vgg16SequenceCoversPartialAndFullReplacement) {
  const auto vgg = build_reference_model("VGG16");
  const auto seq = all_generated(vgg);
  ASSERT_EQ(seq.size(), vgg.positions().size() + 1);
  for (size_t k : {1u, 2u, 5u}) {
    EXPECT_EQ(seq.at(k).replaced_count(), k);
    EXPECT_LT(count_ops_params(seq[k]).total_ops, count_ops_params(vgg).total_ops);
  }
  EXPECT_EQ(replacement_pattern(seq[1]), "OOOOS");
}

TEST(SyntheticOracle, DeterministicAndSeeded) {
  const auto m = build_reference_model("VGG16");
  SyntheticOracle a, b;
  EXPECT_EQ(a.accuracy(m, 1), b.accuracy(m, 1));
  SyntheticOracleParams p;
  p.seed = 99;
  SyntheticOracle c(p);
  EXPECT_NE(a.accuracy(m, 1), c.accuracy(m, 1));
  EXPECT_NEAR(a.accuracy(m, 1), c.accuracy(m, 1), 2 * p.jitter);
  EXPECT_TRUE(a.synthetic());
}

TEST(SyntheticOracle, TopReplacementRetainsMoreThanBottom) {
  const auto vgg = build_reference_model("VGG16");
  const size_t n = vgg.positions().size();
  SyntheticOracle o;
  EXPECT_GT(o.accuracy(replace_layer(vgg, n - 1), 1), o.accuracy(replace_layer(vgg, 0), 1));
}

TEST(SyntheticOracle, MonotoneInBottomReplacementsWithOneReplacementPeak) {
  const auto vgg = build_reference_model("VGG16");
  SyntheticOracle o;
  const auto seq = all_generated(vgg);
  std::vector<double> acc;
  for (const auto& m : seq) acc.push_back(o.accuracy(m, 1));
  EXPECT_GT(acc[1], acc[0]);
  for (size_t k = 2; k < acc.size(); ++k) EXPECT_LT(acc[k], acc[k - 1]) << k;
  // Adding any bottom-side replacement lowers accuracy.
  auto m = replace_layer(vgg, vgg.positions().size() - 1);
  for (size_t pos = 0; pos + 1 < vgg.positions().size(); ++pos) {
    EXPECT_LT(o.accuracy(replace_layer(m, pos), 1), o.accuracy(m, 1)) << pos;
  }
}

TEST(TableOracle, PatternAndCountKeys) {
  const auto pretrained = three_position_model();
  auto by_pattern = TableOracle::from_string("replacement,accuracy\nOOO,0.7\nOOS,0.72\n");
  EXPECT_DOUBLE_EQ(by_pattern.accuracy(pretrained, 1), 0.7);
  EXPECT_DOUBLE_EQ(by_pattern.accuracy(replace_layer(pretrained, 2), 1), 0.72);
  EXPECT_EQ(kind_of([&] { by_pattern.accuracy(replace_layer(pretrained, 0), 1); }),
            ErrorKind::FormatError);
  auto by_count = TableOracle::from_string("# measured\nreplaced,accuracy\n0,0.5\n3,0.4\n");
  EXPECT_DOUBLE_EQ(by_count.accuracy(pretrained, 1), 0.5);
  EXPECT_FALSE(by_count.synthetic());
}

TEST(TableOracle, RejectsMalformedTables) {
  EXPECT_EQ(kind_of([] { TableOracle::from_string("model,acc\nx,1\n"); }), ErrorKind::FormatError);
  EXPECT_EQ(kind_of([] { TableOracle::from_string("replacement,accuracy\nOX,0.5\n"); }),
            ErrorKind::FormatError);
  EXPECT_EQ(kind_of([] { TableOracle::from_string("replaced,accuracy\n1,1.5\n"); }),
            ErrorKind::FormatError);
  EXPECT_EQ(kind_of([] { TableOracle::from_string("replaced,accuracy\n"); }),
            ErrorKind::FormatError);
}

TEST(ExternalOracle, PassesModelFileAndBudget) {
  // $0 is the model file and $1 the budget.
  ExternalOracle o("sh -c 'grep -q StandardConv \"$0\" && test \"$1\" = 3 && echo 0.625'");
  EXPECT_DOUBLE_EQ(o.accuracy(three_position_model(), 3), 0.625);
  ExternalOracle failing("sh -c 'exit 4'");
  EXPECT_EQ(kind_of([&] { failing.accuracy(three_position_model(), 1); }), ErrorKind::FormatError);
  ExternalOracle garbage("sh -c 'echo high'");
  EXPECT_EQ(kind_of([&] { garbage.accuracy(three_position_model(), 1); }), ErrorKind::FormatError);
}

TEST(Requirements, Validation) {
  Requirements r;
  r.min_accuracy = 1.5;
  EXPECT_EQ(kind_of([&] { r.validate(); }), ErrorKind::UnsupportedConfig);
  r.min_accuracy = 0.5;
  r.performance_bound = -1;
  EXPECT_EQ(kind_of([&] { r.validate(); }), ErrorKind::UnsupportedConfig);
  r.performance = Requirements::Performance::MaxLatencyMs;
  r.performance_bound = 10;
  EXPECT_TRUE(r.performance_met(0.0, 9.0));
  EXPECT_FALSE(r.performance_met(1e6, 11.0));
}

TEST(RunFramework, PerfectOracleVisitsAllAndReturnsFastest) {
  auto gen = stratix_generator();
  const auto vgg = build_reference_model("VGG16");
  FunctionOracle oracle([](size_t) { return 1.0; });
  const auto res = run_framework("imagenet", {}, gen, vgg, oracle);
  const size_t n = vgg.positions().size();
  ASSERT_EQ(res.log.size(), n + 1);
  EXPECT_EQ(oracle.calls, static_cast<int>(n + 1));
  EXPECT_EQ(res.best_record().replaced, n);
  for (const auto& c : res.log) EXPECT_GE(c.latency_ms, res.best_record().latency_ms);
}

TEST(RunFramework, FirstReplacementFailingReturnsPretrained) {
  auto gen = stratix_generator();
  const auto vgg = build_reference_model("VGG16");
  FunctionOracle oracle([](size_t k) { return k == 0 ? 0.9 : 0.1; });
  Requirements req;
  req.min_accuracy = 0.5;
  const auto res = run_framework("imagenet", req, gen, vgg, oracle);
  EXPECT_EQ(res.log.size(), 2u);
  EXPECT_EQ(res.best, 0u);
  EXPECT_EQ(res.best_model->stages(), vgg.stages());
}

TEST(RunFramework, AlwaysFailingOracle) {
  auto gen = stratix_generator();
  const auto vgg = build_reference_model("VGG16");
  FunctionOracle oracle([](size_t) { return 0.0; });
  Requirements req;
  req.min_accuracy = 0.5;
  try {
    run_framework("imagenet", req, gen, vgg, oracle);
    FAIL() << "expected NoSolution";
  } catch (const NoSolutionError& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NoSolution);
    ASSERT_EQ(e.partial().log.size(), 1u);
    EXPECT_FALSE(e.partial().log[0].accuracy_ok);
  }
  // With no accuracy floor the pretrained model is already acceptable.
  req.min_accuracy = 0.0;
  FunctionOracle zero([](size_t) { return 0.0; });
  EXPECT_NO_THROW(run_framework("imagenet", req, gen, vgg, zero));
}

TEST(RunFramework, UnreachablePerformanceIsNoSolution) {
  auto gen = stratix_generator();
  const auto vgg = build_reference_model("VGG16");
  FunctionOracle oracle([](size_t) { return 1.0; });
  Requirements req;
  req.performance_bound = 1e9;
  EXPECT_EQ(kind_of([&] { run_framework("imagenet", req, gen, vgg, oracle); }),
            ErrorKind::NoSolution);
}

TEST(RunFramework, SyntheticPeakSelectsOneReplacement) {
  auto gen = stratix_generator();
  const auto vgg = build_reference_model("VGG16");
  SyntheticOracle oracle;
  Requirements req;
  req.min_accuracy = oracle.params().base_accuracy - oracle.params().jitter;
  const auto res = run_framework("imagenet", req, gen, vgg, oracle);
  EXPECT_EQ(res.best_record().replaced, 1u);
  EXPECT_EQ(res.best_record().pattern, "OOOOS");
  EXPECT_LE(res.log.size(), vgg.positions().size() + 1);
  EXPECT_TRUE(res.synthetic_accuracy);
}

TEST(RunFramework, ExhaustiveSearchesPastAccuracyFailures) {
  auto gen = stratix_generator();
  const auto vgg = build_reference_model("VGG16");
  FunctionOracle oracle([](size_t k) { return k == 1 ? 0.1 : 0.9; });
  Requirements req;
  req.min_accuracy = 0.5;
  ExploreOptions opt;
  opt.exhaustive = true;
  const auto res = run_framework("imagenet", req, gen, vgg, oracle, opt);
  EXPECT_EQ(res.log.size(), vgg.positions().size() + 1);
  EXPECT_FALSE(res.log[1].improved_best);
  EXPECT_EQ(res.best_record().replaced, vgg.positions().size());
}

TEST(RunFramework, LoopInvariantAndDeterminism) {
  const auto vgg = build_reference_model("VGG16");
  for (uint64_t seed : {1u, 2u, 3u}) {
    SyntheticOracleParams p;
    p.seed = seed;
    Requirements req;
    req.min_accuracy = 0.85;
    req.performance_bound = 500;
    auto g1 = stratix_generator();
    auto g2 = stratix_generator();
    SyntheticOracle o1(p), o2(p);
    const auto a = run_framework("imagenet", req, g1, vgg, o1);
    const auto b = run_framework("imagenet", req, g2, vgg, o2);
    ASSERT_EQ(a.log.size(), b.log.size());
    for (size_t i = 0; i < a.log.size(); ++i) {
      EXPECT_EQ(a.log[i].accuracy, b.log[i].accuracy);
      EXPECT_EQ(a.log[i].latency_ms, b.log[i].latency_ms);
    }
    EXPECT_EQ(a.best, b.best);
    double best_so_far = 0.0;
    for (const auto& c : a.log) {
      if (!c.improved_best) continue;
      EXPECT_TRUE(c.accuracy_ok);
      EXPECT_GE(c.performance_gops, req.performance_bound);
      EXPECT_GT(c.performance_gops, best_so_far);
      best_so_far = c.performance_gops;
    }
    EXPECT_TRUE(a.best_record().design.resources.feasible(PlatformSpec::stratix_v()));
    EXPECT_LE(a.log.size(), vgg.positions().size() + 1);
  }
}

TEST(Io, ModelRoundTrip) {
  for (const char* name : {"VGG16", "ResNet50", "MobileNetV1", "MobileNetV2"}) {
    const auto m = build_reference_model(name);
    const auto back = model_from_json(Json::parse(model_to_json(m).dump()));
    EXPECT_EQ(back.stages(), m.stages()) << name;
    EXPECT_EQ(back.positions(), m.positions()) << name;
    EXPECT_EQ(count_ops_params(back).total_ops, count_ops_params(m).total_ops) << name;
  }
  const auto replaced = replace_layer(build_reference_model("VGG16"), 4);
  EXPECT_EQ(model_from_json(model_to_json(replaced)).replacement_vector(),
            replaced.replacement_vector());
}

TEST(Io, MalformedModelsAreFormatErrors) {
  EXPECT_EQ(kind_of([] { model_from_json(Json::parse(R"({"stages": 3})")); }),
            ErrorKind::FormatError);
  EXPECT_EQ(kind_of([] {
              model_from_json(Json::parse(R"({"stages": [{"kind": "Conv9"}]})"));
            }),
            ErrorKind::FormatError);
  EXPECT_EQ(kind_of([] { model_from_json(Json::parse(R"({"reference": "alexnet"})")); }),
            ErrorKind::UnknownModel);
}

TEST(Io, ConfigPortMismatch) {
  const auto block = BlockSpec::stacked(8, 8);
  const auto layers = fused_layers(block, {8, 8, 8});
  const auto bad = Json::parse(R"({"parallelism": [[1,1,2,4],[1,1,2,2]]})");
  EXPECT_EQ(kind_of([&] { config_from_json(bad, layers); }), ErrorKind::PortMismatch);
  const auto good = Json::parse(R"({"parallelism": [[1,1,2,4],[1,1,4,2]], "seqs": ["FM","CM"]})");
  const auto cfg = config_from_json(good, layers);
  EXPECT_EQ(cfg.par_c, (std::vector<int64_t>{2, 4}));
  EXPECT_EQ(cfg.par_f, 2);
  const auto again = config_from_json(Json::parse(config_to_json(cfg).dump()), layers);
  EXPECT_EQ(again.par_c, cfg.par_c);
  EXPECT_EQ(again.seqs, cfg.seqs);
}

TEST(Io, PlatformDefaultsAndValidation) {
  const auto p = platform_from_json(Json::object());
  EXPECT_EQ(p.dsp_total, 1963);
  EXPECT_EQ(kind_of([] { platform_from_json(Json::parse(R"({"dsp_total": 0})")); }),
            ErrorKind::UnsupportedConfig);
  const auto calib = CalibrationTable::placeholder();
  const auto back = calibration_from_json(Json::parse(calibration_to_json(calib).dump()));
  EXPECT_EQ(back.alm.size(), calib.alm.size());
}

}  // namespace
}  // namespace turf
