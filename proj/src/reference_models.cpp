//
// Copyright © 2026 The turf Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "turf/error.hpp"
#include "turf/model_ir.hpp"

#include <array>
#include <string>
#include <tuple>

namespace turf {
namespace {

ModelSpec vgg16(TensorShape input) {
  constexpr std::array<std::pair<int64_t, int>, 5> kGroups = {
      std::pair{64, 2}, {128, 2}, {256, 3}, {512, 3}, {512, 3}};
  std::vector<Stage> stages;
  std::vector<std::vector<size_t>> groups;
  for (const auto& [filters, depth] : kGroups) {
    std::vector<size_t> group;
    for (int i = 0; i < depth; ++i) {
      group.push_back(stages.size());
      stages.emplace_back(LayerSpec::standard(3, filters, 1, 1, /*bias=*/true));
    }
    groups.push_back(std::move(group));
    stages.emplace_back(LayerSpec::max_pool(2, 2));
  }
  stages.emplace_back(LayerSpec::fully_connected(4096));
  stages.emplace_back(LayerSpec::fully_connected(4096));
  stages.emplace_back(LayerSpec::fully_connected(1000));
  return ModelSpec::create(BaseModel::VGG16, "VGG16", input, std::move(stages),
                           std::move(groups));
}

// Stride sits on the first 1x1 convolution of each downsampling bottleneck,
// as in the original ResNet release.
ModelSpec resnet50(TensorShape input) {
  std::vector<Stage> stages;
  stages.emplace_back(LayerSpec::standard(7, 64, 2, 3));
  stages.emplace_back(LayerSpec::max_pool(3, 2, 1));
  constexpr std::array<std::tuple<int64_t, int, int>, 4> kStages = {
      std::tuple<int64_t, int, int>{64, 3, 1}, {128, 4, 2}, {256, 6, 2}, {512, 3, 2}};
  std::vector<std::vector<size_t>> positions;
  for (const auto& [mid, count, stride] : kStages) {
    for (int i = 0; i < count; ++i) {
      std::optional<LayerSpec> projection;
      const int s = i == 0 ? stride : 1;
      if (i == 0) projection = LayerSpec::pointwise(mid * 4, s);
      positions.push_back({stages.size()});
      stages.emplace_back(BlockSpec::bottleneck(mid, mid * 4, s, true, projection));
    }
  }
  stages.emplace_back(LayerSpec::global_avg_pool());
  stages.emplace_back(LayerSpec::fully_connected(1000));
  return ModelSpec::create(BaseModel::ResNet50, "ResNet50", input, std::move(stages),
                           std::move(positions));
}

ModelSpec mobilenet_v1(TensorShape input) {
  std::vector<Stage> stages;
  stages.emplace_back(LayerSpec::standard(3, 32, 2));
  constexpr std::array<std::pair<int64_t, int>, 13> kBlocks = {
      std::pair{64, 1}, {128, 2}, {128, 1}, {256, 2}, {256, 1}, {512, 2}, {512, 1},
      {512, 1},         {512, 1}, {512, 1}, {512, 1}, {1024, 2}, {1024, 1}};
  for (const auto& [filters, stride] : kBlocks) {
    stages.emplace_back(BlockSpec::depthwise_separable(filters, stride));
  }
  stages.emplace_back(LayerSpec::global_avg_pool());
  stages.emplace_back(LayerSpec::fully_connected(1000));
  return ModelSpec::create(BaseModel::MobileNetV1, "MobileNetV1", input, std::move(stages), {});
}

ModelSpec mobilenet_v2(TensorShape input) {
  std::vector<Stage> stages;
  stages.emplace_back(LayerSpec::standard(3, 32, 2));
  // Expansion factor 1: no expansion convolution, so the block degenerates
  // to a depthwise separable pair.
  stages.emplace_back(BlockSpec::depthwise_separable(16, 1));
  int64_t channels = 16;
  struct Row {
    int64_t expansion, out;
    int repeats, stride;
  };
  constexpr std::array<Row, 6> kRows = {Row{6, 24, 2, 2}, {6, 32, 3, 2}, {6, 64, 4, 2},
                                        {6, 96, 3, 1},    {6, 160, 3, 2}, {6, 320, 1, 1}};
  for (const auto& row : kRows) {
    for (int i = 0; i < row.repeats; ++i) {
      const int stride = i == 0 ? row.stride : 1;
      const bool shortcut = stride == 1 && channels == row.out;
      stages.emplace_back(
          BlockSpec::separable_bottleneck(channels * row.expansion, row.out, stride, shortcut));
      channels = row.out;
    }
  }
  stages.emplace_back(LayerSpec::pointwise(1280));
  stages.emplace_back(LayerSpec::global_avg_pool());
  stages.emplace_back(LayerSpec::fully_connected(1000));
  return ModelSpec::create(BaseModel::MobileNetV2, "MobileNetV2", input, std::move(stages), {});
}

}  // namespace

ModelSpec build_reference_model(std::string_view name, TensorShape input) {
  BaseModel base;
  try {
    base = base_model_from_string(name);
  } catch (const Error&) {
    throw Error(ErrorKind::UnknownModel, "unknown reference model '" + std::string(name) + "'");
  }
  switch (base) {
    case BaseModel::VGG16: return vgg16(input);
    case BaseModel::ResNet50: return resnet50(input);
    case BaseModel::MobileNetV1: return mobilenet_v1(input);
    case BaseModel::MobileNetV2: return mobilenet_v2(input);
    case BaseModel::Custom: break;
  }
  throw Error(ErrorKind::UnknownModel, "Custom has no reference configuration");
}

}  // namespace turf
