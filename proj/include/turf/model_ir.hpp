//
// Copyright © 2026 The turf Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace turf {

struct TensorShape {
  int64_t height = 1;
  int64_t width = 1;
  int64_t channels = 1;

  /// Throws ShapeMismatch unless every dimension is >= 1.
  static TensorShape make(int64_t height, int64_t width, int64_t channels);

  int64_t elements() const { return height * width * channels; }
  int64_t pixels() const { return height * width; }

  friend bool operator==(const TensorShape&, const TensorShape&) = default;
};

std::string to_string(const TensorShape& shape);

enum class LayerKind {
  StandardConv,
  DepthwiseConv,
  PointwiseConv,
  FullyConnected,
  Activation,
  BatchNorm,
  ElementwiseAdd,
  MaxPool,
  AvgPool,
  GlobalAvgPool,
};

std::string_view to_string(LayerKind kind);
LayerKind layer_kind_from_string(std::string_view name);

bool is_conv(LayerKind kind);

struct LayerSpec {
  LayerKind kind = LayerKind::StandardConv;
  int kernel = 1;
  int stride = 1;
  int padding = 0;
  /// Present for StandardConv, PointwiseConv and FullyConnected only.
  std::optional<int64_t> out_channels;
  bool bias = false;

  static LayerSpec standard(int kernel, int64_t filters, int stride = 1,
                            int padding = -1, bool bias = false);
  static LayerSpec depthwise(int kernel, int stride = 1, int padding = -1,
                             bool bias = false);
  static LayerSpec pointwise(int64_t filters, int stride = 1,
                             bool bias = false);
  static LayerSpec fully_connected(int64_t outputs, bool bias = true);
  static LayerSpec max_pool(int kernel, int stride, int padding = 0);
  static LayerSpec global_avg_pool();
  static LayerSpec activation();
  static LayerSpec batch_norm();

  /// Throws ShapeMismatch if the per-kind field invariants do not hold.
  void validate() const;

  friend bool operator==(const LayerSpec&, const LayerSpec&) = default;
};

/// Shape after applying `layer` to `input`. Throws ShapeMismatch.
TensorShape output_shape(const LayerSpec& layer, const TensorShape& input);

enum class BlockKind { Stacked, DepthwiseSeparable, Bottleneck, SeparableBottleneck };

std::string_view to_string(BlockKind kind);
BlockKind block_kind_from_string(std::string_view name);

struct BlockSpec {
  BlockKind kind = BlockKind::Stacked;
  std::vector<LayerSpec> layers;
  bool has_shortcut = false;
  /// 1x1 projection on the shortcut path when the residual changes shape.
  std::optional<LayerSpec> projection;

  static BlockSpec stacked(int64_t channels, int64_t filters, int stride = 1);
  static BlockSpec depthwise_separable(int64_t filters, int stride = 1,
                                       bool bias = false);
  static BlockSpec bottleneck(int64_t mid, int64_t out, int stride = 1,
                              bool shortcut = true,
                              std::optional<LayerSpec> projection = std::nullopt);
  static BlockSpec separable_bottleneck(int64_t expanded, int64_t out,
                                        int stride = 1, bool shortcut = false);

  /// Throws ShapeMismatch when the layer list does not match `kind`.
  void validate() const;

  friend bool operator==(const BlockSpec&, const BlockSpec&) = default;
};

/// Per-layer input shapes inside a block, followed by the block output.
std::vector<TensorShape> block_shapes(const BlockSpec& block,
                                      const TensorShape& input);
TensorShape output_shape(const BlockSpec& block, const TensorShape& input);

using Stage = std::variant<LayerSpec, BlockSpec>;

TensorShape output_shape(const Stage& stage, const TensorShape& input);

/// Short text form, e.g. "conv3x3/64/s2" or "DepthwiseSeparable:dw3x3:pw/128".
std::string layer_label(const LayerSpec& layer);
std::string stage_label(const Stage& stage);

enum class BaseModel { VGG16, ResNet50, MobileNetV1, MobileNetV2, Custom };

std::string_view to_string(BaseModel base);
/// Throws UnknownModel.
BaseModel base_model_from_string(std::string_view name);

enum class Replacement { Origin, Separable };

/// A CNN as an ordered list of stages plus its replaceable positions.
///
/// Instances are immutable and always shape-consistent: `create` propagates
/// shapes through every stage and rejects the model if any stage fails.
class ModelSpec {
 public:
  /// `positions` lists, bottom to top, the stage indices that make up each
  /// replaceable position. Throws ShapeMismatch or InvalidReplacement.
  static ModelSpec create(BaseModel base, std::string name, TensorShape input,
                          std::vector<Stage> stages,
                          std::vector<std::vector<size_t>> positions);

  /// Same as create() but with one position per StandardConv (K >= 2) layer
  /// and per Bottleneck block.
  static ModelSpec create_with_default_positions(BaseModel base,
                                                 std::string name,
                                                 TensorShape input,
                                                 std::vector<Stage> stages);

  BaseModel base() const { return base_; }
  const std::string& name() const { return name_; }
  const TensorShape& input() const { return input_; }
  const std::vector<Stage>& stages() const { return stages_; }
  /// Input shape of stage i; the final entry is the model output shape.
  const std::vector<TensorShape>& shapes() const { return shapes_; }
  const TensorShape& stage_input(size_t i) const { return shapes_.at(i); }
  const TensorShape& stage_output(size_t i) const { return shapes_.at(i + 1); }
  const std::vector<std::vector<size_t>>& positions() const { return positions_; }
  const std::vector<Replacement>& replacement_vector() const { return replacement_; }
  size_t replaced_count() const;

 private:
  friend ModelSpec replace_layer(const ModelSpec& model, size_t position);

  BaseModel base_ = BaseModel::Custom;
  std::string name_;
  TensorShape input_;
  std::vector<Stage> stages_;
  std::vector<TensorShape> shapes_;
  std::vector<std::vector<size_t>> positions_;
  std::vector<Replacement> replacement_;
};

/// Reference builders for the four base networks at their default widths.
/// Throws UnknownModel for anything else.
ModelSpec build_reference_model(std::string_view name,
                                TensorShape input = TensorShape{224, 224, 3});

/// Replaces one replaceable position: StandardConv becomes a
/// DepthwiseSeparable block and Bottleneck becomes SeparableBottleneck.
/// Throws InvalidReplacement for non-replaceable or already replaced
/// positions.
ModelSpec replace_layer(const ModelSpec& model, size_t position);

enum class StageCategory { Block, ConvLayer, FullyConnected, Other };

std::string_view to_string(StageCategory category);

struct StageCount {
  size_t index = 0;
  std::string label;
  StageCategory category = StageCategory::Other;
  TensorShape input;
  TensorShape output;
  int64_t ops = 0;
  int64_t params = 0;
};

/// Operation and parameter totals. One MAC counts as two operations;
/// biases count as parameters; BatchNorm, activation and pooling count as
/// neither (BatchNorm is assumed folded into the preceding convolution).
struct OpCount {
  int64_t total_ops = 0;
  int64_t total_params = 0;
  std::vector<StageCount> stages;
  int64_t block_ops = 0, conv_ops = 0, fc_ops = 0;
  int64_t block_params = 0, conv_params = 0, fc_params = 0;

  double gops() const { return static_cast<double>(total_ops) * 1e-9; }
  double mparams() const { return static_cast<double>(total_params) * 1e-6; }
};

int64_t layer_ops(const LayerSpec& layer, const TensorShape& input);
int64_t layer_params(const LayerSpec& layer, const TensorShape& input);
int64_t block_ops(const BlockSpec& block, const TensorShape& input);
int64_t block_params(const BlockSpec& block, const TensorShape& input);

OpCount count_ops_params(const ModelSpec& model);

}  // namespace turf
