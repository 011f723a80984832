//
// Copyright © 2026 The turf Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "turf/model_ir.hpp"

#include "turf/error.hpp"

#include <algorithm>
#include <cctype>
#include <array>
#include <set>
#include <sstream>
#include <utility>

namespace turf {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::UnknownModel: return "UnknownModel";
    case ErrorKind::ShapeMismatch: return "ShapeMismatch";
    case ErrorKind::InvalidReplacement: return "InvalidReplacement";
    case ErrorKind::UnsupportedConfig: return "UnsupportedConfig";
    case ErrorKind::InefficientConfig: return "InefficientConfig";
    case ErrorKind::PortMismatch: return "PortMismatch";
    case ErrorKind::InvalidTiling: return "InvalidTiling";
    case ErrorKind::SimDeadlock: return "SimDeadlock";
    case ErrorKind::CalibrationError: return "CalibrationError";
    case ErrorKind::Infeasible: return "Infeasible";
    case ErrorKind::NoSolution: return "NoSolution";
    case ErrorKind::FormatError: return "FormatError";
  }
  return "Unknown";
}

namespace {

[[noreturn]] void shape_error(const std::string& msg) {
  throw Error(ErrorKind::ShapeMismatch, msg);
}

int64_t sliding_extent(int64_t size, int kernel, int stride, int padding) {
  const int64_t padded = size + 2 * static_cast<int64_t>(padding);
  if (padded < kernel) {
    shape_error("kernel " + std::to_string(kernel) + " larger than padded extent " +
                std::to_string(padded));
  }
  return (padded - kernel) / stride + 1;
}

constexpr std::array kLayerNames = {
    std::pair{LayerKind::StandardConv, "StandardConv"},
    std::pair{LayerKind::DepthwiseConv, "DepthwiseConv"},
    std::pair{LayerKind::PointwiseConv, "PointwiseConv"},
    std::pair{LayerKind::FullyConnected, "FullyConnected"},
    std::pair{LayerKind::Activation, "Activation"},
    std::pair{LayerKind::BatchNorm, "BatchNorm"},
    std::pair{LayerKind::ElementwiseAdd, "ElementwiseAdd"},
    std::pair{LayerKind::MaxPool, "MaxPool"},
    std::pair{LayerKind::AvgPool, "AvgPool"},
    std::pair{LayerKind::GlobalAvgPool, "GlobalAvgPool"},
};

constexpr std::array kBlockNames = {
    std::pair{BlockKind::Stacked, "Stacked"},
    std::pair{BlockKind::DepthwiseSeparable, "DepthwiseSeparable"},
    std::pair{BlockKind::Bottleneck, "Bottleneck"},
    std::pair{BlockKind::SeparableBottleneck, "SeparableBottleneck"},
};

constexpr std::array kBaseNames = {
    std::pair{BaseModel::VGG16, "VGG16"},
    std::pair{BaseModel::ResNet50, "ResNet50"},
    std::pair{BaseModel::MobileNetV1, "MobileNetV1"},
    std::pair{BaseModel::MobileNetV2, "MobileNetV2"},
    std::pair{BaseModel::Custom, "Custom"},
};

int same_padding(int kernel, int padding) { return padding < 0 ? kernel / 2 : padding; }

std::vector<const LayerSpec*> conv_layers(const BlockSpec& block) {
  std::vector<const LayerSpec*> convs;
  for (const auto& l : block.layers) {
    if (is_conv(l.kind)) convs.push_back(&l);
  }
  return convs;
}

bool is_replaceable(const Stage& stage) {
  if (const auto* layer = std::get_if<LayerSpec>(&stage)) {
    return layer->kind == LayerKind::StandardConv && layer->kernel >= 2;
  }
  return std::get<BlockSpec>(stage).kind == BlockKind::Bottleneck;
}

bool is_replaced(const Stage& stage) {
  if (const auto* block = std::get_if<BlockSpec>(&stage)) {
    return block->kind == BlockKind::DepthwiseSeparable ||
           block->kind == BlockKind::SeparableBottleneck;
  }
  return false;
}

}  // namespace

std::string layer_label(const LayerSpec& l) {
  std::ostringstream os;
  switch (l.kind) {
    case LayerKind::StandardConv:
      os << "conv" << l.kernel << "x" << l.kernel << "/" << *l.out_channels;
      break;
    case LayerKind::DepthwiseConv: os << "dw" << l.kernel << "x" << l.kernel; break;
    case LayerKind::PointwiseConv: os << "pw/" << *l.out_channels; break;
    case LayerKind::FullyConnected: os << "fc/" << *l.out_channels; break;
    default: os << to_string(l.kind); break;
  }
  if (l.stride > 1) os << "/s" << l.stride;
  return os.str();
}

std::string stage_label(const Stage& stage) {
  if (const auto* layer = std::get_if<LayerSpec>(&stage)) return layer_label(*layer);
  const auto& block = std::get<BlockSpec>(stage);
  std::string label(to_string(block.kind));
  for (const auto& l : block.layers) label += ":" + layer_label(l);
  return label;
}

TensorShape TensorShape::make(int64_t height, int64_t width, int64_t channels) {
  if (height < 1 || width < 1 || channels < 1) {
    shape_error("tensor dimensions must be >= 1, got " + std::to_string(height) + "x" +
                std::to_string(width) + "x" + std::to_string(channels));
  }
  return TensorShape{height, width, channels};
}

std::string to_string(const TensorShape& s) {
  return std::to_string(s.height) + "x" + std::to_string(s.width) + "x" +
         std::to_string(s.channels);
}

std::string_view to_string(LayerKind kind) {
  for (const auto& [k, n] : kLayerNames) {
    if (k == kind) return n;
  }
  return "Unknown";
}

LayerKind layer_kind_from_string(std::string_view name) {
  for (const auto& [k, n] : kLayerNames) {
    if (name == n) return k;
  }
  throw Error(ErrorKind::FormatError, "unknown layer kind '" + std::string(name) + "'");
}

bool is_conv(LayerKind kind) {
  return kind == LayerKind::StandardConv || kind == LayerKind::DepthwiseConv ||
         kind == LayerKind::PointwiseConv;
}

std::string_view to_string(BlockKind kind) {
  for (const auto& [k, n] : kBlockNames) {
    if (k == kind) return n;
  }
  return "Unknown";
}

BlockKind block_kind_from_string(std::string_view name) {
  for (const auto& [k, n] : kBlockNames) {
    if (name == n) return k;
  }
  throw Error(ErrorKind::FormatError, "unknown block kind '" + std::string(name) + "'");
}

std::string_view to_string(BaseModel base) {
  for (const auto& [k, n] : kBaseNames) {
    if (k == base) return n;
  }
  return "Unknown";
}

BaseModel base_model_from_string(std::string_view name) {
  // Case and separators are ignored: "vgg16", "VGG-16" and "VGG16" agree.
  const auto fold = [](std::string_view s) {
    std::string out;
    for (char c : s) {
      if (c != '-' && c != '_' && c != ' ') out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
    return out;
  };
  const auto key = fold(name);
  for (const auto& [k, n] : kBaseNames) {
    if (key == fold(n)) return k;
  }
  throw Error(ErrorKind::UnknownModel, "unknown base model '" + std::string(name) + "'");
}

LayerSpec LayerSpec::standard(int kernel, int64_t filters, int stride, int padding,
                              bool bias) {
  LayerSpec l{LayerKind::StandardConv, kernel, stride, same_padding(kernel, padding),
              filters, bias};
  l.validate();
  return l;
}

LayerSpec LayerSpec::depthwise(int kernel, int stride, int padding, bool bias) {
  LayerSpec l{LayerKind::DepthwiseConv, kernel, stride, same_padding(kernel, padding),
              std::nullopt, bias};
  l.validate();
  return l;
}

LayerSpec LayerSpec::pointwise(int64_t filters, int stride, bool bias) {
  LayerSpec l{LayerKind::PointwiseConv, 1, stride, 0, filters, bias};
  l.validate();
  return l;
}

LayerSpec LayerSpec::fully_connected(int64_t outputs, bool bias) {
  LayerSpec l{LayerKind::FullyConnected, 1, 1, 0, outputs, bias};
  l.validate();
  return l;
}

LayerSpec LayerSpec::max_pool(int kernel, int stride, int padding) {
  return LayerSpec{LayerKind::MaxPool, kernel, stride, padding, std::nullopt, false};
}

LayerSpec LayerSpec::global_avg_pool() {
  return LayerSpec{LayerKind::GlobalAvgPool, 1, 1, 0, std::nullopt, false};
}

LayerSpec LayerSpec::activation() {
  return LayerSpec{LayerKind::Activation, 1, 1, 0, std::nullopt, false};
}

LayerSpec LayerSpec::batch_norm() {
  return LayerSpec{LayerKind::BatchNorm, 1, 1, 0, std::nullopt, false};
}

void LayerSpec::validate() const {
  if (kernel < 1 || stride < 1 || padding < 0) {
    shape_error("kernel and stride must be >= 1 and padding >= 0");
  }
  const bool needs_filters = kind == LayerKind::StandardConv ||
                             kind == LayerKind::PointwiseConv ||
                             kind == LayerKind::FullyConnected;
  if (needs_filters && (!out_channels || *out_channels < 1)) {
    shape_error(std::string(to_string(kind)) + " requires out_channels >= 1");
  }
  if (!needs_filters && out_channels) {
    shape_error(std::string(to_string(kind)) + " must not carry out_channels");
  }
  if (kind == LayerKind::PointwiseConv && kernel != 1) {
    shape_error("PointwiseConv must have kernel_size 1");
  }
}

TensorShape output_shape(const LayerSpec& l, const TensorShape& in) {
  l.validate();
  switch (l.kind) {
    case LayerKind::StandardConv:
    case LayerKind::PointwiseConv:
      return TensorShape::make(sliding_extent(in.height, l.kernel, l.stride, l.padding),
                               sliding_extent(in.width, l.kernel, l.stride, l.padding),
                               *l.out_channels);
    case LayerKind::DepthwiseConv:
    case LayerKind::MaxPool:
    case LayerKind::AvgPool:
      return TensorShape::make(sliding_extent(in.height, l.kernel, l.stride, l.padding),
                               sliding_extent(in.width, l.kernel, l.stride, l.padding),
                               in.channels);
    case LayerKind::FullyConnected:
      return TensorShape::make(1, 1, *l.out_channels);
    case LayerKind::GlobalAvgPool:
      return TensorShape::make(1, 1, in.channels);
    case LayerKind::Activation:
    case LayerKind::BatchNorm:
    case LayerKind::ElementwiseAdd:
      return in;
  }
  return in;
}

BlockSpec BlockSpec::stacked(int64_t channels, int64_t filters, int stride) {
  BlockSpec b{BlockKind::Stacked,
              {LayerSpec::standard(3, channels, stride), LayerSpec::standard(3, filters)},
              true,
              std::nullopt};
  b.validate();
  return b;
}

BlockSpec BlockSpec::depthwise_separable(int64_t filters, int stride, bool bias) {
  BlockSpec b{BlockKind::DepthwiseSeparable,
              {LayerSpec::depthwise(3, stride, -1, bias), LayerSpec::pointwise(filters, 1, bias)},
              false,
              std::nullopt};
  b.validate();
  return b;
}

BlockSpec BlockSpec::bottleneck(int64_t mid, int64_t out, int stride, bool shortcut,
                                std::optional<LayerSpec> projection) {
  BlockSpec b{BlockKind::Bottleneck,
              {LayerSpec::pointwise(mid, stride), LayerSpec::standard(3, mid),
               LayerSpec::pointwise(out)},
              shortcut,
              std::move(projection)};
  b.validate();
  return b;
}

BlockSpec BlockSpec::separable_bottleneck(int64_t expanded, int64_t out, int stride,
                                          bool shortcut) {
  BlockSpec b{BlockKind::SeparableBottleneck,
              {LayerSpec::pointwise(expanded), LayerSpec::depthwise(3, stride),
               LayerSpec::pointwise(out)},
              shortcut,
              std::nullopt};
  b.validate();
  return b;
}

void BlockSpec::validate() const {
  for (const auto& l : layers) {
    l.validate();
    if (l.kind == LayerKind::FullyConnected) shape_error("blocks cannot contain FC layers");
  }
  const auto convs = conv_layers(*this);
  auto kinds_are = [&](std::initializer_list<LayerKind> expected) {
    if (convs.size() != expected.size()) return false;
    size_t i = 0;
    for (LayerKind k : expected) {
      if (convs[i++]->kind != k) return false;
    }
    return true;
  };
  const std::string name(to_string(kind));
  switch (kind) {
    case BlockKind::Stacked:
      if (!kinds_are({LayerKind::StandardConv, LayerKind::StandardConv}) || !has_shortcut) {
        shape_error("Stacked block must be two StandardConv layers with a shortcut");
      }
      break;
    case BlockKind::DepthwiseSeparable:
      if (!kinds_are({LayerKind::DepthwiseConv, LayerKind::PointwiseConv})) {
        shape_error("DepthwiseSeparable block must be [DepthwiseConv, PointwiseConv]");
      }
      break;
    case BlockKind::Bottleneck:
      if (!kinds_are({LayerKind::PointwiseConv, LayerKind::StandardConv,
                      LayerKind::PointwiseConv}) ||
          convs[1]->kernel != 3) {
        shape_error("Bottleneck block must be [PointwiseConv, StandardConv(K=3), PointwiseConv]");
      }
      break;
    case BlockKind::SeparableBottleneck:
      if (!kinds_are({LayerKind::PointwiseConv, LayerKind::DepthwiseConv,
                      LayerKind::PointwiseConv}) ||
          convs[1]->kernel != 3) {
        shape_error(
            "SeparableBottleneck block must be [PointwiseConv, DepthwiseConv(K=3), PointwiseConv]");
      }
      break;
  }
  if (projection) {
    projection->validate();
    if (projection->kind != LayerKind::PointwiseConv) {
      shape_error("shortcut projection must be a PointwiseConv");
    }
    if (!has_shortcut) shape_error("projection given without a shortcut");
  }
}

std::vector<TensorShape> block_shapes(const BlockSpec& block, const TensorShape& input) {
  block.validate();
  std::vector<TensorShape> shapes{input};
  for (const auto& l : block.layers) shapes.push_back(output_shape(l, shapes.back()));
  if (block.has_shortcut) {
    const TensorShape residual =
        block.projection ? output_shape(*block.projection, input) : input;
    if (!(residual == shapes.back())) {
      shape_error("shortcut shape " + to_string(residual) + " does not match block output " +
                  to_string(shapes.back()));
    }
  }
  return shapes;
}

TensorShape output_shape(const BlockSpec& block, const TensorShape& input) {
  return block_shapes(block, input).back();
}

TensorShape output_shape(const Stage& stage, const TensorShape& input) {
  return std::visit([&](const auto& s) { return output_shape(s, input); }, stage);
}

ModelSpec ModelSpec::create(BaseModel base, std::string name, TensorShape input,
                            std::vector<Stage> stages,
                            std::vector<std::vector<size_t>> positions) {
  ModelSpec m;
  m.base_ = base;
  m.name_ = std::move(name);
  m.input_ = TensorShape::make(input.height, input.width, input.channels);
  m.stages_ = std::move(stages);
  m.shapes_.push_back(m.input_);
  for (size_t i = 0; i < m.stages_.size(); ++i) {
    try {
      m.shapes_.push_back(output_shape(m.stages_[i], m.shapes_.back()));
    } catch (const Error& e) {
      throw Error(e.kind(), "stage " + std::to_string(i) + ": " + e.what());
    }
  }
  std::set<size_t> seen;
  for (const auto& pos : positions) {
    if (pos.empty()) throw Error(ErrorKind::InvalidReplacement, "empty replaceable position");
    size_t origin = 0, separable = 0;
    for (size_t idx : pos) {
      if (idx >= m.stages_.size() || !seen.insert(idx).second) {
        throw Error(ErrorKind::InvalidReplacement,
                    "position references invalid or duplicate stage " + std::to_string(idx));
      }
      if (is_replaceable(m.stages_[idx])) {
        ++origin;
      } else if (is_replaced(m.stages_[idx])) {
        ++separable;
      } else {
        throw Error(ErrorKind::InvalidReplacement,
                    "stage " + std::to_string(idx) + " is not a replaceable convolution");
      }
    }
    if (origin != 0 && separable != 0) {
      throw Error(ErrorKind::InvalidReplacement, "position mixes replaced and original stages");
    }
    m.replacement_.push_back(origin ? Replacement::Origin : Replacement::Separable);
  }
  m.positions_ = std::move(positions);
  return m;
}

ModelSpec ModelSpec::create_with_default_positions(BaseModel base, std::string name,
                                                   TensorShape input,
                                                   std::vector<Stage> stages) {
  std::vector<std::vector<size_t>> positions;
  for (size_t i = 0; i < stages.size(); ++i) {
    if (is_replaceable(stages[i])) positions.push_back({i});
  }
  return create(base, std::move(name), input, std::move(stages), std::move(positions));
}

size_t ModelSpec::replaced_count() const {
  return static_cast<size_t>(
      std::count(replacement_.begin(), replacement_.end(), Replacement::Separable));
}

ModelSpec replace_layer(const ModelSpec& model, size_t position) {
  if (position >= model.positions_.size()) {
    throw Error(ErrorKind::InvalidReplacement,
                "position " + std::to_string(position) + " out of range (model has " +
                    std::to_string(model.positions_.size()) + ")");
  }
  if (model.replacement_[position] != Replacement::Origin) {
    throw Error(ErrorKind::InvalidReplacement,
                "position " + std::to_string(position) + " is already replaced");
  }
  ModelSpec next = model;
  for (size_t idx : model.positions_[position]) {
    Stage& stage = next.stages_[idx];
    if (auto* layer = std::get_if<LayerSpec>(&stage)) {
      BlockSpec block{BlockKind::DepthwiseSeparable,
                      {LayerSpec::depthwise(layer->kernel, layer->stride, layer->padding,
                                            layer->bias),
                       LayerSpec::pointwise(*layer->out_channels, 1, layer->bias)},
                      false,
                      std::nullopt};
      block.validate();
      stage = std::move(block);
    } else {
      auto& block = std::get<BlockSpec>(stage);
      for (auto& l : block.layers) {
        if (l.kind == LayerKind::StandardConv) {
          l = LayerSpec::depthwise(l.kernel, l.stride, l.padding, l.bias);
        }
      }
      block.kind = BlockKind::SeparableBottleneck;
      block.validate();
    }
  }
  next.replacement_[position] = Replacement::Separable;
  // Recompute shapes; replacement must not change any stage output.
  std::vector<TensorShape> shapes{next.input_};
  for (const auto& s : next.stages_) shapes.push_back(output_shape(s, shapes.back()));
  if (shapes != model.shapes_) {
    throw Error(ErrorKind::ShapeMismatch, "replacement changed stage shapes");
  }
  return next;
}

std::string_view to_string(StageCategory c) {
  switch (c) {
    case StageCategory::Block: return "block";
    case StageCategory::ConvLayer: return "conv";
    case StageCategory::FullyConnected: return "fc";
    case StageCategory::Other: return "other";
  }
  return "other";
}

int64_t layer_ops(const LayerSpec& l, const TensorShape& in) {
  const TensorShape out = output_shape(l, in);
  const int64_t k2 = static_cast<int64_t>(l.kernel) * l.kernel;
  switch (l.kind) {
    case LayerKind::StandardConv:
    case LayerKind::PointwiseConv:
      return 2 * out.pixels() * in.channels * out.channels * k2;
    case LayerKind::DepthwiseConv:
      return 2 * out.pixels() * in.channels * k2;
    case LayerKind::FullyConnected:
      return 2 * in.elements() * out.channels;
    default:
      return 0;
  }
}

int64_t layer_params(const LayerSpec& l, const TensorShape& in) {
  const TensorShape out = output_shape(l, in);
  const int64_t k2 = static_cast<int64_t>(l.kernel) * l.kernel;
  switch (l.kind) {
    case LayerKind::StandardConv:
    case LayerKind::PointwiseConv:
      return in.channels * out.channels * k2 + (l.bias ? out.channels : 0);
    case LayerKind::DepthwiseConv:
      return in.channels * k2 + (l.bias ? in.channels : 0);
    case LayerKind::FullyConnected:
      return in.elements() * out.channels + (l.bias ? out.channels : 0);
    default:
      return 0;
  }
}

int64_t block_ops(const BlockSpec& block, const TensorShape& input) {
  const auto shapes = block_shapes(block, input);
  int64_t ops = 0;
  for (size_t i = 0; i < block.layers.size(); ++i) ops += layer_ops(block.layers[i], shapes[i]);
  if (block.projection) ops += layer_ops(*block.projection, input);
  return ops;
}

int64_t block_params(const BlockSpec& block, const TensorShape& input) {
  const auto shapes = block_shapes(block, input);
  int64_t params = 0;
  for (size_t i = 0; i < block.layers.size(); ++i) {
    params += layer_params(block.layers[i], shapes[i]);
  }
  if (block.projection) params += layer_params(*block.projection, input);
  return params;
}

OpCount count_ops_params(const ModelSpec& model) {
  OpCount count;
  for (size_t i = 0; i < model.stages().size(); ++i) {
    const Stage& stage = model.stages()[i];
    StageCount row;
    row.index = i;
    row.input = model.stage_input(i);
    row.output = model.stage_output(i);
    if (const auto* layer = std::get_if<LayerSpec>(&stage)) {
      row.label = layer_label(*layer);
      row.ops = layer_ops(*layer, row.input);
      row.params = layer_params(*layer, row.input);
      row.category = layer->kind == LayerKind::FullyConnected ? StageCategory::FullyConnected
                     : is_conv(layer->kind)                    ? StageCategory::ConvLayer
                                                               : StageCategory::Other;
    } else {
      const auto& block = std::get<BlockSpec>(stage);
      row.label = stage_label(block);
      row.ops = block_ops(block, row.input);
      row.params = block_params(block, row.input);
      row.category = StageCategory::Block;
    }
    count.total_ops += row.ops;
    count.total_params += row.params;
    switch (row.category) {
      case StageCategory::Block:
        count.block_ops += row.ops;
        count.block_params += row.params;
        break;
      case StageCategory::ConvLayer:
        count.conv_ops += row.ops;
        count.conv_params += row.params;
        break;
      case StageCategory::FullyConnected:
        count.fc_ops += row.ops;
        count.fc_params += row.params;
        break;
      case StageCategory::Other: break;
    }
    count.stages.push_back(std::move(row));
  }
  return count;
}

}  // namespace turf
