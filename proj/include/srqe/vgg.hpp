// Copyright 2026 The SRQE Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SRQE_VGG_HPP_
#define SRQE_VGG_HPP_

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "srqe/image.hpp"
#include "srqe/weights.hpp"

namespace srqe {

// Activation volume stored as channels x (height * width); column p is the
// pixel (p / width, p % width). For a tap point this is exactly the flattened
// C x HW matrix a Gram matrix is built from.
struct FeatureMap {
  int layer = 0;  // 1..5 for tap points, 0 for intermediate volumes
  int height = 0;
  int width = 0;
  Eigen::MatrixXf values;

  int channels() const { return static_cast<int>(values.rows()); }
};

inline constexpr std::array<int, 5> kVggLayerWidths = {64, 128, 256, 512, 512};
inline constexpr std::array<int, 5> kVggConvsPerBlock = {2, 2, 3, 3, 3};
inline constexpr std::array<float, 3> kImagenetMean = {0.485f, 0.456f, 0.406f};
inline constexpr std::array<float, 3> kImagenetStd = {0.229f, 0.224f, 0.225f};
// Smallest input whose block-5 output is still at least 2x2.
inline constexpr int kMinNetworkInput = 32;

std::string vgg_weight_name(int block, int index);  // "conv{block}_{index}.weight"
std::string vgg_bias_name(int block, int index);    // "conv{block}_{index}.bias"

// Same-padded (zeros) stride-1 convolution with an odd square kernel.
// kernel is row-major (out_channels, in_channels, k, k); bias has out_channels
// entries.
FeatureMap conv2d_same(const FeatureMap& input, std::span<const float> kernel,
                       std::span<const float> bias, int out_channels, int kernel_size);

void relu_inplace(FeatureMap& map);

// 2x2 window, stride 2; odd trailing rows/columns are dropped.
FeatureMap max_pool_2x2(const FeatureMap& map);

// Per-channel standardization with the ImageNet statistics.
FeatureMap preprocess(const ImageTensor& image);

// The 13-convolution VGG16 feature stack, emitting the last rectified
// convolution of each block. Immutable after construction.
class Vgg16Features {
 public:
  explicit Vgg16Features(WeightBundle weights);

  // Normalizes the image, then runs the stack.
  std::vector<FeatureMap> extract(const ImageTensor& image) const;
  // Runs the stack on an already standardized input volume.
  std::vector<FeatureMap> forward(const FeatureMap& input) const;

  const WeightBundle& weights() const { return weights_; }

 private:
  WeightBundle weights_;
};

std::vector<FeatureMap> extract_features(const ImageTensor& image, const WeightBundle& weights);

// Throws ConfigurationError unless every VGG16 tensor is present with the
// expected shape.
void validate_vgg16_weights(const WeightBundle& weights);

// He-initialized VGG16 weights for tests and offline runs without the
// exported pretrained file.
WeightBundle random_vgg16_weights(std::uint64_t seed);

}  // namespace srqe

#endif  // SRQE_VGG_HPP_
