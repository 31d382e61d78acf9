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

#include "srqe/vgg.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "srqe/errors.hpp"

namespace srqe {

namespace {

// Upper bound on im2col scratch, in floats.
constexpr Eigen::Index kIm2colBudget = 1 << 23;

using RowMajorMatrixXf = Eigen::Matrix<float, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

int input_channels(int block, int index) {
  if (index > 1) {
    return kVggLayerWidths[block - 1];
  }
  return block == 1 ? 3 : kVggLayerWidths[block - 2];
}

}  // namespace

std::string vgg_weight_name(int block, int index) {
  return "conv" + std::to_string(block) + "_" + std::to_string(index) + ".weight";
}

std::string vgg_bias_name(int block, int index) {
  return "conv" + std::to_string(block) + "_" + std::to_string(index) + ".bias";
}

FeatureMap conv2d_same(const FeatureMap& input, std::span<const float> kernel,
                       std::span<const float> bias, int out_channels, int kernel_size) {
  const int in_channels = input.channels();
  const int h = input.height;
  const int w = input.width;
  if (kernel_size <= 0 || kernel_size % 2 == 0) {
    throw ConfigurationError("convolution kernel size must be odd");
  }
  const Eigen::Index taps = static_cast<Eigen::Index>(in_channels) * kernel_size * kernel_size;
  if (static_cast<Eigen::Index>(kernel.size()) != out_channels * taps ||
      static_cast<int>(bias.size()) != out_channels) {
    throw ConfigurationError("convolution weights do not match the input volume");
  }
  const int r = kernel_size / 2;
  Eigen::Map<const RowMajorMatrixXf> wmat(kernel.data(), out_channels, taps);
  Eigen::Map<const Eigen::VectorXf> bvec(bias.data(), out_channels);

  FeatureMap out;
  out.height = h;
  out.width = w;
  out.values.resize(out_channels, static_cast<Eigen::Index>(h) * w);

  const int band_rows = static_cast<int>(
      std::clamp<Eigen::Index>(kIm2colBudget / std::max<Eigen::Index>(taps * w, 1), 1, h));
  Eigen::MatrixXf cols;
  for (int y0 = 0; y0 < h; y0 += band_rows) {
    const int rows = std::min(band_rows, h - y0);
    cols.setZero(taps, static_cast<Eigen::Index>(rows) * w);
    for (int y = 0; y < rows; ++y) {
      for (int x = 0; x < w; ++x) {
        float* col = cols.col(static_cast<Eigen::Index>(y) * w + x).data();
        for (int ci = 0; ci < in_channels; ++ci) {
          for (int ky = 0; ky < kernel_size; ++ky) {
            const int sy = y0 + y + ky - r;
            if (sy < 0 || sy >= h) continue;
            for (int kx = 0; kx < kernel_size; ++kx) {
              const int sx = x + kx - r;
              if (sx < 0 || sx >= w) continue;
              col[(ci * kernel_size + ky) * kernel_size + kx] =
                  input.values(ci, static_cast<Eigen::Index>(sy) * w + sx);
            }
          }
        }
      }
    }
    auto block = out.values.middleCols(static_cast<Eigen::Index>(y0) * w,
                                       static_cast<Eigen::Index>(rows) * w);
    block.noalias() = wmat * cols;
    block.colwise() += bvec;
  }
  return out;
}

void relu_inplace(FeatureMap& map) { map.values = map.values.cwiseMax(0.0f); }

FeatureMap max_pool_2x2(const FeatureMap& map) {
  FeatureMap out;
  out.height = map.height / 2;
  out.width = map.width / 2;
  if (out.height == 0 || out.width == 0) {
    throw ConfigurationError("feature map too small to pool");
  }
  out.values.resize(map.channels(), static_cast<Eigen::Index>(out.height) * out.width);
  for (int y = 0; y < out.height; ++y) {
    for (int x = 0; x < out.width; ++x) {
      const Eigen::Index p00 = static_cast<Eigen::Index>(2 * y) * map.width + 2 * x;
      const Eigen::Index p10 = p00 + map.width;
      out.values.col(static_cast<Eigen::Index>(y) * out.width + x) =
          map.values.col(p00)
              .cwiseMax(map.values.col(p00 + 1))
              .cwiseMax(map.values.col(p10))
              .cwiseMax(map.values.col(p10 + 1));
    }
  }
  return out;
}

FeatureMap preprocess(const ImageTensor& image) {
  if (image.channels() != 3) {
    throw InvalidInputError("feature extraction expects a 3-channel image");
  }
  FeatureMap out;
  out.height = image.height();
  out.width = image.width();
  out.values.resize(3, static_cast<Eigen::Index>(out.height) * out.width);
  for (int c = 0; c < 3; ++c) {
    for (int y = 0; y < out.height; ++y) {
      for (int x = 0; x < out.width; ++x) {
        out.values(c, static_cast<Eigen::Index>(y) * out.width + x) =
            (image.at(c, y, x) - kImagenetMean[c]) / kImagenetStd[c];
      }
    }
  }
  return out;
}

void validate_vgg16_weights(const WeightBundle& weights) {
  for (int block = 1; block <= 5; ++block) {
    const auto cout = static_cast<std::uint32_t>(kVggLayerWidths[block - 1]);
    for (int index = 1; index <= kVggConvsPerBlock[block - 1]; ++index) {
      const auto cin = static_cast<std::uint32_t>(input_channels(block, index));
      const Tensor& k = weights.at(vgg_weight_name(block, index));
      const Tensor& b = weights.at(vgg_bias_name(block, index));
      if (k.dims != std::vector<std::uint32_t>{cout, cin, 3, 3}) {
        throw ConfigurationError(vgg_weight_name(block, index) + " has the wrong shape");
      }
      if (b.dims != std::vector<std::uint32_t>{cout}) {
        throw ConfigurationError(vgg_bias_name(block, index) + " has the wrong shape");
      }
      for (float v : k.data) {
        if (!std::isfinite(v)) {
          throw ConfigurationError(vgg_weight_name(block, index) + " has non-finite values");
        }
      }
    }
  }
}

Vgg16Features::Vgg16Features(WeightBundle weights) : weights_(std::move(weights)) {
  validate_vgg16_weights(weights_);
}

std::vector<FeatureMap> Vgg16Features::extract(const ImageTensor& image) const {
  return forward(preprocess(image));
}

std::vector<FeatureMap> Vgg16Features::forward(const FeatureMap& input) const {
  if (input.channels() != 3) {
    throw InvalidInputError("network input must have 3 channels");
  }
  if (input.height < kMinNetworkInput || input.width < kMinNetworkInput) {
    throw ConfigurationError("network input smaller than " +
                             std::to_string(kMinNetworkInput) + " px");
  }
  std::vector<FeatureMap> taps;
  FeatureMap x = input;
  for (int block = 1; block <= 5; ++block) {
    if (block > 1) {
      x = max_pool_2x2(x);
    }
    for (int index = 1; index <= kVggConvsPerBlock[block - 1]; ++index) {
      const Tensor& k = weights_.at(vgg_weight_name(block, index));
      const Tensor& b = weights_.at(vgg_bias_name(block, index));
      x = conv2d_same(x, k.data, b.data, kVggLayerWidths[block - 1], 3);
      relu_inplace(x);
    }
    x.layer = block;
    taps.push_back(x);
    x.layer = 0;
  }
  return taps;
}

std::vector<FeatureMap> extract_features(const ImageTensor& image, const WeightBundle& weights) {
  validate_vgg16_weights(weights);
  // Copying the bundle is avoidable but this entry point is for one-off calls.
  return Vgg16Features(weights).extract(image);
}

WeightBundle random_vgg16_weights(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  WeightBundle bundle;
  for (int block = 1; block <= 5; ++block) {
    const int cout = kVggLayerWidths[block - 1];
    for (int index = 1; index <= kVggConvsPerBlock[block - 1]; ++index) {
      const int cin = input_channels(block, index);
      std::normal_distribution<float> he(0.0f, std::sqrt(2.0f / (9.0f * cin)));
      Tensor k;
      k.dims = {static_cast<std::uint32_t>(cout), static_cast<std::uint32_t>(cin), 3, 3};
      k.data.resize(k.element_count());
      for (float& v : k.data) v = he(rng);
      Tensor b;
      b.dims = {static_cast<std::uint32_t>(cout)};
      std::uniform_real_distribution<float> small(0.0f, 0.05f);
      b.data.resize(cout);
      for (float& v : b.data) v = small(rng);
      bundle.insert(vgg_weight_name(block, index), std::move(k));
      bundle.insert(vgg_bias_name(block, index), std::move(b));
    }
  }
  return bundle;
}

}  // namespace srqe
