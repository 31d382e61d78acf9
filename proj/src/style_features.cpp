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

#include "srqe/style_features.hpp"

#include <cmath>
#include <map>
#include <string>

#include "srqe/errors.hpp"

namespace srqe {

namespace {

constexpr Eigen::Index kGramChunk = 16384;

void check_symmetric([[maybe_unused]] const Eigen::MatrixXd& g) {
#ifdef SRQE_CHECK_INVARIANTS
  const double scale = std::max(g.cwiseAbs().maxCoeff(), 1e-300);
  if ((g - g.transpose()).cwiseAbs().maxCoeff() > 1e-5 * scale) {
    throw std::logic_error("Gram matrix lost symmetry");
  }
#endif
}

int grid_side(int blocks) {
  const int side = static_cast<int>(std::lround(std::sqrt(static_cast<double>(blocks))));
  if (blocks <= 0 || side * side != blocks) {
    throw ConfigurationError("blocks per layer must be a perfect square, got " +
                             std::to_string(blocks));
  }
  return side;
}

}  // namespace

GramMatrix gram(const FeatureMap& feature) {
  const Eigen::Index c = feature.values.rows();
  const Eigen::Index n = feature.values.cols();
  if (c == 0 || n == 0) {
    throw InvalidInputError("Gram of an empty feature map");
  }
  GramMatrix g;
  g.layer = feature.layer;
  g.values = Eigen::MatrixXd::Zero(c, c);
  // Accumulate in double over column chunks to bound the cast copy.
  for (Eigen::Index start = 0; start < n; start += kGramChunk) {
    const Eigen::Index len = std::min(kGramChunk, n - start);
    const Eigen::MatrixXd chunk = feature.values.middleCols(start, len).cast<double>();
    g.values.selfadjointView<Eigen::Lower>().rankUpdate(chunk);
  }
  g.values.triangularView<Eigen::StrictlyUpper>() = g.values.transpose();
  check_symmetric(g.values);
  return g;
}

StyleVector style_vector(const GramMatrix& g) {
  if (g.values.rows() != g.values.cols() || g.values.rows() == 0) {
    throw InvalidInputError("style vector needs a non-empty square Gram matrix");
  }
  StyleVector v;
  v.layer = g.layer;
  v.values = g.values.rowwise().mean();
  return v;
}

std::vector<StyleVector> style_vectors(const ImageTensor& image, const Vgg16Features& net) {
  std::vector<StyleVector> out;
  for (const FeatureMap& f : net.extract(image)) {
    out.push_back(style_vector(gram(f)));
  }
  return out;
}

std::vector<StyleMatrix> build_style_matrix(const std::vector<ImageTensor>& images,
                                            const Vgg16Features& net,
                                            const std::array<int, 5>& blocks_per_layer) {
  if (images.empty()) {
    throw InvalidInputError("style matrix needs at least one training image");
  }
  std::array<int, 5> sides{};
  for (int l = 0; l < 5; ++l) {
    sides[l] = grid_side(blocks_per_layer[l]);
  }
  std::vector<StyleMatrix> matrices(5);
  for (int l = 0; l < 5; ++l) {
    matrices[l].layer = l + 1;
    matrices[l].columns.resize(kVggLayerWidths[l],
                               static_cast<Eigen::Index>(images.size()) * blocks_per_layer[l]);
  }
  std::array<Eigen::Index, 5> filled{};
  for (const ImageTensor& image : images) {
    // One forward pass per distinct grid; layers sharing a grid share tiles.
    std::map<int, std::vector<std::vector<FeatureMap>>> by_side;
    for (int l = 0; l < 5; ++l) {
      const int side = sides[l];
      if (by_side.count(side)) continue;
      const int th = image.height() / side;
      const int tw = image.width() / side;
      if (th < kMinNetworkInput || tw < kMinNetworkInput) {
        throw ConfigurationError("style tile of " + std::to_string(th) + "x" +
                                 std::to_string(tw) + " px is below the network minimum of " +
                                 std::to_string(kMinNetworkInput) + " px");
      }
      auto& tiles = by_side[side];
      for (int ty = 0; ty < side; ++ty) {
        for (int tx = 0; tx < side; ++tx) {
          tiles.push_back(net.extract(crop(image, ty * th, tx * tw, th, tw)));
        }
      }
    }
    for (int l = 0; l < 5; ++l) {
      for (const auto& taps : by_side[sides[l]]) {
        matrices[l].columns.col(filled[l]++) = style_vector(gram(taps[l])).values;
      }
    }
  }
  for (const StyleMatrix& m : matrices) {
    int zero_columns = 0;
    for (Eigen::Index j = 0; j < m.columns.cols(); ++j) {
      if (m.columns.col(j).isZero(0.0)) ++zero_columns;
    }
    if (zero_columns > 1) {
      throw DegenerateInputError("layer " + std::to_string(m.layer) +
                                 " produced several all-zero style vectors");
    }
  }
  return matrices;
}

}  // namespace srqe
