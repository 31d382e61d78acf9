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

#ifndef SRQE_STYLE_FEATURES_HPP_
#define SRQE_STYLE_FEATURES_HPP_

#include <array>
#include <vector>

#include <Eigen/Core>

#include "srqe/image.hpp"
#include "srqe/vgg.hpp"

namespace srqe {

struct GramMatrix {
  int layer = 0;
  Eigen::MatrixXd values;  // C x C, symmetric PSD
};

struct StyleVector {
  int layer = 0;
  Eigen::VectorXd values;  // length C
};

// Columns are style vectors of one layer, one per training tile.
struct StyleMatrix {
  int layer = 0;
  Eigen::MatrixXd columns;  // C x N

  Eigen::Index sample_count() const { return columns.cols(); }
};

// Default tile grids: 2x2, 2x2, 3x3, 4x4, 4x4.
inline constexpr std::array<int, 5> kDefaultBlocksPerLayer = {4, 4, 9, 16, 16};

// Unnormalized F' F'^T over the flattened C x HW feature map.
GramMatrix gram(const FeatureMap& feature);

// Row means of the Gram matrix (G times the uniform 1/C vector).
StyleVector style_vector(const GramMatrix& g);

// Style vectors of the five tap points for a whole image.
std::vector<StyleVector> style_vectors(const ImageTensor& image, const Vgg16Features& net);

// Layer l's matrix gathers one style vector per tile when every image is cut
// into blocks_per_layer[l] equal square tiles (perfect squares only).
std::vector<StyleMatrix> build_style_matrix(const std::vector<ImageTensor>& images,
                                            const Vgg16Features& net,
                                            const std::array<int, 5>& blocks_per_layer);

}  // namespace srqe

#endif  // SRQE_STYLE_FEATURES_HPP_
