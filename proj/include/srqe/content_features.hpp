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

#ifndef SRQE_CONTENT_FEATURES_HPP_
#define SRQE_CONTENT_FEATURES_HPP_

#include <utility>
#include <vector>

#include <Eigen/Core>

#include "srqe/image.hpp"

namespace srqe {

// 2-D real signal; rows index y.
using Signal2D = Eigen::MatrixXd;

struct PyramidParams {
  int scales = 3;   // Z
  int octaves = 4;  // O
  std::vector<double> sigmas = {0.0, 1.0, 1.6, 2.56, 4.096};
  double k = 1.6;
  int patch_size = 6;
};

// Absolute DoG responses indexed by (scale z, octave o), both 1-based.
struct DoGPyramid {
  int scales = 0;
  int octaves = 0;
  std::vector<double> sigmas;
  double k = 0.0;
  std::vector<Signal2D> signals;  // octave-major: (o - 1) * scales + (z - 1)

  const Signal2D& at(int z, int o) const { return signals[(o - 1) * scales + (z - 1)]; }
};

struct PatchSet {
  int patch_size = 0;
  Eigen::MatrixXd patches;  // T x n, every column zero-mean
  std::vector<double> means;
  std::vector<std::pair<int, int>> positions;  // (y, x) of the top-left corner
  bool exhausted = false;  // fewer patches than requested were available

  Eigen::Index size() const { return patches.cols(); }
};

// Difference of two Gaussians (sigma and k*sigma) sampled on
// [-radius, radius]^2, each normalized to unit sum before subtracting.
Signal2D dog_kernel(double sigma, double k, int radius);
// Smallest radius dog_kernel accepts: ceil(3 k sigma).
int dog_radius(double sigma, double k);

// Separable Gaussian blur with reflect-101 boundary handling; kernel
// normalized to unit sum.
Signal2D gaussian_blur(const Signal2D& signal, double sigma, int radius);

// Convolution with an arbitrary odd kernel, reflect-101 boundary. Slow path
// kept for checking the separable route.
Signal2D convolve2d(const Signal2D& signal, const Signal2D& kernel);

Signal2D to_signal(const ImageTensor& gray);

// sigma = 0 keeps the raw intensities; sigma > 0 is |DoG * I|. The Gaussian
// at the last retained scale, decimated by two, seeds the next octave.
DoGPyramid build_pyramid(const Signal2D& image, const PyramidParams& params);
DoGPyramid build_pyramid(const ImageTensor& gray, const PyramidParams& params);

PatchSet extract_patches(const Signal2D& signal, int patch_size, int stride);

// Places patches (plus their means) back on the grid; later patches overwrite
// overlaps. Identity with extract_patches when stride == patch_size.
Signal2D reconstruct_patches(const PatchSet& set, int height, int width);

// Keeps the `count` highest-deviation patches, in descending deviation order.
PatchSet select_training_patches(const PatchSet& patches, int count);

}  // namespace srqe

#endif  // SRQE_CONTENT_FEATURES_HPP_
