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

#ifndef SRQE_IMAGE_HPP_
#define SRQE_IMAGE_HPP_

#include <cstddef>
#include <filesystem>
#include <vector>

namespace srqe {

// Planar raster: channel c, row y, column x lives at (c * height + y) * width + x.
// Values are nominally in [0, 1].
class ImageTensor {
 public:
  ImageTensor() = default;
  ImageTensor(int height, int width, int channels, float fill = 0.0f);

  int height() const { return height_; }
  int width() const { return width_; }
  int channels() const { return channels_; }
  bool empty() const { return values_.empty(); }

  float& at(int c, int y, int x) {
    return values_[(static_cast<std::size_t>(c) * height_ + y) * width_ + x];
  }
  float at(int c, int y, int x) const {
    return values_[(static_cast<std::size_t>(c) * height_ + y) * width_ + x];
  }

  std::vector<float>& values() { return values_; }
  const std::vector<float>& values() const { return values_; }

 private:
  int height_ = 0;
  int width_ = 0;
  int channels_ = 0;
  std::vector<float> values_;
};

// Decodes a PNG/JPEG file to RGB in [0,1] and resizes it to
// target_size x target_size. target_size <= 0 keeps the native size.
ImageTensor load_image(const std::filesystem::path& path, int target_size);

// Writes an 8-bit PNG/JPEG (chosen by extension). 1- or 3-channel input.
void save_image(const std::filesystem::path& path, const ImageTensor& image);

// Bilinear resampling with half-pixel centers (corner-aligned = false) and
// edge clamping.
ImageTensor resize_bilinear(const ImageTensor& image, int out_height, int out_width);

// ITU-R BT.601 luma.
ImageTensor to_grayscale(const ImageTensor& image);

// (1 - alpha) * a + alpha * b, pixelwise; shapes must match.
ImageTensor blend(const ImageTensor& a, const ImageTensor& b, double alpha);

// Sub-image [y0, y0+h) x [x0, x0+w).
ImageTensor crop(const ImageTensor& image, int y0, int x0, int h, int w);

}  // namespace srqe

#endif  // SRQE_IMAGE_HPP_
