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

#include "srqe/image.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>

#include "srqe/errors.hpp"

namespace srqe {

ImageTensor::ImageTensor(int height, int width, int channels, float fill)
    : height_(height), width_(width), channels_(channels) {
  if (height <= 0 || width <= 0 || channels <= 0) {
    throw InvalidInputError("image dimensions must be positive");
  }
  values_.assign(static_cast<std::size_t>(height) * width * channels, fill);
}

ImageTensor load_image(const std::filesystem::path& path, int target_size) {
  if (!std::filesystem::exists(path)) {
    throw DecodeError("image not found: " + path.string());
  }
  cv::Mat bgr = cv::imread(path.string(), cv::IMREAD_COLOR);
  if (bgr.empty()) {
    throw DecodeError("cannot decode image: " + path.string());
  }
  if (bgr.rows == 0 || bgr.cols == 0) {
    throw InvalidInputError("zero-dimension image: " + path.string());
  }
  const double scale = bgr.depth() == CV_16U ? 1.0 / 65535.0 : 1.0 / 255.0;
  ImageTensor rgb(bgr.rows, bgr.cols, 3);
  for (int y = 0; y < bgr.rows; ++y) {
    for (int x = 0; x < bgr.cols; ++x) {
      for (int c = 0; c < 3; ++c) {
        double v = bgr.depth() == CV_16U ? bgr.at<cv::Vec3w>(y, x)[2 - c]
                                         : bgr.at<cv::Vec3b>(y, x)[2 - c];
        rgb.at(c, y, x) = static_cast<float>(v * scale);
      }
    }
  }
  if (target_size <= 0 || (rgb.height() == target_size && rgb.width() == target_size)) {
    return rgb;
  }
  return resize_bilinear(rgb, target_size, target_size);
}

void save_image(const std::filesystem::path& path, const ImageTensor& image) {
  if (image.channels() != 1 && image.channels() != 3) {
    throw InvalidInputError("save_image expects 1 or 3 channels");
  }
  cv::Mat out(image.height(), image.width(), image.channels() == 3 ? CV_8UC3 : CV_8UC1);
  for (int y = 0; y < image.height(); ++y) {
    for (int x = 0; x < image.width(); ++x) {
      for (int c = 0; c < image.channels(); ++c) {
        const float v = std::clamp(image.at(c, y, x), 0.0f, 1.0f);
        const auto b = static_cast<unsigned char>(std::lround(v * 255.0f));
        if (image.channels() == 3) {
          out.at<cv::Vec3b>(y, x)[2 - c] = b;
        } else {
          out.at<unsigned char>(y, x) = b;
        }
      }
    }
  }
  if (!cv::imwrite(path.string(), out)) {
    throw InvalidInputError("cannot write image: " + path.string());
  }
}

namespace {

struct Tap {
  int lo;
  int hi;
  float frac;
};

std::vector<Tap> linear_taps(int in_size, int out_size) {
  std::vector<Tap> taps(out_size);
  const double scale = static_cast<double>(in_size) / out_size;
  for (int i = 0; i < out_size; ++i) {
    double src = (i + 0.5) * scale - 0.5;
    src = std::clamp(src, 0.0, static_cast<double>(in_size - 1));
    const int lo = static_cast<int>(std::floor(src));
    const int hi = std::min(lo + 1, in_size - 1);
    taps[i] = {lo, hi, static_cast<float>(src - lo)};
  }
  return taps;
}

}  // namespace

ImageTensor resize_bilinear(const ImageTensor& image, int out_height, int out_width) {
  if (image.empty() || out_height <= 0 || out_width <= 0) {
    throw InvalidInputError("resize of an empty image or to an empty size");
  }
  const auto ty = linear_taps(image.height(), out_height);
  const auto tx = linear_taps(image.width(), out_width);
  ImageTensor out(out_height, out_width, image.channels());
  for (int c = 0; c < image.channels(); ++c) {
    for (int y = 0; y < out_height; ++y) {
      const Tap& vy = ty[y];
      for (int x = 0; x < out_width; ++x) {
        const Tap& vx = tx[x];
        const float top = image.at(c, vy.lo, vx.lo) * (1.0f - vx.frac) +
                          image.at(c, vy.lo, vx.hi) * vx.frac;
        const float bottom = image.at(c, vy.hi, vx.lo) * (1.0f - vx.frac) +
                             image.at(c, vy.hi, vx.hi) * vx.frac;
        out.at(c, y, x) = top * (1.0f - vy.frac) + bottom * vy.frac;
      }
    }
  }
  return out;
}

ImageTensor to_grayscale(const ImageTensor& image) {
  if (image.channels() == 1) {
    return image;
  }
  if (image.channels() != 3) {
    throw InvalidInputError("grayscale conversion expects 3 channels");
  }
  ImageTensor gray(image.height(), image.width(), 1);
  for (int y = 0; y < image.height(); ++y) {
    for (int x = 0; x < image.width(); ++x) {
      gray.at(0, y, x) = 0.299f * image.at(0, y, x) + 0.587f * image.at(1, y, x) +
                         0.114f * image.at(2, y, x);
    }
  }
  return gray;
}

ImageTensor blend(const ImageTensor& a, const ImageTensor& b, double alpha) {
  if (a.height() != b.height() || a.width() != b.width() || a.channels() != b.channels()) {
    throw InvalidInputError("blend requires images of identical shape");
  }
  ImageTensor out = a;
  const float wa = static_cast<float>(1.0 - alpha);
  const float wb = static_cast<float>(alpha);
  auto& v = out.values();
  const auto& bv = b.values();
  for (std::size_t i = 0; i < v.size(); ++i) {
    v[i] = wa * v[i] + wb * bv[i];
  }
  return out;
}

ImageTensor crop(const ImageTensor& image, int y0, int x0, int h, int w) {
  if (y0 < 0 || x0 < 0 || h <= 0 || w <= 0 || y0 + h > image.height() ||
      x0 + w > image.width()) {
    throw InvalidInputError("crop window outside the image");
  }
  ImageTensor out(h, w, image.channels());
  for (int c = 0; c < image.channels(); ++c) {
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        out.at(c, y, x) = image.at(c, y0 + y, x0 + x);
      }
    }
  }
  return out;
}

}  // namespace srqe
