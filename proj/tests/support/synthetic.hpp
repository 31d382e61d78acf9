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

// Deterministic procedural images for tests: smooth "photographic" scenes
// for content and strongly patterned textures for style.

#ifndef SRQE_TESTS_SYNTHETIC_HPP_
#define SRQE_TESTS_SYNTHETIC_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>

#include "srqe/image.hpp"

namespace srqe::testing {

// Overlapping soft-edged discs and rectangles over a two-colour gradient.
inline ImageTensor scene_image(std::uint64_t seed, int size) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<float> u(0.0f, 1.0f);
  ImageTensor img(size, size, 3);
  float top[3], bottom[3];
  for (int c = 0; c < 3; ++c) {
    top[c] = u(rng);
    bottom[c] = u(rng);
  }
  for (int y = 0; y < size; ++y) {
    const float t = static_cast<float>(y) / size;
    for (int x = 0; x < size; ++x) {
      for (int c = 0; c < 3; ++c) img.at(c, y, x) = (1 - t) * top[c] + t * bottom[c];
    }
  }
  const int shapes = 6 + static_cast<int>(rng() % 5);
  for (int s = 0; s < shapes; ++s) {
    const float cx = u(rng) * size, cy = u(rng) * size;
    const float r = (0.08f + 0.22f * u(rng)) * size;
    const bool disc = rng() % 2 == 0;
    float col[3] = {u(rng), u(rng), u(rng)};
    for (int y = 0; y < size; ++y) {
      for (int x = 0; x < size; ++x) {
        float d;
        if (disc) {
          d = std::hypot(x - cx, y - cy) - r;
        } else {
          d = std::max(std::abs(x - cx), std::abs(y - cy) * 0.6f) - r;
        }
        const float a = std::clamp(0.5f - d / 1.5f, 0.0f, 1.0f);
        for (int c = 0; c < 3; ++c) img.at(c, y, x) = (1 - a) * img.at(c, y, x) + a * col[c];
      }
    }
  }
  return img;
}

// High-frequency oriented stripes, dots and colour noise.
inline ImageTensor texture_image(std::uint64_t seed, int size) {
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  std::uniform_real_distribution<float> u(0.0f, 1.0f);
  ImageTensor img(size, size, 3);
  const float freq = 0.15f + 0.5f * u(rng);
  const float theta = 3.14159265f * u(rng);
  const float dot_period = 5.0f + 10.0f * u(rng);
  float a[3], b[3];
  for (int c = 0; c < 3; ++c) {
    a[c] = u(rng);
    b[c] = u(rng);
  }
  std::normal_distribution<float> noise(0.0f, 0.08f);
  for (int y = 0; y < size; ++y) {
    for (int x = 0; x < size; ++x) {
      const float p = x * std::cos(theta) + y * std::sin(theta);
      const float stripe = 0.5f + 0.5f * std::sin(freq * p);
      const float dx = std::fmod(static_cast<float>(x), dot_period) - dot_period / 2;
      const float dy = std::fmod(static_cast<float>(y), dot_period) - dot_period / 2;
      const float dot = std::hypot(dx, dy) < dot_period / 4 ? 1.0f : 0.0f;
      for (int c = 0; c < 3; ++c) {
        const float v = stripe * a[c] + (1 - stripe) * b[c] + 0.3f * dot * (1 - a[c]) + noise(rng);
        img.at(c, y, x) = std::clamp(v, 0.0f, 1.0f);
      }
    }
  }
  return img;
}

// Uniform noise, the "unrelated" stylization.
inline ImageTensor noise_image(std::uint64_t seed, int size) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<float> u(0.0f, 1.0f);
  ImageTensor img(size, size, 3);
  for (float& v : img.values()) v = u(rng);
  return img;
}

}  // namespace srqe::testing

#endif  // SRQE_TESTS_SYNTHETIC_HPP_
