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

#include "srqe/content_features.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "srqe/errors.hpp"

namespace srqe {

namespace {

int reflect101(int i, int n) {
  if (n == 1) return 0;
  const int period = 2 * (n - 1);
  i %= period;
  if (i < 0) i += period;
  return i < n ? i : period - i;
}

Eigen::VectorXd gaussian_1d(double sigma, int radius) {
  Eigen::VectorXd g(2 * radius + 1);
  for (int i = -radius; i <= radius; ++i) {
    g(i + radius) = std::exp(-(i * i) / (2.0 * sigma * sigma));
  }
  return g / g.sum();
}

// out(y, x) = sum_i taps(i) * in(y, x + i - r), or along y when vertical.
Signal2D filter_1d(const Signal2D& in, const Eigen::VectorXd& taps, bool vertical) {
  const int r = static_cast<int>(taps.size() / 2);
  const int h = static_cast<int>(in.rows());
  const int w = static_cast<int>(in.cols());
  Signal2D out(h, w);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int i = -r; i <= r; ++i) {
        acc += taps(i + r) * (vertical ? in(reflect101(y + i, h), x) : in(y, reflect101(x + i, w)));
      }
      out(y, x) = acc;
    }
  }
  return out;
}

}  // namespace

int dog_radius(double sigma, double k) {
  return static_cast<int>(std::ceil(3.0 * k * sigma - 1e-12));
}

Signal2D dog_kernel(double sigma, double k, int radius) {
  if (!(sigma > 0.0)) {
    throw InvalidInputError("DoG sigma must be positive");
  }
  if (!(k > 1.0)) {
    throw InvalidInputError("DoG scale ratio k must exceed 1");
  }
  if (radius < dog_radius(sigma, k)) {
    throw ConfigurationError("DoG radius " + std::to_string(radius) +
                             " truncates the outer Gaussian (need >= ceil(3 k sigma))");
  }
  const Eigen::VectorXd inner = gaussian_1d(sigma, radius);
  const Eigen::VectorXd outer = gaussian_1d(k * sigma, radius);
  return inner * inner.transpose() - outer * outer.transpose();
}

Signal2D gaussian_blur(const Signal2D& signal, double sigma, int radius) {
  const Eigen::VectorXd g = gaussian_1d(sigma, radius);
  return filter_1d(filter_1d(signal, g, false), g, true);
}

Signal2D convolve2d(const Signal2D& signal, const Signal2D& kernel) {
  const int kr = static_cast<int>(kernel.rows() / 2);
  const int kc = static_cast<int>(kernel.cols() / 2);
  const int h = static_cast<int>(signal.rows());
  const int w = static_cast<int>(signal.cols());
  Signal2D out(h, w);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int dy = -kr; dy <= kr; ++dy) {
        for (int dx = -kc; dx <= kc; ++dx) {
          acc += kernel(kr - dy, kc - dx) * signal(reflect101(y + dy, h), reflect101(x + dx, w));
        }
      }
      out(y, x) = acc;
    }
  }
  return out;
}

Signal2D to_signal(const ImageTensor& gray) {
  if (gray.channels() != 1) {
    throw InvalidInputError("content features expect a single-channel image");
  }
  Signal2D s(gray.height(), gray.width());
  for (int y = 0; y < gray.height(); ++y) {
    for (int x = 0; x < gray.width(); ++x) {
      s(y, x) = gray.at(0, y, x);
    }
  }
  return s;
}

DoGPyramid build_pyramid(const Signal2D& image, const PyramidParams& params) {
  if (params.scales < 1 || params.octaves < 1) {
    throw ConfigurationError("pyramid needs at least one scale and one octave");
  }
  if (params.scales > static_cast<int>(params.sigmas.size())) {
    throw ConfigurationError("more scales requested than sigma values available");
  }
  const long min_side = (1L << params.octaves) * params.patch_size;
  if (image.rows() < min_side || image.cols() < min_side) {
    throw InvalidInputError("image of " + std::to_string(image.rows()) + "x" +
                            std::to_string(image.cols()) + " is below the " +
                            std::to_string(min_side) + " px needed for " +
                            std::to_string(params.octaves) + " octaves");
  }
  DoGPyramid pyr;
  pyr.scales = params.scales;
  pyr.octaves = params.octaves;
  pyr.sigmas.assign(params.sigmas.begin(), params.sigmas.begin() + params.scales);
  pyr.k = params.k;

  Signal2D base = image;
  for (int o = 1; o <= params.octaves; ++o) {
    Signal2D last_scale = base;
    for (int z = 1; z <= params.scales; ++z) {
      const double sigma = pyr.sigmas[z - 1];
      if (sigma == 0.0) {
        pyr.signals.push_back(base);
        last_scale = base;
        continue;
      }
      const int radius = dog_radius(sigma, params.k);
      Signal2D inner = gaussian_blur(base, sigma, radius);
      const Signal2D outer = gaussian_blur(base, params.k * sigma, radius);
      pyr.signals.push_back((inner - outer).cwiseAbs());
      last_scale = std::move(inner);
    }
    if (o < params.octaves) {
      Signal2D next(last_scale.rows() / 2, last_scale.cols() / 2);
      for (Eigen::Index y = 0; y < next.rows(); ++y) {
        for (Eigen::Index x = 0; x < next.cols(); ++x) {
          next(y, x) = last_scale(2 * y, 2 * x);
        }
      }
      base = std::move(next);
    }
  }
  return pyr;
}

DoGPyramid build_pyramid(const ImageTensor& gray, const PyramidParams& params) {
  return build_pyramid(to_signal(gray), params);
}

PatchSet extract_patches(const Signal2D& signal, int patch_size, int stride) {
  if (patch_size <= 0 || stride <= 0) {
    throw InvalidInputError("patch size and stride must be positive");
  }
  const int h = static_cast<int>(signal.rows());
  const int w = static_cast<int>(signal.cols());
  if (h < patch_size || w < patch_size) {
    throw InvalidInputError("signal smaller than one patch");
  }
  const int ny = (h - patch_size) / stride + 1;
  const int nx = (w - patch_size) / stride + 1;
  const int t = patch_size * patch_size;
  PatchSet set;
  set.patch_size = patch_size;
  set.patches.resize(t, static_cast<Eigen::Index>(ny) * nx);
  set.means.reserve(static_cast<std::size_t>(ny) * nx);
  set.positions.reserve(static_cast<std::size_t>(ny) * nx);
  Eigen::Index col = 0;
  for (int gy = 0; gy < ny; ++gy) {
    for (int gx = 0; gx < nx; ++gx, ++col) {
      const int y0 = gy * stride;
      const int x0 = gx * stride;
      for (int dy = 0; dy < patch_size; ++dy) {
        for (int dx = 0; dx < patch_size; ++dx) {
          set.patches(dy * patch_size + dx, col) = signal(y0 + dy, x0 + dx);
        }
      }
      const double mean = set.patches.col(col).mean();
      set.patches.col(col).array() -= mean;
      set.means.push_back(mean);
      set.positions.emplace_back(y0, x0);
    }
  }
  return set;
}

Signal2D reconstruct_patches(const PatchSet& set, int height, int width) {
  Signal2D out = Signal2D::Zero(height, width);
  const int p = set.patch_size;
  for (Eigen::Index j = 0; j < set.size(); ++j) {
    const auto [y0, x0] = set.positions[j];
    for (int dy = 0; dy < p; ++dy) {
      for (int dx = 0; dx < p; ++dx) {
        out(y0 + dy, x0 + dx) = set.patches(dy * p + dx, j) + set.means[j];
      }
    }
  }
  return out;
}

PatchSet select_training_patches(const PatchSet& patches, int count) {
  if (patches.size() == 0) {
    throw InvalidInputError("no patches to select from");
  }
  if (count <= 0) {
    throw InvalidInputError("patch count must be positive");
  }
  const Eigen::Index n = patches.size();
  const double t = static_cast<double>(patches.patches.rows());
  std::vector<double> dev(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    dev[j] = std::sqrt(patches.patches.col(j).squaredNorm() / t);
  }
  if (*std::max_element(dev.begin(), dev.end()) == 0.0) {
    throw DegenerateInputError("every candidate patch is flat; nothing to train on");
  }
  std::vector<Eigen::Index> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index a, Eigen::Index b) { return dev[a] > dev[b]; });
  const Eigen::Index keep = std::min<Eigen::Index>(count, n);
  PatchSet out;
  out.patch_size = patches.patch_size;
  out.exhausted = keep < count;
  out.patches.resize(patches.patches.rows(), keep);
  for (Eigen::Index i = 0; i < keep; ++i) {
    const Eigen::Index j = order[i];
    out.patches.col(i) = patches.patches.col(j);
    out.means.push_back(patches.means[j]);
    out.positions.push_back(patches.positions[j]);
  }
  return out;
}

}  // namespace srqe
