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

#ifndef SRQE_POOLING_HPP_
#define SRQE_POOLING_HPP_

#include <map>
#include <span>
#include <string>
#include <utility>

namespace srqe {

// Content similarity per (z, o), both 1-based.
using ContentGrid = std::map<std::pair<int, int>, double>;

enum class PoolingMode { kMultiplication, kSummation, kCombination };

PoolingMode parse_pooling_mode(const std::string& text);
std::string to_string(PoolingMode mode);

struct PoolingParams {
  PoolingMode mode = PoolingMode::kMultiplication;
  double w1 = 0.4;
  double w2 = 0.6;
  double w3 = 0.4;
  double w4 = 0.6;
  double c = 1.0;  // combination weights; multiplication is (1, 0), summation (0, 1)
  double d = 0.0;
  bool normalized_content = false;  // divide by Z^O instead of Z^2
};

struct QualityTriple {
  double q_content = 0.0;
  double q_style = 0.0;
  double q_overall = 0.0;
};

// Product of the per-layer similarities.
double pool_style(std::span<const double> ss_per_layer);

// (1/Z^2) * prod_o sum_z CS(z, o); with normalized = true the prefactor is 1/Z^O.
double pool_content(const ContentGrid& cs, int scales, int octaves, bool normalized = false);

// q_content^w1 * q_style^w2.
double pool_overall(double q_content, double q_style, double w1, double w2);

// c * q_content^w1 * q_style^w2 + d * (w3 q_content + w4 q_style).
double pool_overall_combination(double q_content, double q_style, double c, double d,
                                double w1, double w2, double w3, double w4);

// Dispatches on params.mode.
double pool_overall(double q_content, double q_style, const PoolingParams& params);

}  // namespace srqe

#endif  // SRQE_POOLING_HPP_
