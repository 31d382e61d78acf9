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

#include "srqe/pooling.hpp"

#include <cmath>

#include "srqe/errors.hpp"

namespace srqe {

PoolingMode parse_pooling_mode(const std::string& text) {
  if (text == "multiplication") return PoolingMode::kMultiplication;
  if (text == "summation") return PoolingMode::kSummation;
  if (text == "combination") return PoolingMode::kCombination;
  throw InvalidInputError("unknown pooling mode '" + text + "'");
}

std::string to_string(PoolingMode mode) {
  switch (mode) {
    case PoolingMode::kMultiplication:
      return "multiplication";
    case PoolingMode::kSummation:
      return "summation";
    case PoolingMode::kCombination:
      return "combination";
  }
  return "multiplication";
}

double pool_style(std::span<const double> ss_per_layer) {
  if (ss_per_layer.empty()) {
    throw InvalidInputError("no layer similarities to pool");
  }
  double q = 1.0;
  for (double s : ss_per_layer) q *= s;
  return q;
}

double pool_content(const ContentGrid& cs, int scales, int octaves, bool normalized) {
  if (scales < 1 || octaves < 1) {
    throw InvalidInputError("content pooling needs at least one scale and octave");
  }
  double q = 1.0;
  for (int o = 1; o <= octaves; ++o) {
    double sum = 0.0;
    for (int z = 1; z <= scales; ++z) {
      auto it = cs.find({z, o});
      if (it == cs.end()) {
        throw InvalidInputError("content similarity missing for scale " + std::to_string(z) +
                                ", octave " + std::to_string(o));
      }
      sum += it->second;
    }
    q *= sum;
  }
  const double norm = normalized ? std::pow(static_cast<double>(scales), octaves)
                                 : static_cast<double>(scales) * scales;
  return q / norm;
}

double pool_overall(double q_content, double q_style, double w1, double w2) {
  if (!(q_content > 0.0) || !(q_style > 0.0)) {
    throw InvalidInputError("multiplicative pooling needs positive quality scores");
  }
  return std::pow(q_content, w1) * std::pow(q_style, w2);
}

double pool_overall_combination(double q_content, double q_style, double c, double d,
                                double w1, double w2, double w3, double w4) {
  if (!(q_content > 0.0) || !(q_style > 0.0)) {
    throw InvalidInputError("pooling needs positive quality scores");
  }
  return c * std::pow(q_content, w1) * std::pow(q_style, w2) +
         d * (w3 * q_content + w4 * q_style);
}

double pool_overall(double q_content, double q_style, const PoolingParams& p) {
  switch (p.mode) {
    case PoolingMode::kMultiplication:
      return pool_overall(q_content, q_style, p.w1, p.w2);
    case PoolingMode::kSummation:
      return pool_overall_combination(q_content, q_style, 0.0, 1.0, p.w1, p.w2, p.w3, p.w4);
    case PoolingMode::kCombination:
      return pool_overall_combination(q_content, q_style, p.c, p.d, p.w1, p.w2, p.w3, p.w4);
  }
  return 0.0;
}

}  // namespace srqe
