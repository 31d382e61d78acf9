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

#include "srqe/similarity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/SVD>

#include "srqe/errors.hpp"

namespace srqe {

Eigen::MatrixXd pseudo_inverse(const Eigen::MatrixXd& m) {
  if (m.size() == 0) {
    throw InvalidInputError("pseudo-inverse of an empty matrix");
  }
  if (!m.allFinite()) {
    throw InvalidInputError("invalid dictionary: non-finite atoms");
  }
  Eigen::BDCSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& sv = svd.singularValues();
  const double rcond = static_cast<double>(std::max(m.rows(), m.cols())) *
                       std::numeric_limits<double>::epsilon();
  const double cutoff = sv.size() > 0 ? rcond * sv(0) : 0.0;
  Eigen::VectorXd inv = Eigen::VectorXd::Zero(sv.size());
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > cutoff) inv(i) = 1.0 / sv(i);
  }
  return svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
}

CodingOperator make_operator(const Dictionary& dict) {
  CodingOperator op;
  op.key = dict.key;
  op.pinv = pseudo_inverse(dict.atoms);
  return op;
}

PenroseResiduals penrose_residuals(const Eigen::MatrixXd& d, const Eigen::MatrixXd& pinv) {
  PenroseResiduals r;
  r.reconstruct = (d * pinv * d - d).norm() / std::max(d.norm(), 1e-300);
  r.inverse = (pinv * d * pinv - pinv).norm() / std::max(pinv.norm(), 1e-300);
  return r;
}

SparseCode encode_dense(const Eigen::VectorXd& feature, const CodingOperator& op) {
  if (feature.size() != op.dim()) {
    throw InvalidInputError("feature length " + std::to_string(feature.size()) +
                            " does not match operator input " + std::to_string(op.dim()));
  }
  SparseCode code;
  code.coefficients = op.pinv * feature;
  for (Eigen::Index i = 0; i < code.coefficients.size(); ++i) {
    if (code.coefficients(i) != 0.0) code.support.push_back(i);
  }
  return code;
}

SimilarityForm parse_similarity_form(const std::string& text) {
  if (text == "as-written") return SimilarityForm::kAsWritten;
  if (text == "ssim-form") return SimilarityForm::kSsim;
  throw InvalidInputError("unknown similarity form '" + text +
                          "' (expected as-written or ssim-form)");
}

std::string to_string(SimilarityForm form) {
  return form == SimilarityForm::kAsWritten ? "as-written" : "ssim-form";
}

double code_similarity(const Eigen::VectorXd& s, const Eigen::VectorXd& t, double eta,
                       SimilarityForm form) {
  if (s.size() != t.size()) {
    throw InvalidInputError("similarity of codes with different lengths");
  }
  const double num = 2.0 * s.dot(t) + eta;
  if (form == SimilarityForm::kAsWritten) {
    return num / (s.norm() * t.norm() + eta);
  }
  return num / (s.squaredNorm() + t.squaredNorm() + eta);
}

double style_similarity(const SparseCode& s, const SparseCode& ts, double eta,
                        SimilarityForm form) {
  return code_similarity(s.coefficients, ts.coefficients, eta, form);
}

double content_similarity(std::span<const SparseCode> c, std::span<const SparseCode> tc,
                          double eta, SimilarityForm form) {
  if (c.empty() || c.size() != tc.size()) {
    throw InvalidInputError("content similarity needs equal, non-empty patch grids");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    sum += code_similarity(c[i].coefficients, tc[i].coefficients, eta, form);
  }
  return sum / static_cast<double>(c.size());
}

double content_similarity(const Eigen::MatrixXd& c, const Eigen::MatrixXd& tc, double eta,
                          SimilarityForm form) {
  if (c.cols() == 0 || c.rows() != tc.rows() || c.cols() != tc.cols()) {
    throw InvalidInputError("content similarity needs equal, non-empty patch grids");
  }
  double sum = 0.0;
  for (Eigen::Index j = 0; j < c.cols(); ++j) {
    sum += code_similarity(c.col(j), tc.col(j), eta, form);
  }
  return sum / static_cast<double>(c.cols());
}

}  // namespace srqe
