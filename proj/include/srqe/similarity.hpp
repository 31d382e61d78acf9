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

#ifndef SRQE_SIMILARITY_HPP_
#define SRQE_SIMILARITY_HPP_

#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "srqe/dictlearn.hpp"

namespace srqe {

// Moore-Penrose inverse of a dictionary's atom matrix; maps a feature vector
// to its minimum-norm least-squares code.
struct CodingOperator {
  DictionaryKey key;
  Eigen::MatrixXd pinv;  // n_atoms x dim

  Eigen::Index dim() const { return pinv.cols(); }
  Eigen::Index n_atoms() const { return pinv.rows(); }
};

// SVD-based; singular values below max(dim, n_atoms) * eps * sigma_max are
// treated as zero.
CodingOperator make_operator(const Dictionary& dict);
Eigen::MatrixXd pseudo_inverse(const Eigen::MatrixXd& m);

struct PenroseResiduals {
  double reconstruct = 0.0;  // ||D D+ D - D|| / ||D||
  double inverse = 0.0;      // ||D+ D D+ - D+|| / ||D+||
};
PenroseResiduals penrose_residuals(const Eigen::MatrixXd& d, const Eigen::MatrixXd& pinv);

SparseCode encode_dense(const Eigen::VectorXd& feature, const CodingOperator& op);
inline SparseCode encode_style(const Eigen::VectorXd& style_vec, const CodingOperator& op) {
  return encode_dense(style_vec, op);
}
inline SparseCode encode_content(const Eigen::VectorXd& patch, const CodingOperator& op) {
  return encode_dense(patch, op);
}

enum class SimilarityForm {
  kAsWritten,  // (2<s,t> + eta) / (|s| |t| + eta); about 2 at identity
  kSsim,       // (2<s,t> + eta) / (|s|^2 + |t|^2 + eta); 1 at identity
};

SimilarityForm parse_similarity_form(const std::string& text);
std::string to_string(SimilarityForm form);

double code_similarity(const Eigen::VectorXd& s, const Eigen::VectorXd& t, double eta,
                       SimilarityForm form = SimilarityForm::kAsWritten);

double style_similarity(const SparseCode& s, const SparseCode& ts, double eta,
                        SimilarityForm form = SimilarityForm::kAsWritten);

// Mean of the per-patch similarity over positionally aligned codes.
double content_similarity(std::span<const SparseCode> c, std::span<const SparseCode> tc,
                          double eta, SimilarityForm form = SimilarityForm::kAsWritten);

// Column-wise variant for patch matrices already coded in bulk.
double content_similarity(const Eigen::MatrixXd& c, const Eigen::MatrixXd& tc, double eta,
                          SimilarityForm form = SimilarityForm::kAsWritten);

}  // namespace srqe

#endif  // SRQE_SIMILARITY_HPP_
