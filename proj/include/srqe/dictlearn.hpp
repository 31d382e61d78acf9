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

#ifndef SRQE_DICTLEARN_HPP_
#define SRQE_DICTLEARN_HPP_

#include <array>
#include <cstdint>
#include <filesystem>
#include <vector>

#include <Eigen/Core>

#include "srqe/content_features.hpp"
#include "srqe/style_features.hpp"

namespace srqe {

enum class DictionaryKind : std::uint8_t { kStyle = 0, kContent = 1 };

// (layer, 0) for style dictionaries, (z, o) for content ones; 1-based.
struct DictionaryKey {
  std::uint32_t first = 0;
  std::uint32_t second = 0;

  friend bool operator==(const DictionaryKey&, const DictionaryKey&) = default;
  friend auto operator<=>(const DictionaryKey&, const DictionaryKey&) = default;
};

// Atom matrix with unit-norm columns. Atom values are representable in f32 so
// that persistence round-trips exactly.
struct Dictionary {
  DictionaryKind kind = DictionaryKind::kStyle;
  DictionaryKey key;
  Eigen::MatrixXd atoms;  // dim x n_atoms
  std::uint32_t tau = 0;
  std::uint64_t seed = 0;

  Eigen::Index dim() const { return atoms.rows(); }
  Eigen::Index n_atoms() const { return atoms.cols(); }
};

struct DictionarySet {
  DictionaryKind kind = DictionaryKind::kStyle;
  std::vector<Dictionary> entries;

  // nullptr when absent.
  const Dictionary* find(DictionaryKey key) const;
};

// "SRQEDIC1" | u8 kind | u32 count | per entry: u32 key.first, u32
// key.second, u32 dim, u32 n_atoms, u32 tau, u64 seed, f32 column-major
// atoms. Little-endian.
void save_dictionaries(const std::filesystem::path& path, const DictionarySet& set);
DictionarySet load_dictionaries(const std::filesystem::path& path);

struct SparseCode {
  Eigen::VectorXd coefficients;
  std::vector<Eigen::Index> support;  // ascending
};

// Greedy orthogonal matching pursuit against a fixed atom matrix. Caches the
// atom Gram matrix so repeated encodes only pay for D^T y.
class OmpCoder {
 public:
  explicit OmpCoder(const Eigen::MatrixXd& atoms);

  // Stops after tau atoms, when the residual norm drops below 1e-9, or when
  // the next atom is numerically dependent on the support. residual_norms,
  // when given, receives ||y|| followed by the norm after each selection.
  SparseCode encode(const Eigen::VectorXd& signal, int tau,
                    std::vector<double>* residual_norms = nullptr) const;

  const Eigen::MatrixXd& atoms() const { return atoms_; }

 private:
  Eigen::MatrixXd atoms_;
  Eigen::MatrixXd gram_;
};

SparseCode omp_encode(const Eigen::VectorXd& signal, const Dictionary& dict, int tau,
                      std::vector<double>* residual_norms = nullptr);

struct OdlParams {
  int n_atoms = 256;
  int tau = 8;
  int epochs = 10;
  int batch_size = 256;
  std::uint64_t seed = 0;
  // Permit repeating samples at initialization when there are fewer distinct
  // non-zero samples than atoms.
  bool allow_duplicates = false;
};

struct OdlReport {
  // Mean ||y - D a|| over all samples after each epoch, for the dictionary
  // kept at that point.
  std::vector<double> epoch_errors;
  // Same measure for each epoch's candidate dictionary before the
  // accept/reject step.
  std::vector<double> candidate_errors;
  std::vector<bool> accepted;
  int reseeded_atoms = 0;
  bool undersampled = false;  // fewer distinct samples than atoms
};

// Online dictionary learning with sufficient statistics A = sum a a^T,
// B = sum y a^T and block-coordinate atom updates after every mini-batch.
// Initial atoms are samples with pairwise distinct directions. Atoms unused
// during an epoch, or collinear with an earlier atom, are reseeded from the
// worst-reconstructed samples; an epoch whose dictionary reconstructs worse than the kept one is
// rolled back. Deterministic for a given (samples, params).
Dictionary odl_train(const Eigen::MatrixXd& samples, const OdlParams& params,
                     OdlReport* report = nullptr);

// Mean reconstruction error of OMP codes over the sample columns.
double mean_reconstruction_error(const Eigen::MatrixXd& samples, const Eigen::MatrixXd& atoms,
                                 int tau);

inline constexpr std::array<int, 5> kDefaultStyleAtoms = {256, 256, 512, 1024, 1024};

struct TrainOptions {
  int tau = 8;
  int epochs = 10;
  int batch_size = 256;
  std::uint64_t seed = 0;
  bool allow_duplicates = false;
};

// One dictionary per layer with atoms[l] columns.
DictionarySet train_style_dicts(const std::vector<StyleMatrix>& style_matrices,
                                const std::array<int, 5>& atoms, const TrainOptions& options,
                                std::vector<OdlReport>* reports = nullptr);

struct ContentTrainParams {
  PyramidParams pyramid;
  int atoms = 256;            // V
  int patches_per_key = 1000; // K
  int stride = 3;             // overlapping training grid
};

// One T x V dictionary per (z, o), trained on the K highest-deviation patches
// pooled across all images at that pyramid position.
DictionarySet train_content_dicts(const std::vector<ImageTensor>& gray_images,
                                  const ContentTrainParams& params, const TrainOptions& options,
                                  std::vector<OdlReport>* reports = nullptr,
                                  bool* exhausted = nullptr);

}  // namespace srqe

#endif  // SRQE_DICTLEARN_HPP_
