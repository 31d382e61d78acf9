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

#ifndef SRQE_CONFIG_HPP_
#define SRQE_CONFIG_HPP_

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "srqe/content_features.hpp"
#include "srqe/dictlearn.hpp"
#include "srqe/pooling.hpp"
#include "srqe/similarity.hpp"

namespace srqe {

struct RunConfig {
  std::filesystem::path weights;
  std::filesystem::path style_dict;
  std::filesystem::path content_dict;

  int image_size = 512;
  int scales = 3;   // Z
  int octaves = 4;  // O
  std::vector<double> sigmas = {0.0, 1.0, 1.6, 2.56, 4.096};
  double k = 1.6;
  int patch_size = 6;
  int train_stride = 3;

  int tau = 8;
  int epochs = 10;
  int batch_size = 256;
  std::array<int, 5> style_atoms = kDefaultStyleAtoms;        // U
  std::array<int, 5> style_blocks = kDefaultBlocksPerLayer;
  int content_atoms = 256;    // V
  int train_patches = 1000;   // K

  double eta = 1e-4;
  PoolingParams pooling;
  SimilarityForm similarity_form = SimilarityForm::kAsWritten;

  std::uint64_t seed = 0;
  int workers = 1;

  PyramidParams pyramid() const;
  TrainOptions train_options() const;
  ContentTrainParams content_train_params() const;

  // Applies one `key = value` assignment (value in TOML syntax: bare
  // number, true/false, "string" or [array]). Unknown keys are an error.
  void set(const std::string& key, const std::string& value);

  // Range checks: scales <= 5 and <= len(sigmas), octaves >= 1,
  // patch_size in {6, 8}, pooling weights > 0, eta > 0, k > 1.
  void validate() const;
  // Existence checks for the files a command needs.
  void require_files(bool weights_file, bool style_file, bool content_file) const;

  nlohmann::json to_json() const;
};

// Flat key-value file (a TOML subset): `key = value` lines, `#` comments,
// optional [section] headers are ignored.
RunConfig load_config(const std::filesystem::path& path);
void apply_config_text(RunConfig& config, const std::string& text, const std::string& origin);

}  // namespace srqe

#endif  // SRQE_CONFIG_HPP_
