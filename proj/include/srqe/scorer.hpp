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

#ifndef SRQE_SCORER_HPP_
#define SRQE_SCORER_HPP_

#include <array>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "srqe/config.hpp"
#include "srqe/dictlearn.hpp"
#include "srqe/image.hpp"
#include "srqe/pooling.hpp"
#include "srqe/similarity.hpp"
#include "srqe/vgg.hpp"

namespace srqe {

struct ScoreDetail {
  QualityTriple quality;
  // False when multiplicative pooling saw a non-positive factor; q_overall
  // is then NaN.
  bool overall_defined = true;
  std::array<double, 5> style_similarity{};
  ContentGrid content_similarity;
  std::vector<std::string> warnings;
};

// Full-reference scoring of (content, style, stylized) triples. Holds the
// network and all coding operators; const member functions are safe to call
// from several threads at once.
class Scorer {
 public:
  // Throws ConfigurationError when a dictionary does not fit the
  // configuration (wrong kind, missing key, wrong atom length).
  Scorer(RunConfig config, WeightBundle weights, const DictionarySet& style,
         const DictionarySet& content);

  // Loads weights and dictionaries named in the config.
  static Scorer from_config(const RunConfig& config);

  // The stylized image is resampled to the content image's size when they
  // differ, so that content patch grids align.
  ScoreDetail score(const ImageTensor& content, const ImageTensor& style,
                    const ImageTensor& stylized) const;
  ScoreDetail score_files(const std::filesystem::path& content,
                          const std::filesystem::path& style,
                          const std::filesystem::path& stylized) const;

  // Style similarity per layer only.
  std::array<double, 5> style_similarities(const ImageTensor& style,
                                           const ImageTensor& stylized) const;
  // Content similarity grid only.
  ContentGrid content_similarities(const ImageTensor& content,
                                   const ImageTensor& stylized) const;

  const RunConfig& config() const { return config_; }
  const std::vector<CodingOperator>& style_operators() const { return style_ops_; }
  const std::map<DictionaryKey, CodingOperator>& content_operators() const {
    return content_ops_;
  }

  nlohmann::json metadata() const;

 private:
  RunConfig config_;
  Vgg16Features net_;
  std::vector<CodingOperator> style_ops_;
  std::map<DictionaryKey, CodingOperator> content_ops_;
  std::uint32_t style_tau_ = 0;
  std::uint32_t content_tau_ = 0;
};

nlohmann::json to_json(const ScoreDetail& detail);

// PNG/JPEG files directly inside dir, sorted by name.
std::vector<std::filesystem::path> list_images(const std::filesystem::path& dir);

struct StyleTrainingResult {
  DictionarySet dictionaries;
  std::vector<OdlReport> reports;
  std::array<Eigen::Index, 5> sample_counts{};
};

// Tiles each image, builds style matrices and trains one dictionary per
// layer. Allows under-sampled corpora (fewer vectors than atoms) and flags
// them in the reports.
StyleTrainingResult train_style_dictionaries(const RunConfig& config,
                                             const std::vector<ImageTensor>& images,
                                             const Vgg16Features& net);

struct ContentTrainingResult {
  DictionarySet dictionaries;
  std::vector<OdlReport> reports;
  bool exhausted = false;  // some key had fewer than K candidate patches
};

ContentTrainingResult train_content_dictionaries(const RunConfig& config,
                                                 const std::vector<ImageTensor>& images);

}  // namespace srqe

#endif  // SRQE_SCORER_HPP_
