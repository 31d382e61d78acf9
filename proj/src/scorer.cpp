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

#include "srqe/scorer.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>

#include "srqe/content_features.hpp"
#include "srqe/errors.hpp"
#include "srqe/style_features.hpp"

namespace srqe {

Scorer::Scorer(RunConfig config, WeightBundle weights, const DictionarySet& style,
               const DictionarySet& content)
    : config_(std::move(config)), net_(std::move(weights)) {
  config_.validate();
  if (style.kind != DictionaryKind::kStyle) {
    throw ConfigurationError("style dictionary file holds content dictionaries");
  }
  if (content.kind != DictionaryKind::kContent) {
    throw ConfigurationError("content dictionary file holds style dictionaries");
  }
  for (int l = 1; l <= 5; ++l) {
    const Dictionary* d = style.find({static_cast<std::uint32_t>(l), 0});
    if (!d) {
      throw ConfigurationError("style dictionary for layer " + std::to_string(l) + " missing");
    }
    if (d->dim() != kVggLayerWidths[l - 1]) {
      throw ConfigurationError("style dictionary for layer " + std::to_string(l) +
                               " has atoms of length " + std::to_string(d->dim()) +
                               ", expected " + std::to_string(kVggLayerWidths[l - 1]));
    }
    style_ops_.push_back(make_operator(*d));
    style_tau_ = d->tau;
  }
  const Eigen::Index t = static_cast<Eigen::Index>(config_.patch_size) * config_.patch_size;
  for (int o = 1; o <= config_.octaves; ++o) {
    for (int z = 1; z <= config_.scales; ++z) {
      const DictionaryKey key{static_cast<std::uint32_t>(z), static_cast<std::uint32_t>(o)};
      const Dictionary* d = content.find(key);
      if (!d) {
        throw ConfigurationError("content dictionary for scale " + std::to_string(z) +
                                 ", octave " + std::to_string(o) + " missing");
      }
      if (d->dim() != t) {
        throw ConfigurationError("content dictionary atoms have length " +
                                 std::to_string(d->dim()) + " but patch_size " +
                                 std::to_string(config_.patch_size) + " needs " +
                                 std::to_string(t));
      }
      content_ops_.emplace(key, make_operator(*d));
      content_tau_ = d->tau;
    }
  }
}

Scorer Scorer::from_config(const RunConfig& config) {
  config.validate();
  config.require_files(true, true, true);
  return Scorer(config, load_weights(config.weights), load_dictionaries(config.style_dict),
                load_dictionaries(config.content_dict));
}

std::array<double, 5> Scorer::style_similarities(const ImageTensor& style,
                                                 const ImageTensor& stylized) const {
  const auto gs = style_vectors(style, net_);
  const auto gt = style_vectors(stylized, net_);
  std::array<double, 5> ss{};
  for (int l = 0; l < 5; ++l) {
    const SparseCode s = encode_style(gs[l].values, style_ops_[l]);
    const SparseCode ts = encode_style(gt[l].values, style_ops_[l]);
    ss[l] = style_similarity(s, ts, config_.eta, config_.similarity_form);
  }
  return ss;
}

ContentGrid Scorer::content_similarities(const ImageTensor& content,
                                         const ImageTensor& stylized) const {
  const ImageTensor tc_img =
      (stylized.height() == content.height() && stylized.width() == content.width())
          ? stylized
          : resize_bilinear(stylized, content.height(), content.width());
  const PyramidParams params = config_.pyramid();
  const DoGPyramid pc = build_pyramid(to_grayscale(content), params);
  const DoGPyramid pt = build_pyramid(to_grayscale(tc_img), params);
  ContentGrid grid;
  const int p = config_.patch_size;
  for (const auto& [key, op] : content_ops_) {
    const int z = static_cast<int>(key.first);
    const int o = static_cast<int>(key.second);
    const PatchSet yc = extract_patches(pc.at(z, o), p, p);
    const PatchSet yt = extract_patches(pt.at(z, o), p, p);
    const Eigen::MatrixXd c = op.pinv * yc.patches;
    const Eigen::MatrixXd tc = op.pinv * yt.patches;
    grid[{z, o}] = content_similarity(c, tc, config_.eta, config_.similarity_form);
  }
  return grid;
}

ScoreDetail Scorer::score(const ImageTensor& content, const ImageTensor& style,
                          const ImageTensor& stylized) const {
  ScoreDetail out;
  out.style_similarity = style_similarities(style, stylized);
  out.content_similarity = content_similarities(content, stylized);
  out.quality.q_style = pool_style(out.style_similarity);
  out.quality.q_content = pool_content(out.content_similarity, config_.scales, config_.octaves,
                                       config_.pooling.normalized_content);
  try {
    out.quality.q_overall =
        pool_overall(out.quality.q_content, out.quality.q_style, config_.pooling);
  } catch (const InvalidInputError& e) {
    out.overall_defined = false;
    out.quality.q_overall = std::numeric_limits<double>::quiet_NaN();
    out.warnings.push_back(std::string("q_overall undefined: ") + e.what());
  }
  return out;
}

ScoreDetail Scorer::score_files(const std::filesystem::path& content,
                                const std::filesystem::path& style,
                                const std::filesystem::path& stylized) const {
  const int size = config_.image_size;
  return score(load_image(content, size), load_image(style, size), load_image(stylized, size));
}

nlohmann::json Scorer::metadata() const {
  return {{"backbone", "vgg16 feature stack, taps conv1_2 conv2_2 conv3_3 conv4_3 conv5_3"},
          {"backbone_note", "plain VGG16 block features stand in for the DISTS variant"},
          {"style_dictionary_tau", style_tau_},
          {"content_dictionary_tau", content_tau_},
          {"tau_note", "sparsity bound is a configured value; the original value is unknown"},
          {"eta", config_.eta},
          {"similarity_form", to_string(config_.similarity_form)},
          {"content_pooling", config_.pooling.normalized_content ? "normalized (1/Z^O)"
                                                                 : "as-written (1/Z^2)"}};
}

nlohmann::json to_json(const ScoreDetail& d) {
  nlohmann::json cs = nlohmann::json::array();
  for (const auto& [key, value] : d.content_similarity) {
    cs.push_back({{"scale", key.first}, {"octave", key.second}, {"cs", value}});
  }
  return {{"q_content", d.quality.q_content},
          {"q_style", d.quality.q_style},
          {"q_overall", d.overall_defined ? nlohmann::json(d.quality.q_overall)
                                          : nlohmann::json(nullptr)},
          {"style_similarity", d.style_similarity},
          {"content_similarity", cs},
          {"warnings", d.warnings}};
}

std::vector<std::filesystem::path> list_images(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) {
    throw InvalidInputError("not a directory: " + dir.string());
  }
  std::vector<std::filesystem::path> out;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    std::string ext = entry.path().extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
    if (ext == ".png" || ext == ".jpg" || ext == ".jpeg") out.push_back(entry.path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

StyleTrainingResult train_style_dictionaries(const RunConfig& config,
                                             const std::vector<ImageTensor>& images,
                                             const Vgg16Features& net) {
  const auto matrices = build_style_matrix(images, net, config.style_blocks);
  StyleTrainingResult out;
  for (int l = 0; l < 5; ++l) out.sample_counts[l] = matrices[l].sample_count();
  TrainOptions options = config.train_options();
  options.allow_duplicates = true;
  out.dictionaries = train_style_dicts(matrices, config.style_atoms, options, &out.reports);
  return out;
}

ContentTrainingResult train_content_dictionaries(const RunConfig& config,
                                                 const std::vector<ImageTensor>& images) {
  std::vector<ImageTensor> gray;
  gray.reserve(images.size());
  for (const ImageTensor& img : images) gray.push_back(to_grayscale(img));
  ContentTrainingResult out;
  TrainOptions options = config.train_options();
  options.allow_duplicates = true;
  out.dictionaries = train_content_dicts(gray, config.content_train_params(), options,
                                         &out.reports, &out.exhausted);
  return out;
}

}  // namespace srqe
