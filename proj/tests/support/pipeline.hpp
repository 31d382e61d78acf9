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

// A desk-scale scoring setup: random network weights, dictionaries trained
// on procedural images at 128 x 128.

#ifndef SRQE_TESTS_PIPELINE_HPP_
#define SRQE_TESTS_PIPELINE_HPP_

#include <vector>

#include "srqe/config.hpp"
#include "srqe/scorer.hpp"
#include "srqe/vgg.hpp"
#include "support/synthetic.hpp"

namespace srqe::testing {

inline constexpr int kDeskSize = 128;
inline constexpr std::uint64_t kDeskWeightSeed = 7;

inline RunConfig desk_config() {
  RunConfig cfg;
  cfg.image_size = kDeskSize;
  cfg.style_atoms = {64, 64, 128, 128, 128};
  cfg.content_atoms = 64;
  cfg.train_patches = 1000;
  cfg.epochs = 5;
  return cfg;
}

struct DeskPipeline {
  RunConfig config;
  WeightBundle weights;
  DictionarySet style;
  DictionarySet content;
  std::vector<OdlReport> style_reports;
  std::vector<OdlReport> content_reports;
};

inline DeskPipeline train_desk_pipeline() {
  DeskPipeline p;
  p.config = desk_config();
  p.weights = random_vgg16_weights(kDeskWeightSeed);
  const Vgg16Features net(p.weights);
  std::vector<ImageTensor> textures, scenes;
  for (int i = 0; i < 6; ++i) {
    textures.push_back(texture_image(100 + i, kDeskSize));
    scenes.push_back(scene_image(200 + i, kDeskSize));
  }
  StyleTrainingResult st = train_style_dictionaries(p.config, textures, net);
  ContentTrainingResult ct = train_content_dictionaries(p.config, scenes);
  p.style = std::move(st.dictionaries);
  p.style_reports = std::move(st.reports);
  p.content = std::move(ct.dictionaries);
  p.content_reports = std::move(ct.reports);
  return p;
}

// Held-out content/style pair number i.
inline ImageTensor desk_content(int i) { return scene_image(300 + i, kDeskSize); }
inline ImageTensor desk_style(int i) { return texture_image(400 + i, kDeskSize); }

}  // namespace srqe::testing

#endif  // SRQE_TESTS_PIPELINE_HPP_
