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

#include <cmath>

#include <gtest/gtest.h>

#include "srqe/errors.hpp"
#include "support/pipeline.hpp"
#include "support/temp_dir.hpp"

namespace srqe {
namespace {

class ScorerTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    pipeline_ = new testing::DeskPipeline(testing::train_desk_pipeline());
    scorer_ = new Scorer(pipeline_->config, pipeline_->weights, pipeline_->style,
                         pipeline_->content);
  }
  static void TearDownTestSuite() {
    delete scorer_;
    delete pipeline_;
  }
  static testing::DeskPipeline* pipeline_;
  static Scorer* scorer_;
};

testing::DeskPipeline* ScorerTest::pipeline_ = nullptr;
Scorer* ScorerTest::scorer_ = nullptr;

TEST_F(ScorerTest, DictionaryShapes) {
  ASSERT_EQ(pipeline_->style.entries.size(), 5u);
  ASSERT_EQ(pipeline_->content.entries.size(), 12u);
  for (const Dictionary& d : pipeline_->content.entries) {
    EXPECT_EQ(d.dim(), 36);
    EXPECT_EQ(d.n_atoms(), 64);
  }
  for (const CodingOperator& op : scorer_->style_operators()) {
    EXPECT_EQ(op.n_atoms(), pipeline_->config.style_atoms[op.key.first - 1]);
  }
}

TEST_F(ScorerTest, PenroseOnTrainedDictionaries) {
  for (const auto* set : {&pipeline_->style, &pipeline_->content}) {
    for (const Dictionary& d : set->entries) {
      const PenroseResiduals r = penrose_residuals(d.atoms, pseudo_inverse(d.atoms));
      EXPECT_LT(r.reconstruct, 1e-5);
      EXPECT_LT(r.inverse, 1e-5);
    }
  }
}

TEST_F(ScorerTest, IdentityBeatsNoise) {
  for (int i = 0; i < 3; ++i) {
    const ImageTensor c = testing::desk_content(i);
    const ImageTensor s = testing::desk_style(i);
    const ImageTensor noise = testing::noise_image(900 + i, testing::kDeskSize);
    EXPECT_GT(scorer_->score(c, s, c).quality.q_content,
              scorer_->score(c, s, noise).quality.q_content);
  }
}

TEST_F(ScorerTest, StyleImageIsBestStyleMatch) {
  for (int i = 0; i < 3; ++i) {
    const ImageTensor c = testing::desk_content(i);
    const ImageTensor s = testing::desk_style(i);
    const ImageTensor noise = testing::noise_image(900 + i, testing::kDeskSize);
    const double self = scorer_->score(c, s, s).quality.q_style;
    EXPECT_GT(self, scorer_->score(c, s, c).quality.q_style);
    EXPECT_GT(self, scorer_->score(c, s, noise).quality.q_style);
  }
}

TEST_F(ScorerTest, IdenticalInputsGiveTheIdentityValue) {
  const ImageTensor c = testing::desk_content(0);
  const ScoreDetail d = scorer_->score(c, c, c);
  const double eta = pipeline_->config.eta;
  for (double ss : d.style_similarity) EXPECT_LE(ss, 2.0 + 1e-12);
  for (double ss : d.style_similarity) EXPECT_GE(ss, 2.0 - 2.0 * eta);
  EXPECT_TRUE(d.overall_defined);
  EXPECT_EQ(d.content_similarity.size(), 12u);
}

TEST_F(ScorerTest, ResizesMismatchedStylized) {
  const ImageTensor c = testing::desk_content(1);
  const ImageTensor big = resize_bilinear(c, 160, 160);
  const ScoreDetail d = scorer_->score(c, c, big);
  EXPECT_TRUE(std::isfinite(d.quality.q_content));
}

TEST_F(ScorerTest, RejectsIncompatibleDictionaries) {
  const auto& p = *pipeline_;
  EXPECT_THROW(Scorer(p.config, p.weights, p.content, p.content), ConfigurationError);
  DictionarySet missing = p.content;
  missing.entries.pop_back();
  EXPECT_THROW(Scorer(p.config, p.weights, p.style, missing), ConfigurationError);
  RunConfig eight = p.config;
  eight.patch_size = 8;
  EXPECT_THROW(Scorer(eight, p.weights, p.style, p.content), ConfigurationError);
  DictionarySet shrunk = p.style;
  shrunk.entries[2].atoms = shrunk.entries[2].atoms.topRows(100).eval();
  EXPECT_THROW(Scorer(p.config, p.weights, shrunk, p.content), ConfigurationError);
}

TEST_F(ScorerTest, FilesAndJson) {
  testing::TempDir dir;
  save_image(dir / "c.png", testing::desk_content(2));
  save_image(dir / "s.png", testing::desk_style(2));
  const ScoreDetail d = scorer_->score_files(dir / "c.png", dir / "s.png", dir / "c.png");
  const auto j = to_json(d);
  EXPECT_TRUE(j.contains("q_content"));
  EXPECT_EQ(j.at("style_similarity").size(), 5u);
  EXPECT_EQ(list_images(dir.path()).size(), 2u);
}

}  // namespace
}  // namespace srqe
