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

#include "srqe/dictlearn.hpp"

#include <algorithm>
#include <random>
#include <set>

#include <Eigen/QR>
#include <gtest/gtest.h>

#include "srqe/errors.hpp"
#include "support/oracles.hpp"
#include "support/synthetic.hpp"
#include "support/temp_dir.hpp"

namespace srqe {
namespace {

using testing::gaussian_matrix;

Eigen::MatrixXd unit_columns(Eigen::MatrixXd m) {
  m.colwise().normalize();
  return m;
}

Eigen::MatrixXd random_orthonormal(std::mt19937_64& rng, int n) {
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(gaussian_matrix(rng, n, n));
  return qr.householderQ() * Eigen::MatrixXd::Identity(n, n);
}

TEST(OmpTest, IdentityBasis) {
  const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(6, 6);
  Eigen::VectorXd y = Eigen::VectorXd::Zero(6);
  y(0) = 5.0;
  const SparseCode code = OmpCoder(eye).encode(y, 1);
  ASSERT_EQ(code.support, std::vector<Eigen::Index>{0});
  EXPECT_DOUBLE_EQ(code.coefficients(0), 5.0);
  EXPECT_EQ(code.coefficients.tail(5).cwiseAbs().maxCoeff(), 0.0);
}

TEST(OmpTest, ZeroSignal) {
  std::mt19937_64 rng(1);
  const SparseCode code = OmpCoder(unit_columns(gaussian_matrix(rng, 8, 12)))
                              .encode(Eigen::VectorXd::Zero(8), 3);
  EXPECT_TRUE(code.support.empty());
  EXPECT_EQ(code.coefficients.size(), 12);
  EXPECT_EQ(code.coefficients.cwiseAbs().maxCoeff(), 0.0);
}

TEST(OmpTest, TiesGoToLowestIndex) {
  Eigen::MatrixXd d(2, 3);
  d << 1, 1, 0, 0, 0, 1;
  Eigen::VectorXd y(2);
  y << 2, 0;
  EXPECT_EQ(OmpCoder(d).encode(y, 1).support, std::vector<Eigen::Index>{0});
}

TEST(OmpTest, PlantedSupportRecovery) {
  std::mt19937_64 rng(2024);
  const Eigen::MatrixXd d = unit_columns(gaussian_matrix(rng, 32, 64));
  const OmpCoder coder(d);
  std::uniform_real_distribution<double> mag(1.0, 2.0);
  std::bernoulli_distribution sign(0.5);
  int recovered = 0;
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<Eigen::Index> idx(64);
    std::iota(idx.begin(), idx.end(), 0);
    std::shuffle(idx.begin(), idx.end(), rng);
    std::vector<Eigen::Index> planted(idx.begin(), idx.begin() + 3);
    std::sort(planted.begin(), planted.end());
    Eigen::VectorXd y = Eigen::VectorXd::Zero(32);
    for (Eigen::Index j : planted) y += (sign(rng) ? 1.0 : -1.0) * mag(rng) * d.col(j);
    if (coder.encode(y, 3).support == planted) ++recovered;
  }
  EXPECT_GE(recovered, 95);
}

TEST(OmpTest, ResidualNonIncreasingAndExactAtFullRank) {
  std::mt19937_64 rng(7);
  const Eigen::MatrixXd d = unit_columns(gaussian_matrix(rng, 16, 16));
  const Eigen::VectorXd y = gaussian_matrix(rng, 16, 1);
  std::vector<double> norms;
  const SparseCode code = OmpCoder(d).encode(y, 16, &norms);
  ASSERT_GE(norms.size(), 2u);
  EXPECT_NEAR(norms.front(), y.norm(), 1e-12);
  for (std::size_t i = 1; i < norms.size(); ++i) EXPECT_LE(norms[i], norms[i - 1] + 1e-12);
  EXPECT_LT((d * code.coefficients - y).norm(), 1e-9 * y.norm());
  EXPECT_THROW(OmpCoder(d).encode(Eigen::VectorXd::Zero(5), 2), InvalidInputError);
  EXPECT_THROW(OmpCoder(d).encode(y, 0), InvalidInputError);
}

TEST(OdlTest, RecoversPlantedOrthonormalDictionary) {
  std::mt19937_64 rng(99);
  const Eigen::MatrixXd planted = random_orthonormal(rng, 16);
  std::uniform_int_distribution<int> pick(0, 15);
  std::uniform_real_distribution<double> mag(0.5, 2.0);
  std::bernoulli_distribution sign(0.5);
  Eigen::MatrixXd samples(16, 2000);
  for (int i = 0; i < 2000; ++i) {
    samples.col(i) = (sign(rng) ? 1.0 : -1.0) * mag(rng) * planted.col(pick(rng));
  }
  OdlParams p;
  p.n_atoms = 16;
  p.tau = 1;
  p.epochs = 10;
  p.seed = 3;
  OdlReport rep;
  const Dictionary dict = odl_train(samples, p, &rep);
  for (int j = 0; j < 16; ++j) {
    const double best = (dict.atoms.transpose() * planted.col(j)).cwiseAbs().maxCoeff();
    EXPECT_GE(best, 0.99) << "planted atom " << j;
  }
  for (int j = 0; j < 16; ++j) EXPECT_NEAR(dict.atoms.col(j).norm(), 1.0, 1e-6);
}

TEST(OdlTest, EpochErrorNonIncreasingAndDeterministic) {
  std::mt19937_64 rng(5);
  const Eigen::MatrixXd basis = unit_columns(gaussian_matrix(rng, 20, 40));
  Eigen::MatrixXd samples(20, 600);
  std::uniform_int_distribution<int> pick(0, 39);
  std::normal_distribution<double> n(0.0, 1.0);
  for (int i = 0; i < 600; ++i) {
    samples.col(i) = n(rng) * basis.col(pick(rng)) + n(rng) * basis.col(pick(rng)) +
                     0.05 * gaussian_matrix(rng, 20, 1);
  }
  OdlParams p;
  p.n_atoms = 30;
  p.tau = 3;
  p.epochs = 8;
  p.batch_size = 64;
  p.seed = 11;
  OdlReport rep;
  const Dictionary a = odl_train(samples, p, &rep);
  ASSERT_EQ(rep.epoch_errors.size(), 8u);
  for (std::size_t e = 1; e < rep.epoch_errors.size(); ++e) {
    EXPECT_LE(rep.epoch_errors[e], rep.epoch_errors[e - 1] + 1e-6);
  }
  for (int j = 0; j < 30; ++j) EXPECT_NEAR(a.atoms.col(j).norm(), 1.0, 1e-6);
  const Dictionary b = odl_train(samples, p);
  EXPECT_EQ(a.atoms, b.atoms);
  p.seed = 12;
  EXPECT_NE(odl_train(samples, p).atoms, a.atoms);
}

TEST(OdlTest, InitializationGuards) {
  Eigen::MatrixXd few(4, 3);
  few << 1, 0, 0, 0, 1, 0, 0, 0, 1, 1, 1, 1;
  OdlParams p;
  p.n_atoms = 5;
  p.tau = 1;
  p.epochs = 2;
  EXPECT_THROW(odl_train(few, p), InvalidInputError);
  p.allow_duplicates = true;
  OdlReport rep;
  const Dictionary d = odl_train(few, p, &rep);
  EXPECT_TRUE(rep.undersampled);
  EXPECT_EQ(d.n_atoms(), 5);
  EXPECT_THROW(odl_train(Eigen::MatrixXd::Zero(4, 10), p), DegenerateInputError);
}

TEST(DictionaryFileTest, RoundTripIsBitExact) {
  testing::TempDir dir;
  std::mt19937_64 rng(1);
  DictionarySet set;
  set.kind = DictionaryKind::kContent;
  for (std::uint32_t o = 1; o <= 2; ++o) {
    for (std::uint32_t z = 1; z <= 3; ++z) {
      Dictionary d;
      d.kind = DictionaryKind::kContent;
      d.key = {z, o};
      d.atoms = unit_columns(gaussian_matrix(rng, 36, 10)).cast<float>().cast<double>();
      d.tau = 8;
      d.seed = 40 + z;
      set.entries.push_back(d);
    }
  }
  save_dictionaries(dir / "c.dict", set);
  const DictionarySet back = load_dictionaries(dir / "c.dict");
  ASSERT_EQ(back.entries.size(), set.entries.size());
  EXPECT_EQ(back.kind, DictionaryKind::kContent);
  for (std::size_t i = 0; i < set.entries.size(); ++i) {
    EXPECT_EQ(back.entries[i].key, set.entries[i].key);
    EXPECT_EQ(back.entries[i].atoms, set.entries[i].atoms);
    EXPECT_EQ(back.entries[i].tau, 8u);
    EXPECT_EQ(back.entries[i].seed, set.entries[i].seed);
  }
  ASSERT_NE(back.find({2, 2}), nullptr);
  EXPECT_EQ(back.find({4, 1}), nullptr);
  std::filesystem::resize_file(dir / "c.dict", 100);
  EXPECT_THROW(load_dictionaries(dir / "c.dict"), DecodeError);
}

TEST(TrainerTest, StyleDictionariesShapeAndDeterminism) {
  const Vgg16Features net(random_vgg16_weights(1));
  const std::vector<ImageTensor> images = {testing::texture_image(1, 128),
                                           testing::texture_image(2, 128)};
  const auto sm = build_style_matrix(images, net, kDefaultBlocksPerLayer);
  TrainOptions opt;
  opt.epochs = 2;
  opt.seed = 4;
  opt.allow_duplicates = true;
  const std::array<int, 5> atoms = {4, 4, 8, 16, 16};
  const DictionarySet a = train_style_dicts(sm, atoms, opt);
  const DictionarySet b = train_style_dicts(sm, atoms, opt);
  ASSERT_EQ(a.entries.size(), 5u);
  for (int l = 0; l < 5; ++l) {
    EXPECT_EQ(a.entries[l].key, (DictionaryKey{static_cast<std::uint32_t>(l + 1), 0}));
    EXPECT_EQ(a.entries[l].dim(), kVggLayerWidths[l]);
    EXPECT_EQ(a.entries[l].n_atoms(), atoms[l]);
    EXPECT_EQ(a.entries[l].atoms, b.entries[l].atoms);
  }
}

TEST(TrainerTest, ContentDictionaryLayout) {
  const std::vector<ImageTensor> images = {to_grayscale(testing::scene_image(1, 128)),
                                           to_grayscale(testing::scene_image(2, 128))};
  ContentTrainParams params;
  params.atoms = 16;
  params.patches_per_key = 100;
  TrainOptions opt;
  opt.epochs = 1;
  opt.allow_duplicates = true;
  const DictionarySet set = train_content_dicts(images, params, opt);
  ASSERT_EQ(set.entries.size(), 12u);
  std::set<DictionaryKey> keys;
  for (const Dictionary& d : set.entries) {
    keys.insert(d.key);
    EXPECT_EQ(d.dim(), 36);
    EXPECT_EQ(d.n_atoms(), 16);
  }
  EXPECT_EQ(keys.size(), 12u);
  params.pyramid.patch_size = 8;
  params.pyramid.octaves = 2;
  const DictionarySet big = train_content_dicts(images, params, opt);
  EXPECT_EQ(big.entries.size(), 6u);
  EXPECT_EQ(big.entries.front().dim(), 64);
}

}  // namespace
}  // namespace srqe
