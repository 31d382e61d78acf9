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

#include "srqe/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>

#include <gtest/gtest.h>

#include "srqe/errors.hpp"

#include "support/oracles.hpp"
#include "support/temp_dir.hpp"

namespace srqe {
namespace {

using testing::oracle_kendall;
using testing::oracle_pearson;
using testing::oracle_ranks;
using testing::simulate_votes;

WinMatrix make_wins(std::vector<std::string> methods, const Eigen::MatrixXd& w) {
  WinMatrix m;
  m.group = "g";
  m.methods = std::move(methods);
  m.wins = w;
  return m;
}

TEST(BradleyTerryTest, TwoPlayerClosedForm) {
  Eigen::MatrixXd w(2, 2);
  w << 0, 75, 25, 0;
  const BTScores s = bt_fit(make_wins({"a", "b"}, w));
  EXPECT_TRUE(s.converged);
  EXPECT_FALSE(s.smoothed);
  EXPECT_NEAR(s.u(0) - s.u(1), std::log(3.0), 1e-3);
  EXPECT_NEAR(s.u(0), std::log(3.0) / 2, 1e-6);
  EXPECT_NEAR(s.u.sum(), 0.0, 1e-12);
  // Gradient of the likelihood vanishes at the fit.
  const double h = 1e-5;
  for (int i = 0; i < 2; ++i) {
    Eigen::VectorXd up = s.u, down = s.u;
    up(i) += h;
    down(i) -= h;
    const double g = (bt_negative_log_likelihood(w, up) - bt_negative_log_likelihood(w, down)) / (2 * h);
    EXPECT_NEAR(g, 0.0, 1e-4);
  }
}

TEST(BradleyTerryTest, SymmetricVotesGiveZero) {
  Eigen::MatrixXd w = Eigen::MatrixXd::Constant(5, 5, 12.0);
  w.diagonal().setZero();
  const BTScores s = bt_fit(make_wins({"a", "b", "c", "d", "e"}, w));
  EXPECT_LT(s.u.cwiseAbs().maxCoeff(), 1e-10);
}

TEST(BradleyTerryTest, RecoversPlantedRanking) {
  Eigen::VectorXd planted = Eigen::VectorXd::LinSpaced(8, -1.5, 1.5);
  std::vector<int> perm = {3, 0, 7, 5, 1, 6, 2, 4};
  Eigen::VectorXd u(8);
  for (int i = 0; i < 8; ++i) u(i) = planted(perm[i]);
  const Eigen::MatrixXd w = simulate_votes(u, 10000, 42);
  std::vector<std::string> names;
  for (int i = 0; i < 8; ++i) names.push_back("m" + std::to_string(i));
  const BTScores s = bt_fit(make_wins(names, w));
  std::vector<double> a(u.data(), u.data() + 8), b(s.u.data(), s.u.data() + 8);
  EXPECT_EQ(oracle_ranks(a), oracle_ranks(b));
}

TEST(BradleyTerryTest, PermutationEquivarianceAndUniqueness) {
  Eigen::VectorXd u(5);
  u << 0.8, -0.2, 0.1, -1.0, 0.3;
  const Eigen::MatrixXd w = simulate_votes(u, 3000, 7);
  const BTScores base = bt_fit(make_wins({"a", "b", "c", "d", "e"}, w));
  const std::vector<int> perm = {2, 4, 0, 3, 1};
  Eigen::MatrixXd wp(5, 5);
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) wp(i, j) = w(perm[i], perm[j]);
  const BTScores p = bt_fit(make_wins({"c", "e", "a", "d", "b"}, wp));
  for (int i = 0; i < 5; ++i) EXPECT_NEAR(p.u(i), base.u(perm[i]), 1e-9);

  Eigen::VectorXd init(5);
  init << 5, -3, 2, 7, -1;
  const BTScores shifted = bt_fit(make_wins({"a", "b", "c", "d", "e"}, w), 100000, 1e-12, &init);
  EXPECT_LT((shifted.u - base.u).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(BradleyTerryTest, DisconnectedAndUnbeatenGroups) {
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(4, 4);
  w(0, 1) = 3;
  w(1, 0) = 2;
  w(2, 3) = 4;
  w(3, 2) = 1;
  try {
    bt_fit(make_wins({"a", "b", "c", "d"}, w));
    FAIL() << "expected a fitting error";
  } catch (const FittingError& e) {
    EXPECT_NE(std::string(e.what()).find("c"), std::string::npos);
  }
  Eigen::MatrixXd dom(3, 3);
  dom << 0, 10, 10, 0, 0, 5, 0, 5, 0;
  const BTScores s = bt_fit(make_wins({"a", "b", "c"}, dom));
  EXPECT_TRUE(s.smoothed);
  EXPECT_TRUE(s.u.allFinite());
  EXPECT_GT(s.u(0), s.u(1));
}

TEST(CorrelationTest, PerfectAndReversed) {
  const std::vector<double> x = {1, 2, 3}, up = {10, 20, 30}, down = {3, 2, 1};
  EXPECT_DOUBLE_EQ(srcc(x, up), 1.0);
  EXPECT_DOUBLE_EQ(krcc(x, up), 1.0);
  EXPECT_DOUBLE_EQ(srcc(x, down), -1.0);
  EXPECT_DOUBLE_EQ(krcc(x, down), -1.0);
}

TEST(CorrelationTest, MatchBruteForceOracles) {
  std::mt19937_64 rng(123);
  std::uniform_int_distribution<int> small(0, 4);
  std::normal_distribution<double> n(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> x(8), y(8);
    // Every third trial draws from a small integer range to exercise ties.
    for (int i = 0; i < 8; ++i) {
      x[i] = trial % 3 == 0 ? small(rng) : n(rng);
      y[i] = trial % 3 == 0 ? small(rng) : n(rng);
    }
    const auto rx = oracle_ranks(x), ry = oracle_ranks(y);
    if (std::adjacent_find(rx.begin(), rx.end(), std::not_equal_to<>()) == rx.end() ||
        std::adjacent_find(ry.begin(), ry.end(), std::not_equal_to<>()) == ry.end()) {
      continue;
    }
    EXPECT_EQ(average_ranks(x), rx);
    EXPECT_NEAR(srcc(x, y), oracle_pearson(rx, ry), 1e-12) << "trial " << trial;
    EXPECT_NEAR(krcc(x, y), oracle_kendall(x, y), 1e-12) << "trial " << trial;
  }
}

TEST(CorrelationTest, ConstantInputIsRejected) {
  const std::vector<double> c = {1, 1, 1}, x = {1, 2, 3};
  EXPECT_THROW(srcc(c, x), InvalidInputError);
  EXPECT_THROW(krcc(c, x), InvalidInputError);
  EXPECT_THROW(pearson(x, c), InvalidInputError);
  EXPECT_THROW(srcc(x, std::vector<double>{1, 2}), InvalidInputError);
}

TEST(LogisticTest, RecoversSyntheticRelation) {
  const std::array<double, 5> kappa = {1, 1, 0, 0.5, 0};
  std::vector<double> x, y;
  for (int i = 0; i < 60; ++i) {
    x.push_back(-4.0 + 8.0 * i / 59.0);
    y.push_back(logistic5(kappa, x.back()));
  }
  EXPECT_GE(plcc_fit(x, y, 1).plcc, 0.999);
  EXPECT_GE(plcc_fit(x, x, 1).plcc, 0.9999);
  std::vector<double> neg(x.size());
  std::transform(x.begin(), x.end(), neg.begin(), [](double v) { return -v; });
  EXPECT_GE(std::abs(plcc_fit(x, neg, 1).plcc), 0.9999);
  const LogisticFit a = plcc_fit(x, y, 9), b = plcc_fit(x, y, 9);
  EXPECT_EQ(a.kappa, b.kappa);
}

TEST(LogisticTest, FunctionShape) {
  EXPECT_DOUBLE_EQ(logistic5({1, 1, 0, 0, 0}, 0.0), 0.0);
  EXPECT_NEAR(logistic5({2, 3, 1, 0.5, 0.25}, 1.0), 0.75, 1e-15);
  EXPECT_NEAR(logistic5({1, 1, 0, 0, 0}, 50.0), 0.5, 1e-12);
}

TEST(HitrTest, ArithmeticCases) {
  const std::vector<double> ordered = {1, 2, 3, 4, 5, 6, 7, 8};
  EXPECT_DOUBLE_EQ(hitr(ordered, ordered), 1.0);
  const std::vector<double> six = {4, 3, 2, 1, 5, 6, 7, 8};
  EXPECT_DOUBLE_EQ(hitr(six, ordered), 22.0 / 28.0);
  const std::vector<double> seven = {4, 3, 1, 2, 6, 5, 8, 7};
  int discordant = 0;
  for (int i = 0; i < 8; ++i)
    for (int j = i + 1; j < 8; ++j) discordant += (seven[i] - seven[j]) < 0 ? 0 : 1;
  ASSERT_EQ(discordant, 7);
  EXPECT_DOUBLE_EQ(hitr(seven, ordered), 0.75);
  const std::vector<double> flat(8, 0.3);
  EXPECT_DOUBLE_EQ(hitr(flat, ordered), 0.0);
  std::vector<double> tied = ordered;
  tied[1] = tied[0];
  EXPECT_DOUBLE_EQ(hitr(tied, ordered), 27.0 / 28.0);
}

BTScores bt_of(std::vector<std::string> methods, std::vector<double> u) {
  BTScores s;
  s.methods = std::move(methods);
  s.u = Eigen::Map<Eigen::VectorXd>(u.data(), static_cast<Eigen::Index>(u.size()));
  return s;
}

TEST(GroupEvalTest, PerfectGroup) {
  GroupScores scores;
  scores["g1"] = {{"a", 0.1}, {"b", 0.5}, {"c", 0.9}, {"d", 1.3}, {"e", 2.0}};
  std::map<std::string, BTScores> bt;
  bt["g1"] = bt_of({"a", "b", "c", "d", "e"}, {-2, -1, 0, 1, 2});
  const EvalReport r = group_eval(scores, bt);
  ASSERT_EQ(r.groups.size(), 1u);
  EXPECT_DOUBLE_EQ(*r.mean_srcc, 1.0);
  EXPECT_DOUBLE_EQ(*r.mean_krcc, 1.0);
  EXPECT_GE(*r.mean_plcc, 0.9999);
  EXPECT_DOUBLE_EQ(*r.mean_hitr, 1.0);
  ASSERT_FALSE(r.rank_n_accuracy.empty());
  EXPECT_DOUBLE_EQ(r.rank_n_accuracy[0], 1.0);
}

TEST(GroupEvalTest, MacroAverageAndRankN) {
  GroupScores scores;
  scores["good"] = {{"a", 1}, {"b", 2}, {"c", 3}, {"d", 4}, {"e", 5}};
  scores["flat"] = {{"a", 1}, {"b", 2}, {"c", 3}, {"d", 4}, {"e", 5}};
  std::map<std::string, BTScores> bt;
  bt["good"] = bt_of({"a", "b", "c", "d", "e"}, {1, 2, 3, 4, 5});
  // Subjective ranks (2, 5, 3, 1, 4): squared rank differences sum to 20, so SRCC = 0.
  bt["flat"] = bt_of({"a", "b", "c", "d", "e"}, {2, 5, 3, 1, 4});
  const EvalReport r = group_eval(scores, bt);
  ASSERT_EQ(r.groups.size(), 2u);
  EXPECT_NEAR(*r.groups[0].srcc, 0.0, 1e-15);
  EXPECT_DOUBLE_EQ(*r.groups[1].srcc, 1.0);
  EXPECT_NEAR(*r.mean_srcc, 0.5, 1e-15);
  EXPECT_DOUBLE_EQ(*r.mean_hitr, (*r.groups[0].hitr + 1.0) / 2.0);
  // In "flat" the favourite b has objective rank 4 of 5.
  EXPECT_EQ(r.groups[0].best_position, 4);
  EXPECT_DOUBLE_EQ(r.rank_n_accuracy[0], 0.5);
  EXPECT_DOUBLE_EQ(r.rank_n_accuracy[3], 1.0);
}

TEST(GroupEvalTest, ConstantObjectiveAndMissingGroups) {
  GroupScores scores;
  scores["g"] = {{"a", 1}, {"b", 1}, {"c", 1}, {"d", 1}, {"e", 1}};
  scores["lonely"] = {{"a", 1}};
  std::map<std::string, BTScores> bt;
  bt["g"] = bt_of({"a", "b", "c", "d", "e"}, {1, 2, 3, 4, 5});
  const EvalReport r = group_eval(scores, bt);
  ASSERT_EQ(r.groups.size(), 1u);
  EXPECT_DOUBLE_EQ(*r.groups[0].hitr, 0.0);
  EXPECT_FALSE(r.groups[0].srcc.has_value());
  EXPECT_FALSE(r.groups[0].errors.empty());
  EXPECT_EQ(r.missing_groups, std::vector<std::string>{"lonely"});
  EXPECT_FALSE(r.warnings.empty());
}

TEST(CsvInputTest, VotesAndScores) {
  testing::TempDir dir;
  {
    std::ofstream v(dir / "votes.csv");
    v << "group,method_i,method_j,wins_i,wins_j\n"
      << "g1,b,a,25,75\n"
      << "g1,a,c,60,40\n"
      << "g1,b,c,10,5\n";
  }
  const auto votes = read_votes_csv(dir / "votes.csv");
  ASSERT_EQ(votes.size(), 1u);
  const WinMatrix& w = votes.at("g1");
  EXPECT_EQ(w.methods, (std::vector<std::string>{"a", "b", "c"}));
  EXPECT_EQ(w.wins(0, 1), 75);
  EXPECT_EQ(w.wins(1, 0), 25);
  EXPECT_EQ(w.wins(2, 1), 5);
  {
    std::ofstream s(dir / "scores.csv");
    s << "group,method,q_content,q_style,q_overall\n"
      << "g1,a,1.5,0.2,0.7\n"
      << "g1,a,1.5,0.2\n";
  }
  try {
    read_scores_csv(dir / "scores.csv");
    FAIL() << "expected a line-numbered error";
  } catch (const InvalidInputError& e) {
    EXPECT_NE(std::string(e.what()).find("scores.csv:3"), std::string::npos) << e.what();
  }
  {
    std::ofstream s(dir / "scores.csv");
    s << "group,method,q_content,q_style,q_overall\n"
      << "g1,a,1.5,0.2,0.7\n"
      << "g1,b,1.0,0.4,0.6\n";
  }
  const auto rows = read_scores_csv(dir / "scores.csv");
  EXPECT_EQ(select_factor(rows, "style").at("g1").at("b"), 0.4);
  EXPECT_THROW(select_factor(rows, "beauty"), InvalidInputError);
}

}  // namespace
}  // namespace srqe
