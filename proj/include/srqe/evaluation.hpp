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

#ifndef SRQE_EVALUATION_HPP_
#define SRQE_EVALUATION_HPP_

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <nlohmann/json.hpp>

namespace srqe {

// wins(i, j) = number of times method i was preferred over method j.
struct WinMatrix {
  std::string group;
  std::vector<std::string> methods;
  Eigen::MatrixXd wins;
};

struct BTScores {
  std::string group;
  std::vector<std::string> methods;
  Eigen::VectorXd u;  // zero mean
  bool smoothed = false;
  int iterations = 0;
  bool converged = false;
};

// Negative log-likelihood of the Bradley-Terry model.
double bt_negative_log_likelihood(const Eigen::MatrixXd& wins, const Eigen::VectorXd& u);

// Minorization-maximization fit. Requires a connected comparison graph
// (FittingError naming the unreachable methods otherwise). When the win graph
// is not strongly connected the MLE does not exist; 0.5 is then added to
// every off-diagonal count and `smoothed` is set.
BTScores bt_fit(const WinMatrix& w, int max_iter = 100000, double tol = 1e-12,
                const Eigen::VectorXd* initial_u = nullptr);

// Spearman correlation with average ranks for ties.
double srcc(std::span<const double> x, std::span<const double> y);
// Kendall tau-b.
double krcc(std::span<const double> x, std::span<const double> y);
double pearson(std::span<const double> x, std::span<const double> y);
std::vector<double> average_ranks(std::span<const double> x);

// kappa1 (1/2 - 1/(1 + exp(kappa2 (x - kappa3)))) + kappa4 x + kappa5
double logistic5(const std::array<double, 5>& kappa, double x);

struct LogisticFit {
  double plcc = 0.0;
  std::array<double, 5> kappa{};
  double sse = 0.0;
  bool converged = false;
};

// Nelder-Mead least squares with four seeded starts; PLCC is the Pearson
// correlation between the mapped objective scores and the subjective ones.
LogisticFit plcc_fit(std::span<const double> objective, std::span<const double> subjective,
                     std::uint64_t seed = 0);

// Fraction of item pairs whose objective order strictly matches the B-T
// order. A tie on either side counts as a miss.
double hitr(std::span<const double> objective, std::span<const double> bt);

struct GroupResult {
  std::string group;
  std::size_t items = 0;
  std::optional<double> srcc;
  std::optional<double> krcc;
  std::optional<double> plcc;
  std::optional<double> hitr;
  std::array<double, 5> kappa{};
  int best_position = 0;  // 1-based objective rank of the subjective favourite
  std::vector<std::string> errors;
};

struct EvalReport {
  std::vector<GroupResult> groups;
  std::optional<double> mean_srcc;
  std::optional<double> mean_krcc;
  std::optional<double> mean_plcc;
  std::optional<double> mean_hitr;
  std::vector<double> rank_n_accuracy;  // entry n-1 is rank-n accuracy
  std::vector<std::string> missing_groups;
  std::vector<std::string> warnings;
};

// group -> method -> objective score
using GroupScores = std::map<std::string, std::map<std::string, double>>;

EvalReport group_eval(const GroupScores& scores, const std::map<std::string, BTScores>& bt,
                      std::uint64_t seed = 0);

nlohmann::json to_json(const EvalReport& report);
nlohmann::json to_json(const BTScores& scores);

// CSV: group,method_i,method_j,wins_i,wins_j
std::map<std::string, WinMatrix> read_votes_csv(const std::filesystem::path& path);

struct ScoreRow {
  std::string group;
  std::string method;
  double q_content = 0.0;
  double q_style = 0.0;
  double q_overall = 0.0;
};

// CSV: group,method,q_content,q_style,q_overall (extra columns ignored)
std::vector<ScoreRow> read_scores_csv(const std::filesystem::path& path);

// Picks one of "content", "style", "overall".
GroupScores select_factor(const std::vector<ScoreRow>& rows, const std::string& factor);

}  // namespace srqe

#endif  // SRQE_EVALUATION_HPP_
