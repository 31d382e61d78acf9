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
#include <numeric>
#include <queue>
#include <random>
#include <set>

#include <gsl/gsl_errno.h>
#include <gsl/gsl_multimin.h>

#include "srqe/csv.hpp"
#include "srqe/errors.hpp"

namespace srqe {

namespace {

void require_same_length(std::span<const double> x, std::span<const double> y, std::size_t min) {
  if (x.size() != y.size()) {
    throw InvalidInputError("correlation inputs differ in length");
  }
  if (x.size() < min) {
    throw InvalidInputError("correlation needs at least " + std::to_string(min) + " items");
  }
}

std::vector<std::vector<int>> components(const Eigen::MatrixXd& adjacency) {
  const auto n = static_cast<int>(adjacency.rows());
  std::vector<int> label(n, -1);
  std::vector<std::vector<int>> comps;
  for (int s = 0; s < n; ++s) {
    if (label[s] >= 0) continue;
    comps.emplace_back();
    std::queue<int> q;
    q.push(s);
    label[s] = static_cast<int>(comps.size()) - 1;
    while (!q.empty()) {
      const int i = q.front();
      q.pop();
      comps.back().push_back(i);
      for (int j = 0; j < n; ++j) {
        if (label[j] < 0 && adjacency(i, j) > 0.0) {
          label[j] = label[s];
          q.push(j);
        }
      }
    }
  }
  return comps;
}

bool reaches_all(const Eigen::MatrixXd& edges, int start) {
  const auto n = static_cast<int>(edges.rows());
  std::vector<char> seen(n, 0);
  std::queue<int> q;
  q.push(start);
  seen[start] = 1;
  int count = 1;
  while (!q.empty()) {
    const int i = q.front();
    q.pop();
    for (int j = 0; j < n; ++j) {
      if (!seen[j] && edges(i, j) > 0.0) {
        seen[j] = 1;
        ++count;
        q.push(j);
      }
    }
  }
  return count == n;
}

bool strongly_connected(const Eigen::MatrixXd& wins) {
  const Eigen::MatrixXd t = wins.transpose();
  return reaches_all(wins, 0) && reaches_all(t, 0);
}

}  // namespace

double bt_negative_log_likelihood(const Eigen::MatrixXd& wins, const Eigen::VectorXd& u) {
  double nll = 0.0;
  for (Eigen::Index i = 0; i < wins.rows(); ++i) {
    for (Eigen::Index j = 0; j < wins.cols(); ++j) {
      if (i == j || wins(i, j) == 0.0) continue;
      // -log(e^ui / (e^ui + e^uj)) = log(1 + e^(uj - ui))
      nll += wins(i, j) * std::log1p(std::exp(u(j) - u(i)));
    }
  }
  return nll;
}

BTScores bt_fit(const WinMatrix& w, int max_iter, double tol, const Eigen::VectorXd* initial_u) {
  const Eigen::Index n = w.wins.rows();
  if (n < 2 || w.wins.cols() != n) {
    throw InvalidInputError("B-T fitting needs a square win matrix over at least two methods");
  }
  if ((w.wins.array() < 0.0).any() || !w.wins.allFinite()) {
    throw InvalidInputError("win counts must be finite and non-negative");
  }
  Eigen::MatrixXd wins = w.wins;
  wins.diagonal().setZero();
  const Eigen::MatrixXd played = wins + wins.transpose();
  const auto comps = components(played);
  if (comps.size() > 1) {
    std::size_t largest = 0;
    for (std::size_t c = 1; c < comps.size(); ++c) {
      if (comps[c].size() > comps[largest].size()) largest = c;
    }
    std::string names;
    for (std::size_t c = 0; c < comps.size(); ++c) {
      if (c == largest) continue;
      for (int i : comps[c]) {
        names += (names.empty() ? "" : ", ") +
                 (static_cast<std::size_t>(i) < w.methods.size() ? w.methods[i]
                                                                 : std::to_string(i));
      }
    }
    throw FittingError("comparison graph of group '" + w.group +
                       "' is disconnected; isolated methods: " + names);
  }

  BTScores out;
  out.group = w.group;
  out.methods = w.methods;
  if (!strongly_connected(wins)) {
    wins.array() += 0.5;
    wins.diagonal().setZero();
    out.smoothed = true;
  }
  const Eigen::MatrixXd games = wins + wins.transpose();
  const Eigen::VectorXd total_wins = wins.rowwise().sum();

  Eigen::VectorXd u = initial_u ? *initial_u : Eigen::VectorXd::Zero(n);
  if (u.size() != n) {
    throw InvalidInputError("initial scores have the wrong length");
  }
  Eigen::VectorXd p = u.array().exp();
  for (int it = 1; it <= max_iter; ++it) {
    Eigen::VectorXd next(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      double denom = 0.0;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (j != i && games(i, j) > 0.0) denom += games(i, j) / (p(i) + p(j));
      }
      next(i) = total_wins(i) / denom;
    }
    Eigen::VectorXd next_u = next.array().log();
    next_u.array() -= next_u.mean();
    const double change = (next_u - u).cwiseAbs().maxCoeff();
    u = next_u;
    p = u.array().exp();
    out.iterations = it;
    if (change < tol) {
      out.converged = true;
      break;
    }
  }
  out.u = u;
  return out;
}

std::vector<double> average_ranks(std::span<const double> x) {
  const std::size_t n = x.size();
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
  std::vector<double> ranks(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && x[idx[j + 1]] == x[idx[i]]) ++j;
    const double r = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[idx[k]] = r;
    i = j + 1;
  }
  return ranks;
}

double pearson(std::span<const double> x, std::span<const double> y) {
  require_same_length(x, y, 2);
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) {
    throw InvalidInputError("correlation undefined for constant input");
  }
  return sxy / std::sqrt(sxx * syy);
}

double srcc(std::span<const double> x, std::span<const double> y) {
  require_same_length(x, y, 2);
  const auto rx = average_ranks(x);
  const auto ry = average_ranks(y);
  return pearson(rx, ry);
}

namespace {

// Merge sort counting exchanges (discordant pairs after sorting by x).
long long merge_count(std::vector<double>& v, std::vector<double>& buf, std::size_t lo,
                      std::size_t hi) {
  if (hi - lo < 2) return 0;
  const std::size_t mid = (lo + hi) / 2;
  long long swaps = merge_count(v, buf, lo, mid) + merge_count(v, buf, mid, hi);
  std::size_t i = lo, j = mid, k = lo;
  while (i < mid && j < hi) {
    if (v[j] < v[i]) {
      swaps += static_cast<long long>(mid - i);
      buf[k++] = v[j++];
    } else {
      buf[k++] = v[i++];
    }
  }
  while (i < mid) buf[k++] = v[i++];
  while (j < hi) buf[k++] = v[j++];
  std::copy(buf.begin() + lo, buf.begin() + hi, v.begin() + lo);
  return swaps;
}

long long tie_pairs(const std::vector<double>& sorted) {
  long long t = 0;
  std::size_t i = 0;
  while (i < sorted.size()) {
    std::size_t j = i;
    while (j + 1 < sorted.size() && sorted[j + 1] == sorted[i]) ++j;
    const long long c = static_cast<long long>(j - i + 1);
    t += c * (c - 1) / 2;
    i = j + 1;
  }
  return t;
}

}  // namespace

double krcc(std::span<const double> x, std::span<const double> y) {
  require_same_length(x, y, 2);
  const std::size_t n = x.size();
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return x[a] < x[b] || (x[a] == x[b] && y[a] < y[b]);
  });
  long long x_ties = 0;
  long long joint_ties = 0;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j + 1 < n && x[idx[j + 1]] == x[idx[i]]) ++j;
    const long long c = static_cast<long long>(j - i + 1);
    x_ties += c * (c - 1) / 2;
    for (std::size_t a = i; a <= j;) {
      std::size_t b = a;
      while (b + 1 <= j && y[idx[b + 1]] == y[idx[a]]) ++b;
      const long long d = static_cast<long long>(b - a + 1);
      joint_ties += d * (d - 1) / 2;
      a = b + 1;
    }
    i = j + 1;
  }
  std::vector<double> ys(n);
  for (std::size_t i = 0; i < n; ++i) ys[i] = y[idx[i]];
  std::vector<double> buf(n);
  const long long discordant = merge_count(ys, buf, 0, n);
  const long long y_ties = tie_pairs(ys);
  const long long total = static_cast<long long>(n) * (static_cast<long long>(n) - 1) / 2;
  if (x_ties == total || y_ties == total) {
    throw InvalidInputError("correlation undefined for constant input");
  }
  const double s = static_cast<double>(total - x_ties - y_ties + joint_ties - 2 * discordant);
  return s / std::sqrt(static_cast<double>(total - x_ties) * static_cast<double>(total - y_ties));
}

double logistic5(const std::array<double, 5>& k, double x) {
  const double z = std::clamp(k[1] * (x - k[2]), -700.0, 700.0);
  return k[0] * (0.5 - 1.0 / (1.0 + std::exp(z))) + k[3] * x + k[4];
}

namespace {

struct FitData {
  std::span<const double> x;
  std::span<const double> y;
};

double sse(const gsl_vector* v, void* params) {
  const auto* data = static_cast<const FitData*>(params);
  std::array<double, 5> k{};
  for (std::size_t i = 0; i < 5; ++i) k[i] = gsl_vector_get(v, i);
  double s = 0.0;
  for (std::size_t i = 0; i < data->x.size(); ++i) {
    const double r = logistic5(k, data->x[i]) - data->y[i];
    s += r * r;
  }
  return std::isfinite(s) ? s : 1e300;
}

struct SimplexResult {
  std::array<double, 5> kappa{};
  double sse = 0.0;
  bool converged = false;
};

SimplexResult run_simplex(const FitData& data, const std::array<double, 5>& start,
                          const std::array<double, 5>& step) {
  gsl_multimin_function fn{&sse, 5, const_cast<FitData*>(&data)};
  gsl_vector* x = gsl_vector_alloc(5);
  gsl_vector* ss = gsl_vector_alloc(5);
  for (std::size_t i = 0; i < 5; ++i) {
    gsl_vector_set(x, i, start[i]);
    gsl_vector_set(ss, i, step[i]);
  }
  gsl_multimin_fminimizer* m =
      gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, 5);
  gsl_multimin_fminimizer_set(m, &fn, x, ss);
  SimplexResult res;
  for (int iter = 0; iter < 20000; ++iter) {
    if (gsl_multimin_fminimizer_iterate(m) != GSL_SUCCESS) break;
    if (gsl_multimin_test_size(gsl_multimin_fminimizer_size(m), 1e-12) == GSL_SUCCESS) {
      res.converged = true;
      break;
    }
  }
  for (std::size_t i = 0; i < 5; ++i) res.kappa[i] = gsl_vector_get(m->x, i);
  res.sse = m->fval;
  gsl_multimin_fminimizer_free(m);
  gsl_vector_free(x);
  gsl_vector_free(ss);
  return res;
}

}  // namespace

LogisticFit plcc_fit(std::span<const double> objective, std::span<const double> subjective,
                     std::uint64_t seed) {
  require_same_length(objective, subjective, 5);
  gsl_set_error_handler_off();
  const double n = static_cast<double>(objective.size());
  const auto [xmin, xmax] = std::minmax_element(objective.begin(), objective.end());
  const auto [ymin, ymax] = std::minmax_element(subjective.begin(), subjective.end());
  const double xrange = std::max(*xmax - *xmin, 1e-12);
  const double yrange = std::max(*ymax - *ymin, 1e-12);
  const double xmean = std::accumulate(objective.begin(), objective.end(), 0.0) / n;
  const double ymean = std::accumulate(subjective.begin(), subjective.end(), 0.0) / n;
  double sign = 1.0;
  try {
    sign = pearson(objective, subjective) < 0.0 ? -1.0 : 1.0;
  } catch (const Error&) {
  }

  const FitData data{objective, subjective};
  const std::array<double, 5> base = {sign * yrange, 4.0 / xrange, xmean, 0.0, ymean};
  const std::array<double, 5> step = {0.5 * yrange, 2.0 / xrange, 0.25 * xrange,
                                      0.5 * yrange / xrange, 0.25 * yrange};
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> jitter(0.0, 1.0);
  SimplexResult best;
  best.sse = std::numeric_limits<double>::infinity();
  for (int start = 0; start < 4; ++start) {
    std::array<double, 5> init = base;
    if (start > 0) {
      for (std::size_t i = 0; i < 5; ++i) init[i] += step[i] * jitter(rng);
    }
    SimplexResult r = run_simplex(data, init, step);
    if (r.sse < best.sse) best = r;
  }

  LogisticFit fit;
  fit.kappa = best.kappa;
  fit.sse = best.sse;
  fit.converged = best.converged;
  std::vector<double> mapped(objective.size());
  for (std::size_t i = 0; i < objective.size(); ++i) mapped[i] = logistic5(fit.kappa, objective[i]);
  fit.plcc = pearson(mapped, subjective);
  return fit;
}

double hitr(std::span<const double> objective, std::span<const double> bt) {
  if (objective.size() != bt.size()) {
    throw InvalidInputError("HITR inputs differ in length");
  }
  const std::size_t n = objective.size();
  if (n < 2) return 0.0;
  long long correct = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double a = objective[i] - objective[j];
      const double b = bt[i] - bt[j];
      if (a != 0.0 && b != 0.0 && ((a > 0.0) == (b > 0.0))) ++correct;
    }
  }
  return static_cast<double>(correct) / (static_cast<double>(n) * (n - 1) / 2.0);
}

EvalReport group_eval(const GroupScores& scores, const std::map<std::string, BTScores>& bt,
                      std::uint64_t seed) {
  EvalReport report;
  std::set<std::string> names;
  for (const auto& [g, _] : scores) names.insert(g);
  for (const auto& [g, _] : bt) names.insert(g);

  std::vector<int> best_positions;
  std::size_t max_items = 0;
  for (const std::string& g : names) {
    auto s_it = scores.find(g);
    auto b_it = bt.find(g);
    if (s_it == scores.end() || b_it == bt.end()) {
      report.missing_groups.push_back(g);
      report.warnings.push_back("group '" + g + "' has " +
                                (s_it == scores.end() ? "votes but no scores"
                                                      : "scores but no votes") +
                                "; excluded from averages");
      continue;
    }
    const BTScores& b = b_it->second;
    GroupResult r;
    r.group = g;
    std::vector<double> obj;
    std::vector<double> subj;
    for (std::size_t i = 0; i < b.methods.size(); ++i) {
      auto m = s_it->second.find(b.methods[i]);
      if (m == s_it->second.end()) {
        r.errors.push_back("no objective score for method '" + b.methods[i] + "'");
        continue;
      }
      obj.push_back(m->second);
      subj.push_back(b.u(static_cast<Eigen::Index>(i)));
    }
    r.items = obj.size();
    max_items = std::max(max_items, obj.size());
    auto guarded = [&](const char* name, auto&& fn) -> std::optional<double> {
      try {
        return fn();
      } catch (const Error& e) {
        r.errors.push_back(std::string(name) + ": " + e.what());
        return std::nullopt;
      }
    };
    r.srcc = guarded("srcc", [&] { return srcc(obj, subj); });
    r.krcc = guarded("krcc", [&] { return krcc(obj, subj); });
    r.plcc = guarded("plcc", [&] {
      const LogisticFit fit = plcc_fit(obj, subj, seed);
      r.kappa = fit.kappa;
      if (!fit.converged) r.errors.push_back("plcc: logistic fit hit its iteration limit");
      return fit.plcc;
    });
    r.hitr = hitr(obj, subj);
    if (!obj.empty()) {
      const auto best = static_cast<std::size_t>(
          std::max_element(subj.begin(), subj.end()) - subj.begin());
      int pos = 1;
      for (std::size_t i = 0; i < obj.size(); ++i) {
        if (i != best && obj[i] >= obj[best]) ++pos;  // ties count against
      }
      r.best_position = pos;
      best_positions.push_back(pos);
    }
    report.groups.push_back(std::move(r));
  }

  auto average = [&](std::optional<double> GroupResult::*field) -> std::optional<double> {
    double sum = 0.0;
    int count = 0;
    for (const GroupResult& r : report.groups) {
      if (r.*field) {
        sum += *(r.*field);
        ++count;
      }
    }
    if (count == 0) return std::nullopt;
    return sum / count;
  };
  report.mean_srcc = average(&GroupResult::srcc);
  report.mean_krcc = average(&GroupResult::krcc);
  report.mean_plcc = average(&GroupResult::plcc);
  report.mean_hitr = average(&GroupResult::hitr);
  if (!best_positions.empty()) {
    for (std::size_t n = 1; n <= max_items; ++n) {
      const auto hits = std::count_if(best_positions.begin(), best_positions.end(),
                                      [&](int p) { return p <= static_cast<int>(n); });
      report.rank_n_accuracy.push_back(static_cast<double>(hits) / best_positions.size());
    }
  }
  return report;
}

namespace {

nlohmann::json opt(const std::optional<double>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

}  // namespace

nlohmann::json to_json(const EvalReport& report) {
  nlohmann::json j;
  j["groups"] = nlohmann::json::array();
  for (const GroupResult& r : report.groups) {
    j["groups"].push_back({{"group", r.group},
                           {"items", r.items},
                           {"srcc", opt(r.srcc)},
                           {"krcc", opt(r.krcc)},
                           {"plcc", opt(r.plcc)},
                           {"hitr", opt(r.hitr)},
                           {"kappa", r.kappa},
                           {"best_position", r.best_position},
                           {"errors", r.errors}});
  }
  j["aggregate"] = {{"srcc", opt(report.mean_srcc)},
                    {"krcc", opt(report.mean_krcc)},
                    {"plcc", opt(report.mean_plcc)},
                    {"hitr", opt(report.mean_hitr)},
                    {"rank_n_accuracy", report.rank_n_accuracy},
                    {"groups_evaluated", report.groups.size()}};
  j["missing_groups"] = report.missing_groups;
  j["warnings"] = report.warnings;
  return j;
}

nlohmann::json to_json(const BTScores& s) {
  nlohmann::json scores = nlohmann::json::object();
  for (std::size_t i = 0; i < s.methods.size(); ++i) {
    scores[s.methods[i]] = s.u(static_cast<Eigen::Index>(i));
  }
  return {{"group", s.group},
          {"scores", scores},
          {"smoothed", s.smoothed},
          {"iterations", s.iterations},
          {"converged", s.converged}};
}

std::map<std::string, WinMatrix> read_votes_csv(const std::filesystem::path& path) {
  const CsvTable t = read_csv(path);
  const char* cols[] = {"group", "method_i", "method_j", "wins_i", "wins_j"};
  int idx[5];
  for (int c = 0; c < 5; ++c) {
    idx[c] = t.column(cols[c]);
    if (idx[c] < 0) {
      throw InvalidInputError(path.string() + ":1: missing column '" + cols[c] + "'");
    }
  }
  struct Vote {
    std::string i, j;
    long long wi, wj;
  };
  std::map<std::string, std::vector<Vote>> votes;
  std::map<std::string, std::set<std::string>> methods;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const auto& row = t.rows[r];
    const std::string where = path.string() + ":" + std::to_string(t.line_numbers[r]);
    Vote v{row[idx[1]], row[idx[2]], parse_count(row[idx[3]], where),
           parse_count(row[idx[4]], where)};
    if (row[idx[0]].empty() || v.i.empty() || v.j.empty()) {
      throw InvalidInputError(where + ": empty group or method name");
    }
    if (v.i == v.j) {
      throw InvalidInputError(where + ": a method cannot be compared with itself");
    }
    methods[row[idx[0]]].insert(v.i);
    methods[row[idx[0]]].insert(v.j);
    votes[row[idx[0]]].push_back(std::move(v));
  }
  std::map<std::string, WinMatrix> out;
  for (const auto& [g, ms] : methods) {
    WinMatrix w;
    w.group = g;
    w.methods.assign(ms.begin(), ms.end());
    const auto n = static_cast<Eigen::Index>(w.methods.size());
    w.wins = Eigen::MatrixXd::Zero(n, n);
    auto index = [&](const std::string& m) {
      return static_cast<Eigen::Index>(
          std::lower_bound(w.methods.begin(), w.methods.end(), m) - w.methods.begin());
    };
    for (const Vote& v : votes[g]) {
      w.wins(index(v.i), index(v.j)) += static_cast<double>(v.wi);
      w.wins(index(v.j), index(v.i)) += static_cast<double>(v.wj);
    }
    out.emplace(g, std::move(w));
  }
  return out;
}

std::vector<ScoreRow> read_scores_csv(const std::filesystem::path& path) {
  const CsvTable t = read_csv(path);
  const char* cols[] = {"group", "method", "q_content", "q_style", "q_overall"};
  int idx[5];
  for (int c = 0; c < 5; ++c) {
    idx[c] = t.column(cols[c]);
    if (idx[c] < 0) {
      throw InvalidInputError(path.string() + ":1: missing column '" + cols[c] + "'");
    }
  }
  std::vector<ScoreRow> rows;
  std::set<std::pair<std::string, std::string>> seen;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const auto& row = t.rows[r];
    const std::string where = path.string() + ":" + std::to_string(t.line_numbers[r]);
    ScoreRow s{row[idx[0]], row[idx[1]], parse_double(row[idx[2]], where),
               parse_double(row[idx[3]], where), parse_double(row[idx[4]], where)};
    if (!seen.insert({s.group, s.method}).second) {
      throw InvalidInputError(where + ": duplicate score for " + s.group + "/" + s.method);
    }
    rows.push_back(std::move(s));
  }
  return rows;
}

GroupScores select_factor(const std::vector<ScoreRow>& rows, const std::string& factor) {
  GroupScores out;
  for (const ScoreRow& r : rows) {
    double v = 0.0;
    if (factor == "content") {
      v = r.q_content;
    } else if (factor == "style") {
      v = r.q_style;
    } else if (factor == "overall") {
      v = r.q_overall;
    } else {
      throw InvalidInputError("unknown quality factor '" + factor + "'");
    }
    out[r.group][r.method] = v;
  }
  return out;
}

}  // namespace srqe
