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

// srqe: dictionary training, quality scoring and evaluation front end.

#include <atomic>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "srqe/config.hpp"
#include "srqe/csv.hpp"
#include "srqe/errors.hpp"
#include "srqe/evaluation.hpp"
#include "srqe/scorer.hpp"
#include "srqe/vgg.hpp"

namespace {

struct CommonOptions {
  std::string config;
  std::string weights;
  std::string style_dict;
  std::string content_dict;
  std::string out;
  std::string similarity_form;
  std::vector<std::string> overrides;
  std::int64_t seed = -1;
  int workers = 0;
  bool normalized_pooling = false;
};

void add_common(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("--config", o.config, "Key-value configuration file");
  cmd->add_option("--weights", o.weights, "SRQEWGT1 weight file");
  cmd->add_option("--style-dict", o.style_dict, "Style dictionary file");
  cmd->add_option("--content-dict", o.content_dict, "Content dictionary file");
  cmd->add_option("--seed", o.seed, "RNG seed");
  cmd->add_option("--workers", o.workers, "Worker threads for batch scoring");
  cmd->add_option("--out", o.out, "Output path");
  cmd->add_flag("--normalized-pooling", o.normalized_pooling,
                "Divide content pooling by Z^O instead of Z^2");
  cmd->add_option("--similarity-form", o.similarity_form, "as-written | ssim-form");
  cmd->add_option("--set", o.overrides, "Override a config key (key=value)");
}

srqe::RunConfig resolve_config(const CommonOptions& o) {
  srqe::RunConfig cfg = o.config.empty() ? srqe::RunConfig{} : srqe::load_config(o.config);
  for (const std::string& kv : o.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) {
      throw srqe::InvalidInputError("--set expects key=value, got '" + kv + "'");
    }
    cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (!o.weights.empty()) cfg.weights = o.weights;
  if (!o.style_dict.empty()) cfg.style_dict = o.style_dict;
  if (!o.content_dict.empty()) cfg.content_dict = o.content_dict;
  if (o.seed >= 0) cfg.seed = static_cast<std::uint64_t>(o.seed);
  if (o.workers > 0) cfg.workers = o.workers;
  if (o.normalized_pooling) cfg.pooling.normalized_content = true;
  if (!o.similarity_form.empty()) {
    cfg.similarity_form = srqe::parse_similarity_form(o.similarity_form);
  }
  cfg.validate();
  return cfg;
}

std::vector<srqe::ImageTensor> load_directory(const std::string& dir, int size) {
  const auto paths = srqe::list_images(dir);
  if (paths.empty()) {
    throw srqe::InvalidInputError("no PNG/JPEG images in " + dir);
  }
  std::vector<srqe::ImageTensor> images;
  for (const auto& p : paths) images.push_back(srqe::load_image(p, size));
  return images;
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw srqe::InvalidInputError("cannot write " + path);
  out << text;
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

void print_odl_summary(const std::vector<srqe::OdlReport>& reports,
                       const srqe::DictionarySet& set) {
  for (std::size_t i = 0; i < reports.size(); ++i) {
    const auto& d = set.entries[i];
    const auto& r = reports[i];
    std::cout << "key (" << d.key.first << "," << d.key.second << ") " << d.dim() << "x"
              << d.n_atoms() << " mean reconstruction error "
              << (r.epoch_errors.empty() ? std::numeric_limits<double>::quiet_NaN()
                                         : r.epoch_errors.back())
              << " reseeded " << r.reseeded_atoms << (r.undersampled ? " [under-sampled]" : "")
              << "\n";
  }
}

int cmd_train_style(const CommonOptions& o, const std::string& dir) {
  const srqe::RunConfig cfg = resolve_config(o);
  cfg.require_files(true, false, false);
  if (o.out.empty()) throw srqe::InvalidInputError("--out is required");
  const auto images = load_directory(dir, cfg.image_size);
  const srqe::Vgg16Features net(srqe::load_weights(cfg.weights));
  const auto result = srqe::train_style_dictionaries(cfg, images, net);
  for (int l = 0; l < 5; ++l) {
    if (result.sample_counts[l] < cfg.style_atoms[l]) {
      std::cerr << "warning: layer " << l + 1 << " has " << result.sample_counts[l]
                << " style vectors for " << cfg.style_atoms[l] << " atoms (under-sampled)\n";
    }
  }
  srqe::save_dictionaries(o.out, result.dictionaries);
  print_odl_summary(result.reports, result.dictionaries);
  return 0;
}

int cmd_train_content(const CommonOptions& o, const std::string& dir) {
  const srqe::RunConfig cfg = resolve_config(o);
  if (o.out.empty()) throw srqe::InvalidInputError("--out is required");
  const auto images = load_directory(dir, cfg.image_size);
  const auto result = srqe::train_content_dictionaries(cfg, images);
  if (result.exhausted) {
    std::cerr << "warning: fewer than " << cfg.train_patches
              << " candidate patches at some pyramid positions\n";
  }
  for (const auto& r : result.reports) {
    if (r.undersampled) {
      std::cerr << "warning: fewer distinct patches than atoms at some pyramid positions\n";
      break;
    }
  }
  srqe::save_dictionaries(o.out, result.dictionaries);
  print_odl_summary(result.reports, result.dictionaries);
  return 0;
}

int cmd_score(const CommonOptions& o, const std::vector<std::string>& paths) {
  const srqe::RunConfig cfg = resolve_config(o);
  const srqe::Scorer scorer = srqe::Scorer::from_config(cfg);
  const srqe::ScoreDetail detail = scorer.score_files(paths[0], paths[1], paths[2]);
  nlohmann::json j = srqe::to_json(detail);
  j["inputs"] = {{"content", paths[0]}, {"style", paths[1]}, {"stylized", paths[2]}};
  j["config"] = cfg.to_json();
  j["metadata"] = scorer.metadata();
  for (const auto& w : detail.warnings) std::cerr << "warning: " << w << "\n";
  write_text(o.out, j.dump(2) + "\n");
  return 0;
}

int cmd_score_batch(const CommonOptions& o, const std::string& manifest) {
  const srqe::RunConfig cfg = resolve_config(o);
  const srqe::CsvTable table = srqe::read_csv(manifest);
  const int ci = table.column("content");
  const int si = table.column("style");
  const int ti = table.column("stylized");
  if (ci < 0 || si < 0 || ti < 0) {
    throw srqe::InvalidInputError(manifest + ":1: manifest needs content,style,stylized columns");
  }
  const srqe::Scorer scorer = srqe::Scorer::from_config(cfg);
  const auto base = std::filesystem::path(manifest).parent_path();
  auto resolve = [&](const std::string& p) {
    const std::filesystem::path path(p);
    return path.is_relative() ? base / path : path;
  };

  const std::size_t n = table.rows.size();
  std::vector<srqe::ScoreDetail> results(n);
  std::vector<std::string> errors(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      const auto& row = table.rows[i];
      try {
        results[i] = scorer.score_files(resolve(row[ci]), resolve(row[si]), resolve(row[ti]));
      } catch (const std::exception& e) {
        errors[i] = manifest + ":" + std::to_string(table.line_numbers[i]) + ": " + e.what();
      }
    }
  };
  const int workers = std::max(1, std::min<int>(cfg.workers, static_cast<int>(n)));
  std::vector<std::thread> pool;
  for (int w = 1; w < workers; ++w) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  for (std::size_t i = 0; i < n; ++i) {
    if (!errors[i].empty()) throw srqe::InvalidInputError(errors[i]);
  }
  std::ostringstream os;
  std::vector<std::string> header = table.header;
  for (const char* c : {"q_content", "q_style", "q_overall"}) header.emplace_back(c);
  srqe::write_csv_row(os, header);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::string> row = table.rows[i];
    row.push_back(format_double(results[i].quality.q_content));
    row.push_back(format_double(results[i].quality.q_style));
    row.push_back(format_double(results[i].quality.q_overall));
    srqe::write_csv_row(os, row);
  }
  write_text(o.out, os.str());
  return 0;
}

int cmd_bt_fit(const CommonOptions& o, const std::string& votes) {
  const auto matrices = srqe::read_votes_csv(votes);
  std::ostringstream os;
  srqe::write_csv_row(os, {"group", "method", "bt_score", "smoothed"});
  for (const auto& [group, w] : matrices) {
    const srqe::BTScores s = srqe::bt_fit(w);
    if (s.smoothed) {
      std::cerr << "warning: group '" << group << "' needed +0.5 smoothing\n";
    }
    for (std::size_t i = 0; i < s.methods.size(); ++i) {
      srqe::write_csv_row(os, {group, s.methods[i],
                               format_double(s.u(static_cast<Eigen::Index>(i))),
                               s.smoothed ? "true" : "false"});
    }
  }
  write_text(o.out, os.str());
  return 0;
}

int cmd_eval(const CommonOptions& o, const std::string& scores_csv, const std::string& votes_csv,
             const std::string& factor) {
  const auto rows = srqe::read_scores_csv(scores_csv);
  srqe::GroupScores scores = srqe::select_factor(rows, factor);
  const auto matrices = srqe::read_votes_csv(votes_csv);
  std::map<std::string, srqe::BTScores> bt;
  std::vector<std::string> fit_failures;
  for (const auto& [group, w] : matrices) {
    try {
      bt.emplace(group, srqe::bt_fit(w));
    } catch (const srqe::FittingError& e) {
      fit_failures.push_back(e.what());
      scores.erase(group);
    }
  }
  const std::uint64_t seed = o.seed >= 0 ? static_cast<std::uint64_t>(o.seed) : 0;
  srqe::EvalReport report = srqe::group_eval(scores, bt, seed);
  for (const auto& f : fit_failures) report.warnings.push_back(f);
  nlohmann::json j = srqe::to_json(report);
  j["bt_scores"] = nlohmann::json::array();
  for (const auto& [group, s] : bt) j["bt_scores"].push_back(srqe::to_json(s));
  j["config"] = {{"scores", scores_csv}, {"votes", votes_csv}, {"factor", factor},
                 {"seed", seed}};
  for (const auto& w : report.warnings) std::cerr << "warning: " << w << "\n";
  write_text(o.out, j.dump(2) + "\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sparse-representation quality scores for style-transfer images"};
  app.require_subcommand(1);
  CommonOptions opts;
  std::string image_dir;
  std::vector<std::string> triple;
  std::string manifest, votes, scores, factor = "overall";

  auto* ts = app.add_subcommand("train-style-dict", "Learn style dictionaries from a directory");
  add_common(ts, opts);
  ts->add_option("image_dir", image_dir)->required();
  auto* tc = app.add_subcommand("train-content-dict", "Learn content dictionaries");
  add_common(tc, opts);
  tc->add_option("image_dir", image_dir)->required();
  auto* sc = app.add_subcommand("score", "Score one content/style/stylized triple");
  add_common(sc, opts);
  sc->add_option("images", triple, "content style stylized")->required()->expected(3);
  auto* sb = app.add_subcommand("score-batch", "Score every row of a manifest CSV");
  add_common(sb, opts);
  sb->add_option("manifest", manifest)->required();
  auto* bf = app.add_subcommand("bt-fit", "Fit Bradley-Terry scores per group");
  add_common(bf, opts);
  bf->add_option("votes", votes)->required();
  auto* ev = app.add_subcommand("eval", "Evaluate objective scores against pairwise votes");
  add_common(ev, opts);
  ev->add_option("scores", scores)->required();
  ev->add_option("votes", votes)->required();
  ev->add_option("--factor", factor, "content | style | overall");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (ts->parsed()) return cmd_train_style(opts, image_dir);
    if (tc->parsed()) return cmd_train_content(opts, image_dir);
    if (sc->parsed()) return cmd_score(opts, triple);
    if (sb->parsed()) return cmd_score_batch(opts, manifest);
    if (bf->parsed()) return cmd_bt_fit(opts, votes);
    if (ev->parsed()) return cmd_eval(opts, scores, votes, factor);
  } catch (const srqe::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return srqe::exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
