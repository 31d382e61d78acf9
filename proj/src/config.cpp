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

#include "srqe/config.hpp"

#include <fstream>
#include <sstream>

#include "srqe/csv.hpp"
#include "srqe/errors.hpp"

namespace srqe {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string strip_comment(const std::string& line) {
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') quoted = !quoted;
    if (line[i] == '#' && !quoted) return line.substr(0, i);
  }
  return line;
}

std::string as_string(const std::string& v, const std::string& key) {
  if (v.size() >= 2 && v.front() == '"' && v.back() == '"') return v.substr(1, v.size() - 2);
  if (v.size() >= 2 && v.front() == '\'' && v.back() == '\'') return v.substr(1, v.size() - 2);
  if (v.empty()) throw InvalidInputError("config key '" + key + "' has an empty value");
  return v;
}

double as_double(const std::string& v, const std::string& key) {
  return parse_double(v, "config key '" + key + "'");
}

int as_int(const std::string& v, const std::string& key) {
  const double d = as_double(v, key);
  if (d != static_cast<double>(static_cast<long long>(d))) {
    throw InvalidInputError("config key '" + key + "' must be an integer");
  }
  return static_cast<int>(d);
}

bool as_bool(const std::string& v, const std::string& key) {
  if (v == "true") return true;
  if (v == "false") return false;
  throw InvalidInputError("config key '" + key + "' must be true or false");
}

std::vector<double> as_list(const std::string& v, const std::string& key) {
  if (v.size() < 2 || v.front() != '[' || v.back() != ']') {
    throw InvalidInputError("config key '" + key + "' must be an array like [1, 2]");
  }
  std::vector<double> out;
  std::stringstream ss(v.substr(1, v.size() - 2));
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(as_double(item, key));
  }
  return out;
}

std::array<int, 5> as_five(const std::string& v, const std::string& key) {
  const auto list = as_list(v, key);
  if (list.size() != 5) {
    throw InvalidInputError("config key '" + key + "' needs exactly five entries");
  }
  std::array<int, 5> out{};
  for (int i = 0; i < 5; ++i) out[i] = as_int(std::to_string(list[i]), key);
  return out;
}

}  // namespace

PyramidParams RunConfig::pyramid() const {
  PyramidParams p;
  p.scales = scales;
  p.octaves = octaves;
  p.sigmas = sigmas;
  p.k = k;
  p.patch_size = patch_size;
  return p;
}

TrainOptions RunConfig::train_options() const {
  TrainOptions t;
  t.tau = tau;
  t.epochs = epochs;
  t.batch_size = batch_size;
  t.seed = seed;
  return t;
}

ContentTrainParams RunConfig::content_train_params() const {
  ContentTrainParams c;
  c.pyramid = pyramid();
  c.atoms = content_atoms;
  c.patches_per_key = train_patches;
  c.stride = train_stride;
  return c;
}

void RunConfig::set(const std::string& key, const std::string& raw) {
  const std::string v = trim(raw);
  if (key == "weights") weights = as_string(v, key);
  else if (key == "style_dict") style_dict = as_string(v, key);
  else if (key == "content_dict") content_dict = as_string(v, key);
  else if (key == "image_size") image_size = as_int(v, key);
  else if (key == "scales") scales = as_int(v, key);
  else if (key == "octaves") octaves = as_int(v, key);
  else if (key == "sigmas") sigmas = as_list(v, key);
  else if (key == "k") k = as_double(v, key);
  else if (key == "patch_size") patch_size = as_int(v, key);
  else if (key == "train_stride") train_stride = as_int(v, key);
  else if (key == "tau") tau = as_int(v, key);
  else if (key == "epochs") epochs = as_int(v, key);
  else if (key == "batch_size") batch_size = as_int(v, key);
  else if (key == "style_atoms") style_atoms = as_five(v, key);
  else if (key == "style_blocks") style_blocks = as_five(v, key);
  else if (key == "content_atoms") content_atoms = as_int(v, key);
  else if (key == "train_patches") train_patches = as_int(v, key);
  else if (key == "eta") eta = as_double(v, key);
  else if (key == "w1") pooling.w1 = as_double(v, key);
  else if (key == "w2") pooling.w2 = as_double(v, key);
  else if (key == "w3") pooling.w3 = as_double(v, key);
  else if (key == "w4") pooling.w4 = as_double(v, key);
  else if (key == "c") pooling.c = as_double(v, key);
  else if (key == "d") pooling.d = as_double(v, key);
  else if (key == "pooling") pooling.mode = parse_pooling_mode(as_string(v, key));
  else if (key == "normalized_pooling") pooling.normalized_content = as_bool(v, key);
  else if (key == "similarity_form") similarity_form = parse_similarity_form(as_string(v, key));
  else if (key == "seed") seed = static_cast<std::uint64_t>(as_int(v, key));
  else if (key == "workers") workers = as_int(v, key);
  else throw InvalidInputError("unknown config key '" + key + "'");
}

void RunConfig::validate() const {
  auto fail = [](const std::string& msg) { throw InvalidInputError("config: " + msg); };
  if (scales < 1 || scales > 5) fail("scales must be in 1..5");
  if (scales > static_cast<int>(sigmas.size())) fail("scales exceeds the sigma ladder length");
  if (octaves < 1) fail("octaves must be >= 1");
  if (patch_size != 6 && patch_size != 8) fail("patch_size must be 6 or 8");
  if (!(k > 1.0)) fail("k must exceed 1");
  for (double s : sigmas) {
    if (s < 0.0) fail("sigmas must be non-negative");
  }
  if (image_size < kMinNetworkInput) fail("image_size below the network minimum");
  if (tau < 1) fail("tau must be >= 1");
  if (epochs < 0) fail("epochs must be >= 0");
  if (batch_size < 1) fail("batch_size must be >= 1");
  if (train_stride < 1) fail("train_stride must be >= 1");
  if (content_atoms < 1 || train_patches < 1) fail("content_atoms and train_patches must be >= 1");
  for (int u : style_atoms) {
    if (u < 1) fail("style_atoms entries must be >= 1");
  }
  if (!(eta > 0.0)) fail("eta must be positive");
  if (!(pooling.w1 > 0.0 && pooling.w2 > 0.0 && pooling.w3 > 0.0 && pooling.w4 > 0.0)) {
    fail("pooling weights must be positive");
  }
  if (pooling.c < 0.0 || pooling.d < 0.0) fail("c and d must be non-negative");
  if (workers < 1) fail("workers must be >= 1");
}

void RunConfig::require_files(bool weights_file, bool style_file, bool content_file) const {
  auto need = [](const std::filesystem::path& p, const std::string& what) {
    if (p.empty()) throw InvalidInputError(what + " path not configured");
    if (!std::filesystem::exists(p)) throw InvalidInputError(what + " not found: " + p.string());
  };
  if (weights_file) need(weights, "weight file");
  if (style_file) need(style_dict, "style dictionary");
  if (content_file) need(content_dict, "content dictionary");
}

nlohmann::json RunConfig::to_json() const {
  return {{"weights", weights.string()},
          {"style_dict", style_dict.string()},
          {"content_dict", content_dict.string()},
          {"image_size", image_size},
          {"scales", scales},
          {"octaves", octaves},
          {"sigmas", sigmas},
          {"k", k},
          {"patch_size", patch_size},
          {"train_stride", train_stride},
          {"tau", tau},
          {"epochs", epochs},
          {"batch_size", batch_size},
          {"style_atoms", style_atoms},
          {"style_blocks", style_blocks},
          {"content_atoms", content_atoms},
          {"train_patches", train_patches},
          {"eta", eta},
          {"w1", pooling.w1},
          {"w2", pooling.w2},
          {"w3", pooling.w3},
          {"w4", pooling.w4},
          {"c", pooling.c},
          {"d", pooling.d},
          {"pooling", srqe::to_string(pooling.mode)},
          {"normalized_pooling", pooling.normalized_content},
          {"similarity_form", srqe::to_string(similarity_form)},
          {"seed", seed},
          {"workers", workers}};
}

void apply_config_text(RunConfig& config, const std::string& text, const std::string& origin) {
  std::stringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(strip_comment(line));
    if (line.empty() || line.front() == '[') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw InvalidInputError(origin + ":" + std::to_string(line_no) + ": expected key = value");
    }
    try {
      config.set(trim(line.substr(0, eq)), line.substr(eq + 1));
    } catch (const Error& e) {
      throw InvalidInputError(origin + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw InvalidInputError("cannot open config file: " + path.string());
  }
  std::stringstream buf;
  buf << in.rdbuf();
  RunConfig config;
  apply_config_text(config, buf.str(), path.string());
  // Relative paths in the file resolve against the file's directory.
  const auto base = path.parent_path();
  for (auto* p : {&config.weights, &config.style_dict, &config.content_dict}) {
    if (!p->empty() && p->is_relative()) *p = base / *p;
  }
  return config;
}

}  // namespace srqe
