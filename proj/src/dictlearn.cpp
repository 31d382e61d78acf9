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
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <set>
#include <string>

#include <Eigen/Cholesky>

#include "srqe/binary_io.hpp"
#include "srqe/errors.hpp"

namespace srqe {

namespace {

constexpr char kMagic[9] = "SRQEDIC1";
constexpr double kResidualFloor = 1e-9;
constexpr double kTinyNorm = 1e-12;
constexpr double kCollinear = 0.99;

void require_finite(const Eigen::MatrixXd& m, const std::string& what) {
  if (!m.allFinite()) {
    throw InvalidInputError(what + " contains non-finite values");
  }
}

// Rounds every atom to f32 and renormalizes, so the in-memory dictionary is
// exactly what the file stores.
void round_to_float(Eigen::MatrixXd& atoms) {
  for (Eigen::Index j = 0; j < atoms.cols(); ++j) {
    Eigen::VectorXd col = atoms.col(j).cast<float>().cast<double>();
    const double n = col.norm();
    if (n > 0.0) col /= n;
    atoms.col(j) = col.cast<float>().cast<double>();
  }
}

struct ColumnLess {
  const Eigen::MatrixXd* m;
  bool operator()(Eigen::Index a, Eigen::Index b) const {
    const double* pa = m->col(a).data();
    const double* pb = m->col(b).data();
    return std::lexicographical_compare(pa, pa + m->rows(), pb, pb + m->rows());
  }
};

std::vector<Eigen::Index> distinct_nonzero_columns(const Eigen::MatrixXd& samples) {
  std::set<Eigen::Index, ColumnLess> seen(ColumnLess{&samples});
  std::vector<Eigen::Index> out;
  for (Eigen::Index j = 0; j < samples.cols(); ++j) {
    if (samples.col(j).norm() <= kTinyNorm) continue;
    if (seen.insert(j).second) out.push_back(j);
  }
  return out;
}

void update_atoms(Eigen::MatrixXd& d, const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  for (Eigen::Index j = 0; j < d.cols(); ++j) {
    const double ajj = a(j, j);
    if (ajj < kTinyNorm) continue;
    Eigen::VectorXd u = (b.col(j) - d * a.col(j)) / ajj + d.col(j);
    const double n = u.norm();
    if (n < kTinyNorm) continue;
    d.col(j) = u / n;
  }
}

// Walks `candidates` in order and takes up to `count` samples whose directions
// are not collinear with each other or with the columns of `keep`. Falls back
// to cycling through the candidates when too few such samples exist.
std::vector<Eigen::Index> pick_spread(const Eigen::MatrixXd& samples,
                                      const std::vector<Eigen::Index>& candidates,
                                      const Eigen::MatrixXd& keep, std::size_t count) {
  std::vector<Eigen::Index> out;
  if (candidates.empty()) return out;
  Eigen::MatrixXd taken(samples.rows(), keep.cols() + static_cast<Eigen::Index>(count));
  taken.leftCols(keep.cols()) = keep;
  Eigen::Index n_taken = keep.cols();
  std::vector<char> used(candidates.size(), 0);
  for (std::size_t c = 0; c < candidates.size() && out.size() < count; ++c) {
    const Eigen::VectorXd v = samples.col(candidates[c]).normalized();
    if (n_taken > 0 &&
        (taken.leftCols(n_taken).transpose() * v).cwiseAbs().maxCoeff() > kCollinear) {
      continue;
    }
    taken.col(n_taken++) = v;
    used[c] = 1;
    out.push_back(candidates[c]);
  }
  for (std::size_t c = 0; out.size() < count; c = (c + 1) % candidates.size()) {
    if (!used[c] || std::all_of(used.begin(), used.end(), [](char u) { return u; })) {
      used[c] = 1;
      out.push_back(candidates[c]);
    }
  }
  return out;
}

std::vector<double> reconstruction_errors(const Eigen::MatrixXd& samples,
                                          const Eigen::MatrixXd& atoms, int tau) {
  const OmpCoder coder(atoms);
  std::vector<double> err(samples.cols());
  for (Eigen::Index i = 0; i < samples.cols(); ++i) {
    const Eigen::VectorXd y = samples.col(i);
    const SparseCode code = coder.encode(y, tau);
    Eigen::VectorXd r = y;
    for (Eigen::Index s : code.support) r -= code.coefficients(s) * atoms.col(s);
    err[i] = r.norm();
  }
  return err;
}

}  // namespace

const Dictionary* DictionarySet::find(DictionaryKey key) const {
  for (const Dictionary& d : entries) {
    if (d.key == key) return &d;
  }
  return nullptr;
}

void save_dictionaries(const std::filesystem::path& path, const DictionarySet& set) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw InvalidInputError("cannot write dictionary file: " + path.string());
  }
  out.write(kMagic, 8);
  binary::write_le<std::uint8_t>(out, static_cast<std::uint8_t>(set.kind));
  binary::write_le<std::uint32_t>(out, static_cast<std::uint32_t>(set.entries.size()));
  for (const Dictionary& d : set.entries) {
    binary::write_le<std::uint32_t>(out, d.key.first);
    binary::write_le<std::uint32_t>(out, d.key.second);
    binary::write_le<std::uint32_t>(out, static_cast<std::uint32_t>(d.dim()));
    binary::write_le<std::uint32_t>(out, static_cast<std::uint32_t>(d.n_atoms()));
    binary::write_le<std::uint32_t>(out, d.tau);
    binary::write_le<std::uint64_t>(out, d.seed);
    const Eigen::VectorXf flat = Eigen::Map<const Eigen::VectorXd>(d.atoms.data(), d.atoms.size())
                                     .cast<float>();
    binary::write_f32_array(out, flat.data(), static_cast<std::size_t>(flat.size()));
  }
  if (!out) {
    throw InvalidInputError("write failed: " + path.string());
  }
}

DictionarySet load_dictionaries(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw InvalidInputError("cannot open dictionary file: " + path.string());
  }
  binary::expect_magic(in, kMagic, path.string());
  DictionarySet set;
  const auto kind = binary::read_le<std::uint8_t>(in, "dictionary kind");
  if (kind > 1) {
    throw DecodeError("unknown dictionary kind " + std::to_string(kind));
  }
  set.kind = static_cast<DictionaryKind>(kind);
  const auto count = binary::read_le<std::uint32_t>(in, "sub-dictionary count");
  for (std::uint32_t i = 0; i < count; ++i) {
    Dictionary d;
    d.kind = set.kind;
    d.key.first = binary::read_le<std::uint32_t>(in, "key");
    d.key.second = binary::read_le<std::uint32_t>(in, "key");
    const auto dim = binary::read_le<std::uint32_t>(in, "dim");
    const auto n = binary::read_le<std::uint32_t>(in, "n_atoms");
    d.tau = binary::read_le<std::uint32_t>(in, "tau");
    d.seed = binary::read_le<std::uint64_t>(in, "seed");
    Eigen::VectorXf flat(static_cast<Eigen::Index>(dim) * n);
    binary::read_f32_array(in, flat.data(), static_cast<std::size_t>(flat.size()), "atoms");
    d.atoms = Eigen::Map<const Eigen::MatrixXf>(flat.data(), dim, n).cast<double>();
    if (!d.atoms.allFinite()) {
      throw DecodeError("non-finite atoms in " + path.string());
    }
    set.entries.push_back(std::move(d));
  }
  return set;
}

OmpCoder::OmpCoder(const Eigen::MatrixXd& atoms)
    : atoms_(atoms), gram_(atoms.transpose() * atoms) {}

SparseCode OmpCoder::encode(const Eigen::VectorXd& signal, int tau,
                            std::vector<double>* residual_norms) const {
  if (signal.size() != atoms_.rows()) {
    throw InvalidInputError("signal length " + std::to_string(signal.size()) +
                            " does not match dictionary dimension " +
                            std::to_string(atoms_.rows()));
  }
  if (tau < 1) {
    throw InvalidInputError("sparsity bound must be at least 1");
  }
  const Eigen::Index n = atoms_.cols();
  SparseCode code;
  code.coefficients = Eigen::VectorXd::Zero(n);
  double rnorm = signal.norm();
  if (residual_norms) residual_norms->assign(1, rnorm);
  if (rnorm < kResidualFloor) return code;

  const Eigen::VectorXd corr0 = atoms_.transpose() * signal;
  Eigen::VectorXd corr = corr0;
  const Eigen::Index max_atoms = std::min<Eigen::Index>(tau, n);
  std::vector<Eigen::Index> support;
  std::vector<char> in_support(n, 0);
  Eigen::MatrixXd chol = Eigen::MatrixXd::Zero(max_atoms, max_atoms);
  Eigen::VectorXd alpha;

  while (static_cast<Eigen::Index>(support.size()) < max_atoms) {
    Eigen::Index best = -1;
    double best_val = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (in_support[j]) continue;
      const double v = std::abs(corr(j));
      if (v > best_val) {
        best_val = v;
        best = j;
      }
    }
    if (best < 0) break;

    const auto k = static_cast<Eigen::Index>(support.size());
    const double gbb = gram_(best, best);
    if (k == 0) {
      if (gbb <= kTinyNorm) break;
      chol(0, 0) = std::sqrt(gbb);
    } else {
      Eigen::VectorXd g(k);
      for (Eigen::Index i = 0; i < k; ++i) g(i) = gram_(support[i], best);
      const Eigen::VectorXd w =
          chol.topLeftCorner(k, k).triangularView<Eigen::Lower>().solve(g);
      const double d2 = gbb - w.squaredNorm();
      if (d2 <= 1e-10 * gbb) break;  // dependent on the current support
      chol.block(k, 0, 1, k) = w.transpose();
      chol(k, k) = std::sqrt(d2);
    }
    support.push_back(best);
    in_support[best] = 1;

    const Eigen::Index m = k + 1;
    Eigen::VectorXd rhs(m);
    for (Eigen::Index i = 0; i < m; ++i) rhs(i) = corr0(support[i]);
    const auto lower = chol.topLeftCorner(m, m).triangularView<Eigen::Lower>();
    alpha = lower.transpose().solve(lower.solve(rhs));

    Eigen::VectorXd residual = signal;
    for (Eigen::Index i = 0; i < m; ++i) residual -= alpha(i) * atoms_.col(support[i]);
    rnorm = residual.norm();
    if (residual_norms) residual_norms->push_back(rnorm);

    corr = corr0;
    for (Eigen::Index i = 0; i < m; ++i) corr -= alpha(i) * gram_.col(support[i]);
    if (rnorm < kResidualFloor) break;
  }
  for (std::size_t i = 0; i < support.size(); ++i) {
    code.coefficients(support[i]) = alpha(static_cast<Eigen::Index>(i));
  }
  code.support = support;
  std::sort(code.support.begin(), code.support.end());
  return code;
}

SparseCode omp_encode(const Eigen::VectorXd& signal, const Dictionary& dict, int tau,
                      std::vector<double>* residual_norms) {
  return OmpCoder(dict.atoms).encode(signal, tau, residual_norms);
}

double mean_reconstruction_error(const Eigen::MatrixXd& samples, const Eigen::MatrixXd& atoms,
                                 int tau) {
  const auto err = reconstruction_errors(samples, atoms, tau);
  return std::accumulate(err.begin(), err.end(), 0.0) / static_cast<double>(err.size());
}

Dictionary odl_train(const Eigen::MatrixXd& samples, const OdlParams& params,
                     OdlReport* report) {
  if (samples.cols() == 0 || samples.rows() == 0) {
    throw InvalidInputError("dictionary training needs a non-empty sample matrix");
  }
  require_finite(samples, "training samples");
  if (params.n_atoms < 1 || params.tau < 1 || params.epochs < 0 || params.batch_size < 1) {
    throw ConfigurationError("invalid dictionary learning parameters");
  }
  OdlReport local;
  OdlReport& rep = report ? *report : local;
  rep = OdlReport{};

  const Eigen::Index dim = samples.rows();
  const Eigen::Index n_samples = samples.cols();
  const Eigen::Index n_atoms = params.n_atoms;
  std::mt19937_64 rng(params.seed);

  std::vector<Eigen::Index> distinct = distinct_nonzero_columns(samples);
  if (distinct.empty()) {
    throw DegenerateInputError("all training samples are zero");
  }
  std::shuffle(distinct.begin(), distinct.end(), rng);
  if (static_cast<Eigen::Index>(distinct.size()) < n_atoms) {
    rep.undersampled = true;
    if (!params.allow_duplicates) {
      throw InvalidInputError("cannot initialize " + std::to_string(n_atoms) + " atoms from " +
                              std::to_string(distinct.size()) + " distinct samples");
    }
  }
  Eigen::MatrixXd d(dim, n_atoms);
  const auto init = pick_spread(samples, distinct, Eigen::MatrixXd(dim, 0),
                                static_cast<std::size_t>(n_atoms));
  for (Eigen::Index j = 0; j < n_atoms; ++j) {
    d.col(j) = samples.col(init[static_cast<std::size_t>(j)]).normalized();
  }

  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n_atoms, n_atoms);
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(dim, n_atoms);
  double kept_error = mean_reconstruction_error(samples, d, params.tau);
  std::vector<Eigen::Index> order(n_samples);
  std::iota(order.begin(), order.end(), 0);

  for (int epoch = 0; epoch < params.epochs; ++epoch) {
    const Eigen::MatrixXd d_prev = d;
    const Eigen::MatrixXd a_prev = a;
    const Eigen::MatrixXd b_prev = b;
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<char> used(n_atoms, 0);

    for (Eigen::Index start = 0; start < n_samples; start += params.batch_size) {
      const Eigen::Index stop = std::min<Eigen::Index>(start + params.batch_size, n_samples);
      const OmpCoder coder(d);
      for (Eigen::Index i = start; i < stop; ++i) {
        const Eigen::VectorXd y = samples.col(order[i]);
        const SparseCode code = coder.encode(y, params.tau);
        for (Eigen::Index s : code.support) {
          used[s] = 1;
          const double cs = code.coefficients(s);
          for (Eigen::Index t : code.support) a(s, t) += cs * code.coefficients(t);
          b.col(s) += cs * y;
        }
      }
      update_atoms(d, a, b);
    }

    // Unused atoms and near copies of an earlier atom are dead.
    std::vector<Eigen::Index> dead, alive;
    for (Eigen::Index j = 0; j < n_atoms; ++j) {
      bool copy = false;
      for (Eigen::Index k : alive) {
        if (std::abs(d.col(j).dot(d.col(k))) > kCollinear) {
          copy = true;
          break;
        }
      }
      (used[j] && !copy ? alive : dead).push_back(j);
    }
    if (!dead.empty()) {
      const auto err = reconstruction_errors(samples, d, params.tau);
      std::vector<Eigen::Index> worst;
      for (Eigen::Index i = 0; i < n_samples; ++i) {
        if (samples.col(i).norm() > kTinyNorm) worst.push_back(i);
      }
      std::stable_sort(worst.begin(), worst.end(),
                       [&](Eigen::Index x, Eigen::Index y) { return err[x] > err[y]; });
      Eigen::MatrixXd keep(dim, static_cast<Eigen::Index>(alive.size()));
      for (std::size_t i = 0; i < alive.size(); ++i) {
        keep.col(static_cast<Eigen::Index>(i)) = d.col(alive[i]);
      }
      const auto seeds = pick_spread(samples, worst, keep, dead.size());
      for (std::size_t i = 0; i < dead.size(); ++i) {
        const Eigen::Index j = dead[i];
        d.col(j) = samples.col(seeds[i]).normalized();
        a.row(j).setZero();
        a.col(j).setZero();
        b.col(j).setZero();
      }
      rep.reseeded_atoms += static_cast<int>(dead.size());
    }

    const double candidate = mean_reconstruction_error(samples, d, params.tau);
    const bool accept = candidate <= kept_error;
    if (accept) {
      kept_error = candidate;
    } else {
      d = d_prev;
      a = a_prev;
      b = b_prev;
    }
    rep.candidate_errors.push_back(candidate);
    rep.accepted.push_back(accept);
    rep.epoch_errors.push_back(kept_error);
  }

  round_to_float(d);
  Dictionary dict;
  dict.atoms = std::move(d);
  dict.tau = static_cast<std::uint32_t>(params.tau);
  dict.seed = params.seed;
  return dict;
}

DictionarySet train_style_dicts(const std::vector<StyleMatrix>& style_matrices,
                                const std::array<int, 5>& atoms, const TrainOptions& options,
                                std::vector<OdlReport>* reports) {
  if (style_matrices.size() != 5) {
    throw InvalidInputError("expected five style matrices");
  }
  DictionarySet set;
  set.kind = DictionaryKind::kStyle;
  if (reports) reports->assign(5, OdlReport{});
  for (int l = 0; l < 5; ++l) {
    OdlParams p;
    p.n_atoms = atoms[l];
    p.tau = options.tau;
    p.epochs = options.epochs;
    p.batch_size = options.batch_size;
    p.seed = options.seed + static_cast<std::uint64_t>(l);
    p.allow_duplicates = options.allow_duplicates;
    Dictionary d = odl_train(style_matrices[l].columns, p, reports ? &(*reports)[l] : nullptr);
    d.kind = DictionaryKind::kStyle;
    d.key = {static_cast<std::uint32_t>(style_matrices[l].layer), 0};
    set.entries.push_back(std::move(d));
  }
  return set;
}

DictionarySet train_content_dicts(const std::vector<ImageTensor>& gray_images,
                                  const ContentTrainParams& params, const TrainOptions& options,
                                  std::vector<OdlReport>* reports, bool* exhausted) {
  if (gray_images.empty()) {
    throw InvalidInputError("content dictionaries need at least one training image");
  }
  const int z_count = params.pyramid.scales;
  const int o_count = params.pyramid.octaves;
  std::vector<std::vector<Eigen::MatrixXd>> pooled(static_cast<std::size_t>(z_count * o_count));
  for (const ImageTensor& img : gray_images) {
    const DoGPyramid pyr = build_pyramid(img, params.pyramid);
    for (int o = 1; o <= o_count; ++o) {
      for (int z = 1; z <= z_count; ++z) {
        pooled[(o - 1) * z_count + (z - 1)].push_back(
            extract_patches(pyr.at(z, o), params.pyramid.patch_size, params.stride).patches);
      }
    }
  }
  DictionarySet set;
  set.kind = DictionaryKind::kContent;
  if (reports) reports->clear();
  if (exhausted) *exhausted = false;
  for (int o = 1; o <= o_count; ++o) {
    for (int z = 1; z <= z_count; ++z) {
      const auto& parts = pooled[(o - 1) * z_count + (z - 1)];
      Eigen::Index total = 0;
      for (const auto& m : parts) total += m.cols();
      PatchSet all;
      all.patch_size = params.pyramid.patch_size;
      all.patches.resize(parts.front().rows(), total);
      Eigen::Index at = 0;
      for (const auto& m : parts) {
        all.patches.middleCols(at, m.cols()) = m;
        at += m.cols();
      }
      all.means.assign(static_cast<std::size_t>(total), 0.0);
      all.positions.assign(static_cast<std::size_t>(total), {0, 0});
      const PatchSet chosen = select_training_patches(all, params.patches_per_key);
      if (exhausted && chosen.exhausted) *exhausted = true;

      OdlParams p;
      p.n_atoms = params.atoms;
      p.tau = options.tau;
      p.epochs = options.epochs;
      p.batch_size = options.batch_size;
      p.seed = options.seed + static_cast<std::uint64_t>((o - 1) * z_count + (z - 1));
      p.allow_duplicates = options.allow_duplicates;
      OdlReport rep;
      Dictionary d = odl_train(chosen.patches, p, &rep);
      d.kind = DictionaryKind::kContent;
      d.key = {static_cast<std::uint32_t>(z), static_cast<std::uint32_t>(o)};
      set.entries.push_back(std::move(d));
      if (reports) reports->push_back(std::move(rep));
    }
  }
  return set;
}

}  // namespace srqe
