// baselines/svm.cc

// Copyright 2026  audiotag authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "audiotag/baselines/svm.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <spdlog/spdlog.h>

#include "audiotag/nnet/model-io.h"

namespace audiotag {

namespace {

void CheckLabels(const Matrix &x, std::span<const int> y) {
  if (static_cast<size_t>(x.rows()) != y.size())
    throw ShapeError("one label per instance is required");
  int pos = 0, neg = 0;
  for (int v : y) {
    if (v == 1)
      pos++;
    else if (v == -1)
      neg++;
    else
      throw DataError("SVM labels must be -1 or +1");
  }
  if (pos == 0 || neg == 0)
    throw DataError("degenerate SVM problem: only one class present");
}

void FillDiagnostics(const Matrix &x, std::span<const int> y,
                     LinearSvmModel *m) {
  Vector f = m->Margins(x);
  m->total_slack = 0.0;
  m->num_violations = 0;
  for (Eigen::Index i = 0; i < f.size(); i++) {
    Real margin = y[static_cast<size_t>(i)] * f(i);
    if (margin < 1.0) {
      m->total_slack += 1.0 - margin;
      m->num_violations++;
    }
  }
  m->objective = 0.5 * m->w.squaredNorm() + m->A * m->total_slack;
}

}  // namespace

Real SvmObjective(const Vector &w, Real b, const Matrix &x,
                  std::span<const int> y, Real A) {
  Vector f = (x * w).array() + b;
  Real slack = 0.0;
  for (Eigen::Index i = 0; i < f.size(); i++)
    slack += std::max(0.0, 1.0 - y[static_cast<size_t>(i)] * f(i));
  return 0.5 * w.squaredNorm() + A * slack;
}

Real OptimalBias(const Vector &scores, std::span<const int> y) {
  // Each hinge term is convex and piecewise linear in b with one kink at
  // y_i - s_i; the slope starts at -(#positives) and rises by one at every
  // kink, so the minimum is reached between the P-th and (P+1)-th kinks.
  const size_t n = y.size();
  std::vector<Real> kinks(n);
  size_t num_pos = 0;
  for (size_t i = 0; i < n; i++) {
    kinks[i] = y[i] - scores(static_cast<Eigen::Index>(i));
    if (y[i] > 0) num_pos++;
  }
  std::sort(kinks.begin(), kinks.end());
  if (num_pos == 0) return kinks.front();
  if (num_pos == n) return kinks.back();
  return 0.5 * (kinks[num_pos - 1] + kinks[num_pos]);
}

LinearSvmModel LinearSvmFit(const Matrix &x, std::span<const int> y,
                            const SvmOptions &opts) {
  CheckLabels(x, y);
  if (!(opts.A > 0.0)) throw ConfigError("SVM regularisation A must be > 0");
  if (opts.epochs < 1) throw ConfigError("SVM needs at least one epoch");
  const Eigen::Index n = x.rows(), d = x.cols();

  // Dual coordinate descent on the problem with the bias folded in as a
  // weight on a constant unit feature; alpha_i in [0, A].
  Vector alpha = Vector::Zero(n);
  Vector w = Vector::Zero(d);
  Real w_bias = 0.0;
  Vector q = x.rowwise().squaredNorm().array() + 1.0;

  LinearSvmModel best;
  best.A = opts.A;
  best.w = w;
  best.b = OptimalBias(Vector::Zero(n), y);
  best.objective = SvmObjective(best.w, best.b, x, y, opts.A);

  auto consider = [&](const Vector &cand, Real cb) {
    Real obj = SvmObjective(cand, cb, x, y, opts.A);
    if (obj < best.objective) {
      best.w = cand;
      best.b = cb;
      best.objective = obj;
    }
  };

  std::vector<Eigen::Index> order(static_cast<size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  Rng rng(opts.seed);
  for (int epoch = 1; epoch <= opts.epochs; epoch++) {
    std::shuffle(order.begin(), order.end(), rng);
    Real pg_max = -std::numeric_limits<Real>::infinity();
    Real pg_min = std::numeric_limits<Real>::infinity();
    for (Eigen::Index i : order) {
      const Real yi = y[static_cast<size_t>(i)];
      const Real g = yi * (x.row(i).dot(w) + w_bias) - 1.0;
      Real pg = g;
      if (alpha(i) <= 0.0) pg = std::min(g, 0.0);
      else if (alpha(i) >= opts.A) pg = std::max(g, 0.0);
      pg_max = std::max(pg_max, pg);
      pg_min = std::min(pg_min, pg);
      if (std::abs(pg) < 1e-12) continue;
      const Real old = alpha(i);
      alpha(i) = std::clamp(old - g / q(i), 0.0, opts.A);
      const Real step = (alpha(i) - old) * yi;
      w += step * x.row(i).transpose();
      w_bias += step;
    }
    // The folded bias is slightly regularised; the exact one never hurts.
    consider(w, w_bias);
    consider(w, OptimalBias(x * w, y));
    if (pg_max - pg_min < opts.tolerance) break;
  }
  FillDiagnostics(x, y, &best);
  return best;
}

Real BagScore(const LinearSvmModel &m, const Matrix &instances) {
  if (instances.rows() == 0) throw DataError("empty bag");
  return m.Margins(instances).maxCoeff();
}

MisvmResult MisvmTrain(std::span<const MilBag> bags, const MisvmOptions &opts) {
  if (opts.max_outer_iterations < 1)
    throw ConfigError("MI-SVM needs at least one outer iteration");
  Eigen::Index dim = -1, num_neg_instances = 0;
  std::vector<size_t> pos_bags;
  for (size_t i = 0; i < bags.size(); i++) {
    const MilBag &bag = bags[i];
    if (bag.instances.rows() == 0) throw DataError("bag " + bag.id + " is empty");
    if (dim < 0) dim = bag.instances.cols();
    if (bag.instances.cols() != dim)
      throw ShapeError("bag " + bag.id + " has a different dimension");
    if (bag.label == 1)
      pos_bags.push_back(i);
    else if (bag.label == -1)
      num_neg_instances += bag.instances.rows();
    else
      throw DataError("bag labels must be -1 or +1");
  }
  if (pos_bags.empty() || num_neg_instances == 0)
    throw DataError("MI-SVM needs positive and negative bags");

  const auto num_pos = static_cast<Eigen::Index>(pos_bags.size());
  Matrix x(num_pos + num_neg_instances, dim);
  std::vector<int> y(static_cast<size_t>(x.rows()), -1);
  for (Eigen::Index p = 0; p < num_pos; p++) {
    x.row(p) = bags[pos_bags[static_cast<size_t>(p)]].instances.colwise().mean();
    y[static_cast<size_t>(p)] = 1;
  }
  Eigen::Index r = num_pos;
  for (const MilBag &bag : bags) {
    if (bag.label != -1) continue;
    x.middleRows(r, bag.instances.rows()) = bag.instances;
    r += bag.instances.rows();
  }

  MisvmResult res;
  res.representatives.assign(bags.size(), -1);
  LinearSvmModel best;
  std::vector<Eigen::Index> best_reps;
  for (int it = 1; it <= opts.max_outer_iterations; it++) {
    LinearSvmModel m = LinearSvmFit(x, y, opts.svm);
    res.objective_history.push_back(m.objective);
    res.outer_iterations = it;
    if (it == 1 || m.objective < best.objective) {
      best = m;
      best_reps = res.representatives;
    }
    res.model = m;

    bool changed = false;
    for (Eigen::Index p = 0; p < num_pos; p++) {
      size_t bag = pos_bags[static_cast<size_t>(p)];
      Eigen::Index j;
      m.Margins(bags[bag].instances).maxCoeff(&j);
      if (bags[bag].instances.row(j) != x.row(p)) {
        x.row(p) = bags[bag].instances.row(j);
        changed = true;
      }
      res.representatives[bag] = j;
    }
    if (!changed) {
      res.converged = true;
      return res;
    }
  }
  spdlog::warn("MI-SVM did not settle within {} outer iterations",
               opts.max_outer_iterations);
  res.model = best;
  res.representatives = best_reps;
  return res;
}

Vector ChunkSvmFeatures(const FeatureMatrix &m) {
  const Eigen::Index n = m.NumFrames(), d = m.Dim();
  if (n == 0) throw DataError("chunk " + m.chunk_id + " has no frames");
  Vector out(d + d * (d + 1) / 2);
  RowVector mean = m.values.colwise().mean();
  out.head(d) = mean.transpose();
  Matrix cov = Matrix::Zero(d, d);
  if (n < 2) {
    spdlog::warn("chunk {} has a single frame; covariance set to zero",
                 m.chunk_id);
  } else {
    Matrix c = m.values.rowwise() - mean;
    cov = (c.transpose() * c) / static_cast<Real>(n);
  }
  Eigen::Index k = d;
  for (Eigen::Index i = 0; i < d; i++)
    for (Eigen::Index j = i; j < d; j++) out(k++) = cov(i, j);
  return out;
}

namespace {

Vector Standardize(const Vector &v, const NormStats &s) {
  return (v - s.mean).cwiseQuotient(s.stddev);
}

std::vector<int> TagLabels(std::span<const TagSet> tags, int k) {
  std::vector<int> y;
  for (const auto &t : tags) y.push_back(t.Has(k) ? 1 : -1);
  return y;
}

}  // namespace

SvmTagModel TrainChunkSvm(std::span<const FeatureMatrix> chunks,
                          std::span<const TagSet> tags,
                          const SvmOptions &opts) {
  if (chunks.size() != tags.size() || chunks.empty())
    throw ShapeError("one tag set per chunk is required");
  FeatureMatrix pooled;
  Vector first = ChunkSvmFeatures(chunks[0]);
  pooled.values.resize(static_cast<Eigen::Index>(chunks.size()), first.size());
  pooled.values.row(0) = first.transpose();
  for (size_t i = 1; i < chunks.size(); i++)
    pooled.values.row(static_cast<Eigen::Index>(i)) =
        ChunkSvmFeatures(chunks[i]).transpose();

  SvmTagModel model;
  model.kind = SvmTagModel::Kind::kChunk;
  model.features = chunks[0].kind;
  model.options.svm = opts;
  model.norm = FitNormStats(std::span<const FeatureMatrix>(&pooled, 1));
  Matrix x = ApplyNorm(pooled, model.norm).values;
  for (int k = 0; k < kNumTags; k++) {
    SvmOptions o = opts;
    o.seed = DeriveSeed(opts.seed, std::string("chunksvm-") + TagLetter(k));
    model.tags[static_cast<size_t>(k)] = LinearSvmFit(x, TagLabels(tags, k), o);
  }
  return model;
}

SvmTagModel TrainMisvm(std::span<const FeatureMatrix> chunks,
                       std::span<const TagSet> tags,
                       const MisvmOptions &opts) {
  if (chunks.size() != tags.size() || chunks.empty())
    throw ShapeError("one tag set per chunk is required");
  SvmTagModel model;
  model.kind = SvmTagModel::Kind::kMultiInstance;
  model.features = chunks[0].kind;
  model.options = opts;
  model.norm = FitNormStats(chunks);
  std::vector<MilBag> bags(chunks.size());
  for (size_t i = 0; i < chunks.size(); i++) {
    bags[i].id = chunks[i].chunk_id;
    bags[i].instances = ApplyNorm(chunks[i], model.norm).values;
  }
  for (int k = 0; k < kNumTags; k++) {
    for (size_t i = 0; i < chunks.size(); i++)
      bags[i].label = tags[i].Has(k) ? 1 : -1;
    MisvmOptions o = opts;
    o.svm.seed = DeriveSeed(opts.svm.seed, std::string("misvm-") + TagLetter(k));
    MisvmResult r = MisvmTrain(bags, o);
    spdlog::info("tag {}: MI-SVM {} after {} round(s), objective {:.4f}",
                 TagLetter(k), r.converged ? "settled" : "stopped",
                 r.outer_iterations, r.model.objective);
    model.tags[static_cast<size_t>(k)] = std::move(r.model);
  }
  return model;
}

Vector SvmTagScores(const SvmTagModel &model, const FeatureMatrix &chunk) {
  Vector s(kNumTags);
  if (model.kind == SvmTagModel::Kind::kChunk) {
    Vector v = Standardize(ChunkSvmFeatures(chunk), model.norm);
    for (int k = 0; k < kNumTags; k++)
      s(k) = model.tags[static_cast<size_t>(k)].Margin(v);
  } else {
    if (chunk.Dim() != model.norm.Dim())
      throw ShapeError("chunk " + chunk.chunk_id + " has the wrong dimension");
    Matrix frames = ApplyNorm(chunk, model.norm).values;
    for (int k = 0; k < kNumTags; k++)
      s(k) = BagScore(model.tags[static_cast<size_t>(k)], frames);
  }
  return s;
}

void SvmTagModel::Save(const std::string &path) const {
  ModelArchive ar(kind == Kind::kChunk ? "chunksvm" : "misvm");
  ar.meta()["features"] = FeatureKindName(features);
  ar.meta()["A"] = options.svm.A;
  ar.meta()["epochs"] = options.svm.epochs;
  ar.meta()["tolerance"] = options.svm.tolerance;
  ar.meta()["seed"] = options.svm.seed;
  ar.meta()["max_outer_iterations"] = options.max_outer_iterations;
  nlohmann::json per_tag = nlohmann::json::object();
  for (int k = 0; k < kNumTags; k++) {
    const auto &m = tags[static_cast<size_t>(k)];
    std::string letter(1, TagLetter(k));
    ar.PutVector("svm." + letter + ".w", m.w);
    per_tag[letter] = {{"b", m.b},
                       {"A", m.A},
                       {"objective", m.objective},
                       {"total_slack", m.total_slack},
                       {"num_violations", m.num_violations}};
  }
  ar.meta()["tags"] = per_tag;
  PutNormStats(&ar, "norm", norm);
  ar.Write(path);
}

SvmTagModel SvmTagModel::Load(const std::string &path) {
  ModelArchive ar = ModelArchive::Read(path);
  SvmTagModel m;
  if (ar.family() == "chunksvm")
    m.kind = Kind::kChunk;
  else if (ar.family() == "misvm")
    m.kind = Kind::kMultiInstance;
  else
    throw DataError(path + ": expected an SVM model, found '" + ar.family() +
                    "'");
  try {
    const auto &j = ar.meta();
    m.features = ParseFeatureKind(j.at("features").get<std::string>());
    m.options.svm.A = j.at("A").get<Real>();
    m.options.svm.epochs = j.at("epochs").get<int>();
    m.options.svm.tolerance = j.at("tolerance").get<Real>();
    m.options.svm.seed = j.at("seed").get<uint64_t>();
    m.options.max_outer_iterations = j.at("max_outer_iterations").get<int>();
    for (int k = 0; k < kNumTags; k++) {
      std::string letter(1, TagLetter(k));
      auto &t = m.tags[static_cast<size_t>(k)];
      const auto &tj = j.at("tags").at(letter);
      t.w = ar.GetVector("svm." + letter + ".w");
      t.b = tj.at("b").get<Real>();
      t.A = tj.at("A").get<Real>();
      t.objective = tj.at("objective").get<Real>();
      t.total_slack = tj.at("total_slack").get<Real>();
      t.num_violations = tj.at("num_violations").get<int>();
    }
  } catch (const nlohmann::json::exception &e) {
    throw DataError(path + ": bad SVM header: " + e.what());
  } catch (const ConfigError &e) {
    throw DataError(path + ": " + e.what());
  }
  m.norm = GetNormStats(ar, "norm");
  return m;
}

}  // namespace audiotag
