// baselines/gmm.cc

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

#include "audiotag/baselines/gmm.h"

#include <cmath>
#include <limits>
#include <numbers>

#include <spdlog/spdlog.h>

#include "audiotag/nnet/model-io.h"

namespace audiotag {

namespace {

const Real kLog2Pi = std::log(2.0 * std::numbers::pi);
const Real kNegInf = -std::numeric_limits<Real>::infinity();

// Row-wise log-sum-exp of an N x M matrix.
Vector RowLogSumExp(const Matrix &a) {
  Vector out(a.rows());
  for (Eigen::Index n = 0; n < a.rows(); n++) {
    Real mx = a.row(n).maxCoeff();
    if (mx == kNegInf) {
      out(n) = kNegInf;
      continue;
    }
    out(n) = mx + std::log((a.row(n).array() - mx).exp().sum());
  }
  return out;
}

Real SquaredDistance(const Matrix &x, Eigen::Index n, const Matrix &c,
                     Eigen::Index k) {
  return (x.row(n) - c.row(k)).squaredNorm();
}

}  // namespace

void DiagGmm::Validate() const {
  const Eigen::Index m = weights.size();
  if (m == 0) throw ShapeError("mixture with no components");
  if (means.rows() != m || variances.rows() != m ||
      variances.cols() != means.cols())
    throw ShapeError("mixture parameter shapes disagree");
  if ((weights.array() < 0.0).any() ||
      std::abs(weights.sum() - 1.0) > 1e-9)
    throw NumericError("mixture weights are not on the simplex");
  if (!(variances.array() > 0.0).all() || !means.allFinite())
    throw NumericError("mixture has non-positive variances or bad means");
}

Matrix DiagGmm::ComponentLogDensities(const Matrix &frames) const {
  if (frames.cols() != Dim())
    throw ShapeError("frames have dimension " + std::to_string(frames.cols()) +
                     ", mixture expects " + std::to_string(Dim()));
  const Eigen::Index m = NumComponents();
  Matrix out(frames.rows(), m);
  for (Eigen::Index k = 0; k < m; k++) {
    if (weights(k) <= 0.0) {
      out.col(k).setConstant(kNegInf);
      continue;
    }
    RowVector inv = variances.row(k).cwiseInverse();
    Real log_norm = std::log(weights(k)) -
                    0.5 * (static_cast<Real>(Dim()) * kLog2Pi +
                           variances.row(k).array().log().sum());
    out.col(k) = (log_norm - 0.5 * ((frames.rowwise() - means.row(k))
                                        .array()
                                        .square()
                                        .rowwise() *
                                    inv.array())
                                       .rowwise()
                                       .sum())
                     .matrix();
  }
  return out;
}

Vector DiagGmm::FrameLogLikelihoods(const Matrix &frames) const {
  return RowLogSumExp(ComponentLogDensities(frames));
}

DiagGmm KMeansInit(const Matrix &frames, const EmOptions &opts) {
  const Eigen::Index n = frames.rows(), d = frames.cols();
  const Eigen::Index m = opts.num_components;
  if (m < 1) throw ConfigError("a mixture needs at least one component");
  if (!(opts.variance_floor > 0.0))
    throw ConfigError("variance floor must be positive");
  if (n < m)
    throw DataError("cannot fit " + std::to_string(m) + " components to " +
                    std::to_string(n) + " frames");
  Rng rng(opts.seed);

  // k-means++ seeding.
  Matrix centers(m, d);
  std::uniform_int_distribution<Eigen::Index> first(0, n - 1);
  centers.row(0) = frames.row(first(rng));
  Vector dist(n);
  for (Eigen::Index i = 0; i < n; i++) dist(i) = SquaredDistance(frames, i, centers, 0);
  std::uniform_real_distribution<Real> unif(0.0, 1.0);
  for (Eigen::Index k = 1; k < m; k++) {
    Real total = dist.sum();
    Eigen::Index pick = 0;
    if (total > 0.0) {
      Real u = unif(rng) * total, acc = 0.0;
      pick = n - 1;
      for (Eigen::Index i = 0; i < n; i++) {
        acc += dist(i);
        if (acc > u && dist(i) > 0.0) {
          pick = i;
          break;
        }
      }
    } else {
      pick = first(rng);
    }
    centers.row(k) = frames.row(pick);
    for (Eigen::Index i = 0; i < n; i++)
      dist(i) = std::min(dist(i), SquaredDistance(frames, i, centers, k));
  }

  // Lloyd iterations.
  std::vector<Eigen::Index> assign(static_cast<size_t>(n), 0);
  auto assign_all = [&]() {
    bool changed = false;
    for (Eigen::Index i = 0; i < n; i++) {
      Eigen::Index best = 0;
      Real best_d = SquaredDistance(frames, i, centers, 0);
      for (Eigen::Index k = 1; k < m; k++) {
        Real dd = SquaredDistance(frames, i, centers, k);
        if (dd < best_d) {
          best_d = dd;
          best = k;
        }
      }
      if (assign[static_cast<size_t>(i)] != best) changed = true;
      assign[static_cast<size_t>(i)] = best;
    }
    return changed;
  };
  Vector counts(m);
  auto update_centers = [&]() {
    Matrix sums = Matrix::Zero(m, d);
    counts.setZero();
    for (Eigen::Index i = 0; i < n; i++) {
      sums.row(assign[static_cast<size_t>(i)]) += frames.row(i);
      counts(assign[static_cast<size_t>(i)]) += 1.0;
    }
    for (Eigen::Index k = 0; k < m; k++)
      if (counts(k) > 0) centers.row(k) = sums.row(k) / counts(k);
  };
  assign_all();
  update_centers();
  for (int it = 0; it < opts.kmeans_iterations; it++) {
    if (!assign_all()) break;
    update_centers();
  }

  RowVector global_mean = frames.colwise().mean();
  RowVector global_var =
      (frames.rowwise() - global_mean).array().square().colwise().mean();

  DiagGmm g;
  g.weights = counts / static_cast<Real>(n);
  g.means = centers;
  g.variances = Matrix::Zero(m, d);
  for (Eigen::Index i = 0; i < n; i++) {
    Eigen::Index k = assign[static_cast<size_t>(i)];
    g.variances.row(k) +=
        (frames.row(i) - centers.row(k)).array().square().matrix();
  }
  for (Eigen::Index k = 0; k < m; k++) {
    if (counts(k) >= 2)
      g.variances.row(k) /= counts(k);
    else
      g.variances.row(k) = global_var;
  }
  g.variances = g.variances.cwiseMax(opts.variance_floor);
  return g;
}

EmResult EmFit(const Matrix &frames, const EmOptions &opts) {
  if (opts.iterations < 0) throw ConfigError("EM iterations must be >= 0");
  EmResult res;
  res.gmm = KMeansInit(frames, opts);
  const Eigen::Index n = frames.rows(), m = opts.num_components;
  const Real nf = static_cast<Real>(n);

  Matrix logp = res.gmm.ComponentLogDensities(frames);
  Vector ll = RowLogSumExp(logp);
  res.log_likelihood.push_back(ll.sum() / nf);

  for (int it = 0; it < opts.iterations; it++) {
    Matrix resp = (logp.colwise() - ll).array().exp().matrix();
    Vector mass = resp.colwise().sum().transpose();
    DiagGmm &g = res.gmm;
    int collapsed = 0;
    for (Eigen::Index k = 0; k < m; k++) {
      if (mass(k) <= 1e-12 * nf) {
        g.weights(k) = 0.0;
        collapsed++;
        continue;
      }
      RowVector mu = (resp.col(k).transpose() * frames) / mass(k);
      RowVector var = ((frames.rowwise() - mu).array().square().colwise() *
                       resp.col(k).array())
                          .colwise()
                          .sum() /
                      mass(k);
      g.means.row(k) = mu;
      g.variances.row(k) = var.cwiseMax(opts.variance_floor);
      g.weights(k) = mass(k);
    }
    g.weights /= g.weights.sum();
    if (collapsed > 0)
      spdlog::warn("EM iteration {}: {} component(s) lost all mass", it + 1,
                   collapsed);

    logp = g.ComponentLogDensities(frames);
    ll = RowLogSumExp(logp);
    Real mean_ll = ll.sum() / nf;
    if (!std::isfinite(mean_ll))
      throw NumericError("EM produced a non-finite log-likelihood");
    Real gain = mean_ll - res.log_likelihood.back();
    res.log_likelihood.push_back(mean_ll);
    if (opts.tolerance > 0.0 && gain < opts.tolerance) {
      res.converged = true;
      break;
    }
  }
  return res;
}

Matrix StackFrames(std::span<const FeatureMatrix> chunks,
                   std::span<const size_t> which) {
  std::vector<size_t> all;
  if (which.empty()) {
    for (size_t i = 0; i < chunks.size(); i++) all.push_back(i);
    which = all;
  }
  Eigen::Index rows = 0, dim = -1;
  for (size_t i : which) {
    rows += chunks[i].NumFrames();
    if (dim < 0) dim = chunks[i].Dim();
    if (chunks[i].Dim() != dim)
      throw ShapeError("chunk " + chunks[i].chunk_id +
                       " has a different feature dimension");
  }
  Matrix out(rows, std::max<Eigen::Index>(dim, 0));
  Eigen::Index r = 0;
  for (size_t i : which) {
    out.middleRows(r, chunks[i].NumFrames()) = chunks[i].values;
    r += chunks[i].NumFrames();
  }
  return out;
}

void TrainGmmForTag(std::span<const FeatureMatrix> chunks,
                    std::span<const TagSet> tags, int tag,
                    const EmOptions &opts, GmmTagModel *model) {
  if (chunks.size() != tags.size())
    throw ShapeError("one tag set per chunk is required");
  std::vector<size_t> pos, neg;
  for (size_t i = 0; i < chunks.size(); i++)
    (tags[i].Has(tag) ? pos : neg).push_back(i);
  const std::string letter(1, TagLetter(tag));
  if (pos.empty() || neg.empty())
    throw DataError("tag " + letter + " needs positive and negative chunks");
  if (!chunks.empty()) model->features = chunks[0].kind;
  model->options = opts;

  EmOptions o = opts;
  o.seed = DeriveSeed(opts.seed, "gmm-positive-" + letter);
  EmResult p = EmFit(StackFrames(chunks, pos), o);
  o.seed = DeriveSeed(opts.seed, "gmm-negative-" + letter);
  EmResult q = EmFit(StackFrames(chunks, neg), o);
  model->positive[static_cast<size_t>(tag)] = std::move(p.gmm);
  model->negative[static_cast<size_t>(tag)] = std::move(q.gmm);
  spdlog::info("tag {}: GMMs on {} / {} chunks, final mean log-likelihood "
               "{:.4f} / {:.4f}",
               letter, pos.size(), neg.size(), p.log_likelihood.back(),
               q.log_likelihood.back());
}

GmmTagModel TrainGmmTagModel(std::span<const FeatureMatrix> chunks,
                             std::span<const TagSet> tags,
                             const EmOptions &opts) {
  GmmTagModel model;
  for (int k = 0; k < kNumTags; k++)
    TrainGmmForTag(chunks, tags, k, opts, &model);
  return model;
}

Vector GmmTagScores(const GmmTagModel &model, const Matrix &frames) {
  Vector s(kNumTags);
  for (int k = 0; k < kNumTags; k++) {
    const auto &p = model.positive[static_cast<size_t>(k)];
    const auto &q = model.negative[static_cast<size_t>(k)];
    if (p.NumComponents() == 0 || q.NumComponents() == 0)
      throw DataError(std::string("no mixtures trained for tag ") +
                      TagLetter(k));
    s(k) = p.TotalLogLikelihood(frames) - q.TotalLogLikelihood(frames);
  }
  return s;
}

void GmmTagModel::Save(const std::string &path) const {
  ModelArchive ar("gmm");
  ar.meta()["features"] = FeatureKindName(features);
  ar.meta()["num_components"] = options.num_components;
  ar.meta()["iterations"] = options.iterations;
  ar.meta()["variance_floor"] = options.variance_floor;
  ar.meta()["seed"] = options.seed;
  nlohmann::json trained = nlohmann::json::array();
  for (int k = 0; k < kNumTags; k++) {
    const auto &p = positive[static_cast<size_t>(k)];
    const auto &q = negative[static_cast<size_t>(k)];
    if (p.NumComponents() == 0) continue;
    std::string letter(1, TagLetter(k));
    trained.push_back(letter);
    for (const auto &[side, g] : {std::pair{"pos", &p}, std::pair{"neg", &q}}) {
      std::string base = std::string(side) + "." + letter;
      ar.PutVector(base + ".weights", g->weights);
      ar.PutMatrix(base + ".means", g->means);
      ar.PutMatrix(base + ".variances", g->variances);
    }
  }
  ar.meta()["tags"] = trained;
  ar.Write(path);
}

GmmTagModel GmmTagModel::Load(const std::string &path) {
  ModelArchive ar = ModelArchive::Read(path, "gmm");
  GmmTagModel m;
  try {
    m.features = ParseFeatureKind(ar.meta().at("features").get<std::string>());
    m.options.num_components = ar.meta().at("num_components").get<int>();
    m.options.iterations = ar.meta().at("iterations").get<int>();
    m.options.variance_floor = ar.meta().at("variance_floor").get<Real>();
    m.options.seed = ar.meta().at("seed").get<uint64_t>();
    for (const auto &t : ar.meta().at("tags")) {
      std::string letter = t.get<std::string>();
      int k = TagIndex(letter.empty() ? '?' : letter[0]);
      if (k < 0) throw DataError(path + ": unknown tag '" + letter + "'");
      for (auto [side, g] :
           {std::pair{"pos", &m.positive[static_cast<size_t>(k)]},
            std::pair{"neg", &m.negative[static_cast<size_t>(k)]}}) {
        std::string base = std::string(side) + "." + letter;
        g->weights = ar.GetVector(base + ".weights");
        g->means = ar.GetMatrix(base + ".means");
        g->variances = ar.GetMatrix(base + ".variances");
        g->Validate();
      }
    }
  } catch (const nlohmann::json::exception &e) {
    throw DataError(path + ": bad GMM header: " + e.what());
  } catch (const NumericError &e) {
    throw DataError(path + ": " + e.what());
  } catch (const ConfigError &e) {
    throw DataError(path + ": " + e.what());
  }
  return m;
}

}  // namespace audiotag
