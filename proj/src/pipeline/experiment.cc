// pipeline/experiment.cc

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

#include "audiotag/pipeline/experiment.h"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include <spdlog/spdlog.h>

#include "audiotag/feat/feature-cache.h"
#include "audiotag/feat/mel-features.h"
#include "audiotag/io/wav-io.h"
#include "audiotag/nnet/model-io.h"

namespace audiotag {

namespace fs = std::filesystem;

void RunStage(const std::string &stage, const std::function<void()> &body) {
  try {
    body();
  } catch (const Error &e) {
    throw Error(stage + ": " + e.what(), e.code());
  }
}

std::string FoldLabel(int fold) {
  return fold == FoldSelection::kEvaluationFold ? "eval"
                                                : "fold" + std::to_string(fold);
}

uint64_t FoldSeed(const ExperimentConfig &config, int fold) {
  return DeriveSeed(config.seed, "fold-" + FoldLabel(fold));
}

std::vector<FeatureMatrix> ExtractRecords(std::span<const ChunkRecord> records,
                                          FeatureKind kind) {
  std::vector<FeatureMatrix> out;
  out.reserve(records.size());
  for (const auto &r : records)
    out.push_back(ExtractFeatures(ReadChunkAudio(r.audio_path), kind, r.chunk_id));
  return out;
}

void WriteScoresCsv(const std::string &path, std::span<const ChunkScore> rows) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw DataError("cannot write scores " + path);
  WriteScoresCsv(os, rows);
}

void WriteScoresCsv(std::ostream &os, std::span<const ChunkScore> rows) {
  os << "chunk_id";
  for (char c : kTagAlphabet) os << ",score_" << c;
  os << "\n";
  char buf[40];
  for (const auto &r : rows) {
    if (r.posteriors.size() != kNumTags)
      throw ShapeError("chunk " + r.chunk_id + " needs one score per tag");
    os << r.chunk_id;
    for (int k = 0; k < kNumTags; k++) {
      std::snprintf(buf, sizeof(buf), "%.17g", r.posteriors(k));
      os << "," << buf;
    }
    os << "\n";
  }
}

std::vector<ChunkScore> ReadScoresCsv(const std::string &path) {
  std::ifstream is(path);
  if (!is) throw DataError("cannot open scores " + path);
  std::string line;
  std::getline(is, line);
  std::string expected = "chunk_id";
  for (char c : kTagAlphabet) expected += std::string(",score_") + c;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != expected)
    throw DataError(path + ": header must be '" + expected + "'");
  std::vector<ChunkScore> out;
  int lineno = 1;
  while (std::getline(is, line)) {
    lineno++;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string field;
    std::vector<std::string> f;
    while (std::getline(ss, field, ',')) f.push_back(field);
    std::string where = path + ":" + std::to_string(lineno);
    if (f.size() != kNumTags + 1)
      throw DataError(where + ": expected " + std::to_string(kNumTags + 1) +
                      " fields");
    ChunkScore s;
    s.chunk_id = f[0];
    s.posteriors.resize(kNumTags);
    for (int k = 0; k < kNumTags; k++) {
      try {
        size_t used = 0;
        s.posteriors(k) = std::stod(f[static_cast<size_t>(k) + 1], &used);
        if (used != f[static_cast<size_t>(k) + 1].size())
          throw std::invalid_argument("trailing");
      } catch (const std::exception &) {
        throw DataError(where + ": bad score '" +
                        f[static_cast<size_t>(k) + 1] + "'");
      }
    }
    out.push_back(std::move(s));
  }
  return out;
}

ScoredSet JoinScores(std::span<const ChunkScore> scores,
                     const ChunkList &chunks) {
  std::map<std::string, const ChunkRecord *> by_id;
  for (const auto &r : chunks.records()) by_id[r.chunk_id] = &r;
  ScoredSet set;
  for (const auto &s : scores) {
    auto it = by_id.find(s.chunk_id);
    if (it == by_id.end())
      throw DataError("scored chunk " + s.chunk_id + " is not in the list");
    if (it->second->unlabeled)
      throw DataError("scored chunk " + s.chunk_id + " has no labels");
    set.AddChunk(s.chunk_id, s.posteriors, it->second->tags);
  }
  set.Validate();
  return set;
}

namespace {

std::string Relative(const std::string &path, const std::string &root) {
  return fs::path(path).lexically_relative(root).generic_string();
}

class DnnScorer : public TagScorer {
 public:
  explicit DnnScorer(Tagger t) : tagger_(std::move(t)) {}
  ModelFamily Family() const override { return ModelFamily::kDnn; }
  FeatureKind FrontEnd() const override { return tagger_.config.features; }
  Vector Score(const FeatureMatrix &m) const override {
    return PredictChunk(tagger_, m).posteriors;
  }
  std::vector<std::string> Save(const std::string &stem) const override {
    tagger_.Save(stem + ".model");
    return {stem + ".model"};
  }

 private:
  Tagger tagger_;
};

class DaeDnnScorer : public TagScorer {
 public:
  DaeDnnScorer(DaeModel dae, Tagger t, std::vector<FeatureMatrix> codes)
      : dae_(std::move(dae)), tagger_(std::move(t)), codes_(std::move(codes)) {}
  ModelFamily Family() const override { return ModelFamily::kDaeDnn; }
  FeatureKind FrontEnd() const override { return FeatureKind::kMbk40; }
  Vector Score(const FeatureMatrix &m) const override {
    return PredictChunk(tagger_, EncodeChunk(dae_, m)).posteriors;
  }
  std::vector<std::string> Save(const std::string &stem) const override {
    tagger_.Save(stem + ".model");
    dae_.Save(stem + ".dae.model");
    std::vector<std::string> files = {stem + ".model", stem + ".dae.model"};
    if (!codes_.empty()) {
      WriteFeatureCache(stem + ".daecode.feats", codes_);
      files.push_back(stem + ".daecode.feats");
    }
    return files;
  }

 private:
  DaeModel dae_;
  Tagger tagger_;
  std::vector<FeatureMatrix> codes_;
};

class GmmScorer : public TagScorer {
 public:
  explicit GmmScorer(GmmTagModel m) : model_(std::move(m)) {}
  ModelFamily Family() const override { return ModelFamily::kGmm; }
  FeatureKind FrontEnd() const override { return model_.features; }
  Vector Score(const FeatureMatrix &m) const override {
    return GmmTagScores(model_, m.values);
  }
  std::vector<std::string> Save(const std::string &stem) const override {
    model_.Save(stem + ".model");
    return {stem + ".model"};
  }

 private:
  GmmTagModel model_;
};

class SvmScorer : public TagScorer {
 public:
  explicit SvmScorer(SvmTagModel m) : model_(std::move(m)) {}
  ModelFamily Family() const override {
    return model_.kind == SvmTagModel::Kind::kChunk ? ModelFamily::kChunkSvm
                                                    : ModelFamily::kMisvm;
  }
  FeatureKind FrontEnd() const override { return model_.features; }
  Vector Score(const FeatureMatrix &m) const override {
    return SvmTagScores(model_, m);
  }
  std::vector<std::string> Save(const std::string &stem) const override {
    model_.Save(stem + ".model");
    return {stem + ".model"};
  }

 private:
  SvmTagModel model_;
};

}  // namespace

std::unique_ptr<TagScorer> TrainScorer(const ExperimentConfig &config,
                                       std::span<const FeatureMatrix> train,
                                       std::span<const TagSet> tags,
                                       uint64_t seed) {
  switch (config.family) {
    case ModelFamily::kDnn: {
      TaggerConfig tc = config.tagger;
      tc.features = config.features;
      tc.seed = DeriveSeed(seed, "tagger");
      NormStats norm = FitNormStats(train);
      return std::make_unique<DnnScorer>(TrainTagger(train, tags, tc, norm));
    }
    case ModelFamily::kDaeDnn: {
      DaeConfig dc = config.dae;
      dc.seed = DeriveSeed(seed, "dae");
      DaeModel dae = TrainDae(train, dc, FitNormStats(train));
      std::vector<FeatureMatrix> codes = EncodeCorpus(dae, train);
      TaggerConfig tc = config.tagger;
      tc.features = FeatureKind::kDaeCode;
      tc.context.dilation = config.EffectiveCodeDilation();
      tc.seed = DeriveSeed(seed, "tagger");
      NormStats code_norm = FitNormStats(codes);
      Tagger t = TrainTagger(codes, tags, tc, code_norm);
      return std::make_unique<DaeDnnScorer>(std::move(dae), std::move(t),
                                            std::move(codes));
    }
    case ModelFamily::kGmm: {
      EmOptions o = config.gmm;
      o.seed = DeriveSeed(seed, "gmm");
      return std::make_unique<GmmScorer>(TrainGmmTagModel(train, tags, o));
    }
    case ModelFamily::kMisvm: {
      MisvmOptions o = config.svm;
      o.svm.seed = DeriveSeed(seed, "misvm");
      return std::make_unique<SvmScorer>(TrainMisvm(train, tags, o));
    }
    case ModelFamily::kChunkSvm: {
      SvmOptions o = config.svm.svm;
      o.seed = DeriveSeed(seed, "chunksvm");
      return std::make_unique<SvmScorer>(TrainChunkSvm(train, tags, o));
    }
  }
  throw ConfigError("unknown model family");
}

std::unique_ptr<TagScorer> LoadScorer(const std::string &model_path,
                                      const std::string &dae_path) {
  std::string family = ModelArchive::Read(model_path).family();
  if (family == "dnn-tagger") {
    Tagger t = Tagger::Load(model_path);
    if (t.config.features != FeatureKind::kDaeCode)
      return std::make_unique<DnnScorer>(std::move(t));
    if (dae_path.empty())
      throw ConfigError(model_path +
                        " scores DAE codes; pass the autoencoder model too");
    DaeModel dae = DaeModel::Load(dae_path);
    if (dae.CodeDim() != t.norm.Dim())
      throw DataError("autoencoder code size " + std::to_string(dae.CodeDim()) +
                      " does not match the tagger input frames (" +
                      std::to_string(t.norm.Dim()) + ")");
    return std::make_unique<DaeDnnScorer>(std::move(dae), std::move(t),
                                          std::vector<FeatureMatrix>());
  }
  if (family == "gmm")
    return std::make_unique<GmmScorer>(GmmTagModel::Load(model_path));
  if (family == "chunksvm" || family == "misvm")
    return std::make_unique<SvmScorer>(SvmTagModel::Load(model_path));
  throw DataError(model_path + ": cannot score with a '" + family + "' model");
}

void WriteManifest(const ExperimentConfig &config,
                   const std::vector<std::string> &relative_files) {
  nlohmann::json files = nlohmann::json::object();
  for (const auto &rel : relative_files)
    files[rel] = Sha256FileHex((fs::path(config.output_dir) / rel).string());
  nlohmann::json manifest = {{"tool", "audiotag"},
                             {"manifest_version", 1},
                             {"config_hash", ConfigHash(config)},
                             {"seed", config.seed},
                             {"family", ModelFamilyName(config.family)},
                             {"files", files}};
  std::ofstream os(fs::path(config.output_dir) / "manifest.json",
                   std::ios::binary);
  if (!os) throw DataError("cannot write manifest in " + config.output_dir);
  os << manifest.dump(2) << "\n";
}

RunResult RunExperiment(const ExperimentConfig &config) {
  RunStage("config", [&] { config.Validate(); });
  const std::string out = config.output_dir;
  RunResult res;

  ChunkList chunks;
  RunStage("load", [&] {
    chunks = LoadChunkList(config.chunk_list, config.fold_spec, config.audio_dir);
  });
  std::vector<int> folds = config.folds.empty() ? chunks.Folds() : config.folds;
  if (folds.empty())
    throw ConfigError("load: the chunk list has no development folds");

  for (const char *dir : {"models", "scores", "reports", "roc"})
    fs::create_directories(fs::path(out) / dir);

  // Features of every chunk any selected fold touches, extracted once.
  std::map<std::string, size_t> index;
  std::vector<ChunkRecord> needed;
  for (int f : folds) {
    FoldSelection sel{f, config.include_weak};
    for (const auto &set : {chunks.TrainingSet(sel), chunks.TestSet(sel)})
      for (const auto &r : set)
        if (index.emplace(r.chunk_id, needed.size()).second) needed.push_back(r);
  }
  std::vector<FeatureMatrix> feats;
  RunStage("features", [&] {
    spdlog::info("extracting {} features for {} chunks",
                 FeatureKindName(config.features), needed.size());
    feats = ExtractRecords(needed, config.features);
  });

  std::vector<std::optional<EvalReport>> reports;
  std::vector<std::string> labels;
  for (int f : folds) {
    const std::string label = FoldLabel(f);
    FoldSelection sel{f, config.include_weak};
    std::vector<ChunkRecord> train = chunks.TrainingSet(sel);
    std::vector<ChunkRecord> test = chunks.TestSet(sel);
    if (train.empty() || test.empty())
      throw DataError(label + ": empty training or test set");
    std::vector<FeatureMatrix> train_feats;
    std::vector<TagSet> train_tags;
    for (const auto &r : train) {
      train_feats.push_back(feats[index.at(r.chunk_id)]);
      train_tags.push_back(r.tags);
    }
    spdlog::info("{}: {} training chunks, {} test chunks", label, train.size(),
                 test.size());

    std::unique_ptr<TagScorer> scorer;
    RunStage("train " + label, [&] {
      scorer = TrainScorer(config, train_feats, train_tags,
                           FoldSeed(config, f));
      for (const auto &p : scorer->Save((fs::path(out) / "models" / label).string()))
        res.files.push_back(Relative(p, out));
    });
    train_feats.clear();

    std::vector<ChunkScore> scores;
    RunStage("predict " + label, [&] {
      for (const auto &r : test)
        scores.push_back({r.chunk_id, scorer->Score(feats[index.at(r.chunk_id)])});
      std::string p = (fs::path(out) / "scores" / (label + ".csv")).string();
      WriteScoresCsv(p, scores);
      res.files.push_back(Relative(p, out));
    });

    RunStage("evaluate " + label, [&] {
      ScoredSet scored = JoinScores(scores, chunks);
      EvalReport rep = Evaluate(scored, label, config.threshold);
      std::string p = (fs::path(out) / "reports" / (label + ".csv")).string();
      WriteReportCsv(rep, p);
      res.files.push_back(Relative(p, out));
      for (int k = 0; k < kNumTags; k++) {
        if (!rep.tags[static_cast<size_t>(k)].eer) continue;
        std::string roc = (fs::path(out) / "roc" /
                           (label + "-" + TagLetter(k) + ".csv"))
                              .string();
        std::ofstream(roc, std::ios::binary) << RocCsv(scored, k);
        res.files.push_back(Relative(roc, out));
      }
      spdlog::info("{}: average EER {}", label,
                   rep.average_eer ? std::to_string(*rep.average_eer) : "NA");
      reports.push_back(std::move(rep));
      labels.push_back(label);
    });
  }

  RunStage("summary", [&] {
    std::string name = ModelFamilyName(config.family) + "-" +
                       FeatureKindName(config.features);
    res.summary = AggregateFolds(reports, labels, name);
    std::string csv = (fs::path(out) / "reports" / "summary.csv").string();
    std::string md = (fs::path(out) / "reports" / "summary.md").string();
    WriteReportCsv(res.summary, csv);
    std::ofstream(md, std::ios::binary)
        << ReportMarkdown(std::span<const EvalReport>(&res.summary, 1));
    res.files.push_back(Relative(csv, out));
    res.files.push_back(Relative(md, out));
    std::string cfg = (fs::path(out) / "config.json").string();
    std::ofstream(cfg, std::ios::binary)
        << ExperimentConfigToJson(config).dump(2) << "\n";
    res.files.push_back(Relative(cfg, out));
    std::sort(res.files.begin(), res.files.end());
    WriteManifest(config, res.files);
  });
  return res;
}

}  // namespace audiotag
