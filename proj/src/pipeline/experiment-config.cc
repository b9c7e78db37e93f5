// pipeline/experiment-config.cc

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

#include "audiotag/pipeline/experiment-config.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "audiotag/io/chunk-list.h"
#include "audiotag/nnet/model-io.h"

namespace audiotag {

namespace fs = std::filesystem;

std::string ModelFamilyName(ModelFamily f) {
  switch (f) {
    case ModelFamily::kDnn: return "dnn";
    case ModelFamily::kDaeDnn: return "dae+dnn";
    case ModelFamily::kGmm: return "gmm";
    case ModelFamily::kMisvm: return "misvm";
    case ModelFamily::kChunkSvm: return "chunksvm";
  }
  return "?";
}

ModelFamily ParseModelFamily(const std::string &name) {
  if (name == "dnn") return ModelFamily::kDnn;
  if (name == "dae+dnn") return ModelFamily::kDaeDnn;
  if (name == "gmm") return ModelFamily::kGmm;
  if (name == "misvm") return ModelFamily::kMisvm;
  if (name == "chunksvm") return ModelFamily::kChunkSvm;
  throw ConfigError("unknown model family '" + name +
                    "' (expected dnn, dae+dnn, gmm, misvm or chunksvm)");
}

int ExperimentConfig::EffectiveCodeDilation() const {
  if (dae_code_dilation > 0) return dae_code_dilation;
  return dae.variant == DaeVariant::kSymmetric ? 7 : 1;
}

void ExperimentConfig::Validate() const {
  auto must_exist = [](const std::string &what, const std::string &p) {
    if (!p.empty() && !fs::exists(p))
      throw ConfigError(what + " '" + p + "' does not exist");
  };
  if (chunk_list.empty()) throw ConfigError("data.chunk_list is required");
  must_exist("chunk list", chunk_list);
  must_exist("fold spec", fold_spec);
  must_exist("audio directory", audio_dir);
  if (output_dir.empty()) throw ConfigError("output_dir must not be empty");
  if (features == FeatureKind::kDaeCode)
    throw ConfigError("features must be mbk or mfcc; DAE codes are derived");
  if (family == ModelFamily::kDaeDnn && features != FeatureKind::kMbk40)
    throw ConfigError("the dae+dnn family learns codes from mbk features");
  for (int f : folds)
    if (f != FoldSelection::kEvaluationFold &&
        (f < 0 || f >= FoldAssignment::kMaxFolds))
      throw ConfigError("fold " + std::to_string(f) + " out of range");
  if (!std::isfinite(threshold)) throw ConfigError("threshold must be finite");
  if (dae_code_dilation < 0) throw ConfigError("dae.code_dilation must be >= 0");

  switch (family) {
    case ModelFamily::kDaeDnn:
      dae.Validate();
      [[fallthrough]];
    case ModelFamily::kDnn:
      tagger.Validate();
      break;
    case ModelFamily::kGmm:
      if (gmm.num_components < 1 || gmm.iterations < 0 ||
          gmm.kmeans_iterations < 0 || !(gmm.variance_floor > 0.0))
        throw ConfigError("invalid gmm settings");
      break;
    case ModelFamily::kMisvm:
    case ModelFamily::kChunkSvm:
      if (!(svm.svm.A > 0.0) || svm.svm.epochs < 1 ||
          !(svm.svm.tolerance >= 0.0) ||
          svm.max_outer_iterations < 1)
        throw ConfigError("invalid svm settings");
      break;
  }
}

namespace {

class Section {
 public:
  Section(const YAML::Node &node, std::string name,
          std::set<std::string> allowed)
      : node_(node), name_(std::move(name)) {
    if (!node_) return;
    if (!node_.IsMap()) throw ConfigError(name_ + " must be a mapping");
    for (const auto &kv : node_) {
      auto key = kv.first.as<std::string>();
      if (!allowed.count(key))
        throw ConfigError("unknown key '" + Path(key) + "'");
    }
  }

  template <typename T>
  void Get(const std::string &key, T *out) const {
    if (!node_ || !node_[key]) return;
    try {
      *out = node_[key].as<T>();
    } catch (const YAML::Exception &e) {
      throw ConfigError("bad value for '" + Path(key) + "': " + e.msg);
    }
  }
  bool Has(const std::string &key) const { return node_ && node_[key]; }
  YAML::Node Child(const std::string &key) const {
    return node_ ? node_[key] : YAML::Node();
  }
  std::string Path(const std::string &key) const {
    return name_.empty() ? key : name_ + "." + key;
  }

 private:
  YAML::Node node_;
  std::string name_;
};

std::string Resolve(const std::string &base, const std::string &p) {
  if (p.empty() || fs::path(p).is_absolute()) return p;
  return (fs::path(base) / p).lexically_normal().string();
}

void ParseTraining(const Section &s, TrainingOptions *t) {
  s.Get("learning_rate", &t->learning_rate);
  s.Get("momentum", &t->momentum);
  s.Get("batch_size", &t->batch_size);
}

}  // namespace

ExperimentConfig ParseExperimentConfig(const std::string &yaml_text,
                                       const std::string &base_dir) {
  YAML::Node root;
  try {
    root = YAML::Load(yaml_text);
  } catch (const YAML::Exception &e) {
    throw ConfigError("cannot parse experiment config: " + e.msg);
  }
  if (root.IsNull()) root = YAML::Node(YAML::NodeType::Map);
  ExperimentConfig c;
  Section top(root, "",
              {"data", "output_dir", "family", "features", "folds",
               "include_weak", "threshold", "seed", "tagger", "dae", "gmm",
               "svm"});

  Section data(top.Child("data"), "data",
               {"chunk_list", "fold_spec", "audio_dir"});
  data.Get("chunk_list", &c.chunk_list);
  data.Get("fold_spec", &c.fold_spec);
  data.Get("audio_dir", &c.audio_dir);
  top.Get("output_dir", &c.output_dir);

  std::string text;
  if (top.Has("family")) {
    top.Get("family", &text);
    c.family = ParseModelFamily(text);
  }
  bool baseline = c.family == ModelFamily::kGmm ||
                  c.family == ModelFamily::kMisvm ||
                  c.family == ModelFamily::kChunkSvm;
  c.features = baseline ? FeatureKind::kMfcc24 : FeatureKind::kMbk40;
  if (top.Has("features")) {
    top.Get("features", &text);
    c.features = ParseFeatureKind(text);
  }
  if (top.Has("folds")) {
    YAML::Node f = top.Child("folds");
    if (f.IsScalar()) {
      std::string v = f.as<std::string>();
      if (v == "eval" || v == "evaluation")
        c.folds = {FoldSelection::kEvaluationFold};
      else if (v != "all")
        c.folds = {FoldAssignment::Parse(v).index};
    } else {
      for (const auto &e : f) {
        std::string v = e.as<std::string>();
        FoldAssignment a = FoldAssignment::Parse(v);
        c.folds.push_back(a.kind == FoldAssignment::Kind::kEvaluation
                              ? FoldSelection::kEvaluationFold
                              : a.index);
      }
    }
  }
  top.Get("include_weak", &c.include_weak);
  top.Get("threshold", &c.threshold);
  top.Get("seed", &c.seed);

  Section tg(top.Child("tagger"), "tagger",
             {"tau", "noise_frames", "hidden", "learning_rate", "momentum",
              "batch_size", "max_epochs", "patience", "input_dropout",
              "hidden_dropout", "loss", "train_stride", "predict_stride",
              "dilation", "aggregation", "validation_fraction"});
  TaggerConfig &t = c.tagger;
  tg.Get("tau", &t.context.tau);
  tg.Get("noise_frames", &t.context.noise_frames);
  tg.Get("hidden", &t.hidden);
  ParseTraining(tg, &t.training);
  tg.Get("max_epochs", &t.training.max_epochs);
  tg.Get("patience", &t.training.patience);
  tg.Get("input_dropout", &t.input_dropout);
  tg.Get("hidden_dropout", &t.hidden_dropout);
  if (tg.Has("loss")) {
    tg.Get("loss", &text);
    t.loss = ParseLossKind(text);
  }
  tg.Get("train_stride", &t.train_stride);
  tg.Get("predict_stride", &t.context.stride);
  tg.Get("dilation", &t.context.dilation);
  if (tg.Has("aggregation")) {
    tg.Get("aggregation", &text);
    t.aggregation = ParseChunkAggregation(text);
  }
  tg.Get("validation_fraction", &t.validation_fraction);

  Section dn(top.Child("dae"), "dae",
             {"variant", "input_frames", "encoder_hidden", "bottleneck",
              "bottleneck_activation", "decoder_hidden", "corruption",
              "epochs", "learning_rate", "momentum", "batch_size",
              "cv_fraction", "code_dilation"});
  if (dn.Has("variant")) {
    dn.Get("variant", &text);
    DaeVariant v = ParseDaeVariant(text);
    if (v == DaeVariant::kSymmetric) c.dae = DaeConfig::Symmetric();
  }
  DaeConfig &d = c.dae;
  dn.Get("input_frames", &d.input_frames);
  dn.Get("encoder_hidden", &d.encoder_hidden);
  dn.Get("bottleneck", &d.bottleneck);
  if (dn.Has("bottleneck_activation")) {
    dn.Get("bottleneck_activation", &text);
    d.bottleneck_activation = ParseActivation(text);
  }
  dn.Get("decoder_hidden", &d.decoder_hidden);
  dn.Get("corruption", &d.corruption);
  dn.Get("epochs", &d.training.max_epochs);
  ParseTraining(dn, &d.training);
  dn.Get("cv_fraction", &d.cv_fraction);
  dn.Get("code_dilation", &c.dae_code_dilation);

  Section gm(top.Child("gmm"), "gmm",
             {"components", "iterations", "variance_floor",
              "kmeans_iterations", "tolerance"});
  gm.Get("components", &c.gmm.num_components);
  gm.Get("iterations", &c.gmm.iterations);
  gm.Get("variance_floor", &c.gmm.variance_floor);
  gm.Get("kmeans_iterations", &c.gmm.kmeans_iterations);
  gm.Get("tolerance", &c.gmm.tolerance);

  Section sv(top.Child("svm"), "svm",
             {"A", "epochs", "tolerance", "max_outer_iterations"});
  sv.Get("A", &c.svm.svm.A);
  sv.Get("epochs", &c.svm.svm.epochs);
  sv.Get("tolerance", &c.svm.svm.tolerance);
  sv.Get("max_outer_iterations", &c.svm.max_outer_iterations);

  c.chunk_list = Resolve(base_dir, c.chunk_list);
  c.fold_spec = Resolve(base_dir, c.fold_spec);
  c.audio_dir = Resolve(base_dir, c.audio_dir);
  c.output_dir = Resolve(base_dir, c.output_dir);

  t.features =
      c.family == ModelFamily::kDaeDnn ? FeatureKind::kDaeCode : c.features;
  if (c.family == ModelFamily::kDaeDnn)
    t.context.dilation = c.EffectiveCodeDilation();
  return c;
}

ExperimentConfig LoadExperimentConfig(const std::string &path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open experiment config " + path);
  std::stringstream ss;
  ss << is.rdbuf();
  fs::path base = fs::path(path).parent_path();
  return ParseExperimentConfig(ss.str(), base.empty() ? "." : base.string());
}

nlohmann::json ExperimentConfigToJson(const ExperimentConfig &c) {
  return {{"data",
           {{"chunk_list", c.chunk_list},
            {"fold_spec", c.fold_spec},
            {"audio_dir", c.audio_dir}}},
          {"family", ModelFamilyName(c.family)},
          {"features", FeatureKindName(c.features)},
          {"folds", c.folds},
          {"include_weak", c.include_weak},
          {"threshold", c.threshold},
          {"seed", c.seed},
          {"tagger", TaggerConfigToJson(c.tagger)},
          {"dae", DaeConfigToJson(c.dae)},
          {"dae_code_dilation", c.EffectiveCodeDilation()},
          {"gmm",
           {{"components", c.gmm.num_components},
            {"iterations", c.gmm.iterations},
            {"variance_floor", c.gmm.variance_floor},
            {"kmeans_iterations", c.gmm.kmeans_iterations},
            {"tolerance", c.gmm.tolerance}}},
          {"svm",
           {{"A", c.svm.svm.A},
            {"epochs", c.svm.svm.epochs},
            {"tolerance", c.svm.svm.tolerance},
            {"max_outer_iterations", c.svm.max_outer_iterations}}}};
}

std::string ConfigHash(const ExperimentConfig &c) {
  return Sha256Hex(ExperimentConfigToJson(c).dump());
}

std::string DefaultConfigYaml() {
  return R"(# audiotag experiment configuration.  Every key is optional except
# data.chunk_list; relative paths are taken from this file's directory.
data:
  chunk_list: chunks.csv      # chunk_id,labels[,fold]
  fold_spec: ""               # optional chunk_id,fold file
  audio_dir: audio            # <audio_dir>/<chunk_id>.wav, 16 kHz mono
output_dir: out
family: dnn                   # dnn | dae+dnn | gmm | misvm | chunksvm
features: mbk                 # mbk | mfcc (baselines default to mfcc)
folds: all                    # all | eval | [0, 1, 2, 3, 4]
include_weak: true            # add raw-only chunks to every training set
threshold: 0.4                # decision threshold for precision / recall
seed: 0
tagger:
  tau: 45                     # 91-frame context
  noise_frames: 6
  hidden: [1000, 500]
  learning_rate: 0.005
  momentum: 0.9
  batch_size: 100
  max_epochs: 100
  patience: 10
  input_dropout: 0.1
  hidden_dropout: 0.2
  loss: bce                   # bce | mse
  train_stride: 1
  predict_stride: 1
  dilation: 1
  aggregation: mean           # mean | max
  validation_fraction: 0.1
dae:
  variant: asymmetric         # asymmetric | symmetric
  input_frames: 7
  encoder_hidden: 500
  bottleneck: 50              # 200 for the symmetric variant
  bottleneck_activation: relu # relu | linear
  decoder_hidden: 500
  corruption: 0.1
  epochs: 100
  learning_rate: 0.001        # the loss sums over output dims; 0.005 diverges
  momentum: 0.9
  batch_size: 100
  cv_fraction: 0.1
  code_dilation: 0            # 0: 1 for asymmetric, 7 for symmetric
gmm:
  components: 8
  iterations: 20
  variance_floor: 1.0e-6
  kmeans_iterations: 10
  tolerance: 0
svm:
  A: 1
  epochs: 200                 # passes of dual coordinate descent at most
  tolerance: 1.0e-3
  max_outer_iterations: 10
)";
}

}  // namespace audiotag
