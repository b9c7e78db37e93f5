// pipeline/experiment-config.h

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

#ifndef AUDIOTAG_PIPELINE_EXPERIMENT_CONFIG_H_
#define AUDIOTAG_PIPELINE_EXPERIMENT_CONFIG_H_

#include <string>
#include <vector>

#include <json.hpp>

#include "audiotag/baselines/gmm.h"
#include "audiotag/baselines/svm.h"
#include "audiotag/dae/dae.h"
#include "audiotag/tagger/tagger.h"

namespace audiotag {

enum class ModelFamily { kDnn, kDaeDnn, kGmm, kMisvm, kChunkSvm };

// "dnn", "dae+dnn", "gmm", "misvm", "chunksvm".
std::string ModelFamilyName(ModelFamily f);
ModelFamily ParseModelFamily(const std::string &name);

// Everything one experiment needs.  Defaults follow the reference setup:
// a bare config with only the data paths trains the MBK tagger on every
// development fold.
struct ExperimentConfig {
  // Relative paths are resolved against the directory of the config file.
  std::string chunk_list;
  std::string fold_spec;
  std::string audio_dir;
  std::string output_dir = "out";

  ModelFamily family = ModelFamily::kDnn;
  // Front-end features computed from audio.  mbk for the neural systems,
  // mfcc for the GMM and SVM baselines unless set explicitly.
  FeatureKind features = FeatureKind::kMbk40;
  // Development fold indices, or FoldSelection::kEvaluationFold.  Empty
  // means every development fold in the chunk list.
  std::vector<int> folds;
  bool include_weak = true;
  Real threshold = 0.4;
  uint64_t seed = 0;

  TaggerConfig tagger;
  DaeConfig dae;
  // Dilation of the tagger context over DAE codes; 0 picks 1 for the
  // asymmetric and 7 for the symmetric variant.
  int dae_code_dilation = 0;
  EmOptions gmm;
  MisvmOptions svm;

  // Family-specific checks and path resolution.  ConfigError on failure.
  void Validate() const;
  int EffectiveCodeDilation() const;
};

// Parses a YAML document.  Unknown keys are ConfigErrors so that typos do
// not silently fall back to defaults.
ExperimentConfig ParseExperimentConfig(const std::string &yaml_text,
                                       const std::string &base_dir = ".");
ExperimentConfig LoadExperimentConfig(const std::string &path);

// Canonical form used for hashing and recorded in manifests.  The output
// directory is left out: moving a run does not change what it computes.
nlohmann::json ExperimentConfigToJson(const ExperimentConfig &c);
std::string ConfigHash(const ExperimentConfig &c);

// A commented YAML file holding every default.
std::string DefaultConfigYaml();

}  // namespace audiotag

#endif  // AUDIOTAG_PIPELINE_EXPERIMENT_CONFIG_H_
