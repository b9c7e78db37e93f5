// nnet/model-io.h

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

#ifndef AUDIOTAG_NNET_MODEL_IO_H_
#define AUDIOTAG_NNET_MODEL_IO_H_

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "audiotag/feat/norm-stats.h"
#include "audiotag/nnet/mlp.h"

namespace audiotag {

inline constexpr char kModelMagic[] = "ATMODEL1";
inline constexpr int kModelSchemaVersion = 1;

// Every trained artifact (tagger, DAE, GMM, SVM) is one ModelArchive: a
// family marker, free-form JSON metadata and named f64 tensors.  On disk it
// is a single json-container record; the header lists each tensor's shape
// and the payload holds them row-major, little-endian, in insertion order.
class ModelArchive {
 public:
  explicit ModelArchive(std::string family = "") : family_(std::move(family)) {}

  const std::string &family() const { return family_; }
  nlohmann::json &meta() { return meta_; }
  const nlohmann::json &meta() const { return meta_; }

  void PutMatrix(const std::string &name, const Matrix &m);
  void PutVector(const std::string &name, const Vector &v);
  bool Has(const std::string &name) const { return tensors_.count(name) > 0; }
  // Throw DataError when the tensor is missing or (GetVector) not a column.
  const Matrix &GetMatrix(const std::string &name) const;
  Vector GetVector(const std::string &name) const;
  const std::vector<std::string> &TensorNames() const { return order_; }

  void Write(const std::string &path) const;
  // A non-empty `expected_family` is checked against the stored marker.
  static ModelArchive Read(const std::string &path,
                           const std::string &expected_family = "");

 private:
  std::string family_;
  nlohmann::json meta_ = nlohmann::json::object();
  std::map<std::string, Matrix> tensors_;
  std::vector<std::string> order_;
};

// Stores the layer layout under meta[prefix] and the parameters as
// "<prefix>.<l>.weights" / "<prefix>.<l>.bias".
void PutMlp(ModelArchive *ar, const std::string &prefix, const MlpModel &m);
MlpModel GetMlp(const ModelArchive &ar, const std::string &prefix);

// The stored id is re-derived on load; a mismatch is a DataError.
void PutNormStats(ModelArchive *ar, const std::string &prefix,
                  const NormStats &s);
NormStats GetNormStats(const ModelArchive &ar, const std::string &prefix);

nlohmann::json TrainingOptionsToJson(const TrainingOptions &o);
TrainingOptions TrainingOptionsFromJson(const nlohmann::json &j);

}  // namespace audiotag

#endif  // AUDIOTAG_NNET_MODEL_IO_H_
