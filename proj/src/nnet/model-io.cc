// nnet/model-io.cc

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

#include "audiotag/nnet/model-io.h"

#include <fstream>

#include "audiotag/base/json-container.h"

namespace audiotag {

using RowMajor =
    Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

void ModelArchive::PutMatrix(const std::string &name, const Matrix &m) {
  if (!tensors_.count(name)) order_.push_back(name);
  tensors_[name] = m;
}

void ModelArchive::PutVector(const std::string &name, const Vector &v) {
  PutMatrix(name, Matrix(v));
}

const Matrix &ModelArchive::GetMatrix(const std::string &name) const {
  auto it = tensors_.find(name);
  if (it == tensors_.end())
    throw DataError("model archive (" + family_ + ") has no tensor '" + name +
                    "'");
  return it->second;
}

Vector ModelArchive::GetVector(const std::string &name) const {
  const Matrix &m = GetMatrix(name);
  if (m.cols() != 1 && m.size() != 0)
    throw DataError("tensor '" + name + "' is not a vector");
  return m.size() == 0 ? Vector() : Vector(m.col(0));
}

void ModelArchive::Write(const std::string &path) const {
  nlohmann::json tensors = nlohmann::json::array();
  std::string payload;
  for (const auto &name : order_) {
    const Matrix &m = tensors_.at(name);
    tensors.push_back({{"name", name}, {"rows", m.rows()}, {"cols", m.cols()}});
    RowMajor rm = m;
    payload.append(reinterpret_cast<const char *>(rm.data()),
                   sizeof(Real) * static_cast<size_t>(rm.size()));
  }
  nlohmann::json header = {{"version", kModelSchemaVersion},
                           {"family", family_},
                           {"dtype", "f64le"},
                           {"meta", meta_},
                           {"tensors", tensors}};
  std::ofstream os(path, std::ios::binary);
  if (!os) throw DataError("cannot write model " + path);
  WriteJsonRecord(os, kModelMagic, header, payload);
  if (!os) throw DataError("write failed for model " + path);
}

ModelArchive ModelArchive::Read(const std::string &path,
                                const std::string &expected_family) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw DataError("cannot open model " + path);
  auto header = ReadJsonHeader(is, kModelMagic, path);
  if (!header) throw DataError(path + ": empty model file");
  ModelArchive ar;
  try {
    if ((*header)["version"].get<int>() != kModelSchemaVersion)
      throw DataError(path + ": unsupported model schema version");
    if ((*header)["dtype"].get<std::string>() != "f64le")
      throw DataError(path + ": unsupported dtype");
    ar.family_ = (*header)["family"].get<std::string>();
    ar.meta_ = (*header)["meta"];
    for (const auto &t : (*header)["tensors"]) {
      auto rows = t["rows"].get<Eigen::Index>();
      auto cols = t["cols"].get<Eigen::Index>();
      if (rows < 0 || cols < 0) throw DataError(path + ": negative shape");
      std::string bytes = ReadPayload(
          is, sizeof(Real) * static_cast<size_t>(rows * cols), path);
      Eigen::Map<const RowMajor> rm(reinterpret_cast<const Real *>(bytes.data()),
                                    rows, cols);
      ar.PutMatrix(t["name"].get<std::string>(), Matrix(rm));
    }
  } catch (const nlohmann::json::exception &e) {
    throw DataError(path + ": bad model header: " + e.what());
  }
  if (!expected_family.empty() && ar.family_ != expected_family)
    throw DataError(path + ": expected a '" + expected_family +
                    "' model, found '" + ar.family_ + "'");
  return ar;
}

nlohmann::json TrainingOptionsToJson(const TrainingOptions &o) {
  return {{"learning_rate", o.learning_rate},
          {"momentum", o.momentum},
          {"batch_size", o.batch_size},
          {"max_epochs", o.max_epochs},
          {"patience", o.patience}};
}

TrainingOptions TrainingOptionsFromJson(const nlohmann::json &j) {
  TrainingOptions o;
  o.learning_rate = j.value("learning_rate", o.learning_rate);
  o.momentum = j.value("momentum", o.momentum);
  o.batch_size = j.value("batch_size", o.batch_size);
  o.max_epochs = j.value("max_epochs", o.max_epochs);
  o.patience = j.value("patience", o.patience);
  return o;
}

void PutMlp(ModelArchive *ar, const std::string &prefix, const MlpModel &m) {
  nlohmann::json layers = nlohmann::json::array();
  for (size_t l = 0; l < m.NumLayers(); l++) {
    const DenseLayer &layer = m.layer(l);
    layers.push_back({{"in", layer.InputDim()},
                      {"out", layer.OutputDim()},
                      {"activation", ActivationName(layer.activation)},
                      {"dropout", layer.dropout_rate}});
    std::string base = prefix + "." + std::to_string(l);
    ar->PutMatrix(base + ".weights", layer.weights);
    ar->PutVector(base + ".bias", layer.bias);
  }
  ar->meta()[prefix] = {{"input_dim", m.InputDim()},
                        {"seed", m.seed()},
                        {"layers", layers},
                        {"training", TrainingOptionsToJson(m.training())}};
}

MlpModel GetMlp(const ModelArchive &ar, const std::string &prefix) {
  if (!ar.meta().contains(prefix))
    throw DataError("model archive has no network '" + prefix + "'");
  const auto &j = ar.meta()[prefix];
  std::vector<DenseLayer> layers;
  Eigen::Index input_dim = 0;
  uint64_t seed = 0;
  try {
    input_dim = j.at("input_dim").get<Eigen::Index>();
    seed = j.at("seed").get<uint64_t>();
    for (size_t l = 0; l < j.at("layers").size(); l++) {
      const auto &lj = j["layers"][l];
      DenseLayer layer;
      std::string base = prefix + "." + std::to_string(l);
      layer.weights = ar.GetMatrix(base + ".weights");
      layer.bias = ar.GetVector(base + ".bias");
      if (layer.InputDim() != lj.at("in").get<Eigen::Index>() ||
          layer.OutputDim() != lj.at("out").get<Eigen::Index>())
        throw ShapeError("layer " + base + " shape disagrees with header");
      layer.activation = ParseActivation(lj.at("activation").get<std::string>());
      layer.dropout_rate = lj.at("dropout").get<Real>();
      layers.push_back(std::move(layer));
    }
  } catch (const nlohmann::json::exception &e) {
    throw DataError("bad network description '" + prefix + "': " + e.what());
  } catch (const ConfigError &e) {
    throw DataError(e.what());
  }
  MlpModel m(input_dim, std::move(layers), seed);
  if (j.contains("training"))
    m.training() = TrainingOptionsFromJson(j["training"]);
  return m;
}

void PutNormStats(ModelArchive *ar, const std::string &prefix,
                  const NormStats &s) {
  ar->PutVector(prefix + ".mean", s.mean);
  ar->PutVector(prefix + ".stddev", s.stddev);
  ar->meta()[prefix] = {{"id", s.Id()}, {"dim", s.Dim()}};
}

NormStats GetNormStats(const ModelArchive &ar, const std::string &prefix) {
  NormStats s;
  s.mean = ar.GetVector(prefix + ".mean");
  s.stddev = ar.GetVector(prefix + ".stddev");
  if (s.mean.size() != s.stddev.size())
    throw DataError("normalisation stats '" + prefix + "' are inconsistent");
  if (ar.meta().contains(prefix) &&
      ar.meta()[prefix].value("id", std::string()) != s.Id())
    throw DataError("normalisation stats '" + prefix +
                    "' do not match their recorded id");
  return s;
}

}  // namespace audiotag
