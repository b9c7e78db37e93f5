// tools/audiotag-cli.cc

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

#include "audiotag-cli.h"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

#include "audiotag/feat/feature-cache.h"
#include "audiotag/pipeline/experiment.h"

namespace audiotag {

namespace fs = std::filesystem;

namespace {

// Options shared by every command that reads the corpus.
struct DataArgs {
  std::string config;
  std::string chunks;
  std::string fold_spec;
  std::string audio_dir;
  std::string features_cache;
  std::optional<uint64_t> seed;

  void Add(CLI::App *app, bool with_cache = true) {
    app->add_option("--config", config, "YAML experiment config");
    app->add_option("--chunks", chunks, "chunk list CSV (overrides config)");
    app->add_option("--fold-spec", fold_spec, "chunk_id,fold CSV");
    app->add_option("--audio-dir", audio_dir, "directory of <chunk_id>.wav");
    app->add_option("--seed", seed, "master seed (overrides config)");
    if (with_cache)
      app->add_option("--features-cache", features_cache,
                      "read front-end features from this cache, not audio");
  }

  ExperimentConfig Load() const {
    ExperimentConfig c;
    if (!config.empty()) c = LoadExperimentConfig(config);
    if (!chunks.empty()) c.chunk_list = chunks;
    if (!fold_spec.empty()) c.fold_spec = fold_spec;
    if (!audio_dir.empty()) c.audio_dir = audio_dir;
    if (seed) c.seed = *seed;
    if (c.chunk_list.empty())
      throw ConfigError("a chunk list is needed (--chunks or data.chunk_list)");
    return c;
  }
};

int ParseFold(const std::string &text) {
  FoldAssignment a = FoldAssignment::Parse(text);
  if (a.kind == FoldAssignment::Kind::kNone)
    throw ConfigError("--fold must be 0-4 or eval");
  return a.kind == FoldAssignment::Kind::kEvaluation
             ? FoldSelection::kEvaluationFold
             : a.index;
}

ChunkList LoadChunks(const ExperimentConfig &c) {
  return LoadChunkList(c.chunk_list, c.fold_spec, c.audio_dir);
}

// Features for `records`, from audio or from a cache holding every one of
// them.
std::vector<FeatureMatrix> RecordFeatures(std::span<const ChunkRecord> records,
                                          FeatureKind kind,
                                          const std::string &cache) {
  if (cache.empty()) return ExtractRecords(records, kind);
  std::map<std::string, FeatureMatrix> by_id;
  for (auto &m : ReadFeatureCache(cache)) {
    if (m.kind != kind)
      throw DataError(cache + " holds " + FeatureKindName(m.kind) +
                      " features, " + FeatureKindName(kind) + " needed");
    if (!m.norm_stats_id.empty())
      throw DataError(cache + " holds normalized features");
    std::string id = m.chunk_id;
    by_id.emplace(id, std::move(m));
  }
  std::vector<FeatureMatrix> out;
  out.reserve(records.size());
  for (const auto &r : records) {
    auto it = by_id.find(r.chunk_id);
    if (it == by_id.end())
      throw DataError(cache + " has no features for chunk " + r.chunk_id);
    out.push_back(it->second);
  }
  return out;
}

struct TrainingData {
  std::vector<ChunkRecord> records;
  std::vector<FeatureMatrix> features;
  std::vector<TagSet> tags;
};

TrainingData LoadTraining(const ExperimentConfig &c, int fold,
                          FeatureKind kind, const std::string &cache) {
  TrainingData d;
  d.records = LoadChunks(c).TrainingSet({fold, c.include_weak});
  if (d.records.empty())
    throw DataError("fold " + FoldLabel(fold) + " has no training chunks");
  d.features = RecordFeatures(d.records, kind, cache);
  for (const auto &r : d.records) d.tags.push_back(r.tags);
  spdlog::info("{}: {} training chunks", FoldLabel(fold), d.records.size());
  return d;
}

// Records of the list, optionally limited to one fold's train or test set.
std::vector<ChunkRecord> SelectRecords(const ChunkList &list,
                                       const std::string &fold,
                                       const std::string &subset,
                                       bool include_weak) {
  if (fold.empty()) {
    if (subset != "all")
      throw ConfigError("--subset " + subset + " needs --fold");
    return list.records();
  }
  FoldSelection sel{ParseFold(fold), include_weak};
  if (subset == "train") return list.TrainingSet(sel);
  if (subset == "test" || subset == "all") return list.TestSet(sel);
  throw ConfigError("--subset must be all, train or test");
}

std::ostream &OpenOutput(const std::string &path, std::ostream &stdout_stream,
                         std::ofstream *file) {
  if (path.empty() || path == "-") return stdout_stream;
  if (fs::path(path).has_parent_path())
    fs::create_directories(fs::path(path).parent_path());
  file->open(path, std::ios::binary);
  if (!*file) throw DataError("cannot write " + path);
  return *file;
}

void EnsureParent(const std::string &path) {
  if (fs::path(path).has_parent_path())
    fs::create_directories(fs::path(path).parent_path());
}

void SetupLogging(const std::string &level) {
  static std::shared_ptr<spdlog::logger> logger = [] {
    auto l = std::make_shared<spdlog::logger>(
        "audiotag", std::make_shared<spdlog::sinks::stderr_sink_mt>());
    l->set_pattern("%^%l%$ %v");
    return l;
  }();
  spdlog::set_default_logger(logger);
  spdlog::level::level_enum lv = spdlog::level::from_str(level);
  if (lv == spdlog::level::off && level != "off")
    throw ConfigError("unknown log level '" + level + "'");
  spdlog::set_level(lv);
}

}  // namespace

int RunCli(const std::vector<std::string> &args, std::ostream &out,
           std::ostream &err) {
  CLI::App app{"Multi-label audio tagging: features, models and evaluation",
               "audiotag"};
  app.require_subcommand(1);
  std::string log_level = "info";
  app.add_option("--log-level", log_level,
                 "trace, debug, info, warn, error or off")
      ->capture_default_str();

  // extract-features
  DataArgs ex_data;
  std::string ex_features = "mbk", ex_output, ex_fold, ex_subset = "all";
  auto *ex = app.add_subcommand("extract-features",
                                "compute MBK or MFCC features into a cache");
  ex_data.Add(ex, false);
  ex->add_option("--features", ex_features, "mbk or mfcc")->capture_default_str();
  ex->add_option("--fold", ex_fold, "restrict to one fold (0-4 or eval)");
  ex->add_option("--subset", ex_subset, "all, train or test")
      ->capture_default_str();
  ex->add_option("--output", ex_output, "feature cache to write")->required();

  // train-dnn
  DataArgs dnn_data;
  std::string dnn_features = "mbk", dnn_fold, dnn_output, dnn_dae;
  auto *dnn = app.add_subcommand("train-dnn", "train the DNN tagger on one fold");
  dnn_data.Add(dnn);
  dnn->add_option("--features", dnn_features, "mbk, mfcc or daecode")
      ->capture_default_str();
  dnn->add_option("--fold", dnn_fold, "test fold (0-4 or eval)")->required();
  dnn->add_option("--dae", dnn_dae, "autoencoder model (daecode features)");
  dnn->add_option("--output", dnn_output, "tagger model to write")->required();

  // train-dae
  DataArgs dae_data;
  std::string dae_fold, dae_output, dae_variant;
  auto *dae = app.add_subcommand("train-dae",
                                 "train a denoising autoencoder on MBK frames");
  dae_data.Add(dae);
  dae->add_option("--fold", dae_fold, "test fold (0-4 or eval)")->required();
  dae->add_option("--variant", dae_variant, "asymmetric or symmetric");
  dae->add_option("--output", dae_output, "autoencoder model to write")
      ->required();

  // encode-dae
  DataArgs enc_data;
  std::string enc_model, enc_output, enc_fold, enc_subset = "all";
  auto *enc = app.add_subcommand("encode-dae",
                                 "write the bottleneck codes of every chunk");
  enc_data.Add(enc);
  enc->add_option("--dae", enc_model, "autoencoder model")->required();
  enc->add_option("--fold", enc_fold, "restrict to one fold (0-4 or eval)");
  enc->add_option("--subset", enc_subset, "all, train or test")
      ->capture_default_str();
  enc->add_option("--output", enc_output, "daecode feature cache to write")
      ->required();

  // train-gmm
  DataArgs gmm_data;
  std::string gmm_fold, gmm_output, gmm_tags, gmm_init, gmm_features;
  auto *gmm = app.add_subcommand("train-gmm",
                                 "train per-tag GMM pairs on one fold");
  gmm_data.Add(gmm);
  gmm->add_option("--fold", gmm_fold, "test fold (0-4 or eval)")->required();
  gmm->add_option("--tag", gmm_tags, "tag letters to train (default: all)");
  gmm->add_option("--init", gmm_init,
                  "start from this model; untouched tags are kept");
  gmm->add_option("--features", gmm_features, "mbk or mfcc (default mfcc)");
  gmm->add_option("--output", gmm_output, "GMM model to write")->required();

  // train-misvm / train-chunksvm
  DataArgs svm_data;
  std::string svm_fold, svm_output, svm_features;
  auto *misvm = app.add_subcommand("train-misvm",
                                   "train frame-instance MI-SVMs on one fold");
  auto *chsvm = app.add_subcommand("train-chunksvm",
                                   "train chunk-statistics SVMs on one fold");
  for (auto *s : {misvm, chsvm}) {
    svm_data.Add(s);
    s->add_option("--fold", svm_fold, "test fold (0-4 or eval)")->required();
    s->add_option("--features", svm_features, "mbk or mfcc (default mfcc)");
    s->add_option("--output", svm_output, "SVM model to write")->required();
  }

  // predict
  DataArgs pr_data;
  std::string pr_model, pr_dae, pr_output = "-", pr_fold, pr_subset = "test";
  auto *pr = app.add_subcommand("predict", "score chunks with a trained model");
  pr_data.Add(pr);
  pr->add_option("--model", pr_model, "model file")->required();
  pr->add_option("--dae", pr_dae, "autoencoder for a daecode tagger");
  pr->add_option("--fold", pr_fold, "restrict to one fold (0-4 or eval)");
  pr->add_option("--subset", pr_subset, "with --fold: all, train or test")
      ->capture_default_str();
  pr->add_option("--output", pr_output, "scores CSV ('-' for stdout)")
      ->capture_default_str();

  // evaluate
  DataArgs ev_data;
  std::string ev_scores, ev_output = "-", ev_markdown, ev_roc, ev_name;
  std::optional<Real> ev_threshold;
  auto *ev = app.add_subcommand("evaluate",
                                "EER and precision/recall of a scores CSV");
  ev_data.Add(ev, false);
  ev->add_option("--scores", ev_scores, "scores CSV")->required();
  ev->add_option("--threshold", ev_threshold, "decision threshold (0.4)");
  ev->add_option("--name", ev_name, "report name (default: scores file stem)");
  ev->add_option("--output", ev_output, "report CSV ('-' for stdout)")
      ->capture_default_str();
  ev->add_option("--markdown", ev_markdown, "also write a markdown table");
  ev->add_option("--roc-dir", ev_roc, "write <name>-<tag>.csv ROC data here");

  // compare
  std::vector<std::string> cmp_reports;
  std::string cmp_output = "-";
  bool cmp_markdown = false;
  auto *cmp = app.add_subcommand("compare",
                                 "tabulate reports side by side with deltas");
  cmp->add_option("reports", cmp_reports, "report CSVs")->required();
  cmp->add_flag("--markdown", cmp_markdown, "markdown instead of CSV");
  cmp->add_option("--output", cmp_output, "table ('-' for stdout)")
      ->capture_default_str();

  // run
  std::string run_config, run_outdir;
  std::optional<uint64_t> run_seed;
  auto *run = app.add_subcommand("run", "train, score and evaluate every fold");
  run->add_option("--config", run_config, "YAML experiment config")->required();
  run->add_option("--output-dir", run_outdir, "override output_dir");
  run->add_option("--seed", run_seed, "override seed");

  auto *defcfg = app.add_subcommand("default-config",
                                    "print a config with every default");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError &e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : static_cast<int>(ExitCode::kUsage);
  }

  try {
    SetupLogging(log_level);

    if (*ex) {
      ExperimentConfig c = ex_data.Load();
      FeatureKind kind = ParseFeatureKind(ex_features);
      if (kind == FeatureKind::kDaeCode)
        throw ConfigError("daecode features come from encode-dae");
      auto records =
          SelectRecords(LoadChunks(c), ex_fold, ex_subset, c.include_weak);
      std::vector<FeatureMatrix> feats;
      RunStage("extract-features", [&] { feats = ExtractRecords(records, kind); });
      EnsureParent(ex_output);
      WriteFeatureCache(ex_output, feats);
      spdlog::info("wrote {} {} matrices to {}", feats.size(), ex_features,
                   ex_output);
    } else if (*dnn) {
      ExperimentConfig c = dnn_data.Load();
      int fold = ParseFold(dnn_fold);
      FeatureKind kind = ParseFeatureKind(dnn_features);
      uint64_t seed = FoldSeed(c, fold);
      TaggerConfig tc = c.tagger;
      tc.seed = DeriveSeed(seed, "tagger");
      tc.features = kind;
      Tagger t;
      if (kind == FeatureKind::kDaeCode) {
        if (dnn_dae.empty())
          throw ConfigError("--features daecode needs --dae");
        DaeModel m = DaeModel::Load(dnn_dae);
        tc.context.dilation =
            c.dae_code_dilation > 0
                ? c.dae_code_dilation
                : (m.config.variant == DaeVariant::kSymmetric ? 7 : 1);
        // A cache may hold either the MBK front end or ready codes.
        std::vector<FeatureMatrix> codes;
        bool cached_codes = false;
        if (!dnn_data.features_cache.empty()) {
          auto probe = ReadFeatureCache(dnn_data.features_cache);
          cached_codes = !probe.empty() && probe[0].kind == FeatureKind::kDaeCode;
        }
        TrainingData d = LoadTraining(
            c, fold, cached_codes ? FeatureKind::kDaeCode : FeatureKind::kMbk40,
            dnn_data.features_cache);
        RunStage("encode", [&] {
          codes = cached_codes ? std::move(d.features)
                               : EncodeCorpus(m, d.features);
          if (!codes.empty() && codes[0].Dim() != m.CodeDim())
            throw DataError("codes do not match the autoencoder bottleneck");
        });
        RunStage("train-dnn", [&] {
          t = TrainTagger(codes, d.tags, tc, FitNormStats(codes));
        });
      } else {
        TrainingData d = LoadTraining(c, fold, kind, dnn_data.features_cache);
        RunStage("train-dnn", [&] {
          t = TrainTagger(d.features, d.tags, tc, FitNormStats(d.features));
        });
      }
      EnsureParent(dnn_output);
      t.Save(dnn_output);
      spdlog::info("wrote {}", dnn_output);
    } else if (*dae) {
      ExperimentConfig c = dae_data.Load();
      int fold = ParseFold(dae_fold);
      DaeConfig dc = c.dae;
      if (!dae_variant.empty() && ParseDaeVariant(dae_variant) != dc.variant)
        dc = ParseDaeVariant(dae_variant) == DaeVariant::kSymmetric
                 ? DaeConfig::Symmetric()
                 : DaeConfig::Asymmetric();
      dc.seed = DeriveSeed(FoldSeed(c, fold), "dae");
      dc.Validate();
      TrainingData d =
          LoadTraining(c, fold, FeatureKind::kMbk40, dae_data.features_cache);
      DaeModel m;
      RunStage("train-dae",
               [&] { m = TrainDae(d.features, dc, FitNormStats(d.features)); });
      EnsureParent(dae_output);
      m.Save(dae_output);
      spdlog::info("wrote {}", dae_output);
    } else if (*enc) {
      ExperimentConfig c = enc_data.Load();
      DaeModel m = DaeModel::Load(enc_model);
      auto records =
          SelectRecords(LoadChunks(c), enc_fold, enc_subset, c.include_weak);
      std::vector<FeatureMatrix> codes;
      RunStage("encode-dae", [&] {
        codes = EncodeCorpus(m, RecordFeatures(records, FeatureKind::kMbk40,
                                               enc_data.features_cache));
      });
      EnsureParent(enc_output);
      WriteFeatureCache(enc_output, codes);
      spdlog::info("wrote {} code matrices to {}", codes.size(), enc_output);
    } else if (*gmm) {
      ExperimentConfig c = gmm_data.Load();
      int fold = ParseFold(gmm_fold);
      FeatureKind kind = gmm_features.empty() ? FeatureKind::kMfcc24
                                              : ParseFeatureKind(gmm_features);
      std::vector<int> tags;
      if (gmm_tags.empty()) {
        for (int k = 0; k < kNumTags; k++) tags.push_back(k);
      } else {
        for (char ch : gmm_tags) {
          if (ch == ',') continue;
          int k = TagIndex(ch);
          if (k < 0) throw ConfigError(std::string("unknown tag '") + ch + "'");
          tags.push_back(k);
        }
      }
      GmmTagModel model;
      if (!gmm_init.empty()) {
        model = GmmTagModel::Load(gmm_init);
        if (model.features != kind)
          throw ConfigError(gmm_init + " was trained on " +
                            FeatureKindName(model.features) + " features");
      }
      TrainingData d = LoadTraining(c, fold, kind, gmm_data.features_cache);
      EmOptions o = c.gmm;
      o.seed = DeriveSeed(FoldSeed(c, fold), "gmm");
      RunStage("train-gmm", [&] {
        for (int k : tags) TrainGmmForTag(d.features, d.tags, k, o, &model);
      });
      EnsureParent(gmm_output);
      model.Save(gmm_output);
      spdlog::info("wrote {}", gmm_output);
    } else if (*misvm || *chsvm) {
      ExperimentConfig c = svm_data.Load();
      int fold = ParseFold(svm_fold);
      FeatureKind kind = svm_features.empty() ? FeatureKind::kMfcc24
                                              : ParseFeatureKind(svm_features);
      if (kind == FeatureKind::kDaeCode)
        throw ConfigError("SVM baselines take mbk or mfcc features");
      TrainingData d = LoadTraining(c, fold, kind, svm_data.features_cache);
      uint64_t seed = FoldSeed(c, fold);
      SvmTagModel model;
      if (*misvm) {
        MisvmOptions o = c.svm;
        o.svm.seed = DeriveSeed(seed, "misvm");
        RunStage("train-misvm",
                 [&] { model = TrainMisvm(d.features, d.tags, o); });
      } else {
        SvmOptions o = c.svm.svm;
        o.seed = DeriveSeed(seed, "chunksvm");
        RunStage("train-chunksvm",
                 [&] { model = TrainChunkSvm(d.features, d.tags, o); });
      }
      EnsureParent(svm_output);
      model.Save(svm_output);
      spdlog::info("wrote {}", svm_output);
    } else if (*pr) {
      ExperimentConfig c = pr_data.Load();
      auto scorer = LoadScorer(pr_model, pr_dae);
      auto records = SelectRecords(LoadChunks(c), pr_fold,
                                   pr_fold.empty() ? "all" : pr_subset,
                                   c.include_weak);
      std::vector<ChunkScore> scores;
      RunStage("predict", [&] {
        auto feats = RecordFeatures(records, scorer->FrontEnd(),
                                    pr_data.features_cache);
        for (size_t i = 0; i < records.size(); i++)
          scores.push_back({records[i].chunk_id, scorer->Score(feats[i])});
      });
      std::ofstream file;
      WriteScoresCsv(OpenOutput(pr_output, out, &file), scores);
    } else if (*ev) {
      ExperimentConfig c = ev_data.Load();
      Real threshold = ev_threshold ? *ev_threshold : c.threshold;
      std::string name =
          ev_name.empty() ? fs::path(ev_scores).stem().string() : ev_name;
      ScoredSet scored = JoinScores(ReadScoresCsv(ev_scores), LoadChunks(c));
      EvalReport rep = Evaluate(scored, name, threshold);
      std::ofstream file;
      OpenOutput(ev_output, out, &file) << ReportCsv(rep);
      if (!ev_markdown.empty()) {
        std::ofstream md;
        OpenOutput(ev_markdown, out, &md)
            << ReportMarkdown(std::span<const EvalReport>(&rep, 1));
      }
      if (!ev_roc.empty()) {
        fs::create_directories(ev_roc);
        for (int k = 0; k < kNumTags; k++) {
          if (!rep.tags[static_cast<size_t>(k)].eer) continue;
          std::ofstream(fs::path(ev_roc) / (name + "-" + TagLetter(k) + ".csv"),
                        std::ios::binary)
              << RocCsv(scored, k);
        }
      }
    } else if (*cmp) {
      std::vector<EvalReport> reports;
      for (const auto &p : cmp_reports) reports.push_back(ReadReportCsv(p));
      std::ofstream file;
      OpenOutput(cmp_output, out, &file) << CompareReports(reports, cmp_markdown);
    } else if (*run) {
      ExperimentConfig c = LoadExperimentConfig(run_config);
      if (!run_outdir.empty()) c.output_dir = run_outdir;
      if (run_seed) c.seed = *run_seed;
      RunResult r = RunExperiment(c);
      out << ReportMarkdown(std::span<const EvalReport>(&r.summary, 1));
      if (!r.summary.complete)
        spdlog::warn("summary is incomplete; see missing folds in the report");
    } else if (*defcfg) {
      out << DefaultConfigYaml();
    }
  } catch (const Error &e) {
    err << "audiotag: " << e.what() << "\n";
    return static_cast<int>(e.code());
  } catch (const fs::filesystem_error &e) {
    err << "audiotag: " << e.what() << "\n";
    return static_cast<int>(ExitCode::kData);
  } catch (const std::exception &e) {
    err << "audiotag: internal error: " << e.what() << "\n";
    return static_cast<int>(ExitCode::kUsage);
  }
  return 0;
}

}  // namespace audiotag
