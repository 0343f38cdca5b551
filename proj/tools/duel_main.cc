// Copyright 2026 The Duel Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


// duel: train, segment, fuse, evaluate and generate two-author corpora.
//
//   duel train    --corpus train.jsonl --variant I --model model.json
//   duel segment  --corpus test.jsonl --model model.json --iterations 5
//                 --coherence --network names.tsv --out run/
//   duel fuse     --fuse-inputs a.jsonl b.jsonl --corpus dev.jsonl --out fused/
//   duel eval     --corpus test.jsonl --pred run/segments.jsonl
//   duel generate --seed 7 --out synth/
//
// A JSON file given with --config supplies defaults; flags override it.
// Failures print {"error": kind, "message": ...} on stderr and exit nonzero.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "duel/corpus.h"
#include "duel/eval.h"
#include "duel/fusion.h"
#include "duel/models.h"
#include "duel/pipeline.h"
#include "duel/propnet.h"
#include "duel/records.h"
#include "duel/synthgen.h"
#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace duel {
namespace {

struct RunConfig {
  std::string config_path;
  std::string corpus;
  std::string model;
  std::string variant = "I";
  int iterations = 5;
  bool coherence = false;
  std::string network;
  std::string net_scope = "corpus";
  int net_threshold = 1;
  int net_iterations = 4;
  std::vector<std::string> fuse_inputs;
  std::string weights;
  std::string xi_mode = "binary";
  int epochs = 1000;
  std::uint64_t seed = 1;
  std::string out = "out";
  bool dump_psi = false;
  std::string carry = "marginals";
  std::string coherence_unit = "word";
  std::string pred;
  int discourses = 80;
  int train_split = 40;
  AdaptationConfig adaptation;
  std::array<double, kNumFeatures> raw_weights = DefaultRawWeights();
};

std::string ReadFile(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void WriteFile(const fs::path &path, const std::string &text) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
}

// Fills every field the file mentions. Unknown keys are rejected.
void ApplyConfigFile(const std::string &path, RunConfig &rc) {
  json j;
  try {
    j = json::parse(ReadFile(path));
  } catch (const json::parse_error &e) {
    throw ParseError(std::string("config: ") + e.what(), 1);
  }
  try {
    for (const auto &[key, v] : j.items()) {
      if (key == "corpus") rc.corpus = v.get<std::string>();
      else if (key == "model") rc.model = v.get<std::string>();
      else if (key == "variant") rc.variant = v.get<std::string>();
      else if (key == "iterations") rc.iterations = v.get<int>();
      else if (key == "coherence") rc.coherence = v.get<bool>();
      else if (key == "network") rc.network = v.get<std::string>();
      else if (key == "net_scope") rc.net_scope = v.get<std::string>();
      else if (key == "net_threshold") rc.net_threshold = v.get<int>();
      else if (key == "net_iterations") rc.net_iterations = v.get<int>();
      else if (key == "fuse_inputs") rc.fuse_inputs = v.get<std::vector<std::string>>();
      else if (key == "weights") rc.weights = v.get<std::string>();
      else if (key == "xi_mode") rc.xi_mode = v.get<std::string>();
      else if (key == "epochs") rc.epochs = v.get<int>();
      else if (key == "seed") rc.seed = v.get<std::uint64_t>();
      else if (key == "out") rc.out = v.get<std::string>();
      else if (key == "dump_psi") rc.dump_psi = v.get<bool>();
      else if (key == "carry") rc.carry = v.get<std::string>();
      else if (key == "coherence_unit") rc.coherence_unit = v.get<std::string>();
      else if (key == "lambda0_start") rc.adaptation.lambda0_start = v.get<double>();
      else if (key == "lambda0_step") rc.adaptation.lambda0_step = v.get<double>();
      else if (key == "adaptation_weights") {
        rc.adaptation.weights.dyn_lemma = v.value("dyn_lemma", rc.adaptation.weights.dyn_lemma);
        rc.adaptation.weights.dyn_word = v.value("dyn_word", rc.adaptation.weights.dyn_word);
        rc.adaptation.weights.stat_lemma = v.value("stat_lemma", rc.adaptation.weights.stat_lemma);
        rc.adaptation.weights.stat_word = v.value("stat_word", rc.adaptation.weights.stat_word);
      } else if (key == "feature_weights") {
        for (const auto &[name, w] : v.items()) {
          rc.raw_weights[FeatureIndex(ParseFeature(name))] = w.get<double>();
        }
      } else {
        throw InvalidArgument("unknown config key '" + key + "'");
      }
    }
  } catch (const json::exception &e) {
    throw ParseError(std::string("config: ") + e.what(), 1);
  }
}

std::vector<SegmentRecord> ToRecords(const Corpus &corpus, const IterationOutput &out) {
  std::vector<SegmentRecord> records;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    SegmentRecord r;
    r.id = corpus[i].id;
    r.labels = out.segmentations[i].labels;
    r.block = out.segmentations[i].block;
    for (const ProbPair &p : out.posteriors[i]) r.p_m.push_back(p.m);
    records.push_back(std::move(r));
  }
  return records;
}

void Require(const std::string &value, const char *flag) {
  if (value.empty()) throw InvalidArgument(std::string(flag) + " is required");
}

int CmdTrain(const RunConfig &rc) {
  Require(rc.corpus, "--corpus");
  Require(rc.model, "--model");
  const Corpus corpus = LoadCorpus(rc.corpus, true);
  for (const Discourse &d : corpus) {
    if (!d.labeled()) {
      throw AnnotationError("training corpus discourse " + d.id + " is not labeled");
    }
  }
  const ModelSet models = TrainModels(corpus, ParseVariant(rc.variant), rc.raw_weights);
  SaveModels(rc.model, models);
  std::cout << json{{"model", rc.model},
                    {"variant", VariantName(models.variant)},
                    {"discourses", corpus.size()}}
                   .dump()
            << '\n';
  return 0;
}

int CmdSegment(const RunConfig &rc) {
  Require(rc.corpus, "--corpus");
  Require(rc.model, "--model");
  if (!fs::exists(rc.model)) throw IoError("missing checkpoint " + rc.model);
  const ModelSet models = LoadModels(rc.model);
  const Corpus corpus = LoadCorpus(rc.corpus, false);

  PipelineConfig cfg;
  cfg.adaptation = rc.adaptation;
  cfg.adaptation.iterations = rc.iterations;
  cfg.coherence = rc.coherence;
  cfg.coherence_cfg.unit = rc.coherence_unit == "lemma" ? Unit::kLemma : Unit::kWord;
  if (rc.coherence_unit != "word" && rc.coherence_unit != "lemma") {
    throw InvalidArgument("coherence unit must be word or lemma");
  }
  if (cfg.coherence_cfg.unit == Unit::kLemma && models.variant == Variant::kModelII) {
    throw InvalidArgument("lemma coherence requires Model I");
  }
  cfg.carry = ParseCarryMode(rc.carry);
  cfg.keep_psi = rc.dump_psi;
  std::optional<ConceptNetwork> net;
  if (!rc.network.empty()) {
    net = LoadNetwork(rc.network);
    cfg.network = &*net;
    cfg.grouping = GroupingConfig{rc.net_threshold, rc.net_iterations,
                                  ParseGroupScope(rc.net_scope)};
  }
  const PipelineResult result = RunPipeline(models, corpus, cfg);

  const fs::path out(rc.out);
  fs::create_directories(out);
  for (const IterationOutput &it : result.iterations) {
    SaveRecords((out / ("iter_" + std::to_string(it.iteration) + ".jsonl")).string(),
                ToRecords(corpus, it));
  }
  SaveRecords((out / "segments.jsonl").string(), ToRecords(corpus, result.iterations.back()));
  if (result.groups) WriteFile(out / "groups.json", GroupReportJson(*result.groups, corpus) + "\n");
  if (rc.dump_psi) {
    fs::create_directories(out / "psi");
    for (std::size_t i = 0; i < corpus.size(); ++i) {
      WriteFile(out / "psi" / (corpus[i].id + ".csv"), PsiCsv(result.psi[i]));
    }
  }

  json report = {{"variant", VariantName(models.variant)},
                 {"iterations", rc.iterations},
                 {"coherence", rc.coherence},
                 {"carry", rc.carry},
                 {"propnet", !rc.network.empty()}};
  const IterationOutput &last = result.iterations.back();
  if (last.report) {
    std::vector<CurvePoint> curve;
    for (const IterationOutput &it : result.iterations) {
      curve.push_back(CurvePoint{it.iteration, it.report->metrics});
    }
    WriteFile(out / "metrics.csv", CurveCsv(curve));
    report["final"] = json::parse(ReportJson(*last.report));
    std::cout << ReportTable(*last.report);
  }
  WriteFile(out / "report.json", report.dump(2) + "\n");
  return 0;
}

int CmdFuse(const RunConfig &rc) {
  if (rc.fuse_inputs.empty()) throw InvalidArgument("--fuse-inputs is required");
  std::vector<HypothesisDump> dumps;
  std::vector<std::vector<SegmentRecord>> inputs;
  for (const std::string &path : rc.fuse_inputs) {
    inputs.push_back(LoadRecords(path));
    dumps.push_back(DumpFromRecords(path, inputs.back()));
  }
  const XiMode mode = rc.xi_mode == "posterior" ? XiMode::kPosterior : XiMode::kBinary;
  if (rc.xi_mode != "binary" && rc.xi_mode != "posterior") {
    throw InvalidArgument("xi mode must be binary or posterior");
  }
  JudgeMatrix judges = BuildJudges(dumps, mode);
  std::optional<Corpus> reference;
  if (!rc.corpus.empty()) reference = LoadCorpus(rc.corpus, false);

  VoteWeights w;
  const fs::path out(rc.out);
  fs::create_directories(out);
  if (!rc.weights.empty()) {
    w = LoadWeights(rc.weights);
    if (w.alpha.size() != judges.cols()) {
      throw InvalidArgument("weights have " + std::to_string(w.alpha.size()) +
                            " judges, inputs have " + std::to_string(judges.cols()));
    }
  } else {
    if (!reference) throw InvalidArgument("training weights needs a labeled --corpus");
    AttachReferences(judges, *reference);
    w = TrainVote(judges, PocketConfig{rc.epochs, 1.0, rc.seed});
    SaveWeights((out / "weights.json").string(), w);
  }

  const std::vector<Label> fused = ApplyVote(judges, w);
  // Rows follow the first input, discourse by discourse.
  std::vector<SegmentRecord> records;
  std::size_t row = 0;
  for (const SegmentRecord &r : inputs.front()) {
    SegmentRecord f;
    f.id = r.id;
    for (std::size_t k = 0; k < r.labels.size(); ++k) f.labels.push_back(fused[row++]);
    f.block = BlockFromLabels(f.labels);
    records.push_back(std::move(f));
  }
  SaveRecords((out / "fused.jsonl").string(), records);

  if (reference && std::all_of(reference->begin(), reference->end(),
                               [](const Discourse &d) { return d.labeled(); })) {
    std::map<std::string, std::vector<Label>> by_id;
    for (const SegmentRecord &r : records) by_id[r.id] = r.labels;
    std::vector<std::vector<Label>> preds;
    for (const Discourse &d : *reference) {
      auto it = by_id.find(d.id);
      if (it == by_id.end()) throw AlignmentError("fused output lacks " + d.id);
      preds.push_back(it->second);
    }
    const EvalReport report = Evaluate(*reference, preds);
    WriteFile(out / "report.json", ReportJson(report) + "\n");
    std::cout << ReportTable(report);
  }
  return 0;
}

int CmdEval(const RunConfig &rc) {
  Require(rc.corpus, "--corpus");
  Require(rc.pred, "--pred");
  const Corpus reference = LoadCorpus(rc.corpus, true);
  std::map<std::string, std::vector<Label>> by_id;
  for (const SegmentRecord &r : LoadRecords(rc.pred)) by_id[r.id] = r.labels;
  std::vector<std::vector<Label>> preds;
  for (const Discourse &d : reference) {
    auto it = by_id.find(d.id);
    if (it == by_id.end()) throw AlignmentError("predictions lack " + d.id);
    preds.push_back(it->second);
  }
  const EvalReport report = Evaluate(reference, preds);
  std::cout << ReportJson(report) << '\n';
  return 0;
}

int CmdGenerate(const RunConfig &rc) {
  GeneratorConfig cfg;
  cfg.seed = rc.seed;
  cfg.n_discourses = rc.discourses;
  const GeneratedData data = Generate(cfg);
  const fs::path out(rc.out);
  fs::create_directories(out);
  SaveCorpus((out / "corpus.jsonl").string(), data.corpus);
  if (rc.train_split > 0 && rc.train_split < cfg.n_discourses) {
    const auto [train, test] = SplitCorpus(data.corpus, rc.train_split);
    SaveCorpus((out / "train.jsonl").string(), train);
    SaveCorpus((out / "test.jsonl").string(), test);
  }
  SaveNetwork((out / "network.tsv").string(), data.network);
  return 0;
}

void PrintError(const std::string &kind, const std::string &message) {
  std::cerr << json{{"error", kind}, {"message", message}}.dump() << '\n';
}

}  // namespace
}  // namespace duel

int main(int argc, char **argv) {
  using namespace duel;
  RunConfig rc;
  RunConfig defaults;

  CLI::App app{"Two-author segmentation of discourses"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");
  app.add_option("--config", rc.config_path, "JSON file with default settings");

  auto common = [&](CLI::App *sub) {
    sub->add_option("--corpus", rc.corpus, "Corpus in JSON-Lines");
    sub->add_option("--out", rc.out, "Output directory");
    sub->add_option("--seed", rc.seed, "Random seed");
  };
  CLI::App *train = app.add_subcommand("train", "Train class models on a labeled corpus");
  common(train);
  train->add_option("--model", rc.model, "Checkpoint to write");
  train->add_option("--variant", rc.variant, "I or II");

  CLI::App *segment = app.add_subcommand("segment", "Segment a corpus");
  common(segment);
  segment->add_option("--model", rc.model, "Checkpoint to read");
  segment->add_option("--variant", rc.variant, "Ignored; the checkpoint fixes it");
  segment->add_option("--iterations", rc.iterations, "Adaptation iterations");
  segment->add_flag("--coherence,!--no-coherence", rc.coherence, "Internal coherence decoding");
  segment->add_option("--coherence-unit", rc.coherence_unit, "word or lemma");
  segment->add_option("--carry", rc.carry, "emissions or marginals");
  segment->add_option("--network", rc.network, "Proper-noun network file");
  segment->add_option("--net-scope", rc.net_scope, "corpus or discourse");
  segment->add_option("--net-threshold", rc.net_threshold, "Shared elements needed, exclusive");
  segment->add_option("--net-iterations", rc.net_iterations, "Grouping iterations");
  segment->add_flag("--dump-psi", rc.dump_psi, "Write Psi matrices");

  CLI::App *fuse = app.add_subcommand("fuse", "Fuse segmentation dumps by a weighted vote");
  common(fuse);
  fuse->add_option("--fuse-inputs", rc.fuse_inputs, "Segmentation dumps");
  fuse->add_option("--weights", rc.weights, "Reuse trained weights");
  fuse->add_option("--xi", rc.xi_mode, "binary or posterior");
  fuse->add_option("--epochs", rc.epochs, "Perceptron epochs");

  CLI::App *eval = app.add_subcommand("eval", "Score a segmentation dump");
  common(eval);
  eval->add_option("--pred", rc.pred, "Segmentation dump");

  CLI::App *generate = app.add_subcommand("generate", "Generate a synthetic corpus");
  common(generate);
  generate->add_option("--discourses", rc.discourses, "Number of discourses");
  generate->add_option("--train-split", rc.train_split, "Discourses in train.jsonl");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    PrintError("usage", e.what());
    return 2;
  }

  try {
    if (!rc.config_path.empty()) {
      // Flags win: load the file into a fresh config, then copy every value
      // that was not given on the command line.
      RunConfig file = defaults;
      ApplyConfigFile(rc.config_path, file);
      CLI::App *sub = app.get_subcommands().front();
      auto given = [&](const char *flag) {
        return sub->get_option_no_throw(flag) != nullptr && sub->count(flag) > 0;
      };
      if (!given("--corpus")) rc.corpus = file.corpus;
      if (!given("--out")) rc.out = file.out;
      if (!given("--seed")) rc.seed = file.seed;
      if (!given("--model")) rc.model = file.model;
      if (!given("--variant")) rc.variant = file.variant;
      if (!given("--iterations")) rc.iterations = file.iterations;
      if (!given("--coherence")) rc.coherence = file.coherence;
      if (!given("--coherence-unit")) rc.coherence_unit = file.coherence_unit;
      if (!given("--carry")) rc.carry = file.carry;
      if (!given("--network")) rc.network = file.network;
      if (!given("--net-scope")) rc.net_scope = file.net_scope;
      if (!given("--net-threshold")) rc.net_threshold = file.net_threshold;
      if (!given("--net-iterations")) rc.net_iterations = file.net_iterations;
      if (!given("--dump-psi")) rc.dump_psi = file.dump_psi;
      if (!given("--fuse-inputs")) rc.fuse_inputs = file.fuse_inputs;
      if (!given("--weights")) rc.weights = file.weights;
      if (!given("--xi")) rc.xi_mode = file.xi_mode;
      if (!given("--epochs")) rc.epochs = file.epochs;
      rc.adaptation = file.adaptation;
      rc.raw_weights = file.raw_weights;
    }
    if (train->parsed()) return CmdTrain(rc);
    if (segment->parsed()) return CmdSegment(rc);
    if (fuse->parsed()) return CmdFuse(rc);
    if (eval->parsed()) return CmdEval(rc);
    if (generate->parsed()) return CmdGenerate(rc);
  } catch (const Error &e) {
    PrintError(e.kind(), e.what());
    return 1;
  } catch (const std::exception &e) {
    PrintError("internal", e.what());
    return 1;
  }
  return 1;
}
