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


#include "duel/fusion.h"

#include <algorithm>
#include <fstream>
#include <map>
#include <numeric>
#include <random>
#include <sstream>

#include "duel/kernels.h"
#include "json.hpp"

namespace duel {

JudgeMatrix::JudgeMatrix(std::vector<std::string> judge_ids,
                         std::vector<SentenceKey> keys, std::vector<double> xi)
    : judge_ids_(std::move(judge_ids)), keys_(std::move(keys)), xi_(std::move(xi)) {
  if (xi_.size() != keys_.size() * judge_ids_.size()) {
    throw InvalidArgument("judge matrix storage does not match its shape");
  }
}

JudgeMatrix BuildJudges(const std::vector<HypothesisDump> &dumps, XiMode mode) {
  if (dumps.empty()) throw InvalidArgument("fusion needs at least one judge");
  std::vector<SentenceKey> keys;
  std::map<SentenceKey, std::size_t> index;
  for (const HypothesisRow &r : dumps.front().rows) {
    SentenceKey key{r.discourse, r.sentence};
    if (!index.emplace(key, keys.size()).second) {
      throw AlignmentError("judge " + dumps.front().judge_id +
                           " lists a sentence twice: " + r.discourse + "/" +
                           std::to_string(r.sentence));
    }
    keys.push_back(std::move(key));
  }
  const std::size_t n = keys.size(), m = dumps.size();
  std::vector<double> xi(n * m, 0.0);
  std::vector<std::string> ids;
  for (std::size_t j = 0; j < m; ++j) {
    const HypothesisDump &dump = dumps[j];
    ids.push_back(dump.judge_id);
    if (dump.rows.size() != n) {
      throw AlignmentError("judge " + dump.judge_id + " covers " +
                           std::to_string(dump.rows.size()) + " sentences, expected " +
                           std::to_string(n));
    }
    std::vector<bool> seen(n, false);
    for (const HypothesisRow &r : dump.rows) {
      auto it = index.find(SentenceKey{r.discourse, r.sentence});
      if (it == index.end() || seen[it->second]) {
        throw AlignmentError("judge " + dump.judge_id +
                             " does not align on " + r.discourse + "/" +
                             std::to_string(r.sentence));
      }
      seen[it->second] = true;
      xi[it->second * m + j] =
          mode == XiMode::kBinary ? (r.label == Label::kM ? 1.0 : 0.0) : r.p_m;
    }
  }
  return JudgeMatrix(std::move(ids), std::move(keys), std::move(xi));
}

void AttachReferences(JudgeMatrix &j, const Corpus &reference) {
  std::map<std::string, const Discourse *> by_id;
  for (const Discourse &d : reference) by_id[d.id] = &d;
  j.tau.assign(j.rows(), 0);
  for (std::size_t i = 0; i < j.rows(); ++i) {
    const SentenceKey &key = j.keys()[i];
    auto it = by_id.find(key.discourse);
    if (it == by_id.end() || key.sentence < 0 || key.sentence >= it->second->size()) {
      throw AlignmentError("no reference for " + key.discourse + "/" +
                           std::to_string(key.sentence));
    }
    const auto &label = it->second->sentences[key.sentence].ref_label;
    if (!label) {
      throw AnnotationError("reference " + key.discourse + "/" +
                            std::to_string(key.sentence) + " has no label");
    }
    j.tau[i] = *label == Label::kM ? 1 : -1;
  }
}

double Theta(std::span<const double> row, const VoteWeights &w) {
  if (row.size() != w.alpha.size()) {
    throw InvalidArgument("vote row has " + std::to_string(row.size()) +
                          " judges, weights have " + std::to_string(w.alpha.size()));
  }
  return kernels::Dot(row, w.alpha) - w.delta;
}

Label ApplyVote(std::span<const double> row, const VoteWeights &w) {
  return Theta(row, w) < 0 ? Label::kC : Label::kM;
}

std::vector<Label> ApplyVote(const JudgeMatrix &j, const VoteWeights &w) {
  std::vector<Label> out;
  out.reserve(j.rows());
  for (std::size_t i = 0; i < j.rows(); ++i) out.push_back(ApplyVote(j.row(i), w));
  return out;
}

std::int64_t CountVoteErrors(const JudgeMatrix &j, const VoteWeights &w) {
  if (j.tau.size() != j.rows()) throw InvalidArgument("judge matrix has no references");
  std::int64_t errors = 0;
  for (std::size_t i = 0; i < j.rows(); ++i) {
    const int pred = ApplyVote(j.row(i), w) == Label::kM ? 1 : -1;
    errors += pred != j.tau[i];
  }
  return errors;
}

VoteWeights TrainVote(const JudgeMatrix &j, const PocketConfig &cfg) {
  if (j.rows() == 0) throw InvalidArgument("cannot train a vote on zero rows");
  if (j.tau.size() != j.rows()) throw InvalidArgument("judge matrix has no references");
  const std::size_t m = j.cols();

  VoteWeights all_c{j.judge_ids(), std::vector<double>(m, 0.0), 1.0, -1};
  VoteWeights all_m{j.judge_ids(), std::vector<double>(m, 0.0), 0.0, -1};
  all_c.training_errors = CountVoteErrors(j, all_c);
  all_m.training_errors = CountVoteErrors(j, all_m);
  VoteWeights pocket =
      all_m.training_errors < all_c.training_errors ? all_m : all_c;

  VoteWeights w{j.judge_ids(), std::vector<double>(m, 0.0), 0.0, -1};
  std::vector<std::size_t> order(j.rows());
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(cfg.seed);
  for (int epoch = 0; epoch < cfg.epochs && pocket.training_errors > 0; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t r : order) {
      const int pred = ApplyVote(j.row(r), w) == Label::kM ? 1 : -1;
      if (pred == j.tau[r]) continue;
      const double step = cfg.learning_rate * j.tau[r];
      kernels::Axpy(step, j.row(r), w.alpha);
      w.delta -= step;
    }
    w.training_errors = CountVoteErrors(j, w);
    if (w.training_errors < pocket.training_errors) pocket = w;
  }
  return pocket;
}

std::string WeightsJson(const VoteWeights &w) {
  nlohmann::json j = {{"judge_ids", w.judge_ids},
                      {"alpha", w.alpha},
                      {"delta", w.delta},
                      {"training_errors", w.training_errors}};
  return j.dump(2);
}

VoteWeights ParseWeights(std::string_view text) {
  try {
    const nlohmann::json j = nlohmann::json::parse(text);
    VoteWeights w;
    w.judge_ids = j.at("judge_ids").get<std::vector<std::string>>();
    w.alpha = j.at("alpha").get<std::vector<double>>();
    w.delta = j.at("delta").get<double>();
    w.training_errors = j.value("training_errors", std::int64_t{-1});
    if (w.judge_ids.size() != w.alpha.size()) {
      throw InvalidArgument("weights list a different number of ids and alphas");
    }
    return w;
  } catch (const nlohmann::json::exception &e) {
    throw ParseError(std::string("bad weights file: ") + e.what(), 1);
  }
}

void SaveWeights(const std::string &path, const VoteWeights &w) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write weights " + path);
  out << WeightsJson(w) << '\n';
}

VoteWeights LoadWeights(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open weights " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return ParseWeights(buf.str());
}

}  // namespace duel
