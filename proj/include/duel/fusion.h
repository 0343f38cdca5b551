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


// Weighted vote over many segmentation hypotheses ("judges").
//
//   theta_i = sum_j alpha_j xi_ij - delta;   label_i = C if theta_i < 0 else M
//
// Weights are trained by a pocket perceptron that keeps the weight vector
// with the fewest training errors seen at the end of any epoch.

#ifndef DUEL_FUSION_H_
#define DUEL_FUSION_H_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "duel/common.h"
#include "duel/corpus.h"

namespace duel {

// One labeled hypothesis for every sentence it covers.
struct HypothesisRow {
  std::string discourse;
  int sentence = 0;
  Label label = Label::kC;
  double p_m = 0;  // posterior P(M), used by the real-valued mode
};

struct HypothesisDump {
  std::string judge_id;
  std::vector<HypothesisRow> rows;
};

enum class XiMode { kBinary, kPosterior };

struct SentenceKey {
  std::string discourse;
  int sentence = 0;

  auto operator<=>(const SentenceKey &) const = default;
};

class JudgeMatrix {
 public:
  JudgeMatrix() = default;
  JudgeMatrix(std::vector<std::string> judge_ids, std::vector<SentenceKey> keys,
              std::vector<double> xi);

  std::size_t rows() const { return keys_.size(); }
  std::size_t cols() const { return judge_ids_.size(); }
  std::span<const double> row(std::size_t i) const {
    return {xi_.data() + i * cols(), cols()};
  }
  double at(std::size_t i, std::size_t j) const { return xi_[i * cols() + j]; }

  const std::vector<std::string> &judge_ids() const { return judge_ids_; }
  const std::vector<SentenceKey> &keys() const { return keys_; }

  // Reference per row in {-1, +1} (C = -1, M = +1); empty until attached.
  std::vector<int> tau;

 private:
  std::vector<std::string> judge_ids_;
  std::vector<SentenceKey> keys_;
  std::vector<double> xi_;
};

// One column per dump, rows in the order of the first dump. Every dump must
// cover the same keys exactly once.
JudgeMatrix BuildJudges(const std::vector<HypothesisDump> &dumps,
                        XiMode mode = XiMode::kBinary);

// Fills tau from the corpus reference labels.
void AttachReferences(JudgeMatrix &j, const Corpus &reference);

struct VoteWeights {
  std::vector<std::string> judge_ids;
  std::vector<double> alpha;
  double delta = 0;
  std::int64_t training_errors = -1;  // -1 when unknown
};

double Theta(std::span<const double> row, const VoteWeights &w);
Label ApplyVote(std::span<const double> row, const VoteWeights &w);
std::vector<Label> ApplyVote(const JudgeMatrix &j, const VoteWeights &w);

// Rows whose vote disagrees with tau.
std::int64_t CountVoteErrors(const JudgeMatrix &j, const VoteWeights &w);

struct PocketConfig {
  int epochs = 1000;
  double learning_rate = 1.0;
  std::uint64_t seed = 0;
};

// Requires references. Starts from the better constant predictor.
VoteWeights TrainVote(const JudgeMatrix &j, const PocketConfig &cfg = {});

std::string WeightsJson(const VoteWeights &w);
VoteWeights ParseWeights(std::string_view text);
void SaveWeights(const std::string &path, const VoteWeights &w);
VoteWeights LoadWeights(const std::string &path);

}  // namespace duel

#endif  // DUEL_FUSION_H_
