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

// Constrained decoding of a discourse into host (C) and at most one inserted
// block (M) of two or more sentences.
//
// Two routes compute the same argmax:
//  * ViterbiSegment runs a five-state automaton
//      I -> {C1, M1}, C1 -> {C1, M1}, M1 -> M2, M2 -> {M2, C2}, C2 -> C2
//    with terminal states {C1, M2, C2}. Arcs into C states emit C, arcs into
//    M states emit M, so M1 -> M2 forces blocks of length >= 2.
//  * PsiEnumerate scores every block (i, j), j > i, in the upper triangle of
//    a d x d matrix; PsiArgmax compares its best cell with the all-C score.
//
// Both routes sum log emissions left to right in sentence order, so with
// zero transition weights they produce bit-identical scores. Ties prefer the
// all-C labeling, then the smallest i, then the smallest j.

#ifndef DUEL_SEGMENTER_H_
#define DUEL_SEGMENTER_H_

#include <optional>
#include <vector>

#include "duel/common.h"

namespace duel {

struct Block {
  int i = 0;
  int j = 0;

  int length() const { return j - i + 1; }
  bool operator==(const Block &) const = default;
};

struct Segmentation {
  std::optional<Block> block;
  std::vector<Label> labels;
  double score = 0;  // log score of the labeling
};

enum class AutomatonState { kI, kC1, kM1, kM2, kC2 };

// Log weights of the automaton arcs. All zero leaves decoding purely
// emission driven.
struct TransitionWeights {
  double i_c1 = 0, i_m1 = 0;
  double c1_c1 = 0, c1_m1 = 0;
  double m1_m2 = 0;
  double m2_m2 = 0, m2_c2 = 0;
  double c2_c2 = 0;
};

// Structure-of-arrays log view of an emission table.
struct LogEmissions {
  std::vector<double> log_c;
  std::vector<double> log_m;

  static LogEmissions From(const EmissionTable &e);
  int size() const { return static_cast<int>(log_c.size()); }
};

Segmentation ViterbiSegment(const EmissionTable &e,
                            const TransitionWeights &t = {});

class PsiMatrix {
 public:
  PsiMatrix() = default;
  explicit PsiMatrix(int d);

  int d() const { return d_; }
  bool populated(int i, int j) const { return i >= 0 && i < j && j < d_; }
  // Requires populated(i, j).
  double at(int i, int j) const { return values_[Index(i, j)]; }
  double &at(int i, int j) { return values_[Index(i, j)]; }
  double *row(int i) { return values_.data() + static_cast<std::size_t>(i) * d_; }
  const double *row(int i) const {
    return values_.data() + static_cast<std::size_t>(i) * d_;
  }

  double all_c_score = 0;

 private:
  std::size_t Index(int i, int j) const {
    return static_cast<std::size_t>(i) * d_ + j;
  }

  int d_ = 0;
  std::vector<double> values_;
};

PsiMatrix PsiEnumerate(const EmissionTable &e);
PsiMatrix PsiEnumerate(const LogEmissions &e);
Segmentation PsiArgmax(const PsiMatrix &psi);

// Labels from an optional block.
std::vector<Label> LabelsFromBlock(int d, const std::optional<Block> &block);
Segmentation MakeSegmentation(int d, const std::optional<Block> &block,
                              double score);
// The block of a labeling in the insertion language, if any.
std::optional<Block> BlockFromLabels(const std::vector<Label> &labels);

// Left-fold log score of a labeling, without transitions.
double LabelingLogScore(const EmissionTable &e, const std::vector<Label> &labels);

// Unconstrained per-sentence decision: M iff P(M) > P(C).
std::vector<Label> PerSentenceArgmax(const EmissionTable &e);

}  // namespace duel

#endif  // DUEL_SEGMENTER_H_
