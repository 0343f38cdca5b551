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


// Internal coherence: every sentence is also scored by a unigram model of
// its own block with the sentence itself left out, and that score is
// multiplied into the learned emissions of every candidate segmentation.
//
// For a candidate block (i, j) the host block C is every sentence outside
// [i, j] and the inserted block M is [i, j]. With chi = C \ S_k and
// mu = M \ S_k,
//
//   Psi[i, j] = sum_{k outside} [log P(S_k | chi) + log P'(C | S_k)]
//             + sum_{k inside}  [log P(S_k | mu)  + log P'(M | S_k)]
//
// and the all-C hypothesis uses the whole discourse minus S_k. Leave-one-out
// scores are per-unit log means, the scale used for learned chains.

#ifndef DUEL_COHERENCE_H_
#define DUEL_COHERENCE_H_

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "duel/common.h"
#include "duel/corpus.h"
#include "duel/models.h"
#include "duel/segmenter.h"

namespace duel {

// Per-unit log mean probability of block[k] under a smoothed unigram model
// trained on every other sentence of the block. A block of one sentence
// scores on the uniform floor 1 / (vocab_size + 1). Empty sentences score 0.
double LooProb(std::span<const std::vector<std::string>> block, std::size_t k,
               std::size_t vocab_size, double discount = kDefaultDiscount);

// Sentences of a discourse as (unit id, count) bags over the discourse
// vocabulary.
struct UnitBags {
  int vocab_size = 0;
  std::vector<std::vector<std::pair<int, int>>> bags;
  std::vector<int> lengths;

  static UnitBags From(const Discourse &d, const CorpusView &view);
  int size() const { return static_cast<int>(bags.size()); }
};

// Leave-one-out part of Psi for every cell plus the all-C hypothesis. It
// depends on the discourse only, so callers may cache it across iterations.
PsiMatrix LooMatrix(const UnitBags &bags, double discount = kDefaultDiscount);

// A zero matrix of the same shape: leave-one-out probabilities forced to 1.
PsiMatrix ClampedLooMatrix(int d);

// learned + weight * loo, cell by cell.
PsiMatrix CombineWithLearned(const PsiMatrix &learned, const PsiMatrix &loo,
                             double weight = 1.0);

struct CoherenceConfig {
  Unit unit = Unit::kWord;
  double discount = kDefaultDiscount;
  double weight = 1.0;
  bool clamp_loo = false;
};

struct CoherenceResult {
  Segmentation segmentation;
  PsiMatrix psi;  // combined scores
};

// `loo` may carry a precomputed LooMatrix for `d`; it is ignored when the
// configuration clamps leave-one-out scores.
CoherenceResult CoherenceSegment(const Discourse &d, const EmissionTable &learned,
                                 Variant variant, const CoherenceConfig &cfg,
                                 const PsiMatrix *loo = nullptr);

// Per-sentence posterior P(M) marginalized over every hypothesis of Psi,
// each weighted by exp(score).
EmissionTable PsiPosteriors(const PsiMatrix &psi);

}  // namespace duel

#endif  // DUEL_COHERENCE_H_
