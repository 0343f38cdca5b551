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

// EM adaptation of the unigram chains on unlabeled test data.
//
// Each occurrence of a unit e in sentence s adds P(X|s) to count(e, X).
// Static components pool the fractional counts of every test discourse;
// dynamic components use the current discourse only. Both are added on top
// of the training counts. The new sentence score is
//
//   lambda0(it) * previous + (1 - lambda0(it)) * sum_c w_c * component_c
//
// with lambda0 decaying linearly per iteration and w_c fixed.

#ifndef DUEL_ADAPTATION_H_
#define DUEL_ADAPTATION_H_

#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "duel/common.h"
#include "duel/corpus.h"
#include "duel/models.h"
#include "duel/segmenter.h"

namespace duel {

struct ComponentWeights {
  double dyn_lemma = 0.4;
  double dyn_word = 0.1;
  double stat_lemma = 0.4;
  double stat_word = 0.1;
};

struct AdaptationConfig {
  int iterations = 5;
  double lambda0_start = 0.5;
  double lambda0_step = 0.1;
  ComponentWeights weights;
};

// max(0, start - step * (iteration - 1)) for iteration >= 1.
double Lambda0(const AdaptationConfig &cfg, int iteration);

struct FractionalCounts {
  ClassPair<std::unordered_map<std::string, double>> mass;
  double occurrences = 0;  // unit occurrences seen

  double Total() const;
};

// Adds P(X|s) to count(e, X) for every unit occurrence e of every sentence.
void CollectFractional(const Discourse &d, const EmissionTable &posteriors,
                       const CorpusView &view, FractionalCounts &out);
FractionalCounts CollectFractional(std::span<const Discourse> discourses,
                                   std::span<const EmissionTable> posteriors,
                                   const CorpusView &view);

// A training unigram table with fractional counts layered on top; the base
// model is not copied.
class AdaptedUnigram {
 public:
  AdaptedUnigram(const NGramModel &base,
                 const std::unordered_map<std::string, double> &extra,
                 std::size_t vocab_size);

  double Prob(const std::string &unit) const;
  double SentenceLogProb(std::span<const std::string> units) const;

 private:
  const NGramModel::Context *base_ = nullptr;
  const std::unordered_map<std::string, double> *extra_ = nullptr;
  double discount_;
  double total_ = 0;
  double reserved_ = 0;
  double uniform_ = 0;
};

// Class pair adapted with `counts`; the vocabulary grows with new units.
// Holds references to both arguments.
struct AdaptedPair {
  AdaptedPair(const NGramModel &base_c, const NGramModel &base_m,
              const FractionalCounts &counts);

  ProbPair Posterior(std::span<const std::string> units) const;

  std::size_t vocab_size;
  AdaptedUnigram c;
  AdaptedUnigram m;
};

struct AdaptResult {
  std::vector<EmissionTable> posteriors;
  std::vector<Segmentation> segmentations;
};

// One adaptation iteration. `test` must carry no reference labels.
AdaptResult AdaptStep(const ModelSet &base, const Corpus &test,
                      const std::vector<EmissionTable> &prev_posteriors,
                      const AdaptationConfig &cfg, int iteration,
                      const TransitionWeights &transitions = {});

}  // namespace duel

#endif  // DUEL_ADAPTATION_H_
