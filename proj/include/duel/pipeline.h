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


// End-to-end decoding of a test corpus: learned emissions, optional
// proper-noun blending, automaton or coherence decoding, then adaptation
// iterations that each decode again.

#ifndef DUEL_PIPELINE_H_
#define DUEL_PIPELINE_H_

#include <optional>
#include <string_view>
#include <vector>

#include "duel/adaptation.h"
#include "duel/coherence.h"
#include "duel/corpus.h"
#include "duel/eval.h"
#include "duel/models.h"
#include "duel/propnet.h"
#include "duel/segmenter.h"

namespace duel {

// What a decoded iteration hands to the next adaptation step.
enum class CarryMode {
  kEmissions,  // the posteriors it decoded from
  kMarginals,  // per-sentence marginals of the Psi it decoded with
};
const char *CarryModeName(CarryMode m);
CarryMode ParseCarryMode(std::string_view name);

struct PipelineConfig {
  AdaptationConfig adaptation;  // iterations == 0 stops after decoding
  bool coherence = false;
  CoherenceConfig coherence_cfg;
  CarryMode carry = CarryMode::kMarginals;
  const ConceptNetwork *network = nullptr;  // blending is off when null
  GroupingConfig grouping;
  TransitionWeights transitions;
  bool keep_psi = false;  // keep the last combined Psi of each discourse
};

struct IterationOutput {
  int iteration = 0;
  std::vector<EmissionTable> posteriors;  // what was decoded
  std::vector<Segmentation> segmentations;
  std::optional<EvalReport> report;  // when the corpus is labeled
};

struct PipelineResult {
  std::vector<IterationOutput> iterations;
  std::optional<SegmentGroups> groups;
  std::vector<PsiMatrix> psi;  // empty unless keep_psi
};

// `test` may carry reference labels; they are used for scoring only.
PipelineResult RunPipeline(const ModelSet &models, const Corpus &test,
                           const PipelineConfig &cfg);

std::vector<std::vector<Label>> LabelsOf(const std::vector<Segmentation> &segs);

}  // namespace duel

#endif  // DUEL_PIPELINE_H_
