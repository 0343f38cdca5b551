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


#include "duel/pipeline.h"

namespace duel {

const char *CarryModeName(CarryMode m) {
  return m == CarryMode::kEmissions ? "emissions" : "marginals";
}

CarryMode ParseCarryMode(std::string_view name) {
  if (name == "emissions") return CarryMode::kEmissions;
  if (name == "marginals") return CarryMode::kMarginals;
  throw InvalidArgument("unknown carry mode '" + std::string(name) + "'");
}

std::vector<std::vector<Label>> LabelsOf(const std::vector<Segmentation> &segs) {
  std::vector<std::vector<Label>> out;
  out.reserve(segs.size());
  for (const Segmentation &s : segs) out.push_back(s.labels);
  return out;
}

namespace {

bool AllLabeled(const Corpus &c) {
  for (const Discourse &d : c) {
    if (!d.labeled()) return false;
  }
  return !c.empty();
}

}  // namespace

PipelineResult RunPipeline(const ModelSet &models, const Corpus &test,
                           const PipelineConfig &cfg) {
  if (cfg.adaptation.iterations < 0) {
    throw InvalidArgument("iteration count must be >= 0");
  }
  const Corpus unlabeled = StripLabels(test);
  const bool score = AllLabeled(test);
  PipelineResult result;

  if (cfg.network != nullptr) {
    result.groups = GroupSegments(unlabeled, *cfg.network, cfg.grouping);
  }
  std::vector<PsiMatrix> loo_cache;
  if (cfg.coherence && !cfg.coherence_cfg.clamp_loo) {
    loo_cache.reserve(unlabeled.size());
    for (const Discourse &d : unlabeled) {
      loo_cache.push_back(LooMatrix(
          UnitBags::From(d, CorpusView{models.variant, cfg.coherence_cfg.unit}),
          cfg.coherence_cfg.discount));
    }
  }

  // Decodes every discourse, with coherence when enabled, and returns what
  // the next iteration should start from.
  auto decode = [&](IterationOutput &out) -> std::vector<EmissionTable> {
    std::vector<EmissionTable> carry = out.posteriors;
    out.segmentations.clear();
    if (cfg.keep_psi) result.psi.clear();
    for (std::size_t i = 0; i < unlabeled.size(); ++i) {
      const Discourse &d = unlabeled[i];
      if (cfg.coherence) {
        CoherenceResult cr =
            CoherenceSegment(d, out.posteriors[i], models.variant, cfg.coherence_cfg,
                             loo_cache.empty() ? nullptr : &loo_cache[i]);
        if (cfg.carry == CarryMode::kMarginals) carry[i] = PsiPosteriors(cr.psi);
        out.segmentations.push_back(std::move(cr.segmentation));
        if (cfg.keep_psi) result.psi.push_back(std::move(cr.psi));
      } else {
        out.segmentations.push_back(ViterbiSegment(out.posteriors[i], cfg.transitions));
        if (cfg.keep_psi || cfg.carry == CarryMode::kMarginals) {
          PsiMatrix psi = PsiEnumerate(out.posteriors[i]);
          if (cfg.carry == CarryMode::kMarginals) carry[i] = PsiPosteriors(psi);
          if (cfg.keep_psi) result.psi.push_back(std::move(psi));
        }
      }
    }
    if (score) out.report = Evaluate(test, LabelsOf(out.segmentations));
    return carry;
  };

  IterationOutput first;
  first.iteration = 0;
  first.posteriors.reserve(unlabeled.size());
  for (const Discourse &d : unlabeled) first.posteriors.push_back(Emissions(d, models));
  if (result.groups) first.posteriors = Blend(first.posteriors, *result.groups);
  std::vector<EmissionTable> prev = decode(first);
  result.iterations.push_back(std::move(first));

  for (int it = 1; it <= cfg.adaptation.iterations; ++it) {
    AdaptResult step = AdaptStep(models, unlabeled, prev, cfg.adaptation, it,
                                 cfg.transitions);
    IterationOutput out;
    out.iteration = it;
    out.posteriors = std::move(step.posteriors);
    if (result.groups) out.posteriors = Blend(out.posteriors, *result.groups);
    prev = decode(out);
    result.iterations.push_back(std::move(out));
  }
  return result;
}

}  // namespace duel
