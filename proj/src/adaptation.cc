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

#include "duel/adaptation.h"

#include <algorithm>
#include <cmath>
#include <optional>

namespace duel {

double Lambda0(const AdaptationConfig &cfg, int iteration) {
  return std::max(0.0, cfg.lambda0_start - cfg.lambda0_step * (iteration - 1));
}

double FractionalCounts::Total() const {
  double t = 0;
  for (Label l : {Label::kC, Label::kM}) {
    for (const auto &[unit, m] : mass[l]) t += m;
  }
  return t;
}

void CollectFractional(const Discourse &d, const EmissionTable &posteriors,
                       const CorpusView &view, FractionalCounts &out) {
  if (posteriors.size() != d.sentences.size()) {
    throw AlignmentError("posteriors do not cover discourse " + d.id);
  }
  for (std::size_t k = 0; k < d.sentences.size(); ++k) {
    const ProbPair p = posteriors[k];
    for (const std::string &u : ViewTokens(d.sentences[k], view)) {
      out.mass.c[u] += p.c;
      out.mass.m[u] += p.m;
      out.occurrences += 1;
    }
  }
}

FractionalCounts CollectFractional(std::span<const Discourse> discourses,
                                   std::span<const EmissionTable> posteriors,
                                   const CorpusView &view) {
  if (discourses.size() != posteriors.size()) {
    throw AlignmentError("one posterior table per discourse is required");
  }
  FractionalCounts counts;
  for (std::size_t i = 0; i < discourses.size(); ++i) {
    CollectFractional(discourses[i], posteriors[i], view, counts);
  }
  return counts;
}

AdaptedUnigram::AdaptedUnigram(
    const NGramModel &base, const std::unordered_map<std::string, double> &extra,
    std::size_t vocab_size)
    : base_(base.FindContext("")),
      extra_(&extra),
      discount_(base.discount()),
      uniform_(1.0 / static_cast<double>(vocab_size + 1)) {
  if (base_ != nullptr) {
    total_ = base_->total;
    reserved_ = base_->reserved;
  }
  for (const auto &[unit, e] : extra) {
    double b = 0;
    if (base_ != nullptr) {
      if (auto it = base_->counts.find(unit); it != base_->counts.end()) {
        b = it->second;
      }
    }
    total_ += e;
    reserved_ += std::min(discount_, b + e) - std::min(discount_, b);
  }
}

double AdaptedUnigram::Prob(const std::string &unit) const {
  if (total_ <= 0) return uniform_;
  double c = 0;
  if (base_ != nullptr) {
    if (auto it = base_->counts.find(unit); it != base_->counts.end()) {
      c += it->second;
    }
  }
  if (auto it = extra_->find(unit); it != extra_->end()) c += it->second;
  return (c - std::min(discount_, c)) / total_ + reserved_ / total_ * uniform_;
}

double AdaptedUnigram::SentenceLogProb(std::span<const std::string> units) const {
  double lp = 0;
  for (const std::string &u : units) lp += std::log(Prob(u));
  return lp;
}

namespace {

std::size_t AdaptedVocab(const NGramModel &base_c, const NGramModel &base_m,
                         const FractionalCounts &counts) {
  std::size_t v = base_c.vocab_size();
  auto in_base = [&](const std::string &u) {
    return base_c.Count("", u) > 0 || base_m.Count("", u) > 0;
  };
  for (const auto &[unit, mass] : counts.mass.c) {
    if (!in_base(unit)) ++v;
  }
  for (const auto &[unit, mass] : counts.mass.m) {
    if (!in_base(unit) && !counts.mass.c.contains(unit)) ++v;
  }
  return v;
}

}  // namespace

AdaptedPair::AdaptedPair(const NGramModel &base_c, const NGramModel &base_m,
                         const FractionalCounts &counts)
    : vocab_size(AdaptedVocab(base_c, base_m, counts)),
      c(base_c, counts.mass.c, vocab_size),
      m(base_m, counts.mass.m, vocab_size) {}

ProbPair AdaptedPair::Posterior(std::span<const std::string> units) const {
  return LikelihoodPair(c.SentenceLogProb(units), m.SentenceLogProb(units),
                        units.size());
}

namespace {

struct Component {
  Unit unit;
  bool dynamic;
  double weight;
};

ClassPair<const NGramModel *> BaseUnigrams(const ModelSet &base, Unit unit) {
  const auto &c = unit == Unit::kLemma ? base.classes.c.p1l : base.classes.c.p1m;
  const auto &m = unit == Unit::kLemma ? base.classes.m.p1l : base.classes.m.p1m;
  if (!c || !m) {
    throw InvalidArgument(std::string("base models lack a ") + UnitName(unit) +
                          " unigram");
  }
  return ClassPair<const NGramModel *>{&*c, &*m};
}

}  // namespace

AdaptResult AdaptStep(const ModelSet &base, const Corpus &test,
                      const std::vector<EmissionTable> &prev_posteriors,
                      const AdaptationConfig &cfg, int iteration,
                      const TransitionWeights &transitions) {
  if (iteration < 1) throw InvalidArgument("adaptation iterations start at 1");
  if (prev_posteriors.size() != test.size()) {
    throw AlignmentError("one posterior table per test discourse is required");
  }
  for (const Discourse &d : test) {
    for (const Sentence &s : d.sentences) {
      if (s.ref_label) {
        throw InvalidArgument("adaptation must not see reference labels (" +
                              d.id + ")");
      }
    }
  }

  std::vector<Component> components = {
      {Unit::kLemma, true, cfg.weights.dyn_lemma},
      {Unit::kWord, true, cfg.weights.dyn_word},
      {Unit::kLemma, false, cfg.weights.stat_lemma},
      {Unit::kWord, false, cfg.weights.stat_word},
  };
  if (base.variant == Variant::kModelII) {
    std::erase_if(components, [](const Component &c) { return c.unit == Unit::kLemma; });
  }
  double weight_sum = 0;
  for (const Component &c : components) weight_sum += c.weight;
  if (weight_sum <= 0) throw InvalidArgument("adaptation weights sum to zero");

  const double lambda0 = Lambda0(cfg, iteration);
  const std::span<const Discourse> all(test);
  const std::span<const EmissionTable> all_post(prev_posteriors);

  // Static counts and class pairs per unit, shared by every discourse.
  struct UnitState {
    ClassPair<const NGramModel *> base;
    FractionalCounts stat_counts;
    std::optional<AdaptedPair> stat;
  };
  std::vector<UnitState> units;
  for (Unit u : {Unit::kWord, Unit::kLemma}) {
    if (u == Unit::kLemma && base.variant == Variant::kModelII) continue;
    UnitState st{BaseUnigrams(base, u),
                 CollectFractional(all, all_post, CorpusView{base.variant, u}),
                 std::nullopt};
    units.push_back(std::move(st));
  }
  for (UnitState &st : units) st.stat.emplace(*st.base.c, *st.base.m, st.stat_counts);
  auto unit_state = [&](Unit u) -> UnitState & {
    return u == Unit::kWord ? units[0] : units[1];
  };

  AdaptResult result;
  result.posteriors.reserve(test.size());
  result.segmentations.reserve(test.size());
  for (std::size_t di = 0; di < test.size(); ++di) {
    const Discourse &d = test[di];
    // Dynamic counts: this discourse only.
    std::vector<FractionalCounts> dyn_counts;
    std::vector<AdaptedPair> dyn;
    dyn_counts.reserve(units.size());
    dyn.reserve(units.size());
    for (std::size_t ui = 0; ui < units.size(); ++ui) {
      const Unit u = ui == 0 ? Unit::kWord : Unit::kLemma;
      dyn_counts.push_back(
          CollectFractional(all.subspan(di, 1), all_post.subspan(di, 1),
                            CorpusView{base.variant, u}));
    }
    for (std::size_t ui = 0; ui < units.size(); ++ui) {
      dyn.emplace_back(*units[ui].base.c, *units[ui].base.m, dyn_counts[ui]);
    }

    EmissionTable table;
    table.reserve(d.sentences.size());
    for (std::size_t k = 0; k < d.sentences.size(); ++k) {
      const Sentence &s = d.sentences[k];
      double mix_c = 0, mix_m = 0;
      for (const Component &comp : components) {
        const std::vector<std::string> seq =
            ViewTokens(s, CorpusView{base.variant, comp.unit});
        const UnitState &st = unit_state(comp.unit);
        const AdaptedPair &pair =
            comp.dynamic ? dyn[comp.unit == Unit::kWord ? 0 : 1] : *st.stat;
        const ProbPair p = pair.Posterior(seq);
        mix_c += comp.weight / weight_sum * p.c;
        mix_m += comp.weight / weight_sum * p.m;
      }
      const ProbPair prev = prev_posteriors[di][k];
      ProbPair next{lambda0 * prev.c + (1.0 - lambda0) * mix_c,
                    lambda0 * prev.m + (1.0 - lambda0) * mix_m};
      const double z = next.c + next.m;
      table.push_back(ClampPair(ProbPair{next.c / z, next.m / z}));
    }
    result.segmentations.push_back(ViterbiSegment(table, transitions));
    result.posteriors.push_back(std::move(table));
  }
  return result;
}

}  // namespace duel
