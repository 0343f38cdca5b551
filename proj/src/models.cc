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

#include "duel/models.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

namespace duel {

// ---------------------------------------------------------------------------
// Stylometry

bool IsContentTag(std::string_view tag) {
  return tag == "NOUN" || tag == "VERB" || tag == kTagAdjective ||
         tag == kTagAdverb;
}

StyleVector ComputeStyle(const Sentence &s) {
  if (!s.has_pos()) {
    throw AnnotationError("sentence " + std::to_string(s.index) +
                          " has no POS annotation");
  }
  StyleVector v;
  const double n = static_cast<double>(s.tokens.size());
  v.ll = n;
  int csub = 0, adv = 0, adj = 0, content = 0;
  double content_chars = 0;
  for (std::size_t i = 0; i < s.tokens.size(); ++i) {
    const std::string &tag = s.pos[i];
    if (tag == kTagSubordinator) ++csub;
    if (tag == kTagAdverb) ++adv;
    if (tag == kTagAdjective) ++adj;
    if (IsContentTag(tag)) {
      ++content;
      content_chars += static_cast<double>(Utf8Length(s.tokens[i]));
    }
  }
  if (n > 0) {
    v.pcos = csub / n;
    v.padv = adv / n;
    v.padj = adj / n;
  }
  v.plm = content > 0 ? content_chars / content : 0.0;
  return v;
}

double GaussianModel::LogPdf(double x) const {
  const double diff = x - mean;
  return -0.5 * std::log(2.0 * std::numbers::pi * variance) -
         diff * diff / (2.0 * variance);
}

GaussianModel FitGaussian(std::span<const double> values) {
  if (values.empty()) throw InvalidArgument("cannot fit a Gaussian to no data");
  double sum = 0;
  for (double v : values) sum += v;
  const double mean = sum / static_cast<double>(values.size());
  double sq = 0;
  for (double v : values) sq += (v - mean) * (v - mean);
  const double var = sq / static_cast<double>(values.size());
  return GaussianModel{mean, std::max(var, kVarianceFloor)};
}

// ---------------------------------------------------------------------------
// NGramModel

NGramModel::NGramModel(int order, Unit unit, double discount)
    : order_(order), unit_(unit), discount_(discount) {
  if (order != 1 && order != 2) {
    throw InvalidArgument("n-gram order must be 1 or 2");
  }
  if (!(discount > 0 && discount < 1)) {
    throw InvalidArgument("discount must lie in (0, 1)");
  }
}

void NGramModel::AddCount(std::string_view context, std::string_view unit,
                          double mass) {
  if (mass == 0) return;
  Context &ctx = contexts_[std::string(context)];
  double &c = ctx.counts[std::string(unit)];
  const double before = c;
  c += mass;
  ctx.total += mass;
  if (before <= 0 && c > 0) ++ctx.types;
  ctx.reserved += std::min(discount_, c) - std::min(discount_, before);
}

void NGramModel::AddSequence(std::span<const std::string> units, double mass) {
  std::string_view prev = kBos;
  for (const std::string &u : units) {
    AddCount("", u, mass);
    if (order_ == 2) AddCount(prev, u, mass);
    prev = u;
  }
}

const NGramModel::Context *NGramModel::FindContext(
    std::string_view context) const {
  auto it = contexts_.find(std::string(context));
  return it == contexts_.end() ? nullptr : &it->second;
}

double NGramModel::Count(std::string_view context, std::string_view unit) const {
  const Context *ctx = FindContext(context);
  if (ctx == nullptr) return 0;
  auto it = ctx->counts.find(std::string(unit));
  return it == ctx->counts.end() ? 0 : it->second;
}

double NGramModel::UnigramProb(std::string_view unit) const {
  const double uniform = 1.0 / static_cast<double>(vocab_size_ + 1);
  const Context *ctx = FindContext("");
  if (ctx == nullptr || ctx->total <= 0) return uniform;
  double c = 0;
  if (auto it = ctx->counts.find(std::string(unit)); it != ctx->counts.end()) {
    c = it->second;
  }
  return (c - std::min(discount_, c)) / ctx->total +
         ctx->reserved / ctx->total * uniform;
}

double NGramModel::BigramProb(std::string_view prev,
                              std::string_view unit) const {
  const double lower = UnigramProb(unit);
  const Context *ctx = FindContext(prev);
  if (ctx == nullptr || ctx->total <= 0) return lower;
  double c = 0;
  if (auto it = ctx->counts.find(std::string(unit)); it != ctx->counts.end()) {
    c = it->second;
  }
  return (c - std::min(discount_, c)) / ctx->total +
         ctx->reserved / ctx->total * lower;
}

double NGramModel::SentenceLogProb(std::span<const std::string> units) const {
  double lp = 0;
  std::string_view prev = kBos;
  for (const std::string &u : units) {
    lp += std::log(order_ == 2 ? BigramProb(prev, u) : UnigramProb(u));
    prev = u;
  }
  return lp;
}

std::vector<std::string> NGramModel::Vocabulary() const {
  std::vector<std::string> vocab;
  if (const Context *ctx = FindContext("")) {
    for (const auto &[unit, count] : ctx->counts) {
      if (count > 0) vocab.push_back(unit);
    }
  }
  std::sort(vocab.begin(), vocab.end());
  return vocab;
}

ClassPair<NGramModel> TrainNGram(const Corpus &corpus, int order,
                                 const CorpusView &view, double discount) {
  if (view.variant == Variant::kModelII && view.unit == Unit::kLemma) {
    throw InvalidArgument("lemma models are not available under Model II");
  }
  ClassPair<NGramModel> models{NGramModel(order, view.unit, discount),
                               NGramModel(order, view.unit, discount)};
  for (const Discourse &d : corpus) {
    for (const Sentence &s : d.sentences) {
      if (!s.ref_label) {
        throw AnnotationError("training sentence " + d.id + ":" +
                              std::to_string(s.index) + " has no label");
      }
      const std::vector<std::string> units = ViewTokens(s, view);
      models[*s.ref_label].AddSequence(units);
    }
  }
  std::set<std::string> vocab;
  for (Label l : {Label::kC, Label::kM}) {
    for (std::string &u : models[l].Vocabulary()) vocab.insert(std::move(u));
  }
  models.c.set_vocab_size(vocab.size());
  models.m.set_vocab_size(vocab.size());
  return models;
}

// ---------------------------------------------------------------------------
// Interpolation

const char *FeatureName(Feature f) {
  switch (f) {
    case Feature::kP1L: return "P1L";
    case Feature::kP1M: return "P1M";
    case Feature::kPadj: return "Padj";
    case Feature::kLL: return "LL";
    case Feature::kP2L: return "P2L";
    case Feature::kP2M: return "P2M";
    case Feature::kPcos: return "Pcos";
    case Feature::kPlm: return "Plm";
    case Feature::kPadv: return "Padv";
  }
  return "?";
}

Feature ParseFeature(std::string_view name) {
  for (Feature f : kAllFeatures) {
    if (name == FeatureName(f)) return f;
  }
  throw InvalidArgument("unknown feature '" + std::string(name) + "'");
}

std::vector<Feature> ActiveFeatures(Variant v) {
  if (v == Variant::kModelII) {
    return {Feature::kP1M, Feature::kLL, Feature::kP2M};
  }
  return {kAllFeatures.begin(), kAllFeatures.end()};
}

std::array<double, kNumFeatures> DefaultRawWeights() {
  // P1L P1M Padj LL P2L P2M Pcos Plm Padv
  return {0.30, 0.15, 0.15, 0.15, 0.30, 0.15, 0.05, 0.02, 0.01};
}

InterpolationWeights NormalizeWeights(
    const std::array<double, kNumFeatures> &raw,
    const std::vector<Feature> &active) {
  InterpolationWeights w;
  w.raw = raw;
  double sum = 0;
  for (Feature f : active) {
    const double r = raw[FeatureIndex(f)];
    if (!(r >= 0) || !std::isfinite(r)) {
      throw InvalidArgument(std::string("weight of ") + FeatureName(f) +
                            " must be a finite non-negative number");
    }
    sum += r;
  }
  if (sum <= 0) throw InvalidArgument("active weights sum to zero");
  for (Feature f : active) w.value[FeatureIndex(f)] = raw[FeatureIndex(f)] / sum;
  return w;
}

ProbPair Combine(const InterpolationWeights &w, const FeatureProbs &p) {
  double c = 0, m = 0, total_weight = 0;
  for (std::size_t i = 0; i < kNumFeatures; ++i) {
    const double lambda = w.value[i];
    if (!p[i]) {
      if (lambda != 0) {
        throw InvalidArgument(std::string("no probability for weighted feature ") +
                              FeatureName(kAllFeatures[i]));
      }
      continue;
    }
    const ProbPair &q = *p[i];
    if (q.c < 0 || q.m < 0 || std::abs(q.c + q.m - 1.0) > 1e-9) {
      throw InvalidArgument(std::string("unnormalized input pair for ") +
                            FeatureName(kAllFeatures[i]));
    }
    c += lambda * q.c;
    m += lambda * q.m;
    total_weight += lambda;
  }
  if (std::abs(total_weight - 1.0) > 1e-9) {
    throw InvalidArgument("interpolation weights are not normalized");
  }
  const double z = c + m;
  return ProbPair{c / z, m / z};
}

// ---------------------------------------------------------------------------
// Class models

namespace {

constexpr std::array<Feature, 5> kGaussianFeatures = {
    Feature::kPadj, Feature::kLL, Feature::kPcos, Feature::kPlm,
    Feature::kPadv};

double StyleValue(const StyleVector &v, Feature f) {
  switch (f) {
    case Feature::kLL: return v.ll;
    case Feature::kPcos: return v.pcos;
    case Feature::kPadv: return v.padv;
    case Feature::kPadj: return v.padj;
    case Feature::kPlm: return v.plm;
    default: break;
  }
  throw InvalidArgument("not a stylometric feature");
}

bool IsActive(const std::vector<Feature> &active, Feature f) {
  return std::find(active.begin(), active.end(), f) != active.end();
}

// Gaussian inputs for one sentence. Model II has no POS, so only the raw
// sentence length is computed.
std::array<std::optional<double>, kNumFeatures> GaussianInputs(
    const Sentence &s, Variant variant) {
  std::array<std::optional<double>, kNumFeatures> in;
  if (variant == Variant::kModelII) {
    in[FeatureIndex(Feature::kLL)] = static_cast<double>(s.tokens.size());
    return in;
  }
  const StyleVector v = ComputeStyle(s);
  for (Feature f : kGaussianFeatures) in[FeatureIndex(f)] = StyleValue(v, f);
  return in;
}

void RequireModelIAnnotations(const Sentence &s, const std::string &where) {
  if (!s.has_lemmas() || !s.has_pos()) {
    throw AnnotationError("Model I needs lemma and POS annotations (" + where +
                          " sentence " + std::to_string(s.index) + ")");
  }
}

}  // namespace

ModelSet TrainModels(const Corpus &corpus, Variant variant,
                     const std::array<double, kNumFeatures> &raw_weights) {
  const std::vector<Feature> active = ActiveFeatures(variant);
  ModelSet set;
  set.variant = variant;
  set.weights = NormalizeWeights(raw_weights, active);
  set.classes.c.label = Label::kC;
  set.classes.m.label = Label::kM;

  ClassPair<std::array<std::vector<double>, kNumFeatures>> values;
  for (const Discourse &d : corpus) {
    for (const Sentence &s : d.sentences) {
      if (!s.ref_label) {
        throw AnnotationError("training corpus is unlabeled (discourse " +
                              d.id + ")");
      }
      if (variant == Variant::kModelI) RequireModelIAnnotations(s, d.id);
      const auto in = GaussianInputs(s, variant);
      for (std::size_t i = 0; i < kNumFeatures; ++i) {
        if (in[i]) values[*s.ref_label][i].push_back(*in[i]);
      }
    }
  }
  for (Label l : {Label::kC, Label::kM}) {
    for (Feature f : kGaussianFeatures) {
      if (!IsActive(active, f)) continue;
      const auto &v = values[l][FeatureIndex(f)];
      if (v.empty()) {
        throw InvalidArgument(std::string("no training sentences for class ") +
                              LabelChar(l));
      }
      set.classes[l].gaussians[FeatureIndex(f)] = FitGaussian(v);
    }
  }

  const CorpusView words{variant, Unit::kWord};
  auto p1m = TrainNGram(corpus, 1, words);
  auto p2m = TrainNGram(corpus, 2, words);
  set.classes.c.p1m = std::move(p1m.c);
  set.classes.m.p1m = std::move(p1m.m);
  set.classes.c.p2m = std::move(p2m.c);
  set.classes.m.p2m = std::move(p2m.m);
  if (variant == Variant::kModelI) {
    const CorpusView lemmas{variant, Unit::kLemma};
    auto p1l = TrainNGram(corpus, 1, lemmas);
    auto p2l = TrainNGram(corpus, 2, lemmas);
    set.classes.c.p1l = std::move(p1l.c);
    set.classes.m.p1l = std::move(p1l.m);
    set.classes.c.p2l = std::move(p2l.c);
    set.classes.m.p2l = std::move(p2l.m);
  }
  return set;
}

ProbPair LikelihoodPair(double log_c, double log_m, std::size_t n_units) {
  if (n_units == 0) return ProbPair{};
  const double n = static_cast<double>(n_units);
  return PairFromLogs(log_c / n, log_m / n);
}

namespace {

using ModelMember = std::optional<NGramModel> ClassModel::*;

std::optional<ProbPair> ChainPair(const ModelSet &models, ModelMember member,
                                  const std::vector<std::string> &units) {
  const auto &mc = models.classes.c.*member;
  const auto &mm = models.classes.m.*member;
  if (!mc && !mm) return std::nullopt;
  if (!mc || !mm) throw InvalidArgument("class models trained under different views");
  return LikelihoodPair(mc->SentenceLogProb(units), mm->SentenceLogProb(units),
                        units.size());
}

}  // namespace

FeatureProbs FeatureProbabilities(const Sentence &s, const ModelSet &models) {
  FeatureProbs probs;
  const Variant variant = models.variant;
  const std::vector<std::string> words =
      ViewTokens(s, CorpusView{variant, Unit::kWord});
  if (words.empty()) return probs;
  if (variant == Variant::kModelI) RequireModelIAnnotations(s, "test");

  const auto in = GaussianInputs(s, variant);
  for (std::size_t i = 0; i < kNumFeatures; ++i) {
    if (!in[i] || models.weights.value[i] == 0) continue;
    const auto &gc = models.classes.c.gaussians[i];
    const auto &gm = models.classes.m.gaussians[i];
    if (!gc || !gm) continue;
    probs[i] = PairFromLogs(gc->LogPdf(*in[i]), gm->LogPdf(*in[i]));
  }
  probs[FeatureIndex(Feature::kP1M)] = ChainPair(models, &ClassModel::p1m, words);
  probs[FeatureIndex(Feature::kP2M)] = ChainPair(models, &ClassModel::p2m, words);
  if (variant == Variant::kModelI) {
    const std::vector<std::string> lemmas =
        ViewTokens(s, CorpusView{variant, Unit::kLemma});
    probs[FeatureIndex(Feature::kP1L)] =
        ChainPair(models, &ClassModel::p1l, lemmas);
    probs[FeatureIndex(Feature::kP2L)] =
        ChainPair(models, &ClassModel::p2l, lemmas);
  }
  return probs;
}

ProbPair ClampPair(ProbPair p) {
  // Each side is clamped on its own so that swapping classes swaps the
  // result exactly.
  return ProbPair{std::clamp(p.c, kEmissionFloor, 1.0 - kEmissionFloor),
                  std::clamp(p.m, kEmissionFloor, 1.0 - kEmissionFloor)};
}

EmissionTable Emissions(const Discourse &d, const ModelSet &models) {
  EmissionTable table;
  table.reserve(d.sentences.size());
  for (const Sentence &s : d.sentences) {
    const FeatureProbs probs = FeatureProbabilities(s, models);
    const bool empty = std::none_of(probs.begin(), probs.end(),
                                    [](const auto &p) { return p.has_value(); });
    table.push_back(empty ? ProbPair{} : ClampPair(Combine(models.weights, probs)));
  }
  return table;
}

}  // namespace duel
