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

// Per-class sentence models: five stylometric Gaussians plus word and lemma
// n-gram chains (n <= 2), blended by a convex combination into one class
// probability pair per sentence.

#ifndef DUEL_MODELS_H_
#define DUEL_MODELS_H_

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "duel/common.h"
#include "duel/corpus.h"

namespace duel {

// ---------------------------------------------------------------------------
// Stylometry

struct StyleVector {
  double ll = 0;    // sentence length in tokens
  double pcos = 0;  // fraction of subordinating conjunctions
  double padv = 0;  // fraction of adverbs
  double padj = 0;  // fraction of adjectives
  double plm = 0;   // mean character length of content words
};

// Coarse tags with a downstream meaning. Anything else is an opaque tag.
inline constexpr std::string_view kTagSubordinator = "CSUB";
inline constexpr std::string_view kTagAdverb = "ADV";
inline constexpr std::string_view kTagAdjective = "ADJ";
bool IsContentTag(std::string_view tag);

StyleVector ComputeStyle(const Sentence &s);

inline constexpr double kVarianceFloor = 1e-6;

struct GaussianModel {
  double mean = 0;
  double variance = 1;

  double LogPdf(double x) const;
};

// Population variance, floored at kVarianceFloor.
GaussianModel FitGaussian(std::span<const double> values);

// ---------------------------------------------------------------------------
// N-gram chains with absolute discounting

// Context symbol preceding the first unit of a sentence.
inline constexpr std::string_view kBos = "<s>";
inline constexpr double kDefaultDiscount = 0.5;

class NGramModel {
 public:
  struct Context {
    std::unordered_map<std::string, double> counts;
    double total = 0;
    int types = 0;
    // Sum over units of min(discount, count): the mass reserved for backoff.
    double reserved = 0;
  };

  NGramModel() = default;
  NGramModel(int order, Unit unit, double discount = kDefaultDiscount);

  int order() const { return order_; }
  Unit unit() const { return unit_; }
  double discount() const { return discount_; }
  std::size_t vocab_size() const { return vocab_size_; }
  void set_vocab_size(std::size_t v) { vocab_size_ = v; }

  // Adds `mass` occurrences of every n-gram of the sequence (unigrams always,
  // bigrams with a <s> start when order is 2).
  void AddSequence(std::span<const std::string> units, double mass = 1.0);
  // Adds a count to one (context, unit) cell. The empty context holds the
  // unigram table.
  void AddCount(std::string_view context, std::string_view unit, double mass);

  // Raw count lookup; 0 when absent.
  double Count(std::string_view context, std::string_view unit) const;
  const Context *FindContext(std::string_view context) const;
  const std::unordered_map<std::string, Context> &contexts() const {
    return contexts_;
  }

  // Smoothed conditional probabilities. The unigram level backs off to a
  // uniform distribution over vocab_size() + 1 outcomes.
  double UnigramProb(std::string_view unit) const;
  double BigramProb(std::string_view prev, std::string_view unit) const;

  // Log probability of the whole sequence; 0 for an empty sequence.
  double SentenceLogProb(std::span<const std::string> units) const;

  // Set of units with a nonzero unigram count.
  std::vector<std::string> Vocabulary() const;

 private:
  int order_ = 1;
  Unit unit_ = Unit::kWord;
  double discount_ = kDefaultDiscount;
  std::size_t vocab_size_ = 0;
  std::unordered_map<std::string, Context> contexts_;
};

// Trains one model per class on labeled discourses; vocab_size is the size
// of the union of both class vocabularies.
ClassPair<NGramModel> TrainNGram(const Corpus &corpus, int order,
                                 const CorpusView &view,
                                 double discount = kDefaultDiscount);

// ---------------------------------------------------------------------------
// Interpolation

// Feature ids in the order of the published weight table.
enum class Feature { kP1L, kP1M, kPadj, kLL, kP2L, kP2M, kPcos, kPlm, kPadv };
inline constexpr std::size_t kNumFeatures = 9;
inline constexpr std::array<Feature, kNumFeatures> kAllFeatures = {
    Feature::kP1L, Feature::kP1M, Feature::kPadj,
    Feature::kLL,  Feature::kP2L, Feature::kP2M,
    Feature::kPcos, Feature::kPlm, Feature::kPadv};

const char *FeatureName(Feature f);
Feature ParseFeature(std::string_view name);
inline std::size_t FeatureIndex(Feature f) { return static_cast<std::size_t>(f); }

// Features available under a variant. Model II sees raw text only: word
// chains and sentence length.
std::vector<Feature> ActiveFeatures(Variant v);

struct InterpolationWeights {
  std::array<double, kNumFeatures> raw{};    // as configured
  std::array<double, kNumFeatures> value{};  // normalized over active ones

  double operator[](Feature f) const { return value[FeatureIndex(f)]; }
};

// The published weights sum to 1.28; normalization happens in
// NormalizeWeights.
std::array<double, kNumFeatures> DefaultRawWeights();

// Zeroes inactive features and rescales the rest to sum to 1.
InterpolationWeights NormalizeWeights(const std::array<double, kNumFeatures> &raw,
                                      const std::vector<Feature> &active);

using FeatureProbs = std::array<std::optional<ProbPair>, kNumFeatures>;

// P(t) = sum_i w_i p_i(t). Every present pair must be normalized and every
// nonzero weight must have a pair.
ProbPair Combine(const InterpolationWeights &w, const FeatureProbs &p);

// ---------------------------------------------------------------------------
// Class models

struct ClassModel {
  Label label = Label::kC;
  std::array<std::optional<GaussianModel>, kNumFeatures> gaussians;
  std::optional<NGramModel> p1l, p2l, p1m, p2m;
};

inline constexpr int kCheckpointVersion = 1;

struct ModelSet {
  Variant variant = Variant::kModelI;
  InterpolationWeights weights;
  ClassPair<ClassModel> classes;
};

// Trains every feature model of the variant on a labeled corpus.
ModelSet TrainModels(const Corpus &corpus, Variant variant,
                     const std::array<double, kNumFeatures> &raw_weights =
                         DefaultRawWeights());

// Per-feature normalized pairs for one sentence. Empty when the sentence
// has no unit left under the view.
FeatureProbs FeatureProbabilities(const Sentence &s, const ModelSet &models);

// Pair for two per-class log likelihoods scored on `n_units` units, placed on
// the common scale by the per-unit geometric mean.
ProbPair LikelihoodPair(double log_c, double log_m, std::size_t n_units);

// Emission table for a discourse. Sentences with no unit left under the
// view get (0.5, 0.5).
EmissionTable Emissions(const Discourse &d, const ModelSet &models);

// Emissions are kept inside [kEmissionFloor, 1 - kEmissionFloor].
inline constexpr double kEmissionFloor = 1e-12;
ProbPair ClampPair(ProbPair p);

// ---------------------------------------------------------------------------
// Checkpoints

std::string SerializeModels(const ModelSet &models);
ModelSet DeserializeModels(std::string_view text);
void SaveModels(const std::string &path, const ModelSet &models);
ModelSet LoadModels(const std::string &path);

}  // namespace duel

#endif  // DUEL_MODELS_H_
