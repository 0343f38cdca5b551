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

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "duel/synthgen.h"
#include "testing.h"

namespace duel {
namespace {

using testing::MakeDiscourse;

TEST(StyleTest, AdverbRate) {
  Sentence s = testing::MakeSentence("a b c d e f g h i j");
  s.pos[2] = "ADV";
  s.pos[7] = "ADV";
  EXPECT_DOUBLE_EQ(ComputeStyle(s).padv, 0.2);
  EXPECT_DOUBLE_EQ(ComputeStyle(s).ll, 10);
}

TEST(StyleTest, ContentWordLengthUsesScalarValues) {
  Sentence s = testing::MakeSentence("été de");
  s.pos = {"NOUN", "DET"};
  EXPECT_DOUBLE_EQ(ComputeStyle(s).plm, 3.0);
}

TEST(StyleTest, SubordinatorRate) {
  Sentence s = testing::MakeSentence("si il vient");
  s.pos = {"CSUB", "PRON", "VERB"};
  EXPECT_DOUBLE_EQ(ComputeStyle(s).pcos, 1.0 / 3);
}

TEST(StyleTest, NoContentWords) {
  Sentence s = testing::MakeSentence("le de");
  s.pos = {"DET", "PREP"};
  EXPECT_EQ(ComputeStyle(s).plm, 0.0);
}

TEST(StyleTest, NeedsPos) {
  Sentence s;
  s.tokens = {"x"};
  EXPECT_THROW(ComputeStyle(s), AnnotationError);
}

TEST(GaussianTest, Fits) {
  const std::vector<double> flat = {2, 2, 2};
  EXPECT_DOUBLE_EQ(FitGaussian(flat).mean, 2);
  EXPECT_DOUBLE_EQ(FitGaussian(flat).variance, 1e-6);
  const std::vector<double> pair = {0, 2};
  EXPECT_DOUBLE_EQ(FitGaussian(pair).mean, 1);
  EXPECT_DOUBLE_EQ(FitGaussian(pair).variance, 1);
  const std::vector<double> one = {5};
  EXPECT_DOUBLE_EQ(FitGaussian(one).variance, 1e-6);
  EXPECT_THROW(FitGaussian(std::vector<double>{}), InvalidArgument);
}

TEST(GaussianTest, LogPdfOfStandardNormal) {
  GaussianModel g{0, 1};
  EXPECT_NEAR(g.LogPdf(0), -0.5 * std::log(2 * M_PI), 1e-15);
  EXPECT_NEAR(g.LogPdf(1), -0.5 * std::log(2 * M_PI) - 0.5, 1e-15);
}

TEST(NGramTest, Counting) {
  NGramModel uni(1, Unit::kWord), bi(2, Unit::kWord);
  uni.AddSequence(testing::Split("a b"));
  bi.AddSequence(testing::Split("a b"));
  EXPECT_EQ(uni.Count("", "a"), 1);
  EXPECT_EQ(uni.Count("", "b"), 1);
  EXPECT_EQ(bi.Count(kBos, "a"), 1);
  EXPECT_EQ(bi.Count("a", "b"), 1);
  EXPECT_EQ(bi.Count("b", "a"), 0);
}

TEST(NGramTest, EmptyModelIsUniform) {
  NGramModel m(2, Unit::kWord);
  m.set_vocab_size(4);
  EXPECT_DOUBLE_EQ(m.UnigramProb("x"), 0.2);
  EXPECT_DOUBLE_EQ(m.SentenceLogProb(testing::Split("x y")), 2 * std::log(0.2));
}

TEST(NGramTest, EmptySequenceIsLogOne) {
  NGramModel m(2, Unit::kWord);
  m.AddSequence(testing::Split("a b a"));
  EXPECT_EQ(m.SentenceLogProb({}), 0.0);
}

TEST(NGramTest, UnseenUnitIsFinite) {
  NGramModel m(2, Unit::kWord);
  m.AddSequence(testing::Split("a b a"));
  m.set_vocab_size(2);
  const std::vector<std::string> unseen = {"zzz"};
  EXPECT_TRUE(std::isfinite(m.SentenceLogProb(unseen)));
}

TEST(NGramTest, UnigramByHand) {
  NGramModel m(1, Unit::kWord, 0.5);
  m.AddSequence(testing::Split("a a b"));
  m.set_vocab_size(2);
  // N = 3, reserved = 0.5 + 0.5, uniform over 3 outcomes.
  EXPECT_NEAR(m.UnigramProb("a"), 1.5 / 3 + (1.0 / 3) / 3, 1e-15);
  EXPECT_NEAR(m.UnigramProb("b"), 0.5 / 3 + (1.0 / 3) / 3, 1e-15);
  EXPECT_NEAR(m.UnigramProb("q"), (1.0 / 3) / 3, 1e-15);
}

// The distribution over the vocabulary plus one unknown outcome sums to 1,
// with integral and fractional counts alike.
TEST(NGramTest, Normalized) {
  for (double mass : {1.0, 0.3}) {
    NGramModel m(2, Unit::kWord);
    m.AddSequence(testing::Split("a b c a b d"), mass);
    m.AddSequence(testing::Split("b b e"), mass);
    const auto vocab = m.Vocabulary();
    m.set_vocab_size(vocab.size() + 2);  // two units only the other class saw
    double uni = 0;
    for (const auto &u : vocab) uni += m.UnigramProb(u);
    uni += 3 * m.UnigramProb("<unknown>");
    EXPECT_NEAR(uni, 1.0, 1e-12);
    for (const char *prev : {"<s>", "a", "b", "zzz"}) {
      double bi = 0;
      for (const auto &u : vocab) bi += m.BigramProb(prev, u);
      bi += 3 * m.BigramProb(prev, "<unknown>");
      EXPECT_NEAR(bi, 1.0, 1e-12) << prev;
    }
  }
}

TEST(NGramTest, LemmaUnderModelIIRejected) {
  Corpus c = {MakeDiscourse("d", {"abcdefg hijklmn", "opqrstu vwxyzab"}, "CC")};
  EXPECT_THROW(TrainNGram(c, 1, CorpusView{Variant::kModelII, Unit::kLemma}),
               InvalidArgument);
  EXPECT_THROW(NGramModel(3, Unit::kWord), InvalidArgument);
}

TEST(WeightsTest, NormalizedOverActiveFeatures) {
  const auto w1 = NormalizeWeights(DefaultRawWeights(), ActiveFeatures(Variant::kModelI));
  double sum = 0;
  for (double v : w1.value) sum += v;
  EXPECT_NEAR(sum, 1.0, 1e-15);
  EXPECT_NEAR(w1[Feature::kP1L], 0.30 / 1.28, 1e-15);
  const auto w2 = NormalizeWeights(DefaultRawWeights(), ActiveFeatures(Variant::kModelII));
  EXPECT_EQ(w2[Feature::kP1L], 0.0);
  EXPECT_NEAR(w2[Feature::kP1M] + w2[Feature::kLL] + w2[Feature::kP2M], 1.0, 1e-15);
  auto raw = DefaultRawWeights();
  raw[0] = -1;
  EXPECT_THROW(NormalizeWeights(raw, ActiveFeatures(Variant::kModelI)), InvalidArgument);
}

TEST(CombineTest, FixedPointAndAffinity) {
  const auto w = NormalizeWeights(DefaultRawWeights(), ActiveFeatures(Variant::kModelI));
  FeatureProbs half;
  for (auto &p : half) p = ProbPair{0.5, 0.5};
  EXPECT_EQ(Combine(w, half), (ProbPair{0.5, 0.5}));

  FeatureProbs one_hot_in = half;
  one_hot_in[FeatureIndex(Feature::kP1L)] = ProbPair{0.9, 0.1};
  std::array<double, kNumFeatures> raw{};
  raw[FeatureIndex(Feature::kP1L)] = 1;
  const auto one_hot = NormalizeWeights(raw, ActiveFeatures(Variant::kModelI));
  EXPECT_EQ(Combine(one_hot, one_hot_in), (ProbPair{0.9, 0.1}));

  FeatureProbs same;
  for (auto &p : same) p = ProbPair{0.3, 0.7};
  EXPECT_NEAR(Combine(w, same).m, 0.7, 1e-15);

  // Affine in one input: moving P1L by t moves the result by w * t.
  FeatureProbs a = half, b = half;
  a[0] = ProbPair{0.4, 0.6};
  b[0] = ProbPair{0.2, 0.8};
  const double slope = (Combine(w, b).m - Combine(w, a).m) / 0.2;
  EXPECT_NEAR(slope, w[Feature::kP1L], 1e-12);

  FeatureProbs bad = half;
  bad[3] = ProbPair{0.5, 0.6};
  EXPECT_THROW(Combine(w, bad), InvalidArgument);
  FeatureProbs missing = half;
  missing[1].reset();
  EXPECT_THROW(Combine(w, missing), InvalidArgument);
}

Corpus SmallCorpus(std::uint64_t seed) {
  GeneratorConfig g;
  g.seed = seed;
  g.n_discourses = 6;
  g.min_sentences = 8;
  g.max_sentences = 12;
  g.max_block = 5;
  g.insertion_probability = 1.0;
  return Generate(g).corpus;
}

Corpus Relabeled(const Corpus &c) {
  Corpus out = c;
  for (Discourse &d : out) {
    for (Sentence &s : d.sentences) s.ref_label = Other(*s.ref_label);
  }
  return out;
}

TEST(EmissionsTest, PairsAreNormalized) {
  const Corpus c = SmallCorpus(3);
  for (Variant v : {Variant::kModelI, Variant::kModelII}) {
    const ModelSet m = TrainModels(c, v);
    for (const Discourse &d : c) {
      for (const ProbPair &p : Emissions(d, m)) {
        EXPECT_NEAR(p.c + p.m, 1.0, 1e-9);
        EXPECT_GE(p.c, 0.0);
        EXPECT_GE(p.m, 0.0);
      }
    }
  }
}

TEST(EmissionsTest, SwappingClassCorporaSwapsPairsExactly) {
  const Corpus c = SmallCorpus(5);
  const Corpus swapped = Relabeled(c);
  for (Variant v : {Variant::kModelI, Variant::kModelII}) {
    const ModelSet a = TrainModels(c, v);
    const ModelSet b = TrainModels(swapped, v);
    for (const Discourse &d : c) {
      const EmissionTable ea = Emissions(d, a), eb = Emissions(d, b);
      for (std::size_t k = 0; k < ea.size(); ++k) {
        EXPECT_EQ(ea[k], Swapped(eb[k])) << d.id << ":" << k;
      }
    }
  }
}

TEST(EmissionsTest, IdenticalClassModelsGiveHalf) {
  // Every sentence appears once as C and once as M.
  Corpus c = {MakeDiscourse("a", {"un deux trois", "quatre cinq six"}, "CC"),
              MakeDiscourse("b", {"un deux trois", "quatre cinq six"}, "MM")};
  const ModelSet m = TrainModels(c, Variant::kModelI);
  for (const ProbPair &p : Emissions(c[0], m)) {
    EXPECT_DOUBLE_EQ(p.c, 0.5);
    EXPECT_DOUBLE_EQ(p.m, 0.5);
  }
}

TEST(ModelsTest, ModelIIHasNoLemmaModels) {
  const ModelSet m = TrainModels(SmallCorpus(2), Variant::kModelII);
  EXPECT_FALSE(m.classes.c.p1l.has_value());
  EXPECT_FALSE(m.classes.m.p2l.has_value());
  EXPECT_TRUE(m.classes.c.p2m.has_value());
  EXPECT_TRUE(m.classes.c.gaussians[FeatureIndex(Feature::kLL)].has_value());
  EXPECT_FALSE(m.classes.c.gaussians[FeatureIndex(Feature::kPadv)].has_value());
}

TEST(ModelsTest, UnlabeledTrainingRejected) {
  Corpus c = {MakeDiscourse("a", {"x y"})};
  EXPECT_THROW(TrainModels(c, Variant::kModelI), AnnotationError);
}

TEST(ModelsTest, ModelIRequiresAnnotations) {
  Corpus c = {MakeDiscourse("a", {"x y", "z w"}, "CM")};
  c[0].sentences[1].pos.clear();
  EXPECT_THROW(TrainModels(c, Variant::kModelI), AnnotationError);
  EXPECT_NO_THROW(TrainModels(c, Variant::kModelII));
}

TEST(CheckpointTest, RoundTripIsByteStable) {
  const Corpus c = SmallCorpus(9);
  for (Variant v : {Variant::kModelI, Variant::kModelII}) {
    const ModelSet m = TrainModels(c, v);
    const std::string text = SerializeModels(m);
    const ModelSet back = DeserializeModels(text);
    EXPECT_EQ(SerializeModels(back), text);
    EXPECT_EQ(SerializeModels(TrainModels(c, v)), text);
    for (const Discourse &d : c) EXPECT_EQ(Emissions(d, m), Emissions(d, back));
  }
  EXPECT_THROW(DeserializeModels("{"), ParseError);
}

}  // namespace
}  // namespace duel
