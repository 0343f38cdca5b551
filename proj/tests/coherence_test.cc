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


#include "duel/coherence.h"

#include <cmath>
#include <map>
#include <random>
#include <set>

#include <gtest/gtest.h>

#include "testing.h"

namespace duel {
namespace {

using testing::MakeDiscourse;
using testing::Split;

const CorpusView kWord{Variant::kModelI, Unit::kWord};

// Unigram with absolute discounting 0.5 and uniform backoff, written out
// from the definition.
double OracleLoo(const std::vector<std::vector<std::string>> &rest,
                 const std::vector<std::string> &target, double v) {
  if (target.empty()) return 0;
  std::map<std::string, double> n;
  double total = 0;
  for (const auto &s : rest) {
    for (const auto &u : s) {
      n[u] += 1;
      total += 1;
    }
  }
  if (total == 0) return std::log(1 / (v + 1));
  const double reserved = 0.5 * static_cast<double>(n.size());
  double acc = 0;
  for (const auto &u : target) {
    const double c = n.contains(u) ? n[u] - 0.5 : 0;
    acc += std::log(c / total + reserved / total / (v + 1));
  }
  return acc / static_cast<double>(target.size());
}

// Leave-one-out part of a hypothesis: `inside[k]` marks the M block.
double OracleHypothesis(const std::vector<std::vector<std::string>> &sents,
                        const std::vector<bool> &inside, double v) {
  double acc = 0;
  for (std::size_t k = 0; k < sents.size(); ++k) {
    std::vector<std::vector<std::string>> rest;
    for (std::size_t o = 0; o < sents.size(); ++o) {
      if (o != k && inside[o] == inside[k]) rest.push_back(sents[o]);
    }
    acc += OracleLoo(rest, sents[k], v);
  }
  return acc;
}

TEST(LooProbTest, ThreeSentenceToyBlock) {
  const std::vector<std::vector<std::string>> block = {
      Split("a b"), Split("a c"), Split("a")};
  // V = 3 (a, b, c). Leaving out "a b": rest a c a, N = 3, reserved 1.0.
  const double pa = 1.5 / 3 + (1.0 / 3) / 4;
  const double pb = (1.0 / 3) / 4;
  EXPECT_NEAR(LooProb(block, 0, 3), (std::log(pa) + std::log(pb)) / 2, 1e-12);
  // Leaving out "a": rest a b a c, N = 4, reserved 1.5.
  EXPECT_NEAR(LooProb(block, 2, 3), std::log(1.5 / 4 + (1.5 / 4) / 4), 1e-12);
  // Leaving out "a c": rest a b a, c unseen.
  const double pa2 = 1.5 / 3 + (1.0 / 3) / 4;
  const double pc = (1.0 / 3) / 4;
  EXPECT_NEAR(LooProb(block, 1, 3), (std::log(pa2) + std::log(pc)) / 2, 1e-12);
}

TEST(LooProbTest, SingleSentenceBlockIsUniform) {
  const std::vector<std::vector<std::string>> block = {Split("x y z")};
  EXPECT_DOUBLE_EQ(LooProb(block, 0, 9), std::log(0.1));
  EXPECT_THROW(LooProb(block, 1, 9), InvalidArgument);
}

TEST(LooProbTest, IdenticalSentencesScoreHighest) {
  const std::vector<std::vector<std::string>> same = {
      Split("p q r"), Split("p q r"), Split("p q r")};
  const std::vector<std::vector<std::string>> mixed = {
      Split("p q r"), Split("p s t"), Split("u q v")};
  const std::vector<std::vector<std::string>> disjoint = {
      Split("p q r"), Split("s t u"), Split("v w x")};
  EXPECT_GT(LooProb(same, 0, 9), LooProb(mixed, 0, 9));
  EXPECT_GT(LooProb(mixed, 0, 9), LooProb(disjoint, 0, 9));
}

TEST(LooMatrixTest, MatchesOracle) {
  std::mt19937_64 rng(12);
  std::uniform_int_distribution<int> word(0, 7), len(0, 5), size(1, 9);
  for (int trial = 0; trial < 40; ++trial) {
    const int d = size(rng);
    std::vector<std::string> texts;
    std::vector<std::vector<std::string>> sents;
    for (int k = 0; k < d; ++k) {
      std::string t;
      const int n = trial % 7 == 0 && k == 1 ? 0 : len(rng);
      for (int w = 0; w < n; ++w) t += "w" + std::to_string(word(rng)) + " ";
      texts.push_back(t);
      sents.push_back(Split(t));
    }
    const Discourse disc = MakeDiscourse("d", texts);
    const UnitBags bags = UnitBags::From(disc, kWord);
    std::set<std::string> vocab;
    for (const auto &s : sents) vocab.insert(s.begin(), s.end());
    ASSERT_EQ(bags.vocab_size, static_cast<int>(vocab.size()));
    const double v = static_cast<double>(vocab.size());

    const PsiMatrix loo = LooMatrix(bags);
    EXPECT_NEAR(loo.all_c_score, OracleHypothesis(sents, std::vector<bool>(d, false), v),
                1e-9);
    for (int i = 0; i < d; ++i) {
      for (int j = i + 1; j < d; ++j) {
        std::vector<bool> inside(d, false);
        for (int k = i; k <= j; ++k) inside[k] = true;
        EXPECT_NEAR(loo.at(i, j), OracleHypothesis(sents, inside, v), 1e-9)
            << trial << " " << i << " " << j;
      }
    }
  }
}

TEST(LooMatrixTest, RejectsBadDiscount) {
  const UnitBags bags = UnitBags::From(MakeDiscourse("d", {"a", "b"}), kWord);
  EXPECT_THROW(LooMatrix(bags, 0.0), InvalidArgument);
  EXPECT_THROW(LooMatrix(bags, 1.5), InvalidArgument);
}

TEST(CoherenceTest, ClampedEqualsPsiArgmax) {
  std::mt19937_64 rng(21);
  CoherenceConfig cfg;
  cfg.clamp_loo = true;
  for (int trial = 0; trial < 50; ++trial) {
    const int d = 2 + trial % 11;
    std::vector<std::string> texts;
    for (int k = 0; k < d; ++k) texts.push_back("t" + std::to_string(k % 3) + " u");
    const Discourse disc = MakeDiscourse("d", texts);
    const EmissionTable e = testing::RandomEmissions(rng, d);
    const CoherenceResult r = CoherenceSegment(disc, e, Variant::kModelI, cfg);
    const Segmentation ref = PsiArgmax(PsiEnumerate(e));
    EXPECT_EQ(r.segmentation.block, ref.block);
    EXPECT_EQ(r.segmentation.score, ref.score);
    EXPECT_EQ(r.segmentation.labels, ref.labels);
  }
}

TEST(CoherenceTest, CombinedScoreIsLearnedPlusLoo) {
  std::mt19937_64 rng(22);
  const Discourse disc =
      MakeDiscourse("d", {"a b", "a c", "x y", "x y z", "a b c"});
  const EmissionTable e = testing::RandomEmissions(rng, 5);
  const CoherenceResult r = CoherenceSegment(disc, e, Variant::kModelI, {});
  const PsiMatrix learned = PsiEnumerate(e);
  const PsiMatrix loo = LooMatrix(UnitBags::From(disc, kWord));
  double best = learned.all_c_score + loo.all_c_score;
  std::optional<Block> arg;
  for (int i = 0; i < 5; ++i) {
    for (int j = i + 1; j < 5; ++j) {
      const double s = learned.at(i, j) + loo.at(i, j);
      EXPECT_EQ(r.psi.at(i, j), s);
      if (s > best) {
        best = s;
        arg = Block{i, j};
      }
    }
  }
  EXPECT_EQ(r.segmentation.block, arg);
}

TEST(CoherenceTest, BoundaryAtVocabularySwitch) {
  for (int d : {4, 6, 8, 10}) {
    std::vector<std::string> texts;
    for (int k = 0; k < d; ++k) {
      texts.push_back(k < d / 2 ? "alpha beta gamma delta" : "omega psi chi phi");
    }
    const Discourse disc = MakeDiscourse("d", texts);
    const EmissionTable neutral(d, ProbPair{0.5, 0.5});
    const CoherenceResult r = CoherenceSegment(disc, neutral, Variant::kModelI, {});
    ASSERT_TRUE(r.segmentation.block.has_value()) << d;
    const Block b = *r.segmentation.block;
    EXPECT_TRUE((b == Block{0, d / 2 - 1}) || (b == Block{d / 2, d - 1})) << d;
  }
}

TEST(CoherenceTest, SingleSentenceDiscourse) {
  const Discourse disc = MakeDiscourse("d", {"a b"});
  const CoherenceResult r =
      CoherenceSegment(disc, {ProbPair{0.1, 0.9}}, Variant::kModelI, {});
  EXPECT_EQ(r.segmentation.labels, testing::Labels("C"));
}

TEST(CoherenceTest, PrecomputedLooIsUsed) {
  const Discourse disc = MakeDiscourse("d", {"a b", "a c", "x y", "x y z"});
  const EmissionTable e(4, ProbPair{0.5, 0.5});
  const PsiMatrix loo = LooMatrix(UnitBags::From(disc, kWord));
  const CoherenceResult a = CoherenceSegment(disc, e, Variant::kModelI, {});
  const CoherenceResult b = CoherenceSegment(disc, e, Variant::kModelI, {}, &loo);
  EXPECT_EQ(a.segmentation.block, b.segmentation.block);
  EXPECT_EQ(a.segmentation.score, b.segmentation.score);
  const PsiMatrix wrong = ClampedLooMatrix(3);
  EXPECT_THROW(CoherenceSegment(disc, e, Variant::kModelI, {}, &wrong), InvalidArgument);
}

// A host discourse on one vocabulary; learned emissions wrongly favor M on
// sentences 3..8, strongly on the last two, which also change topic.
TEST(CoherenceTest, SharedVocabularyOverridesModerateMistakes) {
  const std::vector<std::string> texts = {
      "le conseil vote la loi sur le budget",
      "la loi sur le budget passe au conseil",
      "le budget du conseil reste serre",
      "le conseil discute encore la loi",
      "la loi du budget revient au conseil",
      "le vote sur la loi reste serre",
      "le conseil adopte le budget",
      "un orage frappe la cote atlantique",
      "la cote atlantique subit un orage violent",
      "le budget de la loi est vote"};
  const Discourse disc = MakeDiscourse("d", texts);
  EmissionTable e(10, ProbPair{0.8, 0.2});
  const double pm[] = {0.65, 0.7, 0.6, 0.75, 0.9, 0.92};
  for (int k = 3; k <= 8; ++k) e[k] = ProbPair{1 - pm[k - 3], pm[k - 3]};
  ASSERT_EQ(ViterbiSegment(e).block, (Block{3, 8}));
  const CoherenceResult r = CoherenceSegment(disc, e, Variant::kModelI, {});
  for (int k = 3; k <= 6; ++k) EXPECT_EQ(r.segmentation.labels[k], Label::kC) << k;
  EXPECT_EQ(r.segmentation.block, (Block{7, 8}));
}

TEST(PosteriorsTest, MarginalsByEnumeration) {
  std::mt19937_64 rng(30);
  for (int d : {1, 2, 3, 6}) {
    const EmissionTable e = testing::RandomEmissions(rng, d);
    const PsiMatrix psi = PsiEnumerate(e);
    const EmissionTable post = PsiPosteriors(psi);
    double z = std::exp(psi.all_c_score);
    std::vector<double> m(d, 0.0);
    for (int i = 0; i < d; ++i) {
      for (int j = i + 1; j < d; ++j) {
        const double w = std::exp(psi.at(i, j));
        z += w;
        for (int k = i; k <= j; ++k) m[k] += w;
      }
    }
    ASSERT_EQ(post.size(), static_cast<std::size_t>(d));
    for (int k = 0; k < d; ++k) {
      EXPECT_NEAR(post[k].m, std::max(m[k] / z, kEmissionFloor), 1e-12) << d << " " << k;
      EXPECT_NEAR(post[k].c + post[k].m, 1.0, 1e-12);
    }
  }
}

}  // namespace
}  // namespace duel
