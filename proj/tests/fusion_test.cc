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


#include "duel/fusion.h"

#include <gtest/gtest.h>

#include "testing.h"

namespace duel {
namespace {

HypothesisDump Dump(const std::string &id, const std::string &labels,
                    const std::string &discourse = "d") {
  HypothesisDump h{id, {}};
  for (std::size_t k = 0; k < labels.size(); ++k) {
    h.rows.push_back(HypothesisRow{discourse, static_cast<int>(k),
                                   labels[k] == 'M' ? Label::kM : Label::kC,
                                   labels[k] == 'M' ? 0.8 : 0.3});
  }
  return h;
}

TEST(BuildJudgesTest, Shape) {
  const JudgeMatrix j = BuildJudges(
      {Dump("a", "CCMMCCCCCC"), Dump("b", "CCCCMMMCCC"), Dump("c", "MMCCCCCCCC")});
  EXPECT_EQ(j.rows(), 10u);
  EXPECT_EQ(j.cols(), 3u);
  EXPECT_EQ(j.at(2, 0), 1.0);
  EXPECT_EQ(j.at(2, 1), 0.0);
  EXPECT_EQ(j.at(0, 2), 1.0);
  EXPECT_EQ(j.judge_ids(), (std::vector<std::string>{"a", "b", "c"}));
}

TEST(BuildJudgesTest, PosteriorMode) {
  const JudgeMatrix j = BuildJudges({Dump("a", "CM")}, XiMode::kPosterior);
  EXPECT_EQ(j.at(0, 0), 0.3);
  EXPECT_EQ(j.at(1, 0), 0.8);
}

TEST(BuildJudgesTest, DuplicateDumpGivesIdenticalColumns) {
  const JudgeMatrix j = BuildJudges({Dump("a", "CMMC"), Dump("a2", "CMMC")});
  for (std::size_t i = 0; i < j.rows(); ++i) EXPECT_EQ(j.at(i, 0), j.at(i, 1));
}

TEST(BuildJudgesTest, ReorderedRowsAlign) {
  HypothesisDump b = Dump("b", "MCCM");
  std::swap(b.rows[0], b.rows[3]);
  std::swap(b.rows[1], b.rows[2]);
  const JudgeMatrix j = BuildJudges({Dump("a", "CCCC"), b});
  EXPECT_EQ(j.at(0, 1), 1.0);
  EXPECT_EQ(j.at(1, 1), 0.0);
  EXPECT_EQ(j.at(3, 1), 1.0);
}

TEST(BuildJudgesTest, MissingSentenceIsAnAlignmentError) {
  HypothesisDump b = Dump("b", "CCCCCCCCCC");
  b.rows.pop_back();
  EXPECT_THROW(BuildJudges({Dump("a", "CCCCCCCCCC"), b}), AlignmentError);
  HypothesisDump dup = Dump("c", "CCC");
  dup.rows[2].sentence = 1;
  EXPECT_THROW(BuildJudges({dup}), AlignmentError);
  EXPECT_THROW(BuildJudges({}), InvalidArgument);
}

TEST(BuildJudgesTest, AttachReferences) {
  JudgeMatrix j = BuildJudges({Dump("a", "CCMM")});
  AttachReferences(j, {testing::MakeDiscourse("d", {"w", "x", "y", "z"}, "CMMC")});
  EXPECT_EQ(j.tau, (std::vector<int>{-1, 1, 1, -1}));
  JudgeMatrix k = BuildJudges({Dump("a", "CC")});
  EXPECT_THROW(AttachReferences(k, {testing::MakeDiscourse("e", {"w", "x"}, "CC")}),
               AlignmentError);
}

TEST(VoteTest, HandComputedTheta) {
  const VoteWeights w{{"a", "b", "c"}, {1, 1, 1}, 1.5, -1};
  const std::vector<double> r1 = {1, 1, 0}, r2 = {0, 0, 0}, r3 = {1, 1, 1};
  EXPECT_DOUBLE_EQ(Theta(r1, w), 0.5);
  EXPECT_EQ(ApplyVote(r1, w), Label::kM);
  EXPECT_DOUBLE_EQ(Theta(r2, w), -1.5);
  EXPECT_EQ(ApplyVote(r2, w), Label::kC);
  EXPECT_DOUBLE_EQ(Theta(r3, w), 1.5);
  EXPECT_EQ(ApplyVote(r3, w), Label::kM);
  const std::vector<double> wrong = {1, 1};
  EXPECT_THROW(Theta(wrong, w), InvalidArgument);
}

TEST(VoteTest, ZeroThetaIsM) {
  const VoteWeights w{{"a"}, {1}, 1, -1};
  const std::vector<double> r = {1};
  EXPECT_EQ(ApplyVote(r, w), Label::kM);
}

TEST(TrainVoteTest, OneHotSeparable) {
  JudgeMatrix j = BuildJudges(
      {Dump("noise", "MCMCCMMCMC"), Dump("truth", "CCMMMCCCCC"), Dump("all", "MMMMMMMMMM")});
  AttachReferences(j, {testing::MakeDiscourse("d", std::vector<std::string>(10, "w"),
                                              "CCMMMCCCCC")});
  const VoteWeights w = TrainVote(j);
  EXPECT_EQ(w.training_errors, 0);
  EXPECT_EQ(CountVoteErrors(j, w), 0);
}

TEST(TrainVoteTest, ConstantJudgesFallBackToMajority) {
  for (const char *ref : {"CCCMMCCCCC", "MMMMMMMCCC"}) {
    JudgeMatrix j = BuildJudges({Dump("z1", "CCCCCCCCCC"), Dump("z2", "CCCCCCCCCC")});
    AttachReferences(j, {testing::MakeDiscourse(
                            "d", std::vector<std::string>(10, "w"), ref)});
    const VoteWeights w = TrainVote(j);
    int m = 0;
    for (const char *c = ref; *c; ++c) m += *c == 'M';
    EXPECT_EQ(w.training_errors, std::min(m, 10 - m)) << ref;
  }
}

TEST(TrainVoteTest, PlantedSeparable) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const JudgeMatrix j = testing::PlantedJudges(seed, 50, 5);
    const VoteWeights w = TrainVote(j);
    EXPECT_EQ(w.training_errors, 0) << seed;
    EXPECT_EQ(CountVoteErrors(j, w), 0) << seed;
  }
}

TEST(TrainVoteTest, DeterministicPerSeed) {
  const JudgeMatrix j = testing::PlantedJudges(9, 80, 6);
  PocketConfig cfg;
  cfg.seed = 3;
  const VoteWeights a = TrainVote(j, cfg), b = TrainVote(j, cfg);
  EXPECT_EQ(a.alpha, b.alpha);
  EXPECT_EQ(a.delta, b.delta);
}

TEST(TrainVoteTest, NeedsReferences) {
  const JudgeMatrix j = BuildJudges({Dump("a", "CM")});
  EXPECT_THROW(TrainVote(j), InvalidArgument);
}

TEST(TrainVoteTest, SingleJudgeReproducesItself) {
  JudgeMatrix j = BuildJudges({Dump("a", "CCMMMC")});
  AttachReferences(j, {testing::MakeDiscourse("d", std::vector<std::string>(6, "w"),
                                              "CCMMMC")});
  const VoteWeights w = TrainVote(j);
  EXPECT_EQ(ApplyVote(j, w), testing::Labels("CCMMMC"));
}

// Scaling alpha and delta together leaves every decision unchanged.
TEST(VoteTest, PositiveScalingInvariance) {
  const JudgeMatrix j = testing::PlantedJudges(4, 60, 4);
  VoteWeights w = TrainVote(j);
  const auto before = ApplyVote(j, w);
  for (double &a : w.alpha) a *= 3.5;
  w.delta *= 3.5;
  EXPECT_EQ(ApplyVote(j, w), before);
}

TEST(WeightsTest, JsonRoundTrip) {
  const VoteWeights w{{"a", "b"}, {0.25, -1.5}, 8.834, 3};
  const VoteWeights back = ParseWeights(WeightsJson(w));
  EXPECT_EQ(back.judge_ids, w.judge_ids);
  EXPECT_EQ(back.alpha, w.alpha);
  EXPECT_EQ(back.delta, w.delta);
  EXPECT_EQ(back.training_errors, 3);
  EXPECT_THROW(ParseWeights("{\"alpha\": [1]}"), ParseError);
  EXPECT_THROW(ParseWeights("{\"judge_ids\": [\"a\"], \"alpha\": [], \"delta\": 0}"),
               InvalidArgument);
}

}  // namespace
}  // namespace duel
