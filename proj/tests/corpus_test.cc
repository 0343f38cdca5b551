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


#include "duel/corpus.h"

#include <sstream>

#include <gtest/gtest.h>

#include "testing.h"

namespace duel {
namespace {

using testing::MakeDiscourse;

TEST(CorpusTest, ModelIIDropsShortWords) {
  Sentence s = testing::MakeSentence("le gouvernement a propose une reforme");
  const auto kept = ViewTokens(s, CorpusView{Variant::kModelII, Unit::kWord});
  EXPECT_EQ(kept, (std::vector<std::string>{"gouvernement", "propose", "reforme"}));
}

TEST(CorpusTest, LengthCountsScalarValues) {
  EXPECT_EQ(Utf8Length("été"), 3u);
  EXPECT_EQ(Utf8Length("déçues"), 6u);
  // Six letters with two accents: kept by Model II although it is 8 bytes.
  Sentence s = testing::MakeSentence("déçues");
  EXPECT_EQ(ViewTokens(s, CorpusView{Variant::kModelII, Unit::kWord}).size(), 1u);
}

TEST(CorpusTest, LemmaViewIsIdentity) {
  Sentence s;
  s.tokens = {"proposé"};
  s.lemmas = {"proposer"};
  EXPECT_EQ(ViewTokens(s, CorpusView{Variant::kModelI, Unit::kLemma}),
            std::vector<std::string>{"proposer"});
}

TEST(CorpusTest, MissingLemmasRaise) {
  Sentence s;
  s.tokens = {"mot"};
  EXPECT_THROW(ViewTokens(s, CorpusView{Variant::kModelI, Unit::kLemma}),
               AnnotationError);
  EXPECT_THROW(ViewTokens(s, CorpusView{Variant::kModelII, Unit::kLemma}),
               AnnotationError);
}

TEST(CorpusTest, InsertionLanguage) {
  using testing::Labels;
  EXPECT_TRUE(IsInsertionLanguage(Labels("CCCC")));
  EXPECT_TRUE(IsInsertionLanguage(Labels("CMMC")));
  EXPECT_TRUE(IsInsertionLanguage(Labels("MMCC")));
  EXPECT_TRUE(IsInsertionLanguage(Labels("CCMM")));
  EXPECT_TRUE(IsInsertionLanguage(Labels("MM")));
  EXPECT_FALSE(IsInsertionLanguage(Labels("CMC")));
  EXPECT_FALSE(IsInsertionLanguage(Labels("M")));
  EXPECT_FALSE(IsInsertionLanguage(Labels("MMCMM")));
  EXPECT_FALSE(IsInsertionLanguage(Labels("CCM")));
}

TEST(CorpusTest, ValidationReportsOffendingIndices) {
  const Discourse d = MakeDiscourse("x", {"a", "b", "c", "d", "e"}, "CMCMM");
  try {
    ValidateInsertion(d);
    FAIL() << "expected a constraint violation";
  } catch (const ConstraintError &e) {
    EXPECT_EQ(e.discourse_id(), "x");
    EXPECT_EQ(e.indices(), (std::vector<int>{1, 3, 4}));
  }
}

TEST(CorpusTest, RoundTripIsStable) {
  Corpus c = {MakeDiscourse("d1", {"un deux", "trois quatre", "cinq six"}, "CMM"),
              MakeDiscourse("d2", {"sept", "huit"})};
  c[1].sentences[0].lemmas.clear();
  c[1].sentences[0].pos.clear();
  std::stringstream first;
  WriteCorpus(first, c);
  std::stringstream in(first.str());
  const Corpus loaded = ReadCorpus(in, true);
  std::stringstream second;
  WriteCorpus(second, loaded);
  EXPECT_EQ(first.str(), second.str());
  ASSERT_EQ(loaded.size(), 2u);
  EXPECT_FALSE(loaded[1].sentences[0].has_lemmas());
  EXPECT_EQ(loaded[0].sentences[2].ref_label, Label::kM);
}

TEST(CorpusTest, ParseErrorsCarryLineNumbers) {
  std::stringstream in(
      "{\"id\":\"a\",\"sentences\":[{\"tokens\":[\"x\"]}]}\n"
      "\n"
      "{\"id\":\"b\",\"sentences\":[{\"tokens\":[\"x\"],\"lemmas\":[]}]}\n");
  try {
    ReadCorpus(in, false);
    FAIL() << "expected a parse error";
  } catch (const ParseError &e) {
    EXPECT_EQ(e.line(), 3);
  }
  std::stringstream bad("not json\n");
  EXPECT_THROW(ReadCorpus(bad, false), ParseError);
  std::stringstream label("{\"id\":\"a\",\"sentences\":[{\"tokens\":[\"x\"],\"label\":\"Z\"}]}");
  EXPECT_THROW(ReadCorpus(label, false), ParseError);
  std::stringstream empty("{\"id\":\"a\",\"sentences\":[]}");
  EXPECT_THROW(ReadCorpus(empty, false), ParseError);
}

TEST(CorpusTest, LoadValidatesWhenAsked) {
  std::stringstream in("{\"id\":\"a\",\"sentences\":[{\"tokens\":[\"x\"],\"label\":\"M\"},"
                       "{\"tokens\":[\"y\"],\"label\":\"C\"}]}\n");
  EXPECT_THROW(ReadCorpus(in, true), ConstraintError);
}

TEST(CorpusTest, StripLabels) {
  const Corpus c = {MakeDiscourse("d", {"a", "b"}, "MM")};
  EXPECT_TRUE(c[0].labeled());
  const Corpus s = StripLabels(c);
  EXPECT_FALSE(s[0].labeled());
  EXPECT_THROW(s[0].reference_labels(), AnnotationError);
}

TEST(CorpusTest, VariantNames) {
  EXPECT_EQ(ParseVariant("I"), Variant::kModelI);
  EXPECT_EQ(ParseVariant("II"), Variant::kModelII);
  EXPECT_STREQ(VariantName(Variant::kModelII), "II");
  EXPECT_THROW(ParseVariant("III"), InvalidArgument);
}

}  // namespace
}  // namespace duel
