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


// Seeded two-author corpora that follow the insertion protocol.
//
// Each seed builds one small world: pseudo-word lemmas with inflected
// surface forms and coarse tags, a pool of lemmas shared by both authors
// with identical weights, an exclusive pool per author, per-author topics
// and proper-noun concepts attached to topics. Host discourses are written
// by C; a fraction of them receive one contiguous block by M.

#ifndef DUEL_SYNTHGEN_H_
#define DUEL_SYNTHGEN_H_

#include <cstdint>

#include "duel/corpus.h"
#include "duel/propnet.h"

namespace duel {

struct AuthorStyle {
  double mean_length = 15;     // tokens per sentence
  double length_spread = 5;    // uniform half-width
  double function_rate = 0.35; // short function words among tokens
  double subordinator_rate = 0.03;
  double adverb_rate = 0.06;
  double adjective_rate = 0.10;
  double verb_rate = 0.22;     // remaining content tokens are nouns
};

struct GeneratorConfig {
  std::uint64_t seed = 1;
  int n_discourses = 80;
  int min_sentences = 30;
  int max_sentences = 80;
  double insertion_probability = 0.6;
  int min_block = 2;
  int max_block = 12;

  int shared_vocab = 400;     // content lemmas used by both authors
  int author_vocab = 400;     // exclusive content lemmas per author
  double overlap = 0.8;       // share of content draws from the shared pool
  double zipf_exponent = 1.0;

  int topics_per_author = 80;
  int topic_size = 15;        // lemmas per topic
  double topic_rate = 0.4;    // share of content draws from the active topic

  int concepts_per_topic = 2;
  int terms_per_concept = 3;
  double name_rate = 0.3;     // chance that a sentence mentions a name
  double cross_listed = 0.1;  // share of terms also listed in a second concept

  AuthorStyle style_c;
  AuthorStyle style_m{19, 5, 0.35, 0.05, 0.09, 0.13, 0.22};
};

// Throws InvalidArgument when the configuration cannot be honored.
void ValidateConfig(const GeneratorConfig &cfg);

struct GeneratedData {
  Corpus corpus;
  ConceptNetwork network;
};

GeneratedData Generate(const GeneratorConfig &cfg);

// Splits the first `n_train` discourses off as the training corpus.
std::pair<Corpus, Corpus> SplitCorpus(const Corpus &corpus, std::size_t n_train);

}  // namespace duel

#endif  // DUEL_SYNTHGEN_H_
