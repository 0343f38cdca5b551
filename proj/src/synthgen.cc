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


#include "duel/synthgen.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "duel/segmenter.h"

namespace duel {

void ValidateConfig(const GeneratorConfig &cfg) {
  auto fail = [](const std::string &what) {
    throw InvalidArgument("infeasible generator config: " + what);
  };
  if (cfg.n_discourses < 1) fail("n_discourses must be >= 1");
  if (cfg.min_sentences < 1 || cfg.min_sentences > cfg.max_sentences) {
    fail("sentence range must satisfy 1 <= min <= max");
  }
  if (cfg.min_block < 2) fail("blocks span at least two sentences");
  if (cfg.min_block > cfg.max_block) fail("block range must satisfy min <= max");
  if (cfg.insertion_probability > 0 && cfg.min_block > cfg.min_sentences) {
    fail("a block of " + std::to_string(cfg.min_block) +
         " sentences does not fit a discourse of " +
         std::to_string(cfg.min_sentences));
  }
  auto unit = [&](double v, const char *name) {
    if (!(v >= 0.0 && v <= 1.0)) fail(std::string(name) + " must lie in [0, 1]");
  };
  unit(cfg.insertion_probability, "insertion_probability");
  unit(cfg.overlap, "overlap");
  unit(cfg.topic_rate, "topic_rate");
  unit(cfg.name_rate, "name_rate");
  unit(cfg.cross_listed, "cross_listed");
  if (cfg.shared_vocab < 4 || cfg.author_vocab < 4) fail("vocabularies too small");
  if (cfg.topics_per_author < 1 || cfg.topic_size < 1) fail("need at least one topic");
  for (const AuthorStyle *s : {&cfg.style_c, &cfg.style_m}) {
    if (s->mean_length < 1) fail("mean sentence length must be >= 1");
    if (s->function_rate + s->subordinator_rate >= 1.0) {
      fail("function and subordinator rates leave no content tokens");
    }
    if (s->adverb_rate + s->adjective_rate + s->verb_rate > 1.0) {
      fail("content tag rates exceed 1");
    }
  }
}

namespace {

enum Pos { kNoun, kVerb, kAdj, kAdv, kNumPos };
constexpr std::array<const char *, kNumPos> kPosTag = {"NOUN", "VERB", "ADJ", "ADV"};
// Share of each tag inside a lemma pool.
constexpr std::array<double, kNumPos> kPoolShare = {0.5, 0.25, 0.15, 0.10};

constexpr std::array<const char *, 14> kFunctionWords = {
    "le", "la", "les", "de", "des", "du", "un", "une", "et", "en", "au", "sur",
    "par", "pour"};
constexpr std::array<const char *, 5> kSubordinators = {"que", "si", "quand",
                                                         "comme", "car"};

struct Lemma {
  std::string text;
  Pos pos;
};

// Rank-weighted lemma list.
struct Pool {
  std::vector<int> lemmas;  // indices into World::lemmas
  std::discrete_distribution<int> pick;
};

struct Topic {
  std::array<std::vector<int>, kNumPos> lemmas;
  std::vector<std::string> concepts;
};

struct Author {
  std::array<Pool, kNumPos> exclusive;
  std::vector<Topic> topics;
};

class World {
 public:
  World(const GeneratorConfig &cfg, std::mt19937_64 &rng) : cfg_(cfg), rng_(rng) {
    std::array<Pool, kNumPos> shared = MakePools(cfg.shared_vocab);
    shared_ = std::move(shared);
    for (Label who : {Label::kC, Label::kM}) {
      Author &a = authors_[who];
      a.exclusive = MakePools(cfg.author_vocab);
      for (int t = 0; t < cfg.topics_per_author; ++t) a.topics.push_back(MakeTopic(a, who, t));
    }
    CrossList();
  }

  ConceptNetwork &network() { return network_; }

  Sentence MakeSentence(Label who, const Topic &topic, int index) {
    const AuthorStyle &style = who == Label::kC ? cfg_.style_c : cfg_.style_m;
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double raw = style.mean_length + (2 * u(rng_) - 1) * style.length_spread;
    const int length = std::max(3, static_cast<int>(std::lround(raw)));
    Sentence s;
    s.index = index;
    for (int t = 0; t < length; ++t) {
      const double r = u(rng_);
      if (r < style.subordinator_rate) {
        Push(s, kSubordinators[Uniform(kSubordinators.size())], "CSUB");
      } else if (r < style.subordinator_rate + style.function_rate) {
        const std::string w = kFunctionWords[Uniform(kFunctionWords.size())];
        Push(s, w, "DET");
      } else {
        PushContent(s, who, topic, style);
      }
    }
    if (!topic.concepts.empty() && u(rng_) < cfg_.name_rate) {
      const std::string &concept_name = topic.concepts[Uniform(topic.concepts.size())];
      const auto &terms = network_.concepts.at(concept_name);
      auto it = terms.begin();
      std::advance(it, Uniform(terms.size()));
      InsertName(s, *it);
    }
    return s;
  }

  const Author &author(Label who) const { return authors_[who]; }

 private:
  std::size_t Uniform(std::size_t n) {
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_);
  }

  std::string PseudoWord(int syllables, bool capital) {
    static constexpr const char kOnsets[] = "bcdfglmnprstvz";
    static constexpr const char kVowels[] = "aeiou";
    for (;;) {
      std::string w;
      for (int k = 0; k < syllables; ++k) {
        w += kOnsets[Uniform(sizeof kOnsets - 1)];
        w += kVowels[Uniform(sizeof kVowels - 1)];
      }
      if (capital) w[0] = static_cast<char>(w[0] - 'a' + 'A');
      if (used_.insert(w).second) return w;
    }
  }

  std::array<Pool, kNumPos> MakePools(int size) {
    std::array<Pool, kNumPos> pools;
    for (int p = 0; p < kNumPos; ++p) {
      const int n = std::max(1, static_cast<int>(std::lround(size * kPoolShare[p])));
      std::vector<double> weights;
      for (int r = 0; r < n; ++r) {
        lemmas_.push_back(Lemma{PseudoWord(3 + static_cast<int>(Uniform(2)), false),
                                static_cast<Pos>(p)});
        pools[p].lemmas.push_back(static_cast<int>(lemmas_.size()) - 1);
        weights.push_back(1.0 / std::pow(r + 1.0, cfg_.zipf_exponent));
      }
      pools[p].pick = std::discrete_distribution<int>(weights.begin(), weights.end());
    }
    return pools;
  }

  Topic MakeTopic(const Author &a, Label who, int t) {
    Topic topic;
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int k = 0; k < cfg_.topic_size; ++k) {
      const Pos p = static_cast<Pos>(k % kNumPos == 3 ? kNoun : k % kNumPos);
      const Pool &src = u(rng_) < cfg_.overlap ? shared_[p] : a.exclusive[p];
      topic.lemmas[p].push_back(src.lemmas[Uniform(src.lemmas.size())]);
    }
    for (int c = 0; c < cfg_.concepts_per_topic; ++c) {
      char name[64];
      std::snprintf(name, sizeof name, "%c_topic%d_concept%d", LabelChar(who), t, c);
      network_.concepts[name];
      for (int k = 0; k < cfg_.terms_per_concept; ++k) {
        std::string term = PseudoWord(2 + static_cast<int>(Uniform(2)), true);
        if (u(rng_) < 0.3) term += "_" + PseudoWord(2 + static_cast<int>(Uniform(2)), true);
        network_.Add(name, term);
      }
      topic.concepts.emplace_back(name);
    }
    return topic;
  }

  void CrossList() {
    std::vector<std::pair<std::string, std::string>> extra;
    std::vector<std::string> names;
    for (const auto &[name, terms] : network_.concepts) names.push_back(name);
    if (names.size() < 2) return;
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (const auto &[name, terms] : network_.concepts) {
      for (const std::string &term : terms) {
        if (u(rng_) >= cfg_.cross_listed) continue;
        const std::string &other = names[Uniform(names.size())];
        if (other != name) extra.emplace_back(other, term);
      }
    }
    for (const auto &[name, term] : extra) network_.Add(name, term);
  }

  void Push(Sentence &s, const std::string &word, const std::string &lemma,
            const char *tag) {
    s.tokens.push_back(word);
    s.lemmas.push_back(lemma);
    s.pos.emplace_back(tag);
  }
  void Push(Sentence &s, const std::string &word, const char *tag) {
    Push(s, word, word, tag);
  }

  std::string Inflect(const Lemma &l) {
    static constexpr std::array<std::array<const char *, 3>, kNumPos> kSuffix = {{
        {"", "s", ""}, {"er", "ent", "ait"}, {"", "e", "s"}, {"ment", "ment", "ment"}}};
    return l.text + kSuffix[l.pos][Uniform(3)];
  }

  void PushContent(Sentence &s, Label who, const Topic &topic, const AuthorStyle &style) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double r = u(rng_);
    Pos p = kNoun;
    if (r < style.adverb_rate) {
      p = kAdv;
    } else if (r < style.adverb_rate + style.adjective_rate) {
      p = kAdj;
    } else if (r < style.adverb_rate + style.adjective_rate + style.verb_rate) {
      p = kVerb;
    }
    int id;
    const double src = u(rng_);
    if (src < cfg_.topic_rate && !topic.lemmas[p].empty()) {
      id = topic.lemmas[p][Uniform(topic.lemmas[p].size())];
    } else {
      Pool &pool = u(rng_) < cfg_.overlap ? shared_[p] : authors_[who].exclusive[p];
      id = pool.lemmas[pool.pick(rng_)];
    }
    const Lemma &l = lemmas_[id];
    Push(s, Inflect(l), l.text, kPosTag[l.pos]);
  }

  void InsertName(Sentence &s, const std::string &term) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    for (;;) {
      const std::size_t end = term.find('_', start);
      parts.push_back(term.substr(start, end - start));
      if (end == std::string::npos) break;
      start = end + 1;
    }
    const std::size_t at = Uniform(s.tokens.size() + 1);
    for (std::size_t k = 0; k < parts.size(); ++k) {
      s.tokens.insert(s.tokens.begin() + static_cast<long>(at + k), parts[k]);
      s.lemmas.insert(s.lemmas.begin() + static_cast<long>(at + k), parts[k]);
      s.pos.insert(s.pos.begin() + static_cast<long>(at + k), "NPROP");
    }
  }

  const GeneratorConfig &cfg_;
  std::mt19937_64 &rng_;
  std::set<std::string> used_;
  std::vector<Lemma> lemmas_;
  std::array<Pool, kNumPos> shared_;
  ClassPair<Author> authors_;
  ConceptNetwork network_;
};

}  // namespace

GeneratedData Generate(const GeneratorConfig &cfg) {
  ValidateConfig(cfg);
  std::mt19937_64 rng(cfg.seed);
  World world(cfg, rng);
  GeneratedData out;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  auto uniform_int = [&](int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng);
  };
  const int n_topics = cfg.topics_per_author;
  for (int n = 0; n < cfg.n_discourses; ++n) {
    Discourse d;
    char id[32];
    std::snprintf(id, sizeof id, "d%04d", n);
    d.id = id;
    const int size = uniform_int(cfg.min_sentences, cfg.max_sentences);
    std::optional<Block> block;
    if (u(rng) < cfg.insertion_probability) {
      const int len = uniform_int(cfg.min_block, std::min(cfg.max_block, size));
      const int start = uniform_int(0, size - len);
      block = Block{start, start + len - 1};
    }
    const Topic &host = world.author(Label::kC).topics[uniform_int(0, n_topics - 1)];
    const Topic &guest = world.author(Label::kM).topics[uniform_int(0, n_topics - 1)];
    for (int k = 0; k < size; ++k) {
      const bool inside = block && k >= block->i && k <= block->j;
      const Label who = inside ? Label::kM : Label::kC;
      Sentence s = world.MakeSentence(who, inside ? guest : host, k);
      s.ref_label = who;
      d.sentences.push_back(std::move(s));
    }
    out.corpus.push_back(std::move(d));
  }
  out.network = std::move(world.network());
  return out;
}

std::pair<Corpus, Corpus> SplitCorpus(const Corpus &corpus, std::size_t n_train) {
  if (n_train > corpus.size()) throw InvalidArgument("split exceeds corpus size");
  Corpus train(corpus.begin(), corpus.begin() + static_cast<long>(n_train));
  Corpus test(corpus.begin() + static_cast<long>(n_train), corpus.end());
  return {std::move(train), std::move(test)};
}

}  // namespace duel
