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

// Annotated corpus ingestion and the two modeling views.
//
// A corpus file is JSON-Lines, one discourse per line:
//
//   {"id": "d1", "sentences": [{"tokens": [...], "lemmas": [...],
//                               "pos": [...], "label": "C"}, ...]}
//
// "lemmas", "pos" and "label" are optional per sentence.

#ifndef DUEL_CORPUS_H_
#define DUEL_CORPUS_H_

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "duel/common.h"

namespace duel {

struct Sentence {
  int index = 0;
  std::vector<std::string> tokens;
  std::vector<std::string> lemmas;  // empty when not annotated
  std::vector<std::string> pos;     // empty when not annotated
  std::optional<Label> ref_label;

  bool has_lemmas() const { return !lemmas.empty(); }
  bool has_pos() const { return !pos.empty(); }
};

struct Discourse {
  std::string id;
  std::vector<Sentence> sentences;

  int size() const { return static_cast<int>(sentences.size()); }
  // True when every sentence carries a reference label.
  bool labeled() const;
  std::vector<Label> reference_labels() const;
};

using Corpus = std::vector<Discourse>;

enum class Variant { kModelI, kModelII };
enum class Unit { kWord, kLemma };

// Model I uses the annotations as given; Model II drops every token of
// five characters or fewer and never exposes lemmas.
struct CorpusView {
  Variant variant = Variant::kModelI;
  Unit unit = Unit::kWord;

  bool operator==(const CorpusView &) const = default;
};

// Words of this many characters or fewer are dropped by Model II.
inline constexpr std::size_t kModelIIMaxDroppedLength = 5;

// Length in Unicode scalar values of a UTF-8 string.
std::size_t Utf8Length(std::string_view s);

std::vector<std::string> ViewTokens(const Sentence &s, const CorpusView &v);

// Accepts exactly C* | C* M M+ C*. Throws ConstraintError otherwise.
void ValidateInsertion(const Discourse &d);
bool IsInsertionLanguage(const std::vector<Label> &labels);

// Parses one JSON object into a discourse; throws ParseError tagged with
// `line` on malformed input.
Discourse ParseDiscourse(std::string_view json_line, int line);
std::string SerializeDiscourse(const Discourse &d);

Corpus ReadCorpus(std::istream &in, bool validate);
Corpus LoadCorpus(const std::string &path, bool validate);
void WriteCorpus(std::ostream &out, const Corpus &corpus);
void SaveCorpus(const std::string &path, const Corpus &corpus);

// Returns a copy with every reference label removed.
Corpus StripLabels(const Corpus &corpus);

const char *VariantName(Variant v);
Variant ParseVariant(std::string_view name);
const char *UnitName(Unit u);

}  // namespace duel

#endif  // DUEL_CORPUS_H_
