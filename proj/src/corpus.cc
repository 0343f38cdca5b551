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

#include <fstream>
#include <istream>
#include <ostream>

#include "json.hpp"

namespace duel {

using nlohmann::json;

bool Discourse::labeled() const {
  for (const Sentence &s : sentences) {
    if (!s.ref_label) return false;
  }
  return !sentences.empty();
}

std::vector<Label> Discourse::reference_labels() const {
  std::vector<Label> labels;
  labels.reserve(sentences.size());
  for (const Sentence &s : sentences) {
    if (!s.ref_label) {
      throw AnnotationError("discourse " + id + " sentence " +
                            std::to_string(s.index) + " has no label");
    }
    labels.push_back(*s.ref_label);
  }
  return labels;
}

std::size_t Utf8Length(std::string_view s) {
  std::size_t n = 0;
  for (unsigned char ch : s) {
    // Count every byte that is not a continuation byte.
    if ((ch & 0xC0) != 0x80) ++n;
  }
  return n;
}

std::vector<std::string> ViewTokens(const Sentence &s, const CorpusView &v) {
  if (v.variant == Variant::kModelII) {
    if (v.unit == Unit::kLemma) {
      throw AnnotationError("Model II never exposes lemmas");
    }
    std::vector<std::string> out;
    for (const std::string &t : s.tokens) {
      if (Utf8Length(t) > kModelIIMaxDroppedLength) out.push_back(t);
    }
    return out;
  }
  if (v.unit == Unit::kLemma) {
    if (!s.has_lemmas()) {
      throw AnnotationError("sentence " + std::to_string(s.index) +
                            " has no lemma annotation");
    }
    return s.lemmas;
  }
  return s.tokens;
}

bool IsInsertionLanguage(const std::vector<Label> &labels) {
  // States: 0 before block, 1 inside block, 2 after block.
  int state = 0;
  int block_len = 0;
  for (Label l : labels) {
    if (l == Label::kM) {
      if (state == 2) return false;
      state = 1;
      ++block_len;
    } else if (state == 1) {
      if (block_len < 2) return false;
      state = 2;
    }
  }
  return state != 1 || block_len >= 2;
}

void ValidateInsertion(const Discourse &d) {
  std::vector<int> m_indices;
  std::vector<Label> labels;
  for (const Sentence &s : d.sentences) {
    if (!s.ref_label) return;  // only labeled discourses are constrained
    labels.push_back(*s.ref_label);
    if (*s.ref_label == Label::kM) m_indices.push_back(s.index);
  }
  if (!IsInsertionLanguage(labels)) {
    throw ConstraintError(d.id, m_indices,
                          "M sentences must form one contiguous block of "
                          "length >= 2");
  }
}

namespace {

std::vector<std::string> StringArray(const json &j, const char *field,
                                     int line) {
  if (!j.is_array()) {
    throw ParseError(std::string("field '") + field + "' must be an array",
                     line);
  }
  std::vector<std::string> out;
  out.reserve(j.size());
  for (const json &e : j) {
    if (!e.is_string()) {
      throw ParseError(std::string("field '") + field +
                           "' must contain strings",
                       line);
    }
    out.push_back(e.get<std::string>());
  }
  return out;
}

}  // namespace

Discourse ParseDiscourse(std::string_view json_line, int line) {
  json j;
  try {
    j = json::parse(json_line);
  } catch (const json::parse_error &e) {
    throw ParseError(e.what(), line);
  }
  if (!j.is_object()) throw ParseError("expected a JSON object", line);
  if (!j.contains("id") || !j["id"].is_string()) {
    throw ParseError("missing string field 'id'", line);
  }
  if (!j.contains("sentences") || !j["sentences"].is_array()) {
    throw ParseError("missing array field 'sentences'", line);
  }
  Discourse d;
  d.id = j["id"].get<std::string>();
  if (j["sentences"].empty()) throw ParseError("discourse has no sentences", line);
  int index = 0;
  for (const json &js : j["sentences"]) {
    if (!js.is_object() || !js.contains("tokens")) {
      throw ParseError("sentence without 'tokens'", line);
    }
    Sentence s;
    s.index = index++;
    s.tokens = StringArray(js["tokens"], "tokens", line);
    if (s.tokens.empty()) throw ParseError("sentence with no tokens", line);
    if (js.contains("lemmas")) {
      s.lemmas = StringArray(js["lemmas"], "lemmas", line);
      if (s.lemmas.size() != s.tokens.size()) {
        throw ParseError("lemmas and tokens differ in length", line);
      }
    }
    if (js.contains("pos")) {
      s.pos = StringArray(js["pos"], "pos", line);
      if (s.pos.size() != s.tokens.size()) {
        throw ParseError("pos and tokens differ in length", line);
      }
    }
    if (js.contains("label") && !js["label"].is_null()) {
      const json &l = js["label"];
      if (l == "C") {
        s.ref_label = Label::kC;
      } else if (l == "M") {
        s.ref_label = Label::kM;
      } else {
        throw ParseError("label must be \"C\" or \"M\"", line);
      }
    }
    d.sentences.push_back(std::move(s));
  }
  return d;
}

std::string SerializeDiscourse(const Discourse &d) {
  json j;
  j["id"] = d.id;
  json sentences = json::array();
  for (const Sentence &s : d.sentences) {
    json js;
    js["tokens"] = s.tokens;
    if (s.has_lemmas()) js["lemmas"] = s.lemmas;
    if (s.has_pos()) js["pos"] = s.pos;
    if (s.ref_label) js["label"] = std::string(1, LabelChar(*s.ref_label));
    sentences.push_back(std::move(js));
  }
  j["sentences"] = std::move(sentences);
  return j.dump();
}

Corpus ReadCorpus(std::istream &in, bool validate) {
  Corpus corpus;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    Discourse d = ParseDiscourse(line, lineno);
    if (validate) ValidateInsertion(d);
    corpus.push_back(std::move(d));
  }
  return corpus;
}

Corpus LoadCorpus(const std::string &path, bool validate) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open corpus file " + path);
  return ReadCorpus(in, validate);
}

void WriteCorpus(std::ostream &out, const Corpus &corpus) {
  for (const Discourse &d : corpus) out << SerializeDiscourse(d) << '\n';
}

void SaveCorpus(const std::string &path, const Corpus &corpus) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write corpus file " + path);
  WriteCorpus(out, corpus);
}

Corpus StripLabels(const Corpus &corpus) {
  Corpus out = corpus;
  for (Discourse &d : out) {
    for (Sentence &s : d.sentences) s.ref_label.reset();
  }
  return out;
}

const char *VariantName(Variant v) {
  return v == Variant::kModelI ? "I" : "II";
}

Variant ParseVariant(std::string_view name) {
  if (name == "I" || name == "1") return Variant::kModelI;
  if (name == "II" || name == "2") return Variant::kModelII;
  throw InvalidArgument("unknown model variant '" + std::string(name) +
                        "' (expected I or II)");
}

const char *UnitName(Unit u) { return u == Unit::kWord ? "word" : "lemma"; }

}  // namespace duel
