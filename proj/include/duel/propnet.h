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

// Proper-noun concept network and segment grouping.
//
// A network file holds one concept per line:
//
//   Argentin<TAB>Argentine Buenos_Aires
//
// Multiword terms are joined by underscores and are matched against token
// n-grams (n <= 4) joined the same way. Segments sharing more than
// `threshold` elements (terms or concepts) are linked; the closure of the
// links forms groups, and a group's class pair is blended into each member.

#ifndef DUEL_PROPNET_H_
#define DUEL_PROPNET_H_

#include <iosfwd>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "duel/common.h"
#include "duel/corpus.h"

namespace duel {

inline constexpr int kMaxTermTokens = 4;

struct ConceptNetwork {
  std::map<std::string, std::set<std::string>> concepts;    // concept -> terms
  std::map<std::string, std::set<std::string>> term_index;  // term -> concepts

  void Add(const std::string &concept_name, const std::string &term);
  bool empty() const { return concepts.empty(); }
};

ConceptNetwork ParseNetwork(std::istream &in);
ConceptNetwork LoadNetwork(const std::string &path);
void WriteNetwork(std::ostream &out, const ConceptNetwork &net);
void SaveNetwork(const std::string &path, const ConceptNetwork &net);

// Element strings carry a kind prefix so a term and a concept of the same
// spelling stay distinct.
std::string TermElement(std::string_view term);
std::string ConceptElement(std::string_view concept_name);

// Matched terms of `s` plus every concept holding one of them.
std::set<std::string> Enrich(const Sentence &s, const ConceptNetwork &net);

enum class GroupScope { kDiscourse, kCorpus };
const char *GroupScopeName(GroupScope scope);
GroupScope ParseGroupScope(std::string_view name);

struct GroupingConfig {
  int threshold = 1;
  int iterations = 4;
  GroupScope scope = GroupScope::kCorpus;
};

// (discourse position in the corpus, sentence position in the discourse).
struct SegmentKey {
  int discourse = 0;
  int sentence = 0;

  auto operator<=>(const SegmentKey &) const = default;
};

struct SegmentGroups {
  // Groups of two or more segments, each sorted, ordered by first member.
  std::vector<std::vector<SegmentKey>> groups;
  GroupingConfig config;

  std::size_t grouped_segments() const;
};

SegmentGroups GroupSegments(const Corpus &corpus, const ConceptNetwork &net,
                            const GroupingConfig &cfg = {});

// Group pair = normalized geometric mean of the member pairs; each member
// becomes the normalized product of its own pair and the group pair.
// Ungrouped sentences are copied unchanged.
std::vector<EmissionTable> Blend(const std::vector<EmissionTable> &posteriors,
                                 const SegmentGroups &groups);

// JSON report: configuration, group sizes and members by discourse id.
std::string GroupReportJson(const SegmentGroups &groups, const Corpus &corpus);

}  // namespace duel

#endif  // DUEL_PROPNET_H_
