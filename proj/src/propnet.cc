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


#include "duel/propnet.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <unordered_map>

#include "duel/models.h"
#include "json.hpp"

namespace duel {

void ConceptNetwork::Add(const std::string &concept_name, const std::string &term) {
  concepts[concept_name].insert(term);
  term_index[term].insert(concept_name);
}

ConceptNetwork ParseNetwork(std::istream &in) {
  ConceptNetwork net;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    const std::size_t tab = line.find('\t');
    if (tab == std::string::npos) {
      throw ParseError("network line has no tab separator", line_no);
    }
    const std::string name = line.substr(0, tab);
    if (name.empty()) throw ParseError("network line has an empty concept", line_no);
    std::istringstream terms(line.substr(tab + 1));
    std::string term;
    net.concepts[name];
    while (terms >> term) net.Add(name, term);
  }
  return net;
}

ConceptNetwork LoadNetwork(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open network " + path);
  return ParseNetwork(in);
}

void WriteNetwork(std::ostream &out, const ConceptNetwork &net) {
  for (const auto &[name, terms] : net.concepts) {
    out << name << '\t';
    bool first = true;
    for (const std::string &t : terms) {
      if (!first) out << ' ';
      out << t;
      first = false;
    }
    out << '\n';
  }
}

void SaveNetwork(const std::string &path, const ConceptNetwork &net) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write network " + path);
  WriteNetwork(out, net);
}

std::string TermElement(std::string_view term) {
  return "term:" + std::string(term);
}

std::string ConceptElement(std::string_view concept_name) {
  return "concept:" + std::string(concept_name);
}

std::set<std::string> Enrich(const Sentence &s, const ConceptNetwork &net) {
  std::set<std::string> elements;
  if (net.empty()) return elements;
  const int n = static_cast<int>(s.tokens.size());
  for (int start = 0; start < n; ++start) {
    std::string gram;
    for (int len = 1; len <= kMaxTermTokens && start + len <= n; ++len) {
      if (len > 1) gram += '_';
      gram += s.tokens[start + len - 1];
      auto it = net.term_index.find(gram);
      if (it == net.term_index.end()) continue;
      elements.insert(TermElement(gram));
      for (const std::string &c : it->second) elements.insert(ConceptElement(c));
    }
  }
  return elements;
}

const char *GroupScopeName(GroupScope scope) {
  return scope == GroupScope::kCorpus ? "corpus" : "discourse";
}

GroupScope ParseGroupScope(std::string_view name) {
  if (name == "corpus") return GroupScope::kCorpus;
  if (name == "discourse") return GroupScope::kDiscourse;
  throw InvalidArgument("unknown grouping scope '" + std::string(name) + "'");
}

std::size_t SegmentGroups::grouped_segments() const {
  std::size_t n = 0;
  for (const auto &g : groups) n += g.size();
  return n;
}

namespace {

class UnionFind {
 public:
  explicit UnionFind(int n) : parent_(n) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }
  int Find(int x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  // The smaller root wins so the outcome does not depend on link order.
  bool Union(int a, int b) {
    a = Find(a);
    b = Find(b);
    if (a == b) return false;
    if (b < a) std::swap(a, b);
    parent_[b] = a;
    return true;
  }

 private:
  std::vector<int> parent_;
};

void GroupBucket(const std::vector<SegmentKey> &keys,
                 const std::vector<std::set<std::string>> &elements,
                 const GroupingConfig &cfg,
                 std::vector<std::vector<SegmentKey>> &out) {
  const int n = static_cast<int>(keys.size());
  UnionFind uf(n);
  for (int it = 0; it < cfg.iterations; ++it) {
    // Element sets of the current groups, keyed by root.
    std::map<int, std::set<std::string>> group_elements;
    for (int s = 0; s < n; ++s) {
      auto &g = group_elements[uf.Find(s)];
      g.insert(elements[s].begin(), elements[s].end());
    }
    std::unordered_map<std::string, std::vector<int>> index;
    for (const auto &[root, elems] : group_elements) {
      for (const std::string &e : elems) index[e].push_back(root);
    }
    std::vector<std::pair<int, int>> links;
    for (const auto &[root, elems] : group_elements) {
      std::map<int, int> shared;
      for (const std::string &e : elems) {
        for (int other : index[e]) {
          if (other > root) ++shared[other];
        }
      }
      for (const auto &[other, count] : shared) {
        if (count > cfg.threshold) links.emplace_back(root, other);
      }
    }
    bool changed = false;
    for (const auto &[a, b] : links) changed |= uf.Union(a, b);
    if (!changed) break;
  }
  std::map<int, std::vector<SegmentKey>> members;
  for (int s = 0; s < n; ++s) members[uf.Find(s)].push_back(keys[s]);
  for (auto &[root, group] : members) {
    if (group.size() >= 2) out.push_back(std::move(group));
  }
}

}  // namespace

SegmentGroups GroupSegments(const Corpus &corpus, const ConceptNetwork &net,
                            const GroupingConfig &cfg) {
  if (cfg.threshold < 1) throw InvalidArgument("grouping threshold must be >= 1");
  if (cfg.iterations < 1) throw InvalidArgument("grouping iterations must be >= 1");
  SegmentGroups result;
  result.config = cfg;

  std::vector<SegmentKey> keys;
  std::vector<std::set<std::string>> elements;
  auto flush = [&] {
    GroupBucket(keys, elements, cfg, result.groups);
    keys.clear();
    elements.clear();
  };
  for (int di = 0; di < static_cast<int>(corpus.size()); ++di) {
    const Discourse &d = corpus[di];
    for (int k = 0; k < d.size(); ++k) {
      std::set<std::string> e = Enrich(d.sentences[k], net);
      if (e.empty()) continue;
      keys.push_back(SegmentKey{di, k});
      elements.push_back(std::move(e));
    }
    if (cfg.scope == GroupScope::kDiscourse) flush();
  }
  if (cfg.scope == GroupScope::kCorpus) flush();
  std::sort(result.groups.begin(), result.groups.end(),
            [](const auto &a, const auto &b) { return a.front() < b.front(); });
  return result;
}

std::vector<EmissionTable> Blend(const std::vector<EmissionTable> &posteriors,
                                 const SegmentGroups &groups) {
  std::vector<EmissionTable> out = posteriors;
  for (const auto &group : groups.groups) {
    double lc = 0, lm = 0;
    for (const SegmentKey &key : group) {
      if (key.discourse >= static_cast<int>(posteriors.size()) ||
          key.sentence >= static_cast<int>(posteriors[key.discourse].size())) {
        throw AlignmentError("group member has no posterior");
      }
      const ProbPair p = posteriors[key.discourse][key.sentence];
      lc += std::log(p.c);
      lm += std::log(p.m);
    }
    const double n = static_cast<double>(group.size());
    const ProbPair g = PairFromLogs(lc / n, lm / n);
    for (const SegmentKey &key : group) {
      const ProbPair p = posteriors[key.discourse][key.sentence];
      out[key.discourse][key.sentence] = ClampPair(
          PairFromLogs(std::log(p.c) + std::log(g.c), std::log(p.m) + std::log(g.m)));
    }
  }
  return out;
}

std::string GroupReportJson(const SegmentGroups &groups, const Corpus &corpus) {
  using nlohmann::json;
  json j;
  j["scope"] = GroupScopeName(groups.config.scope);
  j["threshold"] = groups.config.threshold;
  j["iterations"] = groups.config.iterations;
  j["n_groups"] = groups.groups.size();
  j["grouped_segments"] = groups.grouped_segments();
  json sizes = json::array();
  json members = json::array();
  for (const auto &group : groups.groups) {
    sizes.push_back(group.size());
    json g = json::array();
    for (const SegmentKey &key : group) {
      g.push_back({{"discourse", corpus.at(key.discourse).id},
                   {"sentence", key.sentence}});
    }
    members.push_back(std::move(g));
  }
  j["sizes"] = std::move(sizes);
  j["groups"] = std::move(members);
  return j.dump(2);
}

}  // namespace duel
