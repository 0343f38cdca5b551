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

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_map>

namespace duel {

double LooProb(std::span<const std::vector<std::string>> block, std::size_t k,
               std::size_t vocab_size, double discount) {
  if (k >= block.size()) throw InvalidArgument("sentence is not in the block");
  const std::vector<std::string> &target = block[k];
  if (target.empty()) return 0.0;
  std::unordered_map<std::string, double> counts;
  double total = 0;
  for (std::size_t s = 0; s < block.size(); ++s) {
    if (s == k) continue;
    for (const std::string &u : block[s]) {
      counts[u] += 1;
      total += 1;
    }
  }
  const double uniform = 1.0 / static_cast<double>(vocab_size + 1);
  if (total <= 0) return std::log(uniform);
  double reserved = 0;
  for (const auto &[u, c] : counts) reserved += std::min(discount, c);
  double acc = 0;
  for (const std::string &u : target) {
    double c = 0;
    if (auto it = counts.find(u); it != counts.end()) c = it->second;
    acc += std::log((c - std::min(discount, c)) / total + reserved / total * uniform);
  }
  return acc / static_cast<double>(target.size());
}

UnitBags UnitBags::From(const Discourse &d, const CorpusView &view) {
  UnitBags out;
  std::unordered_map<std::string, int> ids;
  out.bags.reserve(d.sentences.size());
  for (const Sentence &s : d.sentences) {
    std::unordered_map<int, int> bag;
    int n = 0;
    for (const std::string &u : ViewTokens(s, view)) {
      auto [it, inserted] = ids.try_emplace(u, static_cast<int>(ids.size()));
      ++bag[it->second];
      ++n;
    }
    std::vector<std::pair<int, int>> sorted(bag.begin(), bag.end());
    std::sort(sorted.begin(), sorted.end());
    out.bags.push_back(std::move(sorted));
    out.lengths.push_back(n);
  }
  out.vocab_size = static_cast<int>(ids.size());
  return out;
}

namespace {

// Integer unit counts of a set of sentences.
struct BlockCounts {
  std::vector<int> count;
  int total = 0;
  int types = 0;

  explicit BlockCounts(int vocab) : count(static_cast<std::size_t>(vocab), 0) {}

  void Add(const std::vector<std::pair<int, int>> &bag, int sign) {
    for (const auto &[id, c] : bag) {
      const int before = count[id];
      count[id] += sign * c;
      total += sign * c;
      if (before == 0 && count[id] > 0) ++types;
      if (before > 0 && count[id] == 0) --types;
    }
  }
};

class LooScorer {
 public:
  LooScorer(const UnitBags &bags, double discount)
      : bags_(bags),
        discount_(discount),
        uniform_(1.0 / static_cast<double>(bags.vocab_size + 1)),
        log_uniform_(std::log(uniform_)) {}

  // Score of sentence k under `block`, which must contain it.
  double Score(const BlockCounts &block, int k) const {
    const int len = bags_.lengths[k];
    if (len == 0) return 0.0;
    const auto &bag = bags_.bags[k];
    const int total = block.total - len;
    if (total <= 0) return log_uniform_;
    int types = block.types;
    for (const auto &[id, c] : bag) {
      if (block.count[id] == c) --types;
    }
    // Integer counts: min(D, c) == D for every seen unit when D <= 1.
    const double n = static_cast<double>(total);
    const double backoff = discount_ * types / n * uniform_;
    double acc = 0;
    for (const auto &[id, c] : bag) {
      const int rest = block.count[id] - c;
      const double p = (rest > 0 ? (rest - discount_) / n : 0.0) + backoff;
      acc += c * std::log(p);
    }
    return acc / static_cast<double>(len);
  }

 private:
  const UnitBags &bags_;
  double discount_;
  double uniform_;
  double log_uniform_;
};

}  // namespace

PsiMatrix LooMatrix(const UnitBags &bags, double discount) {
  if (!(discount > 0.0 && discount <= 1.0)) {
    throw InvalidArgument("coherence discount must lie in (0, 1]");
  }
  const int d = bags.size();
  if (d == 0) throw InvalidArgument("cannot score an empty discourse");
  const LooScorer scorer(bags, discount);
  BlockCounts all(bags.vocab_size);
  for (const auto &bag : bags.bags) all.Add(bag, +1);

  PsiMatrix loo(d);
  double all_c = 0.0;
  for (int k = 0; k < d; ++k) all_c += scorer.Score(all, k);
  loo.all_c_score = all_c;

  for (int i = 0; i + 1 < d; ++i) {
    BlockCounts inside(bags.vocab_size);
    BlockCounts outside = all;
    inside.Add(bags.bags[i], +1);
    outside.Add(bags.bags[i], -1);
    for (int j = i + 1; j < d; ++j) {
      inside.Add(bags.bags[j], +1);
      outside.Add(bags.bags[j], -1);
      double acc = 0.0;
      for (int k = 0; k < d; ++k) {
        acc += scorer.Score(k >= i && k <= j ? inside : outside, k);
      }
      loo.at(i, j) = acc;
    }
  }
  return loo;
}

PsiMatrix ClampedLooMatrix(int d) {
  PsiMatrix loo(d);
  for (int i = 0; i < d; ++i) {
    for (int j = i + 1; j < d; ++j) loo.at(i, j) = 0.0;
  }
  loo.all_c_score = 0.0;
  return loo;
}

PsiMatrix CombineWithLearned(const PsiMatrix &learned, const PsiMatrix &loo,
                             double weight) {
  if (learned.d() != loo.d()) throw InvalidArgument("Psi matrices differ in size");
  const int d = learned.d();
  PsiMatrix out(d);
  for (int i = 0; i < d; ++i) {
    for (int j = i + 1; j < d; ++j) {
      out.at(i, j) = learned.at(i, j) + weight * loo.at(i, j);
    }
  }
  out.all_c_score = learned.all_c_score + weight * loo.all_c_score;
  return out;
}

CoherenceResult CoherenceSegment(const Discourse &d, const EmissionTable &learned,
                                 Variant variant, const CoherenceConfig &cfg,
                                 const PsiMatrix *loo) {
  if (learned.size() != d.sentences.size()) {
    throw AlignmentError("emissions do not cover discourse " + d.id);
  }
  const PsiMatrix psi = PsiEnumerate(learned);
  PsiMatrix own;
  if (cfg.clamp_loo) {
    own = ClampedLooMatrix(d.size());
    loo = &own;
  } else if (loo == nullptr) {
    own = LooMatrix(UnitBags::From(d, CorpusView{variant, cfg.unit}), cfg.discount);
    loo = &own;
  } else if (loo->d() != d.size()) {
    throw InvalidArgument("cached coherence matrix does not match " + d.id);
  }
  CoherenceResult result;
  result.psi = CombineWithLearned(psi, *loo, cfg.weight);
  result.segmentation = PsiArgmax(result.psi);
  return result;
}

EmissionTable PsiPosteriors(const PsiMatrix &psi) {
  const int d = psi.d();
  double hi = psi.all_c_score;
  for (int i = 0; i < d; ++i) {
    for (int j = i + 1; j < d; ++j) hi = std::max(hi, psi.at(i, j));
  }
  double z = std::exp(psi.all_c_score - hi);
  std::vector<double> mass(static_cast<std::size_t>(d), 0.0);
  std::vector<double> suffix(static_cast<std::size_t>(d) + 1);
  for (int i = 0; i + 1 < d; ++i) {
    // suffix[j] = total weight of cells (i, j') with j' >= j.
    suffix[d] = 0.0;
    for (int j = d - 1; j > i; --j) {
      const double w = std::exp(psi.at(i, j) - hi);
      suffix[j] = suffix[j + 1] + w;
    }
    z += suffix[i + 1];
    for (int k = i; k < d; ++k) mass[k] += suffix[std::max(k, i + 1)];
  }
  EmissionTable out;
  out.reserve(mass.size());
  for (int k = 0; k < d; ++k) {
    const double pm = mass[k] / z;
    out.push_back(ClampPair(ProbPair{1.0 - pm, pm}));
  }
  return out;
}

}  // namespace duel
