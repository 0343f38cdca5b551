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

#include "duel/segmenter.h"

#include <cmath>
#include <limits>

#include "duel/kernels.h"

namespace duel {

LogEmissions LogEmissions::From(const EmissionTable &e) {
  LogEmissions out;
  out.log_c.reserve(e.size());
  out.log_m.reserve(e.size());
  for (const ProbPair &p : e) {
    out.log_c.push_back(std::log(p.c));
    out.log_m.push_back(std::log(p.m));
  }
  return out;
}

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Best partial path into one automaton state. (i, j) is the block it carries;
// j < 0 while the block is still open.
struct Cell {
  double score = kNegInf;
  int i = -1;
  int j = -1;
  bool valid = false;
};

// Score first, then the lexicographically smaller block.
bool Better(const Cell &a, const Cell &b) {
  if (!b.valid) return a.valid;
  if (!a.valid) return false;
  if (a.score != b.score) return a.score > b.score;
  if (a.i != b.i) return a.i < b.i;
  return a.j < b.j;
}

Cell Extend(const Cell &from, double arc) {
  Cell c = from;
  c.score = from.score + arc;
  return c;
}

}  // namespace

Segmentation ViterbiSegment(const EmissionTable &e, const TransitionWeights &t) {
  const int d = static_cast<int>(e.size());
  if (d == 0) throw InvalidArgument("cannot segment an empty emission table");
  const LogEmissions le = LogEmissions::From(e);

  Cell c1, m1, m2, c2;
  c1 = Cell{0.0 + t.i_c1, -1, -1, true};
  c1.score += le.log_c[0];
  m1 = Cell{0.0 + t.i_m1, 0, -1, true};
  m1.score += le.log_m[0];

  for (int k = 1; k < d; ++k) {
    const double lc = le.log_c[k];
    const double lm = le.log_m[k];

    Cell next_c1 = Extend(c1, t.c1_c1);
    Cell next_m1 = Extend(c1, t.c1_m1);
    next_m1.i = k;

    Cell next_m2 = Extend(m2, t.m2_m2);
    if (m1.valid) {
      Cell from_m1 = Extend(m1, t.m1_m2);
      if (Better(from_m1, next_m2)) next_m2 = from_m1;
    }

    Cell next_c2 = Extend(c2, t.c2_c2);
    if (m2.valid) {
      Cell from_m2 = Extend(m2, t.m2_c2);
      from_m2.j = k - 1;
      if (Better(from_m2, next_c2)) next_c2 = from_m2;
    }

    next_c1.score += lc;
    next_m1.score += lm;
    if (next_m2.valid) next_m2.score += lm;
    if (next_c2.valid) next_c2.score += lc;
    c1 = next_c1;
    m1 = next_m1;
    m2 = next_m2;
    c2 = next_c2;
  }

  Cell best_block = c2;
  if (m2.valid) {
    Cell open = m2;
    open.j = d - 1;
    if (Better(open, best_block)) best_block = open;
  }
  if (best_block.valid && best_block.score > c1.score) {
    return MakeSegmentation(d, Block{best_block.i, best_block.j},
                            best_block.score);
  }
  return MakeSegmentation(d, std::nullopt, c1.score);
}

PsiMatrix::PsiMatrix(int d)
    : d_(d),
      values_(static_cast<std::size_t>(d) * d,
              std::numeric_limits<double>::quiet_NaN()) {}

PsiMatrix PsiEnumerate(const EmissionTable &e) {
  return PsiEnumerate(LogEmissions::From(e));
}

PsiMatrix PsiEnumerate(const LogEmissions &e) {
  const int d = e.size();
  if (d == 0) throw InvalidArgument("cannot enumerate an empty emission table");
  PsiMatrix psi(d);
  double all_c = 0.0;
  for (int k = 0; k < d; ++k) all_c += e.log_c[k];
  psi.all_c_score = all_c;
  for (int i = 0; i + 1 < d; ++i) {
    kernels::PsiRowFold(e.log_c, e.log_m, static_cast<std::size_t>(i),
                        std::span<double>(psi.row(i), static_cast<std::size_t>(d)));
  }
  return psi;
}

Segmentation PsiArgmax(const PsiMatrix &psi) {
  double best = psi.all_c_score;
  std::optional<Block> block;
  for (int i = 0; i < psi.d(); ++i) {
    for (int j = i + 1; j < psi.d(); ++j) {
      const double v = psi.at(i, j);
      if (v > best) {
        best = v;
        block = Block{i, j};
      }
    }
  }
  return MakeSegmentation(psi.d(), block, best);
}

std::vector<Label> LabelsFromBlock(int d, const std::optional<Block> &block) {
  std::vector<Label> labels(static_cast<std::size_t>(d), Label::kC);
  if (block) {
    for (int k = block->i; k <= block->j; ++k) labels[k] = Label::kM;
  }
  return labels;
}

Segmentation MakeSegmentation(int d, const std::optional<Block> &block,
                              double score) {
  if (block && (block->i < 0 || block->j >= d || block->length() < 2)) {
    throw InvalidArgument("block must lie inside the discourse and span >= 2");
  }
  return Segmentation{block, LabelsFromBlock(d, block), score};
}

std::optional<Block> BlockFromLabels(const std::vector<Label> &labels) {
  int first = -1, last = -1;
  for (int k = 0; k < static_cast<int>(labels.size()); ++k) {
    if (labels[k] != Label::kM) continue;
    if (first < 0) first = k;
    if (last >= 0 && last != k - 1) return std::nullopt;
    last = k;
  }
  if (first < 0 || last - first + 1 < 2) return std::nullopt;
  return Block{first, last};
}

double LabelingLogScore(const EmissionTable &e, const std::vector<Label> &labels) {
  if (labels.size() != e.size()) throw InvalidArgument("label/emission size mismatch");
  double acc = 0.0;
  for (std::size_t k = 0; k < e.size(); ++k) {
    acc += std::log(labels[k] == Label::kM ? e[k].m : e[k].c);
  }
  return acc;
}

std::vector<Label> PerSentenceArgmax(const EmissionTable &e) {
  std::vector<Label> labels;
  labels.reserve(e.size());
  for (const ProbPair &p : e) labels.push_back(p.m > p.c ? Label::kM : Label::kC);
  return labels;
}

}  // namespace duel
