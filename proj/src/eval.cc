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


#include "duel/eval.h"

#include <cstdio>
#include <sstream>

#include "duel/segmenter.h"
#include "json.hpp"

namespace duel {

ExtractionCounts &ExtractionCounts::operator+=(const ExtractionCounts &o) {
  correct_extracted += o.correct_extracted;
  total_extracted += o.total_extracted;
  total_pertinent += o.total_pertinent;
  return *this;
}

Metrics MetricsFromCounts(const ExtractionCounts &c) {
  Metrics m;
  const double correct = static_cast<double>(c.correct_extracted);
  const double extracted = static_cast<double>(c.total_extracted);
  const double pertinent = static_cast<double>(c.total_pertinent);
  if (extracted + pertinent == 0) return m;
  m.precision = extracted > 0 ? correct / extracted : 1.0;
  m.recall = pertinent > 0 ? correct / pertinent : 1.0;
  m.fscore = 2.0 * correct / (extracted + pertinent);
  return m;
}

double FscoreBeta(double precision, double recall, double beta) {
  const double b2 = beta * beta;
  const double denom = b2 * precision + recall;
  if (denom == 0) return 0.0;
  return (b2 + 1.0) * precision * recall / denom;
}

ExtractionCounts AllMCounts(std::int64_t total, std::int64_t pertinent) {
  return ExtractionCounts{pertinent, total, pertinent};
}

ExtractionCounts CountExtraction(const std::vector<Label> &pred,
                                 const std::vector<Label> &ref) {
  if (pred.size() != ref.size()) {
    throw InvalidArgument("prediction and reference lengths differ");
  }
  ExtractionCounts c;
  for (std::size_t k = 0; k < pred.size(); ++k) {
    const bool p = pred[k] == Label::kM;
    const bool r = ref[k] == Label::kM;
    c.total_extracted += p;
    c.total_pertinent += r;
    c.correct_extracted += p && r;
  }
  return c;
}

const char *ErrorCategoryName(ErrorCategory c) {
  switch (c) {
    case ErrorCategory::kCFrontierInverted: return "C_frontier_inverted";
    case ErrorCategory::kCInBlocks: return "C_in_blocks";
    case ErrorCategory::kCBetweenBlocks: return "C_between_blocks";
    case ErrorCategory::kMFrontierInverted: return "M_frontier_inverted";
    case ErrorCategory::kMInBlocks: return "M_in_blocks";
    case ErrorCategory::kMInsertedInPureC: return "M_inserted_in_pure_C";
  }
  return "?";
}

std::int64_t ErrorTaxonomy::total() const {
  std::int64_t t = 0;
  for (std::int64_t c : count) t += c;
  return t;
}

double ErrorTaxonomy::mean_length(ErrorCategory c) const {
  const auto i = static_cast<std::size_t>(c);
  return count[i] == 0 ? 0.0
                       : static_cast<double>(tokens[i]) / static_cast<double>(count[i]);
}

ErrorTaxonomy &ErrorTaxonomy::operator+=(const ErrorTaxonomy &o) {
  for (std::size_t i = 0; i < kNumErrorCategories; ++i) {
    count[i] += o.count[i];
    tokens[i] += o.tokens[i];
  }
  return *this;
}

ErrorTaxonomy ClassifyErrors(const std::vector<Label> &pred,
                             const std::vector<Label> &ref,
                             const std::vector<int> &token_lengths) {
  if (pred.size() != ref.size()) {
    throw InvalidArgument("prediction and reference lengths differ");
  }
  if (!token_lengths.empty() && token_lengths.size() != ref.size()) {
    throw InvalidArgument("token lengths do not cover the discourse");
  }
  const std::optional<Block> block = BlockFromLabels(ref);
  const int d = static_cast<int>(ref.size());
  ErrorTaxonomy tax;
  auto add = [&](int k, ErrorCategory c) {
    const auto i = static_cast<std::size_t>(c);
    tax.count[i] += 1;
    if (!token_lengths.empty()) tax.tokens[i] += token_lengths[k];
  };

  int k = 0;
  while (k < d) {
    if (pred[k] == ref[k]) {
      ++k;
      continue;
    }
    // Maximal run of the same error type.
    const Label wrong = pred[k];
    int end = k;
    while (end + 1 < d && pred[end + 1] != ref[end + 1] && pred[end + 1] == wrong) {
      ++end;
    }
    const bool single = end == k;
    for (int s = k; s <= end; ++s) {
      ErrorCategory c;
      if (wrong == Label::kC) {
        if (!single) {
          c = ErrorCategory::kCInBlocks;
        } else if (block && (s == block->i || s == block->j)) {
          c = ErrorCategory::kCFrontierInverted;
        } else {
          c = ErrorCategory::kCBetweenBlocks;
        }
      } else if (!block) {
        c = ErrorCategory::kMInsertedInPureC;
      } else if (single && (s == block->i - 1 || s == block->j + 1)) {
        c = ErrorCategory::kMFrontierInverted;
      } else {
        c = ErrorCategory::kMInBlocks;
      }
      add(s, c);
    }
    k = end + 1;
  }
  return tax;
}

EvalReport Evaluate(const Corpus &reference,
                    const std::vector<std::vector<Label>> &predictions) {
  if (reference.size() != predictions.size()) {
    throw AlignmentError("one prediction per discourse is required");
  }
  EvalReport r;
  for (std::size_t i = 0; i < reference.size(); ++i) {
    const Discourse &d = reference[i];
    const std::vector<Label> ref = d.reference_labels();
    if (predictions[i].size() != ref.size()) {
      throw AlignmentError("prediction for " + d.id + " has the wrong length");
    }
    std::vector<int> lengths;
    lengths.reserve(d.sentences.size());
    for (const Sentence &s : d.sentences) {
      lengths.push_back(static_cast<int>(s.tokens.size()));
    }
    r.counts += CountExtraction(predictions[i], ref);
    r.taxonomy += ClassifyErrors(predictions[i], ref, lengths);
    r.sentences += d.size();
  }
  r.metrics = MetricsFromCounts(r.counts);
  return r;
}

std::string ReportJson(const EvalReport &r) {
  using nlohmann::json;
  json tax = json::object();
  for (ErrorCategory c : kAllErrorCategories) {
    tax[ErrorCategoryName(c)] = {{"count", r.taxonomy[c]},
                                 {"mean_tokens", r.taxonomy.mean_length(c)}};
  }
  json j = {
      {"sentences", r.sentences},
      {"correct_extracted", r.counts.correct_extracted},
      {"total_extracted", r.counts.total_extracted},
      {"total_pertinent", r.counts.total_pertinent},
      {"precision", r.metrics.precision},
      {"recall", r.metrics.recall},
      {"fscore", r.metrics.fscore},
      {"errors", r.taxonomy.total()},
      {"taxonomy", tax},
  };
  return j.dump(2);
}

std::string ReportTable(const EvalReport &r) {
  std::ostringstream out;
  char line[128];
  std::snprintf(line, sizeof line, "%-24s %10s\n", "metric", "value");
  out << line;
  std::snprintf(line, sizeof line, "%-24s %10.4f\n", "fscore", r.metrics.fscore);
  out << line;
  std::snprintf(line, sizeof line, "%-24s %10.4f\n", "precision", r.metrics.precision);
  out << line;
  std::snprintf(line, sizeof line, "%-24s %10.4f\n", "recall", r.metrics.recall);
  out << line;
  std::snprintf(line, sizeof line, "%-24s %10lld\n", "sentences",
                static_cast<long long>(r.sentences));
  out << line;
  std::snprintf(line, sizeof line, "%-24s %10lld\n", "errors",
                static_cast<long long>(r.taxonomy.total()));
  out << line;
  std::snprintf(line, sizeof line, "\n%-24s %10s %12s\n", "category", "count",
                "mean_tokens");
  out << line;
  for (ErrorCategory c : kAllErrorCategories) {
    std::snprintf(line, sizeof line, "%-24s %10lld %12.2f\n", ErrorCategoryName(c),
                  static_cast<long long>(r.taxonomy[c]), r.taxonomy.mean_length(c));
    out << line;
  }
  return out.str();
}

std::string CurveCsv(const std::vector<CurvePoint> &curve) {
  std::ostringstream out;
  out << "iteration,fscore,precision,recall\n";
  char line[128];
  for (const CurvePoint &p : curve) {
    std::snprintf(line, sizeof line, "%d,%.6f,%.6f,%.6f\n", p.iteration,
                  p.metrics.fscore, p.metrics.precision, p.metrics.recall);
    out << line;
  }
  return out.str();
}

}  // namespace duel
