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


// Extraction metrics over the inserted class and the boundary-error
// taxonomy.
//
// Extraction means predicting M. With correct = predicted M and reference M,
//
//   precision = correct / extracted, recall = correct / pertinent,
//   F = 2 * correct / (extracted + pertinent).

#ifndef DUEL_EVAL_H_
#define DUEL_EVAL_H_

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "duel/common.h"
#include "duel/corpus.h"

namespace duel {

struct ExtractionCounts {
  std::int64_t correct_extracted = 0;
  std::int64_t total_extracted = 0;
  std::int64_t total_pertinent = 0;

  ExtractionCounts &operator+=(const ExtractionCounts &o);
};

struct Metrics {
  double precision = 1;
  double recall = 1;
  double fscore = 1;
};

// Zero conventions: nothing extracted and nothing pertinent is a perfect
// score; nothing extracted gives precision 1, recall 0; nothing pertinent
// gives recall 1.
Metrics MetricsFromCounts(const ExtractionCounts &c);

// General F(beta) from precision and recall; 0 when both are 0.
double FscoreBeta(double precision, double recall, double beta);

// Counts of an all-M prediction over `total` sentences of which
// `pertinent` are M.
ExtractionCounts AllMCounts(std::int64_t total, std::int64_t pertinent);

ExtractionCounts CountExtraction(const std::vector<Label> &pred,
                                 const std::vector<Label> &ref);

enum class ErrorCategory {
  kCFrontierInverted,
  kCInBlocks,
  kCBetweenBlocks,
  kMFrontierInverted,
  kMInBlocks,
  kMInsertedInPureC,
};
inline constexpr std::size_t kNumErrorCategories = 6;
inline constexpr std::array<ErrorCategory, kNumErrorCategories> kAllErrorCategories = {
    ErrorCategory::kCFrontierInverted, ErrorCategory::kCInBlocks,
    ErrorCategory::kCBetweenBlocks,    ErrorCategory::kMFrontierInverted,
    ErrorCategory::kMInBlocks,         ErrorCategory::kMInsertedInPureC};

const char *ErrorCategoryName(ErrorCategory c);

struct ErrorTaxonomy {
  std::array<std::int64_t, kNumErrorCategories> count{};
  std::array<std::int64_t, kNumErrorCategories> tokens{};  // summed lengths

  std::int64_t operator[](ErrorCategory c) const {
    return count[static_cast<std::size_t>(c)];
  }
  std::int64_t total() const;
  // Mean length in tokens of the sentences in a category; 0 when empty.
  double mean_length(ErrorCategory c) const;
  ErrorTaxonomy &operator+=(const ErrorTaxonomy &o);
};

// C errors are sentences predicted C against a reference M; M errors are
// predicted M against a reference C. Errors are grouped into maximal runs:
//   C: a run of two or more -> in blocks; a single error on the first or
//      last block sentence -> frontier inverted; any other single -> between
//      blocks.
//   M: any error in a discourse without a reference block -> inserted in
//      pure C; a single error right before or after the block -> frontier
//      inverted; anything else -> in blocks.
// `token_lengths` may be empty, in which case lengths count as 0.
ErrorTaxonomy ClassifyErrors(const std::vector<Label> &pred,
                             const std::vector<Label> &ref,
                             const std::vector<int> &token_lengths = {});

struct EvalReport {
  ExtractionCounts counts;
  Metrics metrics;
  ErrorTaxonomy taxonomy;
  std::int64_t sentences = 0;
};

// Scores one prediction per discourse against the corpus references.
EvalReport Evaluate(const Corpus &reference,
                    const std::vector<std::vector<Label>> &predictions);

std::string ReportJson(const EvalReport &r);
std::string ReportTable(const EvalReport &r);

struct CurvePoint {
  int iteration = 0;
  Metrics metrics;
};
// iteration,fscore,precision,recall
std::string CurveCsv(const std::vector<CurvePoint> &curve);

}  // namespace duel

#endif  // DUEL_EVAL_H_
