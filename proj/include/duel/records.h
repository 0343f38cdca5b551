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


// On-disk records shared by the CLI commands.
//
// A segmentation dump is JSON-Lines, one discourse per line:
//
//   {"id": "d1", "labels": "CCMMC", "block": [2, 3], "p_m": [0.1, ...]}
//
// "block" is null for an all-C labeling.

#ifndef DUEL_RECORDS_H_
#define DUEL_RECORDS_H_

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "duel/common.h"
#include "duel/fusion.h"
#include "duel/segmenter.h"

namespace duel {

struct SegmentRecord {
  std::string id;
  std::vector<Label> labels;
  std::optional<Block> block;
  std::vector<double> p_m;  // may be empty
};

std::string LabelString(const std::vector<Label> &labels);
std::vector<Label> ParseLabelString(const std::string &s);

std::string SerializeRecord(const SegmentRecord &r);
SegmentRecord ParseRecord(const std::string &line, int line_no);

void WriteRecords(std::ostream &out, const std::vector<SegmentRecord> &records);
std::vector<SegmentRecord> ReadRecords(std::istream &in);
void SaveRecords(const std::string &path, const std::vector<SegmentRecord> &records);
std::vector<SegmentRecord> LoadRecords(const std::string &path);

HypothesisDump DumpFromRecords(const std::string &judge_id,
                               const std::vector<SegmentRecord> &records);

// Triangular dump "i,j,log_score". The all-C hypothesis is the row -1,-1.
std::string PsiCsv(const PsiMatrix &psi);

}  // namespace duel

#endif  // DUEL_RECORDS_H_
