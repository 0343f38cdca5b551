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


#include "duel/records.h"

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "json.hpp"

namespace duel {

using nlohmann::json;

std::string LabelString(const std::vector<Label> &labels) {
  std::string s;
  s.reserve(labels.size());
  for (Label l : labels) s.push_back(LabelChar(l));
  return s;
}

std::vector<Label> ParseLabelString(const std::string &s) {
  std::vector<Label> labels;
  labels.reserve(s.size());
  for (char ch : s) {
    if (ch == 'C') {
      labels.push_back(Label::kC);
    } else if (ch == 'M') {
      labels.push_back(Label::kM);
    } else {
      throw InvalidArgument(std::string("bad label character '") + ch + "'");
    }
  }
  return labels;
}

std::string SerializeRecord(const SegmentRecord &r) {
  json j;
  j["id"] = r.id;
  j["labels"] = LabelString(r.labels);
  j["block"] = r.block ? json::array({r.block->i, r.block->j}) : json(nullptr);
  j["p_m"] = r.p_m;
  return j.dump();
}

SegmentRecord ParseRecord(const std::string &line, int line_no) {
  try {
    const json j = json::parse(line);
    SegmentRecord r;
    r.id = j.at("id").get<std::string>();
    r.labels = ParseLabelString(j.at("labels").get<std::string>());
    if (j.contains("block") && !j["block"].is_null()) {
      const auto b = j["block"].get<std::vector<int>>();
      if (b.size() != 2) throw ParseError("block must be [i, j]", line_no);
      r.block = Block{b[0], b[1]};
    }
    if (j.contains("p_m")) r.p_m = j["p_m"].get<std::vector<double>>();
    if (!r.p_m.empty() && r.p_m.size() != r.labels.size()) {
      throw ParseError("p_m and labels differ in length", line_no);
    }
    return r;
  } catch (const json::exception &e) {
    throw ParseError(e.what(), line_no);
  } catch (const InvalidArgument &e) {
    throw ParseError(e.what(), line_no);
  }
}

void WriteRecords(std::ostream &out, const std::vector<SegmentRecord> &records) {
  for (const SegmentRecord &r : records) out << SerializeRecord(r) << '\n';
}

std::vector<SegmentRecord> ReadRecords(std::istream &in) {
  std::vector<SegmentRecord> records;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    records.push_back(ParseRecord(line, line_no));
  }
  return records;
}

void SaveRecords(const std::string &path, const std::vector<SegmentRecord> &records) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  WriteRecords(out, records);
}

std::vector<SegmentRecord> LoadRecords(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  return ReadRecords(in);
}

HypothesisDump DumpFromRecords(const std::string &judge_id,
                               const std::vector<SegmentRecord> &records) {
  HypothesisDump dump{judge_id, {}};
  for (const SegmentRecord &r : records) {
    for (std::size_t k = 0; k < r.labels.size(); ++k) {
      const double p_m = r.p_m.empty() ? (r.labels[k] == Label::kM ? 1.0 : 0.0)
                                       : r.p_m[k];
      dump.rows.push_back(HypothesisRow{r.id, static_cast<int>(k), r.labels[k], p_m});
    }
  }
  return dump;
}

std::string PsiCsv(const PsiMatrix &psi) {
  std::ostringstream out;
  out << "i,j,log_score\n";
  char line[96];
  std::snprintf(line, sizeof line, "-1,-1,%.17g\n", psi.all_c_score);
  out << line;
  for (int i = 0; i < psi.d(); ++i) {
    for (int j = i + 1; j < psi.d(); ++j) {
      std::snprintf(line, sizeof line, "%d,%d,%.17g\n", i, j, psi.at(i, j));
      out << line;
    }
  }
  return out.str();
}

}  // namespace duel
