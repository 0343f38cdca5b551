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

// Shared vocabulary types and the error hierarchy used across the library.

#ifndef DUEL_COMMON_H_
#define DUEL_COMMON_H_

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace duel {

// The host author is C, the inserted author is M.
enum class Label { kC = 0, kM = 1 };

inline char LabelChar(Label label) { return label == Label::kC ? 'C' : 'M'; }
inline Label Other(Label label) {
  return label == Label::kC ? Label::kM : Label::kC;
}

// A value held once per class.
template <typename T>
struct ClassPair {
  T c{};
  T m{};

  T &operator[](Label label) { return label == Label::kC ? c : m; }
  const T &operator[](Label label) const {
    return label == Label::kC ? c : m;
  }
};

// Normalized class probabilities for one sentence.
struct ProbPair {
  double c = 0.5;
  double m = 0.5;

  double operator[](Label label) const { return label == Label::kC ? c : m; }
  bool operator==(const ProbPair &) const = default;
};

// Per-sentence class probabilities for a discourse.
using EmissionTable = std::vector<ProbPair>;

// Builds a normalized pair from unnormalized log scores.
inline ProbPair PairFromLogs(double log_c, double log_m) {
  const double hi = std::max(log_c, log_m);
  const double ec = std::exp(log_c - hi);
  const double em = std::exp(log_m - hi);
  const double z = ec + em;
  return ProbPair{ec / z, em / z};
}

inline ProbPair Swapped(ProbPair p) { return ProbPair{p.m, p.c}; }

// Base class for every error raised by the library. kind() is a stable
// machine-readable tag used by the CLI error JSON.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string &message)
      : std::runtime_error(message), kind_(std::move(kind)) {}
  const std::string &kind() const { return kind_; }

 private:
  std::string kind_;
};

class ParseError : public Error {
 public:
  ParseError(const std::string &message, int line)
      : Error("parse_error", "line " + std::to_string(line) + ": " + message),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

class ConstraintError : public Error {
 public:
  ConstraintError(const std::string &discourse_id, std::vector<int> indices,
                  const std::string &message)
      : Error("constraint_violation",
              "discourse " + discourse_id + ": " + message),
        discourse_id_(discourse_id),
        indices_(std::move(indices)) {}
  const std::string &discourse_id() const { return discourse_id_; }
  const std::vector<int> &indices() const { return indices_; }

 private:
  std::string discourse_id_;
  std::vector<int> indices_;
};

class AnnotationError : public Error {
 public:
  explicit AnnotationError(const std::string &message)
      : Error("missing_annotation", message) {}
};

class InvalidArgument : public Error {
 public:
  explicit InvalidArgument(const std::string &message)
      : Error("invalid_argument", message) {}
};

class AlignmentError : public Error {
 public:
  explicit AlignmentError(const std::string &message)
      : Error("alignment_error", message) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string &message) : Error("io_error", message) {}
};

}  // namespace duel

#endif  // DUEL_COMMON_H_
