// Copyright 2026 The vqaug Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// CER / WER and question-answer consistency scoring.
//
// Conventions: comparisons use NFC units, case-folded when the run sets
// case_fold. CER is micro-averaged over the corpus. Missing predictions
// are scored as empty strings and counted.

#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "vqaug/dataset_io.hpp"
#include "vqaug/taxonomy.hpp"
#include "vqaug/text.hpp"

namespace vqaug {

// Unit-cost edit distance over any two random-access sequences whose
// elements compare with ==. Two-row dynamic programme, O(|a|*|b|) time.
template <typename SeqA, typename SeqB>
std::size_t Levenshtein(const SeqA& a, const SeqB& b) {
  const std::size_t m = std::size(a);
  const std::size_t n = std::size(b);
  if (m == 0) return n;
  if (n == 0) return m;
  std::vector<std::size_t> prev(n + 1), cur(n + 1);
  std::iota(prev.begin(), prev.end(), std::size_t{0});
  auto ai = std::begin(a);
  for (std::size_t i = 1; i <= m; ++i, ++ai) {
    cur[0] = i;
    auto bj = std::begin(b);
    for (std::size_t j = 1; j <= n; ++j, ++bj) {
      const std::size_t substitute = prev[j - 1] + (*ai == *bj ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, substitute});
    }
    std::swap(prev, cur);
  }
  return prev[n];
}

// Distance between two UTF-8 strings over normalized (and optionally
// folded) character units.
std::size_t UnitDistance(std::string_view a, std::string_view b,
                         CaseMode mode = CaseMode::kSensitive);

// Sample id -> predicted transcription. Predictions may be empty.
using PredictionSet = std::map<std::string, std::string>;

// One `<id>\t<prediction>` per line; a line holding only an id is an empty
// prediction. Throws kDuplicateId / kMalformedRow / kIoFailure.
PredictionSet ParsePredictions(std::istream& in);
PredictionSet ParsePredictions(const std::filesystem::path& path);

struct RateResult {
  double pct = 0.0;
  std::size_t errors = 0;     // edit operations or mismatching samples
  std::size_t reference = 0;  // reference units, tokens or samples
  std::size_t missing = 0;    // references without a prediction
};

// 100 * sum(distance) / sum(reference length). Throws kEmptyReferenceSet.
RateResult Cer(const PredictionSet& preds, std::span<const DatasetSample> refs,
               CaseMode mode = CaseMode::kSensitive);

enum class WerMode {
  kExactMatch,  // per-sample exact match, for word-level datasets
  kToken,       // whitespace-token edit distance, for multi-word references
};

RateResult Wer(const PredictionSet& preds, std::span<const DatasetSample> refs,
               CaseMode mode = CaseMode::kSensitive,
               WerMode wer_mode = WerMode::kExactMatch);

struct Tally {
  std::size_t correct = 0;
  std::size_t total = 0;

  std::optional<double> accuracy() const {
    if (total == 0) return std::nullopt;
    return static_cast<double>(correct) / static_cast<double>(total);
  }
};

struct QaScore {
  std::array<Tally, 5> per_category{};  // indexed by Category
  Tally overall;
  std::size_t records = 0;
  std::size_t missing = 0;  // records whose id had no prediction
};

// Answers every stored question from the predicted transcription and
// compares with the stored answer. Questions the prediction cannot answer
// (position past its end, relation over an absent character) count as
// wrong. Throws kNoOverlap when no record id has a prediction.
QaScore ScoreQa(const AugmentedFile& file, const PredictionSet& preds,
                CaseMode mode = CaseMode::kSensitive);

struct EvalReport {
  RateResult cer;
  RateResult wer;
  WerMode wer_mode = WerMode::kExactMatch;
  QaScore qa;
  bool case_fold = false;
  std::size_t evaluated = 0;   // distinct reference ids
  std::size_t unmatched = 0;   // prediction ids with no reference
};

// Scores predictions against the transcriptions stored in an augmented
// file. References are the distinct ids in first-seen order.
EvalReport Evaluate(const AugmentedFile& file, const PredictionSet& preds,
                    bool case_fold, WerMode wer_mode = WerMode::kExactMatch);

std::string FormatReportText(const EvalReport& report);
std::string FormatReportJson(const EvalReport& report);

}  // namespace vqaug
