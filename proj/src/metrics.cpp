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

#include "vqaug/metrics.hpp"

#include <cstdio>
#include <fstream>
#include <istream>
#include <sstream>
#include <unordered_set>

#include <json.hpp>

#include "vqaug/error.hpp"

namespace vqaug {

namespace {

UnitString Units(std::string_view text, CaseMode mode) {
  return FoldUnits(NormalizeToUnits(text), mode);
}

std::vector<UnitString> Tokens(std::span<const CharUnit> units) {
  std::vector<UnitString> tokens;
  UnitString cur;
  for (CharUnit c : units) {
    if (IsWhitespace(c)) {
      if (!cur.empty()) tokens.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) tokens.push_back(std::move(cur));
  return tokens;
}

const std::string* Lookup(const PredictionSet& preds, const std::string& id) {
  const auto it = preds.find(id);
  return it == preds.end() ? nullptr : &it->second;
}

double Percent(std::size_t num, std::size_t den) {
  return den == 0 ? 0.0 : 100.0 * static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

std::size_t UnitDistance(std::string_view a, std::string_view b, CaseMode mode) {
  return Levenshtein(Units(a, mode), Units(b, mode));
}

PredictionSet ParsePredictions(std::istream& in) {
  PredictionSet preds;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    const auto tab = line.find('\t');
    std::string id = line.substr(0, tab);
    std::string pred = tab == std::string::npos ? std::string() : line.substr(tab + 1);
    if (id.empty()) throw Error(ErrorCode::kMalformedRow, "empty id", line_no);
    try {
      NormalizeToUnits(pred);
    } catch (const Error&) {
      throw Error(ErrorCode::kMalformedRow, "prediction is not valid UTF-8", line_no);
    }
    if (!preds.emplace(id, std::move(pred)).second) {
      throw Error(ErrorCode::kDuplicateId, "duplicate prediction id '" + id + "'",
                  line_no);
    }
  }
  if (in.bad()) throw Error(ErrorCode::kIoFailure, "read error");
  return preds;
}

PredictionSet ParsePredictions(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoFailure, "cannot open " + path.string());
  return ParsePredictions(in);
}

RateResult Cer(const PredictionSet& preds, std::span<const DatasetSample> refs,
               CaseMode mode) {
  if (refs.empty()) throw Error(ErrorCode::kEmptyReferenceSet, "no references");
  RateResult r;
  for (const auto& ref : refs) {
    const std::string* pred = Lookup(preds, ref.id);
    if (!pred) ++r.missing;
    const UnitString ref_units = FoldUnits(ref.transcription.units(), mode);
    r.errors += Levenshtein(Units(pred ? *pred : std::string_view(), mode), ref_units);
    r.reference += ref_units.size();
  }
  r.pct = Percent(r.errors, r.reference);
  return r;
}

RateResult Wer(const PredictionSet& preds, std::span<const DatasetSample> refs,
               CaseMode mode, WerMode wer_mode) {
  if (refs.empty()) throw Error(ErrorCode::kEmptyReferenceSet, "no references");
  RateResult r;
  for (const auto& ref : refs) {
    const std::string* pred = Lookup(preds, ref.id);
    if (!pred) ++r.missing;
    const UnitString ref_units = FoldUnits(ref.transcription.units(), mode);
    const UnitString pred_units = Units(pred ? *pred : std::string_view(), mode);
    if (wer_mode == WerMode::kExactMatch) {
      r.errors += pred_units == ref_units ? 0 : 1;
      r.reference += 1;
    } else {
      const auto ref_tokens = Tokens(ref_units);
      r.errors += Levenshtein(Tokens(pred_units), ref_tokens);
      r.reference += ref_tokens.size();
    }
  }
  r.pct = Percent(r.errors, r.reference);
  return r;
}

QaScore ScoreQa(const AugmentedFile& file, const PredictionSet& preds, CaseMode mode) {
  QaScore score;
  bool any_overlap = false;
  for (const auto& s : file.samples) {
    ++score.records;
    const std::string* pred = Lookup(preds, s.id);
    if (pred) {
      any_overlap = true;
    } else {
      ++score.missing;
    }
    const std::string_view text = pred ? std::string_view(*pred) : std::string_view();
    for (const auto& pair : s.qa) {
      const auto answer = AnswerFromText(pair.spec, text, mode);
      const bool right = answer && AnswersMatch(pair.answer, *answer, mode);
      Tally& t = score.per_category[static_cast<std::size_t>(CategoryOf(pair.spec))];
      ++t.total;
      ++score.overall.total;
      if (right) {
        ++t.correct;
        ++score.overall.correct;
      }
    }
  }
  if (!any_overlap) {
    throw Error(ErrorCode::kNoOverlap, "no prediction id matches the augmented file");
  }
  return score;
}

EvalReport Evaluate(const AugmentedFile& file, const PredictionSet& preds,
                    bool case_fold, WerMode wer_mode) {
  const CaseMode mode = case_fold ? CaseMode::kFold : CaseMode::kSensitive;
  std::vector<DatasetSample> refs;
  std::unordered_set<std::string> seen;
  for (const auto& s : file.samples) {
    if (seen.insert(s.id).second) {
      refs.push_back({s.id, s.image_path, Word::Make(s.transcription)});
    }
  }
  EvalReport report;
  report.case_fold = case_fold;
  report.wer_mode = wer_mode;
  report.cer = Cer(preds, refs, mode);
  report.wer = Wer(preds, refs, mode, wer_mode);
  report.qa = ScoreQa(file, preds, mode);
  report.evaluated = refs.size();
  for (const auto& [id, _] : preds) {
    if (!seen.contains(id)) ++report.unmatched;
  }
  return report;
}

namespace {

std::string Fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

std::string_view WerModeName(WerMode m) {
  return m == WerMode::kExactMatch ? "exact-match" : "token";
}

}  // namespace

std::string FormatReportText(const EvalReport& r) {
  std::ostringstream out;
  out << "normalization: NFC, case_fold=" << (r.case_fold ? "true" : "false")
      << ", wer=" << WerModeName(r.wer_mode) << ", cer=micro-average\n";
  out << "samples evaluated: " << r.evaluated << " (missing predictions: "
      << r.cer.missing << ", unmatched predictions: " << r.unmatched << ")\n";
  out << "CER: " << Fixed(r.cer.pct, 2) << "% (" << r.cer.errors << "/"
      << r.cer.reference << ")\n";
  out << "WER: " << Fixed(r.wer.pct, 2) << "% (" << r.wer.errors << "/"
      << r.wer.reference << ")\n";
  out << "QA accuracy by category:\n";
  for (std::size_t c = 0; c < r.qa.per_category.size(); ++c) {
    const Tally& t = r.qa.per_category[c];
    out << "  " << c << " " << CategoryName(static_cast<Category>(c)) << ": ";
    if (const auto acc = t.accuracy()) {
      out << Fixed(*acc, 4) << " (" << t.correct << "/" << t.total << ")\n";
    } else {
      out << "n/a (0 questions)\n";
    }
  }
  out << "  overall: "
      << (r.qa.overall.accuracy() ? Fixed(*r.qa.overall.accuracy(), 4) : "n/a")
      << " (" << r.qa.overall.correct << "/" << r.qa.overall.total << ")\n";
  return out.str();
}

std::string FormatReportJson(const EvalReport& r) {
  nlohmann::ordered_json j;
  j["case_fold"] = r.case_fold;
  j["normalization"] = "NFC";
  j["wer_mode"] = WerModeName(r.wer_mode);
  j["evaluated"] = r.evaluated;
  j["missing"] = r.cer.missing;
  j["unmatched"] = r.unmatched;
  j["cer_pct"] = r.cer.pct;
  j["wer_pct"] = r.wer.pct;
  nlohmann::ordered_json qa = nlohmann::ordered_json::object();
  for (std::size_t c = 0; c < r.qa.per_category.size(); ++c) {
    const Tally& t = r.qa.per_category[c];
    nlohmann::ordered_json e;
    e["correct"] = t.correct;
    e["total"] = t.total;
    if (const auto acc = t.accuracy()) {
      e["accuracy"] = *acc;
    } else {
      e["accuracy"] = nullptr;
    }
    qa[std::to_string(c)] = std::move(e);
  }
  j["qa_accuracy"] = std::move(qa);
  if (const auto acc = r.qa.overall.accuracy()) {
    j["qa_overall"] = *acc;
  } else {
    j["qa_overall"] = nullptr;
  }
  return j.dump();
}

}  // namespace vqaug
