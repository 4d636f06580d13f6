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

#include "vqaug/taxonomy.hpp"

#include <unicode/utf8.h>

#include <algorithm>
#include <charconv>

#include "vqaug/error.hpp"
#include "vqaug/sampler.hpp"

namespace vqaug {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

constexpr std::string_view kBaseOcrText = "What is this word?";
constexpr std::string_view kLengthText = "What is the total number of characters?";
constexpr std::string_view kRepetitionText = "Is there any repeated character?";

// Templates with one character slot: prefix + c + suffix.
struct CharTemplate {
  std::string_view prefix;
  std::string_view suffix;
};
constexpr CharTemplate kExistenceTpl{"Is the character '", "' in this word?"};
constexpr CharTemplate kFrequencyTpl{"How many times does '", "' appear?"};
constexpr CharTemplate kStartTpl{"Does this word start with '", "'?"};
constexpr CharTemplate kEndTpl{"Does this word end with '", "'?"};
constexpr std::string_view kPositionPrefix = "What is the character at position ";
constexpr std::string_view kPositionSuffix = "?";
constexpr std::string_view kRelationPrefix = "Does '";
constexpr std::string_view kRelationMiddle = "' come before '";
constexpr std::string_view kRelationSuffix = "' in this word?";

std::string Fill(const CharTemplate& tpl, CharUnit c) {
  std::string out(tpl.prefix);
  out += ToUtf8(c);
  out += tpl.suffix;
  return out;
}

// Decodes exactly one scalar from the front of `text`, without
// normalization, and advances past it.
std::optional<CharUnit> TakeUnit(std::string_view& text) {
  if (text.empty()) return std::nullopt;
  int32_t i = 0;
  UChar32 c = 0;
  const auto* bytes = reinterpret_cast<const uint8_t*>(text.data());
  const auto len = static_cast<int32_t>(std::min<std::size_t>(text.size(), 4));
  U8_NEXT(bytes, i, len, c);
  if (c < 0) return std::nullopt;
  text.remove_prefix(static_cast<std::size_t>(i));
  return static_cast<CharUnit>(c);
}

bool TakeLiteral(std::string_view& text, std::string_view literal) {
  if (!text.starts_with(literal)) return false;
  text.remove_prefix(literal.size());
  return true;
}

std::optional<CharUnit> ParseCharTemplate(const CharTemplate& tpl,
                                          std::string_view text) {
  if (!TakeLiteral(text, tpl.prefix)) return std::nullopt;
  const auto c = TakeUnit(text);
  if (!c || text != tpl.suffix) return std::nullopt;
  return c;
}

Answer Binary(bool yes) { return {AnswerKind::kBinary, yes ? "Yes" : "No"}; }
Answer Numerical(std::size_t n) {
  return {AnswerKind::kNumerical, std::to_string(n)};
}

Answer AnswerOver(const QuestionSpec& spec, std::span<const CharUnit> units,
                  std::string_view raw, CaseMode mode) {
  return std::visit(
      Overloaded{
          [&](const question::BaseOcr&) {
            return Answer{AnswerKind::kText, std::string(raw)};
          },
          [&](const question::Existence& q) {
            return Binary(Frequency(units, q.c, mode) >= 1);
          },
          [&](const question::Frequency& q) {
            return Numerical(Frequency(units, q.c, mode));
          },
          [&](const question::Position& q) {
            return Answer{AnswerKind::kCharacter, ToUtf8(CharAt(units, q.pos))};
          },
          [&](const question::Relation& q) {
            if (SameUnit(q.before, q.after, mode)) {
              throw Error(ErrorCode::kInvalidSpec,
                          "relation needs two distinct characters");
            }
            const auto x = FirstIndex(units, q.before, mode);
            const auto y = FirstIndex(units, q.after, mode);
            if (!x || !y) {
              throw Error(ErrorCode::kCharacterNotInWord,
                          "relation character '" +
                              ToUtf8(x ? q.after : q.before) +
                              "' does not occur in the word");
            }
            return Binary(*x < *y);
          },
          [&](const question::Length&) { return Numerical(units.size()); },
          [&](const question::Repetition&) {
            return Binary(HasRepeat(units, mode));
          },
          [&](const question::Start& q) {
            return Binary(SameUnit(CharAt(units, 1), q.c, mode));
          },
          [&](const question::End& q) {
            return Binary(SameUnit(CharAt(units, units.size()), q.c, mode));
          },
      },
      spec);
}

std::size_t IndexFor(double u, std::size_t n) {
  return std::min(static_cast<std::size_t>(u * static_cast<double>(n)), n - 1);
}

bool Covered(std::span<const CharUnit> pool, CharUnit c, CaseMode mode) {
  return std::any_of(pool.begin(), pool.end(),
                     [&](CharUnit p) { return SameUnit(p, c, mode); });
}

}  // namespace

Subcategory SubcategoryOf(const QuestionSpec& spec) {
  return static_cast<Subcategory>(spec.index());
}

Category CategoryOf(Subcategory sub) {
  switch (sub) {
    case Subcategory::kBaseOcr: return Category::kRecognition;
    case Subcategory::kExistence:
    case Subcategory::kFrequency: return Category::kPresence;
    case Subcategory::kPosition:
    case Subcategory::kRelation: return Category::kPositional;
    case Subcategory::kLength:
    case Subcategory::kRepetition: return Category::kStructural;
    case Subcategory::kStart:
    case Subcategory::kEnd: return Category::kBoundary;
  }
  return Category::kRecognition;
}

std::array<Subcategory, 2> SubcategoriesOf(Category cat) {
  switch (cat) {
    case Category::kRecognition: return {Subcategory::kBaseOcr, Subcategory::kBaseOcr};
    case Category::kPresence: return {Subcategory::kExistence, Subcategory::kFrequency};
    case Category::kPositional: return {Subcategory::kPosition, Subcategory::kRelation};
    case Category::kStructural: return {Subcategory::kLength, Subcategory::kRepetition};
    case Category::kBoundary: return {Subcategory::kStart, Subcategory::kEnd};
  }
  return {Subcategory::kBaseOcr, Subcategory::kBaseOcr};
}

AnswerKind AnswerKindOf(Subcategory sub) {
  switch (sub) {
    case Subcategory::kBaseOcr: return AnswerKind::kText;
    case Subcategory::kFrequency:
    case Subcategory::kLength: return AnswerKind::kNumerical;
    case Subcategory::kPosition: return AnswerKind::kCharacter;
    default: return AnswerKind::kBinary;
  }
}

namespace {
constexpr std::array<std::string_view, 9> kSubcategoryNames = {
    "base_ocr", "existence",  "frequency", "position", "relation",
    "length",   "repetition", "start",     "end"};
constexpr std::array<std::string_view, 4> kAnswerKindNames = {
    "text", "binary", "numerical", "character"};
constexpr std::array<std::string_view, 5> kCategoryNames = {
    "Recognition", "Presence", "Positional", "Structural", "Boundary"};
}  // namespace

std::string_view SubcategoryName(Subcategory sub) {
  return kSubcategoryNames[static_cast<std::size_t>(sub)];
}

std::optional<Subcategory> ParseSubcategory(std::string_view name) {
  const auto it = std::find(kSubcategoryNames.begin(), kSubcategoryNames.end(), name);
  if (it == kSubcategoryNames.end()) return std::nullopt;
  return static_cast<Subcategory>(it - kSubcategoryNames.begin());
}

std::string_view CategoryName(Category cat) {
  return kCategoryNames[static_cast<std::size_t>(cat)];
}

std::string_view AnswerKindName(AnswerKind kind) {
  return kAnswerKindNames[static_cast<std::size_t>(kind)];
}

std::optional<AnswerKind> ParseAnswerKind(std::string_view name) {
  const auto it = std::find(kAnswerKindNames.begin(), kAnswerKindNames.end(), name);
  if (it == kAnswerKindNames.end()) return std::nullopt;
  return static_cast<AnswerKind>(it - kAnswerKindNames.begin());
}

std::string RenderQuestion(const QuestionSpec& spec) {
  return std::visit(
      Overloaded{
          [](const question::BaseOcr&) { return std::string(kBaseOcrText); },
          [](const question::Existence& q) { return Fill(kExistenceTpl, q.c); },
          [](const question::Frequency& q) { return Fill(kFrequencyTpl, q.c); },
          [](const question::Position& q) {
            return std::string(kPositionPrefix) + std::to_string(q.pos) +
                   std::string(kPositionSuffix);
          },
          [](const question::Relation& q) {
            return std::string(kRelationPrefix) + ToUtf8(q.before) +
                   std::string(kRelationMiddle) + ToUtf8(q.after) +
                   std::string(kRelationSuffix);
          },
          [](const question::Length&) { return std::string(kLengthText); },
          [](const question::Repetition&) { return std::string(kRepetitionText); },
          [](const question::Start& q) { return Fill(kStartTpl, q.c); },
          [](const question::End& q) { return Fill(kEndTpl, q.c); },
      },
      spec);
}

std::optional<QuestionSpec> ParseQuestion(Subcategory sub, std::string_view text) {
  switch (sub) {
    case Subcategory::kBaseOcr:
      if (text == kBaseOcrText) return question::BaseOcr{};
      return std::nullopt;
    case Subcategory::kLength:
      if (text == kLengthText) return question::Length{};
      return std::nullopt;
    case Subcategory::kRepetition:
      if (text == kRepetitionText) return question::Repetition{};
      return std::nullopt;
    case Subcategory::kExistence:
      if (auto c = ParseCharTemplate(kExistenceTpl, text)) return question::Existence{*c};
      return std::nullopt;
    case Subcategory::kFrequency:
      if (auto c = ParseCharTemplate(kFrequencyTpl, text)) return question::Frequency{*c};
      return std::nullopt;
    case Subcategory::kStart:
      if (auto c = ParseCharTemplate(kStartTpl, text)) return question::Start{*c};
      return std::nullopt;
    case Subcategory::kEnd:
      if (auto c = ParseCharTemplate(kEndTpl, text)) return question::End{*c};
      return std::nullopt;
    case Subcategory::kPosition: {
      if (!TakeLiteral(text, kPositionPrefix) || !text.ends_with(kPositionSuffix)) {
        return std::nullopt;
      }
      text.remove_suffix(kPositionSuffix.size());
      if (text.empty() || text.front() == '0') return std::nullopt;
      std::size_t pos = 0;
      const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), pos);
      if (ec != std::errc() || ptr != text.data() + text.size()) return std::nullopt;
      return question::Position{pos};
    }
    case Subcategory::kRelation: {
      if (!TakeLiteral(text, kRelationPrefix)) return std::nullopt;
      const auto x = TakeUnit(text);
      if (!x || !TakeLiteral(text, kRelationMiddle)) return std::nullopt;
      const auto y = TakeUnit(text);
      if (!y || text != kRelationSuffix || *x == *y) return std::nullopt;
      return question::Relation{*x, *y};
    }
  }
  return std::nullopt;
}

Answer OracleAnswer(const QuestionSpec& spec, const Word& w, CaseMode mode) {
  return AnswerOver(spec, w.units(), w.raw(), mode);
}

std::optional<Answer> AnswerFromText(const QuestionSpec& spec,
                                     std::string_view text, CaseMode mode) {
  try {
    const UnitString units = NormalizeToUnits(text);
    return AnswerOver(spec, units, text, mode);
  } catch (const Error&) {
    return std::nullopt;
  }
}

bool AnswersMatch(const Answer& expected, const Answer& actual, CaseMode mode) {
  if (expected.kind != actual.kind) return false;
  if (expected.kind == AnswerKind::kBinary ||
      expected.kind == AnswerKind::kNumerical) {
    return expected.value == actual.value;
  }
  try {
    return FoldUnits(NormalizeToUnits(expected.value), mode) ==
           FoldUnits(NormalizeToUnits(actual.value), mode);
  } catch (const Error&) {
    return expected.value == actual.value;
  }
}

QaPair MakePair(const QuestionSpec& spec, const Word& w, CaseMode mode) {
  return QaPair{spec, RenderQuestion(spec), OracleAnswer(spec, w, mode)};
}

QaPair GenerateRecognitionPair(const Word& w) {
  return MakePair(question::BaseOcr{}, w);
}

CategoryPairs GenerateCategoryPairs(const Word& w, Category cat,
                                    const Charset& charset, RandomSource& rng,
                                    const GenerationPolicy& policy) {
  if (cat == Category::kRecognition) {
    throw Error(ErrorCode::kInvalidSpec,
                "recognition is not an attribute category");
  }
  const CaseMode mode = policy.case_mode;
  const UnitString present = DistinctUnits(w.units(), mode);
  if (present.empty()) {
    throw Error(ErrorCode::kDegenerateWord, "word has no characters");
  }
  for (CharUnit c : present) {
    if (!Covered(charset.members(), c, mode)) {
      throw Error(ErrorCode::kInvalidConfig,
                  "charset does not contain '" + ToUtf8(c) + "' from word '" +
                      w.raw() + "'");
    }
  }
  UnitString absent;
  for (CharUnit c : charset.members()) {
    if (!Covered(present, c, mode)) absent.push_back(c);
  }

  // Half the time a character from `yes_pool`, otherwise from `no_pool`
  // (falling back to `yes_pool` when it is empty).
  auto coin_pick = [](double branch, double pick, std::span<const CharUnit> yes_pool,
                      std::span<const CharUnit> no_pool) {
    if (branch >= 0.5 && !no_pool.empty()) {
      return no_pool[IndexFor(pick, no_pool.size())];
    }
    return yes_pool[IndexFor(pick, yes_pool.size())];
  };

  CategoryPairs out;
  const auto subs = SubcategoriesOf(cat);
  for (std::size_t slot = 0; slot < subs.size(); ++slot) {
    const double u0 = rng.Uniform();
    const double u1 = rng.Uniform();
    QuestionSpec spec;
    switch (subs[slot]) {
      case Subcategory::kExistence:
        spec = question::Existence{coin_pick(u0, u1, present, absent)};
        break;
      case Subcategory::kFrequency:
        spec = question::Frequency{
            policy.frequency_absent ? coin_pick(u0, u1, present, absent)
                                    : present[IndexFor(u1, present.size())]};
        break;
      case Subcategory::kPosition:
        spec = question::Position{IndexFor(u0, w.length()) + 1};
        break;
      case Subcategory::kRelation:
        if (present.size() < 2) {
          spec = question::Position{IndexFor(u0, w.length()) + 1};
          out.substitution =
              Substitution{slot, Subcategory::kRelation, Subcategory::kPosition};
        } else {
          const std::size_t i = IndexFor(u0, present.size());
          std::size_t j = IndexFor(u1, present.size() - 1);
          if (j >= i) ++j;
          spec = question::Relation{present[i], present[j]};
        }
        break;
      case Subcategory::kLength:
        spec = question::Length{};
        break;
      case Subcategory::kRepetition:
        spec = question::Repetition{};
        break;
      case Subcategory::kStart:
      case Subcategory::kEnd: {
        const CharUnit boundary =
            subs[slot] == Subcategory::kStart ? w.units().front() : w.units().back();
        UnitString others;
        for (CharUnit c : charset.members()) {
          if (!SameUnit(c, boundary, mode)) others.push_back(c);
        }
        const CharUnit truth[] = {boundary};
        const CharUnit c = coin_pick(u0, u1, truth, others);
        if (subs[slot] == Subcategory::kStart) {
          spec = question::Start{c};
        } else {
          spec = question::End{c};
        }
        break;
      }
      case Subcategory::kBaseOcr:
        throw Error(ErrorCode::kInvalidSpec, "unexpected base OCR slot");
    }
    out.pairs[slot] = MakePair(spec, w, mode);
  }
  return out;
}

}  // namespace vqaug
