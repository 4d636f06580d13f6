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

// Character-level question taxonomy: five categories with two subcategories
// each (Recognition has one), frozen English templates, the ground-truth
// answer oracle and the per-category pair generator.

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "vqaug/text.hpp"

namespace vqaug {

class RandomSource;

// Numbering is part of the output format.
enum class Category : int {
  kRecognition = 0,
  kPresence = 1,
  kPositional = 2,
  kStructural = 3,
  kBoundary = 4,
};

inline constexpr std::array<Category, 4> kAttributeCategories = {
    Category::kPresence, Category::kPositional, Category::kStructural,
    Category::kBoundary};

enum class Subcategory {
  kBaseOcr,
  kExistence,
  kFrequency,
  kPosition,
  kRelation,
  kLength,
  kRepetition,
  kStart,
  kEnd,
};

inline constexpr std::string_view kTemplateVersion = "charqa-en/1";

// Question parameters, one alternative per subcategory, so arity is fixed
// by the type. Alternative order matches Subcategory.
namespace question {
struct BaseOcr {};
struct Existence { CharUnit c; };
struct Frequency { CharUnit c; };
struct Position { std::size_t pos; };
// "Does 'before' come before 'after' in this word?"; characters distinct.
struct Relation { CharUnit before; CharUnit after; };
struct Length {};
struct Repetition {};
struct Start { CharUnit c; };
struct End { CharUnit c; };
}  // namespace question

using QuestionSpec =
    std::variant<question::BaseOcr, question::Existence, question::Frequency,
                 question::Position, question::Relation, question::Length,
                 question::Repetition, question::Start, question::End>;

Subcategory SubcategoryOf(const QuestionSpec& spec);
Category CategoryOf(Subcategory sub);
inline Category CategoryOf(const QuestionSpec& spec) {
  return CategoryOf(SubcategoryOf(spec));
}
// The two subcategories contributed by an attribute category, in output
// order. Recognition yields {BaseOcr, BaseOcr}.
std::array<Subcategory, 2> SubcategoriesOf(Category cat);

enum class AnswerKind { kText, kBinary, kNumerical, kCharacter };

AnswerKind AnswerKindOf(Subcategory sub);

struct Answer {
  AnswerKind kind;
  std::string value;

  friend bool operator==(const Answer&, const Answer&) = default;
};

struct QaPair {
  QuestionSpec spec;
  std::string question;
  Answer answer;
};

// Stable lowercase names used in output files.
std::string_view SubcategoryName(Subcategory sub);
std::optional<Subcategory> ParseSubcategory(std::string_view name);
std::string_view CategoryName(Category cat);
std::string_view AnswerKindName(AnswerKind kind);
std::optional<AnswerKind> ParseAnswerKind(std::string_view name);

std::string RenderQuestion(const QuestionSpec& spec);

// Inverse of RenderQuestion for the given subcategory; nullopt when the text
// does not instantiate that template.
std::optional<QuestionSpec> ParseQuestion(Subcategory sub,
                                          std::string_view text);

// Answer computed from the ground truth. Throws kPositionOutOfRange for a
// Position beyond the word and kCharacterNotInWord for a Relation over an
// absent character.
Answer OracleAnswer(const QuestionSpec& spec, const Word& w,
                    CaseMode mode = CaseMode::kSensitive);

// Same semantics over an arbitrary (possibly empty) transcription, used to
// grade predictions. Returns nullopt wherever the oracle would throw.
std::optional<Answer> AnswerFromText(const QuestionSpec& spec,
                                     std::string_view text,
                                     CaseMode mode = CaseMode::kSensitive);

// Answer equality under the run's case mode. Text answers compare on their
// normalized units, Character answers on the folded unit.
bool AnswersMatch(const Answer& expected, const Answer& actual, CaseMode mode);

QaPair MakePair(const QuestionSpec& spec, const Word& w,
                CaseMode mode = CaseMode::kSensitive);

QaPair GenerateRecognitionPair(const Word& w);

struct GenerationPolicy {
  CaseMode case_mode = CaseMode::kSensitive;
  // When set, Frequency questions query an absent charset character half of
  // the time (answer "0") instead of always querying a present one.
  bool frequency_absent = false;
};

// Relation slot replaced by a second Position question because the word has
// a single distinct character.
struct Substitution {
  std::size_t pair_index;  // index into the sample's qa list
  Subcategory from;
  Subcategory to;

  friend bool operator==(const Substitution&, const Substitution&) = default;
};

struct CategoryPairs {
  std::array<QaPair, 2> pairs;
  std::optional<Substitution> substitution;  // pair_index relative to pairs
};

// Draw budget: every subcategory consumes exactly kDrawsPerSubcategory
// uniform draws from `rng`, whether or not it uses them, so one call always
// consumes 2 * kDrawsPerSubcategory draws.
inline constexpr int kDrawsPerSubcategory = 2;

// `cat` must be an attribute category and `charset` must cover w's units.
CategoryPairs GenerateCategoryPairs(const Word& w, Category cat,
                                    const Charset& charset, RandomSource& rng,
                                    const GenerationPolicy& policy = {});

}  // namespace vqaug
