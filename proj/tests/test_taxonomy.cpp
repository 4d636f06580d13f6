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

#include <doctest.h>

#include <random>
#include <set>

#include "oracles.hpp"
#include "test_util.hpp"
#include "vqaug/error.hpp"
#include "vqaug/sampler.hpp"
#include "vqaug/taxonomy.hpp"

using namespace vqaug;
namespace q = vqaug::question;

namespace {

Charset AtoZ() {
  UnitString s;
  for (CharUnit c = U'A'; c <= U'Z'; ++c) s.push_back(c);
  return Charset(s, CharsetSource::kExplicit);
}

Charset CharsetOf(const std::string& ascii) {
  UnitString s(ascii.begin(), ascii.end());
  return Charset(s, CharsetSource::kExplicit);
}

ErrorCode CodeOf(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected vqaug::Error");
  return ErrorCode::kIoFailure;
}

}  // namespace

TEST_CASE("taxonomy rows for HELLO") {
  const Word hello = MakeWord("HELLO");
  struct Row {
    QuestionSpec spec;
    const char* question;
    const char* answer;
    AnswerKind kind;
    Category category;
  };
  const Row rows[] = {
      {q::BaseOcr{}, "What is this word?", "HELLO", AnswerKind::kText, Category::kRecognition},
      {q::Existence{U'L'}, "Is the character 'L' in this word?", "Yes", AnswerKind::kBinary,
       Category::kPresence},
      {q::Frequency{U'L'}, "How many times does 'L' appear?", "2", AnswerKind::kNumerical,
       Category::kPresence},
      {q::Position{2}, "What is the character at position 2?", "E", AnswerKind::kCharacter,
       Category::kPositional},
      {q::Relation{U'E', U'H'}, "Does 'E' come before 'H' in this word?", "No",
       AnswerKind::kBinary, Category::kPositional},
      {q::Length{}, "What is the total number of characters?", "5", AnswerKind::kNumerical,
       Category::kStructural},
      {q::Repetition{}, "Is there any repeated character?", "Yes", AnswerKind::kBinary,
       Category::kStructural},
      {q::Start{U'H'}, "Does this word start with 'H'?", "Yes", AnswerKind::kBinary,
       Category::kBoundary},
      {q::End{U'O'}, "Does this word end with 'O'?", "Yes", AnswerKind::kBinary,
       Category::kBoundary},
  };
  for (const auto& row : rows) {
    CAPTURE(row.question);
    CHECK(RenderQuestion(row.spec) == row.question);
    const Answer a = OracleAnswer(row.spec, hello);
    CHECK(a.value == row.answer);
    CHECK(a.kind == row.kind);
    CHECK(CategoryOf(row.spec) == row.category);
    CHECK(AnswerKindOf(SubcategoryOf(row.spec)) == row.kind);
  }
}

TEST_CASE("category numbering") {
  CHECK(static_cast<int>(Category::kRecognition) == 0);
  CHECK(static_cast<int>(Category::kPresence) == 1);
  CHECK(static_cast<int>(Category::kPositional) == 2);
  CHECK(static_cast<int>(Category::kStructural) == 3);
  CHECK(static_cast<int>(Category::kBoundary) == 4);
}

TEST_CASE("oracle edge cases") {
  CHECK(OracleAnswer(q::Length{}, MakeWord("A")) == Answer{AnswerKind::kNumerical, "1"});
  // Existence of 'Q' by direct scan of "HELLO".
  const std::string hello = "HELLO";
  const bool present = hello.find('Q') != std::string::npos;
  CHECK(OracleAnswer(q::Existence{U'Q'}, MakeWord(hello)).value == (present ? "Yes" : "No"));
  CHECK(CodeOf([] { OracleAnswer(q::Position{6}, MakeWord("HELLO")); }) ==
        ErrorCode::kPositionOutOfRange);
  CHECK(CodeOf([] { OracleAnswer(q::Relation{U'H', U'Z'}, MakeWord("HELLO")); }) ==
        ErrorCode::kCharacterNotInWord);
  CHECK(CodeOf([] { OracleAnswer(q::Relation{U'H', U'H'}, MakeWord("HELLO")); }) ==
        ErrorCode::kInvalidSpec);
  // First-occurrence semantics with repeats.
  CHECK(OracleAnswer(q::Relation{U'L', U'O'}, MakeWord("HELLO")).value == "Yes");
  CHECK(OracleAnswer(q::Relation{U'O', U'L'}, MakeWord("LOL")).value == "No");
}

TEST_CASE("recognition pair") {
  for (const char* w : {"HELLO", "A", "noua"}) {
    const QaPair p = GenerateRecognitionPair(MakeWord(w));
    CHECK(p.question == "What is this word?");
    CHECK(p.answer.value == w);
    CHECK(p.answer.kind == AnswerKind::kText);
  }
}

TEST_CASE("ParseQuestion inverts RenderQuestion") {
  std::mt19937_64 gen(3);
  const UnitString chars = U"AZaz09'?é中 ";
  for (int i = 0; i < 2000; ++i) {
    const CharUnit a = chars[gen() % chars.size()];
    CharUnit b = chars[gen() % chars.size()];
    if (b == a) b = a == U'A' ? U'B' : U'A';
    const std::size_t pos = 1 + gen() % 120;
    const QuestionSpec specs[] = {q::BaseOcr{},    q::Existence{a}, q::Frequency{a},
                                  q::Position{pos}, q::Relation{a, b}, q::Length{},
                                  q::Repetition{}, q::Start{a},     q::End{a}};
    for (const auto& spec : specs) {
      const std::string text = RenderQuestion(spec);
      const auto back = ParseQuestion(SubcategoryOf(spec), text);
      REQUIRE(back.has_value());
      CHECK(RenderQuestion(*back) == text);
      CHECK(back->index() == spec.index());
    }
  }
}

TEST_CASE("ParseQuestion rejects tampered text") {
  CHECK_FALSE(ParseQuestion(Subcategory::kPosition, "What is the character at position 02?"));
  CHECK_FALSE(ParseQuestion(Subcategory::kPosition, "What is the character at position 0?"));
  CHECK_FALSE(ParseQuestion(Subcategory::kPosition, "What is the character at position ?"));
  CHECK_FALSE(ParseQuestion(Subcategory::kExistence, "Is the character 'AB' in this word?"));
  CHECK_FALSE(ParseQuestion(Subcategory::kExistence, "Is the character '' in this word?"));
  CHECK_FALSE(ParseQuestion(Subcategory::kRelation, "Does 'A' come before 'A' in this word?"));
  CHECK_FALSE(ParseQuestion(Subcategory::kBaseOcr, "What is this word ?"));
  CHECK_FALSE(ParseQuestion(Subcategory::kFrequency, "Is the character 'A' in this word?"));
  CHECK_FALSE(ParseQuestion(Subcategory::kStart, "Does this word end with 'A'?"));
}

TEST_CASE("names round-trip") {
  for (int i = 0; i < 9; ++i) {
    const auto sub = static_cast<Subcategory>(i);
    CHECK(ParseSubcategory(SubcategoryName(sub)) == sub);
  }
  for (int i = 0; i < 4; ++i) {
    const auto kind = static_cast<AnswerKind>(i);
    CHECK(ParseAnswerKind(AnswerKindName(kind)) == kind);
  }
  CHECK_FALSE(ParseSubcategory("bogus"));
}

TEST_CASE("GenerateCategoryPairs: Presence on HELLO") {
  const Word w = MakeWord("HELLO");
  RandomSource rng(12345);
  const auto out = GenerateCategoryPairs(w, Category::kPresence, AtoZ(), rng);
  CHECK(rng.draws() == 2 * kDrawsPerSubcategory);
  CHECK(SubcategoryOf(out.pairs[0].spec) == Subcategory::kExistence);
  CHECK(SubcategoryOf(out.pairs[1].spec) == Subcategory::kFrequency);
  for (const auto& p : out.pairs) {
    CHECK(OracleAnswer(p.spec, w) == p.answer);
    CHECK(testing::AsciiAnswer(p.question, "HELLO") == p.answer.value);
  }
  // Frequency queries a present character by default.
  CHECK(std::stoul(out.pairs[1].answer.value) >= 1);
}

TEST_CASE("GenerateCategoryPairs: Structural on a single character") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    RandomSource rng(seed);
    const auto out =
        GenerateCategoryPairs(MakeWord("A"), Category::kStructural, CharsetOf("AB"), rng);
    CHECK(out.pairs[0].answer.value == "1");
    CHECK(out.pairs[1].answer.value == "No");
  }
}

TEST_CASE("GenerateCategoryPairs: Positional parameter domains on HELLO") {
  const std::set<CharUnit> hello_chars = {U'H', U'E', U'L', U'O'};
  std::set<std::size_t> positions;
  std::set<std::pair<CharUnit, CharUnit>> relations;
  for (std::uint64_t seed = 0; seed < 400; ++seed) {
    RandomSource rng(seed);
    const auto out = GenerateCategoryPairs(MakeWord("HELLO"), Category::kPositional, AtoZ(), rng);
    CHECK_FALSE(out.substitution.has_value());
    const auto& pos = std::get<q::Position>(out.pairs[0].spec);
    CHECK(pos.pos >= 1);
    CHECK(pos.pos <= 5);
    positions.insert(pos.pos);
    const auto& rel = std::get<q::Relation>(out.pairs[1].spec);
    CHECK(rel.before != rel.after);
    CHECK(hello_chars.contains(rel.before));
    CHECK(hello_chars.contains(rel.after));
    relations.insert({rel.before, rel.after});
  }
  // Every position and every ordered pair of distinct characters shows up.
  CHECK(positions.size() == 5);
  CHECK(relations.size() == 4 * 3);
}

TEST_CASE("single distinct character substitutes Relation with Position") {
  RandomSource rng(9);
  const auto out = GenerateCategoryPairs(MakeWord("AAA"), Category::kPositional, AtoZ(), rng);
  REQUIRE(out.substitution.has_value());
  CHECK(out.substitution->pair_index == 1);
  CHECK(out.substitution->from == Subcategory::kRelation);
  CHECK(out.substitution->to == Subcategory::kPosition);
  CHECK(SubcategoryOf(out.pairs[1].spec) == Subcategory::kPosition);
  CHECK(out.pairs[1].answer.value == "A");
  CHECK(rng.draws() == 2 * kDrawsPerSubcategory);
}

TEST_CASE("charset must cover the word") {
  RandomSource rng(1);
  CHECK(CodeOf([&] {
          GenerateCategoryPairs(MakeWord("HELLO"), Category::kPresence, CharsetOf("HEL"), rng);
        }) == ErrorCode::kInvalidConfig);
  CHECK(CodeOf([&] {
          GenerateCategoryPairs(MakeWord("HELLO"), Category::kRecognition, AtoZ(), rng);
        }) == ErrorCode::kInvalidSpec);
}

TEST_CASE("charset without distractors falls back to present characters") {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    RandomSource rng(seed);
    const auto presence =
        GenerateCategoryPairs(MakeWord("AB"), Category::kPresence, CharsetOf("AB"), rng);
    CHECK(presence.pairs[0].answer.value == "Yes");
    const auto boundary =
        GenerateCategoryPairs(MakeWord("A"), Category::kBoundary, CharsetOf("A"), rng);
    CHECK(boundary.pairs[0].answer.value == "Yes");
    CHECK(boundary.pairs[1].answer.value == "Yes");
  }
}

TEST_CASE("binary labels are roughly balanced") {
  std::size_t yes = 0, total = 0;
  for (std::uint64_t seed = 0; seed < 4000; ++seed) {
    RandomSource rng(seed);
    const auto out = GenerateCategoryPairs(MakeWord("WORD"), Category::kBoundary, AtoZ(), rng);
    for (const auto& p : out.pairs) {
      yes += p.answer.value == "Yes";
      ++total;
    }
  }
  const double frac = static_cast<double>(yes) / static_cast<double>(total);
  CHECK(frac > 0.47);
  CHECK(frac < 0.53);
}

TEST_CASE("frequency_absent policy allows zero counts") {
  GenerationPolicy policy;
  policy.frequency_absent = true;
  bool saw_zero = false, saw_positive = false;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    RandomSource rng(seed);
    const auto out = GenerateCategoryPairs(MakeWord("HELLO"), Category::kPresence, AtoZ(), rng, policy);
    const auto n = std::stoul(out.pairs[1].answer.value);
    (n == 0 ? saw_zero : saw_positive) = true;
  }
  CHECK(saw_zero);
  CHECK(saw_positive);
}

TEST_CASE("case folding excludes case variants from distractors") {
  GenerationPolicy policy;
  policy.case_mode = CaseMode::kFold;
  const Charset cs = CharsetOf("HEhelLo");
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    RandomSource rng(seed);
    const auto out = GenerateCategoryPairs(MakeWord("Hello"), Category::kPresence, cs, rng, policy);
    // Every charset member matches some letter of the word under folding.
    CHECK(out.pairs[0].answer.value == "Yes");
    CHECK(OracleAnswer(out.pairs[0].spec, MakeWord("Hello"), CaseMode::kFold) ==
          out.pairs[0].answer);
  }
}

TEST_CASE("generator properties over random words") {
  std::mt19937_64 gen(2024);
  for (int iter = 0; iter < 3000; ++iter) {
    const std::string alphabet = testing::RandomAlphabet(gen, 2 + gen() % 29);
    const std::string text = testing::RandomWord(gen, alphabet, 1, 20);
    const Word w = MakeWord(text);
    const Charset cs = CharsetOf(alphabet);
    const Category cat = kAttributeCategories[gen() % 4];
    const std::uint64_t seed = gen();

    RandomSource rng(seed);
    const auto out = GenerateCategoryPairs(w, cat, cs, rng);
    RandomSource again(seed);
    const auto repeat = GenerateCategoryPairs(w, cat, cs, again);

    for (std::size_t i = 0; i < 2; ++i) {
      const QaPair& p = out.pairs[i];
      CAPTURE(text);
      CAPTURE(p.question);
      CHECK(OracleAnswer(p.spec, w) == p.answer);
      CHECK(testing::AsciiAnswer(p.question, text) == p.answer.value);
      CHECK(p.question == RenderQuestion(p.spec));
      CHECK(repeat.pairs[i].question == p.question);
      CHECK(repeat.pairs[i].answer == p.answer);
      if (p.answer.kind == AnswerKind::kBinary) {
        CHECK((p.answer.value == "Yes" || p.answer.value == "No"));
      }
      if (p.answer.kind == AnswerKind::kNumerical) {
        CHECK(std::to_string(std::stoul(p.answer.value)) == p.answer.value);
      }
      if (p.answer.kind == AnswerKind::kCharacter) {
        CHECK(NormalizeToUnits(p.answer.value).size() == 1);
      }
    }

    // Coherence between subcategories on the same word.
    const UnitString distinct = DistinctUnits(w.units());
    for (CharUnit c : cs.members()) {
      const bool exists = OracleAnswer(q::Existence{c}, w).value == "Yes";
      CHECK(exists == (std::stoul(OracleAnswer(q::Frequency{c}, w).value) >= 1));
      CHECK((OracleAnswer(q::Start{c}, w).value == "Yes") == (CharAt(w, 1) == c));
      CHECK((OracleAnswer(q::End{c}, w).value == "Yes") == (CharAt(w, w.length()) == c));
    }
    for (CharUnit x : distinct) {
      for (CharUnit y : distinct) {
        if (x == y) continue;
        CHECK((OracleAnswer(q::Relation{x, y}, w).value == "Yes") ==
              (OracleAnswer(q::Relation{y, x}, w).value == "No"));
      }
    }
  }
}

TEST_CASE("AnswerFromText on empty or short predictions") {
  CHECK(AnswerFromText(q::Existence{U'Q'}, "")->value == "No");
  CHECK(AnswerFromText(q::Frequency{U'L'}, "")->value == "0");
  CHECK(AnswerFromText(q::Length{}, "")->value == "0");
  CHECK(AnswerFromText(q::Repetition{}, "")->value == "No");
  CHECK_FALSE(AnswerFromText(q::Position{1}, ""));
  CHECK_FALSE(AnswerFromText(q::Start{U'H'}, ""));
  CHECK_FALSE(AnswerFromText(q::End{U'O'}, ""));
  CHECK_FALSE(AnswerFromText(q::Relation{U'E', U'H'}, ""));
  CHECK(AnswerFromText(q::BaseOcr{}, "")->value == "");
  CHECK_FALSE(AnswerFromText(q::Length{}, "\xFF"));
}

TEST_CASE("AnswersMatch respects case mode") {
  const Answer upper{AnswerKind::kCharacter, "E"};
  const Answer lower{AnswerKind::kCharacter, "e"};
  CHECK_FALSE(AnswersMatch(upper, lower, CaseMode::kSensitive));
  CHECK(AnswersMatch(upper, lower, CaseMode::kFold));
  CHECK(AnswersMatch({AnswerKind::kText, "caf\xC3\xA9"}, {AnswerKind::kText, "cafe\xCC\x81"},
                     CaseMode::kSensitive));
  CHECK_FALSE(AnswersMatch({AnswerKind::kBinary, "Yes"}, {AnswerKind::kBinary, "No"},
                           CaseMode::kFold));
}
