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

// Transcription type and the character-level primitives that every
// question's answer reduces to.
//
// A character unit is one Unicode scalar value after canonical composition
// (NFC). Grapheme clusters are not segmented. Positions are 1-based.

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace vqaug {

using CharUnit = char32_t;
using UnitString = std::u32string;

enum class CaseMode { kSensitive, kFold };

// Decodes UTF-8 and applies NFC. Throws Error(kInvalidUtf8) on ill-formed
// input.
UnitString NormalizeToUnits(std::string_view utf8);
std::string ToUtf8(std::span<const CharUnit> units);
std::string ToUtf8(CharUnit unit);

// Simple (scalar-to-scalar) case folding; identity under kSensitive.
CharUnit FoldUnit(CharUnit unit, CaseMode mode);
UnitString FoldUnits(std::span<const CharUnit> units, CaseMode mode);
bool SameUnit(CharUnit a, CharUnit b, CaseMode mode);
bool IsWhitespace(CharUnit unit);

// Validated, normalized ground-truth transcription. Immutable.
class Word {
 public:
  // Throws Error(kEmptyTranscription) for empty or whitespace-only input.
  static Word Make(std::string_view raw);

  const std::string& raw() const { return raw_; }
  std::span<const CharUnit> units() const { return units_; }
  std::size_t length() const { return units_.size(); }
  // NFC rendering of the units; equal to normalizing raw().
  std::string Normalized() const { return ToUtf8(units_); }

  friend bool operator==(const Word& a, const Word& b) {
    return a.units_ == b.units_;
  }

 private:
  Word(std::string raw, UnitString units)
      : raw_(std::move(raw)), units_(std::move(units)) {}

  std::string raw_;
  UnitString units_;
};

inline Word MakeWord(std::string_view raw) { return Word::Make(raw); }

// Primitives over arbitrary unit sequences. The sequences may be empty,
// which the answer oracle relies on when grading predicted transcriptions.
CharUnit CharAt(std::span<const CharUnit> units, std::size_t pos);
std::size_t Frequency(std::span<const CharUnit> units, CharUnit c,
                      CaseMode mode = CaseMode::kSensitive);
std::optional<std::size_t> FirstIndex(std::span<const CharUnit> units,
                                      CharUnit c,
                                      CaseMode mode = CaseMode::kSensitive);
bool HasRepeat(std::span<const CharUnit> units,
               CaseMode mode = CaseMode::kSensitive);
// Distinct units in order of first occurrence (deduplicated under `mode`,
// keeping the first spelling seen).
UnitString DistinctUnits(std::span<const CharUnit> units,
                         CaseMode mode = CaseMode::kSensitive);

inline CharUnit CharAt(const Word& w, std::size_t pos) {
  return CharAt(w.units(), pos);
}
inline std::size_t Frequency(const Word& w, CharUnit c,
                             CaseMode mode = CaseMode::kSensitive) {
  return Frequency(w.units(), c, mode);
}
inline std::optional<std::size_t> FirstIndex(
    const Word& w, CharUnit c, CaseMode mode = CaseMode::kSensitive) {
  return FirstIndex(w.units(), c, mode);
}
inline bool HasRepeat(const Word& w, CaseMode mode = CaseMode::kSensitive) {
  return HasRepeat(w.units(), mode);
}

enum class CharsetSource { kInferred, kExplicit };

// Non-empty, deduplicated set of units, iterated in ascending scalar order.
class Charset {
 public:
  // Throws Error(kEmptyDataset) when `members` is empty.
  Charset(std::span<const CharUnit> members, CharsetSource source);

  std::span<const CharUnit> members() const { return members_; }
  CharsetSource source() const { return source_; }
  std::size_t size() const { return members_.size(); }
  bool Contains(CharUnit c) const;

  // Stable digest of the member list ("fnv1a64:<16 hex digits>").
  std::string Hash() const;

 private:
  UnitString members_;
  CharsetSource source_;
};

// 64-bit FNV-1a; also used for substream keys and charset digests.
std::uint64_t Fnv1a64(std::string_view bytes);

}  // namespace vqaug
