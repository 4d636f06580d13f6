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

#include "vqaug/text.hpp"

#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>
#include <unicode/ustring.h>
#include <unicode/utf8.h>

#include <algorithm>
#include <cstdio>
#include <limits>
#include <unordered_set>

#include "vqaug/error.hpp"

namespace vqaug {

UnitString NormalizeToUnits(std::string_view utf8) {
  if (utf8.empty()) return {};
  if (utf8.size() > static_cast<std::size_t>(std::numeric_limits<int32_t>::max())) {
    throw Error(ErrorCode::kInvalidUtf8, "input too large");
  }

  UErrorCode status = U_ZERO_ERROR;
  int32_t needed = 0;
  // Pre-flight to size the UTF-16 buffer; U_SENTINEL makes ill-formed
  // sequences an error instead of substituting U+FFFD.
  u_strFromUTF8WithSub(nullptr, 0, &needed, utf8.data(),
                       static_cast<int32_t>(utf8.size()), U_SENTINEL, nullptr,
                       &status);
  if (status != U_BUFFER_OVERFLOW_ERROR && U_FAILURE(status)) {
    throw Error(ErrorCode::kInvalidUtf8, "ill-formed UTF-8 sequence");
  }
  status = U_ZERO_ERROR;
  icu::UnicodeString utf16;
  UChar* buf = utf16.getBuffer(needed);
  u_strFromUTF8WithSub(buf, needed, &needed, utf8.data(),
                       static_cast<int32_t>(utf8.size()), U_SENTINEL, nullptr,
                       &status);
  utf16.releaseBuffer(U_SUCCESS(status) ? needed : 0);
  if (U_FAILURE(status)) {
    throw Error(ErrorCode::kInvalidUtf8, "ill-formed UTF-8 sequence");
  }

  const icu::Normalizer2* nfc = icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status)) {
    throw Error(ErrorCode::kInvalidUtf8, "NFC normalizer unavailable");
  }
  icu::UnicodeString normalized = nfc->normalize(utf16, status);
  if (U_FAILURE(status)) {
    throw Error(ErrorCode::kInvalidUtf8, "normalization failed");
  }

  UnitString units;
  units.reserve(static_cast<std::size_t>(normalized.countChar32()));
  for (int32_t i = 0; i < normalized.length();) {
    const UChar32 c = normalized.char32At(i);
    units.push_back(static_cast<CharUnit>(c));
    i = normalized.moveIndex32(i, 1);
  }
  return units;
}

std::string ToUtf8(std::span<const CharUnit> units) {
  std::string out;
  out.reserve(units.size() * 2);
  for (CharUnit c : units) {
    uint8_t bytes[U8_MAX_LENGTH];
    int32_t len = 0;
    UBool error = false;
    U8_APPEND(bytes, len, U8_MAX_LENGTH, static_cast<UChar32>(c), error);
    if (error) {
      throw Error(ErrorCode::kInvalidUtf8, "unit is not a Unicode scalar");
    }
    out.append(reinterpret_cast<const char*>(bytes), static_cast<std::size_t>(len));
  }
  return out;
}

std::string ToUtf8(CharUnit unit) { return ToUtf8(std::span<const CharUnit>(&unit, 1)); }

CharUnit FoldUnit(CharUnit unit, CaseMode mode) {
  if (mode == CaseMode::kSensitive) return unit;
  return static_cast<CharUnit>(
      u_foldCase(static_cast<UChar32>(unit), U_FOLD_CASE_DEFAULT));
}

UnitString FoldUnits(std::span<const CharUnit> units, CaseMode mode) {
  UnitString out(units.begin(), units.end());
  if (mode == CaseMode::kFold) {
    for (auto& c : out) c = FoldUnit(c, mode);
  }
  return out;
}

bool SameUnit(CharUnit a, CharUnit b, CaseMode mode) {
  return FoldUnit(a, mode) == FoldUnit(b, mode);
}

bool IsWhitespace(CharUnit unit) {
  return u_isUWhiteSpace(static_cast<UChar32>(unit));
}

Word Word::Make(std::string_view raw) {
  UnitString units = NormalizeToUnits(raw);
  if (std::all_of(units.begin(), units.end(), IsWhitespace)) {
    throw Error(ErrorCode::kEmptyTranscription,
                "transcription is empty or whitespace-only");
  }
  return Word(std::string(raw), std::move(units));
}

CharUnit CharAt(std::span<const CharUnit> units, std::size_t pos) {
  if (pos < 1 || pos > units.size()) {
    throw Error(ErrorCode::kPositionOutOfRange,
                "position " + std::to_string(pos) + " outside [1, " +
                    std::to_string(units.size()) + "]");
  }
  return units[pos - 1];
}

std::size_t Frequency(std::span<const CharUnit> units, CharUnit c,
                      CaseMode mode) {
  return static_cast<std::size_t>(std::count_if(
      units.begin(), units.end(),
      [&](CharUnit u) { return SameUnit(u, c, mode); }));
}

std::optional<std::size_t> FirstIndex(std::span<const CharUnit> units,
                                      CharUnit c, CaseMode mode) {
  for (std::size_t i = 0; i < units.size(); ++i) {
    if (SameUnit(units[i], c, mode)) return i + 1;
  }
  return std::nullopt;
}

bool HasRepeat(std::span<const CharUnit> units, CaseMode mode) {
  std::unordered_set<CharUnit> seen;
  for (CharUnit u : units) {
    if (!seen.insert(FoldUnit(u, mode)).second) return true;
  }
  return false;
}

UnitString DistinctUnits(std::span<const CharUnit> units, CaseMode mode) {
  UnitString out;
  std::unordered_set<CharUnit> seen;
  for (CharUnit u : units) {
    if (seen.insert(FoldUnit(u, mode)).second) out.push_back(u);
  }
  return out;
}

Charset::Charset(std::span<const CharUnit> members, CharsetSource source)
    : members_(members.begin(), members.end()), source_(source) {
  std::sort(members_.begin(), members_.end());
  members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
  if (members_.empty()) {
    throw Error(ErrorCode::kEmptyDataset, "charset must not be empty");
  }
}

bool Charset::Contains(CharUnit c) const {
  return std::binary_search(members_.begin(), members_.end(), c);
}

std::string Charset::Hash() const {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "fnv1a64:%016llx",
                static_cast<unsigned long long>(Fnv1a64(ToUtf8(members_))));
  return buf;
}

std::uint64_t Fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char b : bytes) {
    h ^= b;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace vqaug
