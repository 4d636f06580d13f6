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

// Test-only reference implementations. Nothing here calls into the library's
// answer or distance code; they exist to check it.

#pragma once

#include <cstddef>
#include <optional>
#include <regex>
#include <string>
#include <vector>

namespace vqaug::testing {

// Edit distance straight from its recursive definition, memoized so that
// exhaustive sweeps stay tractable.
template <typename Seq>
std::size_t RecursiveLevenshtein(const Seq& a, const Seq& b) {
  const std::size_t m = a.size(), n = b.size();
  std::vector<std::optional<std::size_t>> memo((m + 1) * (n + 1));
  auto rec = [&](auto&& self, std::size_t i, std::size_t j) -> std::size_t {
    if (i == 0) return j;
    if (j == 0) return i;
    auto& slot = memo[i * (n + 1) + j];
    if (slot) return *slot;
    const std::size_t del = self(self, i - 1, j) + 1;
    const std::size_t ins = self(self, i, j - 1) + 1;
    const std::size_t sub = self(self, i - 1, j - 1) + (a[i - 1] == b[j - 1] ? 0 : 1);
    std::size_t best = del < ins ? del : ins;
    if (sub < best) best = sub;
    slot = best;
    return best;
  };
  return rec(rec, m, n);
}

// Answers a rendered question about an ASCII word by pattern-matching the
// question text, independently of the library's spec types. Returns nullopt
// when the question matches no template or has no answer for this word.
inline std::optional<std::string> AsciiAnswer(const std::string& question,
                                              const std::string& word) {
  static const std::regex kExistence(R"(^Is the character '(.)' in this word\?$)");
  static const std::regex kFrequency(R"(^How many times does '(.)' appear\?$)");
  static const std::regex kPosition(R"(^What is the character at position ([1-9][0-9]*)\?$)");
  static const std::regex kRelation(R"(^Does '(.)' come before '(.)' in this word\?$)");
  static const std::regex kStart(R"(^Does this word start with '(.)'\?$)");
  static const std::regex kEnd(R"(^Does this word end with '(.)'\?$)");

  auto yes_no = [](bool b) { return std::string(b ? "Yes" : "No"); };
  auto count = [&](char c) {
    std::size_t k = 0;
    for (char w : word) k += (w == c);
    return k;
  };
  auto first = [&](char c) -> std::optional<std::size_t> {
    for (std::size_t i = 0; i < word.size(); ++i) {
      if (word[i] == c) return i;
    }
    return std::nullopt;
  };

  std::smatch m;
  if (question == "What is this word?") return word;
  if (question == "What is the total number of characters?") {
    return std::to_string(word.size());
  }
  if (question == "Is there any repeated character?") {
    for (std::size_t i = 0; i < word.size(); ++i) {
      for (std::size_t j = i + 1; j < word.size(); ++j) {
        if (word[i] == word[j]) return "Yes";
      }
    }
    return "No";
  }
  if (std::regex_match(question, m, kExistence)) return yes_no(count(m[1].str()[0]) > 0);
  if (std::regex_match(question, m, kFrequency)) {
    return std::to_string(count(m[1].str()[0]));
  }
  if (std::regex_match(question, m, kPosition)) {
    const std::size_t p = std::stoul(m[1].str());
    if (p < 1 || p > word.size()) return std::nullopt;
    return std::string(1, word[p - 1]);
  }
  if (std::regex_match(question, m, kRelation)) {
    const auto x = first(m[1].str()[0]);
    const auto y = first(m[2].str()[0]);
    if (!x || !y || m[1].str() == m[2].str()) return std::nullopt;
    return yes_no(*x < *y);
  }
  if (std::regex_match(question, m, kStart)) {
    return word.empty() ? std::nullopt
                        : std::optional<std::string>(yes_no(word.front() == m[1].str()[0]));
  }
  if (std::regex_match(question, m, kEnd)) {
    return word.empty() ? std::nullopt
                        : std::optional<std::string>(yes_no(word.back() == m[1].str()[0]));
  }
  return std::nullopt;
}

}  // namespace vqaug::testing
