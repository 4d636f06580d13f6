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

// Attribute-category sampling and the pipeline's random-source contract.
//
// Every sample carries the recognition question plus both questions of
// exactly one attribute category, picked with probabilities
// {p_presence, p_positional, p_structural, p_boundary}.
//
// Random streams: each (seed, sample id, pass) triple gets its own
// std::mt19937_64 engine, seeded with
//
//   s = splitmix64(splitmix64(seed ^ fnv1a64(id)) + pass)
//
// so a sample's questions do not depend on where it sits in the manifest.
// A uniform draw is (engine() >> 11) * 2^-53. Per sample the stream is
// consumed as: 1 draw for the category, then 2 draws per subcategory.

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <random>
#include <string>
#include <string_view>

#include "vqaug/taxonomy.hpp"
#include "vqaug/text.hpp"

namespace vqaug {

std::uint64_t SplitMix64(std::uint64_t x);

class RandomSource {
 public:
  static constexpr std::string_view kAlgorithm =
      "mt19937_64/splitmix64-fnv1a64-substreams";

  explicit RandomSource(std::uint64_t seed) : engine_(seed) {}

  static RandomSource ForSample(std::uint64_t seed, std::string_view sample_id,
                                std::uint32_t pass);

  std::uint64_t NextU64() {
    ++draws_;
    return engine_();
  }
  // Uniform in [0, 1) with 53 bits of resolution.
  double Uniform() {
    return static_cast<double>(NextU64() >> 11) * 0x1.0p-53;
  }
  // Uniform index in [0, n) from exactly one draw. n must be positive.
  std::size_t Index(std::size_t n);

  std::uint64_t draws() const { return draws_; }

 private:
  std::mt19937_64 engine_;
  std::uint64_t draws_ = 0;
};

// Probabilities for {Presence, Positional, Structural, Boundary}.
using CategoryProbs = std::array<double, 4>;

enum class Preset { kWordArt, kEsposalles, kUniform };

CategoryProbs PresetProbs(Preset preset);
// "wordart", "esposalles" or "uniform"; throws kUnknownPreset otherwise.
Preset ParsePreset(std::string_view name);
std::string_view PresetName(Preset preset);

// Throws kInvalidDistribution unless each p >= 0 and |sum - 1| <= 1e-9.
void ValidateProbs(const CategoryProbs& probs);

// Parses "p1,p2,p3,p4". Throws kInvalidDistribution.
CategoryProbs ParseProbs(std::string_view text);

// Inverse CDF over the fixed order Presence, Positional, Structural,
// Boundary. `u` must lie in [0, 1).
Category CategoryForUniform(const CategoryProbs& probs, double u);

Category SampleCategory(const CategoryProbs& probs, RandomSource& rng);

struct SamplingConfig {
  CategoryProbs probs = PresetProbs(Preset::kUniform);
  std::uint64_t seed = 0;
  bool case_fold = false;
  // nullopt: infer the charset from the dataset.
  std::optional<UnitString> explicit_charset;
  std::string template_version{kTemplateVersion};
  std::uint32_t passes = 1;
  bool frequency_absent = false;

  CaseMode case_mode() const {
    return case_fold ? CaseMode::kFold : CaseMode::kSensitive;
  }
};

void ValidateConfig(const SamplingConfig& cfg);

// Config files hold one `key = value` per line; `#` starts a comment.
// Keys: preset, probs, seed, case_fold, charset, template_version, passes,
// frequency_absent. `charset = infer` selects inference; any other value
// is the explicit list of characters. Later keys override earlier ones.
void ApplyConfigText(SamplingConfig& cfg, std::string_view text);
void ApplyConfigFile(SamplingConfig& cfg, const std::filesystem::path& path);

}  // namespace vqaug
