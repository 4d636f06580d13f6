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

#include "vqaug/sampler.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "vqaug/error.hpp"

namespace vqaug {

std::uint64_t SplitMix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

RandomSource RandomSource::ForSample(std::uint64_t seed,
                                     std::string_view sample_id,
                                     std::uint32_t pass) {
  const std::uint64_t keyed = SplitMix64(seed ^ Fnv1a64(sample_id));
  return RandomSource(SplitMix64(keyed + pass));
}

std::size_t RandomSource::Index(std::size_t n) {
  const auto i = static_cast<std::size_t>(Uniform() * static_cast<double>(n));
  return std::min(i, n - 1);
}

CategoryProbs PresetProbs(Preset preset) {
  switch (preset) {
    case Preset::kWordArt: return {0.30, 0.30, 0.25, 0.15};
    case Preset::kEsposalles: return {0.30, 0.25, 0.30, 0.15};
    case Preset::kUniform: return {0.25, 0.25, 0.25, 0.25};
  }
  return {0.25, 0.25, 0.25, 0.25};
}

Preset ParsePreset(std::string_view name) {
  if (name == "wordart") return Preset::kWordArt;
  if (name == "esposalles") return Preset::kEsposalles;
  if (name == "uniform") return Preset::kUniform;
  throw Error(ErrorCode::kUnknownPreset,
              "unknown preset '" + std::string(name) +
                  "' (expected wordart, esposalles or uniform)");
}

std::string_view PresetName(Preset preset) {
  switch (preset) {
    case Preset::kWordArt: return "wordart";
    case Preset::kEsposalles: return "esposalles";
    case Preset::kUniform: return "uniform";
  }
  return "uniform";
}

void ValidateProbs(const CategoryProbs& probs) {
  double sum = 0.0;
  for (double p : probs) {
    if (!std::isfinite(p) || p < 0.0) {
      throw Error(ErrorCode::kInvalidDistribution,
                  "probabilities must be finite and non-negative");
    }
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    std::ostringstream msg;
    msg << "probabilities sum to " << sum << ", expected 1";
    throw Error(ErrorCode::kInvalidDistribution, msg.str());
  }
}

namespace {

std::string_view Trim(std::string_view s) {
  constexpr std::string_view kSpace = " \t\r\n";
  const auto b = s.find_first_not_of(kSpace);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(kSpace);
  return s.substr(b, e - b + 1);
}

template <typename T>
bool ParseNumber(std::string_view s, T& out) {
  s = Trim(s);
  if (s.empty()) return false;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

bool ParseBool(std::string_view s, bool& out) {
  s = Trim(s);
  if (s == "true" || s == "1" || s == "yes" || s == "on") {
    out = true;
    return true;
  }
  if (s == "false" || s == "0" || s == "no" || s == "off") {
    out = false;
    return true;
  }
  return false;
}

}  // namespace

CategoryProbs ParseProbs(std::string_view text) {
  CategoryProbs probs{};
  std::size_t n = 0;
  while (true) {
    const auto comma = text.find(',');
    const std::string_view field = text.substr(0, comma);
    if (n == probs.size() || !ParseNumber(field, probs[n])) {
      throw Error(ErrorCode::kInvalidDistribution,
                  "expected four comma-separated probabilities");
    }
    ++n;
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  if (n != probs.size()) {
    throw Error(ErrorCode::kInvalidDistribution,
                "expected four comma-separated probabilities");
  }
  ValidateProbs(probs);
  return probs;
}

Category CategoryForUniform(const CategoryProbs& probs, double u) {
  double cumulative = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    cumulative += probs[i];
    if (u < cumulative) return kAttributeCategories[i];
  }
  // Rounding can leave the last boundary just below 1; fall back to the last
  // category that has mass.
  for (std::size_t i = probs.size(); i-- > 0;) {
    if (probs[i] > 0.0) return kAttributeCategories[i];
  }
  return kAttributeCategories.back();
}

Category SampleCategory(const CategoryProbs& probs, RandomSource& rng) {
  ValidateProbs(probs);
  return CategoryForUniform(probs, rng.Uniform());
}

void ValidateConfig(const SamplingConfig& cfg) {
  ValidateProbs(cfg.probs);
  if (cfg.passes == 0) {
    throw Error(ErrorCode::kInvalidConfig, "passes must be at least 1");
  }
  if (cfg.template_version != kTemplateVersion) {
    throw Error(ErrorCode::kInvalidConfig,
                "unsupported template_version '" + cfg.template_version + "'");
  }
  if (cfg.explicit_charset && cfg.explicit_charset->empty()) {
    throw Error(ErrorCode::kInvalidConfig, "explicit charset is empty");
  }
}

void ApplyConfigText(SamplingConfig& cfg, std::string_view text) {
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
    ++line_no;

    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = Trim(line);
    if (line.empty()) continue;

    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw Error(ErrorCode::kInvalidConfig, "expected 'key = value'", line_no);
    }
    const std::string_view key = Trim(line.substr(0, eq));
    const std::string_view value = Trim(line.substr(eq + 1));
    auto bad_value = [&] {
      return Error(ErrorCode::kInvalidConfig,
                   "bad value for '" + std::string(key) + "'", line_no);
    };

    if (key == "preset") {
      cfg.probs = PresetProbs(ParsePreset(value));
    } else if (key == "probs") {
      cfg.probs = ParseProbs(value);
    } else if (key == "seed") {
      if (!ParseNumber(value, cfg.seed)) throw bad_value();
    } else if (key == "case_fold") {
      if (!ParseBool(value, cfg.case_fold)) throw bad_value();
    } else if (key == "frequency_absent") {
      if (!ParseBool(value, cfg.frequency_absent)) throw bad_value();
    } else if (key == "passes") {
      if (!ParseNumber(value, cfg.passes) || cfg.passes == 0) throw bad_value();
    } else if (key == "template_version") {
      cfg.template_version = std::string(value);
    } else if (key == "charset") {
      if (value == "infer") {
        cfg.explicit_charset.reset();
      } else if (value.empty()) {
        throw bad_value();
      } else {
        cfg.explicit_charset = NormalizeToUnits(value);
      }
    } else {
      throw Error(ErrorCode::kInvalidConfig,
                  "unknown key '" + std::string(key) + "'", line_no);
    }
  }
}

void ApplyConfigFile(SamplingConfig& cfg, const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::kIoFailure, "cannot open config " + path.string());
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  ApplyConfigText(cfg, buf.str());
}

}  // namespace vqaug
