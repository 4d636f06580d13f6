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

// Manifest ingestion, augmented-dataset generation and (de)serialization,
// and oracle re-validation of augmented files.
//
// Augmented files are UTF-8, LF-terminated, one JSON object per line. The
// first line is the run header:
//
//   {"schema":"vqaug.augmented/1","template_version":"charqa-en/1",
//    "rng":"...","seed":42,"probs":[0.3,0.3,0.25,0.15],
//    "charset_hash":"fnv1a64:...","case_fold":false,"passes":1,
//    "frequency_absent":false}
//
// and each following line is one sample for one pass:
//
//   {"id":"001","image":"img/001.png","text":"HELLO","pass":0,"category":1,
//    "charset_hash":"fnv1a64:...","substitutions":[],
//    "qa":[{"cat":0,"sub":"base_ocr","q":"What is this word?","a":"HELLO",
//           "atype":"text"}, ...]}

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "vqaug/sampler.hpp"
#include "vqaug/taxonomy.hpp"
#include "vqaug/text.hpp"

namespace vqaug {

inline constexpr std::string_view kAugmentedSchema = "vqaug.augmented/1";

struct DatasetSample {
  std::string id;
  std::string image_path;
  Word transcription;
};

enum class ManifestFormat { kGenericTsv, kGenericJsonl, kWordArt, kEsposalles };

// "tsv", "jsonl", "wordart", "esposalles".
ManifestFormat ParseManifestFormat(std::string_view name);

struct Manifest {
  std::vector<DatasetSample> samples;
  std::vector<std::string> warnings;
};

// Formats:
//   tsv        <image_path>\t<transcription>[\t<id>]; id defaults to the
//              path stem.
//   jsonl      {"id":..., "image":..., "text":...}; id defaults to the stem.
//   wordart    <image_path><space><transcription>, the label-file layout of
//              the WordArt release; the transcription is the rest of the
//              line.
//   esposalles <word_id><space><transcription>; image is
//              "words/<word_id>.png".
// Blank lines are skipped. Errors carry the 1-based line number.
Manifest ParseManifest(std::istream& in, ManifestFormat format);
Manifest ParseManifest(const std::filesystem::path& path, ManifestFormat format);

// Concatenates several manifests (e.g. the separately distributed parts of
// a training set). With more than one part, ids and image paths are
// prefixed with "part<k>/" (k starting at 1). Duplicate ids are rejected.
Manifest MergeManifests(std::vector<Manifest> parts);

// Union of all transcription units. Throws kEmptyDataset for no samples.
Charset InferCharset(std::span<const DatasetSample> samples);

struct RunHeader {
  std::string schema{kAugmentedSchema};
  std::string template_version{kTemplateVersion};
  std::string rng{RandomSource::kAlgorithm};
  std::uint64_t seed = 0;
  CategoryProbs probs{};
  std::string charset_hash;
  bool case_fold = false;
  std::uint32_t passes = 1;
  bool frequency_absent = false;

  CaseMode case_mode() const {
    return case_fold ? CaseMode::kFold : CaseMode::kSensitive;
  }
  friend bool operator==(const RunHeader&, const RunHeader&) = default;
};

RunHeader MakeHeader(const SamplingConfig& cfg, const Charset& charset);

struct AugmentedSample {
  std::string id;
  std::string image_path;
  std::string transcription;  // raw, as in the manifest
  std::uint32_t pass = 0;
  std::string charset_hash;
  Category sampled_category = Category::kPresence;
  std::vector<Substitution> substitutions;
  // BaseOcr pair first, then the sampled category's two pairs.
  std::vector<QaPair> qa;
};

// Recognition pair plus one sampled attribute category, drawn from the
// sample's own substream.
AugmentedSample AugmentSample(const DatasetSample& sample, const Charset& charset,
                              const SamplingConfig& cfg, std::uint32_t pass);

// All samples for all passes, pass-major in manifest order. Output does not
// depend on `threads`.
std::vector<AugmentedSample> GenerateAugmented(std::span<const DatasetSample> samples,
                                               const Charset& charset,
                                               const SamplingConfig& cfg,
                                               unsigned threads = 1);

std::string SerializeHeader(const RunHeader& header);
std::string SerializeSample(const AugmentedSample& sample);

// Returns the number of sample records written (the header is not counted).
std::size_t WriteAugmented(std::span<const AugmentedSample> samples,
                           const RunHeader& header, std::ostream& out);
std::size_t WriteAugmented(std::span<const AugmentedSample> samples,
                           const RunHeader& header,
                           const std::filesystem::path& out_path);

struct AugmentedFile {
  // Absent only for a zero-byte file read with allow_empty.
  std::optional<RunHeader> header;
  std::vector<AugmentedSample> samples;
};

// Parses the file and checks that every record is structurally sound: known
// schema and template_version, |qa| = 3 with the BaseOcr pair first, every
// question instantiating its subcategory's template and matching the
// declared category. Throws kUnknownTemplateVersion or kMalformedRecord.
AugmentedFile ReadAugmented(std::istream& in, bool allow_empty = false);
AugmentedFile ReadAugmented(const std::filesystem::path& path,
                            bool allow_empty = false);

struct ValidationFailure {
  std::string id;
  std::uint32_t pass = 0;
  std::size_t pair_index = 0;
  std::string expected;
  std::string stored;
};

struct ValidationReport {
  std::size_t total = 0;   // sample records
  std::size_t passed = 0;  // records with no failing pair
  std::vector<ValidationFailure> failures;
};

// Recomputes every stored answer from the stored transcription.
ValidationReport ValidateAugmented(const AugmentedFile& file);
ValidationReport ValidateAugmented(const std::filesystem::path& path);

}  // namespace vqaug
