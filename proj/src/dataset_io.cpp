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

#include "vqaug/dataset_io.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <fstream>
#include <istream>
#include <ostream>
#include <thread>
#include <unordered_set>

#include <json.hpp>

#include "vqaug/error.hpp"

namespace vqaug {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

namespace {

bool IsBlank(std::string_view line) {
  return line.find_first_not_of(" \t\r") == std::string_view::npos;
}

std::string Stem(std::string_view path) {
  return std::filesystem::path(path).stem().string();
}

std::vector<std::string_view> SplitTabs(std::string_view line) {
  std::vector<std::string_view> fields;
  while (true) {
    const auto tab = line.find('\t');
    fields.push_back(line.substr(0, tab));
    if (tab == std::string_view::npos) break;
    line.remove_prefix(tab + 1);
  }
  return fields;
}

// Splits "<key><space or tab><rest>" at the first separator.
bool SplitFirst(std::string_view line, std::string_view& key,
                std::string_view& rest) {
  const auto sep = line.find_first_of(" \t");
  if (sep == std::string_view::npos || sep == 0) return false;
  key = line.substr(0, sep);
  rest = line.substr(sep + 1);
  return true;
}

Word WordAtLine(std::string_view text, std::size_t line_no) {
  try {
    return Word::Make(text);
  } catch (const Error& e) {
    throw Error(e.code(), "transcription '" + std::string(text) + "' rejected",
                line_no);
  }
}

DatasetSample ParseRow(std::string_view line, ManifestFormat format,
                       std::size_t line_no) {
  auto malformed = [&](const std::string& why) {
    return Error(ErrorCode::kMalformedRow, why, line_no);
  };
  switch (format) {
    case ManifestFormat::kGenericTsv: {
      const auto fields = SplitTabs(line);
      if (fields.size() < 2) throw malformed("missing transcription column");
      if (fields.size() > 3) throw malformed("too many columns");
      if (fields[0].empty()) throw malformed("empty image path");
      std::string id = fields.size() == 3 ? std::string(fields[2]) : Stem(fields[0]);
      if (id.empty()) throw malformed("empty id");
      return {std::move(id), std::string(fields[0]), WordAtLine(fields[1], line_no)};
    }
    case ManifestFormat::kGenericJsonl: {
      json row;
      try {
        row = json::parse(line);
      } catch (const json::exception& e) {
        throw malformed(e.what());
      }
      if (!row.is_object() || !row.contains("image") || !row.contains("text") ||
          !row["image"].is_string() || !row["text"].is_string()) {
        throw malformed("expected an object with string 'image' and 'text'");
      }
      const auto image = row["image"].get<std::string>();
      std::string id;
      if (row.contains("id")) {
        if (!row["id"].is_string()) throw malformed("'id' must be a string");
        id = row["id"].get<std::string>();
      } else {
        id = Stem(image);
      }
      if (id.empty() || image.empty()) throw malformed("empty id or image");
      return {std::move(id), image, WordAtLine(row["text"].get<std::string>(), line_no)};
    }
    case ManifestFormat::kWordArt: {
      std::string_view image, text;
      if (!SplitFirst(line, image, text)) throw malformed("missing transcription");
      return {Stem(image), std::string(image), WordAtLine(text, line_no)};
    }
    case ManifestFormat::kEsposalles: {
      std::string_view id, text;
      if (!SplitFirst(line, id, text)) throw malformed("missing transcription");
      return {std::string(id), "words/" + std::string(id) + ".png",
              WordAtLine(text, line_no)};
    }
  }
  throw malformed("unknown manifest format");
}

ordered_json PairToJson(const QaPair& pair) {
  ordered_json j;
  j["cat"] = static_cast<int>(CategoryOf(pair.spec));
  j["sub"] = SubcategoryName(SubcategoryOf(pair.spec));
  j["q"] = pair.question;
  j["a"] = pair.answer.value;
  j["atype"] = AnswerKindName(pair.answer.kind);
  return j;
}

}  // namespace

ManifestFormat ParseManifestFormat(std::string_view name) {
  if (name == "tsv" || name == "generic_tsv") return ManifestFormat::kGenericTsv;
  if (name == "jsonl" || name == "generic_jsonl") return ManifestFormat::kGenericJsonl;
  if (name == "wordart" || name == "wordart_layout") return ManifestFormat::kWordArt;
  if (name == "esposalles" || name == "esposalles_layout") {
    return ManifestFormat::kEsposalles;
  }
  throw Error(ErrorCode::kInvalidConfig, "unknown manifest format '" +
                                             std::string(name) + "'");
}

Manifest ParseManifest(std::istream& in, ManifestFormat format) {
  Manifest manifest;
  std::unordered_set<std::string> ids;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::string_view view = line;
    if (line_no == 1 && view.starts_with("\xEF\xBB\xBF")) view.remove_prefix(3);
    if (IsBlank(view)) continue;
    DatasetSample sample = ParseRow(view, format, line_no);
    if (!ids.insert(sample.id).second) {
      throw Error(ErrorCode::kDuplicateId, "duplicate id '" + sample.id + "'",
                  line_no);
    }
    manifest.samples.push_back(std::move(sample));
  }
  if (in.bad()) throw Error(ErrorCode::kIoFailure, "read error");
  if (manifest.samples.empty()) {
    manifest.warnings.emplace_back("manifest contains no samples");
  }
  return manifest;
}

Manifest ParseManifest(const std::filesystem::path& path, ManifestFormat format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoFailure, "cannot open " + path.string());
  Manifest manifest = ParseManifest(in, format);
  for (auto& w : manifest.warnings) w = path.string() + ": " + w;
  return manifest;
}

Manifest MergeManifests(std::vector<Manifest> parts) {
  if (parts.size() == 1) return std::move(parts.front());
  Manifest merged;
  std::unordered_set<std::string> ids;
  for (std::size_t k = 0; k < parts.size(); ++k) {
    const std::string prefix = "part" + std::to_string(k + 1) + "/";
    for (auto& sample : parts[k].samples) {
      sample.id = prefix + sample.id;
      sample.image_path = prefix + sample.image_path;
      if (!ids.insert(sample.id).second) {
        throw Error(ErrorCode::kDuplicateId, "duplicate id '" + sample.id + "'");
      }
      merged.samples.push_back(std::move(sample));
    }
    for (auto& w : parts[k].warnings) merged.warnings.push_back(std::move(w));
  }
  return merged;
}

Charset InferCharset(std::span<const DatasetSample> samples) {
  if (samples.empty()) {
    throw Error(ErrorCode::kEmptyDataset, "cannot infer a charset from no samples");
  }
  UnitString all;
  for (const auto& s : samples) {
    const auto units = s.transcription.units();
    all.append(units.begin(), units.end());
  }
  return Charset(all, CharsetSource::kInferred);
}

RunHeader MakeHeader(const SamplingConfig& cfg, const Charset& charset) {
  RunHeader h;
  h.template_version = cfg.template_version;
  h.seed = cfg.seed;
  h.probs = cfg.probs;
  h.charset_hash = charset.Hash();
  h.case_fold = cfg.case_fold;
  h.passes = cfg.passes;
  h.frequency_absent = cfg.frequency_absent;
  return h;
}

AugmentedSample AugmentSample(const DatasetSample& sample, const Charset& charset,
                              const SamplingConfig& cfg, std::uint32_t pass) {
  RandomSource rng = RandomSource::ForSample(cfg.seed, sample.id, pass);
  const Category cat = SampleCategory(cfg.probs, rng);
  const GenerationPolicy policy{cfg.case_mode(), cfg.frequency_absent};
  CategoryPairs pairs =
      GenerateCategoryPairs(sample.transcription, cat, charset, rng, policy);

  AugmentedSample out;
  out.id = sample.id;
  out.image_path = sample.image_path;
  out.transcription = sample.transcription.raw();
  out.pass = pass;
  out.charset_hash = charset.Hash();
  out.sampled_category = cat;
  out.qa.reserve(3);
  out.qa.push_back(GenerateRecognitionPair(sample.transcription));
  for (auto& p : pairs.pairs) out.qa.push_back(std::move(p));
  if (pairs.substitution) {
    Substitution s = *pairs.substitution;
    s.pair_index += 1;
    out.substitutions.push_back(s);
  }
  return out;
}

std::vector<AugmentedSample> GenerateAugmented(std::span<const DatasetSample> samples,
                                               const Charset& charset,
                                               const SamplingConfig& cfg,
                                               unsigned threads) {
  ValidateConfig(cfg);
  const std::size_t n = samples.size();
  const std::size_t total = n * cfg.passes;
  std::vector<AugmentedSample> out(total);
  std::vector<std::exception_ptr> errors(total);

  auto work = [&](std::size_t task) {
    try {
      const auto pass = static_cast<std::uint32_t>(task / n);
      out[task] = AugmentSample(samples[task % n], charset, cfg, pass);
    } catch (...) {
      errors[task] = std::current_exception();
    }
  };

  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(
                                                          std::max<std::size_t>(total, 1))));
  if (threads == 1) {
    for (std::size_t t = 0; t < total; ++t) work(t);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned i = 0; i < threads; ++i) {
      pool.emplace_back([&] {
        for (std::size_t t = next++; t < total; t = next++) work(t);
      });
    }
  }
  // Report the first failure in manifest order regardless of scheduling.
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

std::string SerializeHeader(const RunHeader& header) {
  ordered_json j;
  j["schema"] = header.schema;
  j["template_version"] = header.template_version;
  j["rng"] = header.rng;
  j["seed"] = header.seed;
  j["probs"] = header.probs;
  j["charset_hash"] = header.charset_hash;
  j["case_fold"] = header.case_fold;
  j["passes"] = header.passes;
  j["frequency_absent"] = header.frequency_absent;
  return j.dump();
}

std::string SerializeSample(const AugmentedSample& sample) {
  ordered_json j;
  j["id"] = sample.id;
  j["image"] = sample.image_path;
  j["text"] = sample.transcription;
  j["pass"] = sample.pass;
  j["category"] = static_cast<int>(sample.sampled_category);
  j["charset_hash"] = sample.charset_hash;
  ordered_json subs = ordered_json::array();
  for (const auto& s : sample.substitutions) {
    ordered_json e;
    e["index"] = s.pair_index;
    e["from"] = SubcategoryName(s.from);
    e["to"] = SubcategoryName(s.to);
    subs.push_back(std::move(e));
  }
  j["substitutions"] = std::move(subs);
  ordered_json qa = ordered_json::array();
  for (const auto& p : sample.qa) qa.push_back(PairToJson(p));
  j["qa"] = std::move(qa);
  return j.dump();
}

std::size_t WriteAugmented(std::span<const AugmentedSample> samples,
                           const RunHeader& header, std::ostream& out) {
  out << SerializeHeader(header) << '\n';
  for (const auto& s : samples) out << SerializeSample(s) << '\n';
  if (!out) throw Error(ErrorCode::kIoFailure, "write failed");
  return samples.size();
}

std::size_t WriteAugmented(std::span<const AugmentedSample> samples,
                           const RunHeader& header,
                           const std::filesystem::path& out_path) {
  std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoFailure, "cannot open " + out_path.string());
  const std::size_t n = WriteAugmented(samples, header, out);
  out.close();
  if (!out) throw Error(ErrorCode::kIoFailure, "cannot write " + out_path.string());
  return n;
}

namespace {

class RecordReader {
 public:
  explicit RecordReader(std::size_t line_no) : line_no_(line_no) {}

  Error Malformed(const std::string& why) const {
    return Error(ErrorCode::kMalformedRecord, why, line_no_);
  }

  json Parse(std::string_view line) const {
    try {
      json j = json::parse(line);
      if (!j.is_object()) throw Malformed("expected a JSON object");
      return j;
    } catch (const json::exception& e) {
      throw Malformed(e.what());
    }
  }

  const json& Field(const json& obj, const char* key) const {
    const auto it = obj.find(key);
    if (it == obj.end()) throw Malformed(std::string("missing '") + key + "'");
    return *it;
  }

  std::string String(const json& obj, const char* key) const {
    const json& v = Field(obj, key);
    if (!v.is_string()) throw Malformed(std::string("'") + key + "' must be a string");
    return v.get<std::string>();
  }

  std::uint64_t Unsigned(const json& obj, const char* key) const {
    const json& v = Field(obj, key);
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
      throw Malformed(std::string("'") + key + "' must be a non-negative integer");
    }
    return v.get<std::uint64_t>();
  }

  bool Bool(const json& obj, const char* key) const {
    const json& v = Field(obj, key);
    if (!v.is_boolean()) throw Malformed(std::string("'") + key + "' must be a boolean");
    return v.get<bool>();
  }

 private:
  std::size_t line_no_;
};

RunHeader ParseHeader(std::string_view line) {
  const RecordReader r(1);
  const json j = r.Parse(line);
  RunHeader h;
  h.schema = r.String(j, "schema");
  if (h.schema != kAugmentedSchema) {
    throw r.Malformed("unknown schema '" + h.schema + "'");
  }
  h.template_version = r.String(j, "template_version");
  if (h.template_version != kTemplateVersion) {
    throw Error(ErrorCode::kUnknownTemplateVersion,
                "refusing template_version '" + h.template_version + "' (known: " +
                    std::string(kTemplateVersion) + ")",
                1);
  }
  h.rng = r.String(j, "rng");
  h.seed = r.Unsigned(j, "seed");
  const json& probs = r.Field(j, "probs");
  if (!probs.is_array() || probs.size() != 4) throw r.Malformed("'probs' must have 4 entries");
  for (std::size_t i = 0; i < 4; ++i) {
    if (!probs[i].is_number()) throw r.Malformed("'probs' entries must be numbers");
    h.probs[i] = probs[i].get<double>();
  }
  h.charset_hash = r.String(j, "charset_hash");
  h.case_fold = r.Bool(j, "case_fold");
  h.passes = static_cast<std::uint32_t>(r.Unsigned(j, "passes"));
  if (j.contains("frequency_absent")) h.frequency_absent = r.Bool(j, "frequency_absent");
  return h;
}

AugmentedSample ParseSampleRecord(std::string_view line, std::size_t line_no) {
  const RecordReader r(line_no);
  const json j = r.Parse(line);
  AugmentedSample s;
  s.id = r.String(j, "id");
  s.image_path = r.String(j, "image");
  s.transcription = r.String(j, "text");
  s.pass = static_cast<std::uint32_t>(r.Unsigned(j, "pass"));
  s.charset_hash = r.String(j, "charset_hash");
  const auto cat = r.Unsigned(j, "category");
  if (cat < 1 || cat > 4) throw r.Malformed("'category' must be 1-4");
  s.sampled_category = static_cast<Category>(cat);

  std::optional<Word> word;
  try {
    word = Word::Make(s.transcription);
  } catch (const Error& e) {
    throw r.Malformed(std::string("bad transcription: ") + e.what());
  }

  const json& subs = r.Field(j, "substitutions");
  if (!subs.is_array()) throw r.Malformed("'substitutions' must be an array");
  for (const auto& e : subs) {
    if (!e.is_object()) throw r.Malformed("substitution must be an object");
    const auto from = ParseSubcategory(r.String(e, "from"));
    const auto to = ParseSubcategory(r.String(e, "to"));
    if (!from || !to) throw r.Malformed("unknown subcategory in substitution");
    s.substitutions.push_back({r.Unsigned(e, "index"), *from, *to});
  }

  const json& qa = r.Field(j, "qa");
  if (!qa.is_array() || qa.size() != 3) throw r.Malformed("'qa' must hold 3 pairs");
  const auto expected_subs = SubcategoriesOf(s.sampled_category);
  for (std::size_t i = 0; i < qa.size(); ++i) {
    const json& p = qa[i];
    if (!p.is_object()) throw r.Malformed("qa entry must be an object");
    const std::string where = "qa[" + std::to_string(i) + "]: ";
    const auto sub = ParseSubcategory(r.String(p, "sub"));
    if (!sub) throw r.Malformed(where + "unknown subcategory");
    const auto kind = ParseAnswerKind(r.String(p, "atype"));
    if (!kind || *kind != AnswerKindOf(*sub)) {
      throw r.Malformed(where + "answer type does not match subcategory");
    }
    if (r.Unsigned(p, "cat") != static_cast<std::uint64_t>(CategoryOf(*sub))) {
      throw r.Malformed(where + "category does not match subcategory");
    }
    const std::string q = r.String(p, "q");
    auto spec = ParseQuestion(*sub, q);
    if (!spec) throw r.Malformed(where + "question does not match any template: " + q);

    Subcategory expected = i == 0 ? Subcategory::kBaseOcr : expected_subs[i - 1];
    if (*sub != expected) {
      const bool substituted = std::any_of(
          s.substitutions.begin(), s.substitutions.end(), [&](const Substitution& x) {
            return x.pair_index == i && x.from == expected && x.to == *sub;
          });
      if (i == 0 || !substituted) {
        throw r.Malformed(where + "unexpected subcategory " +
                          std::string(SubcategoryName(*sub)));
      }
    }
    s.qa.push_back(QaPair{*spec, q, Answer{*kind, r.String(p, "a")}});
  }
  for (const auto& x : s.substitutions) {
    if (x.pair_index < 1 || x.pair_index > 2 || SubcategoryOf(s.qa[x.pair_index].spec) != x.to) {
      throw r.Malformed("substitution does not match the qa list");
    }
  }
  return s;
}

}  // namespace

AugmentedFile ReadAugmented(std::istream& in, bool allow_empty) {
  AugmentedFile file;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line_no == 1) {
      if (line.empty() && in.peek() == std::char_traits<char>::eof()) break;
      file.header = ParseHeader(line);
      continue;
    }
    if (line.empty()) continue;
    file.samples.push_back(ParseSampleRecord(line, line_no));
  }
  if (in.bad()) throw Error(ErrorCode::kIoFailure, "read error");
  if (!file.header && !allow_empty) {
    throw Error(ErrorCode::kMalformedRecord, "missing header line", 1);
  }
  return file;
}

AugmentedFile ReadAugmented(const std::filesystem::path& path, bool allow_empty) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoFailure, "cannot open " + path.string());
  return ReadAugmented(in, allow_empty);
}

ValidationReport ValidateAugmented(const AugmentedFile& file) {
  const CaseMode mode = file.header ? file.header->case_mode() : CaseMode::kSensitive;
  ValidationReport report;
  for (const auto& s : file.samples) {
    ++report.total;
    const Word word = Word::Make(s.transcription);
    bool ok = true;
    for (std::size_t i = 0; i < s.qa.size(); ++i) {
      const QaPair& pair = s.qa[i];
      std::string expected;
      try {
        expected = OracleAnswer(pair.spec, word, mode).value;
      } catch (const Error& e) {
        expected = "<" + std::string(ErrorCodeName(e.code())) + ">";
      }
      if (expected != pair.answer.value) {
        ok = false;
        report.failures.push_back({s.id, s.pass, i, expected, pair.answer.value});
      }
    }
    if (ok) ++report.passed;
  }
  return report;
}

ValidationReport ValidateAugmented(const std::filesystem::path& path) {
  return ValidateAugmented(ReadAugmented(path));
}

}  // namespace vqaug
