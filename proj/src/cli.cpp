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

#include "vqaug/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "vqaug/dataset_io.hpp"
#include "vqaug/metrics.hpp"
#include "vqaug/sampler.hpp"

namespace vqaug::cli {

namespace {

using ordered_json = nlohmann::ordered_json;

struct GlobalOptions {
  std::string config_path;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  bool case_fold = false;
};

struct GenerateOptions {
  std::vector<std::string> manifests;
  std::string format = "tsv";
  std::string preset;
  std::string probs;
  std::uint32_t passes = 1;
  std::string charset;
  bool frequency_absent = false;
  std::string out;
};

struct ScoreOptions {
  std::string aug;
  std::string preds;
  std::string wer_mode = "exact";
  std::string report;
  bool json = false;
};

std::string UtcNow() {
  const std::time_t t =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string Pct(std::size_t num, std::size_t den) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f%%",
                den == 0 ? 0.0 : 100.0 * static_cast<double>(num) / static_cast<double>(den));
  return buf;
}

unsigned ResolveThreads(unsigned requested) {
  if (requested != 0) return requested;
  return std::max(1u, std::thread::hardware_concurrency());
}

// Histograms shared by `generate` and `stats`.
void PrintSummary(std::span<const AugmentedSample> samples, std::ostream& out,
                  bool detailed) {
  std::array<std::size_t, 5> categories{};
  std::map<std::string_view, std::size_t> subcategories;
  std::map<std::string_view, std::size_t> kinds;
  std::map<std::size_t, std::size_t> lengths;
  std::size_t yes = 0, no = 0, substitutions = 0;
  std::size_t len_sum = 0;
  for (const auto& s : samples) {
    ++categories[static_cast<std::size_t>(s.sampled_category)];
    substitutions += s.substitutions.size();
    const std::size_t len = Word::Make(s.transcription).length();
    ++lengths[len];
    len_sum += len;
    for (const auto& p : s.qa) {
      ++subcategories[SubcategoryName(SubcategoryOf(p.spec))];
      ++kinds[AnswerKindName(p.answer.kind)];
      if (p.answer.kind == AnswerKind::kBinary) {
        (p.answer.value == "Yes" ? yes : no) += 1;
      }
    }
  }
  const std::size_t n = samples.size();
  out << "records: " << n << "\n";
  out << "category histogram:\n";
  for (Category c : kAttributeCategories) {
    const std::size_t k = categories[static_cast<std::size_t>(c)];
    out << "  " << static_cast<int>(c) << " " << CategoryName(c) << ": " << k
        << " (" << Pct(k, n) << ")\n";
  }
  out << "binary answers: Yes " << yes << " (" << Pct(yes, yes + no) << "), No "
      << no << " (" << Pct(no, yes + no) << ")\n";
  out << "substitutions: " << substitutions << "\n";
  if (!detailed) return;

  std::size_t pairs = 0;
  for (const auto& [_, k] : kinds) pairs += k;
  out << "subcategory histogram:\n";
  for (std::size_t i = 0; i < 9; ++i) {
    const auto name = SubcategoryName(static_cast<Subcategory>(i));
    const std::size_t k = subcategories.contains(name) ? subcategories[name] : 0;
    out << "  " << name << ": " << k << " (" << Pct(k, pairs) << ")\n";
  }
  out << "answer types:\n";
  for (std::string_view name : {"text", "binary", "numerical", "character"}) {
    const std::size_t k = kinds.contains(name) ? kinds[name] : 0;
    out << "  " << name << ": " << k << " (" << Pct(k, pairs) << ")\n";
  }
  out << "transcription length:";
  if (n == 0) {
    out << " n/a\n";
    return;
  }
  char mean[32];
  std::snprintf(mean, sizeof(mean), "%.2f",
                static_cast<double>(len_sum) / static_cast<double>(n));
  out << " min " << lengths.begin()->first << ", mean " << mean << ", max "
      << lengths.rbegin()->first << "\n";
  for (const auto& [len, k] : lengths) {
    out << "  " << len << ": " << k << " (" << Pct(k, n) << ")\n";
  }
}

ordered_json ConfigJson(const SamplingConfig& cfg) {
  ordered_json j;
  j["probs"] = cfg.probs;
  j["seed"] = cfg.seed;
  j["case_fold"] = cfg.case_fold;
  j["charset"] = cfg.explicit_charset ? ToUtf8(*cfg.explicit_charset) : "infer";
  j["template_version"] = cfg.template_version;
  j["passes"] = cfg.passes;
  j["frequency_absent"] = cfg.frequency_absent;
  return j;
}

void WriteRunManifest(const std::string& output, ordered_json run) {
  std::ofstream f(output + ".run.json", std::ios::binary | std::ios::trunc);
  if (!f) throw Error(ErrorCode::kIoFailure, "cannot write " + output + ".run.json");
  f << run.dump(2) << '\n';
}

int RunGenerate(const GlobalOptions& g, const GenerateOptions& o,
                const CLI::App& cmd, const CLI::App& app, std::ostream& out,
                std::ostream& err) {
  const std::string started = UtcNow();
  SamplingConfig cfg;
  if (!g.config_path.empty()) ApplyConfigFile(cfg, g.config_path);
  if (app.count("--seed") > 0) cfg.seed = g.seed;
  if (g.case_fold) cfg.case_fold = true;
  if (cmd.count("--preset") > 0) cfg.probs = PresetProbs(ParsePreset(o.preset));
  if (cmd.count("--probs") > 0) cfg.probs = ParseProbs(o.probs);
  if (cmd.count("--passes") > 0) cfg.passes = o.passes;
  if (cmd.count("--charset") > 0) {
    if (o.charset == "infer") {
      cfg.explicit_charset.reset();
    } else {
      cfg.explicit_charset = NormalizeToUnits(o.charset);
    }
  }
  if (o.frequency_absent) cfg.frequency_absent = true;
  ValidateConfig(cfg);

  const ManifestFormat format = ParseManifestFormat(o.format);
  std::vector<Manifest> parts;
  for (const auto& path : o.manifests) {
    err << "reading " << path << "\n";
    parts.push_back(ParseManifest(std::filesystem::path(path), format));
  }
  Manifest manifest = MergeManifests(std::move(parts));
  for (const auto& w : manifest.warnings) err << "warning: " << w << "\n";

  const Charset charset =
      cfg.explicit_charset ? Charset(*cfg.explicit_charset, CharsetSource::kExplicit)
                           : InferCharset(manifest.samples);
  const unsigned threads = ResolveThreads(g.threads);
  err << "generating " << manifest.samples.size() << " samples x " << cfg.passes
      << " passes on " << threads << " thread(s)\n";
  const auto samples = GenerateAugmented(manifest.samples, charset, cfg, threads);
  const RunHeader header = MakeHeader(cfg, charset);
  const std::size_t written = WriteAugmented(samples, header, std::filesystem::path(o.out));

  ordered_json run;
  run["subcommand"] = "generate";
  run["config"] = ConfigJson(cfg);
  run["config"]["format"] = o.format;
  run["config"]["threads"] = threads;
  run["config"]["config_file"] = g.config_path;
  run["inputs"] = o.manifests;
  run["output"] = o.out;
  run["rng"] = header.rng;
  run["charset_hash"] = header.charset_hash;
  run["records"] = written;
  run["started_at"] = started;
  run["finished_at"] = UtcNow();
  run["exit_status"] = kExitOk;
  WriteRunManifest(o.out, std::move(run));

  out << "samples: " << manifest.samples.size() << "\n";
  PrintSummary(samples, out, /*detailed=*/false);
  out << "wrote " << o.out << "\n";
  return kExitOk;
}

int RunValidate(const std::string& path, std::ostream& out, std::ostream& err) {
  const AugmentedFile file = ReadAugmented(std::filesystem::path(path));
  err << "validating " << file.samples.size() << " records\n";
  const ValidationReport report = ValidateAugmented(file);
  for (const auto& f : report.failures) {
    out << "FAIL id=" << f.id << " pass=" << f.pass << " pair=" << f.pair_index
        << " expected=" << f.expected << " stored=" << f.stored << "\n";
  }
  out << "records: " << report.total << ", passed: " << report.passed
      << ", failing pairs: " << report.failures.size() << "\n";
  return report.failures.empty() ? kExitOk : kExitContent;
}

int RunScore(const GlobalOptions& g, const ScoreOptions& o, std::ostream& out,
             std::ostream& err) {
  const std::string started = UtcNow();
  const AugmentedFile file = ReadAugmented(std::filesystem::path(o.aug));
  const PredictionSet preds = ParsePredictions(std::filesystem::path(o.preds));
  const bool case_fold = g.case_fold || file.header->case_fold;
  const WerMode mode = o.wer_mode == "token" ? WerMode::kToken : WerMode::kExactMatch;
  err << "scoring " << preds.size() << " predictions against " << file.samples.size()
      << " records\n";
  const EvalReport report = Evaluate(file, preds, case_fold, mode);
  const std::string json = FormatReportJson(report);
  if (o.json) {
    out << json << "\n";
  } else {
    out << FormatReportText(report);
  }
  if (!o.report.empty()) {
    std::ofstream f(o.report, std::ios::binary | std::ios::trunc);
    if (!f) throw Error(ErrorCode::kIoFailure, "cannot write " + o.report);
    f << json << '\n';
    ordered_json run;
    run["subcommand"] = "score";
    run["config"] = {{"case_fold", case_fold}, {"wer_mode", o.wer_mode}};
    run["inputs"] = {o.aug, o.preds};
    run["output"] = o.report;
    run["started_at"] = started;
    run["finished_at"] = UtcNow();
    run["exit_status"] = kExitOk;
    WriteRunManifest(o.report, std::move(run));
  }
  return kExitOk;
}

int RunStats(const std::string& path, std::ostream& out) {
  const AugmentedFile file = ReadAugmented(std::filesystem::path(path), /*allow_empty=*/true);
  if (file.header) {
    out << "template_version: " << file.header->template_version
        << ", seed: " << file.header->seed << ", passes: " << file.header->passes
        << "\n";
  }
  PrintSummary(file.samples, out, /*detailed=*/true);
  return kExitOk;
}

}  // namespace

int ExitCodeFor(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidDistribution:
    case ErrorCode::kUnknownPreset:
    case ErrorCode::kInvalidConfig:
      return kExitUsage;
    case ErrorCode::kMalformedRow:
    case ErrorCode::kMalformedRecord:
    case ErrorCode::kUnknownTemplateVersion:
    case ErrorCode::kInvalidUtf8:
      return kExitFormat;
    default:
      return kExitContent;
  }
}

int Run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Character-level question-answer augmentation for OCR datasets", "vqaug"};
  app.require_subcommand(1);

  GlobalOptions g;
  app.add_option("--config", g.config_path, "key = value sampling config file")
      ->check(CLI::ExistingFile);
  app.add_option("--seed", g.seed, "64-bit RNG seed");
  app.add_option("--threads", g.threads, "worker threads (0 = all cores)");
  app.add_flag("--case-fold", g.case_fold, "case-insensitive character matching");

  GenerateOptions gen;
  CLI::App* generate = app.add_subcommand("generate", "write an augmented QA dataset");
  generate->fallthrough();
  generate->add_option("--manifest", gen.manifests, "input manifest (repeat for parts)")
      ->required()
      ->check(CLI::ExistingFile);
  generate->add_option("--format", gen.format, "tsv | jsonl | wordart | esposalles");
  auto* preset = generate->add_option("--preset", gen.preset, "wordart | esposalles | uniform");
  auto* probs = generate->add_option("--probs", gen.probs, "p1,p2,p3,p4");
  preset->excludes(probs);
  generate->add_option("--passes", gen.passes, "generation passes per sample")
      ->check(CLI::PositiveNumber);
  generate->add_option("--charset", gen.charset, "explicit distractor charset, or 'infer'");
  generate->add_flag("--frequency-absent", gen.frequency_absent,
                     "let Frequency questions query absent characters");
  generate->add_option("--out", gen.out, "output path")->required();

  std::string validate_path;
  CLI::App* validate = app.add_subcommand("validate", "re-check answers against the oracle");
  validate->fallthrough();
  validate->add_option("augmented", validate_path)->required();

  ScoreOptions sc;
  CLI::App* score = app.add_subcommand("score", "CER, WER and QA accuracy of predictions");
  score->fallthrough();
  score->add_option("augmented", sc.aug)->required();
  score->add_option("--preds", sc.preds, "<id>\\t<prediction> file")->required();
  score->add_option("--wer-mode", sc.wer_mode)
      ->check(CLI::IsMember({"exact", "token"}));
  score->add_option("--report", sc.report, "write the JSON report here");
  score->add_flag("--json", sc.json, "print the JSON report instead of text");

  std::string stats_path;
  CLI::App* stats = app.add_subcommand("stats", "histograms of an augmented file");
  stats->fallthrough();
  stats->add_option("augmented", stats_path)->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (*generate) return RunGenerate(g, gen, *generate, app, out, err);
    if (*validate) return RunValidate(validate_path, out, err);
    if (*score) return RunScore(g, sc, out, err);
    if (*stats) return RunStats(stats_path, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return ExitCodeFor(e.code());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitContent;
  }
  return kExitUsage;
}

}  // namespace vqaug::cli
