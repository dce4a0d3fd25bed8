/*
 * Copyright (C) 2026 The phantomlint Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Evaluation harness: labeled migration datasets in, detector / judge
// metrics and similarity-score distribution statistics out. Hallucinations
// are the positive class; ApiMisuse ground-truth entries are excluded from
// it.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "phantomlint/errors.hpp"
#include "phantomlint/report.hpp"
#include "phantomlint/verify.hpp"

namespace phantomlint {

struct GroundTruthEntry {
  std::string kind;   // PhantomSymbol | PhantomMember | BrokenChain | ApiMisuse
  std::string symbol;
  std::optional<std::string> on_type;
};

struct EvalRecord {
  std::string id;
  std::string legacy_snippet;
  std::string generated_patch;
  std::string generator_model;
  std::vector<GroundTruthEntry> ground_truth;
  bool valid_migration = false;
  bool hallucinated = false;
};

namespace detail {

inline std::string read_file_bytes(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw IoFailure("cannot open: " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return std::move(buffer).str();
}

inline void append_line_error(std::string &errors, int line,
                              const std::string &message) {
  if (!errors.empty())
    errors += "; ";
  errors += "line " + std::to_string(line) + ": " + message;
}

} // namespace detail

/// JSON-lines dataset, one record per line:
///   {"id": "...", "legacySnippet": "...", "generatedPatch": "...",
///    "labels": {"validMigration": bool, "hallucinated": bool},
///    "groundTruth": [{"kind": "...", "symbol": "...", "onType": "..."}],
///    "generatorModel": "..."}
/// Every offending line is collected; nothing is dropped silently.
inline std::vector<EvalRecord>
load_dataset(const std::filesystem::path &path) {
  std::string bytes = detail::read_file_bytes(path);
  std::vector<EvalRecord> records;
  std::string errors;
  std::istringstream in(bytes);
  std::string line;
  int line_no = 0;
  std::map<std::string, int> seen_ids;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos)
      continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception &e) {
      detail::append_line_error(errors, line_no, e.what());
      continue;
    }
    try {
      EvalRecord r;
      r.id = j.at("id").get<std::string>();
      r.legacy_snippet = j.at("legacySnippet").get<std::string>();
      r.generated_patch = j.at("generatedPatch").get<std::string>();
      const auto &labels = j.at("labels");
      r.valid_migration = labels.at("validMigration").get<bool>();
      r.hallucinated = labels.at("hallucinated").get<bool>();
      if (j.contains("generatorModel"))
        r.generator_model = j.at("generatorModel").get<std::string>();
      if (j.contains("groundTruth")) {
        for (const auto &jt : j.at("groundTruth")) {
          GroundTruthEntry t;
          t.kind = jt.at("kind").get<std::string>();
          t.symbol = jt.at("symbol").get<std::string>();
          if (jt.contains("onType"))
            t.on_type = jt.at("onType").get<std::string>();
          r.ground_truth.push_back(std::move(t));
        }
      }
      if (r.hallucinated && r.ground_truth.empty()) {
        detail::append_line_error(errors, line_no,
                                  "hallucinated record without groundTruth");
        continue;
      }
      if (!seen_ids.emplace(r.id, line_no).second) {
        detail::append_line_error(errors, line_no, "duplicate id " + r.id);
        continue;
      }
      records.push_back(std::move(r));
    } catch (const nlohmann::json::exception &e) {
      detail::append_line_error(errors, line_no, e.what());
    }
  }
  if (!errors.empty())
    throw SchemaError("dataset " + path.string() + ": " + errors);
  return records;
}

/// Deterministic per-record checking. Imports from the legacy context are
/// merged into each patch, mirroring datasets that ship file-level context.
inline std::map<std::string, ReportDocument>
run_checker(const std::vector<EvalRecord> &records, const SymbolTable &table,
            const CheckOptions &options = {}) {
  std::map<std::string, ReportDocument> out;
  for (const auto &record : records) {
    Snippet snippet;
    snippet.source = record.generated_patch;
    snippet.origin = record.id;
    snippet.extra_imports = parse_snippet(record.legacy_snippet).imports;
    out.emplace(record.id,
                make_report(record.id, check_snippet(snippet, table, options),
                            table));
  }
  return out;
}

enum class Granularity { SampleLevel, InstanceLevel };

struct Metrics {
  long tp = 0;
  long fp = 0;
  long fn = 0;
  std::optional<double> precision; // null when tp+fp = 0
  std::optional<double> recall;    // null when tp+fn = 0
  std::optional<double> f1;        // null when P or R undefined or P+R = 0
  Granularity granularity = Granularity::SampleLevel;

  static Metrics from_counts(long tp, long fp, long fn,
                             Granularity granularity) {
    Metrics m;
    m.tp = tp;
    m.fp = fp;
    m.fn = fn;
    m.granularity = granularity;
    if (tp + fp > 0)
      m.precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
    if (tp + fn > 0)
      m.recall = static_cast<double>(tp) / static_cast<double>(tp + fn);
    if (m.precision && m.recall && (*m.precision + *m.recall) > 0)
      m.f1 = 2.0 * *m.precision * *m.recall / (*m.precision + *m.recall);
    return m;
  }
};

inline double round2(double x) { return std::round(x * 100.0) / 100.0; }
inline double round3(double x) { return std::round(x * 1000.0) / 1000.0; }

/// Detector efficacy against the labels. Sample level: a record counts as
/// predicted-positive iff its report has at least one finding. Instance
/// level: findings are matched one-to-one to ground-truth entries by
/// (kind, symbol); unmatched findings are fp, unmatched truths fn.
inline Metrics
score_detector(const std::map<std::string, ReportDocument> &predictions,
               const std::vector<EvalRecord> &records,
               Granularity granularity) {
  long tp = 0, fp = 0, fn = 0;
  for (const auto &record : records) {
    auto it = predictions.find(record.id);
    if (it == predictions.end())
      throw MissingPrediction("no report for record " + record.id);
    const auto &findings = it->second.result.findings;
    if (granularity == Granularity::SampleLevel) {
      bool predicted = !findings.empty();
      if (predicted && record.hallucinated)
        ++tp;
      else if (predicted && !record.hallucinated)
        ++fp;
      else if (!predicted && record.hallucinated)
        ++fn;
    } else {
      std::vector<bool> used(record.ground_truth.size(), false);
      long matched = 0;
      for (const auto &f : findings) {
        bool hit = false;
        for (std::size_t i = 0; i < record.ground_truth.size(); ++i) {
          const auto &truth = record.ground_truth[i];
          if (used[i] || truth.kind == "ApiMisuse")
            continue;
          if (truth.kind == f.kind_name() && truth.symbol == f.symbol) {
            used[i] = true;
            hit = true;
            ++matched;
            break;
          }
        }
        if (!hit)
          ++fp;
      }
      tp += matched;
      for (std::size_t i = 0; i < record.ground_truth.size(); ++i)
        if (!used[i] && record.ground_truth[i].kind != "ApiMisuse")
          ++fn;
    }
  }
  return Metrics::from_counts(tp, fp, fn, granularity);
}

/// External judge verdicts, JSON lines of
///   {"id": "...", "hallucinated": bool, "explanationMatched": bool}
/// Under the strict criterion a verdict counts as positive only when both
/// flags hold.
inline Metrics score_judge(const std::filesystem::path &verdicts_path,
                           const std::vector<EvalRecord> &records) {
  std::string bytes = detail::read_file_bytes(verdicts_path);
  struct Verdict {
    bool hallucinated = false;
    bool explanation_matched = false;
  };
  std::map<std::string, Verdict> verdicts;
  std::map<std::string, bool> known_ids;
  for (const auto &record : records)
    known_ids.emplace(record.id, true);

  std::string errors;
  std::istringstream in(bytes);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos)
      continue;
    try {
      nlohmann::json j = nlohmann::json::parse(line);
      std::string id = j.at("id").get<std::string>();
      Verdict v;
      v.hallucinated = j.at("hallucinated").get<bool>();
      v.explanation_matched = j.at("explanationMatched").get<bool>();
      if (!known_ids.count(id)) {
        detail::append_line_error(errors, line_no, "unknown id " + id);
        continue;
      }
      if (!verdicts.emplace(id, v).second)
        detail::append_line_error(errors, line_no, "duplicate id " + id);
    } catch (const nlohmann::json::exception &e) {
      detail::append_line_error(errors, line_no, e.what());
    }
  }
  if (!errors.empty())
    throw SchemaError("verdicts " + verdicts_path.string() + ": " + errors);

  long tp = 0, fp = 0, fn = 0;
  for (const auto &record : records) {
    auto it = verdicts.find(record.id);
    if (it == verdicts.end())
      throw MissingPrediction("no verdict for record " + record.id);
    bool predicted =
        it->second.hallucinated && it->second.explanation_matched;
    if (predicted && record.hallucinated)
      ++tp;
    else if (predicted && !record.hallucinated)
      ++fp;
    else if (!predicted && record.hallucinated)
      ++fn;
  }
  return Metrics::from_counts(tp, fp, fn, Granularity::SampleLevel);
}

inline constexpr int kScoreHistogramBins = 20;

struct GroupStats {
  std::size_t count = 0;
  double mean = 0, median = 0, min = 0, max = 0;
  std::array<long, kScoreHistogramBins> histogram{};
};

struct ScoreStats {
  std::optional<GroupStats> hallu;
  std::optional<GroupStats> no_hallu;
  std::optional<double> mean_gap; // |mean_H - mean_NH| when both exist
};

/// Similarity scores from a `id,score` CSV (header line optional), grouped
/// by the hallucinated label. Output is independent of input row order.
inline ScoreStats score_distributions(const std::filesystem::path &scores_path,
                                      const std::vector<EvalRecord> &records) {
  std::string bytes = detail::read_file_bytes(scores_path);
  std::map<std::string, bool> label_by_id;
  for (const auto &record : records)
    label_by_id.emplace(record.id, record.hallucinated);

  std::vector<double> hallu_scores, clean_scores;
  std::map<std::string, int> seen;
  std::string errors;
  std::istringstream in(bytes);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    while (!line.empty() && (line.back() == '\r' || line.back() == '\n'))
      line.pop_back();
    if (line.empty())
      continue;
    if (line_no == 1 && line == "id,score")
      continue;
    auto comma = line.find(',');
    if (comma == std::string::npos) {
      detail::append_line_error(errors, line_no, "expected id,score");
      continue;
    }
    std::string id = line.substr(0, comma);
    double score = 0;
    try {
      std::size_t consumed = 0;
      score = std::stod(line.substr(comma + 1), &consumed);
      if (consumed != line.size() - comma - 1)
        throw std::invalid_argument("trailing characters");
    } catch (const std::exception &) {
      detail::append_line_error(errors, line_no, "unparseable score");
      continue;
    }
    if (score < 0.0 || score > 1.0) {
      detail::append_line_error(errors, line_no, "score outside [0,1]");
      continue;
    }
    auto label = label_by_id.find(id);
    if (label == label_by_id.end())
      throw UnknownId("scores " + scores_path.string() + " line " +
                      std::to_string(line_no) + ": unknown id " + id);
    if (!seen.emplace(id, line_no).second) {
      detail::append_line_error(errors, line_no, "duplicate id " + id);
      continue;
    }
    (label->second ? hallu_scores : clean_scores).push_back(score);
  }
  if (!errors.empty())
    throw SchemaError("scores " + scores_path.string() + ": " + errors);

  auto summarize = [](std::vector<double> values) -> std::optional<GroupStats> {
    if (values.empty())
      return std::nullopt;
    std::sort(values.begin(), values.end());
    GroupStats g;
    g.count = values.size();
    double sum = 0;
    for (double v : values) {
      sum += v;
      int bin = std::min<int>(kScoreHistogramBins - 1,
                              static_cast<int>(v * kScoreHistogramBins));
      g.histogram[static_cast<std::size_t>(bin)] += 1;
    }
    g.mean = sum / static_cast<double>(values.size());
    std::size_t mid = values.size() / 2;
    g.median = values.size() % 2 == 1
                   ? values[mid]
                   : (values[mid - 1] + values[mid]) / 2.0;
    g.min = values.front();
    g.max = values.back();
    return g;
  };

  ScoreStats stats;
  stats.hallu = summarize(std::move(hallu_scores));
  stats.no_hallu = summarize(std::move(clean_scores));
  if (stats.hallu && stats.no_hallu)
    stats.mean_gap = std::abs(stats.hallu->mean - stats.no_hallu->mean);
  return stats;
}

struct TaxonomyCensus {
  long invalid = 0;
  long hallucinated_cases = 0;
  long atomic = 0;      // findings, may exceed the case count
  long scope_bound = 0;

  friend bool operator==(const TaxonomyCensus &, const TaxonomyCensus &) =
      default;
};

/// Case counts come from the labels, finding counts from the reports.
inline TaxonomyCensus
taxonomy_census(const std::map<std::string, ReportDocument> &predictions,
                const std::vector<EvalRecord> &records) {
  TaxonomyCensus census;
  for (const auto &record : records) {
    auto it = predictions.find(record.id);
    if (it == predictions.end())
      throw MissingPrediction("no report for record " + record.id);
    if (!record.valid_migration)
      ++census.invalid;
    if (record.hallucinated)
      ++census.hallucinated_cases;
    for (const auto &f : it->second.result.findings) {
      if (f.tier() == Finding::Tier::Atomic)
        ++census.atomic;
      else
        ++census.scope_bound;
    }
  }
  return census;
}

// ---- JSON rendering ----------------------------------------------------

inline nlohmann::json metrics_to_json(const Metrics &m) {
  nlohmann::json j;
  j["counts"] = {{"tp", m.tp}, {"fp", m.fp}, {"fn", m.fn}};
  j["precision"] = m.precision ? nlohmann::json(*m.precision)
                               : nlohmann::json(nullptr);
  j["recall"] = m.recall ? nlohmann::json(*m.recall) : nlohmann::json(nullptr);
  j["f1"] = m.f1 ? nlohmann::json(*m.f1) : nlohmann::json(nullptr);
  nlohmann::json rounded;
  rounded["precision"] = m.precision ? nlohmann::json(round2(*m.precision))
                                     : nlohmann::json(nullptr);
  rounded["recall"] =
      m.recall ? nlohmann::json(round2(*m.recall)) : nlohmann::json(nullptr);
  rounded["f1"] = m.f1 ? nlohmann::json(round2(*m.f1)) : nlohmann::json(nullptr);
  j["rounded"] = std::move(rounded);
  j["granularity"] =
      m.granularity == Granularity::SampleLevel ? "sample" : "instance";
  return j;
}

inline nlohmann::json group_stats_to_json(const GroupStats &g) {
  nlohmann::json j;
  j["count"] = g.count;
  j["mean"] = g.mean;
  j["median"] = g.median;
  j["min"] = g.min;
  j["max"] = g.max;
  j["histogram"] = g.histogram;
  return j;
}

inline nlohmann::json score_stats_to_json(const ScoreStats &s) {
  nlohmann::json j;
  j["bins"] = kScoreHistogramBins;
  j["hallu"] = s.hallu ? group_stats_to_json(*s.hallu) : nlohmann::json(nullptr);
  j["noHallu"] =
      s.no_hallu ? group_stats_to_json(*s.no_hallu) : nlohmann::json(nullptr);
  j["meanGap"] =
      s.mean_gap ? nlohmann::json(*s.mean_gap) : nlohmann::json(nullptr);
  return j;
}

inline nlohmann::json taxonomy_to_json(const TaxonomyCensus &c) {
  nlohmann::json j;
  j["invalid"] = c.invalid;
  j["hallucinatedCases"] = c.hallucinated_cases;
  j["atomic"] = c.atomic;
  j["scopeBound"] = c.scope_bound;
  return j;
}

} // namespace phantomlint
