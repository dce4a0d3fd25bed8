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

#pragma once

#include <string>
#include <string_view>

#include <json.hpp>

#include "phantomlint/errors.hpp"
#include "phantomlint/verify.hpp"
#include "phantomlint/version.hpp"

namespace phantomlint {

/// One checked sample, ready for serialization. `oracle_id` is the content
/// fingerprint of the spec the table was built from, so reports are
/// traceable to their oracle.
struct ReportDocument {
  std::string sample_id;
  std::string oracle_id;
  std::string tool_version = kToolVersion;
  int schema_version = kReportSchemaVersion;
  CheckResult result;
};

inline ReportDocument make_report(std::string sample_id,
                                  CheckResult result,
                                  const SymbolTable &table) {
  ReportDocument doc;
  doc.sample_id = std::move(sample_id);
  doc.oracle_id = table.fingerprint();
  doc.result = std::move(result);
  return doc;
}

/// Canonical JSON bytes: keys sorted, no insignificant whitespace, UTF-8.
/// Serializing the same document twice yields identical bytes.
inline std::string to_json(const ReportDocument &doc) {
  nlohmann::json j;
  j["sampleId"] = doc.sample_id;
  j["oracleId"] = doc.oracle_id;
  j["toolVersion"] = doc.tool_version;
  j["schemaVersion"] = doc.schema_version;

  nlohmann::json findings = nlohmann::json::array();
  for (const auto &f : doc.result.findings) {
    nlohmann::json jf;
    jf["kind"] = f.kind_name();
    jf["tier"] = f.tier_name();
    jf["line"] = f.pos.line;
    jf["column"] = f.pos.column;
    if (f.kind == Finding::Kind::PhantomSymbol) {
      jf["class"] = f.on_type;
      jf["member"] = f.symbol;
    } else {
      jf["method"] = f.symbol;
      jf["onType"] = f.on_type;
    }
    jf["explanation"] = f.explanation;
    findings.push_back(std::move(jf));
  }
  j["findings"] = std::move(findings);

  nlohmann::json census;
  census["unitsChecked"] = doc.result.census.units_checked;
  census["unitsSkipped"] = doc.result.census.units_skipped;
  census["atomicChecked"] = doc.result.census.atomic_checked;
  census["chainsChecked"] = doc.result.census.chains_checked;
  j["census"] = std::move(census);

  nlohmann::json diagnostics = nlohmann::json::array();
  for (const auto &d : doc.result.diagnostics) {
    nlohmann::json jd;
    jd["line"] = d.pos.line;
    jd["column"] = d.pos.column;
    jd["message"] = d.message;
    diagnostics.push_back(std::move(jd));
  }
  j["diagnostics"] = std::move(diagnostics);

  return j.dump(); // nlohmann objects keep keys sorted
}

/// Inverse of to_json, used for round-trip checks and downstream tooling.
inline ReportDocument report_from_json(std::string_view bytes) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(bytes);
  } catch (const nlohmann::json::exception &e) {
    throw SchemaError(std::string("cannot parse report JSON: ") + e.what());
  }
  ReportDocument doc;
  try {
    doc.sample_id = j.at("sampleId").get<std::string>();
    doc.oracle_id = j.at("oracleId").get<std::string>();
    doc.tool_version = j.at("toolVersion").get<std::string>();
    doc.schema_version = j.at("schemaVersion").get<int>();
    for (const auto &jf : j.at("findings")) {
      Finding f;
      std::string kind = jf.at("kind").get<std::string>();
      if (kind == "PhantomSymbol")
        f.kind = Finding::Kind::PhantomSymbol;
      else if (kind == "PhantomMember")
        f.kind = Finding::Kind::PhantomMember;
      else if (kind == "BrokenChain")
        f.kind = Finding::Kind::BrokenChain;
      else
        throw SchemaError("unknown finding kind: " + kind);
      f.pos = {jf.at("line").get<int>(), jf.at("column").get<int>()};
      if (f.kind == Finding::Kind::PhantomSymbol) {
        f.on_type = jf.at("class").get<std::string>();
        f.symbol = jf.at("member").get<std::string>();
      } else {
        f.symbol = jf.at("method").get<std::string>();
        f.on_type = jf.at("onType").get<std::string>();
      }
      f.explanation = jf.at("explanation").get<std::string>();
      doc.result.findings.push_back(std::move(f));
    }
    const auto &census = j.at("census");
    doc.result.census.units_checked = census.at("unitsChecked").get<int>();
    doc.result.census.units_skipped = census.at("unitsSkipped").get<int>();
    doc.result.census.atomic_checked = census.at("atomicChecked").get<int>();
    doc.result.census.chains_checked = census.at("chainsChecked").get<int>();
    for (const auto &jd : j.at("diagnostics")) {
      Diagnostic d;
      d.pos = {jd.at("line").get<int>(), jd.at("column").get<int>()};
      d.message = jd.at("message").get<std::string>();
      doc.result.diagnostics.push_back(std::move(d));
    }
  } catch (const nlohmann::json::exception &e) {
    throw SchemaError(std::string("report JSON shape mismatch: ") + e.what());
  }
  return doc;
}

/// Human-readable rendering: one `LINE:COL TIER KIND symbol — explanation`
/// line per finding, then a census line. Exit-code mapping for the CLI:
/// 0 clean, 1 findings, 2 input error.
inline std::string to_text(const ReportDocument &doc) {
  std::string out;
  if (doc.result.findings.empty()) {
    out += "no hallucinations detected\n";
  } else {
    for (const auto &f : doc.result.findings) {
      out += std::to_string(f.pos.line) + ":" + std::to_string(f.pos.column) +
             " " + f.tier_name() + " " + f.kind_name() + " " + f.symbol +
             " — " + f.explanation + "\n";
    }
  }
  const auto &c = doc.result.census;
  out += "checked " + std::to_string(c.units_checked) + " unit(s) (" +
         std::to_string(c.atomic_checked) + " atomic, " +
         std::to_string(c.chains_checked) + " chain(s)), skipped " +
         std::to_string(c.units_skipped) + "\n";
  return out;
}

} // namespace phantomlint
