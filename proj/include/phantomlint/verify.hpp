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

// Two-phase verification of extracted units. Phase 1 checks atomic symbols
// by direct existence lookup; Phase 2 walks invocation sequences with type
// propagation. Findings are only ever produced against types that resolved:
// unknown scope cannot contradict the oracle.

#pragma once

#include <algorithm>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "phantomlint/extract.hpp"
#include "phantomlint/java_parser.hpp"
#include "phantomlint/propagation.hpp"
#include "phantomlint/symbol_table.hpp"

namespace phantomlint {

struct Finding {
  enum class Kind { PhantomSymbol, PhantomMember, BrokenChain };
  enum class Tier { Atomic, ScopeBound };

  Kind kind = Kind::PhantomSymbol;
  SourcePos pos;
  std::string symbol;  // member / method / phantom class name
  std::string on_type; // type consulted; empty for a phantom class name
  std::string explanation;

  Tier tier() const {
    return kind == Kind::PhantomSymbol ? Tier::Atomic : Tier::ScopeBound;
  }

  static const char *kind_name(Kind k) {
    switch (k) {
    case Kind::PhantomSymbol: return "PhantomSymbol";
    case Kind::PhantomMember: return "PhantomMember";
    case Kind::BrokenChain: return "BrokenChain";
    }
    return "?";
  }
  const char *kind_name() const { return kind_name(kind); }
  const char *tier_name() const {
    return tier() == Tier::Atomic ? "Atomic" : "ScopeBound";
  }

  friend bool operator==(const Finding &, const Finding &) = default;
};

namespace detail {

inline std::string member_explanation(const std::string &symbol,
                                      const std::string &on_type) {
  return "`" + symbol + "` is not a member of `" + on_type +
         "` (consulted API documentation index)";
}

inline std::string phantom_class_explanation(const std::string &type_text) {
  return "`" + type_text +
         "` does not name any class in the consulted API documentation index";
}

inline std::string broken_chain_explanation(const std::string &symbol,
                                            const std::string &on_type) {
  return "`" + symbol + "` on `" + on_type +
         "` returns void and cannot continue the chain (consulted API "
         "documentation index)";
}

} // namespace detail

/// Phase 1 direct lookup. A finding requires the class to be known and the
/// member to be neither a field nor a method of any arity (the method check
/// guards against member references to valid methods).
inline std::optional<Finding> verify_atomic(const CheckUnit &unit,
                                            const SymbolTable &table) {
  auto present = table.has_constant(unit.symbol_class, unit.member);
  if (!present)
    return std::nullopt; // unknown scope cannot contradict the oracle
  if (*present)
    return std::nullopt;
  if (table.has_method_named(unit.symbol_class, unit.member))
    return std::nullopt;
  Finding f;
  f.kind = Finding::Kind::PhantomSymbol;
  f.pos = unit.member_pos;
  f.symbol = unit.member;
  f.on_type = unit.symbol_class.value;
  f.explanation = detail::member_explanation(f.symbol, f.on_type);
  return f;
}

namespace detail {

struct ChainVerification {
  std::vector<Finding> findings;
  bool skipped = false; // root never resolved; the unit produced no verdict
};

inline ChainVerification verify_chain_impl(const CheckUnit &unit,
                                           const ScopeMap &scope,
                                           const SymbolTable &table,
                                           const ImportSet &imports,
                                           const CheckOptions &options) {
  ChainVerification result;
  RootExpr root = classify_root(unit.root, scope, table, imports);

  if (root.kind == RootExpr::Kind::Unresolvable) {
    if (root.definitely_absent) {
      Finding f;
      f.kind = Finding::Kind::PhantomSymbol;
      f.pos = root.pos;
      f.symbol = root.source_text;
      f.explanation = phantom_class_explanation(root.source_text);
      result.findings.push_back(std::move(f));
      return result;
    }
    result.skipped = true;
    return result;
  }

  auto outcome = propagate_chain(root.type, unit.calls, table, options);
  switch (outcome.status) {
  case ChainOutcome::Status::RootUnknown:
    result.skipped = true;
    return result;
  case ChainOutcome::Status::Clean:
  case ChainOutcome::Status::Halted:
    return result;
  case ChainOutcome::Status::PhantomMember: {
    Finding f;
    f.kind = Finding::Kind::PhantomMember;
    f.pos = unit.calls[static_cast<std::size_t>(outcome.index)].pos;
    f.symbol = outcome.symbol;
    f.on_type = outcome.on_type.value;
    f.explanation = member_explanation(f.symbol, f.on_type);
    result.findings.push_back(std::move(f));
    return result;
  }
  case ChainOutcome::Status::BrokenChain: {
    Finding f;
    f.kind = Finding::Kind::BrokenChain;
    f.pos = unit.calls[static_cast<std::size_t>(outcome.index)].pos;
    f.symbol = outcome.symbol;
    f.on_type = outcome.on_type.value;
    f.explanation = broken_chain_explanation(f.symbol, f.on_type);
    result.findings.push_back(std::move(f));
    return result;
  }
  }
  return result;
}

} // namespace detail

/// Phase 2, one invocation sequence: resolve the root, then walk the calls
/// left to right, stopping at the first failure. At most one finding per
/// chain, and it is the leftmost failure.
inline std::vector<Finding> verify_chain(const CheckUnit &unit,
                                         const ScopeMap &scope,
                                         const SymbolTable &table,
                                         const CheckOptions &options = {},
                                         const ImportSet &imports = {}) {
  return detail::verify_chain_impl(unit, scope, table, imports, options)
      .findings;
}

struct Census {
  int units_checked = 0;
  int units_skipped = 0;
  int atomic_checked = 0;
  int chains_checked = 0;

  friend bool operator==(const Census &, const Census &) = default;
};

struct CheckResult {
  std::vector<Finding> findings; // source order
  std::vector<Diagnostic> diagnostics;
  Census census;
};

/// Full pipeline for one snippet: parse, scope, extract, Phase 1, Phase 2.
/// Findings are deduplicated by (kind, location, symbol) and sorted by
/// source location. Never throws on any input text.
inline CheckResult check_snippet(const Snippet &snippet,
                                 const SymbolTable &table,
                                 const CheckOptions &options = {}) {
  CheckResult result;

  SyntaxTree tree = parse_snippet(snippet.source);
  ImportSet imports = tree.imports;
  imports.merge(snippet.extra_imports);

  ScopeMap scope = build_scope(tree, table, imports);
  ExtractionResult extraction = extract_units_ex(tree, imports, table);

  result.diagnostics = std::move(tree.diagnostics);
  for (auto &note : extraction.notes)
    result.diagnostics.push_back(std::move(note));
  std::stable_sort(result.diagnostics.begin(), result.diagnostics.end(),
                   [](const Diagnostic &a, const Diagnostic &b) {
                     return a.pos < b.pos;
                   });

  for (const CheckUnit &unit : extraction.units) {
    if (unit.kind == CheckUnit::Kind::AtomicSymbol) {
      if (!table.has_class(unit.symbol_class)) {
        result.census.units_skipped += 1;
        continue;
      }
      result.census.units_checked += 1;
      result.census.atomic_checked += 1;
      if (auto f = verify_atomic(unit, table))
        result.findings.push_back(std::move(*f));
    } else {
      auto verification =
          detail::verify_chain_impl(unit, scope, table, imports, options);
      if (verification.skipped) {
        result.census.units_skipped += 1;
        continue;
      }
      result.census.units_checked += 1;
      result.census.chains_checked += 1;
      for (auto &f : verification.findings)
        result.findings.push_back(std::move(f));
    }
  }

  // dedupe (Phase 1 and Phase 2 can flag the same symbol) and order
  std::stable_sort(result.findings.begin(), result.findings.end(),
                   [](const Finding &a, const Finding &b) {
                     return std::tie(a.pos, a.kind, a.symbol) <
                            std::tie(b.pos, b.kind, b.symbol);
                   });
  std::set<std::tuple<Finding::Kind, int, int, std::string>> seen;
  std::vector<Finding> unique;
  for (auto &f : result.findings) {
    auto key = std::make_tuple(f.kind, f.pos.line, f.pos.column, f.symbol);
    if (seen.insert(key).second)
      unique.push_back(std::move(f));
  }
  result.findings = std::move(unique);
  return result;
}

} // namespace phantomlint
