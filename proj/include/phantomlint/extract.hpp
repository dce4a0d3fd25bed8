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

// Turns a parsed snippet into testable units: atomic symbols (qualified
// field accesses), singular calls, and method chains, together with the
// local variable -> type scope. Resolution never guesses: a name binds only
// through an import, a scope entry, a constructor, or the table's
// simple-name index.

#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "phantomlint/java_parser.hpp"
#include "phantomlint/names.hpp"
#include "phantomlint/propagation.hpp"
#include "phantomlint/symbol_table.hpp"

namespace phantomlint {

/// A snippet to check: raw source plus any imports merged in from a
/// legacy-context document supplied alongside.
struct Snippet {
  std::string source;
  ImportSet extra_imports;
  std::string origin; // sample or file id, informational
};

/// Local variable bindings in declaration order. A variable may be declared
/// yet unresolved; that still shadows any class of the same simple name.
class ScopeMap {
public:
  struct Binding {
    SourcePos pos;
    std::optional<QualifiedName> type; // nullopt: declared but unresolved
  };

  struct Lookup {
    bool declared = false;
    std::optional<QualifiedName> type;
  };

  void bind(const std::string &name, SourcePos pos,
            std::optional<QualifiedName> type) {
    bindings_[name].push_back({pos, std::move(type)});
  }

  /// Latest binding at or before `use`; use-before-declaration stays
  /// undeclared.
  Lookup lookup_at(std::string_view name, SourcePos use) const {
    auto it = bindings_.find(std::string(name));
    if (it == bindings_.end())
      return {};
    Lookup result;
    for (const auto &b : it->second) {
      if (b.pos <= use) {
        result.declared = true;
        result.type = b.type;
      }
    }
    return result;
  }

  /// Innermost (latest) binding regardless of position.
  Lookup lookup(std::string_view name) const {
    auto it = bindings_.find(std::string(name));
    if (it == bindings_.end() || it->second.empty())
      return {};
    return {true, it->second.back().type};
  }

  bool contains(std::string_view name) const {
    return bindings_.count(std::string(name)) != 0;
  }

  std::size_t size() const { return bindings_.size(); }

private:
  std::map<std::string, std::vector<Binding>> bindings_;
};

/// Resolves a possibly-dotted source type name. Absolute dotted names hit
/// the table directly; otherwise the head segment goes through simple-name
/// resolution and the nested remainder is appended.
inline std::optional<QualifiedName>
resolve_type_name(std::string_view text, const SymbolTable &table,
                  const ImportSet &imports) {
  if (text.empty() || text.find("[]") != std::string_view::npos)
    return std::nullopt;
  static const char *non_types[] = {"int",     "long", "short",  "byte",
                                    "char",    "boolean", "float", "double",
                                    "void",    "var"};
  for (const char *word : non_types)
    if (text == word)
      return std::nullopt;

  QualifiedName whole{std::string(text)};
  if (table.has_class(whole))
    return whole;

  auto dot = text.find('.');
  std::string head(text.substr(0, dot));
  auto base = table.resolve_simple_name(head, imports);
  if (!base)
    return std::nullopt;
  if (dot == std::string_view::npos)
    return base;
  return QualifiedName(base->value + std::string(text.substr(dot)));
}

/// Syntactic shape of a chain's leftmost receiver, kept by the unit so the
/// verifier can classify it against the scope that applies at its position.
struct RootSyntax {
  enum class Kind {
    DottedName, // identifier path: variable, class, or field read
    NewType,    // `new T(...)`
    CastType,   // `(T) expr`
    ThisSuper,
    Implicit,   // bare call `f(x)`
    Literal,
    Opaque,     // operator soup, lambdas, array creations, ...
  };

  Kind kind = Kind::Opaque;
  std::vector<std::string> segments; // DottedName
  std::vector<SourcePos> segment_positions;
  std::string type_text; // NewType / CastType, as written
  SourcePos pos;
};

/// Resolved root per the validation algorithm's three cases, extended with
/// the cast rebinding and an explicit unresolvable state.
struct RootExpr {
  enum class Kind { StaticClass, Variable, Constructor, Cast, Unresolvable };

  Kind kind = Kind::Unresolvable;
  QualifiedName type;     // resolved type for every kind but Unresolvable
  std::string identifier; // Variable only
  SourcePos pos;
  // Constructor type whose head simple name matches nothing in the index
  // and no import claims it: provably outside the API namespace.
  bool definitely_absent = false;
  std::string source_text;
};

struct CheckUnit {
  enum class Kind { AtomicSymbol, Chain };

  Kind kind = Kind::Chain;
  SourcePos pos; // unit start, used for ordering

  // AtomicSymbol
  QualifiedName symbol_class;
  std::string member;
  SourcePos member_pos;

  // Chain (a singular call is a chain of length one)
  RootSyntax root;
  std::vector<ChainCall> calls;
  bool truncated_by_member = false; // calls after a field access were dropped
};

struct ExtractionResult {
  std::vector<CheckUnit> units;
  std::vector<Diagnostic> notes;
};

/// Classifies the leftmost receiver: scope bindings shadow class names for
/// plain identifiers (Java shadowing), class resolution makes a static root,
/// `new T(...)` a constructor, `(T) expr` a cast rebinding. Everything else
/// is unresolvable and the unit is skipped, never flagged, except a
/// constructor type name that provably matches nothing in the namespace.
inline RootExpr classify_root(const RootSyntax &root, const ScopeMap &scope,
                              const SymbolTable &table,
                              const ImportSet &imports) {
  RootExpr out;
  out.pos = root.pos;
  switch (root.kind) {
  case RootSyntax::Kind::DottedName: {
    if (root.segments.empty())
      return out;
    if (root.segments.size() == 1) {
      const std::string &name = root.segments[0];
      auto binding = scope.lookup_at(name, root.pos);
      if (binding.declared) {
        if (!binding.type)
          return out; // declared but unresolved: skip, never guess
        out.kind = RootExpr::Kind::Variable;
        out.identifier = name;
        out.type = *binding.type;
        return out;
      }
      if (auto cls = resolve_type_name(name, table, imports)) {
        out.kind = RootExpr::Kind::StaticClass;
        out.type = *cls;
        return out;
      }
      return out;
    }
    // dotted: either a (package-)qualified class or a field-read root
    std::string joined;
    for (std::size_t i = 0; i < root.segments.size(); ++i) {
      if (i)
        joined.push_back('.');
      joined += root.segments[i];
    }
    if (!scope.contains(root.segments[0])) {
      if (auto cls = resolve_type_name(joined, table, imports);
          cls && table.has_class(*cls)) {
        out.kind = RootExpr::Kind::StaticClass;
        out.type = *cls;
        return out;
      }
    }
    return out; // field read or unknown qualifier: propagation cannot start
  }
  case RootSyntax::Kind::NewType: {
    out.source_text = root.type_text;
    if (root.type_text.find("[]") != std::string::npos)
      return out;
    if (auto cls = resolve_type_name(root.type_text, table, imports)) {
      out.kind = RootExpr::Kind::Constructor;
      out.type = *cls;
      return out;
    }
    auto dot = root.type_text.find('.');
    std::string head = root.type_text.substr(0, dot);
    bool head_imported =
        imports.explicit_imports.count(head) != 0;
    if (!head_imported)
      for (const auto &prefix : imports.wildcard_prefixes)
        if (table.has_class(QualifiedName(prefix + "." + head)))
          head_imported = true;
    if (!head_imported && table.simple_name_candidates(head) == 0)
      out.definitely_absent = true;
    return out;
  }
  case RootSyntax::Kind::CastType: {
    if (auto cls = resolve_type_name(root.type_text, table, imports)) {
      out.kind = RootExpr::Kind::Cast;
      out.type = *cls;
    }
    return out;
  }
  case RootSyntax::Kind::ThisSuper:
  case RootSyntax::Kind::Implicit:
  case RootSyntax::Kind::Literal:
  case RootSyntax::Kind::Opaque:
    return out;
  }
  return out;
}

namespace detail {

class UnitExtractor {
public:
  UnitExtractor(const ImportSet &imports, const SymbolTable &table)
      : imports_(imports), table_(table) {}

  ExtractionResult run(const SyntaxTree &tree) {
    for (const auto &stmt : tree.statements)
      walk_statement(stmt);
    std::stable_sort(result_.units.begin(), result_.units.end(),
                     [](const CheckUnit &a, const CheckUnit &b) {
                       return a.pos < b.pos;
                     });
    return std::move(result_);
  }

private:
  const ImportSet &imports_;
  const SymbolTable &table_;
  ExtractionResult result_;

  void walk_statement(const Statement &stmt) {
    switch (stmt.kind) {
    case Statement::Kind::LocalDecl:
      for (const auto &d : stmt.declarators)
        if (d.init)
          walk_expression(*d.init);
      break;
    case Statement::Kind::ExprStmt:
    case Statement::Kind::Return:
      if (stmt.expr)
        walk_expression(*stmt.expr);
      break;
    case Statement::Kind::Compound:
      for (const auto &e : stmt.header_exprs)
        if (e)
          walk_expression(*e);
      for (const auto &child : stmt.children)
        walk_statement(child);
      break;
    case Statement::Kind::Import:
    case Statement::Kind::Skipped:
    case Statement::Kind::Empty:
      break;
    }
  }

  void walk_expression(const Expression &e) {
    // children first so argument-position units appear too
    for (const auto &arg : e.call_args)
      if (arg)
        walk_expression(*arg);
    for (const auto &op : e.operands)
      if (op)
        walk_expression(*op);
    if (e.operand)
      walk_expression(*e.operand);
    for (const auto &seg : e.postfix)
      for (const auto &arg : seg.args)
        if (arg)
          walk_expression(*arg);
    if (e.anon_body)
      walk_statement(*e.anon_body);
    if (e.lambda_block)
      walk_statement(*e.lambda_block);

    emit_units_for(e);
  }

  static bool is_pseudo_member(const std::string &name) {
    return name == "class" || name == "this" || name == "super" ||
           name == "length";
  }

  void emit_units_for(const Expression &e) {
    // atomic symbols from a dotted name base
    if (e.kind == Expression::Kind::Name && e.name_segments.size() >= 2)
      emit_atomic_from_name(e);

    // method-reference guard: `Type::member` checks atomically
    if (!e.postfix.empty() &&
        e.postfix.front().kind == PostfixSeg::Kind::MethodRef &&
        e.kind == Expression::Kind::Name && !e.name_segments.empty()) {
      emit_method_ref(e, e.postfix.front());
    }

    // call chain rooted at this node
    std::vector<ChainCall> calls;
    bool truncated = false;
    int dropped = 0;
    for (const auto &seg : e.postfix) {
      if (seg.kind == PostfixSeg::Kind::Call) {
        if (truncated) {
          ++dropped;
          continue;
        }
        calls.push_back({seg.name, static_cast<int>(seg.args.size()), seg.pos});
      } else {
        truncated = true;
      }
    }
    bool constructor_root = e.kind == Expression::Kind::New;
    if (calls.empty() && !constructor_root)
      return;

    CheckUnit unit;
    unit.kind = CheckUnit::Kind::Chain;
    unit.pos = e.pos;
    unit.calls = std::move(calls);
    unit.truncated_by_member = truncated && dropped > 0;
    unit.root = make_root_syntax(e);
    if (unit.truncated_by_member)
      result_.notes.push_back(
          {e.pos, "call chain truncated at a member access; " +
                      std::to_string(dropped) +
                      " trailing call(s) left unchecked"});
    result_.units.push_back(std::move(unit));
  }

  RootSyntax make_root_syntax(const Expression &e) {
    RootSyntax root;
    root.pos = e.pos;
    switch (e.kind) {
    case Expression::Kind::Name:
      if (e.name_segments.empty()) {
        root.kind = RootSyntax::Kind::Implicit;
      } else if (e.name_segments[0] == "this" ||
                 e.name_segments[0] == "super") {
        root.kind = RootSyntax::Kind::ThisSuper;
      } else {
        root.kind = RootSyntax::Kind::DottedName;
        root.segments = e.name_segments;
        root.segment_positions = e.name_positions;
      }
      break;
    case Expression::Kind::New:
      root.kind = RootSyntax::Kind::NewType;
      root.type_text = e.type_text;
      root.pos = e.type_pos;
      break;
    case Expression::Kind::Cast:
      root.kind = RootSyntax::Kind::CastType;
      root.type_text = e.type_text;
      break;
    case Expression::Kind::Literal:
      root.kind = RootSyntax::Kind::Literal;
      break;
    case Expression::Kind::NewArray:
    case Expression::Kind::Lambda:
    case Expression::Kind::Operators:
    case Expression::Kind::Assign:
      root.kind = RootSyntax::Kind::Opaque;
      break;
    }
    return root;
  }

  /// Longest class-resolving prefix of a dotted name; the following segment
  /// is the accessed member. Skips pure type references (nested classes) and
  /// pseudo members like `Foo.class`.
  void emit_atomic_from_name(const Expression &e) {
    const auto &segs = e.name_segments;
    // a name that is entirely a class reference is not a field access
    {
      std::string whole;
      for (std::size_t i = 0; i < segs.size(); ++i) {
        if (i)
          whole.push_back('.');
        whole += segs[i];
      }
      if (auto cls = resolve_type_name(whole, table_, imports_);
          cls && table_.has_class(*cls))
        return;
    }
    for (std::size_t prefix_len = segs.size() - 1; prefix_len >= 1;
         --prefix_len) {
      std::string prefix;
      for (std::size_t i = 0; i < prefix_len; ++i) {
        if (i)
          prefix.push_back('.');
        prefix += segs[i];
      }
      auto cls = resolve_type_name(prefix, table_, imports_);
      if (!cls || !table_.has_class(*cls))
        continue;
      const std::string &member = segs[prefix_len];
      if (is_pseudo_member(member))
        return;
      // nested class reference, not a member access
      if (table_.has_class(QualifiedName(cls->value + "." + member)))
        return;
      CheckUnit unit;
      unit.kind = CheckUnit::Kind::AtomicSymbol;
      unit.pos = e.pos;
      unit.symbol_class = *cls;
      unit.member = member;
      unit.member_pos = e.name_positions[prefix_len];
      result_.units.push_back(std::move(unit));
      return;
    }
  }

  void emit_method_ref(const Expression &e, const PostfixSeg &ref) {
    if (ref.name == "new")
      return;
    std::string joined;
    for (std::size_t i = 0; i < e.name_segments.size(); ++i) {
      if (i)
        joined.push_back('.');
      joined += e.name_segments[i];
    }
    auto cls = resolve_type_name(joined, table_, imports_);
    if (!cls || !table_.has_class(*cls))
      return;
    CheckUnit unit;
    unit.kind = CheckUnit::Kind::AtomicSymbol;
    unit.pos = e.pos;
    unit.symbol_class = *cls;
    unit.member = ref.name;
    unit.member_pos = ref.pos;
    result_.units.push_back(std::move(unit));
  }
};

/// Infers the type of an initializer or assigned value from constructors,
/// casts, and cleanly verifying chains. Anything else stays unresolved.
inline std::optional<QualifiedName>
infer_expression_type(const Expression &e, const ScopeMap &scope,
                      const SymbolTable &table, const ImportSet &imports) {
  if (e.kind == Expression::Kind::Assign)
    return e.operand ? infer_expression_type(*e.operand, scope, table, imports)
                     : std::nullopt;

  RootSyntax root_syntax;
  std::vector<ChainCall> calls;
  for (const auto &seg : e.postfix) {
    if (seg.kind != PostfixSeg::Kind::Call)
      return std::nullopt; // member access interrupts propagation
    calls.push_back({seg.name, static_cast<int>(seg.args.size()), seg.pos});
  }

  switch (e.kind) {
  case Expression::Kind::New:
  case Expression::Kind::Cast: {
    auto cls = resolve_type_name(e.type_text, table, imports);
    if (!cls)
      return std::nullopt;
    if (calls.empty())
      return cls;
    auto outcome = propagate_chain(*cls, calls, table);
    if (outcome.status == ChainOutcome::Status::Clean && outcome.final_type &&
        outcome.final_type->kind == TypeName::Kind::Object &&
        outcome.final_type->array_dims == 0)
      return outcome.final_type->qualified();
    return std::nullopt;
  }
  case Expression::Kind::Name: {
    if (calls.empty() || e.name_segments.empty())
      return std::nullopt; // plain aliasing is not followed
    RootSyntax rs;
    rs.kind = e.name_segments[0] == "this" || e.name_segments[0] == "super"
                  ? RootSyntax::Kind::ThisSuper
                  : RootSyntax::Kind::DottedName;
    rs.segments = e.name_segments;
    rs.segment_positions = e.name_positions;
    rs.pos = e.pos;
    RootExpr root = classify_root(rs, scope, table, imports);
    if (root.kind == RootExpr::Kind::Unresolvable)
      return std::nullopt;
    auto outcome = propagate_chain(root.type, calls, table);
    if (outcome.status == ChainOutcome::Status::Clean && outcome.final_type &&
        outcome.final_type->kind == TypeName::Kind::Object &&
        outcome.final_type->array_dims == 0)
      return outcome.final_type->qualified();
    return std::nullopt;
  }
  default:
    return std::nullopt;
  }
}

class ScopeBuilder {
public:
  ScopeBuilder(const SymbolTable &table, const ImportSet &imports)
      : table_(table), imports_(imports) {}

  ScopeMap run(const SyntaxTree &tree) {
    for (const auto &stmt : tree.statements)
      process(stmt);
    return std::move(scope_);
  }

private:
  const SymbolTable &table_;
  const ImportSet &imports_;
  ScopeMap scope_;

  void process(const Statement &stmt) {
    switch (stmt.kind) {
    case Statement::Kind::LocalDecl: {
      auto declared = resolve_type_name(stmt.decl_type_text, table_, imports_);
      for (const auto &d : stmt.declarators) {
        if (d.init)
          scan_for_assignments(*d.init);
        if (declared) {
          scope_.bind(d.name, d.pos, declared);
        } else if (d.init) {
          scope_.bind(d.name, d.pos,
                      infer_expression_type(*d.init, scope_, table_, imports_));
        } else {
          scope_.bind(d.name, d.pos, std::nullopt);
        }
      }
      break;
    }
    case Statement::Kind::ExprStmt:
    case Statement::Kind::Return:
      if (stmt.expr)
        scan_for_assignments(*stmt.expr);
      break;
    case Statement::Kind::Compound: {
      // parameters / for-init / enhanced-for declarators bind by their
      // declared type
      if (!stmt.declarators.empty()) {
        auto declared =
            resolve_type_name(stmt.decl_type_text, table_, imports_);
        for (const auto &d : stmt.declarators) {
          if (d.init)
            scan_for_assignments(*d.init);
          if (declared)
            scope_.bind(d.name, d.pos, declared);
          else if (d.init)
            scope_.bind(d.name, d.pos,
                        infer_expression_type(*d.init, scope_, table_,
                                              imports_));
          else
            scope_.bind(d.name, d.pos, std::nullopt);
        }
      }
      for (const auto &e : stmt.header_exprs)
        if (e)
          scan_for_assignments(*e);
      for (const auto &child : stmt.children)
        process(child);
      break;
    }
    case Statement::Kind::Import:
    case Statement::Kind::Skipped:
    case Statement::Kind::Empty:
      break;
    }
  }

  /// Walks an expression for `name = value` nodes. A bare assignment binds
  /// only when the variable is not yet declared and the value's type is
  /// inferable (the runtime type is then certain).
  void scan_for_assignments(const Expression &e) {
    if (e.kind == Expression::Kind::Assign) {
      if (e.operand) {
        scan_for_assignments(*e.operand);
        if (!scope_.contains(e.assign_target)) {
          auto inferred =
              infer_expression_type(*e.operand, scope_, table_, imports_);
          if (inferred)
            scope_.bind(e.assign_target, e.assign_target_pos,
                        std::move(inferred));
        }
      }
      return;
    }
    for (const auto &arg : e.call_args)
      if (arg)
        scan_for_assignments(*arg);
    for (const auto &op : e.operands)
      if (op)
        scan_for_assignments(*op);
    if (e.operand)
      scan_for_assignments(*e.operand);
    for (const auto &seg : e.postfix)
      for (const auto &arg : seg.args)
        if (arg)
          scan_for_assignments(*arg);
    if (e.anon_body)
      process(*e.anon_body);
    if (e.lambda_block)
      process(*e.lambda_block);
  }
};

} // namespace detail

/// Bindings for every declaration whose type resolves, constructor and
/// cleanly-propagated chain initializers included.
inline ScopeMap build_scope(const SyntaxTree &tree, const SymbolTable &table,
                            const ImportSet &imports) {
  return detail::ScopeBuilder(table, imports).run(tree);
}

inline ExtractionResult extract_units_ex(const SyntaxTree &tree,
                                         const ImportSet &imports,
                                         const SymbolTable &table) {
  return detail::UnitExtractor(imports, table).run(tree);
}

/// The three unit categories in source order: atomic symbols, singular
/// calls, and method chains (a singular call is a chain of length one).
inline std::vector<CheckUnit> extract_units(const SyntaxTree &tree,
                                            const ImportSet &imports,
                                            const SymbolTable &table) {
  return extract_units_ex(tree, imports, table).units;
}

} // namespace phantomlint
