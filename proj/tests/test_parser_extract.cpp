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

#include <catch2/catch_amalgamated.hpp>

#include <string>
#include <vector>

#include "phantomlint/extract.hpp"
#include "phantomlint/verify.hpp"
#include "phantomlint/java_parser.hpp"
#include "support/audio_fixture.hpp"
#include "support/snippets.hpp"

using namespace phantomlint;

namespace {

std::vector<CheckUnit> units_of(const std::string &source,
                                const SymbolTable &table) {
  auto tree = parse_snippet(source);
  return extract_units(tree, tree.imports, table);
}

const CheckUnit *find_chain(const std::vector<CheckUnit> &units,
                            const std::string &first_call) {
  for (const auto &u : units)
    if (u.kind == CheckUnit::Kind::Chain && !u.calls.empty() &&
        u.calls[0].method == first_call)
      return &u;
  return nullptr;
}

/// Independent token-level count of method-call expressions and maximal
/// chains, used as the extraction-completeness oracle. Works on snippets
/// without method declarations beyond simple wrappers.
struct WalkCounts {
  int calls = 0;
  int chains = 0;
};

WalkCounts independent_call_walk(const std::string &source) {
  auto tokens = lex_java(source);
  WalkCounts counts;
  bool in_chain = false;
  for (std::size_t i = 0; i + 1 < tokens.size(); ++i) {
    const Token &t = tokens[i];
    if (t.kind != Token::Kind::Identifier || !tokens[i + 1].is_punct("("))
      continue;
    static const char *control[] = {"if",     "for",   "while", "switch",
                                    "catch",  "super", "this",  "synchronized"};
    bool is_control = false;
    for (const char *kw : control)
      if (t.text == kw)
        is_control = true;
    if (is_control)
      continue;
    // constructor? scan back over the dotted type name for a `new`
    std::size_t j = i;
    while (j >= 2 && tokens[j - 1].is_punct(".") &&
           tokens[j - 2].kind == Token::Kind::Identifier)
      j -= 2;
    if (j >= 1 && tokens[j - 1].is_ident("new"))
      continue;
    // declaration heads (`void m(`) are not calls
    if (j >= 1 && tokens[j - 1].kind == Token::Kind::Identifier &&
        !tokens[j - 1].is_ident("return") && !tokens[j - 1].is_ident("else") &&
        !tokens[j - 1].is_ident("do") && !tokens[j - 1].is_ident("try"))
      continue;
    counts.calls += 1;
    if (!(j >= 1 && tokens[j - 1].is_punct(".") && in_chain))
      counts.chains += 1;
    // a chain continues while `.ident(` follows the closing paren; track by
    // marking that we just saw a call expression
    in_chain = true;
    // find matching close paren to decide whether the next token continues
    int depth = 0;
    std::size_t k = i + 1;
    for (; k < tokens.size(); ++k) {
      if (tokens[k].is_punct("("))
        ++depth;
      else if (tokens[k].is_punct(")")) {
        if (--depth == 0)
          break;
      }
    }
    in_chain = k + 1 < tokens.size() && tokens[k + 1].is_punct(".");
  }
  return counts;
}

} // namespace

TEST_CASE("broken migration parses into a declaration chain and a call") {
  auto tree = parse_snippet(snippets::kBrokenMigration);
  REQUIRE(tree.diagnostics.empty());

  int decls = 0, exprs = 0;
  const Statement *decl = nullptr;
  for (const auto &s : tree.statements) {
    if (s.kind == Statement::Kind::LocalDecl) {
      ++decls;
      decl = &s;
    }
    if (s.kind == Statement::Kind::ExprStmt)
      ++exprs;
  }
  CHECK(decls == 1);
  CHECK(exprs == 2); // legacy line + setAudioAttributes line

  REQUIRE(decl);
  REQUIRE(decl->declarators.size() == 1);
  REQUIRE(decl->declarators[0].init);
  const Expression &init = *decl->declarators[0].init;
  CHECK(init.kind == Expression::Kind::New);
  CHECK(init.type_text == "AudioAttributes.Builder");
  REQUIRE(init.postfix.size() == 3);
  CHECK(init.postfix[0].name == "setStreamType");
  CHECK(init.postfix[1].name == "setContentType");
  CHECK(init.postfix[2].name == "build");
}

TEST_CASE("empty input yields an empty tree and zero units") {
  auto tree = parse_snippet("");
  CHECK(tree.statements.empty());
  auto table = audiofx::build_table();
  CHECK(extract_units(tree, tree.imports, table).empty());
}

TEST_CASE("a garbled line is skipped while its neighbours extract") {
  // Hand count: two valid statements, one skipped region between them.
  auto tree = parse_snippet(
      "int a = audioManager.getStreamVolume(AudioManager.STREAM_MUSIC);\n"
      "@@ %% utterly not java $$\n"
      "mediaPlayer.setAudioStreamType(AudioManager.STREAM_MUSIC);\n");
  int skipped = 0, valid = 0;
  for (const auto &s : tree.statements) {
    if (s.kind == Statement::Kind::Skipped)
      ++skipped;
    if (s.kind == Statement::Kind::LocalDecl ||
        s.kind == Statement::Kind::ExprStmt)
      ++valid;
  }
  CHECK(valid == 2);
  CHECK(skipped == 1);
  CHECK_FALSE(tree.diagnostics.empty());
}

TEST_CASE("imports are collected, static and wildcard included") {
  auto tree = parse_snippet(
      "import android.media.AudioAttributes;\n"
      "import android.os.*;\n"
      "import static android.media.AudioManager.STREAM_MUSIC;\n");
  CHECK(tree.imports.explicit_imports.count("AudioAttributes") == 1);
  CHECK(tree.imports.explicit_imports.count("AudioManager") == 1);
  REQUIRE(tree.imports.wildcard_prefixes.size() == 1);
  CHECK(tree.imports.wildcard_prefixes[0] == "android.os");
}

TEST_CASE("scope binds declared, constructed and propagated types") {
  auto table = audiofx::build_table();

  SECTION("declared type with import") {
    auto tree = parse_snippet("import android.media.AudioAttributes;\n"
                              "AudioAttributes attr = something();\n");
    auto scope = build_scope(tree, table, tree.imports);
    auto b = scope.lookup("attr");
    REQUIRE(b.declared);
    REQUIRE(b.type);
    CHECK(b.type->value == "android.media.AudioAttributes");
  }

  SECTION("unresolvable declared type stays unresolved") {
    auto tree = parse_snippet("Foo x = bar();\n");
    auto scope = build_scope(tree, table, tree.imports);
    auto b = scope.lookup("x");
    REQUIRE(b.declared);
    CHECK_FALSE(b.type.has_value());
  }

  SECTION("var binds the constructed type") {
    auto tree = parse_snippet("var b = new AudioAttributes.Builder();\n");
    auto scope = build_scope(tree, table, tree.imports);
    auto b = scope.lookup("b");
    REQUIRE(b.declared);
    REQUIRE(b.type);
    CHECK(b.type->value == "android.media.AudioAttributes.Builder");
  }

  SECTION("var binds a cleanly propagated chain result") {
    auto tree = parse_snippet(
        "var a = new AudioAttributes.Builder().setUsage(1).build();\n");
    auto scope = build_scope(tree, table, tree.imports);
    auto b = scope.lookup("a");
    REQUIRE(b.declared);
    REQUIRE(b.type);
    CHECK(b.type->value == "android.media.AudioAttributes");
  }

  SECTION("broken chains do not bind") {
    auto tree = parse_snippet(
        "var a = new AudioAttributes.Builder().setStreamType(1).build();\n");
    auto scope = build_scope(tree, table, tree.imports);
    auto b = scope.lookup("a");
    REQUIRE(b.declared);
    CHECK_FALSE(b.type.has_value());
  }

  SECTION("bare assignment from a constructor binds") {
    auto tree = parse_snippet("attr = new AudioAttributes.Builder();\n"
                              "attr.setUsage(1);\n");
    auto scope = build_scope(tree, table, tree.imports);
    auto b = scope.lookup("attr");
    REQUIRE(b.declared);
    REQUIRE(b.type);
    CHECK(b.type->value == "android.media.AudioAttributes.Builder");
  }

  SECTION("use before declaration stays unbound at the use position") {
    auto tree = parse_snippet("player.prepare();\n"
                              "MediaPlayer player = new MediaPlayer();\n");
    auto scope = build_scope(tree, table, tree.imports);
    auto before = scope.lookup_at("player", {1, 1});
    CHECK_FALSE(before.declared);
    auto after = scope.lookup_at("player", {2, 30});
    CHECK(after.declared);
  }
}

TEST_CASE("atomic symbols come from class-qualified field accesses") {
  auto table = audiofx::build_table();

  auto units = units_of("int c = AudioAttributes.CONTENT_TYPE_STREAM;", table);
  REQUIRE(units.size() == 1);
  CHECK(units[0].kind == CheckUnit::Kind::AtomicSymbol);
  CHECK(units[0].symbol_class.value == "android.media.AudioAttributes");
  CHECK(units[0].member == "CONTENT_TYPE_STREAM");

  SECTION("package-qualified access resolves too") {
    auto u = units_of("f(android.media.AudioManager.STREAM_MUSIC);", table);
    bool found = false;
    for (const auto &unit : u)
      if (unit.kind == CheckUnit::Kind::AtomicSymbol &&
          unit.member == "STREAM_MUSIC")
        found = true;
    CHECK(found);
  }

  SECTION("nested class references are not member accesses") {
    auto u = units_of("AudioAttributes.Builder b = null;", table);
    for (const auto &unit : u)
      CHECK(unit.kind != CheckUnit::Kind::AtomicSymbol);
  }

  SECTION("class literals are not member accesses") {
    auto u = units_of("log(AudioAttributes.class);", table);
    for (const auto &unit : u)
      CHECK(unit.kind != CheckUnit::Kind::AtomicSymbol);
  }

  SECTION("method references check atomically") {
    auto u = units_of("use(AudioManager::setStreamType);", table);
    bool found = false;
    for (const auto &unit : u)
      if (unit.kind == CheckUnit::Kind::AtomicSymbol &&
          unit.member == "setStreamType")
        found = true;
    CHECK(found);
  }
}

TEST_CASE("chains preserve source order and argument counts") {
  auto table = audiofx::build_table();
  auto units = units_of("new AudioAttributes.Builder()"
                        ".setStreamType(x).setContentType(y).build();",
                        table);
  const CheckUnit *chain = find_chain(units, "setStreamType");
  REQUIRE(chain);
  CHECK(chain->root.kind == RootSyntax::Kind::NewType);
  CHECK(chain->root.type_text == "AudioAttributes.Builder");
  REQUIRE(chain->calls.size() == 3);
  CHECK(chain->calls[0].method == "setStreamType");
  CHECK(chain->calls[0].arg_count == 1);
  CHECK(chain->calls[1].method == "setContentType");
  CHECK(chain->calls[1].arg_count == 1);
  CHECK(chain->calls[2].method == "build");
  CHECK(chain->calls[2].arg_count == 0);
}

TEST_CASE("argument-position calls are independent units") {
  auto table = audiofx::build_table();
  auto units = units_of("f(g(x));", table);
  REQUIRE(units.size() == 2);
  for (const auto &u : units) {
    CHECK(u.kind == CheckUnit::Kind::Chain);
    CHECK(u.calls.size() == 1);
    CHECK(u.root.kind == RootSyntax::Kind::Implicit);
  }
  // units come out in source-position order
  CHECK(units[0].calls[0].method == "f");
  CHECK(units[1].calls[0].method == "g");
}

TEST_CASE("field access interrupts a chain; the prefix survives") {
  auto table = audiofx::build_table();
  auto tree = parse_snippet("player.getTrackInfo().cache.refresh();\n");
  auto extraction = extract_units_ex(tree, tree.imports, table);
  REQUIRE(extraction.units.size() == 1);
  const auto &unit = extraction.units[0];
  REQUIRE(unit.calls.size() == 1);
  CHECK(unit.calls[0].method == "getTrackInfo");
  CHECK(unit.truncated_by_member);
  CHECK_FALSE(extraction.notes.empty());
}

TEST_CASE("classify_root follows the algorithm's root cases") {
  auto table = audiofx::build_table();
  ScopeMap scope;
  scope.bind("mediaPlayer", {1, 1},
             QualifiedName("android.media.MediaPlayer"));

  SECTION("identifier resolving to a class is a static root") {
    RootSyntax rs;
    rs.kind = RootSyntax::Kind::DottedName;
    rs.segments = {"AudioManager"};
    rs.segment_positions = {{2, 1}};
    rs.pos = {2, 1};
    auto root = classify_root(rs, scope, table, {});
    CHECK(root.kind == RootExpr::Kind::StaticClass);
    CHECK(root.type.value == "android.media.AudioManager");
  }

  SECTION("identifier bound in scope is a variable root") {
    RootSyntax rs;
    rs.kind = RootSyntax::Kind::DottedName;
    rs.segments = {"mediaPlayer"};
    rs.segment_positions = {{2, 1}};
    rs.pos = {2, 1};
    auto root = classify_root(rs, scope, table, {});
    CHECK(root.kind == RootExpr::Kind::Variable);
    CHECK(root.identifier == "mediaPlayer");
    CHECK(root.type.value == "android.media.MediaPlayer");
  }

  SECTION("scope shadows a same-named class") {
    ScopeMap shadow;
    shadow.bind("AudioManager", {1, 1},
                QualifiedName("android.media.MediaPlayer"));
    RootSyntax rs;
    rs.kind = RootSyntax::Kind::DottedName;
    rs.segments = {"AudioManager"};
    rs.segment_positions = {{2, 1}};
    rs.pos = {2, 1};
    auto root = classify_root(rs, shadow, table, {});
    CHECK(root.kind == RootExpr::Kind::Variable);
  }

  SECTION("unknown receiver is unresolvable and skipped") {
    RootSyntax rs;
    rs.kind = RootSyntax::Kind::DottedName;
    rs.segments = {"someUnknownVar"};
    rs.segment_positions = {{2, 1}};
    rs.pos = {2, 1};
    auto root = classify_root(rs, scope, table, {});
    CHECK(root.kind == RootExpr::Kind::Unresolvable);
    CHECK_FALSE(root.definitely_absent);
  }

  SECTION("constructor of a resolvable type") {
    RootSyntax rs;
    rs.kind = RootSyntax::Kind::NewType;
    rs.type_text = "AudioAttributes.Builder";
    rs.pos = {2, 1};
    auto root = classify_root(rs, scope, table, {});
    CHECK(root.kind == RootExpr::Kind::Constructor);
    CHECK(root.type.value == "android.media.AudioAttributes.Builder");
  }

  SECTION("constructor type absent from the whole namespace") {
    RootSyntax rs;
    rs.kind = RootSyntax::Kind::NewType;
    rs.type_text = "AudioAttribute.Builder"; // note the missing s
    rs.pos = {2, 1};
    auto root = classify_root(rs, scope, table, {});
    CHECK(root.kind == RootExpr::Kind::Unresolvable);
    CHECK(root.definitely_absent);
    CHECK(root.source_text == "AudioAttribute.Builder");
  }

  SECTION("imported-but-unknown constructor type is silently skipped") {
    ImportSet imports;
    imports.add_explicit(QualifiedName("com.example.AudioAttribute"));
    RootSyntax rs;
    rs.kind = RootSyntax::Kind::NewType;
    rs.type_text = "AudioAttribute.Builder";
    rs.pos = {2, 1};
    // the import composes a deterministic qualified name, but the class is
    // outside the oracle, so verification must skip without a finding
    auto root = classify_root(rs, scope, table, imports);
    CHECK(root.kind == RootExpr::Kind::Constructor);
    CHECK(root.type.value == "com.example.AudioAttribute.Builder");
    CHECK_FALSE(root.definitely_absent);
    CheckUnit unit;
    unit.kind = CheckUnit::Kind::Chain;
    unit.root = rs;
    unit.calls.push_back({"setUsage", 1, {2, 5}});
    CHECK(verify_chain(unit, scope, table, {}, imports).empty());
  }

  SECTION("cast rebinds the chain root") {
    RootSyntax rs;
    rs.kind = RootSyntax::Kind::CastType;
    rs.type_text = "AudioAttributes";
    rs.pos = {2, 1};
    auto root = classify_root(rs, scope, table, {});
    CHECK(root.kind == RootExpr::Kind::Cast);
    CHECK(root.type.value == "android.media.AudioAttributes");
  }
}

TEST_CASE("extraction matches an independent call walk over the corpus") {
  auto table = audiofx::build_table();
  for (const auto &source : snippets::fixture_corpus()) {
    auto tree = parse_snippet(source);
    auto units = extract_units(tree, tree.imports, table);
    WalkCounts expected = independent_call_walk(source);
    int total_calls = 0;
    int chain_units = 0;
    for (const auto &u : units) {
      if (u.kind != CheckUnit::Kind::Chain)
        continue;
      total_calls += static_cast<int>(u.calls.size());
      // zero-call constructor units are not call expressions
      if (!u.calls.empty())
        ++chain_units;
      CHECK_FALSE(u.truncated_by_member);
    }
    CAPTURE(source);
    CHECK(total_calls == expected.calls);
    CHECK(chain_units == expected.chains);
  }
}

TEST_CASE("order preservation holds for every extracted chain") {
  auto table = audiofx::build_table();
  for (const auto &source : snippets::fixture_corpus()) {
    auto tree = parse_snippet(source);
    for (const auto &u : extract_units(tree, tree.imports, table)) {
      if (u.kind != CheckUnit::Kind::Chain)
        continue;
      for (std::size_t i = 1; i < u.calls.size(); ++i)
        CHECK(u.calls[i - 1].pos < u.calls[i].pos);
    }
  }
}

TEST_CASE("deleting any single line never aborts extraction") {
  auto table = audiofx::build_table();
  for (const auto &source : snippets::fixture_corpus()) {
    std::vector<std::string> lines;
    std::string current;
    for (char c : source) {
      if (c == '\n') {
        lines.push_back(current);
        current.clear();
      } else {
        current.push_back(c);
      }
    }
    if (!current.empty())
      lines.push_back(current);

    for (std::size_t removed = 0; removed < lines.size(); ++removed) {
      std::string mutated;
      for (std::size_t i = 0; i < lines.size(); ++i) {
        if (i == removed)
          continue;
        mutated += lines[i];
        mutated.push_back('\n');
      }
      auto tree = parse_snippet(mutated);
      auto units = extract_units(tree, tree.imports, table);
      (void)units; // reaching here without a throw is the property
      SUCCEED();
    }
  }
}
