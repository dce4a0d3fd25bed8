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

#include <random>

#include "phantomlint/symbol_table.hpp"
#include "support/audio_fixture.hpp"
#include "support/brute_force.hpp"
#include "support/random_specs.hpp"

using namespace phantomlint;

namespace {
QualifiedName q(const char *s) { return QualifiedName(std::string(s)); }
} // namespace

TEST_CASE("one-level flattening") {
  auto spec = parse_spec(R"(<api>
    <class name="p/A"><method name="m()V"/></class>
    <class name="p/B"><extends name="p/A"/><method name="n()V"/></class>
  </api>)");
  auto table = SymbolTable::build(spec);
  auto m = table.lookup_member(q("p.B"), "m");
  auto n = table.lookup_member(q("p.B"), "n");
  REQUIRE(m);
  REQUIRE(n);
  CHECK(m->size() == 1);
  CHECK(n->size() == 1);
  CHECK((*m)[0].declaring_class.value == "p.A");
}

TEST_CASE("diamond with identical signature flattens to one entry") {
  auto spec = parse_spec(R"(<api>
    <class name="p/A"><method name="p()V"/></class>
    <class name="p/I"><method name="p()V"/></class>
    <class name="p/C"><extends name="p/A"/><implements name="p/I"/></class>
  </api>)");
  auto table = SymbolTable::build(spec);
  auto sigs = table.lookup_member(q("p.C"), "p");
  REQUIRE(sigs);
  CHECK(sigs->size() == 1);

  // Agrees with the transitive-closure walker.
  bruteforce::HierarchyWalker walker(spec);
  auto bf = walker.collect(q("p.C"), "p");
  REQUIRE(bf);
  CHECK(bf->size() == 1);
}

TEST_CASE("external supertypes contribute nothing but are noted") {
  auto spec = parse_spec(R"(<api>
    <class name="p/B"><extends name="java/lang/Object"/><method name="n()V"/></class>
  </api>)");
  auto table = SymbolTable::build(spec);
  const ClassEntry *entry = table.find_class(q("p.B"));
  REQUIRE(entry);
  CHECK(entry->method_count() == 1);
  REQUIRE(entry->external_supers.size() == 1);
  CHECK(entry->external_supers[0] == "java/lang/Object");
}

TEST_CASE("inheritance cycles are tolerated with a warning") {
  auto spec = parse_spec(R"(<api>
    <class name="p/A"><extends name="p/B"/><method name="a()V"/></class>
    <class name="p/B"><extends name="p/A"/><method name="b()V"/></class>
  </api>)");
  auto table = SymbolTable::build(spec);
  CHECK(table.class_count() == 2);
  CHECK_FALSE(table.warnings().empty());
  // Both classes keep their own members regardless of the cycle.
  CHECK(table.has_method_named(q("p.A"), "a"));
  CHECK(table.has_method_named(q("p.B"), "b"));
}

TEST_CASE("subclass redeclaration keeps distinct signatures, nearest return wins") {
  auto spec = parse_spec(R"(<api>
    <class name="p/A">
      <method name="self()Lp/A;"/>
      <method name="m(I)V"/>
    </class>
    <class name="p/B"><extends name="p/A"/>
      <method name="self()Lp/B;"/>
      <method name="m(II)V"/>
    </class>
  </api>)");
  auto table = SymbolTable::build(spec);

  // Covariant override: same name+params, subclass return type wins.
  auto self = table.lookup_member(q("p.B"), "self");
  REQUIRE(self);
  REQUIRE(self->size() == 1);
  CHECK((*self)[0].return_type.qualified().value == "p.B");

  // Different params: both signatures stay in the set.
  auto m = table.lookup_member(q("p.B"), "m");
  REQUIRE(m);
  CHECK(m->size() == 2);
  auto m1 = table.lookup_member(q("p.B"), "m", 1);
  REQUIRE(m1);
  CHECK(m1->size() == 1);
}

TEST_CASE("has_constant distinguishes absent member from unknown class") {
  auto table = audiofx::build_table();
  auto present = table.has_constant(q("android.media.AudioAttributes"),
                                    "CONTENT_TYPE_MUSIC");
  REQUIRE(present);
  CHECK(*present);

  auto absent = table.has_constant(q("android.media.AudioAttributes"),
                                   "CONTENT_TYPE_STREAM");
  REQUIRE(absent);
  CHECK_FALSE(*absent);

  CHECK_FALSE(table.has_constant(q("some.Unknown"), "X").has_value());
}

TEST_CASE("lookup_member on the builder fixture") {
  auto table = audiofx::build_table();
  auto setters = table.lookup_member(q("android.media.AudioAttributes.Builder"),
                                     "setUsage");
  REQUIRE(setters);
  REQUIRE(setters->size() == 1);
  CHECK((*setters)[0].return_type.qualified().value ==
        "android.media.AudioAttributes.Builder");

  auto misplaced = table.lookup_member(
      q("android.media.AudioAttributes.Builder"), "setStreamType");
  REQUIRE(misplaced);
  CHECK(misplaced->empty());

  CHECK_FALSE(table.lookup_member(q("no.such.Class"), "m").has_value());
}

TEST_CASE("arity filter narrows to the requested parameter count") {
  auto spec = parse_spec(R"(<api>
    <class name="p/B"><method name="m()V"/></class>
  </api>)");
  auto table = SymbolTable::build(spec);
  // Brute-force enumeration of p/B's signatures named m: exactly {m()},
  // so arity 2 must come back empty while arity 0 matches.
  auto none = table.lookup_member(q("p.B"), "m", 2);
  REQUIRE(none);
  CHECK(none->empty());
  auto zero = table.lookup_member(q("p.B"), "m", 0);
  REQUIRE(zero);
  CHECK(zero->size() == 1);
}

TEST_CASE("resolve_simple_name precedence") {
  auto table = audiofx::build_table();

  SECTION("explicit import wins") {
    ImportSet imports;
    imports.add_explicit(q("android.media.AudioAttributes.Builder"));
    auto r = table.resolve_simple_name("Builder", imports);
    REQUIRE(r);
    CHECK(r->value == "android.media.AudioAttributes.Builder");
  }

  SECTION("ambiguous simple name stays unresolved") {
    auto spec = parse_spec(R"(<api>
      <class name="a/Builder"/>
      <class name="b/Builder"/>
    </api>)");
    auto two = SymbolTable::build(spec);
    CHECK_FALSE(two.resolve_simple_name("Builder", {}).has_value());
    CHECK(two.simple_name_candidates("Builder") == 2);
  }

  SECTION("unique wildcard match") {
    ImportSet imports;
    imports.add_wildcard("android.media");
    auto r = table.resolve_simple_name("AudioAttributes", imports);
    REQUIRE(r);
    CHECK(r->value == "android.media.AudioAttributes");
  }

  SECTION("ambiguous wildcard candidates never guess") {
    auto spec = parse_spec(R"(<api>
      <class name="a/Thing"/>
      <class name="b/Thing"/>
    </api>)");
    auto two = SymbolTable::build(spec);
    ImportSet imports;
    imports.add_wildcard("a");
    imports.add_wildcard("b");
    CHECK_FALSE(two.resolve_simple_name("Thing", imports).has_value());
  }

  SECTION("unique index entry resolves without imports") {
    auto r = table.resolve_simple_name("MediaPlayer", {});
    REQUIRE(r);
    CHECK(r->value == "android.media.MediaPlayer");
  }

  SECTION("unknown name is unresolved") {
    CHECK_FALSE(table.resolve_simple_name("Zorblax", {}).has_value());
  }
}

TEST_CASE("flattened membership equals transitive-closure walk") {
  std::mt19937 rng(0x5eed);
  for (int trial = 0; trial < 300; ++trial) {
    auto spec = testgen::random_spec(rng);
    auto table = SymbolTable::build(spec);
    bruteforce::HierarchyWalker walker(spec);

    SymbolTable::reset_supertype_walk_count();
    for (const auto &cls : spec.classes) {
      auto name = QualifiedName::from_binary(cls.binary_name);
      for (const auto &method : testgen::method_name_pool()) {
        auto sigs = table.lookup_member(name, method);
        REQUIRE(sigs);
        bool flattened_hit = !sigs->empty();
        bool walked_hit = walker.has_method(name, method);
        if (flattened_hit != walked_hit) {
          CAPTURE(trial, cls.binary_name, method);
          REQUIRE(flattened_hit == walked_hit);
        }
      }
      for (const auto &field : testgen::field_name_pool()) {
        auto present = table.has_constant(name, field);
        REQUIRE(present);
        if (*present != walker.has_field(name, field)) {
          CAPTURE(trial, cls.binary_name, field);
          REQUIRE(*present == walker.has_field(name, field));
        }
      }
    }
    // Queries must never traverse the hierarchy.
    CHECK(SymbolTable::supertype_walk_count() == 0);
  }
}

TEST_CASE("repeated identical queries return identical results") {
  auto table = audiofx::build_table();
  auto a = table.lookup_member(q("android.media.AudioAttributes.Builder"), "build");
  auto b = table.lookup_member(q("android.media.AudioAttributes.Builder"), "build");
  REQUIRE(a);
  REQUIRE(b);
  CHECK(*a == *b);
}
