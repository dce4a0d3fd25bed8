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

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "phantomlint/api_spec.hpp"
#include "phantomlint/descriptor.hpp"
#include "phantomlint/errors.hpp"
#include "phantomlint/names.hpp"

namespace phantomlint {

namespace detail {
/// Counts supertype-edge traversals. Table construction walks the hierarchy
/// and increments this; queries must leave it untouched, which is what the
/// flattening exists to guarantee. Tests reset it after build and assert it
/// stays at zero across lookups.
inline thread_local std::uint64_t supertype_walks = 0;
} // namespace detail

/// Flattened view of one class: declared members plus everything inherited
/// transitively from resolvable supertypes.
struct ClassEntry {
  QualifiedName name;
  std::set<std::string> constants;
  std::map<std::string, std::vector<MethodSig>> methods_by_name;
  // Supertypes named by the spec but not declared in it (binary names).
  std::vector<std::string> external_supers;

  std::size_t method_count() const {
    std::size_t n = 0;
    for (const auto &[_, sigs] : methods_by_name)
      n += sigs.size();
    return n;
  }
};

/// The deterministic API oracle: an immutable per-class member index with
/// O(1)-per-class membership and return-type lookup. Construction flattens
/// the inheritance hierarchy once; queries never touch it again.
///
/// Safe to share across threads after construction; every query is const.
class SymbolTable {
public:
  SymbolTable() = default;

  static SymbolTable build(const RawApiSpec &spec,
                           std::string fingerprint = {}) {
    Builder b(spec);
    SymbolTable table;
    table.fingerprint_ = std::move(fingerprint);
    b.run(table);
    table.rebuild_simple_index();
    return table;
  }

  const ClassEntry *find_class(const QualifiedName &name) const {
    auto it = by_class_.find(name);
    return it == by_class_.end() ? nullptr : &it->second;
  }

  bool has_class(const QualifiedName &name) const {
    return by_class_.count(name) != 0;
  }

  /// Tri-state field existence: nullopt means the class itself is unknown
  /// and the caller decides whether to skip or flag.
  std::optional<bool> has_constant(const QualifiedName &cls,
                                   std::string_view field) const {
    const ClassEntry *entry = find_class(cls);
    if (!entry)
      return std::nullopt;
    return entry->constants.count(std::string(field)) != 0;
  }

  /// All flattened signatures with the given name; nullopt when the class is
  /// unknown, empty when the member is absent. With `arity` set, signatures
  /// are filtered by parameter count.
  std::optional<std::vector<MethodSig>>
  lookup_member(const QualifiedName &cls, std::string_view method,
                std::optional<int> arity = std::nullopt) const {
    const ClassEntry *entry = find_class(cls);
    if (!entry)
      return std::nullopt;
    std::vector<MethodSig> out;
    auto it = entry->methods_by_name.find(std::string(method));
    if (it != entry->methods_by_name.end()) {
      for (const auto &sig : it->second)
        if (!arity || sig.arity() == *arity)
          out.push_back(sig);
    }
    return out;
  }

  /// True when some method of that name exists on the class (any arity).
  bool has_method_named(const QualifiedName &cls, std::string_view method) const {
    const ClassEntry *entry = find_class(cls);
    if (!entry)
      return false;
    return entry->methods_by_name.count(std::string(method)) != 0;
  }

  /// Resolves a simple class name against imports and the table index.
  /// Explicit import wins; else a unique wildcard-import candidate; else a
  /// unique entry in the simple-name index; else nullopt, never a guess.
  std::optional<QualifiedName>
  resolve_simple_name(std::string_view simple, const ImportSet &imports) const {
    std::string key(simple);
    if (auto it = imports.explicit_imports.find(key);
        it != imports.explicit_imports.end())
      return it->second;

    std::vector<QualifiedName> wildcard_hits;
    for (const auto &prefix : imports.wildcard_prefixes) {
      QualifiedName candidate(prefix + "." + key);
      if (has_class(candidate))
        wildcard_hits.push_back(std::move(candidate));
    }
    if (wildcard_hits.size() == 1)
      return wildcard_hits.front();
    if (wildcard_hits.size() > 1)
      return std::nullopt; // ambiguous under wildcards

    auto it = simple_index_.find(key);
    if (it != simple_index_.end() && it->second.size() == 1)
      return *it->second.begin();
    return std::nullopt;
  }

  /// Candidate count for a simple name in the index (0 means the name is
  /// absent from the whole API namespace).
  std::size_t simple_name_candidates(std::string_view simple) const {
    auto it = simple_index_.find(std::string(simple));
    return it == simple_index_.end() ? 0 : it->second.size();
  }

  const std::map<QualifiedName, ClassEntry> &classes() const {
    return by_class_;
  }
  const std::map<std::string, std::set<QualifiedName>> &simple_name_index() const {
    return simple_index_;
  }
  const std::vector<std::string> &warnings() const { return warnings_; }
  const std::string &fingerprint() const { return fingerprint_; }

  std::size_t class_count() const { return by_class_.size(); }
  std::size_t flattened_method_count() const {
    std::size_t n = 0;
    for (const auto &[_, entry] : by_class_)
      n += entry.method_count();
    return n;
  }

  static std::uint64_t supertype_walk_count() { return detail::supertype_walks; }
  static void reset_supertype_walk_count() { detail::supertype_walks = 0; }

private:
  friend class SymbolTableCodec; // persistence, see table_io.hpp

  struct Builder {
    const RawApiSpec &spec;
    std::unordered_map<std::string, const RawClass *> by_binary;
    enum class State { Unvisited, InProgress, Done };
    std::unordered_map<std::string, State> state;
    std::unordered_map<std::string, ClassEntry> flattened;
    std::vector<std::string> warnings;

    explicit Builder(const RawApiSpec &s) : spec(s) {
      for (const auto &cls : spec.classes)
        by_binary.emplace(cls.binary_name, &cls);
    }

    void run(SymbolTable &out) {
      for (const auto &cls : spec.classes)
        flatten(cls.binary_name);
      for (const auto &cls : spec.classes) {
        auto entry = std::move(flattened.at(cls.binary_name));
        out.by_class_.emplace(entry.name, std::move(entry));
      }
      out.warnings_ = std::move(warnings);
    }

    const ClassEntry &flatten(const std::string &binary) {
      auto &st = state[binary];
      if (st == State::Done)
        return flattened.at(binary);
      // In-progress means we looped back to an ancestor: break the cycle by
      // letting it contribute nothing to its own descendants.
      if (st == State::InProgress) {
        warnings.push_back("inheritance cycle involving " + binary +
                           "; cycle edge ignored");
        static const ClassEntry empty{};
        return empty;
      }
      st = State::InProgress;

      const RawClass &raw = *by_binary.at(binary);
      ClassEntry entry;
      entry.name = QualifiedName::from_binary(binary);

      for (const auto &field : raw.fields)
        entry.constants.insert(field);
      for (const auto &descriptor : raw.methods) {
        MethodSig sig;
        try {
          sig = decode_descriptor(descriptor);
        } catch (const BadDescriptor &e) {
          warnings.push_back("skipping undecodable method on " + binary +
                             ": " + e.what());
          continue;
        }
        sig.declaring_class = entry.name;
        add_method(entry, std::move(sig));
      }

      // Declared members are in place; merge supertypes so the nearest
      // declaration wins for identical name+params (covariant overrides).
      auto merge_super = [&](const std::string &super_binary) {
        detail::supertype_walks += 1;
        auto it = by_binary.find(super_binary);
        if (it == by_binary.end()) {
          entry.external_supers.push_back(super_binary);
          return;
        }
        const ClassEntry &super_entry = flatten(super_binary);
        for (const auto &c : super_entry.constants)
          entry.constants.insert(c);
        for (const auto &[_, sigs] : super_entry.methods_by_name)
          for (const auto &sig : sigs)
            add_method(entry, sig);
        for (const auto &ext : super_entry.external_supers)
          if (std::find(entry.external_supers.begin(),
                        entry.external_supers.end(),
                        ext) == entry.external_supers.end())
            entry.external_supers.push_back(ext);
      };
      if (raw.super_name)
        merge_super(*raw.super_name);
      for (const auto &iface : raw.interfaces)
        merge_super(iface);

      state[binary] = State::Done;
      return flattened.emplace(binary, std::move(entry)).first->second;
    }

    /// Inserts unless an identical name+paramTypes signature exists; earlier
    /// insertions (the most-derived declaration) win the return type.
    static void add_method(ClassEntry &entry, MethodSig sig) {
      auto &sigs = entry.methods_by_name[sig.name];
      for (const auto &existing : sigs)
        if (existing.param_types == sig.param_types)
          return;
      sigs.push_back(std::move(sig));
    }
  };

  void rebuild_simple_index() {
    simple_index_.clear();
    for (const auto &[name, _] : by_class_)
      simple_index_[std::string(name.simple_name())].insert(name);
  }

  std::map<QualifiedName, ClassEntry> by_class_;
  std::map<std::string, std::set<QualifiedName>> simple_index_;
  std::vector<std::string> warnings_;
  std::string fingerprint_;
};

} // namespace phantomlint
