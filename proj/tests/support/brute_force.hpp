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

// Independent reference implementations used as test oracles. These walk the
// raw declared hierarchy on every query instead of consulting the flattened
// table, so they share no lookup path with the code under test.

#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "phantomlint/api_spec.hpp"
#include "phantomlint/descriptor.hpp"
#include "phantomlint/names.hpp"

namespace bruteforce {

using phantomlint::MethodSig;
using phantomlint::QualifiedName;
using phantomlint::RawApiSpec;
using phantomlint::RawClass;

class HierarchyWalker {
public:
  explicit HierarchyWalker(const RawApiSpec &spec) {
    for (const auto &cls : spec.classes) {
      by_binary_.emplace(cls.binary_name, &cls);
      by_canonical_.emplace(phantomlint::canonical_name(cls.binary_name),
                            &cls);
    }
  }

  bool knows(const QualifiedName &cls) const {
    return by_canonical_.count(cls.value) != 0;
  }

  /// Classes reachable from `cls` through extends/implements edges, in
  /// precedence order: the class itself, then each supertype subtree
  /// (extends before implements), depth first, first visit wins.
  std::vector<const RawClass *> precedence_order(const QualifiedName &cls) const {
    std::vector<const RawClass *> order;
    auto it = by_canonical_.find(cls.value);
    if (it == by_canonical_.end())
      return order;
    std::set<std::string> visited;
    walk(it->second, visited, order);
    return order;
  }

  bool has_field(const QualifiedName &cls, const std::string &field) const {
    for (const RawClass *c : precedence_order(cls))
      for (const auto &f : c->fields)
        if (f == field)
          return true;
    return false;
  }

  /// All signatures named `method` visible on `cls`, deduplicated by
  /// name+paramTypes with the nearest declaration winning, optionally
  /// filtered by arity. Empty when the member is absent; nullopt when the
  /// class is not declared at all.
  std::optional<std::vector<MethodSig>>
  collect(const QualifiedName &cls, const std::string &method,
          std::optional<int> arity = std::nullopt) const {
    if (!knows(cls))
      return std::nullopt;
    std::vector<MethodSig> out;
    for (const RawClass *c : precedence_order(cls)) {
      for (const auto &raw : c->methods) {
        MethodSig sig;
        try {
          sig = phantomlint::decode_descriptor(raw);
        } catch (const phantomlint::BadDescriptor &) {
          continue;
        }
        if (sig.name != method)
          continue;
        sig.declaring_class = QualifiedName::from_binary(c->binary_name);
        bool duplicate = false;
        for (const auto &existing : out)
          if (existing.param_types == sig.param_types)
            duplicate = true;
        if (!duplicate)
          out.push_back(std::move(sig));
      }
    }
    if (arity) {
      std::vector<MethodSig> filtered;
      for (auto &sig : out)
        if (sig.arity() == *arity)
          filtered.push_back(std::move(sig));
      return filtered;
    }
    return out;
  }

  bool has_method(const QualifiedName &cls, const std::string &method) const {
    auto sigs = collect(cls, method);
    return sigs && !sigs->empty();
  }

private:
  void walk(const RawClass *cls, std::set<std::string> &visited,
            std::vector<const RawClass *> &order) const {
    if (!visited.insert(cls->binary_name).second)
      return;
    order.push_back(cls);
    auto descend = [&](const std::string &binary) {
      auto it = by_binary_.find(binary);
      if (it != by_binary_.end())
        walk(it->second, visited, order);
    };
    if (cls->super_name)
      descend(*cls->super_name);
    for (const auto &iface : cls->interfaces)
      descend(iface);
  }

  std::map<std::string, const RawClass *> by_binary_;
  std::map<std::string, const RawClass *> by_canonical_;
};

/// Reference interpretation of a single invocation chain, mirroring the
/// decision rules of the verifier but resolving every membership and return
/// type by walking the raw hierarchy.
struct ChainVerdict {
  enum class Kind { Clean, PhantomMember, BrokenChain, HaltedUnresolved, RootUnknown };
  Kind kind = Kind::Clean;
  std::string symbol;     // offending method, when any
  std::string on_type;    // type consulted
  int break_index = -1;   // 0-based call index where the chain stopped
};

struct ChainCallSpec {
  std::string method;
  int arg_count = 0;
};

inline ChainVerdict interpret_chain(const HierarchyWalker &walker,
                                    const QualifiedName &root_type,
                                    const std::vector<ChainCallSpec> &calls,
                                    bool arity_mode) {
  ChainVerdict verdict;
  if (!walker.knows(root_type)) {
    verdict.kind = ChainVerdict::Kind::RootUnknown;
    return verdict;
  }
  QualifiedName current = root_type;
  for (std::size_t i = 0; i < calls.size(); ++i) {
    if (!walker.knows(current)) {
      verdict.kind = ChainVerdict::Kind::HaltedUnresolved;
      verdict.break_index = static_cast<int>(i);
      return verdict;
    }
    std::optional<int> arity;
    if (arity_mode)
      arity = calls[i].arg_count;
    auto sigs = walker.collect(current, calls[i].method, arity);
    if (!sigs || sigs->empty()) {
      verdict.kind = ChainVerdict::Kind::PhantomMember;
      verdict.symbol = calls[i].method;
      verdict.on_type = current.value;
      verdict.break_index = static_cast<int>(i);
      return verdict;
    }
    std::set<std::string> returns;
    for (const auto &sig : *sigs)
      returns.insert(sig.return_type.descriptor());
    if (returns.size() > 1) {
      verdict.kind = ChainVerdict::Kind::HaltedUnresolved;
      verdict.break_index = static_cast<int>(i);
      return verdict;
    }
    const auto &ret = sigs->front().return_type;
    if (ret.is_void()) {
      if (i + 1 < calls.size()) {
        verdict.kind = ChainVerdict::Kind::BrokenChain;
        verdict.symbol = calls[i].method;
        verdict.on_type = current.value;
        verdict.break_index = static_cast<int>(i);
        return verdict;
      }
      return verdict; // void terminal call is fine
    }
    if (ret.kind != phantomlint::TypeName::Kind::Object || ret.array_dims > 0) {
      if (i + 1 < calls.size()) {
        verdict.kind = ChainVerdict::Kind::HaltedUnresolved;
        verdict.break_index = static_cast<int>(i + 1);
        return verdict;
      }
      return verdict;
    }
    current = ret.qualified();
  }
  return verdict;
}

} // namespace bruteforce
