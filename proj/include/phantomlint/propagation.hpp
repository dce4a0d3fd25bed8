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

#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "phantomlint/descriptor.hpp"
#include "phantomlint/names.hpp"
#include "phantomlint/source.hpp"
#include "phantomlint/symbol_table.hpp"

namespace phantomlint {

/// One `.method(args)` step of an invocation sequence.
struct ChainCall {
  std::string method;
  int arg_count = 0;
  SourcePos pos;
};

struct CheckOptions {
  /// Strict mode: member lookups also require a matching parameter count,
  /// so a right-named call with the wrong arity becomes a phantom member.
  bool arity_mode = false;
};

/// Left-to-right walk of an invocation sequence against the oracle: resolve
/// the root type, then for each call require membership, take the unique
/// return type, flag chains that continue past void, and otherwise carry the
/// return type forward. Ambiguity halts silently; it never produces a
/// finding.
struct ChainOutcome {
  enum class Status {
    Clean,         // every call verified
    PhantomMember, // call absent from the current type
    BrokenChain,   // void return followed by another call
    Halted,        // lost the type (ambiguous returns, unknown class, primitive)
    RootUnknown,   // root type not in the table at all
  };

  Status status = Status::Clean;
  int index = -1;           // call index the walk stopped at
  std::string symbol;       // offending method for the two finding states
  QualifiedName on_type;    // type consulted at the stop point
  // Final propagated type when the walk stayed clean to the end.
  std::optional<TypeName> final_type;
};

inline ChainOutcome propagate_chain(const QualifiedName &root_type,
                                    std::span<const ChainCall> calls,
                                    const SymbolTable &table,
                                    const CheckOptions &options = {}) {
  ChainOutcome out;
  if (!table.has_class(root_type)) {
    out.status = ChainOutcome::Status::RootUnknown;
    return out;
  }
  QualifiedName current = root_type;
  // Dotted names contain no `/` or `$`, so this rendering is stable.
  out.final_type = TypeName::object_type(current.value);

  for (std::size_t i = 0; i < calls.size(); ++i) {
    std::optional<int> arity;
    if (options.arity_mode)
      arity = calls[i].arg_count;
    auto sigs = table.lookup_member(current, calls[i].method, arity);
    if (!sigs) {
      out.status = ChainOutcome::Status::Halted;
      out.index = static_cast<int>(i);
      out.final_type.reset();
      return out;
    }
    if (sigs->empty()) {
      out.status = ChainOutcome::Status::PhantomMember;
      out.index = static_cast<int>(i);
      out.symbol = calls[i].method;
      out.on_type = current;
      out.final_type.reset();
      return out;
    }
    std::set<std::string> distinct_returns;
    for (const auto &sig : *sigs)
      distinct_returns.insert(sig.return_type.descriptor());
    if (distinct_returns.size() > 1) {
      out.status = ChainOutcome::Status::Halted;
      out.index = static_cast<int>(i);
      out.final_type.reset();
      return out;
    }

    const TypeName &ret = sigs->front().return_type;
    if (ret.is_void()) {
      if (i + 1 < calls.size()) {
        out.status = ChainOutcome::Status::BrokenChain;
        out.index = static_cast<int>(i);
        out.symbol = calls[i].method;
        out.on_type = current;
        out.final_type.reset();
        return out;
      }
      out.final_type = ret;
      return out;
    }
    if (ret.kind != TypeName::Kind::Object || ret.array_dims > 0) {
      // primitives and arrays carry no further navigable members
      if (i + 1 < calls.size()) {
        out.status = ChainOutcome::Status::Halted;
        out.index = static_cast<int>(i + 1);
        out.final_type.reset();
        return out;
      }
      out.final_type = ret;
      return out;
    }
    current = ret.qualified();
    out.final_type = ret;
  }
  return out;
}

} // namespace phantomlint
