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

#include <compare>
#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace phantomlint {

/// Canonicalizes a JVM binary name: `/` and `$` both become `.`.
/// Already-canonical names pass through unchanged, so the mapping is
/// idempotent.
inline std::string canonical_name(std::string_view binary) {
  std::string out;
  out.reserve(binary.size());
  for (char c : binary)
    out.push_back(c == '/' || c == '$' ? '.' : c);
  return out;
}

/// Dot-separated package + nested-class path,
/// e.g. `android.media.AudioAttributes.Builder`.
struct QualifiedName {
  std::string value;

  QualifiedName() = default;
  explicit QualifiedName(std::string v) : value(std::move(v)) {}

  static QualifiedName from_binary(std::string_view binary) {
    return QualifiedName(canonical_name(binary));
  }

  bool empty() const { return value.empty(); }

  /// Last dotted segment (`Builder` for `a.b.Outer.Builder`).
  std::string_view simple_name() const {
    auto dot = value.rfind('.');
    return dot == std::string::npos ? std::string_view(value)
                                    : std::string_view(value).substr(dot + 1);
  }

  friend auto operator<=>(const QualifiedName &, const QualifiedName &) = default;
};

/// Import context for resolving simple names, collected from `import`
/// statements of the snippet plus any legacy-context document.
struct ImportSet {
  std::map<std::string, QualifiedName> explicit_imports; // simple -> qualified
  std::vector<std::string> wildcard_prefixes;            // `a.b` from `a.b.*`

  void add_explicit(QualifiedName q) {
    std::string simple(q.simple_name());
    explicit_imports.emplace(std::move(simple), std::move(q));
  }

  void add_wildcard(std::string prefix) {
    for (const auto &p : wildcard_prefixes)
      if (p == prefix)
        return;
    wildcard_prefixes.push_back(std::move(prefix));
  }

  /// Adds entries from `other` that are not already present. Existing
  /// entries win, so snippet-local imports shadow merged context.
  void merge(const ImportSet &other) {
    for (const auto &[simple, q] : other.explicit_imports)
      explicit_imports.emplace(simple, q);
    for (const auto &p : other.wildcard_prefixes)
      add_wildcard(p);
  }

  bool empty() const {
    return explicit_imports.empty() && wildcard_prefixes.empty();
  }
};

} // namespace phantomlint

template <> struct std::hash<phantomlint::QualifiedName> {
  std::size_t operator()(const phantomlint::QualifiedName &q) const noexcept {
    return std::hash<std::string>{}(q.value);
  }
};
