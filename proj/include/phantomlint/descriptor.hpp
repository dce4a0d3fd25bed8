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
#include <vector>

#include "phantomlint/errors.hpp"
#include "phantomlint/names.hpp"

namespace phantomlint {

/// One decoded parameter or return type. Object types keep their original
/// binary spelling so re-encoding is lossless (`$` vs `/` cannot be
/// recovered from the dotted form).
struct TypeName {
  enum class Kind { Void, Primitive, Object };

  Kind kind = Kind::Void;
  char primitive = 0;   // JVM code, one of B C D F I J S Z
  std::string binary;   // slash/dollar form, Object only
  int array_dims = 0;

  bool is_void() const { return kind == Kind::Void; }

  static TypeName void_type() { return TypeName{}; }

  static TypeName primitive_type(char code, int dims = 0) {
    TypeName t;
    t.kind = Kind::Primitive;
    t.primitive = code;
    t.array_dims = dims;
    return t;
  }

  static TypeName object_type(std::string binary_name, int dims = 0) {
    TypeName t;
    t.kind = Kind::Object;
    t.binary = std::move(binary_name);
    t.array_dims = dims;
    return t;
  }

  /// Canonical dotted name of the element type (Object only).
  QualifiedName qualified() const {
    return QualifiedName::from_binary(binary);
  }

  /// Java-facing rendering: `int`, `int[][]`,
  /// `android.media.AudioAttributes.Builder`.
  std::string pretty() const {
    std::string base;
    switch (kind) {
    case Kind::Void:
      base = "void";
      break;
    case Kind::Primitive:
      base = primitive_keyword(primitive);
      break;
    case Kind::Object:
      base = canonical_name(binary);
      break;
    }
    for (int i = 0; i < array_dims; ++i)
      base += "[]";
    return base;
  }

  /// Re-encodes the JVM descriptor fragment for this type.
  std::string descriptor() const {
    std::string out(static_cast<std::size_t>(array_dims), '[');
    switch (kind) {
    case Kind::Void:
      out.push_back('V');
      break;
    case Kind::Primitive:
      out.push_back(primitive);
      break;
    case Kind::Object:
      out.push_back('L');
      out += binary;
      out.push_back(';');
      break;
    }
    return out;
  }

  static const char *primitive_keyword(char code) {
    switch (code) {
    case 'B': return "byte";
    case 'C': return "char";
    case 'D': return "double";
    case 'F': return "float";
    case 'I': return "int";
    case 'J': return "long";
    case 'S': return "short";
    case 'Z': return "boolean";
    default: return "?";
    }
  }

  friend bool operator==(const TypeName &, const TypeName &) = default;
};

/// A decoded method signature, e.g. `setUsage(int)` returning
/// `android.media.AudioAttributes.Builder`.
struct MethodSig {
  std::string name;
  std::vector<TypeName> param_types;
  TypeName return_type;
  QualifiedName declaring_class;

  int arity() const { return static_cast<int>(param_types.size()); }

  /// Re-encodes `name(paramDescriptors)returnDescriptor`.
  std::string descriptor() const {
    std::string out = name;
    out.push_back('(');
    for (const auto &p : param_types)
      out += p.descriptor();
    out.push_back(')');
    out += return_type.descriptor();
    return out;
  }

  /// `setUsage(int)`, the rendering used in explanations.
  std::string pretty() const {
    std::string out = name;
    out.push_back('(');
    for (std::size_t i = 0; i < param_types.size(); ++i) {
      if (i)
        out += ", ";
      out += param_types[i].pretty();
    }
    out.push_back(')');
    return out;
  }

  friend bool operator==(const MethodSig &, const MethodSig &) = default;
};

namespace detail {

inline bool is_base_type_code(char c) {
  switch (c) {
  case 'B': case 'C': case 'D': case 'F':
  case 'I': case 'J': case 'S': case 'Z':
    return true;
  default:
    return false;
  }
}

/// Decodes one field-type fragment starting at `pos`; advances `pos` past it.
inline TypeName decode_type_at(std::string_view raw, std::size_t &pos,
                               bool allow_void) {
  int dims = 0;
  while (pos < raw.size() && raw[pos] == '[') {
    ++dims;
    ++pos;
  }
  if (pos >= raw.size())
    throw BadDescriptor("truncated type in descriptor: " + std::string(raw));
  char c = raw[pos];
  if (c == 'V') {
    if (!allow_void || dims != 0)
      throw BadDescriptor("void is only legal as a plain return type: " +
                          std::string(raw));
    ++pos;
    return TypeName::void_type();
  }
  if (is_base_type_code(c)) {
    ++pos;
    return TypeName::primitive_type(c, dims);
  }
  if (c == 'L') {
    auto end = raw.find(';', pos + 1);
    if (end == std::string_view::npos)
      throw BadDescriptor("unterminated object type in descriptor: " +
                          std::string(raw));
    std::string binary(raw.substr(pos + 1, end - pos - 1));
    if (binary.empty())
      throw BadDescriptor("empty object type in descriptor: " +
                          std::string(raw));
    pos = end + 1;
    return TypeName::object_type(std::move(binary), dims);
  }
  throw BadDescriptor("unexpected character '" + std::string(1, c) +
                      "' in descriptor: " + std::string(raw));
}

} // namespace detail

/// Decodes `name(paramDescriptors)returnDescriptor`. The declaring class is
/// filled in by the caller (the spec lists descriptors per class).
inline MethodSig decode_descriptor(std::string_view raw) {
  auto open = raw.find('(');
  if (open == std::string_view::npos || open == 0)
    throw BadDescriptor("descriptor lacks a name(params) shape: " +
                        std::string(raw));
  MethodSig sig;
  sig.name = std::string(raw.substr(0, open));

  std::size_t pos = open + 1;
  while (pos < raw.size() && raw[pos] != ')')
    sig.param_types.push_back(detail::decode_type_at(raw, pos, false));
  if (pos >= raw.size() || raw[pos] != ')')
    throw BadDescriptor("unterminated parameter list: " + std::string(raw));
  ++pos;

  sig.return_type = detail::decode_type_at(raw, pos, true);
  if (pos != raw.size())
    throw BadDescriptor("trailing characters after return type: " +
                        std::string(raw));
  return sig;
}

} // namespace phantomlint
