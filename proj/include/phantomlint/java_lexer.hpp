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

#include "phantomlint/source.hpp"

namespace phantomlint {

/// Token stream over Java-syntax text. Lexing never fails: anything the
/// lexer cannot classify becomes a punctuation token or a diagnostic, so
/// downstream recovery always has something to resynchronize on.
struct Token {
  enum class Kind { Identifier, Number, String, CharLit, Punct, End };

  Kind kind = Kind::End;
  std::string text;
  SourcePos pos;

  bool is_punct(std::string_view p) const {
    return kind == Kind::Punct && text == p;
  }
  bool is_ident() const { return kind == Kind::Identifier; }
  bool is_ident(std::string_view name) const {
    return kind == Kind::Identifier && text == name;
  }
  bool is_end() const { return kind == Kind::End; }
  bool is_literal() const {
    return kind == Kind::Number || kind == Kind::String ||
           kind == Kind::CharLit;
  }
};

inline bool is_java_ident_start(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_' ||
         c == '$';
}

inline bool is_java_ident_part(char c) {
  return is_java_ident_start(c) || (c >= '0' && c <= '9');
}

inline std::vector<Token> lex_java(std::string_view src,
                                   std::vector<Diagnostic> *diags = nullptr) {
  std::vector<Token> tokens;
  SourcePos pos;
  std::size_t i = 0;
  auto advance = [&](std::size_t count = 1) {
    for (std::size_t k = 0; k < count && i < src.size(); ++k) {
      if (src[i] == '\n') {
        ++pos.line;
        pos.column = 1;
      } else {
        ++pos.column;
      }
      ++i;
    }
  };
  auto note = [&](SourcePos at, std::string message) {
    if (diags)
      diags->push_back({at, std::move(message)});
  };

  while (i < src.size()) {
    char c = src[i];
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      advance();
      continue;
    }
    // line comment
    if (c == '/' && i + 1 < src.size() && src[i + 1] == '/') {
      while (i < src.size() && src[i] != '\n')
        advance();
      continue;
    }
    // block comment
    if (c == '/' && i + 1 < src.size() && src[i + 1] == '*') {
      SourcePos start = pos;
      advance(2);
      bool closed = false;
      while (i < src.size()) {
        if (src[i] == '*' && i + 1 < src.size() && src[i + 1] == '/') {
          advance(2);
          closed = true;
          break;
        }
        advance();
      }
      if (!closed)
        note(start, "unterminated block comment");
      continue;
    }
    if (is_java_ident_start(c)) {
      Token t{Token::Kind::Identifier, {}, pos};
      while (i < src.size() && is_java_ident_part(src[i])) {
        t.text.push_back(src[i]);
        advance();
      }
      tokens.push_back(std::move(t));
      continue;
    }
    if (c >= '0' && c <= '9') {
      Token t{Token::Kind::Number, {}, pos};
      // Good enough for extraction: digits plus the usual suffix soup.
      while (i < src.size() &&
             (is_java_ident_part(src[i]) || src[i] == '.' ||
              ((src[i] == '+' || src[i] == '-') && !t.text.empty() &&
               (t.text.back() == 'e' || t.text.back() == 'E')))) {
        t.text.push_back(src[i]);
        advance();
      }
      tokens.push_back(std::move(t));
      continue;
    }
    if (c == '"' || c == '\'') {
      char quote = c;
      Token t{quote == '"' ? Token::Kind::String : Token::Kind::CharLit,
              {}, pos};
      SourcePos start = pos;
      advance();
      bool closed = false;
      while (i < src.size()) {
        if (src[i] == '\\' && i + 1 < src.size()) {
          t.text.push_back(src[i]);
          t.text.push_back(src[i + 1]);
          advance(2);
          continue;
        }
        if (src[i] == quote) {
          advance();
          closed = true;
          break;
        }
        if (src[i] == '\n')
          break; // string literals do not span lines
        t.text.push_back(src[i]);
        advance();
      }
      if (!closed)
        note(start, "unterminated literal");
      tokens.push_back(std::move(t));
      continue;
    }
    // multi-char punctuation that changes parse structure
    if (c == ':' && i + 1 < src.size() && src[i + 1] == ':') {
      tokens.push_back({Token::Kind::Punct, "::", pos});
      advance(2);
      continue;
    }
    if (c == '-' && i + 1 < src.size() && src[i + 1] == '>') {
      tokens.push_back({Token::Kind::Punct, "->", pos});
      advance(2);
      continue;
    }
    // compound assignment / comparison operators collapse to one token so
    // `a += b` is never mistaken for a plain `=` binding
    static const char *two_char_ops[] = {"==", "!=", "<=", ">=", "&&", "||",
                                         "+=", "-=", "*=", "/=", "%=", "&=",
                                         "|=", "^=", "++", "--", "<<", ">>"};
    bool matched = false;
    for (const char *op : two_char_ops) {
      if (c == op[0] && i + 1 < src.size() && src[i + 1] == op[1]) {
        tokens.push_back({Token::Kind::Punct, op, pos});
        advance(2);
        matched = true;
        break;
      }
    }
    if (matched)
      continue;
    tokens.push_back({Token::Kind::Punct, std::string(1, c), pos});
    advance();
  }
  tokens.push_back({Token::Kind::End, "", pos});
  return tokens;
}

} // namespace phantomlint
