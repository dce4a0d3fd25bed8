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

// Tolerant parser for Java-syntax snippets. Patches are routinely partial:
// statements that do not parse are skipped line by line and recorded as
// diagnostics so their siblings still go through extraction. Parsing never
// throws.

#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "phantomlint/java_lexer.hpp"
#include "phantomlint/names.hpp"
#include "phantomlint/source.hpp"

namespace phantomlint {

struct Statement;
struct Expression;
using ExpressionPtr = std::unique_ptr<Expression>;
using StatementPtr = std::unique_ptr<Statement>;

/// One `.name`, `.name(args)`, `[index]` or `::name` applied to a base.
struct PostfixSeg {
  enum class Kind { Member, Call, Index, MethodRef };
  Kind kind = Kind::Member;
  std::string name;
  SourcePos pos;
  std::vector<ExpressionPtr> args; // Call arguments / index expression
};

struct Expression {
  enum class Kind {
    Name,      // dotted identifier path (`a`, `a.b.C`, `this`)
    Literal,   // number / string / char / true / false / null
    New,       // `new T(args)` with optional anonymous body
    NewArray,  // `new T[dims]{init}`
    Cast,      // `(T) operand`
    Lambda,    // `params -> body`
    Operators, // flat operand list joined by uninterpreted operators
    Assign,    // `target = value` where target is a plain identifier
  };

  Kind kind = Kind::Literal;
  SourcePos pos;

  // Name
  std::vector<std::string> name_segments;
  std::vector<SourcePos> name_positions;

  // New / NewArray / Cast
  std::string type_text; // dotted, generics erased, `[]` per array dim
  SourcePos type_pos;
  std::vector<ExpressionPtr> call_args; // New constructor arguments
  StatementPtr anon_body;               // New: anonymous class body block

  // Cast operand / Assign value
  ExpressionPtr operand;

  // Operators operands, NewArray dims + initializer elements, Lambda body
  // expression(s)
  std::vector<ExpressionPtr> operands;
  StatementPtr lambda_block; // Lambda with a `{ ... }` body

  // Assign
  std::string assign_target;
  SourcePos assign_target_pos;

  // Postfix chain applied to this node, in source order.
  std::vector<PostfixSeg> postfix;
};

struct Statement {
  enum class Kind {
    Import,
    LocalDecl,
    ExprStmt,
    Return,
    Compound, // block / control statement / method / class wrapper
    Skipped,
    Empty,
  };

  Kind kind = Kind::Empty;
  SourcePos pos;

  // Import
  std::string import_name; // dotted, without trailing `.*`
  bool import_wildcard = false;
  bool import_static = false;

  // LocalDecl (also parameters and resources on Compound)
  std::string decl_type_text;
  SourcePos decl_type_pos;
  struct Declarator {
    std::string name;
    SourcePos pos;
    ExpressionPtr init;
  };
  std::vector<Declarator> declarators;

  // ExprStmt / Return
  ExpressionPtr expr;

  // Compound
  std::string compound_kind; // "block", "if", "for", "method", "class", ...
  std::vector<ExpressionPtr> header_exprs;
  std::vector<Statement> children;

  // Skipped
  std::string skipped_text;
};

struct SyntaxTree {
  std::vector<Statement> statements;
  ImportSet imports;
  std::vector<Diagnostic> diagnostics;
};

namespace detail {

class SnippetParser {
public:
  explicit SnippetParser(std::string_view source) {
    tokens_ = lex_java(source, &tree_.diagnostics);
  }

  SyntaxTree run() {
    while (!at_end()) {
      if (cur().is_punct("}")) {
        // stray close brace from a partial snippet
        advance();
        continue;
      }
      auto stmt = parse_statement();
      if (stmt)
        tree_.statements.push_back(std::move(*stmt));
    }
    return std::move(tree_);
  }

private:
  SyntaxTree tree_;
  std::vector<Token> tokens_;
  std::size_t index_ = 0;

  const Token &cur() const { return tokens_[index_]; }
  const Token &peek(std::size_t ahead = 1) const {
    std::size_t i = index_ + ahead;
    return i < tokens_.size() ? tokens_[i] : tokens_.back();
  }
  bool at_end() const { return cur().is_end(); }
  void advance() {
    if (!at_end())
      ++index_;
  }
  bool accept_punct(std::string_view p) {
    if (cur().is_punct(p)) {
      advance();
      return true;
    }
    return false;
  }
  void diag(SourcePos pos, std::string message) {
    tree_.diagnostics.push_back({pos, std::move(message)});
  }

  static bool is_modifier(const std::string &word) {
    return word == "public" || word == "private" || word == "protected" ||
           word == "static" || word == "final" || word == "abstract" ||
           word == "native" || word == "transient" || word == "volatile" ||
           word == "strictfp" || word == "default";
  }

  static bool is_primitive_keyword(const std::string &word) {
    return word == "int" || word == "long" || word == "short" ||
           word == "byte" || word == "char" || word == "boolean" ||
           word == "float" || word == "double" || word == "void";
  }

  static bool is_reserved_expression_word(const std::string &word) {
    return word == "if" || word == "else" || word == "while" ||
           word == "for" || word == "do" || word == "switch" ||
           word == "case" || word == "return" || word == "throw" ||
           word == "try" || word == "catch" || word == "finally" ||
           word == "break" || word == "continue" || word == "new" ||
           word == "instanceof" || word == "class" || word == "import" ||
           word == "package";
  }

  struct ParsedType {
    std::string text;
    SourcePos pos;
    int array_dims = 0;
    bool primitive = false;
    bool valid = false;
  };

  // ---- recovery ------------------------------------------------------

  /// Consumes the rest of the failed statement's line (plus a trailing `;`)
  /// and records it as a skipped region, so the neighbouring statements
  /// still extract.
  Statement skip_line(SourcePos from, const char *why) {
    Statement s;
    s.kind = Statement::Kind::Skipped;
    s.pos = from;
    int line = cur().pos.line;
    while (!at_end() && cur().pos.line == line && !cur().is_punct("{") &&
           !cur().is_punct("}")) {
      bool was_semi = cur().is_punct(";");
      if (!s.skipped_text.empty())
        s.skipped_text.push_back(' ');
      s.skipped_text += cur().text;
      advance();
      if (was_semi)
        break;
    }
    diag(from, std::string(why) + ": '" + s.skipped_text + "'");
    return s;
  }

  // ---- statements ----------------------------------------------------

  std::optional<Statement> parse_statement() {
    while (cur().is_punct("@"))
      skip_annotation();
    if (at_end())
      return std::nullopt;

    if (cur().is_punct(";")) {
      Statement s;
      s.pos = cur().pos;
      advance();
      return s;
    }
    if (cur().is_punct("{"))
      return parse_block("block");

    if (cur().is_ident()) {
      const std::string &word = cur().text;

      // statement label `name:`
      if (peek().is_punct(":") && !is_reserved_expression_word(word)) {
        advance();
        advance();
        return parse_statement();
      }

      if (word == "import")
        return parse_import();
      if (word == "package") {
        consume_to_semicolon();
        Statement s;
        return s;
      }
      if (word == "if")
        return parse_if();
      if (word == "while")
        return parse_paren_control("while");
      if (word == "switch")
        return parse_switch();
      if (word == "synchronized" && peek().is_punct("("))
        return parse_paren_control("synchronized");
      if (word == "for")
        return parse_for();
      if (word == "do")
        return parse_do();
      if (word == "try")
        return parse_try();
      if (word == "catch" || word == "finally" || word == "else") {
        // dangling clause from a partial snippet; keep its body reachable
        return parse_dangling_clause(word);
      }
      if (word == "return" || word == "throw")
        return parse_return(word);
      if (word == "break" || word == "continue") {
        consume_to_semicolon();
        Statement s;
        return s;
      }
      if (word == "class" || word == "interface" || word == "enum" ||
          (word == "record" && peek().is_ident() && peek(2).is_punct("(")))
        return parse_class_wrapper();
      if (is_modifier(word)) {
        advance();
        return parse_statement();
      }
    }

    return parse_decl_or_expression();
  }

  void skip_annotation() {
    advance(); // '@'
    if (cur().is_ident()) {
      advance();
      while (cur().is_punct(".") && peek().is_ident()) {
        advance();
        advance();
      }
      if (cur().is_punct("("))
        skip_balanced("(", ")");
    }
  }

  void consume_to_semicolon() {
    while (!at_end() && !cur().is_punct(";") && !cur().is_punct("}"))
      advance();
    accept_punct(";");
  }

  /// Consumes from an opening bracket through its match, tolerating EOF.
  void skip_balanced(std::string_view open, std::string_view close) {
    if (!cur().is_punct(open))
      return;
    int depth = 0;
    while (!at_end()) {
      if (cur().is_punct(open))
        ++depth;
      else if (cur().is_punct(close)) {
        --depth;
        if (depth == 0) {
          advance();
          return;
        }
      }
      advance();
    }
  }

  Statement parse_import() {
    Statement s;
    s.kind = Statement::Kind::Import;
    s.pos = cur().pos;
    advance(); // import
    if (cur().is_ident("static")) {
      s.import_static = true;
      advance();
    }
    std::vector<std::string> segments;
    bool wildcard = false;
    while (cur().is_ident()) {
      segments.push_back(cur().text);
      advance();
      if (!accept_punct("."))
        break;
      if (cur().is_punct("*")) {
        wildcard = true;
        advance();
        break;
      }
    }
    accept_punct(";");
    if (segments.empty()) {
      diag(s.pos, "empty import statement");
      s.kind = Statement::Kind::Empty;
      return s;
    }
    if (s.import_static && !wildcard && segments.size() >= 2) {
      // `import static a.b.C.MEMBER;`: the usable class name is a.b.C.
      segments.pop_back();
    }
    std::string joined;
    for (std::size_t i = 0; i < segments.size(); ++i) {
      if (i)
        joined.push_back('.');
      joined += segments[i];
    }
    s.import_name = joined;
    s.import_wildcard = wildcard;
    if (wildcard)
      tree_.imports.add_wildcard(joined);
    else
      tree_.imports.add_explicit(QualifiedName(joined));
    return s;
  }

  Statement parse_block(const char *kind_label) {
    Statement s;
    s.kind = Statement::Kind::Compound;
    s.compound_kind = kind_label;
    s.pos = cur().pos;
    if (!accept_punct("{"))
      return s;
    while (!at_end() && !cur().is_punct("}")) {
      auto child = parse_statement();
      if (child)
        s.children.push_back(std::move(*child));
    }
    if (!accept_punct("}"))
      diag(s.pos, "unterminated block");
    return s;
  }

  void parse_body_into(Statement &s) {
    if (cur().is_punct("{")) {
      s.children.push_back(parse_block("block"));
      return;
    }
    auto child = parse_statement();
    if (child)
      s.children.push_back(std::move(*child));
  }

  Statement parse_if() {
    Statement s;
    s.kind = Statement::Kind::Compound;
    s.compound_kind = "if";
    s.pos = cur().pos;
    advance();
    parse_header_parens(s);
    parse_body_into(s);
    if (cur().is_ident("else")) {
      advance();
      parse_body_into(s);
    }
    return s;
  }

  Statement parse_paren_control(const char *label) {
    Statement s;
    s.kind = Statement::Kind::Compound;
    s.compound_kind = label;
    s.pos = cur().pos;
    advance();
    parse_header_parens(s);
    parse_body_into(s);
    return s;
  }

  /// `( expr [, expr ...] )`; expressions land in header_exprs, anything
  /// unparseable inside is skipped up to the closing paren.
  void parse_header_parens(Statement &s) {
    if (!accept_punct("("))
      return;
    int guard = 0;
    while (!at_end() && !cur().is_punct(")")) {
      auto e = parse_expression();
      if (e)
        s.header_exprs.push_back(std::move(e));
      if (cur().is_punct(",") || cur().is_punct(";")) {
        advance();
        continue;
      }
      if (!cur().is_punct(")")) {
        if (++guard > 512)
          break;
        advance();
      }
    }
    accept_punct(")");
  }

  Statement parse_switch() {
    Statement s;
    s.kind = Statement::Kind::Compound;
    s.compound_kind = "switch";
    s.pos = cur().pos;
    advance();
    parse_header_parens(s);
    if (!cur().is_punct("{")) {
      parse_body_into(s);
      return s;
    }
    advance(); // '{'
    while (!at_end() && !cur().is_punct("}")) {
      if (cur().is_ident("case")) {
        advance();
        auto label = parse_expression(/*stop_colon=*/true);
        if (label)
          s.header_exprs.push_back(std::move(label));
        accept_punct(":");
        accept_punct("->"); // arrow-form switch
        continue;
      }
      if (cur().is_ident("default")) {
        advance();
        accept_punct(":");
        accept_punct("->");
        continue;
      }
      auto child = parse_statement();
      if (child)
        s.children.push_back(std::move(*child));
    }
    accept_punct("}");
    return s;
  }

  Statement parse_for() {
    Statement s;
    s.kind = Statement::Kind::Compound;
    s.compound_kind = "for";
    s.pos = cur().pos;
    advance();
    if (accept_punct("(")) {
      // try `type name :` (enhanced) or `type name = ...` (init decl)
      std::size_t checkpoint = index_;
      ParsedType t = parse_type();
      if (t.valid && cur().is_ident() && !is_reserved_expression_word(cur().text)) {
        Statement::Declarator d;
        d.name = cur().text;
        d.pos = cur().pos;
        advance();
        if (accept_punct(":")) {
          s.decl_type_text = t.text;
          s.decl_type_pos = t.pos;
          s.declarators.push_back(std::move(d));
          auto range = parse_expression();
          if (range)
            s.header_exprs.push_back(std::move(range));
          accept_punct(")");
          parse_body_into(s);
          return s;
        }
        if (accept_punct("=")) {
          s.decl_type_text = t.text;
          s.decl_type_pos = t.pos;
          d.init = parse_expression();
          s.declarators.push_back(std::move(d));
          while (accept_punct(",")) {
            if (!cur().is_ident())
              break;
            Statement::Declarator more;
            more.name = cur().text;
            more.pos = cur().pos;
            advance();
            if (accept_punct("="))
              more.init = parse_expression();
            s.declarators.push_back(std::move(more));
          }
        } else {
          index_ = checkpoint;
        }
      } else {
        index_ = checkpoint;
      }
      // remaining header: `; cond ; update` or plain expressions
      int guard = 0;
      while (!at_end() && !cur().is_punct(")")) {
        if (cur().is_punct(";") || cur().is_punct(",")) {
          advance();
          continue;
        }
        auto e = parse_expression();
        if (e)
          s.header_exprs.push_back(std::move(e));
        else {
          if (++guard > 512)
            break;
          advance();
        }
      }
      accept_punct(")");
    }
    parse_body_into(s);
    return s;
  }

  Statement parse_do() {
    Statement s;
    s.kind = Statement::Kind::Compound;
    s.compound_kind = "do";
    s.pos = cur().pos;
    advance();
    parse_body_into(s);
    if (cur().is_ident("while")) {
      advance();
      parse_header_parens(s);
      accept_punct(";");
    }
    return s;
  }

  Statement parse_try() {
    Statement s;
    s.kind = Statement::Kind::Compound;
    s.compound_kind = "try";
    s.pos = cur().pos;
    advance();
    if (cur().is_punct("(")) {
      // try-with-resources: each resource is a declaration
      advance();
      while (!at_end() && !cur().is_punct(")")) {
        std::size_t checkpoint = index_;
        ParsedType t = parse_type();
        if (t.valid && cur().is_ident()) {
          Statement resource;
          resource.kind = Statement::Kind::LocalDecl;
          resource.pos = t.pos;
          resource.decl_type_text = t.text;
          resource.decl_type_pos = t.pos;
          Statement::Declarator d;
          d.name = cur().text;
          d.pos = cur().pos;
          advance();
          if (accept_punct("="))
            d.init = parse_expression();
          resource.declarators.push_back(std::move(d));
          s.children.push_back(std::move(resource));
        } else {
          index_ = checkpoint;
          auto e = parse_expression();
          if (e)
            s.header_exprs.push_back(std::move(e));
          else
            advance();
        }
        accept_punct(";");
      }
      accept_punct(")");
    }
    if (cur().is_punct("{"))
      s.children.push_back(parse_block("block"));
    while (cur().is_ident("catch")) {
      advance();
      parse_catch_params(s);
      if (cur().is_punct("{"))
        s.children.push_back(parse_block("block"));
    }
    if (cur().is_ident("finally")) {
      advance();
      if (cur().is_punct("{"))
        s.children.push_back(parse_block("block"));
    }
    return s;
  }

  void parse_catch_params(Statement &s) {
    if (!accept_punct("("))
      return;
    ParsedType t = parse_type();
    // multi-catch `A | B name`
    while (cur().is_punct("|")) {
      advance();
      parse_type();
    }
    if (t.valid && cur().is_ident()) {
      Statement param;
      param.kind = Statement::Kind::LocalDecl;
      param.pos = t.pos;
      param.decl_type_text = t.text;
      param.decl_type_pos = t.pos;
      Statement::Declarator d;
      d.name = cur().text;
      d.pos = cur().pos;
      advance();
      param.declarators.push_back(std::move(d));
      s.children.push_back(std::move(param));
    }
    while (!at_end() && !cur().is_punct(")"))
      advance();
    accept_punct(")");
  }

  Statement parse_dangling_clause(const std::string &word) {
    Statement s;
    s.kind = Statement::Kind::Compound;
    s.compound_kind = word;
    s.pos = cur().pos;
    advance();
    if (word == "catch")
      parse_catch_params(s);
    parse_body_into(s);
    return s;
  }

  Statement parse_return(const std::string &word) {
    Statement s;
    s.kind = Statement::Kind::Return;
    s.pos = cur().pos;
    advance();
    if (!cur().is_punct(";") && !cur().is_punct("}") && !at_end())
      s.expr = parse_expression();
    accept_punct(";");
    (void)word;
    return s;
  }

  Statement parse_class_wrapper() {
    Statement s;
    s.kind = Statement::Kind::Compound;
    s.compound_kind = "class";
    s.pos = cur().pos;
    // consume `class Name extends ... implements ...` up to the body
    while (!at_end() && !cur().is_punct("{") && !cur().is_punct(";"))
      advance();
    if (cur().is_punct("{")) {
      Statement body = parse_block("block");
      s.children = std::move(body.children);
    } else {
      accept_punct(";");
    }
    return s;
  }

  std::optional<Statement> parse_decl_or_expression() {
    SourcePos start = cur().pos;
    std::size_t checkpoint = index_;

    // declaration or method definition?
    ParsedType t = parse_type();
    if (t.valid && cur().is_ident() &&
        !is_reserved_expression_word(cur().text)) {
      std::string name = cur().text;
      SourcePos name_pos = cur().pos;
      advance();
      if (cur().is_punct("(")) {
        return parse_method_rest(t, name, name_pos);
      }
      // C-style array suffix on the declarator
      int extra_dims = 0;
      while (cur().is_punct("[") && peek().is_punct("]")) {
        advance();
        advance();
        ++extra_dims;
      }
      if (cur().is_punct("=") || cur().is_punct(";") || cur().is_punct(",") ||
          cur().is_punct("}") || at_end() ||
          cur().pos.line != name_pos.line) {
        Statement s;
        s.kind = Statement::Kind::LocalDecl;
        s.pos = start;
        s.decl_type_text = t.text;
        for (int i = 0; i < extra_dims; ++i)
          s.decl_type_text += "[]";
        s.decl_type_pos = t.pos;
        Statement::Declarator first;
        first.name = std::move(name);
        first.pos = name_pos;
        if (accept_punct("="))
          first.init = parse_expression();
        s.declarators.push_back(std::move(first));
        while (accept_punct(",")) {
          if (!cur().is_ident())
            break;
          Statement::Declarator d;
          d.name = cur().text;
          d.pos = cur().pos;
          advance();
          while (cur().is_punct("[") && peek().is_punct("]")) {
            advance();
            advance();
          }
          if (accept_punct("="))
            d.init = parse_expression();
          s.declarators.push_back(std::move(d));
        }
        accept_punct(";");
        return s;
      }
    }

    // fall back to a plain expression statement
    index_ = checkpoint;
    auto e = parse_expression();
    if (e) {
      Statement s;
      s.kind = Statement::Kind::ExprStmt;
      s.pos = start;
      s.expr = std::move(e);
      if (!accept_punct(";") && !cur().is_punct("}") && !at_end() &&
          cur().pos.line == start.line) {
        // trailing junk on the same line
        Statement skipped = skip_line(cur().pos, "unparseable trailing tokens");
        tree_.statements.push_back(std::move(skipped));
      }
      return s;
    }

    index_ = checkpoint;
    return skip_line(start, "unparseable statement skipped");
  }

  Statement parse_method_rest(const ParsedType &ret, const std::string &name,
                              SourcePos name_pos) {
    Statement s;
    s.kind = Statement::Kind::Compound;
    s.compound_kind = "method";
    s.pos = name_pos;
    (void)ret;
    (void)name;
    advance(); // '('
    while (!at_end() && !cur().is_punct(")")) {
      while (cur().is_punct("@"))
        skip_annotation();
      if (cur().is_ident("final")) {
        advance();
        continue;
      }
      std::size_t checkpoint = index_;
      ParsedType pt = parse_type();
      if (pt.valid && cur().is_ident()) {
        Statement param;
        param.kind = Statement::Kind::LocalDecl;
        param.pos = pt.pos;
        param.decl_type_text = pt.text;
        param.decl_type_pos = pt.pos;
        Statement::Declarator d;
        d.name = cur().text;
        d.pos = cur().pos;
        advance();
        param.declarators.push_back(std::move(d));
        s.children.push_back(std::move(param));
      } else {
        index_ = checkpoint;
        advance();
      }
      accept_punct(",");
    }
    accept_punct(")");
    if (cur().is_ident("throws")) {
      advance();
      while (cur().is_ident()) {
        advance();
        while (cur().is_punct(".") && peek().is_ident()) {
          advance();
          advance();
        }
        if (!accept_punct(","))
          break;
      }
    }
    if (cur().is_punct("{"))
      s.children.push_back(parse_block("block"));
    else
      accept_punct(";");
    return s;
  }

  // ---- types ---------------------------------------------------------

  /// `Name(.Name)*` with generics erased, primitive keywords, `var`, and
  /// `[]` suffixes. Leaves the cursor untouched when invalid.
  ParsedType parse_type() {
    ParsedType t;
    std::size_t checkpoint = index_;
    if (!cur().is_ident())
      return t;
    t.pos = cur().pos;
    const std::string first = cur().text;
    if (is_primitive_keyword(first) || first == "var") {
      t.text = first;
      t.primitive = is_primitive_keyword(first);
      advance();
    } else {
      if (is_reserved_expression_word(first))
        return t;
      t.text = first;
      advance();
      if (cur().is_punct("<") && !skip_generics()) {
        index_ = checkpoint;
        return t;
      }
      while (cur().is_punct(".") && peek().is_ident() &&
             !is_reserved_expression_word(peek().text)) {
        advance();
        t.text += "." + cur().text;
        advance();
        if (cur().is_punct("<") && !skip_generics()) {
          index_ = checkpoint;
          t.text.clear();
          return t;
        }
      }
    }
    while (cur().is_punct("[") && peek().is_punct("]")) {
      advance();
      advance();
      ++t.array_dims;
      t.text += "[]";
    }
    t.valid = !t.text.empty();
    return t;
  }

  /// Balanced `<...>` skip; `>>` closes two levels. False when the angle
  /// run is not generics-shaped (e.g. a comparison).
  bool skip_generics() {
    std::size_t checkpoint = index_;
    int depth = 0;
    int guard = 0;
    while (!at_end()) {
      if (++guard > 256)
        break;
      if (cur().is_punct("<")) {
        ++depth;
        advance();
        continue;
      }
      if (cur().is_punct(">")) {
        --depth;
        advance();
        if (depth == 0)
          return true;
        if (depth < 0)
          break;
        continue;
      }
      if (cur().is_punct(">>")) {
        depth -= 2;
        advance();
        if (depth == 0)
          return true;
        if (depth < 0)
          break;
        continue;
      }
      if (cur().is_ident() || cur().is_punct(".") || cur().is_punct(",") ||
          cur().is_punct("?") || cur().is_punct("[") || cur().is_punct("]") ||
          cur().is_punct("&")) {
        advance();
        continue;
      }
      break; // not generics
    }
    index_ = checkpoint;
    return false;
  }

  // ---- expressions ----------------------------------------------------

  static bool is_binary_operator(const Token &t) {
    if (t.kind != Token::Kind::Punct)
      return false;
    static const char *ops[] = {"+",  "-",  "*",  "/",  "%",  "<",  ">",
                                "&",  "|",  "^",  "?",  ":",  "==", "!=",
                                "<=", ">=", "&&", "||", "<<", ">>", "+=",
                                "-=", "*=", "/=", "%=", "&=", "|=", "^="};
    for (const char *op : ops)
      if (t.text == op)
        return true;
    return false;
  }

  ExpressionPtr parse_expression(bool stop_colon = false) {
    // lambda lookahead: `x ->` or `( ... ) ->`
    if (cur().is_ident() && peek().is_punct("->"))
      return parse_lambda_from_ident();
    if (cur().is_punct("(")) {
      std::size_t close = matching_paren(index_);
      if (close != 0 && close + 1 < tokens_.size() &&
          tokens_[close + 1].is_punct("->"))
        return parse_lambda_from_parens(close);
    }

    auto first = parse_unary();
    if (!first)
      return nullptr;

    // plain identifier assignment binds scope; everything else is operators
    if (cur().is_punct("=") && first->kind == Expression::Kind::Name &&
        first->postfix.empty() && first->name_segments.size() == 1) {
      auto assign = std::make_unique<Expression>();
      assign->kind = Expression::Kind::Assign;
      assign->pos = first->pos;
      assign->assign_target = first->name_segments[0];
      assign->assign_target_pos = first->name_positions[0];
      advance(); // '='
      assign->operand = parse_expression(stop_colon);
      return assign;
    }

    std::vector<ExpressionPtr> operands;
    operands.push_back(std::move(first));
    while (true) {
      if (cur().is_punct(":") && stop_colon)
        break;
      if (cur().is_ident("instanceof")) {
        advance();
        parse_type();
        continue;
      }
      if (!is_binary_operator(cur()) && !cur().is_punct("="))
        break;
      advance();
      auto next = parse_unary();
      if (!next)
        break;
      operands.push_back(std::move(next));
    }
    if (operands.size() == 1)
      return std::move(operands.front());
    auto ops = std::make_unique<Expression>();
    ops->kind = Expression::Kind::Operators;
    ops->pos = operands.front()->pos;
    ops->operands = std::move(operands);
    return ops;
  }

  std::size_t matching_paren(std::size_t open_index) const {
    int depth = 0;
    for (std::size_t i = open_index; i < tokens_.size(); ++i) {
      if (tokens_[i].is_punct("("))
        ++depth;
      else if (tokens_[i].is_punct(")")) {
        --depth;
        if (depth == 0)
          return i;
      } else if (tokens_[i].is_end()) {
        break;
      }
    }
    return 0;
  }

  ExpressionPtr parse_lambda_from_ident() {
    auto lambda = std::make_unique<Expression>();
    lambda->kind = Expression::Kind::Lambda;
    lambda->pos = cur().pos;
    advance(); // param name
    advance(); // ->
    parse_lambda_body(*lambda);
    return lambda;
  }

  ExpressionPtr parse_lambda_from_parens(std::size_t close) {
    auto lambda = std::make_unique<Expression>();
    lambda->kind = Expression::Kind::Lambda;
    lambda->pos = cur().pos;
    index_ = close + 1; // skip the parameter list
    advance();          // ->
    parse_lambda_body(*lambda);
    return lambda;
  }

  void parse_lambda_body(Expression &lambda) {
    if (cur().is_punct("{")) {
      lambda.lambda_block = std::make_unique<Statement>(parse_block("block"));
      return;
    }
    auto body = parse_expression();
    if (body)
      lambda.operands.push_back(std::move(body));
  }

  ExpressionPtr parse_unary() {
    while (cur().is_punct("!") || cur().is_punct("~") || cur().is_punct("+") ||
           cur().is_punct("-") || cur().is_punct("++") || cur().is_punct("--"))
      advance();
    return parse_postfix();
  }

  ExpressionPtr parse_postfix() {
    auto base = parse_primary();
    if (!base)
      return nullptr;

    while (true) {
      if (cur().is_punct(".")) {
        // generic method call `obj.<T>m(...)`
        if (peek().is_punct("<")) {
          advance();
          if (!skip_generics())
            break;
          continue;
        }
        if (!peek().is_ident())
          break;
        std::string name = peek().text;
        SourcePos name_pos = peek().pos;
        bool is_call = peek(2).is_punct("(");
        if (!is_call && base->kind == Expression::Kind::Name &&
            base->postfix.empty() && name != "new") {
          // still extending the dotted name
          advance();
          advance();
          base->name_segments.push_back(std::move(name));
          base->name_positions.push_back(name_pos);
          continue;
        }
        advance();
        advance();
        PostfixSeg seg;
        seg.name = std::move(name);
        seg.pos = name_pos;
        if (is_call) {
          seg.kind = PostfixSeg::Kind::Call;
          seg.args = parse_args();
        } else {
          seg.kind = PostfixSeg::Kind::Member;
        }
        base->postfix.push_back(std::move(seg));
        continue;
      }
      if (cur().is_punct("::")) {
        if (!peek().is_ident() && !peek().is_ident("new"))
          break;
        PostfixSeg seg;
        seg.kind = PostfixSeg::Kind::MethodRef;
        seg.name = peek().text;
        seg.pos = peek().pos;
        advance();
        advance();
        base->postfix.push_back(std::move(seg));
        continue;
      }
      if (cur().is_punct("(")) {
        // call on a trailing name segment: `a.b.m(...)` or bare `f(...)`
        if (base->kind == Expression::Kind::Name && base->postfix.empty() &&
            !base->name_segments.empty()) {
          PostfixSeg seg;
          seg.kind = PostfixSeg::Kind::Call;
          seg.name = base->name_segments.back();
          seg.pos = base->name_positions.back();
          base->name_segments.pop_back();
          base->name_positions.pop_back();
          seg.args = parse_args();
          base->postfix.push_back(std::move(seg));
          continue;
        }
        break;
      }
      if (cur().is_punct("[")) {
        PostfixSeg seg;
        seg.kind = PostfixSeg::Kind::Index;
        seg.pos = cur().pos;
        advance();
        if (!cur().is_punct("]")) {
          auto idx = parse_expression();
          if (idx)
            seg.args.push_back(std::move(idx));
        }
        // tolerate junk before ']'
        int guard = 0;
        while (!at_end() && !cur().is_punct("]")) {
          if (++guard > 256)
            break;
          advance();
        }
        accept_punct("]");
        base->postfix.push_back(std::move(seg));
        continue;
      }
      if (cur().is_punct("++") || cur().is_punct("--")) {
        advance();
        continue;
      }
      break;
    }
    return base;
  }

  std::vector<ExpressionPtr> parse_args() {
    std::vector<ExpressionPtr> args;
    if (!accept_punct("("))
      return args;
    int guard = 0;
    while (!at_end() && !cur().is_punct(")")) {
      auto e = parse_expression();
      if (e)
        args.push_back(std::move(e));
      if (cur().is_punct(",")) {
        advance();
        continue;
      }
      if (!cur().is_punct(")")) {
        if (++guard > 512)
          break;
        advance();
      }
    }
    accept_punct(")");
    return args;
  }

  ExpressionPtr parse_primary() {
    const Token &t = cur();
    if (t.is_literal()) {
      auto e = std::make_unique<Expression>();
      e->kind = Expression::Kind::Literal;
      e->pos = t.pos;
      advance();
      return e;
    }
    if (t.is_ident()) {
      if (t.text == "true" || t.text == "false" || t.text == "null") {
        auto e = std::make_unique<Expression>();
        e->kind = Expression::Kind::Literal;
        e->pos = t.pos;
        advance();
        return e;
      }
      if (t.text == "new")
        return parse_new();
      if (is_reserved_expression_word(t.text) && t.text != "this" &&
          t.text != "super")
        return nullptr;
      auto e = std::make_unique<Expression>();
      e->kind = Expression::Kind::Name;
      e->pos = t.pos;
      e->name_segments.push_back(t.text);
      e->name_positions.push_back(t.pos);
      advance();
      return e;
    }
    if (t.is_punct("(")) {
      std::size_t close = matching_paren(index_);
      if (close != 0 && looks_like_cast(close)) {
        auto e = std::make_unique<Expression>();
        e->kind = Expression::Kind::Cast;
        e->pos = t.pos;
        advance(); // '('
        ParsedType pt = parse_type();
        e->type_text = pt.text;
        e->type_pos = pt.pos;
        accept_punct(")");
        e->operand = parse_unary();
        return e;
      }
      advance(); // '('
      auto inner = parse_expression();
      accept_punct(")");
      return inner; // postfix continues on the parenthesized value
    }
    return nullptr;
  }

  bool looks_like_cast(std::size_t close) const {
    // tokens strictly inside must be type-shaped
    for (std::size_t i = index_ + 1; i < close; ++i) {
      const Token &t = tokens_[i];
      if (t.is_ident()) {
        if (is_reserved_expression_word(t.text) || t.text == "this" ||
            t.text == "super")
          return false;
        continue;
      }
      if (t.is_punct(".") || t.is_punct("<") || t.is_punct(">") ||
          t.is_punct(">>") || t.is_punct("[") || t.is_punct("]") ||
          t.is_punct("?") || t.is_punct(",") || t.is_punct("&"))
        continue;
      return false;
    }
    if (close == index_ + 1)
      return false; // `()`
    if (!tokens_[index_ + 1].is_ident())
      return false;
    // the token after ')' must start a primary
    const Token &after = tokens_[close + 1];
    if (after.is_literal())
      return true;
    if (after.is_ident())
      return !is_binary_operator(after) && !after.is_ident("instanceof");
    if (after.is_punct("(") || after.is_punct("!") || after.is_punct("~"))
      return true;
    return false;
  }

  ExpressionPtr parse_new() {
    auto e = std::make_unique<Expression>();
    e->pos = cur().pos;
    advance(); // 'new'
    ParsedType t = parse_type();
    e->type_text = t.text;
    e->type_pos = t.pos;
    if (!t.valid) {
      e->kind = Expression::Kind::New;
      diag(e->pos, "constructor without a type name");
      return e;
    }
    if (cur().is_punct("[") || t.array_dims > 0) {
      e->kind = Expression::Kind::NewArray;
      while (cur().is_punct("[")) {
        advance();
        if (!cur().is_punct("]")) {
          auto dim = parse_expression();
          if (dim)
            e->operands.push_back(std::move(dim));
        }
        accept_punct("]");
      }
      if (cur().is_punct("{"))
        parse_array_initializer(*e);
      return e;
    }
    e->kind = Expression::Kind::New;
    if (cur().is_punct("("))
      e->call_args = parse_args();
    if (cur().is_punct("{"))
      e->anon_body = std::make_unique<Statement>(parse_block("block"));
    return e;
  }

  void parse_array_initializer(Expression &e) {
    advance(); // '{'
    int guard = 0;
    while (!at_end() && !cur().is_punct("}")) {
      if (cur().is_punct("{")) { // nested initializer
        Expression nested;
        parse_array_initializer(nested);
        for (auto &el : nested.operands)
          e.operands.push_back(std::move(el));
        continue;
      }
      auto el = parse_expression();
      if (el)
        e.operands.push_back(std::move(el));
      if (cur().is_punct(",")) {
        advance();
        continue;
      }
      if (!cur().is_punct("}")) {
        if (++guard > 512)
          break;
        advance();
      }
    }
    accept_punct("}");
  }
};

} // namespace detail

/// Parses any UTF-8 text into a statement tree. Never throws; empty input
/// yields an empty tree, unparseable regions become Skipped statements with
/// diagnostics.
inline SyntaxTree parse_snippet(std::string_view source) {
  return detail::SnippetParser(source).run();
}

} // namespace phantomlint
