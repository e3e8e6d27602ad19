#pragma once

// A tokenizer and a declaration-level parser for C++ sources. It is not a
// full C++ front end: it recognizes namespaces, class bodies, function
// definitions (in-class and out-of-line) and field declarations, and treats
// function bodies as opaque token ranges.

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "pseudotest/method_model.hpp"

namespace pseudotest {

enum class TokenKind { identifier, number, string_literal, char_literal, punct };

struct Token {
  TokenKind kind = TokenKind::punct;
  std::string text;
  std::size_t begin = 0;
  std::size_t end = 0;

  bool is(std::string_view s) const noexcept {
    return (kind == TokenKind::punct || kind == TokenKind::identifier) && text == s;
  }
};

/// Comments and preprocessor lines are dropped. Throws SyntaxError on an
/// unterminated comment or literal.
std::vector<Token> tokenize(std::string_view source);

/// Joins tokens the way a person would write them ("const std::string&").
std::string render_tokens(const std::vector<Token>& tokens);

struct Parameter {
  std::string type;
  std::string name;  // empty when unnamed
};

struct ReturnTypeInfo {
  ReturnCategory category = ReturnCategory::reference;
  ReturnForm form = ReturnForm::value;
  std::string text;
};

ReturnTypeInfo classify_return_type(const std::vector<Token>& tokens);

/// One function definition with a body, as found in a source file.
struct MethodNode {
  std::string name;                    // "size", "operator==", "~VList"
  std::vector<std::string> container;  // enclosing namespaces/classes plus qualification
  std::vector<Parameter> params;
  std::vector<Token> return_type;
  std::vector<Token> body;  // tokens strictly between the braces
  SourceSpan body_span;     // braces included
  SourceSpan decl_span;     // first declaration token to closing brace

  bool is_constructor = false;  // constructors and destructors
  bool is_constexpr = false;
  bool is_static = false;
  bool is_template = false;
  bool owner_is_class = false;
  bool in_hash_specialization = false;
  bool deprecated = false;
  bool generated_file = false;
  Visibility visibility = Visibility::public_api;

  std::set<std::string> owner_fields;

  std::string qualified_name() const;
  int arity() const noexcept { return static_cast<int>(params.size()); }
};

struct MemberDeclaration {
  bool deprecated = false;
  Visibility access = Visibility::public_api;
};

struct ParsedSource {
  std::vector<MethodNode> functions;
  std::map<std::string, std::set<std::string>> class_fields;     // qualified class -> field names
  std::map<std::string, MemberDeclaration> member_declarations;  // "Qualified::name/arity"
  bool generated = false;
};

/// Throws SyntaxError with the byte offset of the first problem.
ParsedSource parse_source(std::string_view source);

std::string join_qualified(const std::vector<std::string>& parts, std::string_view name);

}  // namespace pseudotest
