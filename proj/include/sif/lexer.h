/*
 * Copyright 2026 The SIF Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef SIF_LEXER_H_
#define SIF_LEXER_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "sif/error.h"

namespace sif {

enum class TokenKind { kIdent, kInt, kFloat, kString, kPunct, kNewline, kEnd };

struct Token {
  TokenKind kind = TokenKind::kEnd;
  std::string text;  // identifier name, punctuation, or unescaped string
  int64_t int_value = 0;
  double float_value = 0.0;
  Location loc;
};

// Tokenizes the shared surface syntax of lattice, IR, spec and case files.
// Identifiers are [A-Za-z_][A-Za-z0-9_$]*; `#` starts a comment running to
// end of line. Newlines are reported only when `keep_newlines` is set.
std::vector<Token> tokenize(std::string_view text, bool keep_newlines);

// Cursor over a token vector with the usual expect/accept helpers.
class TokenStream {
 public:
  explicit TokenStream(std::vector<Token> tokens);

  const Token& peek(size_t ahead = 0) const;
  const Token& next();
  bool at_end() const { return peek().kind == TokenKind::kEnd; }

  bool is_punct(std::string_view p, size_t ahead = 0) const;
  bool is_ident(std::string_view name, size_t ahead = 0) const;
  bool is_newline() const { return peek().kind == TokenKind::kNewline; }

  bool accept_punct(std::string_view p);
  bool accept_ident(std::string_view name);
  void expect_punct(std::string_view p);
  void expect_keyword(std::string_view name);
  std::string expect_ident(std::string_view what = "identifier");
  void expect_newline();
  void skip_newlines();

  [[noreturn]] void fail(const std::string& message) const;
  [[noreturn]] void fail_at(const Token& tok, const std::string& message) const;

 private:
  std::vector<Token> tokens_;
  size_t pos_ = 0;
};

std::string describe(const Token& tok);

// Quotes and escapes a string literal the way the lexer reads it back.
std::string quote(std::string_view s);

}  // namespace sif

#endif  // SIF_LEXER_H_
