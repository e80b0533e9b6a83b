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

#include "sif/lexer.h"

#include <cctype>
#include <cerrno>
#include <cstdlib>
#include <utility>

namespace sif {

std::string to_string(const Location& loc) {
  return std::to_string(loc.line) + ":" + std::to_string(loc.column);
}

ParseError::ParseError(const std::string& message, Location loc)
    : Error(to_string(loc) + ": " + message), loc_(loc), bare_(message) {}

namespace {

bool is_ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}

bool is_ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '$';
}

bool is_digit(char c) { return std::isdigit(static_cast<unsigned char>(c)); }

}  // namespace

std::vector<Token> tokenize(std::string_view text, bool keep_newlines) {
  std::vector<Token> out;
  int line = 1;
  int col = 1;
  size_t i = 0;
  auto advance = [&](size_t n) {
    for (size_t k = 0; k < n && i < text.size(); ++k, ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };

  while (i < text.size()) {
    char c = text[i];
    Location loc{line, col};
    if (c == '\n') {
      if (keep_newlines &&
          (out.empty() || out.back().kind != TokenKind::kNewline)) {
        out.push_back(Token{TokenKind::kNewline, "\n", 0, 0.0, loc});
      }
      advance(1);
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '#') {
      while (i < text.size() && text[i] != '\n') advance(1);
      continue;
    }
    if (is_ident_start(c)) {
      size_t j = i;
      while (j < text.size() && is_ident_char(text[j])) ++j;
      Token t{TokenKind::kIdent, std::string(text.substr(i, j - i)), 0, 0.0,
              loc};
      out.push_back(std::move(t));
      advance(j - i);
      continue;
    }
    if (is_digit(c) ||
        (c == '-' && i + 1 < text.size() && is_digit(text[i + 1]))) {
      size_t j = i + 1;
      bool is_float = false;
      while (j < text.size() && is_digit(text[j])) ++j;
      if (j + 1 < text.size() && text[j] == '.' && is_digit(text[j + 1])) {
        is_float = true;
        ++j;
        while (j < text.size() && is_digit(text[j])) ++j;
      }
      if (j < text.size() && (text[j] == 'e' || text[j] == 'E')) {
        size_t k = j + 1;
        if (k < text.size() && (text[k] == '+' || text[k] == '-')) ++k;
        if (k < text.size() && is_digit(text[k])) {
          is_float = true;
          j = k;
          while (j < text.size() && is_digit(text[j])) ++j;
        }
      }
      std::string lexeme(text.substr(i, j - i));
      Token t{is_float ? TokenKind::kFloat : TokenKind::kInt, lexeme, 0, 0.0,
              loc};
      errno = 0;
      if (is_float) {
        t.float_value = std::strtod(lexeme.c_str(), nullptr);
      } else {
        t.int_value = std::strtoll(lexeme.c_str(), nullptr, 10);
        if (errno == ERANGE) {
          throw ParseError("integer literal out of range: " + lexeme, loc);
        }
      }
      out.push_back(std::move(t));
      advance(j - i);
      continue;
    }
    if (c == '"') {
      std::string value;
      advance(1);
      bool closed = false;
      while (i < text.size()) {
        char d = text[i];
        if (d == '"') {
          closed = true;
          advance(1);
          break;
        }
        if (d == '\n') break;
        if (d == '\\' && i + 1 < text.size()) {
          char e = text[i + 1];
          switch (e) {
            case 'n': value += '\n'; break;
            case 't': value += '\t'; break;
            case '"': value += '"'; break;
            case '\\': value += '\\'; break;
            default:
              throw ParseError(std::string("unknown escape \\") + e,
                               Location{line, col});
          }
          advance(2);
          continue;
        }
        value += d;
        advance(1);
      }
      if (!closed) throw ParseError("unterminated string literal", loc);
      out.push_back(Token{TokenKind::kString, std::move(value), 0, 0.0, loc});
      continue;
    }
    if (c == '<' && i + 1 < text.size() && text[i + 1] == '=') {
      out.push_back(Token{TokenKind::kPunct, "<=", 0, 0.0, loc});
      advance(2);
      continue;
    }
    static constexpr std::string_view kPunct = "(){}[],;:.=<>?!*/@&";
    if (kPunct.find(c) != std::string_view::npos) {
      out.push_back(Token{TokenKind::kPunct, std::string(1, c), 0, 0.0, loc});
      advance(1);
      continue;
    }
    throw ParseError(std::string("unexpected character '") + c + "'", loc);
  }
  out.push_back(Token{TokenKind::kEnd, "", 0, 0.0, Location{line, col}});
  return out;
}

std::string describe(const Token& tok) {
  switch (tok.kind) {
    case TokenKind::kIdent: return "'" + tok.text + "'";
    case TokenKind::kInt:
    case TokenKind::kFloat: return "number " + tok.text;
    case TokenKind::kString: return "string " + quote(tok.text);
    case TokenKind::kPunct: return "'" + tok.text + "'";
    case TokenKind::kNewline: return "end of line";
    case TokenKind::kEnd: return "end of input";
  }
  return "token";
}

std::string quote(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      default: out += c;
    }
  }
  out += '"';
  return out;
}

TokenStream::TokenStream(std::vector<Token> tokens)
    : tokens_(std::move(tokens)) {
  if (tokens_.empty() || tokens_.back().kind != TokenKind::kEnd) {
    tokens_.push_back(Token{});
  }
}

const Token& TokenStream::peek(size_t ahead) const {
  size_t idx = pos_ + ahead;
  if (idx >= tokens_.size()) return tokens_.back();
  return tokens_[idx];
}

const Token& TokenStream::next() {
  const Token& t = peek();
  if (pos_ < tokens_.size() - 1) ++pos_;
  return t;
}

bool TokenStream::is_punct(std::string_view p, size_t ahead) const {
  const Token& t = peek(ahead);
  return t.kind == TokenKind::kPunct && t.text == p;
}

bool TokenStream::is_ident(std::string_view name, size_t ahead) const {
  const Token& t = peek(ahead);
  return t.kind == TokenKind::kIdent && t.text == name;
}

bool TokenStream::accept_punct(std::string_view p) {
  if (!is_punct(p)) return false;
  next();
  return true;
}

bool TokenStream::accept_ident(std::string_view name) {
  if (!is_ident(name)) return false;
  next();
  return true;
}

void TokenStream::expect_punct(std::string_view p) {
  if (!accept_punct(p)) {
    fail("expected '" + std::string(p) + "', found " + describe(peek()));
  }
}

void TokenStream::expect_keyword(std::string_view name) {
  if (!accept_ident(name)) {
    fail("expected '" + std::string(name) + "', found " + describe(peek()));
  }
}

std::string TokenStream::expect_ident(std::string_view what) {
  if (peek().kind != TokenKind::kIdent) {
    fail("expected " + std::string(what) + ", found " + describe(peek()));
  }
  return next().text;
}

void TokenStream::expect_newline() {
  if (peek().kind == TokenKind::kEnd) return;
  if (peek().kind != TokenKind::kNewline) {
    fail("expected end of line, found " + describe(peek()));
  }
  next();
}

void TokenStream::skip_newlines() {
  while (peek().kind == TokenKind::kNewline) next();
}

void TokenStream::fail(const std::string& message) const {
  throw ParseError(message, peek().loc);
}

void TokenStream::fail_at(const Token& tok, const std::string& message) const {
  throw ParseError(message, tok.loc);
}

}  // namespace sif
