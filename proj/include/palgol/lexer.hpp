// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "palgol/error.hpp"

namespace palgol {

struct Token {
  enum class Kind : std::uint8_t {
    Keyword,
    Ident,       // starts with a lowercase letter
    FieldIdent,  // starts with an uppercase letter
    Int,
    Float,
    Op,
    BlockOpen,
    BlockClose,
    Newline,
    Eof
  };

  Kind kind;
  std::string lexeme;
  Span span;

  bool is(Kind k, std::string_view text) const { return kind == k && lexeme == text; }
  bool isOp(std::string_view text) const { return is(Kind::Op, text); }
  bool isKeyword(std::string_view text) const { return is(Kind::Keyword, text); }
};

bool isKeyword(std::string_view word);
const char* tokenKindName(Token::Kind k);

/// Splits source text into tokens following the offside rule: an indentation
/// increase yields BlockOpen, a decrease yields one BlockClose per closed
/// level, and line breaks inside brackets are ignored. `#` starts a comment.
/// The returned stream always ends with Eof.
std::vector<Token> tokenize(std::string_view source);

}  // namespace palgol
