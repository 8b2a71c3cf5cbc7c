// SPDX-License-Identifier: Apache-2.0

#include "palgol/lexer.hpp"

#include <array>
#include <cctype>

namespace palgol {

namespace {

constexpr std::array kKeywords = {
    "for", "in", "V", "end", "do", "until", "fix", "if", "else", "let", "local", "remote", "stop",
    "where", "true", "false", "inf", "fst", "snd", "minimum", "maximum", "sum", "product", "or", "and"};

// Longest operators first.
constexpr std::array kOperators = {"<?=", ">?=", "&&=", ":=", "+=", "|=", "*=", "<-", "==", "!=",
                                   "<=", ">=", "&&", "||", "+", "-", "*", "/", "%", "!", "?",
                                   ":", "(", ")", "[", "]", "{", "}", ",", "|", ".", "<", ">", "="};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    while (pos_ < src_.size()) lexLine();
    if (!brackets_.empty())
      throw CompileError(brackets_.back().span, "unclosed '" + brackets_.back().lexeme + "' at end of input");
    Span eof{1, 1};
    if (!out_.empty()) {
      const Token& last = out_.back();
      eof = {last.span.line, last.span.column + int(last.lexeme.size())};
      while (indents_.size() > 1) {
        indents_.pop_back();
        out_.push_back({Token::Kind::BlockClose, "", eof});
      }
      out_.push_back({Token::Kind::Newline, "", eof});
    }
    out_.push_back({Token::Kind::Eof, "", eof});
    return std::move(out_);
  }

 private:
  void lexLine() {
    std::size_t lineEnd = src_.find('\n', pos_);
    if (lineEnd == std::string_view::npos) lineEnd = src_.size();
    std::string_view line = src_.substr(pos_, lineEnd - pos_);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (auto tab = line.find('\t'); tab != std::string_view::npos)
      throw CompileError(Span{line_, int(tab) + 1}, "tab characters are not allowed; indent with spaces");

    std::size_t indent = 0;
    while (indent < line.size() && line[indent] == ' ') ++indent;
    bool blank = indent == line.size() || line[indent] == '#';
    if (!blank) {
      if (brackets_.empty()) layout(int(indent));
      lexTokens(line, indent);
    }
    pos_ = lineEnd + 1;
    ++line_;
  }

  void layout(int indent) {
    Span at{line_, indent + 1};
    if (out_.empty()) {
      indents_ = {indent};
      return;
    }
    if (indent > indents_.back()) {
      indents_.push_back(indent);
      out_.push_back({Token::Kind::BlockOpen, "", at});
      return;
    }
    while (indent < indents_.back()) {
      indents_.pop_back();
      out_.push_back({Token::Kind::BlockClose, "", at});
    }
    if (indent != indents_.back())
      throw CompileError(at, "inconsistent dedent: no enclosing block has indentation " + std::to_string(indent));
    out_.push_back({Token::Kind::Newline, "", at});
  }

  void lexTokens(std::string_view line, std::size_t i) {
    while (i < line.size()) {
      char c = line[i];
      Span at{line_, int(i) + 1};
      if (c == ' ') {
        ++i;
        continue;
      }
      if (c == '#') break;
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        std::size_t j = i;
        while (j < line.size() && (std::isalnum(static_cast<unsigned char>(line[j])) || line[j] == '_')) ++j;
        std::string word(line.substr(i, j - i));
        Token::Kind kind = isKeyword(word)                          ? Token::Kind::Keyword
                           : std::isupper(static_cast<unsigned char>(c)) ? Token::Kind::FieldIdent
                                                                     : Token::Kind::Ident;
        out_.push_back({kind, std::move(word), at});
        i = j;
        continue;
      }
      if (std::isdigit(static_cast<unsigned char>(c))) {
        std::size_t j = i;
        while (j < line.size() && std::isdigit(static_cast<unsigned char>(line[j]))) ++j;
        Token::Kind kind = Token::Kind::Int;
        if (j + 1 < line.size() && line[j] == '.' && std::isdigit(static_cast<unsigned char>(line[j + 1]))) {
          kind = Token::Kind::Float;
          ++j;
          while (j < line.size() && std::isdigit(static_cast<unsigned char>(line[j]))) ++j;
        }
        out_.push_back({kind, std::string(line.substr(i, j - i)), at});
        i = j;
        continue;
      }
      bool matched = false;
      for (std::string_view op : kOperators) {
        if (line.substr(i, op.size()) != op) continue;
        Token tok{Token::Kind::Op, std::string(op), at};
        trackBracket(tok);
        out_.push_back(std::move(tok));
        i += op.size();
        matched = true;
        break;
      }
      if (!matched) throw CompileError(at, std::string("unexpected character '") + c + "'");
    }
  }

  void trackBracket(const Token& tok) {
    const std::string& s = tok.lexeme;
    if (s == "(" || s == "[" || s == "{") {
      brackets_.push_back(tok);
    } else if (s == ")" || s == "]" || s == "}") {
      static const std::string opens = "([{", closes = ")]}";
      if (brackets_.empty() || opens.find(brackets_.back().lexeme[0]) != closes.find(s[0]))
        throw CompileError(tok.span, "unbalanced '" + s + "'");
      brackets_.pop_back();
    }
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  std::vector<int> indents_{0};
  std::vector<Token> brackets_;
  std::vector<Token> out_;
};

}  // namespace

bool isKeyword(std::string_view word) {
  for (std::string_view k : kKeywords)
    if (k == word) return true;
  return false;
}

const char* tokenKindName(Token::Kind k) {
  switch (k) {
    case Token::Kind::Keyword: return "keyword";
    case Token::Kind::Ident: return "identifier";
    case Token::Kind::FieldIdent: return "field name";
    case Token::Kind::Int: return "integer";
    case Token::Kind::Float: return "float";
    case Token::Kind::Op: return "operator";
    case Token::Kind::BlockOpen: return "indented block";
    case Token::Kind::BlockClose: return "end of block";
    case Token::Kind::Newline: return "newline";
    case Token::Kind::Eof: return "end of input";
  }
  return "?";
}

std::vector<Token> tokenize(std::string_view source) { return Lexer(source).run(); }

}  // namespace palgol
