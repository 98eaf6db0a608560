// ============================================================================
//  lexer.hpp -- shared tokenizer for the textual formats (library-internal)
// ============================================================================
//
//  Produces identifiers, numbers, and punctuation with 1-based positions.
//  `#` starts a comment running to end of line.  Two-character tokens:
//  "<=" and ".." (the latter so that "R.U" yields '.' but "2..30" yields
//  "..").  With `hyphen_idents` set, '-' may appear inside identifiers,
//  which the object-oriented grammar needs for `is-a` and `Set-of`.
//
// ============================================================================

#pragma once

#include <cctype>
#include <string>
#include <string_view>

#include "aluni/diagnostics.hpp"

namespace aluni::detail {

struct Token {
  enum class Kind { Ident, Number, Punct, End };
  Kind kind = Kind::End;
  std::string text;
  int line = 0;
  int column = 0;

  bool is(std::string_view t) const { return text == t; }
};

class Lexer {
public:
  explicit Lexer(std::string_view text, bool hyphen_idents = false)
      : text_(text), hyphen_(hyphen_idents) {
    advance();
  }

  const Token& peek() const { return current_; }

  Token next() {
    Token t = current_;
    advance();
    return t;
  }

  /// Consumes the current token if its text matches; returns success.
  bool accept(std::string_view text) {
    if (current_.kind != Token::Kind::End && current_.is(text)) {
      advance();
      return true;
    }
    return false;
  }

  /// Consumes the current token, requiring an exact text match.
  void expect(std::string_view text) {
    if (!accept(text))
      fail("expected '" + std::string(text) + "', found " + describe());
  }

  /// Consumes and returns an identifier token's text.
  std::string expect_ident(std::string_view what = "identifier") {
    if (current_.kind != Token::Kind::Ident)
      fail("expected " + std::string(what) + ", found " + describe());
    return next().text;
  }

  /// Consumes and returns a nonnegative integer token.
  unsigned expect_number() {
    if (current_.kind != Token::Kind::Number)
      fail("expected number, found " + describe());
    if (current_.text.size() > 7 || std::stoul(current_.text) > 1000000u)
      fail("number out of range: " + current_.text);
    unsigned v = static_cast<unsigned>(std::stoul(current_.text));
    advance();
    return v;
  }

  bool at_end() const { return current_.kind == Token::Kind::End; }

  [[noreturn]] void fail(const std::string& message) const {
    throw ParseError(message, current_.line, current_.column);
  }

  std::string describe() const {
    if (current_.kind == Token::Kind::End) return "end of input";
    return "'" + current_.text + "'";
  }

private:
  void advance() {
    skip_blank();
    current_ = Token{};
    current_.line = line_;
    current_.column = column_;
    if (pos_ >= text_.size()) {
      current_.kind = Token::Kind::End;
      return;
    }
    char c = text_[pos_];
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      current_.kind = Token::Kind::Ident;
      while (pos_ < text_.size() && ident_char(text_[pos_]))
        current_.text += take();
      return;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      current_.kind = Token::Kind::Number;
      while (pos_ < text_.size() &&
             std::isdigit(static_cast<unsigned char>(text_[pos_])))
        current_.text += take();
      return;
    }
    current_.kind = Token::Kind::Punct;
    current_.text += take();
    // Two-character punctuation.
    if (pos_ < text_.size()) {
      if (current_.text == "<" && text_[pos_] == '=') current_.text += take();
      else if (current_.text == "." && text_[pos_] == '.')
        current_.text += take();
    }
  }

  bool ident_char(char c) const {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' ||
           (hyphen_ && c == '-');
  }

  char take() {
    char c = text_[pos_++];
    if (c == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    return c;
  }

  void skip_blank() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') take();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        take();
      } else {
        break;
      }
    }
  }

  std::string_view text_;
  bool hyphen_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int column_ = 1;
  Token current_;
};

}  // namespace aluni::detail
