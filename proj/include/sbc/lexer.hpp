#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "sbc/error.hpp"

namespace sbc {

enum class Tok {
  Ident,
  Integer,
  Real,
  String,
  Punct,  // text holds the operator / punctuation spelling
  Invalid,
  End,
};

struct Token {
  Tok kind = Tok::End;
  std::string text;  // identifier name, literal spelling, decoded string, or punctuation
  SourceLoc loc;
};

// Splits SBC source into tokens. `//` comments and whitespace are skipped.
// Never throws: malformed input yields Tok::Invalid tokens carrying a message.
std::vector<Token> tokenize(std::string_view text);

// Normalizes CRLF / CR line endings to LF.
std::string normalize_newlines(std::string_view text);

// Cursor over a token vector with the small helpers every recursive-descent
// routine in the project needs.
class TokenCursor {
public:
  explicit TokenCursor(std::vector<Token> tokens);

  const Token& peek(std::size_t ahead = 0) const;
  const Token& next();
  bool at_end() const { return peek().kind == Tok::End; }

  bool is_punct(std::string_view p, std::size_t ahead = 0) const;
  bool is_ident(std::string_view name, std::size_t ahead = 0) const;
  bool accept_punct(std::string_view p);
  bool accept_ident(std::string_view name);

  const Token& expect_punct(std::string_view p);
  const Token& expect_ident(std::string_view what = "identifier");

  std::size_t position() const { return pos_; }
  void seek(std::size_t pos) { pos_ = pos; }

  [[noreturn]] void fail(const std::string& message) const;
  [[noreturn]] void fail_at(const Token& tok, const std::string& message) const;

private:
  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

std::string describe(const Token& tok);

}  // namespace sbc
