#include "sbc/lexer.hpp"

#include <array>
#include <cctype>

namespace sbc {

std::string to_string(const SourceLoc& loc) {
  return std::to_string(loc.line) + ":" + std::to_string(loc.column);
}

bool has_errors(const std::vector<Diagnostic>& diags) {
  for (const auto& d : diags) {
    if (d.severity == Severity::Error) return true;
  }
  return false;
}

std::string normalize_newlines(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] == '\r') {
      out.push_back('\n');
      if (i + 1 < text.size() && text[i + 1] == '\n') ++i;
    } else {
      out.push_back(text[i]);
    }
  }
  return out;
}

namespace {

bool ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}
bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}
bool digit(char c) { return c >= '0' && c <= '9'; }

// Longest match first.
constexpr std::array<std::string_view, 5> kTwoCharPuncts = {"->", "==", "!=", "<=", ">="};
constexpr std::string_view kOneCharPuncts = ";:,.(){}[]?/+-*=<>!";

}  // namespace

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> out;
  int line = 1;
  int col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n && i < text.size(); ++k, ++i) {
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
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v') {
      advance(1);
      continue;
    }
    if (c == '/' && i + 1 < text.size() && text[i + 1] == '/') {
      while (i < text.size() && text[i] != '\n') advance(1);
      continue;
    }

    Token tok;
    tok.loc = {line, col};
    std::size_t start = i;

    if (ident_start(c)) {
      while (i < text.size() && ident_char(text[i])) advance(1);
      tok.kind = Tok::Ident;
      tok.text = std::string(text.substr(start, i - start));
    } else if (digit(c)) {
      bool real = false;
      while (i < text.size() && digit(text[i])) advance(1);
      if (i + 1 < text.size() && text[i] == '.' && digit(text[i + 1])) {
        real = true;
        advance(1);
        while (i < text.size() && digit(text[i])) advance(1);
      }
      if (i < text.size() && (text[i] == 'e' || text[i] == 'E')) {
        std::size_t j = i + 1;
        if (j < text.size() && (text[j] == '+' || text[j] == '-')) ++j;
        if (j < text.size() && digit(text[j])) {
          real = true;
          advance(j - i);
          while (i < text.size() && digit(text[i])) advance(1);
        }
      }
      tok.kind = real ? Tok::Real : Tok::Integer;
      tok.text = std::string(text.substr(start, i - start));
    } else if (c == '"') {
      advance(1);
      std::string value;
      bool closed = false;
      while (i < text.size() && text[i] != '\n') {
        char d = text[i];
        if (d == '"') {
          advance(1);
          closed = true;
          break;
        }
        if (d == '\\' && i + 1 < text.size()) {
          char e = text[i + 1];
          value.push_back(e == 'n' ? '\n' : e == 't' ? '\t' : e);
          advance(2);
          continue;
        }
        value.push_back(d);
        advance(1);
      }
      if (closed) {
        tok.kind = Tok::String;
        tok.text = std::move(value);
      } else {
        tok.kind = Tok::Invalid;
        tok.text = "unterminated string literal";
      }
    } else {
      bool matched = false;
      for (auto p : kTwoCharPuncts) {
        if (text.substr(i, 2) == p) {
          tok.kind = Tok::Punct;
          tok.text = std::string(p);
          advance(2);
          matched = true;
          break;
        }
      }
      if (!matched && kOneCharPuncts.find(c) != std::string_view::npos) {
        tok.kind = Tok::Punct;
        tok.text = std::string(1, c);
        advance(1);
        matched = true;
      }
      if (!matched) {
        tok.kind = Tok::Invalid;
        tok.text = std::string("unexpected character '") + c + "'";
        // Skip a whole UTF-8 sequence so positions stay sane.
        std::size_t n = 1;
        auto u = static_cast<unsigned char>(c);
        if (u >= 0xF0) n = 4;
        else if (u >= 0xE0) n = 3;
        else if (u >= 0xC0) n = 2;
        advance(n);
      }
    }
    out.push_back(std::move(tok));
  }
  Token end;
  end.kind = Tok::End;
  end.loc = {line, col};
  out.push_back(end);
  return out;
}

std::string describe(const Token& tok) {
  switch (tok.kind) {
    case Tok::End: return "end of input";
    case Tok::String: return "string \"" + tok.text + "\"";
    case Tok::Invalid: return tok.text;
    default: return "'" + tok.text + "'";
  }
}

TokenCursor::TokenCursor(std::vector<Token> tokens) : tokens_(std::move(tokens)) {
  if (tokens_.empty() || tokens_.back().kind != Tok::End) {
    Token end;
    end.kind = Tok::End;
    if (!tokens_.empty()) end.loc = tokens_.back().loc;
    tokens_.push_back(end);
  }
}

const Token& TokenCursor::peek(std::size_t ahead) const {
  std::size_t idx = pos_ + ahead;
  return idx < tokens_.size() ? tokens_[idx] : tokens_.back();
}

const Token& TokenCursor::next() {
  const Token& t = peek();
  if (pos_ + 1 < tokens_.size()) ++pos_;
  return t;
}

bool TokenCursor::is_punct(std::string_view p, std::size_t ahead) const {
  const auto& t = peek(ahead);
  return t.kind == Tok::Punct && t.text == p;
}

bool TokenCursor::is_ident(std::string_view name, std::size_t ahead) const {
  const auto& t = peek(ahead);
  return t.kind == Tok::Ident && t.text == name;
}

bool TokenCursor::accept_punct(std::string_view p) {
  if (!is_punct(p)) return false;
  next();
  return true;
}

bool TokenCursor::accept_ident(std::string_view name) {
  if (!is_ident(name)) return false;
  next();
  return true;
}

const Token& TokenCursor::expect_punct(std::string_view p) {
  if (!is_punct(p)) fail("expected '" + std::string(p) + "' but found " + describe(peek()));
  return next();
}

const Token& TokenCursor::expect_ident(std::string_view what) {
  if (peek().kind != Tok::Ident) fail("expected " + std::string(what) + " but found " + describe(peek()));
  return next();
}

void TokenCursor::fail(const std::string& message) const { fail_at(peek(), message); }

void TokenCursor::fail_at(const Token& tok, const std::string& message) const {
  throw ParseError(tok.loc, message);
}

}  // namespace sbc
