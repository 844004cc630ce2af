#include "cclab/lexer.hpp"

#include <array>
#include <cctype>
#include <limits>
#include <unordered_set>

namespace cclab {

namespace {

const std::unordered_set<std::string_view> kKeywords = {
    "fn",     "let",   "if",    "else",  "while", "return", "output",
    "probe",  "check", "when",  "call",  "true",  "false",  "global",
};

// Longest-match order matters: two-character operators come first.
constexpr std::array<std::string_view, 21> kPunct = {
    "&&", "||", "==", "!=", "<=", ">=", "(", ")", "{", "}", ",",
    ";",  "=",  "<",  ">",  "+",  "-",  "*", "/", "%", "!",
};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

}  // namespace

std::vector<Token> tokenize(std::string_view src) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  int line = 1;
  int col = 1;
  const std::size_t n = src.size();

  auto push = [&](Token::Kind kind, std::string text, std::int64_t val = 0) {
    tokens.push_back(Token{kind, std::move(text), val, line, col});
  };

  while (i < n) {
    char c = src[i];
    if (c == '\n') {
      ++i;
      ++line;
      col = 1;
      continue;
    }
    if (c == ' ' || c == '\t' || c == '\r') {
      ++i;
      ++col;
      continue;
    }
    if (src.substr(i, 2) == "//") {
      while (i < n && src[i] != '\n') ++i;
      continue;
    }
    if (c == '"') {
      std::size_t j = i + 1;
      while (j < n && src[j] != '"') {
        if (src[j] == '\n') throw ParseError("unterminated string literal", line, col);
        ++j;
      }
      if (j >= n) throw ParseError("unterminated string literal", line, col);
      push(Token::Kind::String, std::string(src.substr(i + 1, j - i - 1)));
      col += static_cast<int>(j + 1 - i);
      i = j + 1;
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      std::int64_t value = 0;
      bool overflow = false;
      while (j < n && std::isdigit(static_cast<unsigned char>(src[j]))) {
        int digit = src[j] - '0';
        if (value > (std::numeric_limits<std::int64_t>::max() - digit) / 10) {
          overflow = true;
        } else {
          value = value * 10 + digit;
        }
        ++j;
      }
      if (overflow) throw ParseError("integer literal out of range", line, col);
      push(Token::Kind::Int, std::string(src.substr(i, j - i)), value);
      col += static_cast<int>(j - i);
      i = j;
      continue;
    }
    if (ident_start(c)) {
      std::size_t j = i;
      while (j < n && ident_char(src[j])) ++j;
      std::string text(src.substr(i, j - i));
      const Token::Kind kind =
          kKeywords.count(text) ? Token::Kind::Keyword : Token::Kind::Ident;
      push(kind, std::move(text));
      col += static_cast<int>(j - i);
      i = j;
      continue;
    }
    bool matched = false;
    for (std::string_view p : kPunct) {
      if (src.substr(i, p.size()) == p) {
        push(Token::Kind::Punct, std::string(p));
        col += static_cast<int>(p.size());
        i += p.size();
        matched = true;
        break;
      }
    }
    if (!matched) {
      throw ParseError(std::string("unexpected character '") + c + "'", line, col);
    }
  }
  tokens.push_back(Token{Token::Kind::Eof, "", 0, line, col});
  return tokens;
}

}  // namespace cclab
