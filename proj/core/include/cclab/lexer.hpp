#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace cclab {

// Thrown for any lexical, syntactic, or static-semantic defect in a
// subject program. Members carry the source position when known.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::string message, int line, int col)
      : std::runtime_error(std::to_string(line) + ":" + std::to_string(col) +
                           ": " + message),
        line_(line),
        col_(col) {}
  explicit ParseError(std::string message)
      : std::runtime_error(std::move(message)), line_(0), col_(0) {}

  int line() const { return line_; }
  int col() const { return col_; }

 private:
  int line_;
  int col_;
};

struct Token {
  enum class Kind : std::uint8_t { Ident, Keyword, Int, String, Punct, Eof };

  Kind kind;
  std::string text;          // lexeme (keyword/ident/punct text, string body)
  std::int64_t int_val = 0;  // Int
  int line = 1;
  int col = 1;

  bool is(Kind k) const { return kind == k; }
  bool is(Kind k, std::string_view t) const { return kind == k && text == t; }
};

std::vector<Token> tokenize(std::string_view source);

}  // namespace cclab
