#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "relsy/diagnostics.hpp"

namespace relsy {

struct Token {
  enum class Kind { Ident, Int, Str, Punct, End };
  Kind kind;
  std::string text;  // Str holds the unquoted content
  SourceLoc loc;

  bool is(Kind k, std::string_view t) const { return kind == k && text == t; }
  bool isPunct(std::string_view t) const { return is(Kind::Punct, t); }
};

// Shared tokenizer for both surfaces (DDL and method source).  Keywords are
// ordinary identifiers here; the parsers decide what is reserved and whether
// matching is case-sensitive.
class Lexer {
 public:
  explicit Lexer(std::string_view src);

  const Token& peek(size_t lookahead = 0) const;
  Token next();
  SourceLoc loc() const { return peek().loc; }

  // Position save/restore, for the few places that need backtracking
  // (condition vs. expression disambiguation).
  size_t mark() const { return pos_; }
  void reset(size_t m) { pos_ = m; }

 private:
  std::vector<Token> tokens_;
  size_t pos_ = 0;
};

// Case-insensitive comparison used for SQL keywords.
bool same_word_ci(std::string_view a, std::string_view b);

}  // namespace relsy
