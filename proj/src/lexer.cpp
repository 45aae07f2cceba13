#include "relsy/lexer.hpp"

#include <cctype>

namespace relsy {

bool same_word_ci(std::string_view a, std::string_view b) {
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i)
    if (std::tolower(static_cast<unsigned char>(a[i])) !=
        std::tolower(static_cast<unsigned char>(b[i])))
      return false;
  return true;
}

Lexer::Lexer(std::string_view src) {
  size_t i = 0;
  int line = 1, col = 1;
  auto advance = [&](size_t n) {
    for (size_t k = 0; k < n; ++k) {
      if (src[i + k] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    i += n;
  };
  while (i < src.size()) {
    char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    SourceLoc loc{line, col};
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t j = i;
      while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) ||
                                src[j] == '_'))
        ++j;
      tokens_.push_back({Token::Kind::Ident, std::string(src.substr(i, j - i)), loc});
      advance(j - i);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      tokens_.push_back({Token::Kind::Int, std::string(src.substr(i, j - i)), loc});
      advance(j - i);
      continue;
    }
    if (c == '"') {
      size_t j = i + 1;
      while (j < src.size() && src[j] != '"' && src[j] != '\n') ++j;
      if (j >= src.size() || src[j] != '"')
        throw ParseError(loc, "unterminated string literal");
      tokens_.push_back(
          {Token::Kind::Str, std::string(src.substr(i + 1, j - i - 1)), loc});
      advance(j - i + 1);
      continue;
    }
    if (c == '=' && i + 1 < src.size() && src[i + 1] == '=') {
      tokens_.push_back({Token::Kind::Punct, "==", loc});
      advance(2);
      continue;
    }
    static const std::string singles = "(){},;=<>!&|+-.";
    if (singles.find(c) != std::string::npos) {
      tokens_.push_back({Token::Kind::Punct, std::string(1, c), loc});
      advance(1);
      continue;
    }
    throw ParseError(loc, std::string("unexpected character '") + c + "'");
  }
  tokens_.push_back({Token::Kind::End, "", {line, col}});
}

const Token& Lexer::peek(size_t lookahead) const {
  size_t p = pos_ + lookahead;
  if (p >= tokens_.size()) p = tokens_.size() - 1;
  return tokens_[p];
}

Token Lexer::next() {
  const Token& t = peek();
  if (t.kind != Token::Kind::End) ++pos_;
  return t;
}

}  // namespace relsy
