#pragma once

#include <cstddef>
#include <string>
#include <string_view>

#include "mce/kb.hpp"

namespace mce::detail {

enum class Tok {
  Ident,
  Var,
  Number,
  LParen,
  RParen,
  LBrace,
  RBrace,
  Comma,
  Dot,
  Semi,
  Colon,
  Pipe,
  Neck,   // :-
  Arrow,  // <-
  Equals,
  End,
};

const char* describe(Tok t);

struct Token {
  Tok kind = Tok::End;
  std::string text;
  SourcePos pos;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  /// Throws Error(Parse) on characters outside the grammar.
  Token next();

 private:
  void skip_blank();
  char peek(std::size_t ahead = 0) const {
    return at_ + ahead < src_.size() ? src_[at_ + ahead] : '\0';
  }
  void advance();

  std::string_view src_;
  std::size_t at_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;
};

/// One-token-lookahead cursor shared by the KB and query parsers.
class TokenStream {
 public:
  explicit TokenStream(std::string_view src) : lexer_(src) { cur_ = lexer_.next(); }

  const Token& peek() const { return cur_; }
  Token take();
  Token expect(Tok kind, const char* context);
  bool accept(Tok kind);

  [[noreturn]] void fail(const SourcePos& pos, const std::string& message) const;

 private:
  Lexer lexer_;
  Token cur_;
};

bool is_ident_start(char c);
bool is_ident_char(char c);

}  // namespace mce::detail
