#include "lexer.hpp"

#include <cctype>

#include "mce/error.hpp"

namespace mce::detail {

const char* describe(Tok t) {
  switch (t) {
    case Tok::Ident: return "identifier";
    case Tok::Var: return "variable";
    case Tok::Number: return "number";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::LBrace: return "'{'";
    case Tok::RBrace: return "'}'";
    case Tok::Comma: return "','";
    case Tok::Dot: return "'.'";
    case Tok::Semi: return "';'";
    case Tok::Colon: return "':'";
    case Tok::Pipe: return "'|'";
    case Tok::Neck: return "':-'";
    case Tok::Arrow: return "'<-'";
    case Tok::Equals: return "'='";
    case Tok::End: return "end of input";
  }
  return "token";
}

bool is_ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}

bool is_ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
}

void Lexer::advance() {
  if (peek() == '\n') {
    ++line_;
    col_ = 1;
  } else {
    ++col_;
  }
  ++at_;
}

void Lexer::skip_blank() {
  for (;;) {
    char c = peek();
    if (c == '%') {
      while (peek() != '\n' && peek() != '\0') advance();
    } else if (c != '\0' && std::isspace(static_cast<unsigned char>(c))) {
      advance();
    } else {
      return;
    }
  }
}

Token Lexer::next() {
  skip_blank();
  Token tok;
  tok.pos = {line_, col_};
  const char c = peek();
  auto single = [&](Tok k) {
    tok.kind = k;
    tok.text = std::string(1, c);
    advance();
    return tok;
  };
  auto is_digit = [](char ch) { return std::isdigit(static_cast<unsigned char>(ch)) != 0; };

  if (c == '\0') {
    tok.kind = Tok::End;
    return tok;
  }
  if (is_ident_start(c)) {
    tok.kind = Tok::Ident;
    while (is_ident_char(peek())) {
      tok.text.push_back(peek());
      advance();
    }
    return tok;
  }
  if (c == '?') {
    advance();
    if (!is_ident_start(peek())) {
      throw Error(ErrorKind::Parse, "line " + std::to_string(tok.pos.line) + ", column " +
                                        std::to_string(tok.pos.column) +
                                        ": expected variable name after '?'");
    }
    tok.kind = Tok::Var;
    while (is_ident_char(peek())) {
      tok.text.push_back(peek());
      advance();
    }
    return tok;
  }
  if (is_digit(c) || (c == '.' && is_digit(peek(1)))) {
    tok.kind = Tok::Number;
    while (is_digit(peek())) {
      tok.text.push_back(peek());
      advance();
    }
    if (peek() == '.' && is_digit(peek(1))) {
      tok.text.push_back('.');
      advance();
      while (is_digit(peek())) {
        tok.text.push_back(peek());
        advance();
      }
    }
    if ((peek() == 'e' || peek() == 'E') &&
        (is_digit(peek(1)) || ((peek(1) == '-' || peek(1) == '+') && is_digit(peek(2))))) {
      tok.text.push_back(peek());
      advance();
      if (peek() == '-' || peek() == '+') {
        tok.text.push_back(peek());
        advance();
      }
      while (is_digit(peek())) {
        tok.text.push_back(peek());
        advance();
      }
    }
    return tok;
  }
  if (c == ':' && peek(1) == '-') {
    advance();
    advance();
    tok.kind = Tok::Neck;
    tok.text = ":-";
    return tok;
  }
  if (c == '<' && peek(1) == '-') {
    advance();
    advance();
    tok.kind = Tok::Arrow;
    tok.text = "<-";
    return tok;
  }
  switch (c) {
    case '(': return single(Tok::LParen);
    case ')': return single(Tok::RParen);
    case '{': return single(Tok::LBrace);
    case '}': return single(Tok::RBrace);
    case ',': return single(Tok::Comma);
    case '.': return single(Tok::Dot);
    case ';': return single(Tok::Semi);
    case ':': return single(Tok::Colon);
    case '|': return single(Tok::Pipe);
    case '=': return single(Tok::Equals);
    default: break;
  }
  throw Error(ErrorKind::Parse, "line " + std::to_string(tok.pos.line) + ", column " +
                                    std::to_string(tok.pos.column) + ": unexpected character '" +
                                    std::string(1, c) + "'");
}

Token TokenStream::take() {
  Token t = std::move(cur_);
  cur_ = lexer_.next();
  return t;
}

Token TokenStream::expect(Tok kind, const char* context) {
  if (cur_.kind != kind) {
    std::string got = cur_.kind == Tok::End ? describe(Tok::End) : "'" + cur_.text + "'";
    fail(cur_.pos, std::string("expected ") + describe(kind) + " " + context + ", got " + got);
  }
  return take();
}

bool TokenStream::accept(Tok kind) {
  if (cur_.kind != kind) return false;
  take();
  return true;
}

void TokenStream::fail(const SourcePos& pos, const std::string& message) const {
  throw Error(ErrorKind::Parse, "line " + std::to_string(pos.line) + ", column " +
                                    std::to_string(pos.column) + ": " + message);
}

}  // namespace mce::detail
