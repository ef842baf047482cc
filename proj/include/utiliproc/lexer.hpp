#pragma once

#include <cctype>
#include <string>
#include <vector>

namespace utiliproc {

enum class Tok {
  Ident,
  Number,
  LBrace,
  RBrace,
  LParen,
  RParen,
  LBracket,
  RBracket,
  Semi,
  Colon,
  Comma,
  Equals,
  Plus,
  Star,
  Dot,
  Lt,
  Gt,
  Arrow,   // ->
  Wand,    // -*
  End,
  Bad
};

struct Token {
  Tok kind = Tok::End;
  std::string text;
  int line = 1;
  int col = 1;
};

// Line comments start with '#'. Identifiers may contain letters, digits,
// '_', '\'' and '-' (a '-' only continues an identifier when it neither
// starts "->"/"-*" nor begins a numeric literal).
inline std::vector<Token> lex(const std::string& src) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto push = [&](Tok k, std::string text, int l, int c) {
    out.push_back({k, std::move(text), l, c});
  };
  auto is_ident_start = [](char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; };
  auto is_ident_char = [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
  };
  while (i < src.size()) {
    char c = src[i];
    if (c == '\n') {
      ++line;
      col = 1;
      ++i;
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      ++col;
      continue;
    }
    if (c == '#') {
      while (i < src.size() && src[i] != '\n') ++i;
      continue;
    }
    int l = line, cl = col;
    if (is_ident_start(c)) {
      std::size_t j = i;
      while (j < src.size()) {
        if (is_ident_char(src[j])) {
          ++j;
          continue;
        }
        if (src[j] == '-' && j + 1 < src.size() && is_ident_char(src[j + 1]) && src[j + 1] != '\'') {
          j += 2;
          continue;
        }
        break;
      }
      push(Tok::Ident, src.substr(i, j - i), l, cl);
      col += static_cast<int>(j - i);
      i = j;
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '-' && i + 1 < src.size() && std::isdigit(static_cast<unsigned char>(src[i + 1])))) {
      std::size_t j = i + 1;
      while (j < src.size() &&
             (std::isdigit(static_cast<unsigned char>(src[j])) || src[j] == '.'))
        ++j;
      push(Tok::Number, src.substr(i, j - i), l, cl);
      col += static_cast<int>(j - i);
      i = j;
      continue;
    }
    auto two = [&](char a, char b) { return c == a && i + 1 < src.size() && src[i + 1] == b; };
    if (two('-', '>')) {
      push(Tok::Arrow, "->", l, cl);
      i += 2;
      col += 2;
      continue;
    }
    if (two('-', '*')) {
      push(Tok::Wand, "-*", l, cl);
      i += 2;
      col += 2;
      continue;
    }
    Tok k = Tok::Bad;
    switch (c) {
      case '{': k = Tok::LBrace; break;
      case '}': k = Tok::RBrace; break;
      case '(': k = Tok::LParen; break;
      case ')': k = Tok::RParen; break;
      case '[': k = Tok::LBracket; break;
      case ']': k = Tok::RBracket; break;
      case ';': k = Tok::Semi; break;
      case ':': k = Tok::Colon; break;
      case ',': k = Tok::Comma; break;
      case '=': k = Tok::Equals; break;
      case '+': k = Tok::Plus; break;
      case '*': k = Tok::Star; break;
      case '.': k = Tok::Dot; break;
      case '<': k = Tok::Lt; break;
      case '>': k = Tok::Gt; break;
      default: k = Tok::Bad; break;
    }
    push(k, std::string(1, c), l, cl);
    ++i;
    ++col;
  }
  out.push_back({Tok::End, "", line, col});
  return out;
}

}  // namespace utiliproc
