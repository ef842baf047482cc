#pragma once

#include <boost/rational.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace utiliproc {

// Exact rational arithmetic for utility and cost values. Model files carry
// decimal literals; verdicts must not depend on binary rounding.
using Rat = boost::rational<long long>;

inline Rat rat_from_decimal(const std::string& text) {
  if (text.empty()) throw std::invalid_argument("empty numeric literal");
  std::size_t i = 0;
  bool neg = false;
  if (text[i] == '-' || text[i] == '+') {
    neg = text[i] == '-';
    ++i;
  }
  long long num = 0;
  long long den = 1;
  bool seen_digit = false, seen_dot = false;
  for (; i < text.size(); ++i) {
    char c = text[i];
    if (c == '.') {
      if (seen_dot) throw std::invalid_argument("bad numeric literal: " + text);
      seen_dot = true;
      continue;
    }
    if (c == '/') {
      // n/d form, used by the structured output round-trip
      long long d = std::stoll(text.substr(i + 1));
      return Rat(neg ? -num : num, d);
    }
    if (c < '0' || c > '9') throw std::invalid_argument("bad numeric literal: " + text);
    num = num * 10 + (c - '0');
    if (seen_dot) den *= 10;
    seen_digit = true;
  }
  if (!seen_digit) throw std::invalid_argument("bad numeric literal: " + text);
  return Rat(neg ? -num : num, den);
}

// Renders finite decimals as decimals ("0.7", "-2", "0.25"), everything else
// as "n/d".
inline std::string rat_str(const Rat& r) {
  long long den = r.denominator();
  if (den == 1) return std::to_string(r.numerator());
  long long scale = 1;
  long long d = den;
  while (d % 2 == 0) d /= 2;
  while (d % 5 == 0) d /= 5;
  if (d != 1) return std::to_string(r.numerator()) + "/" + std::to_string(den);
  int digits = 0;
  d = den;
  while (d != 1) {
    if (d % 10 == 0) d /= 10;
    else if (d % 2 == 0) { d /= 2; scale *= 5; }
    else { d /= 5; scale *= 2; }
    ++digits;
  }
  long long num = r.numerator() * scale;
  den = den * scale;  // now a power of 10
  bool neg = num < 0;
  if (neg) num = -num;
  std::string whole = std::to_string(num / den);
  std::string frac = std::to_string(num % den);
  std::string pad(std::to_string(den).size() - 1 - frac.size(), '0');
  std::string out = (neg ? "-" : "") + whole + "." + pad + frac;
  while (out.back() == '0') out.pop_back();
  if (out.back() == '.') out.pop_back();
  return out;
}

// a <= b up to an absolute slack; slack 0 is the exact comparison.
inline bool rat_leq(const Rat& a, const Rat& b, const Rat& tolerance) {
  return a <= b + tolerance;
}

inline bool rat_eq(const Rat& a, const Rat& b, const Rat& tolerance) {
  Rat d = a - b;
  if (d < Rat(0)) d = -d;
  return d <= tolerance;
}

}  // namespace utiliproc
