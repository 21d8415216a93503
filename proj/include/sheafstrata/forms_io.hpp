#pragma once

// Text form of polynomials: "3*X^2*Y - 1/2*Z^3". Terms are printed in
// graded-lex order; parse(format(f)) == f.

#include <cctype>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "sheafstrata/forms.hpp"

namespace sheafstrata {

inline std::string to_string(const QForm& f) {
  std::string out;
  const auto basis = monomial_basis(f.degree());
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const Rational& c = f.coefficients()[i];
    if (c == 0) continue;
    const Monomial& m = basis[i];
    Rational a = abs(c);
    if (out.empty())
      out += c < 0 ? "-" : "";
    else
      out += c < 0 ? " - " : " + ";
    std::string vars;
    auto put = [&](char v, int e) {
      if (e == 0) return;
      if (!vars.empty()) vars += "*";
      vars += v;
      if (e > 1) vars += "^" + std::to_string(e);
    };
    put('X', m.x);
    put('Y', m.y);
    put('Z', m.z);
    if (vars.empty())
      out += a.get_str();
    else if (a == 1)
      out += vars;
    else
      out += a.get_str() + "*" + vars;
  }
  return out.empty() ? "0" : out;
}

namespace detail {

class FormParser {
 public:
  explicit FormParser(std::string_view s) : s_(s) {}

  // Terms keyed by monomial; also reports the common degree (nullopt if no terms).
  std::map<Monomial, Rational> parse() {
    std::map<Monomial, Rational> terms;
    skip_ws();
    if (eof()) fail("empty polynomial");
    bool first = true;
    while (!eof()) {
      int sign = 1;
      if (match_minus()) {
        sign = -1;
      } else if (peek() == '+') {
        ++pos_;
      } else if (!first) {
        fail("expected '+' or '-'");
      }
      skip_ws();
      auto [coef, mono] = term();
      terms[mono] += sign * coef;
      first = false;
      skip_ws();
    }
    return terms;
  }

 private:
  std::pair<Rational, Monomial> term() {
    Rational coef = 1;
    Monomial m;
    bool any = false;
    if (std::isdigit(static_cast<unsigned char>(peek()))) {
      coef = number();
      any = true;
      skip_ws();
      if (peek() == '*') {
        ++pos_;
        skip_ws();
      } else {
        return {coef, m};
      }
    }
    for (;;) {
      const char v = peek();
      int* slot = v == 'X' || v == 'x' ? &m.x : v == 'Y' || v == 'y' ? &m.y : v == 'Z' || v == 'z' ? &m.z : nullptr;
      if (slot == nullptr) fail(any ? "expected a variable after '*'" : "expected a coefficient or variable");
      ++pos_;
      skip_ws();
      int e = 1;
      if (peek() == '^') {
        ++pos_;
        skip_ws();
        if (!std::isdigit(static_cast<unsigned char>(peek()))) fail("expected exponent");
        e = 0;
        while (std::isdigit(static_cast<unsigned char>(peek()))) e = e * 10 + (s_[pos_++] - '0');
        skip_ws();
      }
      *slot += e;
      any = true;
      if (peek() != '*') break;
      ++pos_;
      skip_ws();
    }
    return {coef, m};
  }

  Rational number() {
    std::size_t start = pos_;
    while (std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
    if (peek() == '/') {
      ++pos_;
      if (!std::isdigit(static_cast<unsigned char>(peek()))) fail("expected denominator");
      while (std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
    }
    Rational q = parse_rational(s_.substr(start, pos_ - start));
    return q;
  }

  bool match_minus() {
    if (peek() == '-') {
      ++pos_;
      return true;
    }
    static constexpr std::string_view kUnicodeMinus = "\xE2\x88\x92";
    if (s_.substr(pos_, 3) == kUnicodeMinus) {
      pos_ += 3;
      return true;
    }
    return false;
  }
  void skip_ws() {
    while (!eof() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eof() const { return pos_ >= s_.size(); }
  char peek() const { return eof() ? '\0' : s_[pos_]; }
  [[noreturn]] void fail(const std::string& msg) const {
    throw Error(ErrorKind::parse_error, msg + " at offset " + std::to_string(pos_) + " in '" + std::string(s_) + "'");
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace detail

// degree < 0 means "infer"; a polynomial with no nonzero terms then has degree 0.
inline QForm parse_form(std::string_view text, int degree = -1) {
  auto terms = detail::FormParser(text).parse();
  int d = degree;
  for (const auto& [m, c] : terms) {
    if (c == 0) continue;
    if (d < 0) d = m.degree();
    if (m.degree() != d)
      throw Error(degree == -1 ? ErrorKind::parse_error : ErrorKind::degree_mismatch,
                  "term of degree " + std::to_string(m.degree()) + " in a form of degree " + std::to_string(d) +
                      ": '" + std::string(text) + "'");
  }
  if (d < 0) d = 0;
  QForm f(d);
  for (const auto& [m, c] : terms)
    if (c != 0) f.set_coefficient(m, c);
  return f;
}

}  // namespace sheafstrata
