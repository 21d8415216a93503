#pragma once

// Scalar types: exact rationals (GMP) and a prime field whose modulus is a
// per-thread context, in the spirit of NTL's ZZ_p push/pop.

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "sheafstrata/error.hpp"

namespace sheafstrata {

using Rational = mpq_class;

inline constexpr std::uint32_t kDefaultPrime = 10007;

inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

class ModP {
 public:
  ModP() = default;
  ModP(long long v) {  // NOLINT(google-explicit-constructor)
    const long long p = modulus();
    long long r = v % p;
    if (r < 0) r += p;
    v_ = static_cast<std::uint32_t>(r);
  }

  static std::uint32_t modulus() { return current(); }

  // RAII: installs a modulus for the current thread, restores the old one on exit.
  class Context {
   public:
    explicit Context(std::uint32_t p) : saved_(current()) {
      if (!is_prime(p)) throw Error(ErrorKind::precondition, "modulus " + std::to_string(p) + " is not prime");
      current() = p;
    }
    ~Context() { current() = saved_; }
    Context(const Context&) = delete;
    Context& operator=(const Context&) = delete;

   private:
    std::uint32_t saved_;
  };

  static ModP from_rational(const Rational& q) {
    const std::uint32_t p = modulus();
    mpz_class n = q.get_num() % p;
    mpz_class d = q.get_den() % p;
    if (d == 0) throw Error(ErrorKind::precondition, "denominator vanishes modulo p");
    if (n < 0) n += p;
    ModP r;
    r.v_ = static_cast<std::uint32_t>(n.get_ui());
    ModP dd;
    dd.v_ = static_cast<std::uint32_t>(d.get_ui());
    return r / dd;
  }

  std::uint32_t value() const { return v_; }

  ModP& operator+=(ModP o) {
    std::uint64_t s = std::uint64_t(v_) + o.v_;
    if (s >= modulus()) s -= modulus();
    v_ = static_cast<std::uint32_t>(s);
    return *this;
  }
  ModP& operator-=(ModP o) {
    v_ = v_ >= o.v_ ? v_ - o.v_ : static_cast<std::uint32_t>(std::uint64_t(v_) + modulus() - o.v_);
    return *this;
  }
  ModP& operator*=(ModP o) {
    v_ = static_cast<std::uint32_t>((std::uint64_t(v_) * o.v_) % modulus());
    return *this;
  }
  ModP& operator/=(ModP o) { return *this *= o.inverse(); }

  ModP inverse() const {
    if (v_ == 0) throw Error(ErrorKind::precondition, "division by zero in prime field");
    std::int64_t a = v_, m = modulus(), x0 = 1, x1 = 0;
    while (m != 0) {
      std::int64_t t = a / m;
      std::int64_t tmp = a - t * m;
      a = m;
      m = tmp;
      tmp = x0 - t * x1;
      x0 = x1;
      x1 = tmp;
    }
    return ModP(x0);
  }

  friend ModP operator+(ModP a, ModP b) { return a += b; }
  friend ModP operator-(ModP a, ModP b) { return a -= b; }
  friend ModP operator*(ModP a, ModP b) { return a *= b; }
  friend ModP operator/(ModP a, ModP b) { return a /= b; }
  ModP operator-() const { return ModP(0) - *this; }
  friend bool operator==(ModP a, ModP b) { return a.v_ == b.v_; }
  friend bool operator==(ModP a, int b) { return a == ModP(b); }

 private:
  static std::uint32_t& current() {
    thread_local std::uint32_t p = kDefaultPrime;
    return p;
  }
  std::uint32_t v_ = 0;
};

inline std::string to_string(const Rational& q) { return q.get_str(); }
inline std::string to_string(const ModP& x) { return std::to_string(x.value()); }

// Accepts "n", "-n", "n/m"; the result is canonicalised.
inline Rational parse_rational(std::string_view text) {
  std::string s(text);
  auto bad = [&] { return Error(ErrorKind::parse_error, "bad rational literal '" + s + "'"); };
  if (s.empty()) throw bad();
  std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  bool seen_digit = false, seen_slash = false, digit_after_slash = false;
  for (std::size_t k = i; k < s.size(); ++k) {
    if (s[k] >= '0' && s[k] <= '9') {
      seen_digit = true;
      if (seen_slash) digit_after_slash = true;
    } else if (s[k] == '/' && !seen_slash && seen_digit) {
      seen_slash = true;
    } else {
      throw bad();
    }
  }
  if (!seen_digit || (seen_slash && !digit_after_slash)) throw bad();
  if (s[0] == '+') s.erase(0, 1);
  Rational q;
  if (q.set_str(s, 10) != 0) throw bad();
  if (q.get_den() == 0) throw bad();
  q.canonicalize();
  return q;
}

}  // namespace sheafstrata
