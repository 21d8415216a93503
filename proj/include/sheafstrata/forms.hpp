#pragma once

// Homogeneous forms in X, Y, Z stored densely in graded-lex order (X > Y > Z).

#include <array>
#include <compare>
#include <cstddef>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "sheafstrata/error.hpp"
#include "sheafstrata/field.hpp"
#include "sheafstrata/linalg.hpp"

namespace sheafstrata {

struct Monomial {
  int x = 0, y = 0, z = 0;
  int degree() const { return x + y + z; }
  friend auto operator<=>(const Monomial&, const Monomial&) = default;
};

inline std::size_t monomial_count(int d) { return d < 0 ? 0 : std::size_t(d + 1) * std::size_t(d + 2) / 2; }

inline std::size_t monomial_index(const Monomial& m) {
  const std::size_t r = std::size_t(m.degree() - m.x);
  return r * (r + 1) / 2 + std::size_t(m.degree() - m.x - m.y);
}

inline std::vector<Monomial> monomial_basis(int d) {
  std::vector<Monomial> out;
  if (d < 0) return out;
  out.reserve(monomial_count(d));
  for (int a = d; a >= 0; --a)
    for (int b = d - a; b >= 0; --b) out.push_back({a, b, d - a - b});
  return out;
}

template <class K>
class Form {
 public:
  Form() : degree_(0), coeffs_(1, K(0)) {}
  explicit Form(int degree) : degree_(degree), coeffs_(monomial_count(degree), K(0)) {
    if (degree < 0) throw Error(ErrorKind::degree_mismatch, "forms have non-negative degree");
  }
  Form(int degree, std::vector<K> coeffs) : degree_(degree), coeffs_(std::move(coeffs)) {
    if (degree < 0 || coeffs_.size() != monomial_count(degree))
      throw Error(ErrorKind::degree_mismatch, "coefficient vector does not match degree");
  }

  static Form constant(const K& c) { return Form(0, {c}); }
  static Form monomial(const Monomial& m, const K& c = K(1)) {
    Form f(m.degree());
    f.coeffs_[monomial_index(m)] = c;
    return f;
  }
  // 0 -> X, 1 -> Y, 2 -> Z
  static Form variable(int i) { return monomial({i == 0, i == 1, i == 2}); }
  static Form linear(const K& a, const K& b, const K& c) { return Form(1, {a, b, c}); }

  int degree() const { return degree_; }
  const std::vector<K>& coefficients() const { return coeffs_; }
  const K& coefficient(const Monomial& m) const { return coeffs_[monomial_index(m)]; }
  void set_coefficient(const Monomial& m, const K& c) { coeffs_[monomial_index(m)] = c; }

  bool is_zero() const {
    for (const K& c : coeffs_)
      if (!(c == 0)) return false;
    return true;
  }

  Form& operator+=(const Form& o) {
    check_same_degree(o);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
    return *this;
  }
  Form& operator-=(const Form& o) {
    check_same_degree(o);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
    return *this;
  }
  Form& operator*=(const K& s) {
    for (K& c : coeffs_) c *= s;
    return *this;
  }
  Form operator-() const {
    Form r = *this;
    for (K& c : r.coeffs_) c = -c;
    return r;
  }
  friend Form operator+(Form a, const Form& b) { return a += b; }
  friend Form operator-(Form a, const Form& b) { return a -= b; }
  friend Form operator*(Form a, const K& s) { return a *= s; }
  friend Form operator*(const K& s, Form a) { return a *= s; }

  friend Form operator*(const Form& f, const Form& g) {
    Form out(f.degree_ + g.degree_);
    const auto bf = monomial_basis(f.degree_);
    const auto bg = monomial_basis(g.degree_);
    for (std::size_t i = 0; i < bf.size(); ++i) {
      if (f.coeffs_[i] == 0) continue;
      for (std::size_t j = 0; j < bg.size(); ++j) {
        if (g.coeffs_[j] == 0) continue;
        const Monomial m{bf[i].x + bg[j].x, bf[i].y + bg[j].y, bf[i].z + bg[j].z};
        out.coeffs_[monomial_index(m)] += f.coeffs_[i] * g.coeffs_[j];
      }
    }
    return out;
  }

  Form times_monomial(const Monomial& m) const {
    Form out(degree_ + m.degree());
    const auto b = monomial_basis(degree_);
    for (std::size_t i = 0; i < b.size(); ++i)
      if (!(coeffs_[i] == 0))
        out.coeffs_[monomial_index({b[i].x + m.x, b[i].y + m.y, b[i].z + m.z})] = coeffs_[i];
    return out;
  }

  K eval(const std::array<K, 3>& pt) const {
    K acc(0);
    const auto b = monomial_basis(degree_);
    for (std::size_t i = 0; i < b.size(); ++i) {
      if (coeffs_[i] == 0) continue;
      K t = coeffs_[i];
      for (int k = 0; k < b[i].x; ++k) t *= pt[0];
      for (int k = 0; k < b[i].y; ++k) t *= pt[1];
      for (int k = 0; k < b[i].z; ++k) t *= pt[2];
      acc += t;
    }
    return acc;
  }

  friend bool operator==(const Form& a, const Form& b) {
    if (a.is_zero() && b.is_zero()) return true;  // zero is degree-agnostic
    return a.degree_ == b.degree_ && a.coeffs_ == b.coeffs_;
  }

 private:
  void check_same_degree(const Form& o) const {
    if (o.degree_ != degree_)
      throw Error(ErrorKind::degree_mismatch,
                  "adding forms of degree " + std::to_string(degree_) + " and " + std::to_string(o.degree_));
  }

  int degree_;
  std::vector<K> coeffs_;
};

using QForm = Form<Rational>;

// Exact quotient f / g when g divides f.
template <class K>
std::optional<Form<K>> divide_exact(const Form<K>& f, const Form<K>& g) {
  if (g.is_zero()) throw Error(ErrorKind::precondition, "division by the zero form");
  if (f.is_zero()) return Form<K>(std::max(0, f.degree() - g.degree()));
  const int dq = f.degree() - g.degree();
  if (dq < 0) return std::nullopt;
  // Graded-lex leading-term division; the leading monomial of g is its first nonzero entry.
  const auto bg = monomial_basis(g.degree());
  std::size_t lead = 0;
  while (g.coefficients()[lead] == 0) ++lead;
  const Monomial lm = bg[lead];
  const K lc = g.coefficients()[lead];
  Form<K> rem = f;
  Form<K> quot(dq);
  const auto bf = monomial_basis(f.degree());
  for (std::size_t i = 0; i < bf.size(); ++i) {
    const K c = rem.coefficients()[i];
    if (c == 0) continue;
    const Monomial m = bf[i];
    if (m.x < lm.x || m.y < lm.y || m.z < lm.z) return std::nullopt;
    const Monomial qm{m.x - lm.x, m.y - lm.y, m.z - lm.z};
    const K t = c / lc;
    quot.set_coefficient(qm, quot.coefficient(qm) + t);
    rem -= g.times_monomial(qm) * t;
  }
  if (!rem.is_zero()) return std::nullopt;
  return quot;
}

// Dimension of the linear span; all forms must share a degree (zero forms are ignored).
template <class K>
std::size_t span_dimension(std::span<const Form<K>> forms) {
  Matrix<K> m;
  int deg = -1;
  for (const auto& f : forms) {
    if (f.is_zero()) continue;
    if (deg < 0) deg = f.degree();
    if (f.degree() != deg) throw Error(ErrorKind::degree_mismatch, "span of forms of different degrees");
    m.append_row(f.coefficients());
  }
  return m.rows() == 0 ? 0 : rank(m);
}

template <class K>
std::size_t span_dimension(const std::vector<Form<K>>& forms) {
  return span_dimension(std::span<const Form<K>>(forms));
}

using Rng = std::mt19937_64;

inline Rational random_scalar(Rng& rng, int height) {
  std::uniform_int_distribution<int> dist(-height, height);
  return Rational(dist(rng));
}

inline Rational random_nonzero_scalar(Rng& rng, int height) {
  for (;;) {
    Rational c = random_scalar(rng, std::max(1, height));
    if (c != 0) return c;
  }
}

inline QForm random_form(int degree, Rng& rng, int height) {
  std::vector<Rational> c(monomial_count(degree));
  for (auto& x : c) x = random_scalar(rng, height);
  return QForm(degree, std::move(c));
}

inline QForm random_nonzero_form(int degree, Rng& rng, int height) {
  for (;;) {
    QForm f = random_form(degree, rng, std::max(1, height));
    if (!f.is_zero()) return f;
  }
}

template <class L, class K>
Form<L> convert_form(const Form<K>& f) {
  std::vector<L> c;
  c.reserve(f.coefficients().size());
  for (const K& x : f.coefficients()) {
    if constexpr (std::is_same_v<L, ModP> && std::is_same_v<K, Rational>)
      c.push_back(ModP::from_rational(x));
    else
      c.push_back(L(x));
  }
  return Form<L>(f.degree(), std::move(c));
}

}  // namespace sheafstrata
