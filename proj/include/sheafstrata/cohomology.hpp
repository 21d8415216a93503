#pragma once

// Cohomology of F = coker(phi) on P^2, computed from global sections of the
// line bundles in the presentation. Everything here is exact over Q.

#include <string>
#include <vector>

#include "sheafstrata/gradedmat.hpp"

namespace sheafstrata {

// chi(O(k)) as a polynomial in k; equals h^0 or h^2 depending on the sign.
inline long long chi_line_bundle(int k) { return (static_cast<long long>(k) + 1) * (k + 2) / 2; }

inline long long euler_characteristic(const Presentation& p, int n) {
  long long chi = 0;
  for (int b : p.target_twists()) chi += chi_line_bundle(b + n);
  for (int a : p.source_twists()) chi -= chi_line_bundle(a + n);
  return chi;
}

// Coordinates of H^0(sum O(c_k + n)): concatenated monomial coefficient blocks.
struct SectionLayout {
  std::vector<int> degrees;  // c_k + n, possibly negative (empty block)
  std::vector<std::size_t> offsets;
  std::size_t dim = 0;
};

inline SectionLayout section_layout(const std::vector<int>& twists, int n) {
  SectionLayout l;
  for (int c : twists) {
    l.degrees.push_back(c + n);
    l.offsets.push_back(l.dim);
    l.dim += monomial_count(c + n);
  }
  return l;
}

// Matrix of H^0(phi(n)) : H^0(sum O(a_i + n)) -> H^0(sum O(b_j + n)).
inline Matrix<Rational> section_map(const Presentation& p, int n) {
  const SectionLayout src = section_layout(p.source_twists(), n);
  const SectionLayout tgt = section_layout(p.target_twists(), n);
  Matrix<Rational> m(tgt.dim, src.dim);
  for (std::size_t i = 0; i < p.cols(); ++i) {
    const auto basis = monomial_basis(src.degrees[i]);
    for (std::size_t k = 0; k < basis.size(); ++k) {
      const std::size_t col = src.offsets[i] + k;
      for (std::size_t j = 0; j < p.rows(); ++j) {
        if (p.required_degree(j, i) < 0 || p(j, i).is_zero()) continue;
        const QForm prod = p(j, i).times_monomial(basis[k]);
        for (std::size_t r = 0; r < prod.coefficients().size(); ++r)
          if (prod.coefficients()[r] != 0) m(tgt.offsets[j] + r, col) = prod.coefficients()[r];
      }
    }
  }
  return m;
}

// Multiplication by X, Y or Z (var = 0, 1, 2) from twist n to twist n + 1.
inline std::vector<Rational> multiply_by_variable(const SectionLayout& from, const SectionLayout& to,
                                                  const std::vector<Rational>& v, int var) {
  std::vector<Rational> out(to.dim);
  const Monomial xv{var == 0, var == 1, var == 2};
  for (std::size_t k = 0; k < from.degrees.size(); ++k) {
    const auto basis = monomial_basis(from.degrees[k]);
    for (std::size_t i = 0; i < basis.size(); ++i) {
      const Rational& c = v[from.offsets[k] + i];
      if (c == 0) continue;
      const Monomial m{basis[i].x + xv.x, basis[i].y + xv.y, basis[i].z + xv.z};
      out[to.offsets[k] + monomial_index(m)] = c;
    }
  }
  return out;
}

// H^0(F(n)) = H^0(sum O(b_j + n)) / image, with canonical lifts: the unit
// vectors at the non-pivot coordinates of the reduced image basis.
class SectionModel {
 public:
  SectionModel(const Presentation& p, int n)
      : twist_(n), layout_(section_layout(p.target_twists(), n)), image_(row_echelon(section_map(p, n).transpose())) {
    std::vector<bool> pivot(layout_.dim, false);
    for (auto c : image_.pivots) pivot[c] = true;
    for (std::size_t c = 0; c < layout_.dim; ++c)
      if (!pivot[c]) free_.push_back(c);
  }

  int twist() const { return twist_; }
  std::size_t dimension() const { return free_.size(); }
  const SectionLayout& layout() const { return layout_; }

  std::vector<Rational> lift(std::size_t k) const {
    std::vector<Rational> v(layout_.dim);
    v[free_.at(k)] = 1;
    return v;
  }

  // Quotient coordinates of an ambient section.
  std::vector<Rational> project(std::vector<Rational> v) const {
    for (std::size_t r = 0; r < image_.pivots.size(); ++r) {
      const Rational c = v[image_.pivots[r]];
      if (c == 0) continue;
      for (std::size_t j = 0; j < layout_.dim; ++j)
        if (image_.reduced(r, j) != 0) v[j] -= c * image_.reduced(r, j);
    }
    std::vector<Rational> out;
    out.reserve(free_.size());
    for (auto c : free_) out.push_back(v[c]);
    return out;
  }

 private:
  int twist_;
  SectionLayout layout_;
  Echelon<Rational> image_;
  std::vector<std::size_t> free_;
};

struct HilbertPolynomial {
  long long r = 0;    // multiplicity
  long long chi = 0;  // constant term
  friend bool operator==(const HilbertPolynomial&, const HilbertPolynomial&) = default;
};

struct CohomologyTable {
  int h0_minus1 = 0;  // h^0(F(-1))
  int h1 = 0;         // h^1(F)
  int h0_omega = 0;   // h^0(F (x) Omega^1(1))
  friend bool operator==(const CohomologyTable&, const CohomologyTable&) = default;
};

inline std::string to_string(const CohomologyTable& t) {
  return std::to_string(t.h0_minus1) + "," + std::to_string(t.h1) + "," + std::to_string(t.h0_omega);
}

namespace detail {

inline void require_injective(const Presentation& p) {
  if (!p.is_square()) throw Error(ErrorKind::not_injective, "presentation is not square");
  if (!is_injective(p)) throw Error(ErrorKind::not_injective, "determinant vanishes identically");
}

inline int h0_unchecked(const Presentation& p, int n) {
  const Matrix<Rational> m = section_map(p, n);
  return static_cast<int>(m.rows() - rank(m));
}

inline int h1_via_euler(const Presentation& p, int n) {
  return static_cast<int>(h0_unchecked(p, n) - euler_characteristic(p, n));
}

// Serre duality: h^1(F(n)) = h^0 of coker(phi^T) on sum O(-a_i - 3 - n), i.e.
// the cokernel of H^0(sum O(-b_j-3-n)) -> H^0(sum O(-a_i-3-n)).
inline int h1_via_duality(const Presentation& p, int n) { return h0_unchecked(dualize(p, 0), -n); }

inline int h1_unchecked(const Presentation& p, int n) {
  const int a = h1_via_euler(p, n);
  const int b = h1_via_duality(p, n);
  if (a != b)
    throw std::logic_error("h1 routes disagree at twist " + std::to_string(n) + ": " + std::to_string(a) + " vs " +
                           std::to_string(b));
  return a;
}

inline int h0_omega_unchecked(const Presentation& p) {
  const SectionModel s0(p, 0), s1(p, 1);
  const std::size_t n0 = s0.dimension();
  if (n0 == 0) return 0;
  Matrix<Rational> m(s1.dimension(), 3 * n0);
  for (int var = 0; var < 3; ++var)
    for (std::size_t k = 0; k < n0; ++k) {
      const auto img = s1.project(multiply_by_variable(s0.layout(), s1.layout(), s0.lift(k), var));
      for (std::size_t r = 0; r < img.size(); ++r) m(r, var * n0 + k) = img[r];
    }
  return static_cast<int>(3 * n0 - rank(m));
}

}  // namespace detail

inline int h0(const Presentation& p, int n) {
  detail::require_injective(p);
  return detail::h0_unchecked(p, n);
}

inline int h1(const Presentation& p, int n) {
  detail::require_injective(p);
  return detail::h1_unchecked(p, n);
}

// (s1, s2, s3) -> X s1 + Y s2 + Z s3 on H^0(F)^3 -> H^0(F(1)); the kernel is
// H^0(F (x) Omega^1(1)) by the Euler sequence.
inline int h0_tensor_omega(const Presentation& p) {
  detail::require_injective(p);
  return detail::h0_omega_unchecked(p);
}

inline HilbertPolynomial hilbert_polynomial(const Presentation& p) {
  detail::require_injective(p);
  const long long c0 = euler_characteristic(p, 0), c1 = euler_characteristic(p, 1);
  HilbertPolynomial h{c1 - c0, c0};
  if (euler_characteristic(p, 2) != 2 * h.r + h.chi)
    throw Error(ErrorKind::non_linear_growth, "Euler characteristic is not linear in the twist");
  return h;
}

inline CohomologyTable cohomology_table(const Presentation& p) {
  detail::require_injective(p);
  return {detail::h0_unchecked(p, -1), detail::h1_unchecked(p, 0), detail::h0_omega_unchecked(p)};
}

}  // namespace sheafstrata
