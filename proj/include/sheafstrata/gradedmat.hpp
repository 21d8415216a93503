#pragma once

// Graded polynomial matrices phi : sum O(a_i) -> sum O(b_j).
// entries(j, i) is a form of degree b_j - a_i (zero when that is negative).

#include <algorithm>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "sheafstrata/forms.hpp"
#include "sheafstrata/forms_io.hpp"
#include "sheafstrata/linalg.hpp"

namespace sheafstrata {

class Presentation {
 public:
  Presentation() = default;

  // All entries zero, each carrying its required degree.
  Presentation(std::vector<int> source, std::vector<int> target)
      : source_(std::move(source)), target_(std::move(target)) {
    entries_.reserve(rows() * cols());
    for (std::size_t j = 0; j < rows(); ++j)
      for (std::size_t i = 0; i < cols(); ++i) entries_.emplace_back(std::max(0, required_degree(j, i)));
  }

  Presentation(std::vector<int> source, std::vector<int> target, std::vector<std::vector<QForm>> rows_of_entries)
      : source_(std::move(source)), target_(std::move(target)) {
    if (rows_of_entries.size() != rows())
      throw Error(ErrorKind::twist_mismatch, "entry rows do not match the number of target twists");
    for (auto& r : rows_of_entries) {
      if (r.size() != cols())
        throw Error(ErrorKind::twist_mismatch, "entry columns do not match the number of source twists");
      for (auto& f : r) entries_.push_back(std::move(f));
    }
    // Zero entries carry their required degree so that arithmetic on them is uniform.
    for (std::size_t j = 0; j < rows(); ++j)
      for (std::size_t i = 0; i < cols(); ++i)
        if ((*this)(j, i).is_zero()) (*this)(j, i) = QForm(std::max(0, required_degree(j, i)));
  }

  const std::vector<int>& source_twists() const { return source_; }
  const std::vector<int>& target_twists() const { return target_; }
  std::size_t rows() const { return target_.size(); }
  std::size_t cols() const { return source_.size(); }
  bool is_square() const { return rows() == cols(); }
  int required_degree(std::size_t row, std::size_t col) const { return target_[row] - source_[col]; }

  const QForm& operator()(std::size_t row, std::size_t col) const { return entries_[row * cols() + col]; }
  QForm& operator()(std::size_t row, std::size_t col) { return entries_[row * cols() + col]; }

  // Sub-matrix on rows [r0, r1) and columns [c0, c1).
  Presentation block(std::size_t r0, std::size_t r1, std::size_t c0, std::size_t c1) const {
    Presentation out(std::vector<int>(source_.begin() + c0, source_.begin() + c1),
                     std::vector<int>(target_.begin() + r0, target_.begin() + r1));
    for (std::size_t j = r0; j < r1; ++j)
      for (std::size_t i = c0; i < c1; ++i) out(j - r0, i - c0) = (*this)(j, i);
    return out;
  }

  Presentation select(const std::vector<std::size_t>& rs, const std::vector<std::size_t>& cs) const {
    std::vector<int> s, t;
    for (auto c : cs) s.push_back(source_[c]);
    for (auto r : rs) t.push_back(target_[r]);
    Presentation out(s, t);
    for (std::size_t j = 0; j < rs.size(); ++j)
      for (std::size_t i = 0; i < cs.size(); ++i) out(j, i) = (*this)(rs[j], cs[i]);
    return out;
  }

  friend bool operator==(const Presentation& a, const Presentation& b) {
    return a.source_ == b.source_ && a.target_ == b.target_ && a.entries_ == b.entries_;
  }

 private:
  std::vector<int> source_, target_;
  std::vector<QForm> entries_;
};

inline std::vector<std::string> validate(const Presentation& p) {
  std::vector<std::string> v;
  for (std::size_t j = 0; j < p.rows(); ++j)
    for (std::size_t i = 0; i < p.cols(); ++i) {
      const int d = p.required_degree(j, i);
      const QForm& f = p(j, i);
      const std::string at = "entry (" + std::to_string(j) + "," + std::to_string(i) + ")";
      if (d < 0) {
        if (!f.is_zero()) v.push_back(at + " must vanish (required degree " + std::to_string(d) + ")");
      } else if (!f.is_zero() && f.degree() != d) {
        v.push_back(at + " has degree " + std::to_string(f.degree()) + ", expected " + std::to_string(d));
      }
    }
  return v;
}

inline void require_valid(const Presentation& p) {
  auto v = validate(p);
  if (!v.empty()) throw Error(ErrorKind::invalid_presentation, v.front());
}

// q after p.
inline Presentation compose(const Presentation& q, const Presentation& p) {
  if (q.source_twists() != p.target_twists())
    throw Error(ErrorKind::twist_mismatch, "compose: inner twists differ");
  Presentation out(p.source_twists(), q.target_twists());
  for (std::size_t j = 0; j < out.rows(); ++j)
    for (std::size_t i = 0; i < out.cols(); ++i) {
      const int d = out.required_degree(j, i);
      if (d < 0) continue;
      QForm acc(d);
      for (std::size_t k = 0; k < p.rows(); ++k) {
        if (q.required_degree(j, k) < 0 || p.required_degree(k, i) < 0) continue;
        if (q(j, k).is_zero() || p(k, i).is_zero()) continue;
        acc += q(j, k) * p(k, i);
      }
      out(j, i) = std::move(acc);
    }
  return out;
}

inline Presentation identity_presentation(const std::vector<int>& twists) {
  Presentation id(twists, twists);
  for (std::size_t k = 0; k < twists.size(); ++k) id(k, k) = QForm::constant(1);
  return id;
}

inline int determinant_degree(const Presentation& p) {
  return std::accumulate(p.target_twists().begin(), p.target_twists().end(), 0) -
         std::accumulate(p.source_twists().begin(), p.source_twists().end(), 0);
}

inline Matrix<Rational> evaluate(const Presentation& p, const std::array<Rational, 3>& pt) {
  Matrix<Rational> m(p.rows(), p.cols());
  for (std::size_t j = 0; j < p.rows(); ++j)
    for (std::size_t i = 0; i < p.cols(); ++i)
      if (p.required_degree(j, i) >= 0) m(j, i) = p(j, i).eval(pt);
  return m;
}

namespace detail {
inline void require_square(const Presentation& p) {
  if (!p.is_square()) throw Error(ErrorKind::precondition, "determinant of a non-square presentation");
  require_valid(p);
}

// Points (1, i, j) with i + j <= d: unisolvent for forms of degree d.
inline std::vector<std::array<Rational, 3>> lattice_points(int d) {
  std::vector<std::array<Rational, 3>> pts;
  for (int i = 0; i <= d; ++i)
    for (int j = 0; i + j <= d; ++j) pts.push_back({Rational(1), Rational(i), Rational(j)});
  return pts;
}
}  // namespace detail

inline QForm determinant_laplace(const Presentation& p) {
  detail::require_square(p);
  const int D = determinant_degree(p);
  if (D < 0) return QForm(0);
  const std::size_t n = p.rows();
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  QForm det(D);
  do {
    bool skip = false;
    for (std::size_t c = 0; c < n && !skip; ++c)
      skip = p.required_degree(perm[c], c) < 0 || p(perm[c], c).is_zero();
    if (skip) continue;
    int inversions = 0;
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = a + 1; b < n; ++b) inversions += perm[a] > perm[b];
    QForm term = p(perm[0], 0);
    for (std::size_t c = 1; c < n; ++c) term = term * p(perm[c], c);
    if (inversions % 2) det -= term;
    else det += term;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return det;
}

inline QForm determinant_interpolation(const Presentation& p) {
  detail::require_square(p);
  const int D = determinant_degree(p);
  if (D < 0) return QForm(0);
  const auto pts = detail::lattice_points(D);
  const auto basis = monomial_basis(D);
  Matrix<Rational> V(pts.size(), basis.size());
  std::vector<Rational> vals(pts.size());
  for (std::size_t k = 0; k < pts.size(); ++k) {
    for (std::size_t m = 0; m < basis.size(); ++m) V(k, m) = QForm::monomial(basis[m]).eval(pts[k]);
    vals[k] = determinant(evaluate(p, pts[k]));
  }
  auto c = solve(V, vals);
  if (!c) throw Error(ErrorKind::precondition, "interpolation system is singular");
  return QForm(D, std::move(*c));
}

inline QForm determinant(const Presentation& p) {
  return p.rows() <= 4 ? determinant_laplace(p) : determinant_interpolation(p);
}

// det != 0, decided by exact evaluation at lattice points (a nonzero value is a
// proof; vanishing on the whole unisolvent lattice proves det == 0).
inline bool is_injective(const Presentation& p) {
  detail::require_square(p);
  const int D = determinant_degree(p);
  if (D < 0) return false;
  for (const auto& pt : detail::lattice_points(D))
    if (determinant(evaluate(p, pt)) != 0) return true;
  return false;
}

// Signed maximal minors. Complements of the chosen index set are enumerated in
// lex order; the minor on the complement C carries the sign (-1)^(sum of C).
inline std::vector<QForm> maximal_minors(const Presentation& p) {
  require_valid(p);
  const std::size_t t = p.rows(), s = p.cols();
  const std::size_t k = std::min(s, t);
  const std::size_t big = std::max(s, t);
  const std::size_t drop = big - k;
  std::vector<QForm> out;
  std::vector<bool> mask(big, false);
  std::fill(mask.begin(), mask.begin() + drop, true);
  // prev_permutation over a mask with leading trues enumerates complements in lex order.
  do {
    std::vector<std::size_t> keep;
    std::size_t sign_sum = 0;
    for (std::size_t i = 0; i < big; ++i) {
      if (mask[i]) sign_sum += i;
      else keep.push_back(i);
    }
    std::vector<std::size_t> other(t <= s ? t : s);
    std::iota(other.begin(), other.end(), 0);
    Presentation sub = t <= s ? p.select(other, keep) : p.select(keep, other);
    QForm d = determinant(sub);
    if (sign_sum % 2) d = -d;
    out.push_back(std::move(d));
  } while (std::prev_permutation(mask.begin(), mask.end()));
  return out;
}

// Transpose with both index orders reversed: a'_i = -b_{t-1-i} - 3 + k,
// b'_j = -a_{s-1-j} - 3 + k. Ascending twist vectors stay ascending and the
// operation is an involution.
inline Presentation dualize(const Presentation& p, int extra_twist) {
  const std::size_t s = p.cols(), t = p.rows();
  std::vector<int> src(t), tgt(s);
  for (std::size_t i = 0; i < t; ++i) src[i] = -p.target_twists()[t - 1 - i] - 3 + extra_twist;
  for (std::size_t j = 0; j < s; ++j) tgt[j] = -p.source_twists()[s - 1 - j] - 3 + extra_twist;
  Presentation out(src, tgt);
  for (std::size_t j = 0; j < s; ++j)
    for (std::size_t i = 0; i < t; ++i) out(j, i) = p(t - 1 - i, s - 1 - j);
  return out;
}

// Stable sort of both twist vectors (ascending), permuting entries alongside.
inline Presentation normalize_order(const Presentation& p) {
  std::vector<std::size_t> rs(p.rows()), cs(p.cols());
  std::iota(rs.begin(), rs.end(), 0);
  std::iota(cs.begin(), cs.end(), 0);
  std::stable_sort(rs.begin(), rs.end(), [&](auto a, auto b) { return p.target_twists()[a] < p.target_twists()[b]; });
  std::stable_sort(cs.begin(), cs.end(), [&](auto a, auto b) { return p.source_twists()[a] < p.source_twists()[b]; });
  return p.select(rs, cs);
}

struct SigmaWitness {
  Presentation u;  // sum O(a_I1) -> sum O(a_I2)
  Presentation v;  // sum O(b_J1) -> sum O(b_J2)
};

// Decides phi21 == v * phi11 + phi22 * u by solving a linear system in the
// coefficients of u and v.
inline std::optional<SigmaWitness> sigma_membership(const Presentation& phi21, const Presentation& phi11,
                                                    const Presentation& phi22) {
  if (phi21.source_twists() != phi11.source_twists() || phi21.target_twists() != phi22.target_twists())
    throw Error(ErrorKind::twist_mismatch, "sigma_membership: blocks do not fit together");
  const auto& aI1 = phi11.source_twists();
  const auto& bJ1 = phi11.target_twists();
  const auto& aI2 = phi22.source_twists();
  const auto& bJ2 = phi22.target_twists();

  // Equation coordinates: (r in J2, c in I1, monomial).
  std::vector<std::size_t> eq_off(bJ2.size() * aI1.size() + 1, 0);
  for (std::size_t r = 0; r < bJ2.size(); ++r)
    for (std::size_t c = 0; c < aI1.size(); ++c) {
      const std::size_t k = r * aI1.size() + c;
      eq_off[k + 1] = eq_off[k] + monomial_count(bJ2[r] - aI1[c]);
    }
  const std::size_t n_eq = eq_off.back();

  struct Unknown {
    bool is_v;
    std::size_t row, col;
    Monomial m;
  };
  std::vector<Unknown> unknowns;
  std::vector<std::vector<Rational>> columns;
  auto add_into = [&](std::vector<Rational>& col, std::size_t r, std::size_t c, const QForm& f) {
    if (f.is_zero()) return;
    const std::size_t base = eq_off[r * aI1.size() + c];
    for (std::size_t m = 0; m < f.coefficients().size(); ++m) col[base + m] += f.coefficients()[m];
  };
  for (std::size_t r = 0; r < bJ2.size(); ++r)
    for (std::size_t k = 0; k < bJ1.size(); ++k)
      for (const Monomial& m : monomial_basis(bJ2[r] - bJ1[k])) {
        std::vector<Rational> col(n_eq);
        for (std::size_t c = 0; c < aI1.size(); ++c)
          if (phi11.required_degree(k, c) >= 0 && bJ2[r] - aI1[c] >= 0) add_into(col, r, c, phi11(k, c).times_monomial(m));
        unknowns.push_back({true, r, k, m});
        columns.push_back(std::move(col));
      }
  for (std::size_t k = 0; k < aI2.size(); ++k)
    for (std::size_t c = 0; c < aI1.size(); ++c)
      for (const Monomial& m : monomial_basis(aI2[k] - aI1[c])) {
        std::vector<Rational> col(n_eq);
        for (std::size_t r = 0; r < bJ2.size(); ++r)
          if (phi22.required_degree(r, k) >= 0 && bJ2[r] - aI1[c] >= 0) add_into(col, r, c, phi22(r, k).times_monomial(m));
        unknowns.push_back({false, k, c, m});
        columns.push_back(std::move(col));
      }

  std::vector<Rational> rhs(n_eq);
  for (std::size_t r = 0; r < bJ2.size(); ++r)
    for (std::size_t c = 0; c < aI1.size(); ++c)
      if (phi21.required_degree(r, c) >= 0) {
        const auto& f = phi21(r, c);
        if (f.is_zero()) continue;
        const std::size_t base = eq_off[r * aI1.size() + c];
        for (std::size_t m = 0; m < f.coefficients().size(); ++m) rhs[base + m] = f.coefficients()[m];
      }

  Matrix<Rational> A(n_eq, unknowns.size());
  for (std::size_t u = 0; u < unknowns.size(); ++u)
    for (std::size_t e = 0; e < n_eq; ++e) A(e, u) = columns[u][e];
  auto x = solve(A, rhs);
  if (!x) return std::nullopt;

  SigmaWitness w{Presentation(aI1, aI2), Presentation(bJ1, bJ2)};
  for (std::size_t u = 0; u < unknowns.size(); ++u) {
    if ((*x)[u] == 0) continue;
    const Unknown& uk = unknowns[u];
    QForm& e = uk.is_v ? w.v(uk.row, uk.col) : w.u(uk.row, uk.col);
    e.set_coefficient(uk.m, e.coefficient(uk.m) + (*x)[u]);
  }
  return w;
}

// Automorphism of sum O(c_k): entry (k, i) of degree c_k - c_i.
class GradedAutomorphism {
 public:
  explicit GradedAutomorphism(Presentation m) : m_(std::move(m)) {
    if (m_.source_twists() != m_.target_twists())
      throw Error(ErrorKind::twist_mismatch, "automorphism must have equal source and target twists");
    require_valid(m_);
    if (scalar_part_det() == 0) throw Error(ErrorKind::precondition, "graded map is not invertible");
  }

  static GradedAutomorphism identity(const std::vector<int>& twists) {
    return GradedAutomorphism(identity_presentation(twists));
  }

  static GradedAutomorphism random(const std::vector<int>& twists, Rng& rng, int height) {
    for (;;) {
      Presentation m(twists, twists);
      for (std::size_t k = 0; k < twists.size(); ++k)
        for (std::size_t i = 0; i < twists.size(); ++i) {
          const int d = m.required_degree(k, i);
          if (d >= 0) m(k, i) = random_form(d, rng, height);
        }
      Matrix<Rational> d0 = degree_zero_part(m);
      if (sheafstrata::determinant(d0) != 0) return GradedAutomorphism(std::move(m));
    }
  }

  const Presentation& matrix() const { return m_; }
  const std::vector<int>& twists() const { return m_.source_twists(); }

  // The determinant is a nonzero constant.
  Rational determinant() const { return scalar_part_det(); }

  // H = D + N with D the degree-0 part; D^-1 N is nilpotent, so
  // H^-1 = (sum_k (-D^-1 N)^k) D^-1.
  GradedAutomorphism inverse() const {
    const auto& c = twists();
    const std::size_t n = c.size();
    Matrix<Rational> d0 = degree_zero_part(m_);
    Matrix<Rational> dinv = *sheafstrata::inverse(d0);
    Presentation Dinv(c, c), N(c, c);
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t i = 0; i < n; ++i) {
        const int d = m_.required_degree(k, i);
        if (d == 0) Dinv(k, i) = QForm::constant(dinv(k, i));
        else if (d > 0) N(k, i) = m_(k, i);
      }
    Presentation M = compose(Dinv, N);
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t i = 0; i < n; ++i)
        if (M.required_degree(k, i) >= 0) M(k, i) = -M(k, i);
    std::set<int> distinct(c.begin(), c.end());
    Presentation sum = identity_presentation(c), power = identity_presentation(c);
    for (std::size_t step = 1; step < distinct.size(); ++step) {
      power = compose(power, M);
      for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i)
          if (sum.required_degree(k, i) >= 0) sum(k, i) += power(k, i);
    }
    return GradedAutomorphism(compose(sum, Dinv));
  }

 private:
  static Matrix<Rational> degree_zero_part(const Presentation& m) {
    const std::size_t n = m.rows();
    Matrix<Rational> d0(n, n);
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t i = 0; i < n; ++i)
        if (m.required_degree(k, i) == 0) d0(k, i) = m(k, i).coefficients()[0];
    return d0;
  }
  Rational scalar_part_det() const { return sheafstrata::determinant(degree_zero_part(m_)); }

  Presentation m_;
};

// g . phi . h^-1
inline Presentation apply_equivalence(const GradedAutomorphism& g, const Presentation& p, const GradedAutomorphism& h) {
  require_valid(p);
  if (g.twists() != p.target_twists() || h.twists() != p.source_twists())
    throw Error(ErrorKind::twist_mismatch, "apply_equivalence: automorphism twists do not match");
  return compose(compose(g.matrix(), p), h.inverse().matrix());
}

}  // namespace sheafstrata
