#pragma once

// Presentations built from geometric data: a sextic, six points (Hilbert-Burch),
// and the normal forms of the two smallest strata.

#include <array>
#include <optional>
#include <vector>

#include "sheafstrata/cohomology.hpp"
#include "sheafstrata/gradedmat.hpp"

namespace sheafstrata {

using Point = std::array<Rational, 3>;

inline constexpr int kRetryBudget = 64;

class PointSet {
 public:
  explicit PointSet(std::vector<Point> pts) : pts_(std::move(pts)) {
    for (std::size_t i = 0; i < pts_.size(); ++i) {
      if (pts_[i][0] == 0 && pts_[i][1] == 0 && pts_[i][2] == 0)
        throw Error(ErrorKind::precondition, "(0,0,0) is not a point of P^2");
      for (std::size_t j = 0; j < i; ++j)
        if (rank(rows({i, j})) < 2)
          throw Error(ErrorKind::precondition, "points " + std::to_string(j) + " and " + std::to_string(i) + " coincide");
    }
  }

  const std::vector<Point>& points() const { return pts_; }
  std::size_t size() const { return pts_.size(); }

  bool on_conic() const { return conic_count() > 0; }

  bool has_four_colinear() const {
    const std::size_t n = pts_.size();
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = a + 1; b < n; ++b) {
        std::size_t on_line = 2;
        for (std::size_t c = 0; c < n; ++c)
          if (c != a && c != b && rank(rows({a, b, c})) == 2) ++on_line;
        if (on_line >= 4) return true;
      }
    return false;
  }

  // Matrix of evaluations of the degree-d monomials at the points.
  Matrix<Rational> evaluation(int d) const {
    const auto basis = monomial_basis(d);
    Matrix<Rational> m(pts_.size(), basis.size());
    for (std::size_t i = 0; i < pts_.size(); ++i)
      for (std::size_t k = 0; k < basis.size(); ++k) m(i, k) = QForm::monomial(basis[k]).eval(pts_[i]);
    return m;
  }

 private:
  Matrix<Rational> rows(std::initializer_list<std::size_t> idx) const {
    Matrix<Rational> m(0, 3);
    for (auto i : idx) m.append_row({pts_[i][0], pts_[i][1], pts_[i][2]});
    return m;
  }
  std::size_t conic_count() const { return 6 - rank(evaluation(2)); }

  std::vector<Point> pts_;
};

// Basis of the degree-d forms vanishing at every point.
inline std::vector<QForm> ideal_generators(const PointSet& z, int d) {
  const Matrix<Rational> ker = nullspace(z.evaluation(d));
  std::vector<QForm> out;
  for (std::size_t r = 0; r < ker.rows(); ++r) out.emplace_back(d, ker.row(r));
  return out;
}

inline Presentation sextic_sheaf(const QForm& f) {
  if (f.is_zero() || f.degree() != 6) throw Error(ErrorKind::precondition, "sextic_sheaf needs a nonzero sextic");
  Presentation p({-4}, {2});
  p(0, 0) = f;
  return p;
}

struct HilbertBurch {
  std::vector<QForm> generators;  // the four cubics through Z
  Presentation syzygies;          // 3 O(-1) -> 4 O, generators . syzygies = 0
};

// Six points not on a conic: I_Z is generated by four cubics with a 4 x 3
// matrix of linear syzygies whose signed maximal minors give the cubics back.
inline HilbertBurch hilbert_burch(const PointSet& z) {
  if (z.size() != 6 || z.on_conic())
    throw Error(ErrorKind::precondition, "Hilbert-Burch construction needs six points not on a conic");
  HilbertBurch hb;
  hb.generators = ideal_generators(z, 3);
  if (hb.generators.size() != 4) throw Error(ErrorKind::precondition, "expected four cubic generators");
  // (l_1..l_4) -> sum l_i g_i on linear forms; the kernel has dimension 3.
  const auto lin = monomial_basis(1);
  Matrix<Rational> m(monomial_count(4), 12);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t k = 0; k < 3; ++k) {
      const QForm prod = hb.generators[i].times_monomial(lin[k]);
      for (std::size_t r = 0; r < prod.coefficients().size(); ++r) m(r, i * 3 + k) = prod.coefficients()[r];
    }
  const Matrix<Rational> ker = nullspace(m);
  if (ker.rows() != 3) throw std::logic_error("syzygy module of six general points must have rank 3");
  hb.syzygies = Presentation({-1, -1, -1}, {0, 0, 0, 0});
  for (std::size_t c = 0; c < 3; ++c)
    for (std::size_t i = 0; i < 4; ++i)
      hb.syzygies(i, c) = QForm::linear(ker(c, i * 3), ker(c, i * 3 + 1), ker(c, i * 3 + 2));
  return hb;
}

// f = sum c_i g_i with cubic c_i; the presentation [c | M] : O(-3) + 3 O(-1) -> 4 O.
inline Presentation twisted_ideal_sheaf(const PointSet& z, const QForm& f) {
  if (f.degree() != 6 || f.is_zero()) throw Error(ErrorKind::precondition, "f must be a nonzero sextic");
  for (const auto& pt : z.points())
    if (f.eval(pt) != 0) throw Error(ErrorKind::precondition, "f does not vanish on Z");
  const HilbertBurch hb = hilbert_burch(z);
  const auto cub = monomial_basis(3);
  Matrix<Rational> m(monomial_count(6), 4 * cub.size());
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t k = 0; k < cub.size(); ++k) {
      const QForm prod = hb.generators[i].times_monomial(cub[k]);
      for (std::size_t r = 0; r < prod.coefficients().size(); ++r) m(r, i * cub.size() + k) = prod.coefficients()[r];
    }
  auto c = solve(m, f.coefficients());
  if (!c) throw Error(ErrorKind::precondition, "f is not in the ideal of Z");
  Presentation p({-3, -1, -1, -1}, {0, 0, 0, 0});
  for (std::size_t i = 0; i < 4; ++i) {
    std::vector<Rational> ci(c->begin() + i * cub.size(), c->begin() + (i + 1) * cub.size());
    p(i, 0) = QForm(3, ci);
    for (std::size_t k = 0; k < 3; ++k) p(i, k + 1) = hb.syzygies(i, k);
  }
  return p;
}

inline QForm random_sextic_through(const PointSet& z, Rng& rng, int height) {
  const auto g = ideal_generators(z, 3);
  for (int attempt = 0; attempt < kRetryBudget; ++attempt) {
    QForm f(6);
    for (const auto& gi : g) f += gi * random_form(3, rng, height);
    if (!f.is_zero()) return f;
  }
  throw Error(ErrorKind::retry_exhausted, "could not draw a nonzero sextic through Z");
}

inline PointSet random_points_off_conic(std::size_t n, Rng& rng, int height) {
  for (int attempt = 0; attempt < kRetryBudget; ++attempt) {
    std::vector<Point> pts;
    for (std::size_t i = 0; i < n; ++i) pts.push_back({Rational(1), random_scalar(rng, height), random_scalar(rng, height)});
    try {
      PointSet z(std::move(pts));
      if (!z.on_conic()) return z;
    } catch (const Error&) {
      // repeated point; draw again
    }
  }
  throw Error(ErrorKind::retry_exhausted, "could not draw points off a conic");
}

struct X5Stars {
  QForm f1, q, p, f2;
};

//   [ q1  l1  0  ]
//   [ f1  q   l2 ]     source (-3,-2,-1), target (-1,0,1)
//   [ p   f2  q2 ]
inline Presentation x5_normal_form(const QForm& q1, const QForm& l1, const QForm& q2, const QForm& l2, Rng& rng,
                                   int height, const std::optional<X5Stars>& stars = std::nullopt) {
  if (q1.degree() != 2 || q2.degree() != 2 || l1.degree() != 1 || l2.degree() != 1)
    throw Error(ErrorKind::degree_mismatch, "x5_normal_form expects quadrics q1, q2 and linear forms l1, l2");
  if (l1.is_zero() || l2.is_zero()) throw Error(ErrorKind::precondition, "l1 and l2 must be nonzero");
  if (divide_exact(q1, l1) || divide_exact(q2, l2)) throw Error(ErrorKind::precondition, "l1 | q1 or l2 | q2");
  for (int attempt = 0; attempt < kRetryBudget; ++attempt) {
    Presentation p({-3, -2, -1}, {-1, 0, 1});
    p(0, 0) = q1;
    p(0, 1) = l1;
    p(1, 0) = stars ? stars->f1 : random_form(3, rng, height);
    p(1, 1) = stars ? stars->q : random_form(2, rng, height);
    p(1, 2) = l2;
    p(2, 0) = stars ? stars->p : random_form(4, rng, height);
    p(2, 1) = stars ? stars->f2 : random_form(3, rng, height);
    p(2, 2) = q2;
    if (stars) require_valid(p);
    if (is_injective(p)) return p;
    if (stars) throw Error(ErrorKind::not_injective, "x5_normal_form: given entries give a zero determinant");
  }
  throw Error(ErrorKind::retry_exhausted, "x5_normal_form: no injective completion found");
}

namespace detail {
// Two independent linear forms vanishing at pt, recombined by a random invertible 2 x 2 matrix.
inline std::array<QForm, 2> pencil_through(const Point& pt, Rng& rng, int height) {
  Matrix<Rational> ev(1, 3);
  for (int i = 0; i < 3; ++i) ev(0, i) = pt[i];
  const Matrix<Rational> ker = nullspace(ev);
  for (;;) {
    Rational a = random_scalar(rng, height), b = random_scalar(rng, height), c = random_scalar(rng, height),
             d = random_scalar(rng, height);
    if (a * d - b * c == 0) continue;
    std::array<QForm, 2> out;
    for (int k = 0; k < 2; ++k) {
      const Rational s = k == 0 ? a : c, t = k == 0 ? b : d;
      out[k] = QForm::linear(s * ker(0, 0) + t * ker(1, 0), s * ker(0, 1) + t * ker(1, 1), s * ker(0, 2) + t * ker(1, 2));
    }
    return out;
  }
}
}  // namespace detail

//   [ u1  u2  0  ]
//   [ *   *   v1 ]     source (-3,-3,0), target (-2,1,1); the 2 x 2 block of quartics is phi21.
//   [ *   *   v2 ]
inline Presentation x6_normal_form(const std::array<QForm, 2>& u, const std::array<QForm, 2>& v,
                                   const std::optional<Presentation>& phi21, Rng& rng, int height) {
  for (const auto* pair : {&u, &v})
    for (const QForm& l : *pair)
      if (l.degree() != 1) throw Error(ErrorKind::degree_mismatch, "x6_normal_form expects linear forms");
  if (span_dimension(std::vector<QForm>{u[0], u[1]}) != 2 || span_dimension(std::vector<QForm>{v[0], v[1]}) != 2)
    throw Error(ErrorKind::precondition, "phi11 and phi22 need linearly independent entries");
  if (phi21) {
    if (phi21->source_twists() != std::vector<int>{-3, -3} || phi21->target_twists() != std::vector<int>{1, 1})
      throw Error(ErrorKind::twist_mismatch, "phi21 must map 2 O(-3) to 2 O(1)");
    require_valid(*phi21);
  }
  for (int attempt = 0; attempt < kRetryBudget; ++attempt) {
    Presentation p({-3, -3, 0}, {-2, 1, 1});
    p(0, 0) = u[0];
    p(0, 1) = u[1];
    p(1, 2) = v[0];
    p(2, 2) = v[1];
    for (std::size_t r = 0; r < 2; ++r)
      for (std::size_t c = 0; c < 2; ++c) p(r + 1, c) = phi21 ? (*phi21)(r, c) : random_form(4, rng, height);
    const bool ok = is_injective(p) && !sigma_membership(p.block(1, 3, 0, 2), p.block(0, 1, 0, 2), p.block(1, 3, 2, 3));
    if (ok) return p;
    if (phi21) throw Error(ErrorKind::precondition, "given phi21 gives a non-injective map or lies in Sigma");
  }
  throw Error(ErrorKind::retry_exhausted, "x6_normal_form: no admissible phi21 found");
}

// phi11 vanishes at p1 and phi22 at p2.
inline Presentation x6_normal_form(const Point& p1, const Point& p2, const std::optional<Presentation>& phi21, Rng& rng,
                                   int height) {
  PointSet validated({p1});
  PointSet validated2({p2});
  return x6_normal_form(detail::pencil_through(p1, rng, std::max(1, height)),
                        detail::pencil_through(p2, rng, std::max(1, height)), phi21, rng, height);
}

}  // namespace sheafstrata
