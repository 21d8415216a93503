#include <gtest/gtest.h>

#include "sheafstrata/gradedmat.hpp"

using namespace sheafstrata;

namespace {

Rational rat(long n, long d) {
  Rational r(n, d);
  r.canonicalize();
  return r;
}

Presentation random_presentation(const std::vector<int>& a, const std::vector<int>& b, Rng& rng, int h = 5) {
  Presentation p(a, b);
  for (std::size_t j = 0; j < b.size(); ++j)
    for (std::size_t i = 0; i < a.size(); ++i)
      if (p.required_degree(j, i) >= 0) p(j, i) = random_form(p.required_degree(j, i), rng, h);
  return p;
}

// Oracle: Leibniz expansion evaluated pointwise; compares a form against it at many points.
Rational leibniz_at(const Presentation& p, const std::array<Rational, 3>& pt) {
  const std::size_t n = p.rows();
  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;
  Rational acc = 0;
  do {
    Rational t = 1;
    for (std::size_t c = 0; c < n; ++c)
      t *= p.required_degree(perm[c], c) < 0 ? Rational(0) : p(perm[c], c).eval(pt);
    int inv = 0;
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = a + 1; b < n; ++b) inv += perm[a] > perm[b];
    acc += inv % 2 ? -t : t;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return acc;
}

const std::vector<std::pair<std::vector<int>, std::vector<int>>> kShapes = {
    {{-2, -2, -2}, {0, 0, 0}},
    {{-2, -2, -2, -1}, {-1, 0, 0, 0}},
    {{-2, -2, -2, -1, -1}, {-1, -1, 0, 0, 0}},
    {{-3, -1, -1, -1}, {0, 0, 0, 0}},
    {{-2, -2, -2, -2}, {-1, -1, -1, 1}},
    {{-3, -2}, {0, 1}},
    {{-3, -2, -1}, {-1, 0, 1}},
    {{-3, -3, 0}, {-2, 1, 1}},
    {{-4}, {2}},
};

}  // namespace

TEST(GradedMat, ValidateReportsViolations) {
  Presentation p({-1}, {-1, 0});
  EXPECT_TRUE(validate(p).empty());
  p(0, 0) = parse_form("X");
  EXPECT_EQ(validate(p).size(), 1u);
  Presentation q({0}, {-1});
  q(0, 0) = QForm::constant(3);
  EXPECT_EQ(validate(q).size(), 1u);
  EXPECT_THROW(require_valid(q), Error);
}

TEST(GradedMat, DeterminantMatchesLeibnizOracle) {
  Rng rng(21);
  for (const auto& [a, b] : kShapes) {
    for (int t = 0; t < 3; ++t) {
      Presentation p = random_presentation(a, b, rng);
      QForm d = determinant(p);
      EXPECT_EQ(d.degree(), 6);
      for (int k = 0; k < 6; ++k) {
        std::array<Rational, 3> pt{Rational(k - 2), rat(2 * k + 1, 3), Rational(5 - k)};
        EXPECT_EQ(d.eval(pt), leibniz_at(p, pt));
      }
      if (p.rows() <= 4) {
        EXPECT_EQ(determinant_laplace(p), determinant_interpolation(p));
      }
    }
  }
}

TEST(GradedMat, DeterminantIsMultiplicative) {
  Rng rng(4);
  for (const auto& [a, b] : kShapes) {
    Presentation p = random_presentation(a, b, rng);
    GradedAutomorphism g = GradedAutomorphism::random(b, rng, 3);
    Presentation q = compose(g.matrix(), p);
    EXPECT_EQ(determinant(q), determinant(g.matrix()) * determinant(p));
    EXPECT_EQ(determinant(g.matrix()), QForm::constant(g.determinant()));
  }
}

TEST(GradedMat, MaximalMinorsExample) {
  Presentation p({-1, -1, -1}, {0, 0});
  p(0, 0) = parse_form("-Y");
  p(0, 1) = parse_form("X");
  p(1, 0) = parse_form("-Z");
  p(1, 2) = parse_form("X");
  auto m = maximal_minors(p);
  ASSERT_EQ(m.size(), 3u);
  EXPECT_EQ(m[0], parse_form("X^2"));
  EXPECT_EQ(m[1], parse_form("X*Y"));
  EXPECT_EQ(m[2], parse_form("X*Z"));
  EXPECT_EQ(span_dimension(m), 3u);
  // signed minors are syzygies of the rows
  for (std::size_t r = 0; r < 2; ++r) {
    QForm acc(3);
    for (std::size_t c = 0; c < 3; ++c) acc += p(r, c) * m[c];
    EXPECT_TRUE(acc.is_zero());
  }
}

TEST(GradedMat, MaximalMinorsTallMatrixSyzygy) {
  Rng rng(9);
  Presentation p = random_presentation({-1, -1, -1}, {0, 0, 0, 0}, rng);
  auto m = maximal_minors(p);
  ASSERT_EQ(m.size(), 4u);
  for (std::size_t c = 0; c < 3; ++c) {
    QForm acc(4);
    for (std::size_t r = 0; r < 4; ++r) acc += m[r] * p(r, c);
    EXPECT_TRUE(acc.is_zero());
  }
}

TEST(GradedMat, DualizeIsInvolution) {
  Rng rng(12);
  for (const auto& [a, b] : kShapes)
    for (int k : {-1, 0, 1, 2}) {
      Presentation p = random_presentation(a, b, rng);
      Presentation d = dualize(p, k);
      EXPECT_TRUE(validate(d).empty());
      EXPECT_EQ(dualize(d, k), p);
      EXPECT_EQ(determinant(d).degree(), determinant(p).degree() + 0 * k);
    }
  Presentation x3({-3, -1, -1, -1}, {0, 0, 0, 0});
  Presentation d = dualize(x3, 1);
  EXPECT_EQ(d.source_twists(), (std::vector<int>{-2, -2, -2, -2}));
  EXPECT_EQ(d.target_twists(), (std::vector<int>{-1, -1, -1, 1}));
}

TEST(GradedMat, SigmaMembership) {
  Rng rng(13);
  // X1 blocks: phi11 1x3 linear, phi22 3x1 linear, phi21 3x3 quadrics
  for (int t = 0; t < 5; ++t) {
    Presentation p = random_presentation({-2, -2, -2, -1}, {-1, 0, 0, 0}, rng);
    Presentation phi11 = p.block(0, 1, 0, 3), phi22 = p.block(1, 4, 3, 4), phi21 = p.block(1, 4, 0, 3);
    EXPECT_FALSE(sigma_membership(phi21, phi11, phi22).has_value());
    Presentation u = random_presentation({-2, -2, -2}, {-1}, rng);
    Presentation v = random_presentation({-1}, {0, 0, 0}, rng);
    Presentation target = compose(v, phi11);
    Presentation pu = compose(phi22, u);
    for (std::size_t r = 0; r < 3; ++r)
      for (std::size_t c = 0; c < 3; ++c) target(r, c) += pu(r, c);
    auto w = sigma_membership(target, phi11, phi22);
    ASSERT_TRUE(w.has_value());
    Presentation re = compose(w->v, phi11);
    Presentation re2 = compose(phi22, w->u);
    for (std::size_t r = 0; r < 3; ++r)
      for (std::size_t c = 0; c < 3; ++c) EXPECT_EQ(re(r, c) + re2(r, c), target(r, c));
  }
}

TEST(GradedMat, AutomorphismInverseAndEquivalence) {
  Rng rng(17);
  for (const auto& [a, b] : kShapes) {
    GradedAutomorphism g = GradedAutomorphism::random(b, rng, 3);
    GradedAutomorphism h = GradedAutomorphism::random(a, rng, 3);
    EXPECT_EQ(compose(g.matrix(), g.inverse().matrix()), identity_presentation(b));
    EXPECT_EQ(compose(h.inverse().matrix(), h.matrix()), identity_presentation(a));
    Presentation p = random_presentation(a, b, rng);
    Presentation q = apply_equivalence(g, p, h);
    EXPECT_TRUE(validate(q).empty());
    QForm expect = determinant(p);
    expect *= g.determinant() / h.determinant();
    EXPECT_EQ(determinant(q), expect);
  }
  Presentation singular({0, 0}, {0, 0});
  singular(0, 0) = QForm::constant(1);
  EXPECT_THROW(GradedAutomorphism{singular}, Error);
}

TEST(GradedMat, InjectivityDecision) {
  Presentation z({-4}, {2});
  EXPECT_FALSE(is_injective(z));
  z(0, 0) = parse_form("X^6 + Y^6 + Z^6");
  EXPECT_TRUE(is_injective(z));
  Rng rng(2);
  // rank-one 2x2 block of linear forms: det == 0
  Presentation r({-1, -1}, {0, 0});
  QForm l1 = random_nonzero_form(1, rng, 3);
  r(0, 0) = l1;
  r(0, 1) = l1 * Rational(2);
  r(1, 0) = l1 * Rational(3);
  r(1, 1) = l1 * Rational(6);
  EXPECT_FALSE(is_injective(r));
  EXPECT_TRUE(determinant(r).is_zero());
}

TEST(GradedMat, NormalizeOrder) {
  Presentation p({-1, -3, -2}, {1, 0});
  Presentation n = normalize_order(p);
  EXPECT_EQ(n.source_twists(), (std::vector<int>{-3, -2, -1}));
  EXPECT_EQ(n.target_twists(), (std::vector<int>{0, 1}));
}
