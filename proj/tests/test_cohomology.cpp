#include <gtest/gtest.h>

#include "sheafstrata/cohomology.hpp"

using namespace sheafstrata;

namespace {

Presentation random_presentation(const std::vector<int>& a, const std::vector<int>& b, Rng& rng, int h = 5) {
  Presentation p(a, b);
  for (std::size_t j = 0; j < b.size(); ++j)
    for (std::size_t i = 0; i < a.size(); ++i)
      if (p.required_degree(j, i) >= 0) p(j, i) = random_form(p.required_degree(j, i), rng, h);
  return p;
}

// Oracle: h^0(F(n)) from the span of the polynomial vectors phi * m, built with
// form multiplication rather than the section-map code.
int h0_oracle(const Presentation& p, int n) {
  std::size_t ambient = 0;
  for (int b : p.target_twists()) ambient += monomial_count(b + n);
  Matrix<Rational> rows;
  for (std::size_t i = 0; i < p.cols(); ++i)
    for (const Monomial& m : monomial_basis(p.source_twists()[i] + n)) {
      std::vector<Rational> v;
      for (std::size_t j = 0; j < p.rows(); ++j) {
        const int d = p.target_twists()[j] + n;
        if (d < 0) continue;
        QForm e = p.required_degree(j, i) >= 0 ? p(j, i) * QForm::monomial(m) : QForm(d);
        if (e.is_zero()) e = QForm(d);
        v.insert(v.end(), e.coefficients().begin(), e.coefficients().end());
      }
      rows.append_row(v);
    }
  const std::size_t r = rows.rows() == 0 ? 0 : detail::rank_by_elimination(rows);
  return static_cast<int>(ambient - r);
}

}  // namespace

TEST(Cohomology, LineBundleEuler) {
  EXPECT_EQ(chi_line_bundle(0), 1);
  EXPECT_EQ(chi_line_bundle(-1), 0);
  EXPECT_EQ(chi_line_bundle(-2), 0);
  EXPECT_EQ(chi_line_bundle(-3), 1);
  EXPECT_EQ(chi_line_bundle(2), 6);
}

TEST(Cohomology, SexticCurve) {
  Presentation p({-4}, {2});
  p(0, 0) = parse_form("X^6 + Y^6 + Z^6");
  EXPECT_EQ(cohomology_table(p), (CohomologyTable{3, 3, 8}));
  EXPECT_EQ(hilbert_polynomial(p), (HilbertPolynomial{6, 3}));
  EXPECT_EQ(h0(p, 0), 6);
  EXPECT_EQ(h1(p, 0), 3);
}

TEST(Cohomology, RejectsNonInjective) {
  Presentation p({-4}, {2});
  EXPECT_THROW(cohomology_table(p), Error);
  try {
    h0(p, 0);
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::not_injective);
  }
}

TEST(Cohomology, SectionCountsMatchOracle) {
  Rng rng(31);
  const std::vector<std::pair<std::vector<int>, std::vector<int>>> shapes = {
      {{-2, -2, -2}, {0, 0, 0}}, {{-3, -2}, {0, 1}}, {{-3, -2, -1}, {-1, 0, 1}}, {{-3, -3, 0}, {-2, 1, 1}}};
  for (const auto& [a, b] : shapes) {
    Presentation p = random_presentation(a, b, rng);
    ASSERT_TRUE(is_injective(p));
    for (int n = -5; n <= 5; ++n) {
      EXPECT_EQ(h0(p, n), h0_oracle(p, n)) << "n=" << n;
      EXPECT_EQ(h0(p, n) - h1(p, n), euler_characteristic(p, n));
    }
  }
}

TEST(Cohomology, DualitySwapsTable) {
  Rng rng(33);
  Presentation p = random_presentation({-3, -2, -1}, {-1, 0, 1}, rng);
  p(0, 2) = QForm(0);
  ASSERT_TRUE(is_injective(p));
  auto t = cohomology_table(p);
  auto d = cohomology_table(dualize(p, 1));
  EXPECT_EQ(d.h0_minus1, t.h1);
  EXPECT_EQ(d.h1, t.h0_minus1);
  EXPECT_EQ(d.h0_omega, t.h0_omega);
}

TEST(Cohomology, SectionModelIsWellDefined) {
  Rng rng(35);
  Presentation p = random_presentation({-3, -3, 0}, {-2, 1, 1}, rng);
  ASSERT_TRUE(is_injective(p));
  SectionModel s0(p, 0), s1(p, 1);
  const Matrix<Rational> im0 = section_map(p, 0);
  for (std::size_t k = 0; k < s0.dimension(); ++k) {
    auto e = s0.project(s0.lift(k));
    for (std::size_t r = 0; r < e.size(); ++r) EXPECT_EQ(e[r], Rational(r == k ? 1 : 0));
    // lift + image element gives the same class after multiplication
    std::vector<Rational> shifted = s0.lift(k);
    for (std::size_t c = 0; c < im0.cols(); ++c)
      for (std::size_t r = 0; r < im0.rows(); ++r) shifted[r] += Rational(int(c % 3) - 1) * im0(r, c);
    for (int var = 0; var < 3; ++var)
      EXPECT_EQ(s1.project(multiply_by_variable(s0.layout(), s1.layout(), s0.lift(k), var)),
                s1.project(multiply_by_variable(s0.layout(), s1.layout(), shifted, var)));
  }
}

TEST(Cohomology, HilbertPolynomialOfSquareShapes) {
  Rng rng(37);
  Presentation p = random_presentation({-2, -2, -2}, {0, 0, 0}, rng);
  EXPECT_EQ(hilbert_polynomial(p), (HilbertPolynomial{6, 3}));
  Presentation q = random_presentation({-1}, {0}, rng);
  ASSERT_TRUE(is_injective(q));
  EXPECT_EQ(hilbert_polynomial(q), (HilbertPolynomial{1, 1}));
}
