#include <gtest/gtest.h>

#include "sheafstrata/blowup.hpp"

using namespace sheafstrata;

namespace {

const std::array<BlowdownVariant, 2> kVariants = {BlowdownVariant::seven, BlowdownVariant::ten};

std::array<Rational, 3> random_point(Rng& rng) {
  return {random_scalar(rng, 7), random_scalar(rng, 7), random_nonzero_scalar(rng, 7)};
}

Presentation with_scalar(Presentation p, BlowdownVariant v, const Rational& c) {
  (v == BlowdownVariant::ten ? p(0, 3) : p(0, 2)) = QForm::constant(c);
  return p;
}

// Oracle: det(delta)/det(P) from scalar determinants at a point, for c = 1, 2, 3.
// Returns (sign, exponent) with ratio(c) = sign * c^exponent, or nullopt if it is not of that form.
std::optional<DeterminantLaw> oracle_law(const Presentation& base, BlowdownVariant v, Rng& rng) {
  for (int tries = 0; tries < 20; ++tries) {
    const auto pt = random_point(rng);
    std::vector<Rational> ratio;
    for (long c = 1; c <= 3; ++c) {
      Presentation p = with_scalar(base, v, Rational(c));
      const Rational dp = determinant(evaluate(p, pt));
      if (dp == 0) break;
      ratio.push_back(determinant(evaluate(blowdown(p, v), pt)) / dp);
    }
    if (ratio.size() != 3) continue;
    const int sign = ratio[0] > 0 ? 1 : -1;
    if (abs(ratio[0]) != 1) return std::nullopt;
    for (int k = 0; k <= 4; ++k) {
      mpz_class two, three;
      mpz_ui_pow_ui(two.get_mpz_t(), 2, k);
      mpz_ui_pow_ui(three.get_mpz_t(), 3, k);
      if (ratio[1] == sign * Rational(two) && ratio[2] == sign * Rational(three)) return DeterminantLaw{sign, k};
    }
    return std::nullopt;
  }
  return std::nullopt;
}

bool all_2x2_minors_vanish(const Presentation& d) {
  for (std::size_t r0 = 0; r0 < d.rows(); ++r0)
    for (std::size_t r1 = r0 + 1; r1 < d.rows(); ++r1)
      for (std::size_t c0 = 0; c0 < d.cols(); ++c0)
        for (std::size_t c1 = c0 + 1; c1 < d.cols(); ++c1)
          if (!(d(r0, c0) * d(r1, c1) - d(r0, c1) * d(r1, c0)).is_zero()) return false;
  return true;
}

}  // namespace

TEST(Blowup, DeterminantLawMatchesOracle) {
  Rng rng(91);
  for (auto v : kVariants) {
    const Presentation base = random_blowdown_input(v, rng, 4);
    auto l = oracle_law(base, v, rng);
    ASSERT_TRUE(l.has_value());
    EXPECT_EQ(l->sign, law(v).sign);
    EXPECT_EQ(l->exponent, law(v).exponent);
  }
}

TEST(Blowup, DeterminantIdentityOnRandomInputs) {
  Rng rng(93);
  for (auto v : kVariants)
    for (int t = 0; t < 100; ++t) {
      const Presentation p = random_blowdown_input(v, rng, 4);
      const Rational c = blowdown_scalar(p, v);
      Rational factor = law(v).sign;
      for (int k = 0; k < law(v).exponent; ++k) factor *= c;
      QForm expect = determinant(p);
      expect *= factor;
      EXPECT_EQ(determinant(blowdown(p, v)), expect);
    }
}

TEST(Blowup, ScalarOneAndZero) {
  Rng rng(95);
  Presentation p10 = with_scalar(random_blowdown_input(BlowdownVariant::ten, rng, 4), BlowdownVariant::ten, 1);
  for (std::size_t r = 1; r < 4; ++r) p10(r, 3) = QForm(1);
  EXPECT_EQ(delta10(p10), p10.block(1, 4, 0, 3));
  Presentation p7 = with_scalar(random_blowdown_input(BlowdownVariant::seven, rng, 4), BlowdownVariant::seven, 1);
  p7(1, 2) = QForm(1);
  p7(2, 2) = QForm(2);
  EXPECT_EQ(delta7(p7), p7.block(1, 3, 0, 2));
  for (auto v : kVariants)
    for (int t = 0; t < 20; ++t) {
      Presentation z = random_blowdown_input(v, rng, 4, true);
      Presentation d = blowdown(z, v);
      EXPECT_TRUE(all_2x2_minors_vanish(d));
      EXPECT_TRUE(determinant(d).is_zero());
    }
}

TEST(Blowup, FiberConsistency) {
  Rng rng(97);
  for (auto v : kVariants)
    for (int t = 0; t < 10; ++t) {
      const Presentation p = random_blowdown_input(v, rng, 4);
      const FiberReport r = fiber_consistency(p, v);
      EXPECT_TRUE(r.match());
      EXPECT_EQ(r.image, info(image_row(v)).triple);
      // graded automorphisms keep the row shape and scale c by units
      auto g = GradedAutomorphism::random(p.target_twists(), rng, 3);
      auto h = GradedAutomorphism::random(p.source_twists(), rng, 3);
      const Presentation q = apply_equivalence(g, p, h);
      ASSERT_NE(blowdown_scalar(q, v), 0);
      const FiberReport rq = fiber_consistency(q, v);
      EXPECT_EQ(rq.input, r.input);
      EXPECT_EQ(rq.image, r.image);
    }
  Presentation z = random_blowdown_input(BlowdownVariant::ten, rng, 4, true);
  EXPECT_THROW(fiber_consistency(z, BlowdownVariant::ten), Error);
}

TEST(Blowup, RejectsWrongRow) {
  Rng rng(99);
  EXPECT_THROW(delta10(sample(StratumId::X0, rng)), Error);
  EXPECT_THROW(delta7(sample(StratumId::X4, rng)), Error);
  EXPECT_THROW(parse_variant(8), Error);
}
