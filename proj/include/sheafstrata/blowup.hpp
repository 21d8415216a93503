#pragma once

// The blow-down maps collapsing a presentation with a scalar entry c onto a
// smaller matrix: delta10 on the X1 row, delta7 on the X5 row.

#include "sheafstrata/cohomology.hpp"
#include "sheafstrata/strata.hpp"

namespace sheafstrata {

// det(delta(P)) = sign * c^exponent * det(P).
struct DeterminantLaw {
  int sign;
  int exponent;
};

inline constexpr DeterminantLaw kDelta10Law{-1, 2};
inline constexpr DeterminantLaw kDelta7Law{+1, 1};

enum class BlowdownVariant { seven = 7, ten = 10 };

inline BlowdownVariant parse_variant(int v) {
  if (v == 7) return BlowdownVariant::seven;
  if (v == 10) return BlowdownVariant::ten;
  throw Error(ErrorKind::parse_error, "blow-down variant must be 7 or 10");
}

inline StratumId input_row(BlowdownVariant v) { return v == BlowdownVariant::ten ? StratumId::X1 : StratumId::X5; }
inline StratumId image_row(BlowdownVariant v) { return v == BlowdownVariant::ten ? StratumId::X0 : StratumId::X4; }
inline DeterminantLaw law(BlowdownVariant v) { return v == BlowdownVariant::ten ? kDelta10Law : kDelta7Law; }

// The scalar entry: (0,3) on the X1 row, (0,2) on the X5 row.
inline Rational blowdown_scalar(const Presentation& p, BlowdownVariant v) {
  const QForm& c = v == BlowdownVariant::ten ? p(0, 3) : p(0, 2);
  return c.coefficients().front();
}

namespace detail {
inline void require_row(const Presentation& p, StratumId s) {
  if (!matches_row(p, s)) throw Error(ErrorKind::twist_mismatch, "blow-down input must have the " + name(s) + " twists");
  require_valid(p);
}
}  // namespace detail

// c * phi21 - phi22 * phi11 for P = [phi11 c; phi21 phi22] with blocks 1+3 by 3+1.
inline Presentation delta10(const Presentation& p) {
  detail::require_row(p, StratumId::X1);
  const Rational c = blowdown_scalar(p, BlowdownVariant::ten);
  Presentation out(info(StratumId::X0).source, info(StratumId::X0).target);
  for (std::size_t r = 0; r < 3; ++r)
    for (std::size_t k = 0; k < 3; ++k) out(r, k) = p(r + 1, k) * c - p(r + 1, 3) * p(0, k);
  return out;
}

// c [f1 q; p f2] - [l2; q2] [q1 l1] for P = [q1 l1 c; f1 q l2; p f2 q2].
inline Presentation delta7(const Presentation& p) {
  detail::require_row(p, StratumId::X5);
  const Rational c = blowdown_scalar(p, BlowdownVariant::seven);
  Presentation out(info(StratumId::X4).source, info(StratumId::X4).target);
  for (std::size_t r = 0; r < 2; ++r)
    for (std::size_t k = 0; k < 2; ++k) out(r, k) = p(r + 1, k) * c - p(r + 1, 2) * p(0, k);
  return out;
}

inline Presentation blowdown(const Presentation& p, BlowdownVariant v) {
  return v == BlowdownVariant::ten ? delta10(p) : delta7(p);
}

struct FiberReport {
  CohomologyTable input, image;
  bool match() const { return input == image; }
};

// For c != 0 the cokernels of P and delta(P) agree; compares their cohomology tables.
inline FiberReport fiber_consistency(const Presentation& p, BlowdownVariant v) {
  const Presentation d = blowdown(p, v);
  if (blowdown_scalar(p, v) == 0) throw Error(ErrorKind::precondition, "fiber_consistency needs c != 0");
  return {cohomology_table(p), cohomology_table(d)};
}

// Random input on the row of the variant with all entries generic, including c.
inline Presentation random_blowdown_input(BlowdownVariant v, Rng& rng, int height, bool zero_scalar = false) {
  const StratumId s = input_row(v);
  for (int attempt = 0; attempt < kRetryBudget; ++attempt) {
    Presentation p(info(s).source, info(s).target);
    for (std::size_t j = 0; j < p.rows(); ++j)
      for (std::size_t i = 0; i < p.cols(); ++i)
        if (p.required_degree(j, i) >= 0) p(j, i) = random_form(p.required_degree(j, i), rng, height);
    QForm& c = v == BlowdownVariant::ten ? p(0, 3) : p(0, 2);
    c = zero_scalar ? QForm(0) : QForm::constant(random_nonzero_scalar(rng, height));
    if (zero_scalar || is_injective(p)) return p;
  }
  throw Error(ErrorKind::retry_exhausted, "random_blowdown_input: no injective draw");
}

}  // namespace sheafstrata
