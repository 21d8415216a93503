#pragma once

// The nine strata of M(6,3): classification by the cohomology triple,
// per-stratum structural checks, samplers and the codimension audit.

#include <algorithm>
#include <array>
#include <cctype>
#include <optional>
#include <string>
#include <vector>

#include "sheafstrata/builders.hpp"
#include "sheafstrata/cohomology.hpp"
#include "sheafstrata/kronecker.hpp"

namespace sheafstrata {

enum class StratumId { X0, X1, X2, X3, X3D, X4, X5, X6, X7 };

inline constexpr std::array<StratumId, 9> kAllStrata = {StratumId::X0, StratumId::X1,  StratumId::X2,
                                                        StratumId::X3, StratumId::X3D, StratumId::X4,
                                                        StratumId::X5, StratumId::X6,  StratumId::X7};

struct StratumInfo {
  StratumId id;
  const char* name;
  std::vector<int> source, target;
  CohomologyTable triple;
  int codim;
};

inline const std::vector<StratumInfo>& stratum_table() {
  static const std::vector<StratumInfo> t = {
      {StratumId::X0, "X0", {-2, -2, -2}, {0, 0, 0}, {0, 0, 0}, 0},
      {StratumId::X1, "X1", {-2, -2, -2, -1}, {-1, 0, 0, 0}, {0, 0, 1}, 1},
      {StratumId::X2, "X2", {-2, -2, -2, -1, -1}, {-1, -1, 0, 0, 0}, {0, 0, 2}, 4},
      {StratumId::X3, "X3", {-3, -1, -1, -1}, {0, 0, 0, 0}, {0, 1, 3}, 4},
      {StratumId::X3D, "X3D", {-2, -2, -2, -2}, {-1, -1, -1, 1}, {1, 0, 3}, 4},
      {StratumId::X4, "X4", {-3, -2}, {0, 1}, {1, 1, 3}, 5},
      {StratumId::X5, "X5", {-3, -2, -1}, {-1, 0, 1}, {1, 1, 4}, 6},
      {StratumId::X6, "X6", {-3, -3, 0}, {-2, 1, 1}, {2, 2, 6}, 8},
      {StratumId::X7, "X7", {-4}, {2}, {3, 3, 8}, 10},
  };
  return t;
}

inline const StratumInfo& info(StratumId s) { return stratum_table()[static_cast<std::size_t>(s)]; }
inline std::string name(StratumId s) { return info(s).name; }

inline StratumId parse_stratum(std::string text) {
  std::transform(text.begin(), text.end(), text.begin(), [](unsigned char c) { return std::toupper(c); });
  for (const auto& row : stratum_table())
    if (text == row.name) return row.id;
  throw Error(ErrorKind::parse_error, "unknown stratum '" + text + "'");
}

// Image under F -> Ext^1(F, omega)(1).
inline StratumId dual(StratumId s) {
  if (s == StratumId::X3) return StratumId::X3D;
  if (s == StratumId::X3D) return StratumId::X3;
  return s;
}

enum class CheckVerdict { pass, fail, probabilistic_pass };

inline std::string_view to_string(CheckVerdict v) {
  switch (v) {
    case CheckVerdict::pass: return "pass";
    case CheckVerdict::fail: return "fail";
    case CheckVerdict::probabilistic_pass: return "probabilistic-pass";
  }
  return "?";
}

struct Check {
  std::string name;
  CheckVerdict verdict;
  std::string detail;
};

struct StratumReport {
  StratumId stratum;
  std::optional<CohomologyTable> triple;  // absent when the map is not injective
  std::optional<HilbertPolynomial> hilbert;
  std::vector<Check> checks;
  bool possibly_properly_semistable = false;

  bool all_pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.verdict != CheckVerdict::fail; });
  }
  bool certified() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.verdict == CheckVerdict::pass; });
  }
};

struct VerifyOptions {
  int trials = 10000;
  std::uint32_t prime = kDefaultPrime;
  std::uint64_t seed = 0;
};

namespace detail {

inline Check check(std::string name, bool ok, std::string detail = {}) {
  return {std::move(name), ok ? CheckVerdict::pass : CheckVerdict::fail, std::move(detail)};
}

inline bool all_zero(const Presentation& b) {
  for (std::size_t j = 0; j < b.rows(); ++j)
    for (std::size_t i = 0; i < b.cols(); ++i)
      if (!b(j, i).is_zero()) return false;
  return true;
}

inline std::vector<QForm> entries(const Presentation& b) {
  std::vector<QForm> out;
  for (std::size_t j = 0; j < b.rows(); ++j)
    for (std::size_t i = 0; i < b.cols(); ++i) out.push_back(b(j, i));
  return out;
}

// Scalar relations sum c_k f_k = 0 among forms of one degree (rows of the result).
inline Matrix<Rational> scalar_relations(const std::vector<QForm>& fs) {
  if (fs.empty()) return {};
  Matrix<Rational> m(fs.front().coefficients().size(), fs.size());
  for (std::size_t k = 0; k < fs.size(); ++k)
    for (std::size_t r = 0; r < m.rows(); ++r) m(r, k) = fs[k].coefficients()[r];
  return nullspace(m);
}

inline std::size_t linear_syzygies(const Presentation& p, int n) {
  const Matrix<Rational> m = section_map(p, n);
  return m.cols() - rank(m);
}

// The three minimal forbidden shapes of the X1 row, decided exactly:
//   1. phi11 equivalent to (0 0 *)      iff span(phi11) <= 1
//   2. zero 2x2 block in phi21 with phi11 = (0 * *), phi22 = (0 * *)^T  iff
//      span(phi11) = span(phi22) = 2 and lambda^T phi21 mu = 0 for the scalar
//      relations mu of phi11 and lambda of phi22
//   3. phi22 equivalent to (0 0 *)^T   iff span(phi22) <= 1
inline std::array<bool, 3> x1_forbidden_shapes(const Presentation& p) {
  const auto phi11 = entries(p.block(0, 1, 0, 3));
  const auto phi22 = entries(p.block(1, 4, 3, 4));
  const std::size_t s11 = span_dimension(phi11), s22 = span_dimension(phi22);
  bool shape2 = false;
  if (s11 == 2 && s22 == 2) {
    const auto mu = scalar_relations(phi11).row(0);
    const auto lambda = scalar_relations(phi22).row(0);
    QForm acc(2);
    for (std::size_t r = 0; r < 3; ++r)
      for (std::size_t c = 0; c < 3; ++c)
        if (lambda[r] != 0 && mu[c] != 0) acc += p(r + 1, c) * (lambda[r] * mu[c]);
    shape2 = acc.is_zero();
  }
  return {s11 <= 1, shape2, s22 <= 1};
}

inline void kronecker_check(StratumReport& rep, const std::string& label, const Presentation& block,
                            const VerifyOptions& opts) {
  Rng rng(opts.seed);
  const auto v = check_semistability(kronecker_module(block), opts.trials, rng, opts.prime);
  Check c{label + " semistable as Kronecker module", CheckVerdict::pass, std::string(to_string(v.verdict))};
  if (v.verdict == Verdict::semistable_probabilistic) {
    c.verdict = CheckVerdict::probabilistic_pass;
    c.detail += " after " + std::to_string(v.trials) + " trials";
  } else if (v.verdict == Verdict::unstable_certified) {
    c.verdict = CheckVerdict::fail;
  }
  rep.checks.push_back(std::move(c));
}

inline void not_divisible(StratumReport& rep, const std::string& label, const QForm& f, const QForm& g) {
  rep.checks.push_back(check(label, g.is_zero() || !divide_exact(f, g).has_value()));
}

inline void w_checks(StratumReport& rep, const Presentation& p, const VerifyOptions& opts) {
  switch (rep.stratum) {
    case StratumId::X0:
    case StratumId::X7:
      break;
    case StratumId::X1: {
      const Presentation phi11 = p.block(0, 1, 0, 3), phi21 = p.block(1, 4, 0, 3), phi22 = p.block(1, 4, 3, 4);
      const bool zero12 = p(0, 3).is_zero();
      const std::size_t s11 = span_dimension(entries(phi11)), s22 = span_dimension(entries(phi22));
      const bool sigma = sigma_membership(phi21, phi11, phi22).has_value();
      rep.checks.push_back(check("phi12 = 0", zero12));
      rep.checks.push_back(check("span(phi11) >= 2", s11 >= 2, "span " + std::to_string(s11)));
      rep.checks.push_back(check("span(phi22) >= 2", s22 >= 2, "span " + std::to_string(s22)));
      rep.checks.push_back(check("phi21 not in Sigma", !sigma));
      const auto shapes = x1_forbidden_shapes(p);
      const char* shape_names[] = {"1x3 row block", "2x2 block", "3x1 column block"};
      for (int k = 0; k < 3; ++k)
        rep.checks.push_back(check(std::string("no forbidden ") + shape_names[k], !shapes[k]));
      const bool span_sigma = s11 >= 2 && s22 >= 2 && !sigma;
      const bool shape_ok = !shapes[0] && !shapes[1] && !shapes[2];
      rep.checks.push_back(check("span/Sigma and block-shape criteria agree", span_sigma == shape_ok));
      break;
    }
    case StratumId::X2: {
      rep.checks.push_back(check("phi12 = 0", all_zero(p.block(0, 2, 3, 5))));
      const auto m11 = kronecker_module(p.block(0, 2, 0, 3));
      const auto m22 = kronecker_module(p.block(2, 5, 3, 5));
      rep.checks.push_back(check("phi11 minors independent", is_semistable_minors(m11)));
      rep.checks.push_back(check("phi22 minors independent", is_semistable_minors(m22)));
      break;
    }
    case StratumId::X3:
      kronecker_check(rep, "phi12", p.block(0, 4, 1, 4), opts);
      break;
    case StratumId::X3D:
      kronecker_check(rep, "phi11", p.block(0, 3, 0, 4), opts);
      break;
    case StratumId::X4:
      rep.checks.push_back(check("phi12 != 0", !p(0, 1).is_zero()));
      not_divisible(rep, "phi12 does not divide phi11", p(0, 0), p(0, 1));
      not_divisible(rep, "phi12 does not divide phi22", p(1, 1), p(0, 1));
      break;
    case StratumId::X5:
      rep.checks.push_back(check("phi13 = 0", p(0, 2).is_zero()));
      rep.checks.push_back(check("l1 != 0", !p(0, 1).is_zero()));
      rep.checks.push_back(check("l2 != 0", !p(1, 2).is_zero()));
      not_divisible(rep, "l1 does not divide q1", p(0, 0), p(0, 1));
      not_divisible(rep, "l2 does not divide q2", p(2, 2), p(1, 2));
      break;
    case StratumId::X6: {
      const Presentation phi11 = p.block(0, 1, 0, 2), phi21 = p.block(1, 3, 0, 2), phi22 = p.block(1, 3, 2, 3);
      rep.checks.push_back(check("phi11 entries independent", span_dimension(entries(phi11)) == 2));
      rep.checks.push_back(check("phi22 entries independent", span_dimension(entries(phi22)) == 2));
      rep.checks.push_back(check("phi21 not in Sigma", !sigma_membership(phi21, phi11, phi22).has_value()));
      break;
    }
  }
}

// Linear syzygies of the Kronecker block: the pattern of O_Q(1) + O_C type classes.
inline bool x32_pattern(const Presentation& p, StratumId s) {
  if (s == StratumId::X3) return linear_syzygies(dualize(p.block(0, 4, 1, 4), 0), 4) > 0;
  if (s == StratumId::X3D) return linear_syzygies(p.block(0, 3, 0, 4), 3) > 0;
  return false;
}

}  // namespace detail

inline bool matches_row(const Presentation& p, StratumId s) {
  return p.source_twists() == info(s).source && p.target_twists() == info(s).target;
}

inline StratumReport verify_w(const Presentation& p, StratumId s, const VerifyOptions& opts = {}) {
  if (!matches_row(p, s))
    throw Error(ErrorKind::twist_mismatch, "presentation twists do not match the " + name(s) + " row");
  require_valid(p);
  StratumReport rep{s, std::nullopt, std::nullopt, {}, false};
  const bool inj = is_injective(p);
  rep.checks.push_back(detail::check("injective", inj));
  detail::w_checks(rep, p, opts);
  rep.possibly_properly_semistable = detail::x32_pattern(p, s);
  if (inj) {
    rep.triple = cohomology_table(p);
    rep.hilbert = hilbert_polynomial(p);
    if (rep.certified() && *rep.triple != info(s).triple)
      throw std::logic_error("certified " + name(s) + " conditions but triple " + to_string(*rep.triple));
  }
  return rep;
}

inline StratumId stratum_of(const CohomologyTable& t) {
  for (const auto& row : stratum_table())
    if (row.triple == t) return row.id;
  throw Error(ErrorKind::no_stratum_match, "cohomology triple " + to_string(t) + " matches no stratum");
}

inline StratumId classify(const Presentation& p) {
  require_valid(p);
  const HilbertPolynomial hp = hilbert_polynomial(p);
  if (hp != HilbertPolynomial{6, 3})
    throw Error(ErrorKind::no_stratum_match,
                "Hilbert polynomial " + std::to_string(hp.r) + "m+" + std::to_string(hp.chi) + " is not 6m+3");
  return stratum_of(cohomology_table(p));
}

enum class AnalysisStatus { ok, flagged, unverified };

inline std::string_view to_string(AnalysisStatus s) {
  switch (s) {
    case AnalysisStatus::ok: return "ok";
    case AnalysisStatus::flagged: return "flagged";
    case AnalysisStatus::unverified: return "unverified";
  }
  return "?";
}

struct Analysis {
  StratumId stratum;
  CohomologyTable triple;
  AnalysisStatus status;
  std::optional<StratumReport> report;  // present when the twists match the stratum's row
};

// Classification plus the structural checks of the matched row. Flagged when a
// check fails or the input looks properly semistable.
inline Analysis analyze(const Presentation& p, const VerifyOptions& opts = {}) {
  const StratumId s = classify(p);
  Analysis a{s, info(s).triple, AnalysisStatus::unverified, std::nullopt};
  const Presentation n = normalize_order(p);
  if (!matches_row(n, s)) return a;
  a.report = verify_w(n, s, opts);
  a.status = a.report->all_pass() && !a.report->possibly_properly_semistable ? AnalysisStatus::ok
                                                                              : AnalysisStatus::flagged;
  return a;
}

namespace detail {

inline Presentation random_in_row(StratumId s, Rng& rng, int h) {
  Presentation p(info(s).source, info(s).target);
  for (std::size_t j = 0; j < p.rows(); ++j)
    for (std::size_t i = 0; i < p.cols(); ++i)
      if (p.required_degree(j, i) >= 0) p(j, i) = random_form(p.required_degree(j, i), rng, h);
  return p;
}

inline QForm random_not_divisible(int d, const QForm& l, Rng& rng, int h) {
  for (;;) {
    QForm q = random_form(d, rng, h);
    if (!divide_exact(q, l)) return q;
  }
}

inline Presentation draw(StratumId s, Rng& rng, int h) {
  switch (s) {
    case StratumId::X1: {
      Presentation p = random_in_row(s, rng, h);
      p(0, 3) = QForm(0);
      return p;
    }
    case StratumId::X2: {
      Presentation p = random_in_row(s, rng, h);
      for (std::size_t j = 0; j < 2; ++j)
        for (std::size_t i = 3; i < 5; ++i) p(j, i) = QForm(0);
      return p;
    }
    case StratumId::X3D:
      return dualize(draw(StratumId::X3, rng, h), 1);
    case StratumId::X5: {
      const QForm l1 = random_nonzero_form(1, rng, h), l2 = random_nonzero_form(1, rng, h);
      const QForm q1 = random_not_divisible(2, l1, rng, h), q2 = random_not_divisible(2, l2, rng, h);
      return x5_normal_form(q1, l1, q2, l2, rng, h);
    }
    case StratumId::X6: {
      auto point = [&] {
        for (;;) {
          Point pt{random_scalar(rng, h), random_scalar(rng, h), random_scalar(rng, h)};
          if (pt[0] != 0 || pt[1] != 0 || pt[2] != 0) return pt;
        }
      };
      return x6_normal_form(point(), point(), std::nullopt, rng, h);
    }
    case StratumId::X7:
      return sextic_sheaf(random_nonzero_form(6, rng, h));
    default:
      return random_in_row(s, rng, h);
  }
}

}  // namespace detail

inline constexpr int kDefaultHeight = 5;

// Random presentation in the row of s passing all structural checks.
inline Presentation sample(StratumId s, Rng& rng, int height = kDefaultHeight, const VerifyOptions& opts = {}) {
  if (height < 1) throw Error(ErrorKind::precondition, "height must be positive");
  for (int attempt = 0; attempt < kRetryBudget; ++attempt) {
    Presentation p;
    try {
      p = detail::draw(s, rng, height);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::retry_exhausted) throw;
      continue;
    }
    if (!is_injective(p)) continue;
    const StratumReport rep = verify_w(p, s, opts);
    if (rep.all_pass() && !rep.possibly_properly_semistable) return p;
  }
  throw Error(ErrorKind::retry_exhausted, "sample(" + name(s) + "): retry budget exhausted at height " +
                                              std::to_string(height));
}

struct AuditRow {
  StratumId stratum;
  long long dimension;
  int expected_codim;
  bool pass;
};

inline constexpr long long kModuliDimension = 37;

inline std::vector<AuditRow> codim_audit() {
  const long long fibre21 = 21;
  std::vector<AuditRow> rows;
  for (const auto& row : stratum_table()) {
    long long dim = 0;
    switch (row.id) {
      case StratumId::X0: dim = dim_N(6, 3, 3); break;
      case StratumId::X1: dim = dim_N(6, 3, 3) - 1; break;
      case StratumId::X2: dim = dim_N(3, 3, 2) + dim_N(3, 2, 3) + fibre21; break;
      case StratumId::X3:
      case StratumId::X3D: dim = dim_N(3, 3, 4) + fibre21; break;
      case StratumId::X4: dim = fibre21 + 6 + 5; break;
      case StratumId::X5: dim = 4 + 4 + 23; break;
      case StratumId::X6: dim = 2 + 2 + 25; break;
      case StratumId::X7: dim = monomial_count(6) - 1; break;
    }
    rows.push_back({row.id, dim, row.codim, kModuliDimension - dim == row.codim});
  }
  return rows;
}

}  // namespace sheafstrata
