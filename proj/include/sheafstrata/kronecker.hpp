#pragma once

// Kronecker modules: q x p matrices with entries in an m-dimensional space,
// stored as m coefficient slices. A pair (U, W) with A_k U in W for all k and
// q dim U > p dim W destabilizes.

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "sheafstrata/gradedmat.hpp"

namespace sheafstrata {

template <class K>
struct KroneckerModule {
  std::size_t q = 0, p = 0;
  std::vector<Matrix<K>> slices;  // m slices of size q x p
  std::size_t m() const { return slices.size(); }
};

// A block whose entries all have one degree d; slice k holds the coefficient of
// the k-th monomial of degree d.
inline KroneckerModule<Rational> kronecker_module(const Presentation& block) {
  require_valid(block);
  int d = -1;
  for (std::size_t j = 0; j < block.rows(); ++j)
    for (std::size_t i = 0; i < block.cols(); ++i) {
      const int r = block.required_degree(j, i);
      if (d < 0) d = r;
      if (r != d || r < 0) throw Error(ErrorKind::degree_mismatch, "Kronecker block needs entries of one degree");
    }
  KroneckerModule<Rational> mod;
  mod.q = block.rows();
  mod.p = block.cols();
  const std::size_t m = monomial_count(d);
  mod.slices.assign(m, Matrix<Rational>(mod.q, mod.p));
  for (std::size_t j = 0; j < mod.q; ++j)
    for (std::size_t i = 0; i < mod.p; ++i)
      for (std::size_t k = 0; k < m; ++k) mod.slices[k](j, i) = block(j, i).coefficients()[k];
  return mod;
}

// Inverse of kronecker_module for linear-degree modules (m = 3 only; entries are linear forms).
inline Presentation linear_block(const KroneckerModule<Rational>& mod) {
  if (mod.m() != 3) throw Error(ErrorKind::precondition, "linear_block needs m = 3");
  Presentation b(std::vector<int>(mod.p, -1), std::vector<int>(mod.q, 0));
  for (std::size_t j = 0; j < mod.q; ++j)
    for (std::size_t i = 0; i < mod.p; ++i)
      b(j, i) = QForm::linear(mod.slices[0](j, i), mod.slices[1](j, i), mod.slices[2](j, i));
  return b;
}

// Base change: g (q x q) . A . h (p x p) on every slice.
inline KroneckerModule<Rational> transform(const KroneckerModule<Rational>& mod, const Matrix<Rational>& g,
                                           const Matrix<Rational>& h) {
  KroneckerModule<Rational> out = mod;
  for (auto& s : out.slices) s = g * s * h;
  return out;
}

inline long long dim_N(long long m, long long p, long long q) { return m * p * q - p * p - q * q + 1; }

struct BlockShape {
  int dim_u = 0, dim_w = 0;
  int zero_rows = 0, zero_cols = 0;  // zero block of size (q - dim_w) x dim_u
  friend bool operator==(const BlockShape&, const BlockShape&) = default;
};

// Minimal forbidden zero-block shapes: for each dim U the largest dim W still
// violating q dU <= p dW; shapes contained in another listed shape are dropped.
inline std::vector<BlockShape> forbidden_block_shapes(int p, int q) {
  if (p < 1 || q < 1) throw Error(ErrorKind::precondition, "forbidden_block_shapes needs p, q >= 1");
  std::vector<BlockShape> out;
  int last_rows = q + 1;
  for (int du = 1; du <= p; ++du) {
    const int dw = std::min(q - 1, (q * du - 1) / p);
    const int rows = q - dw;
    if (rows < last_rows) {
      out.push_back({du, dw, rows, du});
      last_rows = rows;
    }
  }
  return out;
}

enum class Verdict { semistable_certified, semistable_probabilistic, unstable_certified };

inline std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::semistable_certified: return "semistable-certified";
    case Verdict::semistable_probabilistic: return "semistable-probabilistic";
    case Verdict::unstable_certified: return "unstable-certified";
  }
  return "?";
}

struct InstabilityWitness {
  Matrix<Rational> u;  // rows: basis of U inside the source K^p
  Matrix<Rational> w;  // rows: basis of W inside the target K^q
};

struct KroneckerVerdict {
  Verdict verdict = Verdict::semistable_probabilistic;
  std::optional<InstabilityWitness> witness;
  int trials = 0;
};

namespace detail {

template <class K>
Matrix<K> image_of(const KroneckerModule<K>& mod, const Matrix<K>& U) {
  Matrix<K> rows(0, mod.q);
  for (std::size_t b = 0; b < U.rows(); ++b) {
    const auto u = U.row(b);
    for (const auto& A : mod.slices) rows.append_row(A.apply(u));
  }
  return rows.rows() == 0 ? rows : row_space(rows);
}

// Rows y A_k for every y in Y and every slice.
template <class K>
Matrix<K> pullback_rows(const KroneckerModule<K>& mod, const Matrix<K>& Y) {
  Matrix<K> rows(0, mod.p);
  for (std::size_t b = 0; b < Y.rows(); ++b) {
    const auto y = Y.row(b);
    for (const auto& A : mod.slices) rows.append_row(A.transpose().apply(y));
  }
  return rows;
}

// Largest U with A_k U inside W for all k.
template <class K>
Matrix<K> preimage_of(const KroneckerModule<K>& mod, const Matrix<K>& W) {
  Matrix<K> perp = W.rows() == 0 ? Matrix<K>::identity(mod.q) : nullspace(W);
  if (perp.rows() == 0) return Matrix<K>::identity(mod.p);
  return nullspace(pullback_rows(mod, perp));
}

template <class K>
using Candidate = std::optional<std::pair<Matrix<K>, Matrix<K>>>;

template <class K>
Candidate<K> right_closure(const KroneckerModule<K>& mod, const Matrix<K>& U0) {
  if (U0.rows() == 0) return std::nullopt;
  Matrix<K> W = image_of(mod, U0);
  return std::make_pair(preimage_of(mod, W), W);
}

template <class K>
Candidate<K> left_closure(const KroneckerModule<K>& mod, const Matrix<K>& Y0) {
  if (Y0.rows() == 0) return std::nullopt;
  Matrix<K> U = nullspace(pullback_rows(mod, Y0));
  if (U.rows() == 0) return std::nullopt;
  Matrix<K> W = image_of(mod, U);
  return std::make_pair(preimage_of(mod, W), W);
}

// One search step, described by integers so it can be replayed over another field.
struct Recipe {
  enum Kind { full, common_kernel, coord_source, coord_target, kernel_combo, leftkernel_combo, kernel_pair,
              random_vector, random_covector, random_subspace };
  Kind kind = full;
  unsigned mask = 0;
  std::vector<long> a, b;  // combination weights or vector coordinates
};

template <class K>
Matrix<K> combo(const KroneckerModule<K>& mod, const std::vector<long>& w) {
  Matrix<K> c(mod.q, mod.p);
  for (std::size_t k = 0; k < mod.m(); ++k) {
    const K s(w[k]);
    if (s == 0) continue;
    for (std::size_t i = 0; i < mod.q; ++i)
      for (std::size_t j = 0; j < mod.p; ++j) c(i, j) += s * mod.slices[k](i, j);
  }
  return c;
}

template <class K>
Matrix<K> vectors(const std::vector<long>& flat, std::size_t len) {
  Matrix<K> out(0, len);
  for (std::size_t s = 0; s + len <= flat.size(); s += len) {
    std::vector<K> v;
    for (std::size_t i = 0; i < len; ++i) v.push_back(K(flat[s + i]));
    out.append_row(v);
  }
  return out;
}

template <class K>
Candidate<K> run_recipe(const KroneckerModule<K>& mod, const Recipe& r) {
  switch (r.kind) {
    case Recipe::full:
      return right_closure(mod, Matrix<K>::identity(mod.p));
    case Recipe::common_kernel: {
      Matrix<K> all(0, mod.p);
      for (const auto& A : mod.slices) all = Matrix<K>::stack(all, A);
      return right_closure(mod, nullspace(all));
    }
    case Recipe::coord_source: {
      Matrix<K> U(0, mod.p);
      for (std::size_t i = 0; i < mod.p; ++i)
        if (r.mask >> i & 1u) {
          std::vector<K> e(mod.p, K(0));
          e[i] = K(1);
          U.append_row(e);
        }
      return right_closure(mod, U);
    }
    case Recipe::coord_target: {
      Matrix<K> Y(0, mod.q);
      for (std::size_t i = 0; i < mod.q; ++i)
        if (r.mask >> i & 1u) {
          std::vector<K> e(mod.q, K(0));
          e[i] = K(1);
          Y.append_row(e);
        }
      return left_closure(mod, Y);
    }
    case Recipe::kernel_combo:
      return right_closure(mod, nullspace(combo(mod, r.a)));
    case Recipe::leftkernel_combo:
      return left_closure(mod, nullspace(combo(mod, r.a).transpose()));
    case Recipe::kernel_pair:
      return right_closure(mod, nullspace(Matrix<K>::stack(combo(mod, r.a), combo(mod, r.b))));
    case Recipe::random_vector:
    case Recipe::random_subspace:
      return right_closure(mod, row_space(vectors<K>(r.a, mod.p)));
    case Recipe::random_covector:
      return left_closure(mod, row_space(vectors<K>(r.a, mod.q)));
  }
  return std::nullopt;
}

template <class K>
bool destabilizes(const KroneckerModule<K>& mod, const Candidate<K>& c) {
  if (!c) return false;
  const std::size_t du = c->first.rows(), dw = c->second.rows();
  return du >= 1 && mod.q * du > mod.p * dw;
}

inline std::vector<Recipe> deterministic_recipes(std::size_t p, std::size_t q) {
  std::vector<Recipe> out{{Recipe::full, 0, {}, {}}, {Recipe::common_kernel, 0, {}, {}}};
  if (p <= 10)
    for (unsigned m = 1; m < (1u << p); ++m) out.push_back({Recipe::coord_source, m, {}, {}});
  if (q <= 10)
    for (unsigned m = 1; m + 1 < (1u << q); ++m) out.push_back({Recipe::coord_target, m, {}, {}});
  return out;
}

inline Recipe random_recipe(std::size_t p, std::size_t q, std::size_t m, std::uint32_t prime, Rng& rng,
                            std::size_t step) {
  std::uniform_int_distribution<long> coef(0, long(prime) - 1);
  auto draw = [&](std::size_t n) {
    std::vector<long> v(n);
    for (auto& x : v) x = coef(rng);
    return v;
  };
  Recipe r;
  switch (step % 6) {
    case 0: r.kind = Recipe::kernel_combo; r.a = draw(m); break;
    case 1: r.kind = Recipe::leftkernel_combo; r.a = draw(m); break;
    case 2: r.kind = Recipe::kernel_pair; r.a = draw(m); r.b = draw(m); break;
    case 3: r.kind = Recipe::random_vector; r.a = draw(p); break;
    case 4: r.kind = Recipe::random_covector; r.a = draw(q); break;
    default: {
      r.kind = Recipe::random_subspace;
      const std::size_t dim = p > 1 ? 1 + std::uniform_int_distribution<std::size_t>(0, p - 2)(rng) : 1;
      r.a = draw(dim * p);
    }
  }
  return r;
}

}  // namespace detail

// Exact check over Q: bases independent, A_k U inside W, and q dim U > p dim W.
inline bool verify_witness(const KroneckerModule<Rational>& mod, const InstabilityWitness& w) {
  const std::size_t du = w.u.rows(), dw = w.w.rows();
  if (du == 0 || w.u.cols() != mod.p || (dw > 0 && w.w.cols() != mod.q)) return false;
  if (rank(w.u) != du || (dw > 0 && rank(w.w) != dw)) return false;
  if (!(mod.q * du > mod.p * dw)) return false;
  Matrix<Rational> wb = dw > 0 ? w.w : Matrix<Rational>(0, mod.q);
  for (std::size_t b = 0; b < du; ++b)
    for (const auto& A : mod.slices)
      if (!in_row_space(wb, A.apply(w.u.row(b)))) return false;
  return true;
}

// Randomized search over F_p; hits are replayed over Q and re-verified.
inline std::optional<InstabilityWitness> instability_witness_search(const KroneckerModule<Rational>& mod, int trials,
                                                                    Rng& rng, std::uint32_t prime = kDefaultPrime,
                                                                    int* trials_run = nullptr) {
  ModP::Context ctx(prime);
  std::optional<KroneckerModule<ModP>> modp;
  try {
    KroneckerModule<ModP> mp{mod.q, mod.p, {}};
    for (const auto& s : mod.slices) {
      Matrix<ModP> t(mod.q, mod.p);
      for (std::size_t i = 0; i < mod.q; ++i)
        for (std::size_t j = 0; j < mod.p; ++j) t(i, j) = ModP::from_rational(s(i, j));
      mp.slices.push_back(std::move(t));
    }
    modp = std::move(mp);
  } catch (const Error&) {
    // a denominator vanishes mod p: search directly over Q
  }

  auto attempt = [&](const detail::Recipe& r) -> std::optional<InstabilityWitness> {
    if (modp && !detail::destabilizes(*modp, detail::run_recipe(*modp, r))) return std::nullopt;
    auto c = detail::run_recipe(mod, r);
    if (!detail::destabilizes(mod, c)) return std::nullopt;
    InstabilityWitness w{c->first, c->second};
    if (!verify_witness(mod, w)) return std::nullopt;
    return w;
  };

  int run = 0;
  std::optional<InstabilityWitness> found;
  for (const auto& r : detail::deterministic_recipes(mod.p, mod.q)) {
    if (run >= trials) break;
    ++run;
    if ((found = attempt(r))) break;
  }
  for (std::size_t step = 0; !found && run < trials; ++step, ++run)
    found = attempt(detail::random_recipe(mod.p, mod.q, mod.m(), prime, rng, step));
  if (trials_run) *trials_run = run;
  return found;
}

inline bool has_minor_criterion(const KroneckerModule<Rational>& mod) {
  const auto a = std::min(mod.p, mod.q), b = std::max(mod.p, mod.q);
  return mod.m() == 3 && b == 3 && (a == 1 || a == 2);
}

// Exact criterion for N(3;1,3), N(3;3,1), N(3;2,3), N(3;3,2): semistable iff the
// maximal minors are linearly independent.
inline bool is_semistable_minors(const KroneckerModule<Rational>& mod) {
  if (!has_minor_criterion(mod))
    throw Error(ErrorKind::precondition, "minor criterion needs linear entries and shape 1x3, 3x1, 2x3 or 3x2");
  const auto minors = maximal_minors(linear_block(mod));
  return span_dimension(minors) == minors.size();
}

inline KroneckerVerdict check_semistability(const KroneckerModule<Rational>& mod, int trials, Rng& rng,
                                            std::uint32_t prime = kDefaultPrime) {
  KroneckerVerdict v;
  if (has_minor_criterion(mod)) {
    if (is_semistable_minors(mod)) {
      v.verdict = Verdict::semistable_certified;
      return v;
    }
    v.verdict = Verdict::unstable_certified;
    v.witness = instability_witness_search(mod, trials, rng, prime, &v.trials);
    return v;
  }
  v.witness = instability_witness_search(mod, trials, rng, prime, &v.trials);
  v.verdict = v.witness ? Verdict::unstable_certified : Verdict::semistable_probabilistic;
  return v;
}

}  // namespace sheafstrata
