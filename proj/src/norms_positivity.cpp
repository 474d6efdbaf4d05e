#include "lqhv/norms_positivity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lqhv/errors.hpp"
#include "lqhv/random.hpp"

namespace lqhv {

const char* to_string(PositivityStatus s) noexcept {
  switch (s) {
    case PositivityStatus::not_tensor_positive: return "not_tensor_positive";
    case PositivityStatus::certified_positive: return "certified_positive";
    case PositivityStatus::undetermined: return "undetermined";
  }
  return "undetermined";
}

namespace {

// Digits of every flat index, slot 0 most significant.
std::vector<std::vector<std::size_t>> digit_table(std::span<const std::size_t> slot_dims) {
  std::size_t total = 1;
  for (std::size_t d : slot_dims) total *= d;
  std::vector<std::vector<std::size_t>> t(total, std::vector<std::size_t>(slot_dims.size()));
  for (std::size_t r = 0; r < total; ++r) {
    std::size_t x = r;
    for (std::size_t j = slot_dims.size(); j-- > 0;) {
      t[r][j] = x % slot_dims[j];
      x /= slot_dims[j];
    }
  }
  return t;
}

void check_square(const ComplexMatrix& z, std::span<const std::size_t> slot_dims) {
  std::size_t total = 1;
  for (std::size_t d : slot_dims) total *= d;
  if (z.rows() != total || z.cols() != total)
    fail(ErrorKind::shape, "operator size does not match the slot dimensions");
}

// Effective operator on slot j: <others| z |others> for product vectors.
ComplexMatrix effective_vector(const ComplexMatrix& z, std::span<const std::size_t> slot_dims,
                               const std::vector<std::vector<std::size_t>>& digits,
                               const std::vector<std::vector<cplx>>& vecs, std::size_t j) {
  const std::size_t total = z.rows();
  std::vector<cplx> w(total, 1.0);
  for (std::size_t r = 0; r < total; ++r)
    for (std::size_t k = 0; k < slot_dims.size(); ++k)
      if (k != j) w[r] *= vecs[k][digits[r][k]];
  ComplexMatrix out(slot_dims[j], slot_dims[j]);
  for (std::size_t r = 0; r < total; ++r) {
    if (w[r] == cplx(0.0)) continue;
    const cplx wr = std::conj(w[r]);
    for (std::size_t c = 0; c < total; ++c)
      out(digits[r][j], digits[c][j]) += wr * z(r, c) * w[c];
  }
  return out.hermitian_part();
}

// Effective operator on slot j: tr_others[w (X_others)].
ComplexMatrix effective_observable(const ComplexMatrix& w, std::span<const std::size_t> slot_dims,
                                   const std::vector<std::vector<std::size_t>>& digits,
                                   const std::vector<ComplexMatrix>& xs, std::size_t j) {
  const std::size_t total = w.rows();
  ComplexMatrix out(slot_dims[j], slot_dims[j]);
  for (std::size_t r = 0; r < total; ++r)
    for (std::size_t c = 0; c < total; ++c) {
      const cplx e = w(r, c);
      if (e == cplx(0.0)) continue;
      cplx f = 1.0;
      for (std::size_t k = 0; k < slot_dims.size() && f != cplx(0.0); ++k)
        if (k != j) f *= xs[k](digits[c][k], digits[r][k]);
      // tr[W (X_j (x) rest)] = sum W(r,c) X_j(c_j, r_j) rest(c, r)
      out(digits[c][j], digits[r][j]) += e * f;
    }
  // out(a, b) collects the coefficient of X_j(a, b); the contracted operator
  // is its transpose.
  ComplexMatrix t(slot_dims[j], slot_dims[j]);
  for (std::size_t a = 0; a < slot_dims[j]; ++a)
    for (std::size_t b = 0; b < slot_dims[j]; ++b) t(a, b) = out(b, a);
  return t.hermitian_part();
}

std::vector<cplx> min_eigenvector(const ComplexMatrix& a) {
  const HermitianEigen e = eig_hermitian(a);
  const std::size_t n = a.rows();
  std::vector<cplx> v(n);
  for (std::size_t r = 0; r < n; ++r) v[r] = e.vectors(r, n - 1);
  return v;
}

std::vector<cplx> max_eigenvector(const ComplexMatrix& a) {
  const HermitianEigen e = eig_hermitian(a);
  std::vector<cplx> v(a.rows());
  for (std::size_t r = 0; r < a.rows(); ++r) v[r] = e.vectors(r, 0);
  return v;
}

cplx contract_all(const ComplexMatrix& w, const std::vector<std::vector<std::size_t>>& digits,
                  const std::vector<ComplexMatrix>& xs) {
  cplx s = 0;
  const std::size_t total = w.rows();
  for (std::size_t r = 0; r < total; ++r)
    for (std::size_t c = 0; c < total; ++c) {
      cplx f = w(r, c);
      for (std::size_t k = 0; k < xs.size() && f != cplx(0.0); ++k)
        f *= xs[k](digits[c][k], digits[r][k]);
      s += f;
    }
  return s;
}

constexpr std::size_t kMaxSweeps = 200;
constexpr double kSweepTol = 1e-13;

}  // namespace

double product_expectation(const ComplexMatrix& z, std::span<const std::size_t> slot_dims,
                           const std::vector<std::vector<cplx>>& vecs) {
  check_square(z, slot_dims);
  std::vector<cplx> psi{1.0};
  for (const auto& v : vecs) {
    std::vector<cplx> next;
    next.reserve(psi.size() * v.size());
    for (const cplx& a : psi)
      for (const cplx& b : v) next.push_back(a * b);
    psi = std::move(next);
  }
  if (psi.size() != z.rows()) fail(ErrorKind::shape, "product_expectation: vector sizes");
  cplx s = 0;
  const auto zpsi = z * std::span<const cplx>(psi);
  for (std::size_t r = 0; r < psi.size(); ++r) s += std::conj(psi[r]) * zpsi[r];
  return s.real();
}

PositivityVerdict probe_tensor_positivity(const ComplexMatrix& z, const FactorShape& shape,
                                          std::size_t restarts, std::uint64_t seed) {
  const auto slot_dims = shape.slot_dims();
  check_square(z, slot_dims);
  if (!z.is_hermitian()) fail(ErrorKind::hermiticity, "probe_tensor_positivity: not Hermitian");
  const std::size_t m = slot_dims.size();
  const auto digits = digit_table(slot_dims);
  const HermitianEigen full = eig_hermitian(z);
  const double scale = std::max(1.0, std::max(std::abs(full.values.front()),
                                              std::abs(full.values.back())));

  Rng rng(seed);
  PositivityVerdict best;
  best.min_found = std::numeric_limits<double>::infinity();
  std::vector<std::vector<cplx>> best_vecs;
  for (std::size_t start = 0; start <= restarts; ++start) {
    std::vector<std::vector<cplx>> vecs(m);
    if (start == 0) {
      // Seed each factor from the dominant direction of the lowest eigenvector's marginal.
      std::vector<cplx> v(z.rows());
      for (std::size_t r = 0; r < z.rows(); ++r) v[r] = full.vectors(r, z.rows() - 1);
      const ComplexMatrix pv = ComplexMatrix::outer(v);
      for (std::size_t j = 0; j < m; ++j) {
        const std::size_t keep[] = {j};
        vecs[j] = max_eigenvector(partial_trace(pv, slot_dims, keep));
      }
    } else {
      for (std::size_t j = 0; j < m; ++j) vecs[j] = random_unit_vector(slot_dims[j], rng);
    }
    double value = product_expectation(z, slot_dims, vecs);
    for (std::size_t sweep = 0; sweep < kMaxSweeps; ++sweep) {
      const double before = value;
      for (std::size_t j = 0; j < m; ++j)
        vecs[j] = min_eigenvector(effective_vector(z, slot_dims, digits, vecs, j));
      value = product_expectation(z, slot_dims, vecs);
      if (before - value < kSweepTol * scale) break;
    }
    if (value < best.min_found) {
      best.min_found = value;
      best_vecs = vecs;
    }
  }

  if (full.values.back() >= -kPositiveTol) {
    best.status = PositivityStatus::certified_positive;
  } else if (best.min_found < -kRefuteTol * scale) {
    best.status = PositivityStatus::not_tensor_positive;
    best.witness = best_vecs;
    best.witness_value = best.min_found;
  } else {
    best.status = PositivityStatus::undetermined;
  }
  return best;
}

CoveringBracket covering_bracket(const ComplexMatrix& w, const FactorShape& shape,
                                 std::size_t restarts, std::uint64_t seed) {
  const auto slot_dims = shape.slot_dims();
  check_square(w, slot_dims);
  if (!w.is_hermitian()) fail(ErrorKind::hermiticity, "covering_bracket: not Hermitian");
  const std::size_t m = slot_dims.size();
  const auto digits = digit_table(slot_dims);
  const HermitianEigen full = eig_hermitian(w);

  CoveringBracket out;
  double tn = 0;
  for (double l : full.values) tn += std::abs(l);
  if (full.values.back() >= -kPositiveTol) {
    out.upper = w.trace().real();
    out.exact = true;
  } else {
    out.upper = tn;
  }

  Rng rng(seed);
  double best = 0;
  for (std::size_t start = 0; start <= restarts; ++start) {
    std::vector<ComplexMatrix> xs(m);
    for (std::size_t j = 0; j < m; ++j)
      xs[j] = start == 0 ? ComplexMatrix::identity(slot_dims[j])
                         : sign_hermitian(random_hermitian_unit(slot_dims[j], rng));
    double value = std::abs(contract_all(w, digits, xs));
    best = std::max(best, value);
    for (std::size_t sweep = 0; sweep < kMaxSweeps; ++sweep) {
      const double before = value;
      for (std::size_t j = 0; j < m; ++j) {
        xs[j] = sign_hermitian(effective_observable(w, slot_dims, digits, xs, j));
      }
      value = std::abs(contract_all(w, digits, xs));
      best = std::max(best, value);
      if (value - before < kSweepTol * std::max(1.0, tn)) break;
    }
  }
  out.lower = best;
  return out;
}

bool reduced_monotonicity_check(const ComplexMatrix& w, const FactorShape& shape,
                                std::span<const std::size_t> keep, std::size_t restarts,
                                std::uint64_t seed) {
  const auto slot_dims = shape.slot_dims();
  const ComplexMatrix red = partial_trace(w, slot_dims, keep);
  std::vector<std::size_t> kept_dims;
  for (std::size_t k : keep) kept_dims.push_back(slot_dims[k]);
  const CoveringBracket small = covering_bracket(red, FactorShape::sites(kept_dims), restarts, seed);
  const CoveringBracket big = covering_bracket(w, shape, restarts, seed);
  return small.lower <= big.upper + 1e-8;
}

}  // namespace lqhv
