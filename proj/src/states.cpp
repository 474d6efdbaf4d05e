#include "lqhv/states.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "lqhv/errors.hpp"

namespace lqhv {

std::size_t QuantumState::total_dim() const {
  return std::accumulate(dims.begin(), dims.end(), std::size_t{1}, std::multiplies<>());
}

void validate(const QuantumState& state) {
  if (state.dims.empty()) fail(ErrorKind::argument, "QuantumState: no sites");
  for (std::size_t d : state.dims)
    if (d < 1) fail(ErrorKind::argument, "QuantumState: site dimension must be >= 1");
  const std::size_t n = state.total_dim();
  if (state.rho.rows() != n || state.rho.cols() != n)
    fail(ErrorKind::shape, "QuantumState: density matrix does not match the site dimensions");
  if (!state.rho.is_hermitian()) fail(ErrorKind::argument, "QuantumState: rho is not Hermitian");
  const cplx tr = state.rho.trace();
  if (std::abs(tr - 1.0) > kStateTraceTol)
    fail(ErrorKind::argument, "QuantumState: tr[rho] = " + std::to_string(tr.real()) + " != 1");
  const auto ev = eigenvalues_hermitian(state.rho);
  if (ev.back() < -kStatePositivityTol)
    fail(ErrorKind::argument,
         "QuantumState: rho has a negative eigenvalue " + std::to_string(ev.back()));
}

QuantumState make_state(std::vector<std::size_t> dims, ComplexMatrix rho) {
  QuantumState s{std::move(dims), std::move(rho)};
  validate(s);
  return s;
}

QuantumState make_pure_state(std::vector<std::size_t> dims, std::span<const cplx> psi) {
  double norm2 = 0;
  for (const auto& z : psi) norm2 += std::norm(z);
  if (norm2 <= 0) fail(ErrorKind::argument, "make_pure_state: zero vector");
  ComplexMatrix rho = ComplexMatrix::outer(psi);
  rho *= 1.0 / norm2;
  return make_state(std::move(dims), std::move(rho));
}

QuantumState make_singlet() {
  const double h = 1.0 / std::sqrt(2.0);
  const std::vector<cplx> psi{0.0, h, -h, 0.0};
  return make_pure_state({2, 2}, psi);
}

QuantumState make_ghz(std::size_t d, std::size_t n) {
  if (d < 2 || n < 2) fail(ErrorKind::argument, "make_ghz: need d >= 2 and n >= 2");
  std::size_t total = 1;
  for (std::size_t i = 0; i < n; ++i) {
    total *= d;
    if (total > dimension_cap())
      fail(ErrorKind::size, "make_ghz: dimension exceeds the cap (LQHV_DIM_CAP)");
  }
  // |j...j> sits at index j * (1 + d + ... + d^{n-1}).
  std::size_t step = 0;
  for (std::size_t i = 0, p = 1; i < n; ++i, p *= d) step += p;
  std::vector<cplx> psi(total, 0.0);
  for (std::size_t j = 0; j < d; ++j) psi[j * step] = 1.0 / std::sqrt(static_cast<double>(d));
  return make_pure_state(std::vector<std::size_t>(n, d), psi);
}

QuantumState make_generalized_ghz(double phi, std::size_t n) {
  if (n < 2) fail(ErrorKind::argument, "make_generalized_ghz: need n >= 2");
  const std::size_t total = std::size_t{1} << n;
  if (total > dimension_cap())
    fail(ErrorKind::size, "make_generalized_ghz: dimension exceeds the cap (LQHV_DIM_CAP)");
  std::vector<cplx> psi(total, 0.0);
  psi[0] = std::sin(phi);
  psi[total - 1] = std::cos(phi);
  return make_pure_state(std::vector<std::size_t>(n, 2), psi);
}

QuantumState make_separable_mixture(std::span<const ProductComponent> components) {
  if (components.empty()) fail(ErrorKind::argument, "make_separable_mixture: no components");
  double total_weight = 0;
  std::vector<std::size_t> dims;
  for (const auto& c : components) {
    if (!(c.weight > 0)) fail(ErrorKind::argument, "make_separable_mixture: weights must be > 0");
    total_weight += c.weight;
    std::vector<std::size_t> cd;
    for (const auto& s : c.sites) {
      if (s.site_count() != 1)
        fail(ErrorKind::argument, "make_separable_mixture: component factors must be one-site");
      validate(s);
      cd.push_back(s.dims[0]);
    }
    if (dims.empty()) dims = cd;
    if (cd != dims || dims.empty())
      fail(ErrorKind::argument, "make_separable_mixture: components disagree on site dimensions");
  }
  if (std::abs(total_weight - 1.0) > 1e-12)
    fail(ErrorKind::argument, "make_separable_mixture: weights do not sum to 1");
  ComplexMatrix rho;
  for (const auto& c : components) {
    std::vector<ComplexMatrix> factors;
    for (const auto& s : c.sites) factors.push_back(s.rho);
    ComplexMatrix term = kron_all(factors);
    term *= c.weight;
    if (rho.empty()) rho = std::move(term);
    else rho += term;
  }
  return make_state(std::move(dims), std::move(rho));
}

QuantumState reduce(const QuantumState& state, std::span<const std::size_t> sites) {
  QuantumState out;
  for (std::size_t n : sites) out.dims.push_back(state.dims.at(n));
  out.rho = partial_trace(state.rho, state.dims, sites);
  return out;
}

double purity(const QuantumState& state) {
  return trace_of_product(state.rho, state.rho).real();
}

std::vector<cplx> pure_vector(const QuantumState& state) {
  const HermitianEigen e = eig_hermitian(state.rho);
  if (e.values.front() < 1.0 - kPurityTol)
    fail(ErrorKind::purity, "pure_vector: state is mixed (largest eigenvalue " +
                                std::to_string(e.values.front()) + ")");
  const std::size_t n = e.values.size();
  std::vector<cplx> v(n);
  std::size_t best = 0;
  for (std::size_t r = 0; r < n; ++r) {
    v[r] = e.vectors(r, 0);
    if (std::abs(v[r]) > std::abs(v[best])) best = r;
  }
  const cplx phase = std::abs(v[best]) > 0 ? std::conj(v[best]) / std::abs(v[best]) : 1.0;
  for (auto& z : v) z *= phase;
  return v;
}

SchmidtForm schmidt(std::span<const cplx> psi, std::size_t d1, std::size_t d2) {
  if (psi.size() != d1 * d2) fail(ErrorKind::shape, "schmidt: vector size does not match d1*d2");
  Eigen::MatrixXcd c(static_cast<Eigen::Index>(d1), static_cast<Eigen::Index>(d2));
  for (std::size_t a = 0; a < d1; ++a)
    for (std::size_t b = 0; b < d2; ++b)
      c(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = psi[a * d2 + b];
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(c, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double cutoff = 1e-12 * std::max(1.0, sv.size() ? sv(0) : 0.0);
  SchmidtForm out;
  for (Eigen::Index j = 0; j < sv.size(); ++j) {
    if (sv(j) <= cutoff) continue;
    out.coefficients.push_back(sv(j));
    std::vector<cplx> l(d1), r(d2);
    for (std::size_t a = 0; a < d1; ++a) l[a] = svd.matrixU()(static_cast<Eigen::Index>(a), j);
    // psi = sum_j xi_j u_j (x) conj(v_j)
    for (std::size_t b = 0; b < d2; ++b)
      r[b] = std::conj(svd.matrixV()(static_cast<Eigen::Index>(b), j));
    out.left_basis.push_back(std::move(l));
    out.right_basis.push_back(std::move(r));
  }
  return out;
}

SchmidtForm schmidt(const QuantumState& pure_state) {
  if (pure_state.site_count() != 2) fail(ErrorKind::argument, "schmidt: state must be bipartite");
  if (purity(pure_state) < 1.0 - kPurityTol)
    fail(ErrorKind::purity, "schmidt: state is not pure");
  const auto psi = pure_vector(pure_state);
  return schmidt(psi, pure_state.dims[0], pure_state.dims[1]);
}

std::vector<std::pair<double, std::vector<cplx>>> spectral_decomposition(
    const QuantumState& state, double cutoff) {
  const HermitianEigen e = eig_hermitian(state.rho);
  std::vector<std::pair<double, std::vector<cplx>>> out;
  const std::size_t n = e.values.size();
  for (std::size_t k = 0; k < n; ++k) {
    if (e.values[k] <= cutoff) continue;
    std::vector<cplx> v(n);
    for (std::size_t r = 0; r < n; ++r) v[r] = e.vectors(r, k);
    out.emplace_back(e.values[k], std::move(v));
  }
  return out;
}

}  // namespace lqhv
