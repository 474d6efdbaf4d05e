#include "lqhv/random.hpp"

#include <Eigen/Dense>

#include <cmath>

#include "lqhv/errors.hpp"

namespace lqhv {

cplx random_gaussian_cplx(Rng& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  const double re = g(rng);
  const double im = g(rng);
  return {re, im};
}

std::vector<cplx> random_unit_vector(std::size_t d, Rng& rng) {
  std::vector<cplx> v(d);
  double n2 = 0;
  for (auto& z : v) {
    z = random_gaussian_cplx(rng);
    n2 += std::norm(z);
  }
  for (auto& z : v) z /= std::sqrt(n2);
  return v;
}

ComplexMatrix random_unitary(std::size_t d, Rng& rng) {
  const auto n = static_cast<Eigen::Index>(d);
  Eigen::MatrixXcd g(n, n);
  for (Eigen::Index r = 0; r < n; ++r)
    for (Eigen::Index c = 0; c < n; ++c) g(r, c) = random_gaussian_cplx(rng);
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
  Eigen::MatrixXcd q = qr.householderQ();
  const Eigen::MatrixXcd r = qr.matrixQR();
  for (Eigen::Index c = 0; c < n; ++c) {
    const cplx diag = r(c, c);
    const double a = std::abs(diag);
    if (a > 0) q.col(c) *= diag / a;
  }
  ComplexMatrix u(d, d);
  for (std::size_t r = 0; r < d; ++r)
    for (std::size_t c = 0; c < d; ++c)
      u(r, c) = q(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
  return u;
}

ComplexMatrix random_hermitian_unit(std::size_t d, Rng& rng) {
  ComplexMatrix g(d, d);
  for (auto& z : g.data()) z = random_gaussian_cplx(rng);
  ComplexMatrix h = g.hermitian_part();
  const double n = operator_norm(h);
  if (n > 0) h *= 1.0 / n;
  return h;
}

QuantumState random_pure_state(const std::vector<std::size_t>& dims, Rng& rng) {
  std::size_t total = 1;
  for (std::size_t d : dims) total *= d;
  const auto v = random_unit_vector(total, rng);
  return make_pure_state(dims, v);
}

QuantumState random_mixed_state(const std::vector<std::size_t>& dims, std::size_t rank, Rng& rng) {
  std::size_t total = 1;
  for (std::size_t d : dims) total *= d;
  if (rank < 1) fail(ErrorKind::argument, "random_mixed_state: rank must be >= 1");
  ComplexMatrix g(total, rank);
  for (auto& z : g.data()) z = random_gaussian_cplx(rng);
  ComplexMatrix rho = g * g.adjoint();
  rho *= 1.0 / rho.trace().real();
  rho = rho.hermitian_part();
  return make_state(dims, std::move(rho));
}

std::vector<ProductComponent> random_separable_components(const std::vector<std::size_t>& dims,
                                                          std::size_t terms, Rng& rng) {
  std::uniform_real_distribution<double> u(0.05, 1.0);
  std::vector<double> w(terms);
  double total = 0;
  for (auto& x : w) total += (x = u(rng));
  std::vector<ProductComponent> out;
  for (std::size_t i = 0; i < terms; ++i) {
    ProductComponent c{w[i] / total, {}};
    for (std::size_t d : dims) c.sites.push_back(random_mixed_state({d}, 1 + i % d, rng));
    out.push_back(std::move(c));
  }
  // Absorb rounding so the weights sum to 1 exactly enough for validation.
  double s = 0;
  for (std::size_t i = 0; i + 1 < terms; ++i) s += out[i].weight;
  out.back().weight = 1.0 - s;
  return out;
}

std::vector<ComplexMatrix> random_projective_measurement(std::size_t d, Rng& rng) {
  const ComplexMatrix u = random_unitary(d, rng);
  std::vector<ComplexMatrix> out;
  for (std::size_t k = 0; k < d; ++k) {
    std::vector<cplx> col(d);
    for (std::size_t r = 0; r < d; ++r) col[r] = u(r, k);
    out.push_back(ComplexMatrix::outer(col));
  }
  return out;
}

std::vector<ComplexMatrix> random_povm(std::size_t d, std::size_t k, Rng& rng) {
  if (k == 0) fail(ErrorKind::argument, "random_povm: need at least one outcome");
  std::vector<ComplexMatrix> g;
  ComplexMatrix s(d, d);
  for (std::size_t j = 0; j < k; ++j) {
    ComplexMatrix x(d, d);
    for (auto& v : x.data()) v = random_gaussian_cplx(rng);
    g.push_back(x.adjoint() * x);
    s += g.back();
  }
  const HermitianEigen e = eig_hermitian(s);
  ComplexMatrix inv_sqrt(d, d);
  for (std::size_t i = 0; i < d; ++i) {
    const double f = 1.0 / std::sqrt(e.values[i]);
    for (std::size_t r = 0; r < d; ++r)
      for (std::size_t c = 0; c < d; ++c)
        inv_sqrt(r, c) += f * e.vectors(r, i) * std::conj(e.vectors(c, i));
  }
  for (auto& x : g) x = (inv_sqrt * x * inv_sqrt).hermitian_part();
  return g;
}

}  // namespace lqhv
