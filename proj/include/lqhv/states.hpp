#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "lqhv/tensor_core.hpp"

namespace lqhv {

inline constexpr double kStateTraceTol = 1e-10;
inline constexpr double kStatePositivityTol = 1e-10;
inline constexpr double kPurityTol = 1e-8;

// Density operator on H_1 (x) ... (x) H_N.
struct QuantumState {
  std::vector<std::size_t> dims;
  ComplexMatrix rho;

  std::size_t site_count() const noexcept { return dims.size(); }
  std::size_t total_dim() const;
  FactorShape shape() const { return FactorShape::sites(dims); }
};

// Throws argument errors on a non-Hermitian, non-normalized or non-positive rho.
void validate(const QuantumState& state);

// Builds a state from a density matrix and validates it.
QuantumState make_state(std::vector<std::size_t> dims, ComplexMatrix rho);
// |psi><psi| / <psi|psi>
QuantumState make_pure_state(std::vector<std::size_t> dims, std::span<const cplx> psi);

// (|01> - |10>)/sqrt(2)
QuantumState make_singlet();
// (1/sqrt d) sum_j |j>^{(x) n}
QuantumState make_ghz(std::size_t d, std::size_t n);
// sin(phi)|0...0> + cos(phi)|1...1>
QuantumState make_generalized_ghz(double phi, std::size_t n);

struct ProductComponent {
  double weight;
  std::vector<QuantumState> sites;  // one single-site state per site
};

// sum_i alpha_i rho_1^(i) (x) ... (x) rho_N^(i)
QuantumState make_separable_mixture(std::span<const ProductComponent> components);

// Reduced state on the listed sites (ascending).
QuantumState reduce(const QuantumState& state, std::span<const std::size_t> sites);

double purity(const QuantumState& state);

// State vector of a pure state, normalized, with the global phase fixed so
// that its largest-magnitude entry is real positive. Throws a purity error
// when the state is mixed.
std::vector<cplx> pure_vector(const QuantumState& state);

struct SchmidtForm {
  std::vector<double> coefficients;          // xi_j > 0, descending
  std::vector<std::vector<cplx>> left_basis;  // site 1 vectors
  std::vector<std::vector<cplx>> right_basis; // site 2 vectors
};

SchmidtForm schmidt(std::span<const cplx> psi, std::size_t d1, std::size_t d2);
SchmidtForm schmidt(const QuantumState& pure_state);

// Convex pure decomposition rho = sum_i p_i |psi_i><psi_i| from the spectrum
// (eigenvalues below `cutoff` are dropped).
std::vector<std::pair<double, std::vector<cplx>>> spectral_decomposition(
    const QuantumState& state, double cutoff = 1e-14);

}  // namespace lqhv
