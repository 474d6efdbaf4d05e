#pragma once

// Source operators: operators on H_1^{(x)S_1} (x) ... (x) H_N^{(x)S_N} whose
// single-slot expectations reproduce those of a state rho.

#include <cstdint>
#include <span>
#include <vector>

#include "lqhv/states.hpp"
#include "lqhv/tensor_core.hpp"

namespace lqhv {

enum class BuilderTag { tau, tau_tilde, singlet_special, separable_positive, custom };

const char* to_string(BuilderTag tag) noexcept;

struct SourceOperator {
  FactorShape shape;
  ComplexMatrix op;
  QuantumState origin;
  BuilderTag tag = BuilderTag::custom;
};

// Basic shape/trace/hermiticity checks (not the defining relation).
void validate(const SourceOperator& t);

// Symmetrized dilation of a one-site operator:
// sum_k sigma^{(x)k} (x) a (x) sigma^{(x)(S-1-k)}.
ComplexMatrix symmetrize(const ComplexMatrix& a, const ComplexMatrix& sigma, std::size_t s);

// The S-fold block W_{j j1} for basis vectors b_j, b_j1 (j != j1); its
// single-slot marginals all equal |b_j><b_j1|. With b_j == b_j1 pass
// `same = true` to get (|b_j><b_j|)^{(x)S}.
ComplexMatrix w_block(std::span<const cplx> bj, std::span<const cplx> bj1, std::size_t s,
                      bool same = false);

// tau source operator by inclusion-exclusion over sites; sigma defaults to I/d_n.
SourceOperator build_tau(const QuantumState& rho, std::span<const std::size_t> settings,
                         const std::vector<ComplexMatrix>& sigma = {});

// tau-tilde source operator; site 0 must have one setting.
SourceOperator build_tau_tilde(const QuantumState& rho, std::span<const std::size_t> settings);

// The 8x8 1x2-setting operator for the singlet.
SourceOperator build_singlet_special();

// sum_i alpha_i (rho_1^(i))^{(x)S_1} (x) ... (x) (rho_N^(i))^{(x)S_N}
SourceOperator build_separable_positive(std::span<const ProductComponent> components,
                                        std::span<const std::size_t> settings);

// Max |tr[T (X_1 at (1,k_1), ..., X_N at (N,k_N))] - tr[rho X_1 (x) ... (x) X_N]|
// over `trials` random unit-norm Hermitian tuples and every slot choice k.
double verify_defining_relation(const SourceOperator& t, std::size_t trials = 20,
                                std::uint64_t seed = 0);

// Keeps the first L_n setting slots of each site.
SourceOperator reduce_settings(const SourceOperator& t, std::span<const std::size_t> new_mult);

}  // namespace lqhv
