#pragma once

// Tensor positivity probing and covering-norm brackets. All routines work on
// the slot structure of a FactorShape: every slot is one tensor factor.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "lqhv/tensor_core.hpp"

namespace lqhv {

inline constexpr std::size_t kDefaultRestarts = 64;
inline constexpr double kPositiveTol = 1e-10;
inline constexpr double kRefuteTol = 1e-8;

enum class PositivityStatus { not_tensor_positive, certified_positive, undetermined };

const char* to_string(PositivityStatus s) noexcept;

struct PositivityVerdict {
  PositivityStatus status = PositivityStatus::undetermined;
  // Unit vectors, one per slot, attaining `witness_value` when refuted.
  std::optional<std::vector<std::vector<cplx>>> witness;
  double witness_value = 0;
  // Smallest product-vector expectation found by the search.
  double min_found = 0;
};

struct CoveringBracket {
  double lower = 0;
  double upper = 0;
  bool exact = false;  // upper is tr[W] by positivity, so lower..upper pins the norm
};

// <psi_1 (x) ... (x) psi_m| z |psi_1 (x) ... (x) psi_m>
double product_expectation(const ComplexMatrix& z, std::span<const std::size_t> slot_dims,
                           const std::vector<std::vector<cplx>>& vecs);

PositivityVerdict probe_tensor_positivity(const ComplexMatrix& z, const FactorShape& shape,
                                          std::size_t restarts = kDefaultRestarts,
                                          std::uint64_t seed = 0);

CoveringBracket covering_bracket(const ComplexMatrix& w, const FactorShape& shape,
                                 std::size_t restarts = kDefaultRestarts,
                                 std::uint64_t seed = 0);

// lower(W_red) <= upper(W) within 1e-8, with W_red the partial trace onto the
// slots in `keep`.
bool reduced_monotonicity_check(const ComplexMatrix& w, const FactorShape& shape,
                                std::span<const std::size_t> keep,
                                std::size_t restarts = kDefaultRestarts, std::uint64_t seed = 0);

}  // namespace lqhv
