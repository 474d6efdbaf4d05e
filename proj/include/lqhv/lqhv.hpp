#pragma once

// Signed-measure models of finite scenarios: the LP for gamma, its dual
// functional, explicit measures from source operators, and a measurement
// search that lower-bounds Upsilon.

#include <cstdint>
#include <span>
#include <vector>

#include "lqhv/scenarios.hpp"
#include "lqhv/source_ops.hpp"

namespace lqhv {

inline constexpr std::size_t kLpVariableCap = 1'000'000;
inline constexpr double kLhvTol = 1e-7;
inline constexpr double kNullMarginal = 1e-14;

// Real measure on prod_n Lambda_n^{S_n}. Cells are flattened row-major over
// slots (site-major, setting-minor), slot radix K_n.
struct SignedMeasure {
  std::vector<std::size_t> settings;
  std::vector<std::size_t> outcome_sizes;
  std::vector<double> weights;

  double total_mass() const;
  double total_variation() const;
  double negative_mass() const;
};

// Marginal distribution on one setting tuple, indexed by outcome tuple.
std::vector<double> marginal(const SignedMeasure& mu, std::span<const std::size_t> setting_tuple);
// Largest |marginal - quantum probability| over all setting/outcome tuples.
double max_marginal_deviation(const SignedMeasure& mu, const Scenario& sc);

struct GammaResult {
  double gamma = 0;
  SignedMeasure optimal_measure;
  BellFunctional dual_functional;  // normalized to B_abs = 1
  bool lhv = false;
  std::size_t iterations = 0;
};

GammaResult compute_gamma(const Scenario& sc);
BellFunctional extract_optimal_functional(const GammaResult& g);

// mu(omega) = tr[T (x)_slots M_n^{(s)}(omega_{n,s})]
SignedMeasure measure_from_source_operator(const SourceOperator& t, const PovmFamily& povms,
                                           const OutcomeSpace& outcomes);

// Measure assembled from tau^{+-} = |T| +- T with conditionals on site 0,
// which must carry one slot in T.
SignedMeasure covering_split_measure(const SourceOperator& t, const PovmFamily& povms,
                                     const OutcomeSpace& outcomes);

struct UpsilonEstimate {
  double best_gamma = 1;
  PovmFamily best_povms;
  std::size_t evaluations = 0;
};

// Rank-1 projective families (qubits via Bloch angles, qutrits via
// exp(iH) with Gell-Mann generators); grid sampling then Nelder-Mead.
UpsilonEstimate estimate_upsilon(const QuantumState& state, std::span<const std::size_t> settings,
                                 std::span<const std::size_t> outcome_sizes,
                                 std::size_t search_budget, std::uint64_t seed);

// Measurement family from a flat parameter vector, as used by the search.
PovmFamily parametrized_povms(const std::vector<std::size_t>& dims,
                              const std::vector<std::size_t>& settings,
                              const std::vector<std::size_t>& outcome_sizes,
                              std::span<const double> params);
std::size_t parameter_count(const std::vector<std::size_t>& dims,
                            const std::vector<std::size_t>& settings);

}  // namespace lqhv
