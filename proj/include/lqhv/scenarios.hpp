#pragma once

// Finite-outcome measurement scenarios and Bell functionals.
//
// Tuples are flattened row-major with site 0 most significant: a setting
// tuple (s_1..s_N) has index ((s_1 S_2 + s_2) S_3 + ...), and likewise for
// outcome tuples with the per-site alphabet sizes K_n.

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "lqhv/states.hpp"
#include "lqhv/tensor_core.hpp"

namespace lqhv {

inline constexpr std::size_t kEnumerationCap = 10'000'000;
inline constexpr double kProbabilityClip = 1e-10;

struct OutcomeSpace {
  std::vector<std::vector<double>> values;  // lambda values per site

  std::size_t site_count() const noexcept { return values.size(); }
  std::vector<std::size_t> sizes() const;
};

struct PovmFamily {
  std::vector<std::vector<std::vector<ComplexMatrix>>> effects;  // [site][setting][outcome]

  std::vector<std::size_t> settings() const;
};

struct Scenario {
  QuantumState state;
  PovmFamily povms;
  OutcomeSpace outcomes;

  std::vector<std::size_t> settings() const { return povms.settings(); }
};

struct BellFunctional {
  std::vector<std::size_t> settings;       // S_n
  std::vector<std::size_t> outcome_sizes;  // K_n
  std::vector<double> coeffs;              // [setting tuple][outcome tuple], flattened

  std::size_t setting_tuples() const;
  std::size_t outcome_tuples() const;
  double& at(std::size_t s_index, std::size_t k_index) {
    return coeffs[s_index * outcome_tuples() + k_index];
  }
  double at(std::size_t s_index, std::size_t k_index) const {
    return coeffs[s_index * outcome_tuples() + k_index];
  }
};

struct LhvConstants {
  double b_inf = 0;
  double b_sup = 0;
  double b_abs = 0;
};

// Row-major flat index helpers.
std::size_t flat_index(std::span<const std::size_t> tuple, std::span<const std::size_t> radix);
std::vector<std::size_t> unflatten(std::size_t index, std::span<const std::size_t> radix);
std::size_t product(std::span<const std::size_t> xs);

void validate(const OutcomeSpace& o);
void validate(const PovmFamily& p, std::span<const std::size_t> dims);
void validate(const Scenario& sc);
void validate(const BellFunctional& f);

BellFunctional zero_functional(std::vector<std::size_t> settings,
                               std::vector<std::size_t> outcome_sizes);
// beta_s(k) = c[s] * prod_n lambda_n(k_n); c is indexed by setting tuple.
BellFunctional correlation_functional(const OutcomeSpace& outcomes,
                                      std::vector<std::size_t> settings,
                                      std::span<const double> c);
struct ProbabilityTerm {
  std::vector<std::size_t> setting_tuple;
  std::vector<std::size_t> outcome_tuple;
  double weight;
};
// beta_s(k) = sum of weights of matching terms.
BellFunctional probability_functional(std::vector<std::size_t> settings,
                                      std::vector<std::size_t> outcome_sizes,
                                      std::span<const ProbabilityTerm> terms);
// E00 + E01 + E10 - E11 on outcome values +-1.
BellFunctional chsh_functional();

OutcomeSpace pm_one_outcomes(std::size_t sites);

// {(I + n.sigma)/2, (I - n.sigma)/2} with n from polar angle theta, azimuth phi.
std::vector<ComplexMatrix> qubit_projective(double theta, double phi);

// Projective qubit scenario: angles[site][setting] = (theta, phi); outcome
// values +1, -1.
Scenario qubit_scenario(const QuantumState& state,
                        const std::vector<std::vector<std::array<double, 2>>>& angles);

// Joint probabilities of every outcome tuple for one setting tuple.
std::vector<double> joint_distribution(const Scenario& sc, std::span<const std::size_t> setting_tuple);
// All of them, indexed by setting tuple.
std::vector<std::vector<double>> all_joint_distributions(const Scenario& sc);

// Value of the functional on every deterministic strategy. A strategy
// assigns an outcome index to each (site, setting) slot; strategies are
// flattened row-major over slots ordered site-major, setting-minor.
std::vector<double> strategy_values(const BellFunctional& f);
LhvConstants lhv_constants(const BellFunctional& f);

double quantum_value(const Scenario& sc, const BellFunctional& f);
double violation_ratio(const Scenario& sc, const BellFunctional& f);
bool analog_inequality_check(const Scenario& sc, const BellFunctional& f, double upsilon);

}  // namespace lqhv
