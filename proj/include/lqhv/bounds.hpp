#pragma once

// Analytic upper bounds on the maximal Bell violation Upsilon.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "lqhv/source_ops.hpp"
#include "lqhv/states.hpp"

namespace lqhv {

// 1 + 2^{N-1} (prod d / max d - 1)
double xi_n(std::span<const std::size_t> dims);
// (-1)^{N-1} + min over (N-1)-subsets of sum_k (-1)^k 2^{N-1-k} e_{N-1-k}(S restricted to subset)
double theta_n(std::span<const std::size_t> settings);

struct SourceNormEntry {
  BuilderTag tag;
  std::size_t undilated_site;
  double value;  // covering_bracket upper edge
  bool exact;    // covering norm certified equal to the value
};

struct LabeledValue {
  std::string label;
  double value;
};

struct BoundReport {
  std::vector<std::size_t> dims;
  std::vector<std::size_t> settings;
  double xi_N = 1;
  double theta_N = 1;
  double theorem4_min = 1;
  // 1 + 2^{N-1} [min{prod d / max d, prod S / max S} - 1]
  double theorem4_relaxed = 1;
  std::vector<SourceNormEntry> source_norm_bounds;
  std::vector<LabeledValue> state_specific;
  std::vector<std::string> skipped;  // operators over the dimension cap
  double final_upper = 1;
};

BoundReport theorem4_bound(std::span<const std::size_t> dims, std::span<const std::size_t> settings);

// Adds trace norms of the tau / tau-tilde operators for every choice of
// undilated site, and closed forms for recognized state families.
BoundReport state_bound(const QuantumState& rho, std::span<const std::size_t> settings,
                        std::size_t restarts = 8, std::uint64_t seed = 0);

}  // namespace lqhv
