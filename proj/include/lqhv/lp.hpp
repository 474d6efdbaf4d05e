#pragma once

// Dense two-phase tableau simplex for  min c.x  s.t.  A x = b, x >= 0.

#include <cstddef>
#include <vector>

namespace lqhv {

inline constexpr std::size_t kTableauCap = 50'000'000;  // entries

enum class LpStatus { optimal, infeasible, unbounded, iteration_limit };

const char* to_string(LpStatus s) noexcept;

struct LpResult {
  LpStatus status = LpStatus::iteration_limit;
  double objective = 0;
  std::vector<double> x;  // primal, size n
  std::vector<double> y;  // equality duals, size m: c - A^T y >= 0 at optimum
  std::size_t iterations = 0;
};

// `a` is row-major m x n. Redundant equality rows are allowed; their duals
// come out of the final basis like any other row.
LpResult solve_standard_lp(const std::vector<double>& a, std::size_t m, std::size_t n,
                           const std::vector<double>& b, const std::vector<double>& c);

}  // namespace lqhv
