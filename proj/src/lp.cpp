#include "lqhv/lp.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "lqhv/errors.hpp"

namespace lqhv {

const char* to_string(LpStatus s) noexcept {
  switch (s) {
    case LpStatus::optimal: return "optimal";
    case LpStatus::infeasible: return "infeasible";
    case LpStatus::unbounded: return "unbounded";
    case LpStatus::iteration_limit: return "iteration_limit";
  }
  return "iteration_limit";
}

namespace {

constexpr double kPivotTol = 1e-9;
constexpr double kCostTol = 1e-11;
constexpr std::size_t kStallBeforeBland = 50;

// Rows 0..m-1 are constraints, row m the phase-2 cost row, row m+1 the
// phase-1 cost row. Columns 0..n-1 original, n..n+m-1 artificial, last rhs.
class Tableau {
 public:
  Tableau(std::size_t m, std::size_t n) : m_(m), n_(n), w_(n + m + 1), t_((m + 2) * w_, 0.0) {}

  double& at(std::size_t r, std::size_t c) { return t_[r * w_ + c]; }
  double at(std::size_t r, std::size_t c) const { return t_[r * w_ + c]; }
  double& rhs(std::size_t r) { return at(r, w_ - 1); }
  std::size_t m() const { return m_; }
  std::size_t n() const { return n_; }

  void pivot(std::size_t r, std::size_t col) {
    const double p = at(r, col);
    double* row = &t_[r * w_];
    for (std::size_t c = 0; c < w_; ++c) row[c] /= p;
    row[col] = 1.0;
    for (std::size_t i = 0; i < m_ + 2; ++i) {
      if (i == r) continue;
      double* other = &t_[i * w_];
      const double f = other[col];
      if (f == 0.0) continue;
      for (std::size_t c = 0; c < w_; ++c) other[c] -= f * row[c];
      other[col] = 0.0;
    }
  }

 private:
  std::size_t m_, n_, w_;
  std::vector<double> t_;
};

// Runs simplex on cost row `cost_row` over columns [0, allowed).
LpStatus run_phase(Tableau& t, std::vector<std::size_t>& basis, std::size_t cost_row,
               std::size_t allowed, std::size_t max_iter, std::size_t& iters) {
  const std::size_t m = t.m();
  bool bland = false;
  std::size_t stall = 0;
  double last_obj = t.rhs(cost_row);
  while (true) {
    if (iters >= max_iter) return LpStatus::iteration_limit;
    std::size_t enter = allowed;
    double best = -kCostTol;
    for (std::size_t j = 0; j < allowed; ++j) {
      const double d = t.at(cost_row, j);
      if (d < best) {
        enter = j;
        if (bland) break;
        best = d;
      }
    }
    if (enter == allowed) return LpStatus::optimal;

    std::size_t leave = m;
    double ratio = 0;
    for (std::size_t i = 0; i < m; ++i) {
      const double a = t.at(i, enter);
      if (a <= kPivotTol) continue;
      const double r = std::max(0.0, t.rhs(i)) / a;
      if (leave == m || r < ratio - 1e-14 ||
          (r <= ratio + 1e-14 && basis[i] < basis[leave])) {
        leave = i;
        ratio = r;
      }
    }
    if (leave == m) return LpStatus::unbounded;
    t.pivot(leave, enter);
    basis[leave] = enter;
    ++iters;

    const double obj = t.rhs(cost_row);
    if (std::abs(obj - last_obj) <= 1e-14 * std::max(1.0, std::abs(obj))) {
      if (++stall >= kStallBeforeBland) bland = true;
    } else {
      stall = 0;
    }
    last_obj = obj;
  }
}

}  // namespace

LpResult solve_standard_lp(const std::vector<double>& a, std::size_t m, std::size_t n,
                           const std::vector<double>& b, const std::vector<double>& c) {
  if (a.size() != m * n || b.size() != m || c.size() != n)
    fail(ErrorKind::shape, "solve_standard_lp: inconsistent sizes");
  if (static_cast<double>(m + 2) * static_cast<double>(n + m + 1) > kTableauCap)
    fail(ErrorKind::size, "solve_standard_lp: tableau exceeds the dense size cap");

  Tableau t(m, n);
  std::vector<double> sign(m, 1.0);
  std::vector<std::size_t> basis(m);
  double bnorm = 0;
  for (std::size_t i = 0; i < m; ++i) {
    if (b[i] < 0) sign[i] = -1.0;
    for (std::size_t j = 0; j < n; ++j) t.at(i, j) = sign[i] * a[i * n + j];
    t.at(i, n + i) = 1.0;
    t.rhs(i) = sign[i] * b[i];
    basis[i] = n + i;
    bnorm = std::max(bnorm, std::abs(b[i]));
  }
  for (std::size_t j = 0; j < n; ++j) {
    t.at(m, j) = c[j];
    double s = 0;
    for (std::size_t i = 0; i < m; ++i) s += t.at(i, j);
    t.at(m + 1, j) = -s;
  }
  double bsum = 0;
  for (std::size_t i = 0; i < m; ++i) bsum += t.rhs(i);
  t.rhs(m + 1) = -bsum;

  LpResult res;
  const std::size_t max_iter = 200 * (m + n) + 10000;
  res.status = run_phase(t, basis, m + 1, n + m, max_iter, res.iterations);
  if (res.status != LpStatus::optimal) return res;
  if (-t.rhs(m + 1) > 1e-9 * std::max(1.0, bnorm)) {
    res.status = LpStatus::infeasible;
    return res;
  }
  // Drive remaining artificials out; rows where that is impossible are redundant.
  for (std::size_t i = 0; i < m; ++i) {
    if (basis[i] < n) continue;
    std::size_t col = n;
    double best = kPivotTol;
    for (std::size_t j = 0; j < n; ++j)
      if (std::abs(t.at(i, j)) > best) {
        best = std::abs(t.at(i, j));
        col = j;
      }
    if (col == n) continue;
    t.pivot(i, col);
    basis[i] = col;
  }
  res.status = run_phase(t, basis, m, n, max_iter, res.iterations);
  if (res.status != LpStatus::optimal) return res;

  res.x.assign(n, 0.0);
  for (std::size_t i = 0; i < m; ++i)
    if (basis[i] < n) res.x[basis[i]] = std::max(0.0, t.rhs(i));
  res.objective = 0;
  for (std::size_t j = 0; j < n; ++j) res.objective += c[j] * res.x[j];
  res.y.resize(m);
  for (std::size_t i = 0; i < m; ++i) res.y[i] = -t.at(m, n + i) * sign[i];
  return res;
}

}  // namespace lqhv
