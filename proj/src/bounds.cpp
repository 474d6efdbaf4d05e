#include "lqhv/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lqhv/errors.hpp"
#include "lqhv/norms_positivity.hpp"

namespace lqhv {

namespace {

void check_lengths(std::span<const std::size_t> dims, std::span<const std::size_t> settings) {
  if (dims.empty()) fail(ErrorKind::argument, "bounds: need at least one site");
  if (dims.size() != settings.size()) fail(ErrorKind::shape, "bounds: dims/settings length mismatch");
  for (std::size_t d : dims)
    if (d < 1) fail(ErrorKind::argument, "bounds: dimensions must be >= 1");
  for (std::size_t s : settings)
    if (s < 1) fail(ErrorKind::argument, "bounds: settings must be >= 1");
}

double product_over_non_max(std::span<const std::size_t> xs) {
  double p = 1;
  for (std::size_t x : xs) p *= static_cast<double>(x);
  return p / static_cast<double>(*std::max_element(xs.begin(), xs.end()));
}

// elementary symmetric polynomials e_0..e_m of xs
std::vector<double> elementary_symmetric(const std::vector<double>& xs) {
  std::vector<double> e(xs.size() + 1, 0.0);
  e[0] = 1;
  for (double x : xs)
    for (std::size_t j = xs.size(); j >= 1; --j) e[j] += x * e[j - 1];
  return e;
}

}  // namespace

double xi_n(std::span<const std::size_t> dims) {
  for (std::size_t d : dims)
    if (d < 1) fail(ErrorKind::argument, "xi_n: dimensions must be >= 1");
  const double n = static_cast<double>(dims.size());
  return 1 + std::pow(2.0, n - 1) * (product_over_non_max(dims) - 1);
}

double theta_n(std::span<const std::size_t> settings) {
  const std::size_t n = settings.size();
  if (n < 2) fail(ErrorKind::argument, "theta_n: need N >= 2");
  for (std::size_t s : settings)
    if (s < 1) fail(ErrorKind::argument, "theta_n: settings must be >= 1");
  double best = std::numeric_limits<double>::infinity();
  // an (N-1)-subset is the complement of one dropped site
  for (std::size_t drop = 0; drop < n; ++drop) {
    std::vector<double> sub;
    for (std::size_t m = 0; m < n; ++m)
      if (m != drop) sub.push_back(static_cast<double>(settings[m]));
    const auto e = elementary_symmetric(sub);
    double sum = 0;
    for (std::size_t k = 0; k + 2 <= n; ++k)
      sum += (k % 2 ? -1.0 : 1.0) * std::pow(2.0, static_cast<double>(n - 1 - k)) * e[n - 1 - k];
    best = std::min(best, sum);
  }
  return ((n - 1) % 2 ? -1.0 : 1.0) + best;
}

BoundReport theorem4_bound(std::span<const std::size_t> dims, std::span<const std::size_t> settings) {
  check_lengths(dims, settings);
  BoundReport r;
  r.dims.assign(dims.begin(), dims.end());
  r.settings.assign(settings.begin(), settings.end());
  if (dims.size() == 1) {
    // a single site always has an LHV description
    r.final_upper = 1;
    return r;
  }
  r.xi_N = xi_n(dims);
  r.theta_N = theta_n(settings);
  r.theorem4_min = std::min(r.xi_N, r.theta_N);
  const double nn = static_cast<double>(dims.size());
  r.theorem4_relaxed =
      1 + std::pow(2.0, nn - 1) *
              (std::min(product_over_non_max(dims), product_over_non_max(settings)) - 1);
  r.final_upper = r.theorem4_min;
  return r;
}

namespace {

constexpr double kNamedTol = 1e-9;

// Closed forms for pure states locally equivalent to known families.
void named_state_bounds(const QuantumState& rho, std::span<const std::size_t> settings,
                        std::vector<LabeledValue>& out) {
  if (1 - purity(rho) > kNamedTol) return;
  const std::size_t n = rho.site_count();
  const auto psi = pure_vector(rho);

  if (n == 2 && rho.dims[0] == 2 && rho.dims[1] == 2 &&
      std::min(settings[0], settings[1]) <= 2) {
    const auto sf = schmidt(rho);
    if (sf.coefficients.size() == 2 &&
        std::abs(sf.coefficients[0] - std::sqrt(0.5)) < kNamedTol &&
        std::abs(sf.coefficients[1] - std::sqrt(0.5)) < kNamedTol)
      out.push_back({"singlet_class_Sx2", std::sqrt(3.0)});
  }

  const std::size_t d = rho.dims[0];
  if (n < 2 || d < 2) return;
  for (std::size_t dn : rho.dims)
    if (dn != d) return;
  // support only on |j...j>
  std::size_t stride = 0;
  for (std::size_t m = 0, p = 1; m < n; ++m, p *= d) stride += p;
  std::vector<double> amp(d);
  for (std::size_t i = 0; i < psi.size(); ++i) {
    if (i % stride == 0) amp[i / stride] = std::abs(psi[i]);
    else if (std::abs(psi[i]) > kNamedTol) return;
  }
  const double scale = std::pow(2.0, static_cast<double>(n - 1));
  bool balanced = true;
  for (double a : amp) balanced = balanced && std::abs(a - 1 / std::sqrt(double(d))) < kNamedTol;
  if (balanced) out.push_back({"ghz", 1 + scale * static_cast<double>(d - 1)});
  if (d == 2) out.push_back({"generalized_ghz", 1 + scale * 2 * amp[0] * amp[1]});
}

}  // namespace

BoundReport state_bound(const QuantumState& rho, std::span<const std::size_t> settings,
                        std::size_t restarts, std::uint64_t seed) {
  validate(rho);
  BoundReport r = theorem4_bound(rho.dims, settings);
  const std::size_t n = rho.site_count();
  if (n < 2) return r;
  double best = r.theorem4_min;

  for (std::size_t site = 0; site < n; ++site) {
    std::vector<std::size_t> mult(settings.begin(), settings.end());
    mult[site] = 1;
    auto record = [&](BuilderTag tag, const SourceOperator& t) {
      const CoveringBracket b = covering_bracket(t.op, t.shape, restarts, seed);
      r.source_norm_bounds.push_back({tag, site, b.upper, b.exact});
      best = std::min(best, b.upper);
    };
    const std::string where = " (undilated site " + std::to_string(site) + ")";
    try {
      record(BuilderTag::tau, build_tau(rho, mult));
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::size) throw;
      r.skipped.push_back(std::string("tau") + where);
    }
    try {
      // move the undilated site to the front
      std::vector<std::size_t> perm{site}, dims{rho.dims[site]}, m2{1};
      for (std::size_t k = 0; k < n; ++k)
        if (k != site) {
          perm.push_back(k);
          dims.push_back(rho.dims[k]);
          m2.push_back(settings[k]);
        }
      const QuantumState moved = make_state(dims, permute_slots(rho.rho, rho.dims, perm));
      record(BuilderTag::tau_tilde, build_tau_tilde(moved, m2));
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::size) throw;
      r.skipped.push_back(std::string("tau_tilde") + where);
    }
  }

  named_state_bounds(rho, settings, r.state_specific);
  for (const auto& v : r.state_specific) best = std::min(best, v.value);
  r.final_upper = best;
  return r;
}

}  // namespace lqhv
