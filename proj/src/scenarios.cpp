#include "lqhv/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "lqhv/errors.hpp"

namespace lqhv {

std::vector<std::size_t> OutcomeSpace::sizes() const {
  std::vector<std::size_t> k;
  for (const auto& v : values) k.push_back(v.size());
  return k;
}

std::vector<std::size_t> PovmFamily::settings() const {
  std::vector<std::size_t> s;
  for (const auto& site : effects) s.push_back(site.size());
  return s;
}

std::size_t BellFunctional::setting_tuples() const { return product(settings); }
std::size_t BellFunctional::outcome_tuples() const { return product(outcome_sizes); }

std::size_t product(std::span<const std::size_t> xs) {
  std::size_t p = 1;
  for (std::size_t x : xs) p *= x;
  return p;
}

std::size_t flat_index(std::span<const std::size_t> tuple, std::span<const std::size_t> radix) {
  std::size_t idx = 0;
  for (std::size_t n = 0; n < radix.size(); ++n) idx = idx * radix[n] + tuple[n];
  return idx;
}

std::vector<std::size_t> unflatten(std::size_t index, std::span<const std::size_t> radix) {
  std::vector<std::size_t> t(radix.size());
  for (std::size_t n = radix.size(); n-- > 0;) {
    t[n] = index % radix[n];
    index /= radix[n];
  }
  return t;
}

void validate(const OutcomeSpace& o) {
  if (o.values.empty()) fail(ErrorKind::argument, "OutcomeSpace: no sites");
  for (const auto& v : o.values) {
    if (v.empty()) fail(ErrorKind::argument, "OutcomeSpace: empty alphabet");
    for (std::size_t a = 0; a < v.size(); ++a)
      for (std::size_t b = a + 1; b < v.size(); ++b)
        if (v[a] == v[b]) fail(ErrorKind::argument, "OutcomeSpace: duplicate outcome label");
  }
}

void validate(const PovmFamily& p, std::span<const std::size_t> dims) {
  if (p.effects.size() != dims.size())
    fail(ErrorKind::shape, "PovmFamily: site count differs from the state");
  for (std::size_t n = 0; n < dims.size(); ++n) {
    const std::size_t d = dims[n];
    if (p.effects[n].empty()) fail(ErrorKind::argument, "PovmFamily: site without settings");
    const std::size_t k = p.effects[n][0].size();
    for (const auto& povm : p.effects[n]) {
      if (povm.size() != k || k == 0)
        fail(ErrorKind::shape, "PovmFamily: outcome counts differ between settings of a site");
      ComplexMatrix sum(d, d);
      for (const auto& e : povm) {
        if (e.rows() != d || e.cols() != d) fail(ErrorKind::shape, "PovmFamily: effect size");
        if (!e.is_hermitian()) fail(ErrorKind::argument, "PovmFamily: effect not Hermitian");
        if (eigenvalues_hermitian(e).back() < -1e-10)
          fail(ErrorKind::argument, "PovmFamily: effect not positive semidefinite");
        sum += e;
      }
      if (max_abs_diff(sum, ComplexMatrix::identity(d)) > 1e-10)
        fail(ErrorKind::argument, "PovmFamily: effects do not sum to the identity");
    }
  }
}

void validate(const Scenario& sc) {
  validate(sc.state);
  validate(sc.outcomes);
  validate(sc.povms, sc.state.dims);
  if (sc.outcomes.site_count() != sc.state.site_count())
    fail(ErrorKind::shape, "Scenario: outcome alphabets differ in site count");
  for (std::size_t n = 0; n < sc.state.site_count(); ++n)
    if (sc.povms.effects[n][0].size() != sc.outcomes.values[n].size())
      fail(ErrorKind::shape, "Scenario: POVM outcome count differs from the alphabet size");
}

void validate(const BellFunctional& f) {
  if (f.settings.size() != f.outcome_sizes.size() || f.settings.empty())
    fail(ErrorKind::shape, "BellFunctional: settings and outcome sizes differ in length");
  for (std::size_t s : f.settings)
    if (s < 1) fail(ErrorKind::argument, "BellFunctional: settings must be >= 1");
  for (std::size_t k : f.outcome_sizes)
    if (k < 1) fail(ErrorKind::argument, "BellFunctional: outcome sizes must be >= 1");
  if (f.coeffs.size() != f.setting_tuples() * f.outcome_tuples())
    fail(ErrorKind::shape, "BellFunctional: coefficient count does not match the shape");
  for (double c : f.coeffs)
    if (!std::isfinite(c)) fail(ErrorKind::argument, "BellFunctional: non-finite coefficient");
}

BellFunctional zero_functional(std::vector<std::size_t> settings,
                               std::vector<std::size_t> outcome_sizes) {
  BellFunctional f{std::move(settings), std::move(outcome_sizes), {}};
  f.coeffs.assign(product(f.settings) * product(f.outcome_sizes), 0.0);
  validate(f);
  return f;
}

BellFunctional correlation_functional(const OutcomeSpace& outcomes,
                                      std::vector<std::size_t> settings,
                                      std::span<const double> c) {
  BellFunctional f = zero_functional(std::move(settings), outcomes.sizes());
  if (c.size() != f.setting_tuples())
    fail(ErrorKind::shape, "correlation_functional: one coefficient per setting tuple");
  for (std::size_t ks = 0; ks < f.outcome_tuples(); ++ks) {
    const auto k = unflatten(ks, f.outcome_sizes);
    double prod = 1;
    for (std::size_t n = 0; n < k.size(); ++n) prod *= outcomes.values[n][k[n]];
    for (std::size_t s = 0; s < f.setting_tuples(); ++s) f.at(s, ks) = c[s] * prod;
  }
  return f;
}

BellFunctional probability_functional(std::vector<std::size_t> settings,
                                      std::vector<std::size_t> outcome_sizes,
                                      std::span<const ProbabilityTerm> terms) {
  BellFunctional f = zero_functional(std::move(settings), std::move(outcome_sizes));
  for (const auto& t : terms) {
    if (t.setting_tuple.size() != f.settings.size() || t.outcome_tuple.size() != f.settings.size())
      fail(ErrorKind::shape, "probability_functional: tuple length");
    for (std::size_t n = 0; n < f.settings.size(); ++n)
      if (t.setting_tuple[n] >= f.settings[n] || t.outcome_tuple[n] >= f.outcome_sizes[n])
        fail(ErrorKind::argument, "probability_functional: index out of range");
    f.at(flat_index(t.setting_tuple, f.settings), flat_index(t.outcome_tuple, f.outcome_sizes)) +=
        t.weight;
  }
  return f;
}

OutcomeSpace pm_one_outcomes(std::size_t sites) {
  return OutcomeSpace{std::vector<std::vector<double>>(sites, {1.0, -1.0})};
}

BellFunctional chsh_functional() {
  const double c[] = {1, 1, 1, -1};
  return correlation_functional(pm_one_outcomes(2), {2, 2}, c);
}

std::vector<ComplexMatrix> qubit_projective(double theta, double phi) {
  const double nx = std::sin(theta) * std::cos(phi);
  const double ny = std::sin(theta) * std::sin(phi);
  const double nz = std::cos(theta);
  const ComplexMatrix ns{{nz, cplx(nx, -ny)}, {cplx(nx, ny), -nz}};
  const ComplexMatrix id = ComplexMatrix::identity(2);
  return {0.5 * (id + ns), 0.5 * (id - ns)};
}

Scenario qubit_scenario(const QuantumState& state,
                        const std::vector<std::vector<std::array<double, 2>>>& angles) {
  Scenario sc;
  sc.state = state;
  for (const auto& site : angles) {
    std::vector<std::vector<ComplexMatrix>> povms;
    for (const auto& a : site) povms.push_back(qubit_projective(a[0], a[1]));
    sc.povms.effects.push_back(std::move(povms));
  }
  sc.outcomes = pm_one_outcomes(angles.size());
  validate(sc);
  return sc;
}

std::vector<double> joint_distribution(const Scenario& sc,
                                       std::span<const std::size_t> setting_tuple) {
  const auto settings = sc.settings();
  if (setting_tuple.size() != settings.size())
    fail(ErrorKind::shape, "joint_distribution: setting tuple length");
  std::vector<std::vector<ComplexMatrix>> eff;
  for (std::size_t n = 0; n < settings.size(); ++n) {
    if (setting_tuple[n] >= settings[n])
      fail(ErrorKind::argument, "joint_distribution: setting index out of range");
    eff.push_back(sc.povms.effects[n][setting_tuple[n]]);
  }
  const auto raw = contract_slots(sc.state.rho, sc.state.dims, eff);
  std::vector<double> p(raw.size());
  double total = 0;
  bool clipped = false;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    double x = raw[i].real();
    if (x < -kProbabilityClip)
      fail(ErrorKind::internal, "joint_distribution: negative probability " + std::to_string(x));
    if (x < 0) {
      x = 0;
      clipped = true;
    }
    p[i] = x;
    total += x;
  }
  if (clipped && total > 0)
    for (auto& x : p) x /= total;
  return p;
}

std::vector<std::vector<double>> all_joint_distributions(const Scenario& sc) {
  const auto settings = sc.settings();
  std::vector<std::vector<double>> out;
  for (std::size_t s = 0; s < product(settings); ++s)
    out.push_back(joint_distribution(sc, unflatten(s, settings)));
  return out;
}

std::vector<double> strategy_values(const BellFunctional& f) {
  validate(f);
  const std::size_t n_sites = f.settings.size();
  // slot radix: K_n repeated S_n times
  std::vector<std::size_t> radix;
  std::vector<std::size_t> slot_base(n_sites);
  for (std::size_t n = 0; n < n_sites; ++n) {
    slot_base[n] = radix.size();
    for (std::size_t s = 0; s < f.settings[n]; ++s) radix.push_back(f.outcome_sizes[n]);
  }
  double count = 1;
  for (std::size_t r : radix) count *= static_cast<double>(r);
  if (count > static_cast<double>(kEnumerationCap))
    fail(ErrorKind::size, "strategy enumeration exceeds the cap of 1e7 strategies");
  const std::size_t total = product(radix);
  const std::size_t n_s = f.setting_tuples();
  std::vector<std::vector<std::size_t>> s_tuples;
  for (std::size_t s = 0; s < n_s; ++s) s_tuples.push_back(unflatten(s, f.settings));

  std::vector<double> out(total);
  std::vector<std::size_t> omega(radix.size(), 0);
  std::vector<std::size_t> k(n_sites);
  for (std::size_t w = 0; w < total; ++w) {
    double v = 0;
    for (std::size_t s = 0; s < n_s; ++s) {
      for (std::size_t n = 0; n < n_sites; ++n) k[n] = omega[slot_base[n] + s_tuples[s][n]];
      v += f.at(s, flat_index(k, f.outcome_sizes));
    }
    out[w] = v;
    for (std::size_t j = radix.size(); j-- > 0;) {
      if (++omega[j] < radix[j]) break;
      omega[j] = 0;
    }
  }
  return out;
}

LhvConstants lhv_constants(const BellFunctional& f) {
  const auto vals = strategy_values(f);
  LhvConstants c;
  c.b_inf = *std::min_element(vals.begin(), vals.end());
  c.b_sup = *std::max_element(vals.begin(), vals.end());
  c.b_abs = std::max(std::abs(c.b_inf), std::abs(c.b_sup));
  return c;
}

double quantum_value(const Scenario& sc, const BellFunctional& f) {
  validate(f);
  if (sc.settings() != f.settings || sc.outcomes.sizes() != f.outcome_sizes)
    fail(ErrorKind::shape, "quantum_value: functional shape differs from the scenario");
  const auto dists = all_joint_distributions(sc);
  double v = 0;
  for (std::size_t s = 0; s < dists.size(); ++s)
    for (std::size_t k = 0; k < dists[s].size(); ++k) v += f.at(s, k) * dists[s][k];
  return v;
}

double violation_ratio(const Scenario& sc, const BellFunctional& f) {
  const LhvConstants c = lhv_constants(f);
  if (c.b_abs == 0) fail(ErrorKind::trivial_functional, "violation_ratio: B_abs = 0");
  return std::abs(quantum_value(sc, f)) / c.b_abs;
}

bool analog_inequality_check(const Scenario& sc, const BellFunctional& f, double upsilon) {
  if (upsilon < 1) fail(ErrorKind::argument, "analog_inequality_check: upsilon must be >= 1");
  const LhvConstants c = lhv_constants(f);
  const double q = quantum_value(sc, f);
  const double slack = (upsilon - 1) / 2 * (c.b_sup - c.b_inf);
  const double tol = 1e-9 * std::max(1.0, c.b_abs);
  return c.b_inf - slack - tol <= q && q <= c.b_sup + slack + tol;
}

}  // namespace lqhv
