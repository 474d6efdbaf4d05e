#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "lqhv/errors.hpp"
#include "lqhv/lqhv.hpp"
#include "lqhv/norms_positivity.hpp"
#include "lqhv/random.hpp"
#include "test_util.hpp"

using namespace lqhv;
using namespace tu;

namespace {

const double pi = std::numbers::pi;
const double sqrt2 = std::sqrt(2.0);

Scenario chsh_singlet() {
  return qubit_scenario(make_singlet(), {{{0, 0}, {pi / 2, 0}}, {{pi / 4, 0}, {-pi / 4, 0}}});
}

OutcomeSpace index_outcomes(const std::vector<std::size_t>& k) {
  OutcomeSpace o;
  for (std::size_t n : k) {
    o.values.emplace_back();
    for (std::size_t j = 0; j < n; ++j) o.values.back().push_back(static_cast<double>(j));
  }
  return o;
}

// Random POVMs, K outcomes at every site.
Scenario random_scenario(const QuantumState& st, const std::vector<std::size_t>& settings,
                         std::size_t k, Rng& rng) {
  Scenario sc;
  sc.state = st;
  for (std::size_t n = 0; n < st.site_count(); ++n) {
    sc.povms.effects.emplace_back();
    for (std::size_t s = 0; s < settings[n]; ++s)
      sc.povms.effects.back().push_back(random_povm(st.dims[n], k, rng));
  }
  sc.outcomes = index_outcomes(std::vector<std::size_t>(st.site_count(), k));
  return sc;
}

Scenario random_projective_scenario(const QuantumState& st, const std::vector<std::size_t>& settings,
                                    Rng& rng) {
  Scenario sc;
  sc.state = st;
  std::vector<std::size_t> k;
  for (std::size_t n = 0; n < st.site_count(); ++n) {
    sc.povms.effects.emplace_back();
    for (std::size_t s = 0; s < settings[n]; ++s)
      sc.povms.effects.back().push_back(random_projective_measurement(st.dims[n], rng));
    k.push_back(st.dims[n]);
  }
  sc.outcomes = index_outcomes(k);
  return sc;
}

QuantumState random_separable(const std::vector<std::size_t>& dims, Rng& rng) {
  const auto comps = random_separable_components(dims, 3, rng);
  return make_separable_mixture(comps);
}

// Keep settings [0, keep[n]) at each site.
Scenario drop_settings(const Scenario& sc, const std::vector<std::size_t>& keep) {
  Scenario out = sc;
  for (std::size_t n = 0; n < keep.size(); ++n) out.povms.effects[n].resize(keep[n]);
  return out;
}

void check_marginals(const SignedMeasure& mu, const Scenario& sc, double tol) {
  CHECK(max_marginal_deviation(mu, sc) <= tol);
  CHECK(mu.total_mass() == doctest::Approx(1.0).epsilon(1e-9));
}

}  // namespace

TEST_CASE("signed measure bookkeeping") {
  SignedMeasure mu{{1}, {3}, {0.7, 0.5, -0.2}};
  CHECK(mu.total_mass() == doctest::Approx(1.0));
  CHECK(mu.total_variation() == doctest::Approx(1.4));
  CHECK(mu.negative_mass() == doctest::Approx(0.2));
  const std::vector<std::size_t> s{0};
  const auto m = marginal(mu, s);
  CHECK(m[2] == doctest::Approx(-0.2));
}

TEST_CASE("marginal of a two-slot measure by hand") {
  // one site, two settings, two outcomes: cells (w0,w1) with w0 slot 0
  SignedMeasure mu{{2}, {2}, {0.1, 0.2, 0.3, 0.4}};
  const std::vector<std::size_t> s0{0}, s1{1};
  const auto a = marginal(mu, s0), b = marginal(mu, s1);
  CHECK(a[0] == doctest::Approx(0.3));
  CHECK(a[1] == doctest::Approx(0.7));
  CHECK(b[0] == doctest::Approx(0.4));
  CHECK(b[1] == doctest::Approx(0.6));
}

TEST_CASE("CHSH on the singlet: gamma = sqrt 2 and the dual attains it") {
  const Scenario sc = chsh_singlet();
  const GammaResult g = compute_gamma(sc);
  CHECK(g.gamma == doctest::Approx(sqrt2).epsilon(1e-9));
  CHECK_FALSE(g.lhv);
  // primal certificate: the measure reproduces the data with variation gamma
  check_marginals(g.optimal_measure, sc, 1e-8);
  CHECK(g.optimal_measure.total_variation() == doctest::Approx(g.gamma).epsilon(1e-9));
  // dual certificate: CHSH alone already gives ratio sqrt 2
  CHECK(violation_ratio(sc, chsh_functional()) == doctest::Approx(sqrt2).epsilon(1e-9));
  const BellFunctional f = extract_optimal_functional(g);
  CHECK(violation_ratio(sc, f) == doctest::Approx(g.gamma).epsilon(1e-5));
  CHECK(lhv_constants(f).b_abs == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("invariants on random scenarios") {
  Rng rng(3);
  for (int t = 0; t < 12; ++t) {
    const auto st = random_mixed_state({2, 2}, 1 + t % 3, rng);
    const Scenario sc = t % 2 ? random_scenario(st, {2, 2}, 2, rng)
                              : random_projective_scenario(st, {2, 3}, rng);
    const GammaResult g = compute_gamma(sc);
    CHECK(g.gamma >= 1 - 1e-9);
    CHECK(g.lhv == (g.gamma <= 1 + 1e-7));
    check_marginals(g.optimal_measure, sc, 1e-8);
    const auto& mu = g.optimal_measure;
    CHECK(mu.total_variation() == doctest::Approx(1 + 2 * mu.negative_mass()).epsilon(1e-9));
    CHECK(mu.total_variation() == doctest::Approx(g.gamma).epsilon(1e-8));
    const BellFunctional f = extract_optimal_functional(g);
    CHECK(violation_ratio(sc, f) == doctest::Approx(g.gamma).epsilon(1e-5));
    // no functional beats gamma
    BellFunctional r = zero_functional(sc.settings(), sc.outcomes.sizes());
    std::normal_distribution<double> nd;
    for (auto& c : r.coeffs) c = nd(rng);
    CHECK(violation_ratio(sc, r) <= g.gamma + 1e-6);
  }
}

TEST_CASE("separable states admit LHV models") {
  Rng rng(5);
  for (int t = 0; t < 15; ++t) {
    const Scenario sc = random_projective_scenario(random_separable({2, 2}, rng), {2, 2}, rng);
    const GammaResult g = compute_gamma(sc);
    CHECK(g.gamma == doctest::Approx(1.0).epsilon(1e-7));
    CHECK(g.lhv);
    CHECK(violation_ratio(sc, extract_optimal_functional(g)) <= 1 + 1e-6);
  }
}

TEST_CASE("one measured setting at all but one site gives gamma = 1") {
  Rng rng(7);
  for (const std::vector<std::size_t>& s :
       {std::vector<std::size_t>{1, 3}, {4, 1}, {1, 2, 1}, {1, 1, 3}}) {
    const auto st = random_pure_state(std::vector<std::size_t>(s.size(), 2), rng);
    const GammaResult g = compute_gamma(random_projective_scenario(st, s, rng));
    CHECK(g.gamma == doctest::Approx(1.0).epsilon(1e-7));
  }
}

TEST_CASE("dropping settings never increases gamma") {
  Rng rng(9);
  for (int t = 0; t < 6; ++t) {
    const auto st = random_pure_state({2, 2}, rng);
    const Scenario full = random_projective_scenario(st, {3, 3}, rng);
    const double g33 = compute_gamma(full).gamma;
    const double g32 = compute_gamma(drop_settings(full, {3, 2})).gamma;
    const double g22 = compute_gamma(drop_settings(full, {2, 2})).gamma;
    CHECK(g32 <= g33 + 1e-8);
    CHECK(g22 <= g32 + 1e-8);
  }
}

TEST_CASE("gamma is bounded by trace norms of one-site-undilated source operators") {
  Rng rng(13);
  for (int t = 0; t < 8; ++t) {
    const auto st = random_mixed_state({2, 2}, 1 + t % 2, rng);
    const Scenario sc = random_projective_scenario(st, {2, 2}, rng);
    const double g = compute_gamma(sc).gamma;
    const std::vector<std::size_t> mult{1, 2};
    const auto tt = build_tau_tilde(st, mult);
    const auto tau = build_tau(st, mult);
    CHECK(g <= covering_bracket(tt.op, tt.shape, 8, 1).upper + 1e-6);
    CHECK(g <= covering_bracket(tau.op, tau.shape, 8, 1).upper + 1e-6);
  }
  const double g = compute_gamma(chsh_singlet()).gamma;
  CHECK(g <= trace_norm(build_singlet_special().op) + 1e-6);
}

TEST_CASE("oversized LP is refused") {
  Rng rng(1);
  const auto st = random_pure_state({3, 3}, rng);
  // 3^6 * 3^6 cells
  CHECK_THROWS_AS(compute_gamma(random_projective_scenario(st, {6, 6}, rng)), Error);
}

TEST_CASE("source-operator measure: separable T is a probability measure") {
  Rng rng(17);
  for (int t = 0; t < 5; ++t) {
    const auto comps = random_separable_components({2, 3}, 2, rng);
    const std::vector<std::size_t> mult{2, 2};
    const auto tsep = build_separable_positive(comps, mult);
    Scenario sc = random_scenario(make_separable_mixture(comps), mult, 3, rng);
    const auto mu = measure_from_source_operator(tsep, sc.povms, sc.outcomes);
    for (double w : mu.weights) CHECK(w >= -1e-10);
    CHECK(mu.total_variation() == doctest::Approx(1.0).epsilon(1e-9));
    check_marginals(mu, sc, 1e-9);
  }
}

TEST_CASE("source-operator measure: singlet operator with sigma_z / sigma_x") {
  const auto t = build_singlet_special();
  PovmFamily pf;
  pf.effects = {{qubit_projective(0, 0)}, {qubit_projective(0, 0), qubit_projective(pi / 2, 0)}};
  Scenario sc{make_singlet(), pf, pm_one_outcomes(2)};
  const auto mu = measure_from_source_operator(t, pf, sc.outcomes);
  check_marginals(mu, sc, 1e-9);
  CHECK(mu.total_variation() <= std::sqrt(3.0) + 1e-8);
}

TEST_CASE("source-operator measure: marginals over random POVM families") {
  Rng rng(19);
  for (int t = 0; t < 20; ++t) {
    const std::vector<std::size_t> dims = t % 2 ? std::vector<std::size_t>{2, 3}
                                                : std::vector<std::size_t>{2, 2, 2};
    const std::vector<std::size_t> mult = dims.size() == 2 ? std::vector<std::size_t>{2, 2}
                                                           : std::vector<std::size_t>{1, 2, 2};
    const auto st = random_mixed_state(dims, 2, rng);
    const auto tau = build_tau(st, mult);
    const Scenario sc = random_scenario(st, mult, 2, rng);
    const auto mu = measure_from_source_operator(tau, sc.povms, sc.outcomes);
    check_marginals(mu, sc, 1e-9);
    CHECK(mu.total_variation() <= trace_norm(tau.op) + 1e-8);
  }
}

TEST_CASE("source-operator measure: shape mismatch") {
  const auto t = build_singlet_special();
  const Scenario sc = chsh_singlet();
  CHECK_THROWS_AS(measure_from_source_operator(t, sc.povms, sc.outcomes), Error);
}

TEST_CASE("split measure: singlet operator on the CHSH scenario") {
  const Scenario sc = chsh_singlet();
  const auto mu = covering_split_measure(build_singlet_special(), sc.povms, sc.outcomes);
  check_marginals(mu, sc, 1e-8);
  CHECK(mu.total_variation() <= std::sqrt(3.0) + 1e-8);
  CHECK(mu.total_variation() >= compute_gamma(sc).gamma - 1e-8);
}

TEST_CASE("split measure: separable positive T gives a probability measure") {
  Rng rng(23);
  const auto comps = random_separable_components({2, 2}, 3, rng);
  const std::vector<std::size_t> mult{1, 3};
  const auto tsep = build_separable_positive(comps, mult);
  const Scenario sc = random_scenario(make_separable_mixture(comps), {3, 3}, 2, rng);
  const auto mu = covering_split_measure(tsep, sc.povms, sc.outcomes);
  check_marginals(mu, sc, 1e-8);
  CHECK(mu.total_variation() == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("split measure: random tau-tilde operators, 3 settings at the undilated site") {
  Rng rng(29);
  for (int t = 0; t < 10; ++t) {
    const auto st = random_mixed_state({2, 2}, 1 + t % 3, rng);
    const std::vector<std::size_t> mult{1, 2};
    const auto tt = build_tau_tilde(st, mult);
    const Scenario sc = random_scenario(st, {3, 2}, 2, rng);
    const auto mu = covering_split_measure(tt, sc.povms, sc.outcomes);
    check_marginals(mu, sc, 1e-8);
    CHECK(mu.total_variation() <= trace_norm(tt.op) + 1e-8);
  }
}

TEST_CASE("split measure: null marginals fall back to uniform conditionals") {
  Scenario sc = chsh_singlet();
  // second setting at site 2 never fires its '-' outcome
  sc.povms.effects[1][1] = {id(2), ComplexMatrix(2, 2)};
  const auto mu = covering_split_measure(build_singlet_special(), sc.povms, sc.outcomes);
  check_marginals(mu, sc, 1e-8);
}

TEST_CASE("split measure: needs one slot at site 1") {
  const Scenario sc = chsh_singlet();
  const auto tau = build_tau(make_singlet(), std::vector<std::size_t>{2, 2});
  CHECK_THROWS_AS(covering_split_measure(tau, sc.povms, sc.outcomes), Error);
}

TEST_CASE("parametrized families are valid measurements") {
  Rng rng(31);
  std::uniform_real_distribution<double> u(-3, 3);
  const std::vector<std::size_t> dims{2, 3}, settings{2, 2}, sizes{2, 3};
  std::vector<double> x(parameter_count(dims, settings));
  CHECK(x.size() == 2 * 2 + 2 * 8);
  for (auto& v : x) v = u(rng);
  const auto pf = parametrized_povms(dims, settings, sizes, x);
  validate(pf, dims);
  // rank-1 projective at the qutrit with 3 outcomes
  for (const auto& e : pf.effects[1][0]) CHECK(std::abs(e.trace() - 1.0) < 1e-9);
  const std::vector<std::size_t> two{2, 2};
  const auto pf2 = parametrized_povms(dims, settings, two, x);
  validate(pf2, dims);
}

TEST_CASE("upsilon search: product state stays at 1") {
  Rng rng(37);
  const auto a = random_pure_state({2}, rng), b = random_pure_state({2}, rng);
  const auto st = make_state({2, 2}, kron(a.rho, b.rho));
  const std::vector<std::size_t> s{2, 2}, k{2, 2};
  const auto est = estimate_upsilon(st, s, k, 200, 1);
  CHECK(est.best_gamma == doctest::Approx(1.0).epsilon(1e-7));
}

TEST_CASE("upsilon search: singlet reaches the Tsirelson ceiling") {
  const std::vector<std::size_t> s{2, 2}, k{2, 2};
  const auto est = estimate_upsilon(make_singlet(), s, k, 1500, 7);
  CHECK(est.best_gamma >= sqrt2 - 1e-3);
  CHECK(est.best_gamma <= sqrt2 + 1e-6);
  Scenario sc{make_singlet(), est.best_povms, pm_one_outcomes(2)};
  CHECK(compute_gamma(sc).gamma == doctest::Approx(est.best_gamma).epsilon(1e-9));
  // same seed, same answer
  CHECK(estimate_upsilon(make_singlet(), s, k, 300, 7).best_gamma ==
        estimate_upsilon(make_singlet(), s, k, 300, 7).best_gamma);
}
