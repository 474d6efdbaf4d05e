#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "lqhv/errors.hpp"
#include "lqhv/random.hpp"
#include "lqhv/scenarios.hpp"
#include "test_util.hpp"

using namespace lqhv;
using namespace tu;

namespace {

const double pi = std::numbers::pi;

Scenario chsh_singlet() {
  return qubit_scenario(make_singlet(), {{{0, 0}, {pi / 2, 0}}, {{pi / 4, 0}, {-pi / 4, 0}}});
}

Scenario random_qubit_scenario(const QuantumState& st, std::size_t s, Rng& rng) {
  std::uniform_real_distribution<double> th(0, pi), ph(0, 2 * pi);
  std::vector<std::vector<std::array<double, 2>>> angles(st.site_count());
  for (auto& site : angles)
    for (std::size_t k = 0; k < s; ++k) site.push_back({th(rng), ph(rng)});
  return qubit_scenario(st, angles);
}

}  // namespace

TEST_CASE("joint distributions") {
  const Scenario zz = qubit_scenario(make_singlet(), {{{0, 0}}, {{0, 0}}});
  const std::size_t s0[] = {0, 0};
  const auto p = joint_distribution(zz, s0);
  // outcomes ordered (+,+), (+,-), (-,+), (-,-)
  CHECK(std::abs(p[0]) < 1e-15);
  CHECK(std::abs(p[1] - 0.5) < 1e-15);
  CHECK(std::abs(p[2] - 0.5) < 1e-15);
  CHECK(std::abs(p[3]) < 1e-15);

  Rng rng(1);
  const QuantumState a = random_mixed_state({2}, 2, rng), b = random_mixed_state({2}, 2, rng);
  std::vector<ProductComponent> comp{{1.0, {a, b}}};
  const Scenario prod = random_qubit_scenario(make_separable_mixture(comp), 2, rng);
  const std::size_t s1[] = {1, 0};
  const auto pp = joint_distribution(prod, s1);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) {
      const double pa = (a.rho * prod.povms.effects[0][1][i]).trace().real();
      const double pb = (b.rho * prod.povms.effects[1][0][j]).trace().real();
      CHECK(std::abs(pp[i * 2 + j] - pa * pb) < 1e-14);
    }

  ComplexMatrix mm = id(4);
  mm *= 0.25;
  const Scenario mix = random_qubit_scenario(make_state({2, 2}, mm), 2, rng);
  for (double x : joint_distribution(mix, s1)) CHECK(std::abs(x - 0.25) < 1e-14);
}

TEST_CASE("lhv constants") {
  const LhvConstants c = lhv_constants(chsh_functional());
  // enumerate the 16 deterministic +-1 assignments
  double lo = 1e9, hi = -1e9;
  for (int a0 : {1, -1})
    for (int a1 : {1, -1})
      for (int b0 : {1, -1})
        for (int b1 : {1, -1}) {
          const double v = a0 * b0 + a0 * b1 + a1 * b0 - a1 * b1;
          lo = std::min(lo, v);
          hi = std::max(hi, v);
        }
  CHECK(c.b_sup == hi);
  CHECK(c.b_inf == lo);
  CHECK(c.b_sup == 2);
  CHECK(c.b_abs == 2);

  BellFunctional ones = zero_functional({2, 3}, {2, 2});
  for (std::size_t s = 0; s < 6; ++s)
    for (std::size_t k = 0; k < 4; ++k) ones.at(s, k) = 1;
  const LhvConstants co = lhv_constants(ones);
  CHECK(co.b_inf == 6);
  CHECK(co.b_sup == 6);

  const LhvConstants cz = lhv_constants(zero_functional({2, 2}, {2, 2}));
  CHECK(cz.b_inf == 0);
  CHECK(cz.b_sup == 0);
  CHECK(cz.b_abs == 0);

  CHECK_THROWS_AS(lhv_constants(zero_functional({8, 8}, {3, 3})), Error);
}

TEST_CASE("quantum values") {
  const Scenario sc = chsh_singlet();
  // singlet correlations are -a.b
  auto dir = [](double th) { return std::array<double, 2>{std::sin(th), std::cos(th)}; };
  const double ta[] = {0, pi / 2}, tb[] = {pi / 4, -pi / 4}, sign[] = {1, 1, 1, -1};
  double want = 0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      const auto a = dir(ta[i]), b = dir(tb[j]);
      want += sign[i * 2 + j] * -(a[0] * b[0] + a[1] * b[1]);
    }
  const double q = quantum_value(sc, chsh_functional());
  CHECK(std::abs(q - want) < 1e-12);
  CHECK(std::abs(std::abs(q) - 2 * std::sqrt(2.0)) < 1e-9);
  CHECK(std::abs(violation_ratio(sc, chsh_functional()) - std::sqrt(2.0)) < 1e-9);
  CHECK(quantum_value(sc, zero_functional({2, 2}, {2, 2})) == 0);
  CHECK_THROWS_AS(violation_ratio(sc, zero_functional({2, 2}, {2, 2})), Error);

  Rng rng(2);
  for (int i = 0; i < 20; ++i) {
    const auto comps = random_separable_components({2, 2}, 1, rng);
    const Scenario p = random_qubit_scenario(make_separable_mixture(comps), 2, rng);
    CHECK(std::abs(quantum_value(p, chsh_functional())) <= 2 + 1e-9);
    CHECK(violation_ratio(p, chsh_functional()) <= 1 + 1e-9);
  }

  ComplexMatrix mm = id(4);
  mm *= 0.25;
  Scenario mix = sc;
  mix.state = make_state({2, 2}, mm);
  CHECK(std::abs(violation_ratio(mix, chsh_functional())) < 1e-12);
}

TEST_CASE("analog inequality") {
  const Scenario sc = chsh_singlet();
  CHECK_FALSE(analog_inequality_check(sc, chsh_functional(), 1.0));
  CHECK(analog_inequality_check(sc, chsh_functional(), std::sqrt(2.0)));
  Rng rng(3);
  const auto comps = random_separable_components({2, 2}, 2, rng);
  const Scenario p = random_qubit_scenario(make_separable_mixture(comps), 2, rng);
  CHECK(analog_inequality_check(p, chsh_functional(), 1.0));
  CHECK_THROWS_AS(analog_inequality_check(p, chsh_functional(), 0.5), Error);
}

TEST_CASE("helpers and validation") {
  const ProbabilityTerm t[] = {{{0, 1}, {1, 0}, 2.0}, {{0, 1}, {1, 0}, 0.5}};
  const BellFunctional f = probability_functional({2, 2}, {2, 2}, t);
  CHECK(f.at(1, 2) == 2.5);
  Scenario sc = chsh_singlet();
  sc.povms.effects[0][0][0](0, 0) = 0.9;
  CHECK_THROWS_AS(validate(sc), Error);
  OutcomeSpace dup{{{1.0, 1.0}}};
  CHECK_THROWS_AS(validate(dup), Error);
}

// properties

TEST_CASE("property: no signalling") {
  Rng rng(10);
  for (int i = 0; i < 10; ++i) {
    const Scenario sc = random_qubit_scenario(random_mixed_state({2, 2, 2}, 2, rng), 2, rng);
    // marginal of sites 1,2 must not depend on site 0's setting
    for (std::size_t s1 = 0; s1 < 2; ++s1)
      for (std::size_t s2 = 0; s2 < 2; ++s2) {
        const std::size_t a[] = {0, s1, s2}, b[] = {1, s1, s2};
        const auto pa = joint_distribution(sc, a), pb = joint_distribution(sc, b);
        double total = 0;
        for (double x : pa) total += x;
        CHECK(std::abs(total - 1) < 1e-9);
        for (std::size_t k = 0; k < 4; ++k)
          CHECK(std::abs(pa[k] + pa[k + 4] - pb[k] - pb[k + 4]) < 1e-9);
      }
  }
}

TEST_CASE("property: lhv constant scaling and ordering") {
  Rng rng(11);
  std::normal_distribution<double> g;
  for (int i = 0; i < 20; ++i) {
    BellFunctional f = zero_functional({2, 2}, {2, 3});
    for (auto& c : f.coeffs) c = g(rng);
    const LhvConstants c = lhv_constants(f);
    CHECK(c.b_inf <= c.b_sup);
    for (double k : {2.0, -3.0}) {
      BellFunctional h = f;
      for (auto& x : h.coeffs) x *= k;
      const LhvConstants ch = lhv_constants(h);
      if (k > 0) {
        CHECK(ch.b_inf == doctest::Approx(k * c.b_inf));
        CHECK(ch.b_sup == doctest::Approx(k * c.b_sup));
      } else {
        CHECK(ch.b_inf == doctest::Approx(k * c.b_sup));
        CHECK(ch.b_sup == doctest::Approx(k * c.b_inf));
      }
    }
  }
}
