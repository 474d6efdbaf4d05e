#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "lqhv/bounds.hpp"
#include "lqhv/errors.hpp"
#include "lqhv/lqhv.hpp"
#include "lqhv/random.hpp"

using namespace lqhv;

namespace {

using V = std::vector<std::size_t>;

// min over the dropped site of prod (2 S_m - 1)
double theta_oracle(const V& s) {
  double best = 1e300;
  for (std::size_t drop = 0; drop < s.size(); ++drop) {
    double p = 1;
    for (std::size_t m = 0; m < s.size(); ++m)
      if (m != drop) p *= 2.0 * static_cast<double>(s[m]) - 1;
    best = std::min(best, p);
  }
  return best;
}

double ipow(double b, std::size_t e) {
  double r = 1;
  while (e--) r *= b;
  return r;
}

}  // namespace

TEST_CASE("xi_n examples") {
  CHECK(xi_n(V{2, 2}) == 3);
  CHECK(xi_n(V{2, 2, 2}) == 13);
  CHECK(xi_n(V{5, 1, 1, 1}) == 1);
  CHECK(xi_n(V{3, 2}) == 1 + 2 * (2 - 1));
}

TEST_CASE("theta_n examples") {
  CHECK(theta_n(V{3, 5}) == 5);
  CHECK(theta_n(V{2, 2, 2}) == 9);
  CHECK(theta_n(V{1, 1, 1, 1}) == 1);
  CHECK_THROWS_AS(theta_n(V{3}), Error);
}

TEST_CASE("theta_n agrees with the factored form") {
  for (std::size_t n = 2; n <= 6; ++n) {
    V s(n, 1);
    for (int t = 0; t < 200; ++t) {
      for (std::size_t m = 0; m < n; ++m) s[m] = 1 + (t * 7 + m * 13 + m * m * t) % 6;
      CHECK(theta_n(s) == theta_oracle(s));
    }
  }
}

TEST_CASE("two and three site closed forms for S, d in 1..5") {
  for (std::size_t s1 = 1; s1 <= 5; ++s1)
    for (std::size_t s2 = 1; s2 <= 5; ++s2)
      for (std::size_t d1 = 1; d1 <= 5; ++d1)
        for (std::size_t d2 = 1; d2 <= 5; ++d2) {
          const auto r = theorem4_bound(V{d1, d2}, V{s1, s2});
          const double expect = 2.0 * static_cast<double>(std::min({s1, s2, d1, d2})) - 1;
          CHECK(r.theorem4_min == expect);
        }
  for (std::size_t s1 = 1; s1 <= 5; ++s1)
    for (std::size_t s2 = 1; s2 <= 5; ++s2)
      for (std::size_t s3 = 1; s3 <= 5; ++s3) {
        const V s{s1, s2, s3};
        double th = 1e300;
        for (auto [a, b] : {std::pair{s1, s2}, {s1, s3}, {s2, s3}}) {
          const double x = static_cast<double>(a), y = static_cast<double>(b);
          th = std::min(th, 4 * x * y - 2 * (x + y) + 1);
        }
        CHECK(theta_n(s) == th);
        for (std::size_t d = 1; d <= 5; ++d) {
          const V dims{d, d, d};
          const double dd = static_cast<double>(d);
          CHECK(xi_n(dims) == 4 * dd * dd - 3);
          CHECK(theorem4_bound(dims, s).theorem4_min == std::min(th, 4 * dd * dd - 3));
        }
      }
}

TEST_CASE("equal settings: (2S-1)^{N-1} against the relaxed form") {
  for (std::size_t n = 2; n <= 6; ++n)
    for (std::size_t s = 1; s <= 10; ++s) {
      CHECK(theta_n(V(n, s)) == ipow(2.0 * static_cast<double>(s) - 1, n - 1));
      CHECK(ipow(2.0 * static_cast<double>(s) - 1, n - 1) <=
            ipow(2, n - 1) * (ipow(static_cast<double>(s), n - 1) - 1) + 1);
    }
}

TEST_CASE("monotone in every argument") {
  for (std::size_t n = 2; n <= 4; ++n)
    for (int t = 0; t < 50; ++t) {
      V x(n);
      for (std::size_t m = 0; m < n; ++m) x[m] = 1 + (t * 5 + m * 3 + t * m) % 5;
      for (std::size_t m = 0; m < n; ++m) {
        V y = x;
        ++y[m];
        CHECK(theta_n(y) >= theta_n(x));
        CHECK(xi_n(y) >= xi_n(x));
      }
    }
}

TEST_CASE("theorem4 report: relaxed line dominates and entries are >= 1") {
  for (const auto& [d, s] : {std::pair{V{2, 2}, V{3, 3}}, {V{2, 2, 2}, V{2, 2, 2}},
                             {V{3, 2, 4}, V{1, 5, 2}}, {V{2, 2}, V{1, 1}}}) {
    const auto r = theorem4_bound(d, s);
    CHECK(r.theorem4_relaxed >= r.theorem4_min);
    CHECK(r.xi_N >= 1);
    CHECK(r.theta_N >= 1);
    CHECK(r.final_upper == r.theorem4_min);
  }
  CHECK(theorem4_bound(V{2, 2}, V{3, 3}).final_upper == 3);
  CHECK(theorem4_bound(V{2, 2}, V{1, 1}).final_upper == 1);
  CHECK_THROWS_AS(theorem4_bound(V{2, 2}, V{1}), Error);
}

TEST_CASE("singlet: state bound reaches sqrt 3 for S x 2") {
  const auto r = state_bound(make_singlet(), V{4, 2});
  CHECK(r.final_upper <= std::sqrt(3.0) + 1e-9);
  for (const auto& e : r.source_norm_bounds) CHECK(e.value >= 1 - 1e-9);
  // no closed form once both sites have 3 settings
  const auto r3 = state_bound(make_singlet(), V{3, 3});
  CHECK(r3.state_specific.empty());
  CHECK(r3.final_upper <= 3 + 1e-12);
}

TEST_CASE("GHZ families") {
  for (std::size_t d : {2, 3})
    for (std::size_t n : {2, 3}) {
      if (d == 3 && n == 3) continue;
      const V s(n, 2);
      const auto r = state_bound(make_ghz(d, n), s);
      const double closed = 1 + ipow(2, n - 1) * static_cast<double>(d - 1);
      CHECK(r.final_upper <= std::min(closed, ipow(3, n - 1)) + 1e-9);
      bool found = false;
      for (const auto& v : r.state_specific) found = found || v.label == "ghz";
      CHECK(found);
    }
  for (double phi : {0.0, 0.3, std::numbers::pi / 4}) {
    const auto r = state_bound(make_generalized_ghz(phi, 3), V{2, 2, 2});
    CHECK(r.final_upper <= 1 + 4 * std::abs(std::sin(2 * phi)) + 1e-9);
    // computed norms also respect the tighter |sin cos| form printed for tau-tilde
    for (const auto& e : r.source_norm_bounds)
      if (e.tag == BuilderTag::tau_tilde && e.undilated_site == 0)
        CHECK(e.value <= 1 + 4 * std::abs(std::sin(phi) * std::cos(phi)) + 1e-8);
  }
  CHECK(state_bound(make_generalized_ghz(0, 2), V{3, 3}).final_upper ==
        doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("gamma never exceeds the bounds") {
  Rng rng(41);
  std::uniform_real_distribution<double> th(0, std::numbers::pi), ph(0, 2 * std::numbers::pi);
  for (int t = 0; t < 6; ++t) {
    const auto st = random_mixed_state({2, 2, 2}, 1 + t % 2, rng);
    std::vector<std::vector<std::array<double, 2>>> angles(3);
    for (auto& site : angles)
      for (int k = 0; k < 2; ++k) site.push_back({th(rng), ph(rng)});
    const double g = compute_gamma(qubit_scenario(st, angles)).gamma;
    const V s{2, 2, 2};
    CHECK(g <= theorem4_bound(st.dims, s).final_upper + 1e-6);
    CHECK(g <= state_bound(st, s, 2, 1).final_upper + 1e-6);
  }
}

TEST_CASE("oversized operators are skipped, not fatal") {
  Rng rng(43);
  const auto st = random_pure_state({3, 3}, rng);
  // tau on 3^1 * 3^9 exceeds the default cap
  const auto r = state_bound(st, V{9, 9}, 1, 0);
  CHECK_FALSE(r.skipped.empty());
  CHECK(r.final_upper <= 5 + 1e-12);
}
