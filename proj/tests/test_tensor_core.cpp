#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdlib>

#include "lqhv/errors.hpp"
#include "lqhv/random.hpp"
#include "lqhv/tensor_core.hpp"
#include "test_util.hpp"

using namespace lqhv;
using namespace tu;

TEST_CASE("kron basics") {
  CHECK(kron(id(2), id(2)) == id(4));
  const double d10[] = {1, 0}, d01[] = {0, 1};
  const double d0100[] = {0, 1, 0, 0};
  CHECK(kron(ComplexMatrix::diagonal(d10), ComplexMatrix::diagonal(d01)) ==
        ComplexMatrix::diagonal(d0100));
  // sigma_x (x) sigma_x |00> = |11>
  const auto out = kron(sx(), sx()) * std::span<const cplx>(ket(4, 0));
  CHECK(out == ket(4, 3));
}

TEST_CASE("kron respects the cap") {
  CHECK_THROWS_AS(kron(id(100), id(100), 4096), Error);
  try {
    kron(id(100), id(100), 4096);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::size);
  }
}

TEST_CASE("embed_at_slot") {
  CHECK(embed_at_slot(sx(), FactorShape({2}, {1}), 0, 0) == sx());
  CHECK(embed_at_slot(sz(), FactorShape({2}, {2}), 0, 1) == kron(id(2), sz()));
  // shape ([2,2],[1,2]), site 1 setting 0: check action on every basis ket
  const ComplexMatrix e = embed_at_slot(sx(), FactorShape({2, 2}, {1, 2}), 1, 0);
  for (std::size_t a = 0; a < 2; ++a)
    for (std::size_t b = 0; b < 2; ++b)
      for (std::size_t c = 0; c < 2; ++c) {
        const auto out = e * std::span<const cplx>(ket(8, a * 4 + b * 2 + c));
        CHECK(out == ket(8, a * 4 + (1 - b) * 2 + c));
      }
  CHECK_THROWS_AS(embed_at_slot(id(3), FactorShape({2}, {1}), 0, 0), Error);
}

TEST_CASE("partial trace") {
  Rng rng(1);
  const ComplexMatrix a = random_mixed_state({2}, 2, rng).rho;
  const ComplexMatrix b = random_mixed_state({3}, 2, rng).rho;
  const std::size_t dims[] = {2, 3};
  const std::size_t keep0[] = {0}, keep_all[] = {0, 1};
  CHECK(max_abs_diff(partial_trace(kron(a, b), dims, keep0), a) < 1e-12);
  CHECK(max_abs_diff(partial_trace(kron(a, b), dims, keep_all), kron(a, b)) < 1e-15);

  // singlet by hand: (|01> - |10>)/sqrt 2
  ComplexMatrix s(4, 4);
  s(1, 1) = s(2, 2) = 0.5;
  s(1, 2) = s(2, 1) = -0.5;
  const std::size_t qq[] = {2, 2}, k1[] = {1};
  ComplexMatrix half = id(2);
  half *= 0.5;
  CHECK(max_abs_diff(partial_trace(s, qq, keep0), half) < 1e-15);
  CHECK(max_abs_diff(partial_trace(s, qq, k1), half) < 1e-15);
  CHECK_THROWS_AS(partial_trace(s, qq, std::span<const std::size_t>{}), Error);
}

TEST_CASE("partial trace matches a naive loop") {
  Rng rng(2);
  const ComplexMatrix w = random_hermitian_unit(12, rng);
  const std::size_t dims[] = {2, 3, 2};
  const std::size_t keep[] = {0, 2};
  const ComplexMatrix got = partial_trace(w, dims, keep);
  ComplexMatrix want(4, 4);
  for (std::size_t a = 0; a < 2; ++a)
    for (std::size_t c = 0; c < 2; ++c)
      for (std::size_t a1 = 0; a1 < 2; ++a1)
        for (std::size_t c1 = 0; c1 < 2; ++c1)
          for (std::size_t b = 0; b < 3; ++b)
            want(a * 2 + c, a1 * 2 + c1) += w(a * 6 + b * 2 + c, a1 * 6 + b * 2 + c1);
  CHECK(max_abs_diff(got, want) < 1e-14);
}

TEST_CASE("permute_slots swaps factors") {
  Rng rng(3);
  const ComplexMatrix a = random_hermitian_unit(2, rng), b = random_hermitian_unit(3, rng);
  const std::size_t dims[] = {2, 3}, perm[] = {1, 0};
  CHECK(max_abs_diff(permute_slots(kron(a, b), dims, perm), kron(b, a)) < 1e-14);
}

TEST_CASE("eigen and norms") {
  CHECK(eigenvalues_hermitian(id(2)) == std::vector<double>{1, 1});
  const auto ev = eigenvalues_hermitian(sx());
  CHECK(ev[0] == doctest::Approx(1.0));
  CHECK(ev[1] == doctest::Approx(-1.0));
  CHECK(trace_norm(sz()) == doctest::Approx(2.0));
  ComplexMatrix rho{{0.75, 0.25}, {0.25, 0.25}};
  CHECK(trace_norm(rho) == doctest::Approx(1.0).epsilon(1e-12));
  ComplexMatrix bad{{0.0, 1.0}, {0.0, 0.0}};
  CHECK_THROWS_AS(eig_hermitian(bad), Error);
}

TEST_CASE("abs and sign") {
  Rng rng(4);
  for (int i = 0; i < 10; ++i) {
    const ComplexMatrix h = random_hermitian_unit(5, rng);
    const ComplexMatrix s = sign_hermitian(h);
    CHECK(max_abs_diff(s * s, id(5)) < 1e-10);
    CHECK(max_abs_diff(s * h, abs_hermitian(h)) < 1e-10);
    CHECK(trace_of_product(s, h).real() == doctest::Approx(trace_norm(h)).epsilon(1e-10));
  }
}

TEST_CASE("contract_slots agrees with explicit traces") {
  Rng rng(5);
  const ComplexMatrix w = random_hermitian_unit(12, rng);
  const std::size_t dims[] = {2, 3, 2};
  std::vector<std::vector<ComplexMatrix>> eff{random_projective_measurement(2, rng),
                                              random_projective_measurement(3, rng),
                                              random_projective_measurement(2, rng)};
  const auto got = contract_slots(w, dims, eff);
  REQUIRE(got.size() == 12);
  std::size_t idx = 0;
  for (const auto& e0 : eff[0])
    for (const auto& e1 : eff[1])
      for (const auto& e2 : eff[2]) {
        const ComplexMatrix p = kron(e0, kron(e1, e2));
        CHECK(std::abs(got[idx++] - (w * p).trace()) < 1e-12);
      }
}

TEST_CASE("dimension cap env override") {
  setenv("LQHV_DIM_CAP", "16", 1);
  CHECK(dimension_cap() == 16);
  CHECK_THROWS_AS(kron(id(4), id(8)), Error);
  unsetenv("LQHV_DIM_CAP");
  CHECK(dimension_cap() == kDefaultDimensionCap);
}

// properties

TEST_CASE("property: kron associativity and trace") {
  Rng rng(10);
  for (int i = 0; i < 20; ++i) {
    const ComplexMatrix a = random_hermitian_unit(2, rng), b = random_hermitian_unit(3, rng),
                        c = random_hermitian_unit(2, rng);
    CHECK(max_abs_diff(kron(kron(a, b), c), kron(a, kron(b, c))) < 1e-12);
    CHECK(std::abs(kron(a, b).trace() - a.trace() * b.trace()) < 1e-12);
    const std::size_t dims[] = {2, 3}, keep[] = {0};
    CHECK(max_abs_diff(partial_trace(kron(a, b), dims, keep), b.trace() * a) < 1e-12);
  }
}

TEST_CASE("property: eig reconstruction and unitarity up to dim 64") {
  Rng rng(11);
  for (std::size_t d : {1, 2, 5, 16, 33, 64}) {
    ComplexMatrix a = random_hermitian_unit(d, rng);
    a *= 3.0;
    const HermitianEigen e = eig_hermitian(a);
    ComplexMatrix lam = ComplexMatrix::diagonal(e.values);
    const double scale = std::max(1.0, operator_norm(a));
    CHECK(max_abs_diff(e.vectors * lam * e.vectors.adjoint(), a) <= 1e-10 * scale);
    CHECK(max_abs_diff(e.vectors.adjoint() * e.vectors, id(d)) <= 1e-10);
    for (std::size_t k = 1; k < d; ++k) CHECK(e.values[k - 1] >= e.values[k]);
  }
}

TEST_CASE("property: trace norm dominates |trace|") {
  Rng rng(12);
  for (int i = 0; i < 50; ++i) {
    const ComplexMatrix a = random_hermitian_unit(1 + i % 9, rng);
    CHECK(trace_norm(a) >= std::abs(a.trace()) - 1e-12);
  }
}

TEST_CASE("property: trace norm of a unit-trace operator is 1 + 2 tr[T-]") {
  Rng rng(13);
  for (int i = 0; i < 20; ++i) {
    ComplexMatrix a = random_hermitian_unit(6, rng);
    a += id(6);
    a *= 1.0 / a.trace().real();
    double neg = 0;
    for (double l : eigenvalues_hermitian(a)) neg += l < 0 ? -l : 0;
    CHECK(trace_norm(a) == doctest::Approx(1 + 2 * neg).epsilon(1e-12));
  }
}
