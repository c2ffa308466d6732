#include <doctest.h>

#include <random>

#include "caponplus/linalg.h"

using namespace caponplus;

namespace {

HermitianMatrix small_hpd() {
  using namespace std::complex_literals;
  return HermitianMatrix::from_rows(3, {4.0, 1.0 - 1.0i, 0.5i,
                                        1.0 + 1.0i, 3.0, 0.2,
                                        -0.5i, 0.2, 2.0},
                                    true);
}

HermitianMatrix random_hpd(std::size_t m, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  HermitianMatrix a = HermitianMatrix::identity(m, 0.1);
  for (std::size_t k = 0; k < m + 2; ++k) {
    ComplexVector v(m);
    for (auto& x : v) x = {n(rng), n(rng)};
    a.add_outer(1.0, v);
  }
  return a;
}

}  // namespace

TEST_CASE("cholesky of a 3x3 reference matrix") {
  const CholeskyFactor l = cholesky(small_hpd());
  CHECK(l(0, 0).real() == doctest::Approx(2.0));
  CHECK(l(1, 0).real() == doctest::Approx(0.5));
  CHECK(l(1, 0).imag() == doctest::Approx(0.5));
  CHECK(l(1, 1).real() == doctest::Approx(1.5811388300841898));
  CHECK(l(2, 0).imag() == doctest::Approx(-0.25));
  CHECK(l(2, 1).real() == doctest::Approx(0.20554804791094465));
  CHECK(l(2, 1).imag() == doctest::Approx(0.07905694150420949));
  CHECK(l(2, 2).real() == doctest::Approx(1.3744089638961366));
  CHECK(l(0, 2) == cdouble{});
  CHECK(l.log_det() == doctest::Approx(2.9386326815134183));
}

TEST_CASE("solve and quadratic form against numpy values") {
  using namespace std::complex_literals;
  const ComplexVector b = {1.0, 1.0i, -1.0};
  const ComplexVector x = solve_hpd(small_hpd(), b);
  CHECK(x[0].real() == doctest::Approx(0.19375331));
  CHECK(x[0].imag() == doctest::Approx(-0.01588142));
  CHECK(x[1].real() == doctest::Approx(-0.03705664));
  CHECK(x[1].imag() == doctest::Approx(0.27263102));
  CHECK(x[2].real() == doctest::Approx(-0.49232398));
  CHECK(x[2].imag() == doctest::Approx(0.02117522));
  CHECK(quadratic_form(small_hpd(), b) == doctest::Approx(11.0));
}

TEST_CASE("reconstruct returns the input") {
  std::mt19937_64 rng(7);
  for (std::size_t m : {1u, 2u, 5u, 12u}) {
    const HermitianMatrix a = random_hpd(m, rng);
    const HermitianMatrix r = cholesky(a).reconstruct();
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < m; ++j) {
        CHECK(std::abs(r(i, j) - a(i, j)) < 1e-12 * a.max_diagonal());
      }
    }
  }
}

TEST_CASE("non positive definite input names the pivot") {
  const HermitianMatrix a = HermitianMatrix::from_rows(2, {1.0, 2.0, 2.0, 1.0});
  try {
    (void)cholesky(a);
    FAIL("expected NotPositiveDefinite");
  } catch (const NotPositiveDefinite& e) {
    CHECK(e.pivot() == 1);
  }
  HermitianMatrix rank1(3);
  rank1.add_outer(1.0, ComplexVector{1.0, 1.0, 1.0});
  CHECK_THROWS_AS(cholesky(rank1), NotPositiveDefinite);
}

TEST_CASE("from_rows rejects non-Hermitian input") {
  using namespace std::complex_literals;
  CHECK_THROWS_AS(HermitianMatrix::from_rows(2, {1.0, 1.0i, 1.0i, 1.0}), DomainError);
  CHECK_THROWS_AS(HermitianMatrix::from_rows(2, {1.0 + 0.1i, 0.0, 0.0, 1.0}), DomainError);
  CHECK_THROWS_AS(HermitianMatrix::from_rows(2, {1.0, 0.0, 0.0}), DimensionMismatch);
}

TEST_CASE("quadratic form is real and matches v^H (A v)") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> n(0.0, 1.0);
  for (int rep = 0; rep < 50; ++rep) {
    const HermitianMatrix a = random_hpd(6, rng);
    ComplexVector v(6);
    for (auto& x : v) x = {n(rng), n(rng)};
    const cdouble direct = inner(v, multiply(a, v));
    CHECK(quadratic_form(a, v) == doctest::Approx(direct.real()).epsilon(1e-12));
    CHECK(std::abs(direct.imag()) < 1e-9 * std::abs(direct));
  }
}

TEST_CASE("Sherman-Morrison matches a direct solve") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> n(0.0, 1.0);
  for (int rep = 0; rep < 20; ++rep) {
    const HermitianMatrix q = random_hpd(5, rng);
    ComplexVector a(5);
    for (auto& x : a) x = {n(rng), n(rng)};
    const double gamma = std::abs(n(rng)) * 3.0;
    const ComplexVector qinv_a = solve_hpd(q, a);
    const double aqa = hermitian_real(inner(a, qinv_a));

    HermitianMatrix sigma = q;
    sigma.add_outer(gamma, a);
    const ComplexVector direct = solve_hpd(sigma, a);
    const Rank1Inverse upd = rank1_update_inverse(qinv_a, aqa, gamma);
    for (std::size_t i = 0; i < 5; ++i) CHECK(std::abs(upd.minv_a[i] - direct[i]) < 1e-10);
    CHECK(upd.aH_minv_a == doctest::Approx(aqa / (1.0 + gamma * aqa)).epsilon(1e-12));
  }
  const ComplexVector u = {1.0};
  CHECK_THROWS_AS(rank1_update_inverse(u, 0.0, 1.0), NonPositiveQuadraticForm);
  CHECK_THROWS_AS(rank1_update_inverse(u, 1.0, -1.0), DomainError);
}

TEST_CASE("hermitian_real tolerates rounding only") {
  CHECK(hermitian_real({2.0, 1e-14}) == 2.0);
  CHECK_THROWS_AS(hermitian_real({2.0, 1e-3}), DomainError);
}

TEST_CASE("dimension checks") {
  const HermitianMatrix a = HermitianMatrix::identity(3);
  const ComplexVector v(2);
  CHECK_THROWS_AS(multiply(a, v), DimensionMismatch);
  CHECK_THROWS_AS(quadratic_form(a, v), DimensionMismatch);
  CHECK_THROWS_AS(inner(v, ComplexVector(3)), DimensionMismatch);
  CHECK_THROWS_AS(cholesky(a).solve(v), DimensionMismatch);
}
