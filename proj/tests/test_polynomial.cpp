#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "catch_amalgamated.hpp"
#include "dfc/polynomial.hpp"
#include "dfc/sampling.hpp"

using namespace dfc;
using Catch::Matchers::WithinAbs;

namespace {

Polynomial poly(std::initializer_list<cplx> low_first) { return Polynomial(std::vector<cplx>(low_first)); }

bool has_root_near(const std::vector<cplx>& rs, cplx z, double tol) {
  for (const auto& r : rs)
    if (std::abs(r - z) <= tol) return true;
  return false;
}

// Example vector with closed-loop coefficients summing to zero.
const std::vector<double> kTwoDimCoeffs{-7.0 / 6.0, 1.5, 0.0, -1.0 / 3.0};

}  // namespace

TEST_CASE("eval matches the defining sum", "[polynomial]") {
  CHECK(eval(poly({1.0, 0.0}), 5.0) == cplx(1.0));
  CHECK(std::abs(eval(poly({0.0, 0.0, 1.0}), cplx(0, 1)) - cplx(-1.0)) < 1e-15);
  CHECK(eval(poly({1.0, 2.0, 1.0}), 1.0) == cplx(4.0));
}

TEST_CASE("trailing dust is trimmed from the degree", "[polynomial]") {
  const auto p = poly({1.0, 2.0, 1e-14});
  CHECK(p.degree() == 1);
  CHECK(p.leading() == cplx(2.0));
  CHECK(poly({0.0}).degree() == 0);
}

TEST_CASE("from_highest_first flips the order", "[polynomial]") {
  const std::vector<cplx> hi{1.0, -3.0, 2.0};
  const auto p = Polynomial::from_highest_first(hi);
  CHECK(p[0] == cplx(2.0));
  CHECK(p[2] == cplx(1.0));
}

TEST_CASE("roots of small factorable polynomials", "[polynomial]") {
  auto r = roots(poly({-1.0, 0.0, 1.0}));
  REQUIRE(r.size() == 2);
  CHECK(has_root_near(r, 1.0, 1e-12));
  CHECK(has_root_near(r, -1.0, 1e-12));

  r = roots(poly({1.0, 0.0, 1.0}));
  CHECK(has_root_near(r, cplx(0, 1), 1e-12));
  CHECK(has_root_near(r, cplx(0, -1), 1e-12));

  // triple root: perturbation grows like eps^(1/3)
  r = roots(poly({-1.0, 3.0, -3.0, 1.0}));
  REQUIRE(r.size() == 3);
  for (const auto& z : r) CHECK(std::abs(z - 1.0) < 1e-4);
}

TEST_CASE("constant polynomials have no roots", "[polynomial]") {
  CHECK_THROWS_MATCHES(roots(poly({3.0})), Error, Catch::Matchers::Predicate<Error>([](const Error& e) {
                         return e.code() == Errc::DegreeZero;
                       }));
  CHECK_THROWS_AS(is_schur_stable(poly({3.0})), Error);
}

TEST_CASE("root residual stays small on random box polynomials", "[polynomial]") {
  Rng rng(7);
  for (int t = 0; t < 500; ++t) {
    const auto p = random_box_polynomial(rng, 10);
    for (const auto& r : roots(p)) CHECK(std::abs(p(r)) / std::pow(1.0 + std::abs(r), p.degree()) <= 1e-8);
  }
}

TEST_CASE("Schur verdicts on the basic examples", "[polynomial]") {
  auto v = is_schur_stable(poly({0.0, 0.0, 1.0}));
  CHECK(v.stable);
  CHECK_THAT(v.max_root_modulus, WithinAbs(0.0, 1e-12));
  CHECK_THAT(v.margin, WithinAbs(1.0, 1e-12));
  CHECK(v.roots.size() == 2);

  v = is_schur_stable(poly({1.5, 0.0, 1.0}));
  CHECK_FALSE(v.stable);
  CHECK_THAT(v.max_root_modulus, WithinAbs(std::sqrt(1.5), 1e-12));

  const double eps = 0.1;
  const std::vector<double> a{2 * (1 - eps), 1 - eps};
  CHECK(is_schur_stable(char_poly_linear(0.0, a)).stable);
}

TEST_CASE("unit-modulus roots are not stable", "[polynomial]") {
  CHECK_FALSE(is_schur_stable(poly({-1.0, 1.0})).stable);
  CHECK_FALSE(is_schur_stable(poly({1.0, 0.0, 1.0})).stable);
  CHECK_FALSE(schur_cohn_stable(poly({-1.0, 1.0})));
  CHECK(is_schur_stable(poly({-(1.0 - 1e-6), 1.0})).stable);
}

TEST_CASE("Schur-Cohn agrees with the root moduli away from the circle", "[polynomial]") {
  Rng rng(11);
  int compared = 0;
  for (int t = 0; t < 2000; ++t) {
    const auto p = random_box_polynomial(rng, 10);
    const auto v = is_schur_stable(p);
    bool near = false;
    for (const auto& r : v.roots) near = near || std::abs(std::abs(r) - 1.0) <= 10 * kBoundaryTol;
    if (near) continue;
    ++compared;
    CHECK(v.stable == schur_cohn_stable(p));
  }
  // stable cases are rare in the box, so also draw from roots in the disc
  for (int t = 0; t < 500; ++t) {
    const int n = uniform_int(rng, 1, 10);
    std::vector<cplx> rs(n);
    for (auto& r : rs) r = random_in_disc(rng, 1.3);
    auto c = monic_from_roots(rs);
    c.insert(c.begin(), 1.0);
    const auto p = Polynomial::from_highest_first(c);
    const auto v = is_schur_stable(p);
    bool near = false;
    for (const auto& r : rs) near = near || std::abs(std::abs(r) - 1.0) <= 1e-6;
    if (near) continue;
    CHECK(v.stable == schur_cohn_stable(p));
  }
  CHECK(compared > 1900);
}

TEST_CASE("char_poly_linear layout", "[polynomial]") {
  const std::vector<double> zero{0.0, 0.0};
  const auto p = char_poly_linear(0.0, zero);
  CHECK(p.degree() == 2);
  CHECK(p[2] == cplx(1.0));
  CHECK(p[1] == cplx(0.0));
  CHECK(p[0] == cplx(0.0));

  const std::vector<double> a{0.3, -0.5, 0.2};
  const auto q = char_poly_linear(cplx(0.7, 0.1), a);
  CHECK(q[3] == cplx(1.0));
  CHECK(q[2] == cplx(-0.7 + 0.3, -0.1));
  CHECK(q[1] == cplx(-0.5));
  CHECK(q[0] == cplx(0.2));
  // sum a = 0, so chi(1) = 1 - mu
  CHECK(std::abs(q(1.0) - (1.0 - cplx(0.7, 0.1))) < 1e-15);

  CHECK_THROWS_AS(char_poly_linear(0.0, std::vector<double>{}), Error);
}

TEST_CASE("two-dimensional example characteristic polynomials", "[polynomial]") {
  // Frozen from an independent numpy.roots evaluation.
  const double modulus = 0.9863072915657848;
  auto v = is_schur_stable(char_poly_linear(-79.0 / 24.0, kTwoDimCoeffs));
  CHECK(v.stable);
  CHECK_THAT(v.max_root_modulus, WithinAbs(modulus, 1e-12));
  v = is_schur_stable(char_poly_linear(23.0 / 24.0, kTwoDimCoeffs));
  CHECK(v.stable);
  CHECK_THAT(v.max_root_modulus, WithinAbs(modulus, 1e-12));

  // The printed sign of the second multiplier gives an unstable polynomial.
  v = is_schur_stable(char_poly_linear(-23.0 / 24.0, kTwoDimCoeffs));
  CHECK_FALSE(v.stable);
  CHECK_FALSE(schur_cohn_stable(char_poly_linear(-23.0 / 24.0, kTwoDimCoeffs)));
  CHECK(v.max_root_modulus > 1.3);
}

TEST_CASE("char_poly_nonlinear layout and examples", "[polynomial]") {
  const std::vector<double> alpha{2.0 / 3.0, 1.0 / 3.0};
  const auto p = char_poly_nonlinear(0.0, alpha);
  CHECK(p.degree() == 2);
  CHECK(is_schur_stable(p).stable);
  const auto q = char_poly_nonlinear(3.0, alpha);
  CHECK(q[2] == cplx(1.0));
  CHECK(std::abs(q[1] - cplx(-2.0)) < 1e-15);
  CHECK(std::abs(q[0] - cplx(-1.0)) < 1e-15);

  const std::vector<double> one{1.0};
  CHECK(is_schur_stable(char_poly_nonlinear(0.5, one)).stable);
  auto v = is_schur_stable(char_poly_nonlinear(-1.5, one));
  CHECK_FALSE(v.stable);
  CHECK_THAT(v.max_root_modulus, WithinAbs(1.5, 1e-12));
  CHECK_THROWS_AS(char_poly_nonlinear(0.0, std::vector<double>{}), Error);
}

TEST_CASE("Vieta bound on stable zero-sum polynomials", "[polynomial][property]") {
  Rng rng(3);
  for (int t = 0; t < 500; ++t) {
    const int n = uniform_int(rng, 1, 8);
    const auto s = random_admissible_real(rng, n);
    const auto a = real_part(s.a);
    double sum = 0.0;
    for (double x : a.a) sum += x;
    REQUIRE(std::abs(sum) < 1e-12);
    REQUIRE(is_schur_stable(char_poly_linear(s.mu0, a.a)).stable);
    const double v = 1.0 - s.mu0.real();
    CHECK(v > 0.0);
    CHECK(v < std::ldexp(1.0, n));
  }
}
