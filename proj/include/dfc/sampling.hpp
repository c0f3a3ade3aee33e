#pragma once

// Random generators for property checks: polynomials in a coefficient box
// and admissible pairs (a, mu0), built from prescribed roots inside the disc.

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include "dfc/polynomial.hpp"
#include "dfc/types.hpp"

namespace dfc {

using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

inline int uniform_int(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

/// Degree in [1, max_degree], coefficients uniform in the box [-half, half]^2.
inline Polynomial random_box_polynomial(Rng& rng, int max_degree, double half = 2.0) {
  const int d = uniform_int(rng, 1, max_degree);
  std::vector<cplx> c(d + 1);
  for (auto& x : c) x = {uniform(rng, -half, half), uniform(rng, -half, half)};
  while (std::abs(c.back()) < 1e-3) c.back() = {uniform(rng, -half, half), uniform(rng, -half, half)};
  return Polynomial(std::move(c));
}

/// Monic coefficients c_1..c_N of prod (lambda - r_k), highest first after
/// the leading 1.
inline std::vector<cplx> monic_from_roots(const std::vector<cplx>& roots) {
  std::vector<cplx> c{1.0};
  for (const auto& r : roots) {
    c.push_back(0.0);
    for (std::size_t k = c.size() - 1; k >= 1; --k) c[k] -= r * c[k - 1];
  }
  return {c.begin() + 1, c.end()};
}

/// Point uniformly distributed in the disc of the given radius.
inline cplx random_in_disc(Rng& rng, double radius) {
  const double rho = radius * std::sqrt(uniform(rng, 0.0, 1.0));
  return std::polar(rho, uniform(rng, 0.0, 2.0 * std::numbers::pi));
}

struct AdmissiblePair {
  std::vector<cplx> a;  // a_1..a_N, sum zero
  cplx mu0;
  std::vector<cplx> roots;  // of chi_{mu0}
};

/// (a, mu0) with chi_{mu0} having the given roots: a_1 = c_1 + mu0,
/// a_j = c_j, and mu0 = -sum c_j so that sum a_j = 0.
inline AdmissiblePair admissible_from_roots(std::vector<cplx> roots) {
  const auto c = monic_from_roots(roots);
  AdmissiblePair p;
  p.roots = std::move(roots);
  p.mu0 = 0.0;
  for (const auto& x : c) p.mu0 -= x;
  p.a = c;
  p.a[0] += p.mu0;
  return p;
}

/// Real coefficients: real roots and conjugate pairs of modulus <= max_radius.
inline AdmissiblePair random_admissible_real(Rng& rng, int n, double max_radius = 0.95) {
  std::vector<cplx> roots;
  while (static_cast<int>(roots.size()) < n) {
    if (static_cast<int>(roots.size()) + 2 <= n && uniform(rng, 0.0, 1.0) < 0.5) {
      const cplx z = random_in_disc(rng, max_radius);
      roots.push_back(z);
      roots.push_back(std::conj(z));
    } else {
      roots.push_back(uniform(rng, -max_radius, max_radius));
    }
  }
  auto p = admissible_from_roots(std::move(roots));
  for (auto& x : p.a) x.imag(0.0);
  p.mu0.imag(0.0);
  return p;
}

/// Complex coefficients from arbitrary roots in the disc of radius max_radius.
inline AdmissiblePair random_admissible_complex(Rng& rng, int n, double max_radius = 0.95) {
  std::vector<cplx> roots(n);
  for (auto& r : roots) r = random_in_disc(rng, max_radius);
  return admissible_from_roots(std::move(roots));
}

inline CoeffVector real_part(const std::vector<cplx>& a) {
  CoeffVector c;
  for (const auto& x : a) c.a.push_back(x.real());
  return c;
}

}  // namespace dfc
