#pragma once

// Control parameterizations and synthesis.
//
// A linear control with gains eps_1..eps_{N-1} closes the loop with
// characteristic coefficients a_1 = -eps_1, a_j = eps_{j-1} - eps_j,
// a_N = eps_{N-1}. A non-linear control with the same gains is the
// convolution x_{n+1} = sum_j alpha_j F(x_{n-j+1}) with
// eps_k = alpha_{k+1} + ... + alpha_N.

#include <cmath>
#include <complex>
#include <numeric>

#include "dfc/error.hpp"
#include "dfc/polynomial.hpp"
#include "dfc/raster.hpp"
#include "dfc/types.hpp"

namespace dfc {

inline constexpr double kSumTol = 1e-9;

inline CoeffVector gains_to_coeffs(const GainVector& g) {
  const std::size_t n = g.order();
  CoeffVector c;
  c.a.assign(n, 0.0);
  if (n == 1) return c;
  c.a[0] = -g.eps[0];
  for (std::size_t j = 1; j + 1 < n; ++j) c.a[j] = g.eps[j - 1] - g.eps[j];
  c.a[n - 1] = g.eps[n - 2];
  return c;
}

inline GainVector coeffs_to_gains(const CoeffVector& c) {
  const double sum = std::accumulate(c.a.begin(), c.a.end(), 0.0);
  if (c.a.empty() || std::abs(sum) > kSumTol)
    throw Error(Errc::NotZeroSum, "coefficients do not sum to zero");
  GainVector g;
  double partial = 0.0;
  for (std::size_t k = 0; k + 1 < c.a.size(); ++k) {
    partial += c.a[k];
    g.eps.push_back(-partial);
  }
  return g;
}

/// alpha_j = (2/N) (1 - j/(N+1)), j = 1..N.
inline AlphaVector fejer_alphas(int n) {
  if (n < 1) throw Error(Errc::OutOfRange, "N must be positive");
  AlphaVector al;
  al.alpha.resize(n);
  for (int j = 1; j <= n; ++j) al.alpha[j - 1] = (2.0 / n) * (1.0 - static_cast<double>(j) / (n + 1));
  return al;
}

/// eps_k = sum_{j>k} alpha_j, accumulated from the tail.
inline GainVector alpha_to_gains(const AlphaVector& al) {
  const double sum = std::accumulate(al.alpha.begin(), al.alpha.end(), 0.0);
  if (al.alpha.empty() || std::abs(sum - 1.0) > kSumTol)
    throw Error(Errc::NotUnitSum, "alpha weights do not sum to one");
  const std::size_t n = al.alpha.size();
  GainVector g;
  g.eps.assign(n - 1, 0.0);
  double tail = 0.0;
  for (std::size_t k = n - 1; k >= 1; --k) {
    tail += al.alpha[k];
    g.eps[k - 1] = tail;
  }
  return g;
}

inline AlphaVector gains_to_alpha(const GainVector& g) {
  const std::size_t n = g.order();
  AlphaVector al;
  al.alpha.assign(n, 0.0);
  if (n == 1) {
    al.alpha[0] = 1.0;
    return al;
  }
  al.alpha[0] = 1.0 - g.eps[0];
  for (std::size_t j = 1; j + 1 < n; ++j) al.alpha[j] = g.eps[j - 1] - g.eps[j];
  al.alpha[n - 1] = g.eps[n - 2];
  return al;
}

/// q(z) = sum_j alpha_j z^j.
inline Polynomial alpha_polynomial(const AlphaVector& al) {
  std::vector<cplx> c(al.alpha.size() + 1, cplx(0.0));
  for (std::size_t j = 0; j < al.alpha.size(); ++j) c[j + 1] = al.alpha[j];
  return Polynomial(std::move(c));
}

inline Polynomial char_poly_linear(cplx mu, const CoeffVector& c) { return char_poly_linear(mu, std::span<const double>(c.a)); }

inline Polynomial char_poly_nonlinear(cplx mu, const AlphaVector& al) {
  return char_poly_nonlinear(mu, std::span<const double>(al.alpha));
}

struct OpenInterval {
  double lo = 0.0;
  double hi = 0.0;
  bool contains(double x) const { return x > lo && x < hi; }
  double midpoint() const { return 0.5 * (lo + hi); }
  double width() const { return hi - lo; }
};

/// One-delay gains eps for which lambda^2 + (-mu - eps) lambda + eps is
/// Schur stable for every real mu in (a_low, b_high). Accepts the closed
/// range -3 <= a_low < b_high <= 1; the interval is empty at a_low = -3.
inline OpenInterval theorem6_gain(double a_low, double b_high) {
  if (!(a_low >= -3.0 && a_low < b_high && b_high <= 1.0))
    throw Error(Errc::OutOfRange, "need -3 <= a < b <= 1");
  return {-(1.0 + a_low) / 2.0, 1.0};
}

/// Smallest Fejer order whose admissible domain contains |z + R| < R.
/// Radii within 1e-9 above a half-integer (sampling dust) round down.
inline int min_N_for_disc(double radius) {
  if (!(radius > 0.0)) throw Error(Errc::OutOfRange, "radius must be positive");
  return std::max(1, static_cast<int>(std::ceil(2.0 * radius - 1e-9)));
}

inline bool in_admissible_domain(const AlphaVector& al, cplx mu) {
  return is_schur_stable(char_poly_nonlinear(mu, al)).stable;
}

/// Multipliers stabilized by the non-linear control with weights alpha.
inline RegionRaster admissible_domain(const AlphaVector& al, const Window& w, int resolution) {
  if (al.alpha.empty()) throw Error(Errc::EmptyCoeffs, "alpha vector is empty");
  if (resolution < 64) throw Error(Errc::OutOfRange, "resolution must be at least 64");
  auto r = rasterize(w, resolution, [&](cplx mu) { return in_admissible_domain(al, mu); });
  if (r.count() == 0) throw Error(Errc::EmptyRegion, "no stable pixel in the window");
  return r;
}

/// Cross-check: mu is admissible iff q(z) = 1/mu has no solution with |z| <= 1,
/// i.e. mu q(z) - 1 has no root in the closed disc.
inline RegionRaster admissible_domain_inversion(const AlphaVector& al, const Window& w, int resolution) {
  const Polynomial q = alpha_polynomial(al);
  return rasterize(w, resolution, [&](cplx mu) {
    if (mu == cplx(0.0)) return true;
    std::vector<cplx> c(q.coeffs());
    for (auto& x : c) x *= mu;
    c[0] -= 1.0;
    const Polynomial p(std::move(c));
    if (p.degree() < 1) return true;
    for (const auto& r : roots(p))
      if (std::abs(r) <= 1.0 + kBoundaryTol) return false;
    return true;
  });
}

}  // namespace dfc
