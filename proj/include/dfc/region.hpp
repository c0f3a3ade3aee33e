#pragma once

// The disc map Phi(z) = z / (1 + q(z)), its image, and the multiplier region
// M_a = { mu : lambda^N + (-mu + a_1) lambda^{N-1} + ... + a_N Schur stable }.
//
// By the inversion criterion, mu is in M_a exactly when 1 / (mu - mu0) lies
// outside Phi(closed disc), where q(z) = (a_1 - mu0) z + a_2 z^2 + ... + a_N z^N.

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <span>
#include <vector>

#include "dfc/error.hpp"
#include "dfc/polynomial.hpp"
#include "dfc/raster.hpp"
#include "dfc/types.hpp"

namespace dfc {

struct PhiMap {
  Polynomial q;          // q(0) = 0
  cplx mu0{};
  std::vector<cplx> a;
  bool pole_free = true;  // 1 + q has no zero with |z| <= 1 + kBoundaryTol
  double min_pole_modulus = 0.0;

  cplx operator()(cplx z) const { return z / (1.0 + q(z)); }
};

inline PhiMap make_phi(std::span<const cplx> a, cplx mu0) {
  if (a.empty()) throw Error(Errc::EmptyCoeffs, "coefficient vector is empty");
  PhiMap phi;
  phi.a.assign(a.begin(), a.end());
  phi.mu0 = mu0;
  std::vector<cplx> q(a.size() + 1, cplx(0.0));
  q[1] = a[0] - mu0;
  for (std::size_t k = 1; k < a.size(); ++k) q[k + 1] = a[k];
  phi.q = Polynomial(std::move(q));

  std::vector<cplx> one_plus(phi.q.coeffs());
  one_plus[0] += 1.0;
  const Polynomial denom(std::move(one_plus));
  phi.min_pole_modulus = std::numeric_limits<double>::infinity();
  if (denom.degree() >= 1) {
    for (const auto& r : roots(denom)) phi.min_pole_modulus = std::min(phi.min_pole_modulus, std::abs(r));
  }
  phi.pole_free = phi.min_pole_modulus > 1.0 + kBoundaryTol;
  return phi;
}

inline PhiMap make_phi(const CoeffVector& a, cplx mu0) {
  std::vector<cplx> ac(a.a.begin(), a.a.end());
  return make_phi(std::span<const cplx>(ac), mu0);
}

/// Phi at the n-th roots of unity, starting at z = 1.
inline std::vector<cplx> phi_boundary(const PhiMap& phi, int n_samples) {
  if (n_samples < 16) throw Error(Errc::OutOfRange, "phi_boundary needs at least 16 samples");
  std::vector<cplx> out(n_samples);
  for (int k = 0; k < n_samples; ++k) {
    const cplx z = k == 0 ? cplx(1.0, 0.0) : std::polar(1.0, 2.0 * std::numbers::pi * k / n_samples);
    const cplx den = 1.0 + phi.q(z);
    if (std::abs(den) <= kBoundaryTol)
      throw Error(Errc::PoleInsideDisc, "boundary sample lies on a pole of Phi");
    out[k] = z / den;
  }
  return out;
}

/// w in Phi(closed disc): w (1 + q(z)) - z has a root with |z| <= 1 + tol.
inline bool in_phi_image(const PhiMap& phi, cplx w) {
  if (w == cplx(0.0)) return true;
  std::vector<cplx> c(phi.q.coeffs());
  c.resize(std::max<std::size_t>(c.size(), 2), cplx(0.0));
  for (auto& x : c) x *= w;
  c[0] += w;
  c[1] -= 1.0;
  const Polynomial p(std::move(c));
  if (p.degree() < 1) return false;
  for (const auto& r : roots(p))
    if (std::abs(r) <= 1.0 + kBoundaryTol) return true;
  return false;
}

/// Inversion in the unit circle, z -> 1 / conj(z).
inline cplx invert_point(cplx z) {
  if (z == cplx(0.0)) throw Error(Errc::OriginInversion, "inversion of the origin");
  return 1.0 / std::conj(z);
}

inline bool in_Ma(std::span<const cplx> a, cplx mu) {
  return is_schur_stable(char_poly_linear(mu, a)).stable;
}

namespace detail {

inline std::vector<cplx> to_complex(std::span<const double> a) { return {a.begin(), a.end()}; }

inline void require_nonempty(const RegionRaster& r) {
  if (r.count() == 0) throw Error(Errc::EmptyRegion, "no stable pixel in the window");
}

}  // namespace detail

/// M_a by direct Schur tests at pixel centres.
inline RegionRaster raster_Ma(std::span<const cplx> a, cplx /*mu0*/, const Window& w, int resolution) {
  if (a.empty()) throw Error(Errc::EmptyCoeffs, "coefficient vector is empty");
  if (resolution < 64) throw Error(Errc::OutOfRange, "resolution must be at least 64");
  auto r = rasterize(w, resolution, [&](cplx mu) { return in_Ma(a, mu); });
  detail::require_nonempty(r);
  return r;
}

inline RegionRaster raster_Ma(const CoeffVector& a, cplx mu0, const Window& w, int resolution) {
  const auto ac = detail::to_complex(a.a);
  return raster_Ma(std::span<const cplx>(ac), mu0, w, resolution);
}

/// M_a by the inversion criterion: mu is in when 1/(mu - mu0) is not in
/// Phi(closed disc). Independent of the direct path; used as its cross-check.
inline RegionRaster raster_Ma_inversion(std::span<const cplx> a, cplx mu0, const Window& w,
                                        int resolution) {
  const PhiMap phi = make_phi(a, mu0);
  return rasterize(w, resolution, [&](cplx mu) {
    const cplx d = mu - mu0;
    if (d == cplx(0.0)) return phi.pole_free;
    return !in_phi_image(phi, 1.0 / d);
  });
}

inline RegionRaster raster_Ma_inversion(const CoeffVector& a, cplx mu0, const Window& w, int resolution) {
  const auto ac = detail::to_complex(a.a);
  return raster_Ma_inversion(std::span<const cplx>(ac), mu0, w, resolution);
}

/// Raster of Phi(closed disc) itself.
inline RegionRaster raster_phi_image(const PhiMap& phi, const Window& w, int resolution) {
  return rasterize(w, resolution, [&](cplx z) { return in_phi_image(phi, z); });
}

struct DiameterBounds {
  double d_total = 0.0;
  double d_component = 0.0;  // component containing mu0
  bool pass_16 = false;
  bool pass_4 = false;
  double pixel_diag = 0.0;
  int components = 0;
  int resolved_components = 0;
};

/// Universal bounds: d(M_a) <= 16 and the mu0 component has diameter < 4,
/// each up to two pixel diagonals.
inline DiameterBounds verify_diameter_bounds(const RegionRaster& r, cplx mu0) {
  const auto px = r.pixel_of(mu0);
  if (!px || !r.inside(px->first, px->second))
    throw Error(Errc::Mu0NotInRegion, "the pixel of mu0 is not stable");
  const auto rep = diameters(r);
  DiameterBounds b;
  b.pixel_diag = r.pixel_diag();
  b.d_total = rep.total_diameter;
  b.d_component = rep.component_diameters.at(r.labels[r.index(px->first, px->second)]);
  b.pass_16 = b.d_total <= 16.0 + 2.0 * b.pixel_diag;
  b.pass_4 = b.d_component < 4.0 + 2.0 * b.pixel_diag;
  b.components = r.components;
  b.resolved_components = static_cast<int>(resolved_components(r).size());
  return b;
}

inline DiameterBounds verify_diameter_bounds(const CoeffVector& a, cplx mu0, const Window& w, int resolution) {
  try {
    return verify_diameter_bounds(raster_Ma(a, mu0, w, resolution), mu0);
  } catch (const Error& e) {
    if (e.code() == Errc::EmptyRegion) throw Error(Errc::Mu0NotInRegion, "no stable pixel in the window");
    throw;
  }
}

/// Analytic Schur region of lambda^2 + a1 lambda + a2.
inline bool check_A2_membership(double a1, double a2) { return a2 + 1.0 > std::abs(a1) && a2 < 1.0; }

}  // namespace dfc
