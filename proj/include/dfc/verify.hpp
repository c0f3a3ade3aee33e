#pragma once

// Named property suite behind `dfc verify`. Every property draws from its
// own generator seeded from (seed, index), so the report is a pure function
// of the seed and the tolerance scale.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "dfc/control.hpp"
#include "dfc/dynamics.hpp"
#include "dfc/io.hpp"
#include "dfc/multiplier_set.hpp"
#include "dfc/polynomial.hpp"
#include "dfc/region.hpp"
#include "dfc/sampling.hpp"

namespace dfc {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Property {
  std::string name;
  std::function<Outcome(Rng&, double)> run;  // (rng, tolerance scale)
};

struct PropertyResult {
  std::string name;
  Outcome outcome;
};

namespace props {

inline std::string g6(double x) { return fmt_double(x, "%.6g"); }

inline int band_for(double scale) { return std::max(0, static_cast<int>(std::lround(2.0 * scale))); }

inline double max_root_modulus(const Polynomial& p) { return is_schur_stable(p).max_root_modulus; }

inline Outcome schur_oracle_agreement(Rng& rng, double) {
  int compared = 0, skipped = 0, mismatches = 0, stable = 0;
  for (int t = 0; t < 10000; ++t) {
    const auto p = random_box_polynomial(rng, 10);
    const auto v = is_schur_stable(p);
    bool near = false;
    for (const auto& r : v.roots) near = near || std::abs(std::abs(r) - 1.0) <= 10.0 * kBoundaryTol;
    if (near) {
      ++skipped;
      continue;
    }
    ++compared;
    stable += v.stable;
    if (v.stable != schur_cohn_stable(p)) ++mismatches;
  }
  return {mismatches == 0, "compared=" + std::to_string(compared) + " stable=" + std::to_string(stable) +
                               " skipped=" + std::to_string(skipped) + " mismatches=" + std::to_string(mismatches)};
}

inline Outcome root_residual(Rng& rng, double scale) {
  double worst = 0.0;
  for (int t = 0; t < 10000; ++t) {
    const auto p = random_box_polynomial(rng, 10);
    for (const auto& r : roots(p))
      worst = std::max(worst, std::abs(p(r)) / std::pow(1.0 + std::abs(r), p.degree()));
  }
  return {worst <= 1e-8 * scale, "max_residual=" + g6(worst)};
}

inline Outcome vieta_bound(Rng& rng, double) {
  int violations = 0, unstable = 0;
  for (int t = 0; t < 1000; ++t) {
    const int n = uniform_int(rng, 1, 8);
    const auto s = random_admissible_real(rng, n);
    const auto a = real_part(s.a);
    if (!is_schur_stable(char_poly_linear(s.mu0, a)).stable) {
      ++unstable;
      continue;
    }
    const double v = 1.0 - s.mu0.real();
    if (!(v > 0.0 && v < std::ldexp(1.0, n))) ++violations;
  }
  return {violations == 0 && unstable == 0,
          "violations=" + std::to_string(violations) + " unstable_samples=" + std::to_string(unstable)};
}

inline Outcome char_poly_at_one(Rng& rng, double scale) {
  double worst = 0.0;
  for (int t = 0; t < 1000; ++t) {
    const int n = uniform_int(rng, 1, 10);
    std::vector<cplx> a(n);
    double mag = 1.0;
    cplx sum = 0.0;
    for (auto& x : a) {
      x = {uniform(rng, -3, 3), uniform(rng, -3, 3)};
      sum += x;
      mag += std::abs(x);
    }
    const cplx mu{uniform(rng, -5, 5), uniform(rng, -5, 5)};
    const cplx at_one = char_poly_linear(mu, std::span<const cplx>(a))(1.0);
    worst = std::max(worst, std::abs(at_one - (1.0 - mu + sum)) / (mag + std::abs(mu)));
  }
  return {worst <= 1e-14 * scale, "max_relative_error=" + g6(worst)};
}

inline Outcome inversion_equivalence(Rng& rng, double) {
  int compared = 0, skipped = 0, mismatches = 0, stable = 0;
  while (compared < 1000) {
    const int n = uniform_int(rng, 1, 6);
    const auto s = random_admissible_complex(rng, n);
    const double spread[3] = {0.3, 1.0, 4.0};
    const cplx mu = s.mu0 + random_in_disc(rng, spread[compared % 3]);
    if (mu == s.mu0) continue;
    const auto v = is_schur_stable(char_poly_linear(mu, std::span<const cplx>(s.a)));
    if (std::abs(v.margin) <= 1e-6) {
      ++skipped;
      continue;
    }
    ++compared;
    stable += v.stable;
    const PhiMap phi = make_phi(s.a, s.mu0);
    if (v.stable == in_phi_image(phi, 1.0 / (mu - s.mu0))) ++mismatches;
  }
  return {mismatches == 0, "compared=" + std::to_string(compared) + " stable=" + std::to_string(stable) +
                               " skipped=" + std::to_string(skipped) + " mismatches=" + std::to_string(mismatches)};
}

inline std::vector<AdmissiblePair> random_maps(Rng& rng, int count) {
  std::vector<AdmissiblePair> out;
  for (int t = 0; t < count; ++t) {
    const int n = uniform_int(rng, 2, 6);
    out.push_back(t % 2 ? random_admissible_complex(rng, n) : random_admissible_real(rng, n));
  }
  return out;
}

inline Outcome inner_disc_1_16(Rng& rng, double) {
  int failures = 0;
  const double radius = 1.0 / 16.0 - 1e-6;
  for (const auto& s : random_maps(rng, 20)) {
    const PhiMap phi = make_phi(s.a, s.mu0);
    for (int k = 0; k < 32; ++k)
      if (!in_phi_image(phi, std::polar(radius, 2.0 * std::numbers::pi * k / 32))) ++failures;
  }
  return {failures == 0, "maps=20 samples=640 failures=" + std::to_string(failures)};
}

/// Hull of the raster of Phi(closed disc) must hold every pixel centred
/// within 1/4 - pixel_diag of the origin.
inline int hull_disc_misses(const PhiMap& phi, int resolution, double half_width, double slack) {
  const Window w = Window::centered_on(0.0, half_width, resolution);
  const auto hull = fill_holes(raster_phi_image(phi, w, resolution));
  const double limit = 0.25 - slack * hull.pixel_diag();
  int misses = 0;
  for (int j = 0; j < resolution; ++j)
    for (int i = 0; i < resolution; ++i)
      if (std::abs(hull.center(i, j)) <= limit && !hull.inside(i, j)) ++misses;
  return misses;
}

inline Outcome hull_disc_1_4(Rng& rng, double scale) {
  int misses = 0;
  for (const auto& s : random_maps(rng, 20)) misses += hull_disc_misses(make_phi(s.a, s.mu0), 256, 2.0, scale);
  return {misses == 0, "maps=20 resolution=256 missed_pixels=" + std::to_string(misses)};
}

inline Outcome diameter_bounds(Rng& rng, double scale) {
  int failures = 0;
  double worst_total = 0.0, worst_component = 0.0;
  for (int t = 0; t < 12; ++t) {
    const int n = 2 + t % 3;
    const auto s = random_admissible_real(rng, n);
    const auto a = real_part(s.a);
    const int res = 256;
    const auto r = raster_Ma(a, s.mu0, Window::centered_on(s.mu0, 17.0, res), res);
    const auto b = verify_diameter_bounds(r, s.mu0);
    worst_total = std::max(worst_total, b.d_total);
    worst_component = std::max(worst_component, b.d_component);
    const double slack = 2.0 * scale * b.pixel_diag;
    if (!(b.d_total <= 16.0 + slack && b.d_component < 4.0 + slack)) ++failures;
  }
  return {failures == 0, "vectors=12 max_d_total=" + g6(worst_total) + " max_d_component=" + g6(worst_component) +
                             " failures=" + std::to_string(failures)};
}

inline Outcome inversion_involution(Rng& rng, double scale) {
  double worst = 0.0;
  for (int t = 0; t < 1000; ++t) {
    const cplx z = std::polar(std::pow(10.0, uniform(rng, -6, 6)), uniform(rng, 0, 2 * std::numbers::pi));
    worst = std::max(worst, std::abs(invert_point(invert_point(z)) - z) / std::abs(z));
  }
  return {worst <= 1e-12 * scale, "max_relative_error=" + g6(worst)};
}

inline Outcome ma_inversion_cross_check(Rng& rng, double scale) {
  std::size_t outside = 0, total = 0;
  const int band = band_for(scale);
  for (int t = 0; t < 4; ++t) {
    const auto s = random_admissible_real(rng, 2 + t % 3);
    const int res = 128;
    const Window w = Window::centered_on(s.mu0, 9.0, res);
    const auto direct = raster_Ma(s.a, s.mu0, w, res);
    const auto inv = raster_Ma_inversion(s.a, s.mu0, w, res);
    const auto cmp = compare_masks(direct, inv, band);
    outside += cmp.outside_band;
    total += cmp.disagreements;
  }
  return {outside == 0, "band=" + std::to_string(band) + " disagreements=" + std::to_string(total) +
                            " outside_band=" + std::to_string(outside)};
}

inline Outcome a2_triangle(Rng&, double scale) {
  const int n = 512;
  const double lo = -3.0, step = 6.0 / n;
  int compared = 0, mismatches = 0;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      const double a1 = lo + (i + 0.5) * step, a2 = lo + (j + 0.5) * step;
      const double dist = std::min({std::abs(a2 - 1.0), std::abs(a2 + 1.0 - a1) / std::sqrt(2.0),
                                    std::abs(a2 + 1.0 + a1) / std::sqrt(2.0)});
      if (dist <= 2.0 * scale * step) continue;
      ++compared;
      const std::vector<double> c{a2, a1, 1.0};
      const Polynomial p(std::vector<cplx>(c.begin(), c.end()));
      if (check_A2_membership(a1, a2) != is_schur_stable(p).stable) ++mismatches;
    }
  return {mismatches == 0, "compared=" + std::to_string(compared) + " mismatches=" + std::to_string(mismatches)};
}

/// Square window around the mask's bounding box, padded by a quarter of its
/// size on each side.
inline Window fit_window(const RegionRaster& r, int resolution) {
  double x0 = 1e300, x1 = -1e300, y0 = 1e300, y1 = -1e300;
  for (int j = 0; j < r.resolution; ++j)
    for (int i = 0; i < r.resolution; ++i)
      if (r.inside(i, j)) {
        const cplx c = r.center(i, j);
        x0 = std::min(x0, c.real());
        x1 = std::max(x1, c.real());
        y0 = std::min(y0, c.imag());
        y1 = std::max(y1, c.imag());
      }
  const double half = 0.75 * std::max(x1 - x0, y1 - y0) + r.pixel_diag();
  return Window::centered_on({(x0 + x1) / 2, (y0 + y1) / 2}, half, resolution);
}

inline Outcome resolution_consistency(Rng& rng, double) {
  int changed = 0;
  std::string counts;
  for (int t = 0; t < 3; ++t) {
    const auto s = random_admissible_real(rng, 2 + t);
    const auto a = real_part(s.a);
    const auto coarse = raster_Ma(a, s.mu0, Window::centered_on(s.mu0, 17.0, 256), 256);
    const auto lo = raster_Ma(a, s.mu0, fit_window(coarse, 128), 128);
    const auto hi = raster_Ma(a, s.mu0, fit_window(coarse, 256), 256);
    const auto kl = resolved_components(lo).size(), kh = resolved_components(hi).size();
    counts += (t ? "," : "") + std::to_string(kl) + "/" + std::to_string(kh);
    if (kl != kh || kl == 0) ++changed;
  }
  return {changed == 0, "resolved_components(128/256)=" + counts};
}

inline Outcome gains_coeffs_round_trip(Rng& rng, double scale) {
  double worst = 0.0, worst_sum = 0.0;
  for (int t = 0; t < 500; ++t) {
    const int n = uniform_int(rng, 1, 50);
    GainVector g;
    for (int k = 0; k + 1 < n; ++k) g.eps.push_back(uniform(rng, -2, 2));
    const auto c = gains_to_coeffs(g);
    double sum = 0.0;
    for (double x : c.a) sum += x;
    worst_sum = std::max(worst_sum, std::abs(sum));
    const auto back = coeffs_to_gains(c);
    for (std::size_t k = 0; k < g.eps.size(); ++k) worst = std::max(worst, std::abs(back.eps[k] - g.eps[k]));
  }
  return {worst <= 1e-12 * scale && worst_sum <= 1e-12 * scale,
          "max_round_trip_error=" + g6(worst) + " max_coeff_sum=" + g6(worst_sum)};
}

inline Outcome fejer_unit_sum(Rng&, double scale) {
  double worst = 0.0;
  for (int n = 1; n <= 64; ++n) {
    double s = 0.0;
    for (double x : fejer_alphas(n).alpha) s += x;
    worst = std::max(worst, std::abs(s - 1.0));
  }
  return {worst <= 1e-12 * scale, "max_sum_error=" + g6(worst)};
}

/// min over 2^16 boundary samples of Re q(e^{i theta}) for the Fejer weights.
inline double fejer_min_real_part(int n, int samples = 1 << 16) {
  const auto al = fejer_alphas(n);
  double best = std::numeric_limits<double>::infinity();
  for (int k = 0; k < samples; ++k) {
    const double th = 2.0 * std::numbers::pi * k / samples;
    double s = 0.0;
    for (int j = 1; j <= n; ++j) s += al.alpha[j - 1] * std::cos(j * th);
    best = std::min(best, s);
  }
  return best;
}

inline Outcome fejer_real_part_bound(Rng&, double scale) {
  int below = 0, not_attained = 0;
  double worst_gap = 0.0;
  for (int n = 1; n <= 64; ++n) {
    const double m = fejer_min_real_part(n);
    if (m < -1.0 / n - 1e-9 * scale) ++below;
    const double gap = m + 1.0 / n;
    worst_gap = std::max(worst_gap, gap);
    if (gap > 1e-6 * scale) ++not_attained;
  }
  return {below == 0 && not_attained == 0, "below_bound=" + std::to_string(below) + " not_attained=" +
                                               std::to_string(not_attained) + " max_gap=" + g6(worst_gap)};
}

/// Stability on a 64x64 polar grid of |mu + N/2| <= N/2 - shrink.
inline int fejer_disc_failures(int n, double shrink = 1e-3) {
  const auto al = fejer_alphas(n);
  const double radius = n / 2.0 - shrink;
  int failures = 0;
  for (int i = 0; i < 64; ++i)
    for (int k = 0; k < 64; ++k) {
      const cplx mu = -n / 2.0 + std::polar(radius * (i + 1) / 64.0, 2.0 * std::numbers::pi * k / 64.0);
      if (!in_admissible_domain(al, mu)) ++failures;
    }
  return failures;
}

inline Outcome fejer_disc_covering(Rng&, double) {
  int failures = 0;
  for (int n : {2, 4, 8, 12}) failures += fejer_disc_failures(n);
  return {failures == 0, "N=2,4,8,12 grid=64x64 failures=" + std::to_string(failures)};
}

/// Draw satisfying -3 < a < b < 1, eps in (-(1+a)/2, 1), mu in (a, b).
struct GainIntervalDraw {
  double a, b, eps, mu;
};

inline GainIntervalDraw gain_interval_draw(Rng& rng) {
  GainIntervalDraw d{};
  do {
    d.a = uniform(rng, -3.0, 1.0);
    d.b = uniform(rng, d.a, 1.0);
  } while (!(d.a > -3.0 && d.a < d.b && d.b < 1.0));
  const auto iv = theorem6_gain(d.a, d.b);
  do d.eps = uniform(rng, iv.lo, iv.hi);
  while (!iv.contains(d.eps));
  do d.mu = uniform(rng, d.a, d.b);
  while (!(d.mu > d.a && d.mu < d.b));
  return d;
}

inline bool gain_interval_stable(const GainIntervalDraw& d) {
  const CoeffVector c{{-d.eps, d.eps}};
  return is_schur_stable(char_poly_linear(d.mu, c)).stable;
}

inline Outcome one_delay_gain_guarantee(Rng& rng, double) {
  int failures = 0;
  for (int t = 0; t < 1000; ++t)
    if (!gain_interval_stable(gain_interval_draw(rng))) ++failures;
  return {failures == 0, "draws=1000 failures=" + std::to_string(failures)};
}

inline Primitive random_primitive(Rng& rng) {
  const cplx c{uniform(rng, -10, 10), uniform(rng, -10, 10)};
  switch (uniform_int(rng, 0, 4)) {
    case 0: return shape::Point{c};
    case 1: return shape::Segment{c, c + cplx(uniform(rng, -4, 4), uniform(rng, -4, 4))};
    case 2: return shape::Arc{c, uniform(rng, 0.1, 3), uniform(rng, 0, 3), uniform(rng, 3, 6)};
    case 3: return shape::Disc{c, uniform(rng, 0.1, 3)};
    default: return shape::Radial{uniform(rng, 0, 2), uniform(rng, 2, 6), uniform(rng, 0, 6)};
  }
}

inline Outcome blocker_monotone(Rng& rng, double) {
  int blocked = 0, flips = 0;
  for (int t = 0; t < 60; ++t) {
    MultiplierSet m;
    const int k = uniform_int(rng, 1, 3);
    for (int i = 0; i < k; ++i) m.primitives.push_back(random_primitive(rng));
    const bool before = no_control_exists(m, 1000).blocked();
    m.primitives.push_back(random_primitive(rng));
    const bool after = no_control_exists(m, 1000).blocked();
    blocked += before;
    if (before && !after) ++flips;
  }
  return {flips == 0, "sets=60 blocked=" + std::to_string(blocked) + " flips=" + std::to_string(flips)};
}

inline Outcome admissible_domain_cross_check(Rng&, double scale) {
  const int band = band_for(scale);
  std::size_t outside = 0, total = 0;
  for (int n : {2, 12}) {
    const auto al = fejer_alphas(n);
    const Window w{-n - 2.0, 2.0, -(n / 2.0 + 2.0), n / 2.0 + 2.0};
    const auto cmp = compare_masks(admissible_domain(al, w, 128), admissible_domain_inversion(al, w, 128), band);
    outside += cmp.outside_band;
    total += cmp.disagreements;
  }
  return {outside == 0, "band=" + std::to_string(band) + " disagreements=" + std::to_string(total) +
                            " outside_band=" + std::to_string(outside)};
}

struct Benchmark {
  SystemDef sys;
  State guess;
};

inline std::vector<Benchmark> benchmarks() {
  auto vec = [](std::initializer_list<double> v) {
    State s(static_cast<Eigen::Index>(v.size()));
    Eigen::Index k = 0;
    for (double x : v) s[k++] = x;
    return s;
  };
  const std::vector<double> l32{3.2}, l39{3.9};
  return {{builtin("logistic", l32), vec({0.6})},
          {builtin("logistic", l39), vec({0.7})},
          {builtin("sine"), vec({0.0})},
          {builtin("example_b"), vec({0.0, 0.0})},
          {builtin("example_b_diagonal"), vec({0.0, 0.0})},
          {builtin("sine3"), vec({0.0, 0.0, 0.0})},
          {builtin("ikeda"), vec({1.0, 0.0})},
          {builtin("ikeda_printed"), vec({0.5, 0.7})},
          {builtin("arnold_cat"), vec({0.0, 0.0})},
          {builtin("neural_sine3"), vec({0.0, 0.0, 0.0})}};
}

inline Outcome equilibrium_invariance(Rng& rng, double scale) {
  int failures = 0, runs = 0;
  for (const auto& b : benchmarks()) {
    const State xs = find_equilibrium(b.sys, b.guess);
    const double tol = 1e-12 * scale * std::max(1.0, xs.norm());
    for (int c = 0; c < 3; ++c) {
      const int n = uniform_int(rng, 2, 6);
      const auto hist = make_history(xs, n);
      GainVector g;
      for (int k = 0; k + 1 < n; ++k) g.eps.push_back(uniform(rng, -1, 1));
      const auto al = fejer_alphas(n);
      const Trajectory ts[3] = {simulate_linear_dfc(b.sys, g, hist, 1), simulate_nonlinear_dfc(b.sys, g, hist, 1),
                                simulate_nonlinear_dfc(b.sys, al, hist, 1)};
      for (const auto& t : ts) {
        ++runs;
        if (t.states.size() != 2 || t.control_magnitudes[0] > tol ||
            wrapped_difference(b.sys, t.states[1], xs).lpNorm<Eigen::Infinity>() > tol)
          ++failures;
      }
    }
  }
  return {failures == 0, "runs=" + std::to_string(runs) + " failures=" + std::to_string(failures)};
}

struct StabilizedCase {
  std::string label;
  SystemDef sys;
  State guess;
  std::optional<GainVector> linear;  // linear control when set, else Fejer non-linear
  int fejer_n = 0;
};

inline std::vector<StabilizedCase> stabilized_cases() {
  const std::vector<double> l32{3.2}, l39{3.9};
  State g1(1), g2(2), g3(3);
  g1 << 0.6;
  g2 << 1.0, 0.0;
  g3 << 0.0, 0.0, 0.0;
  State g0(1);
  g0 << 0.0;
  return {{"logistic3.2_linear", builtin("logistic", l32), g1, GainVector{{0.75}}, 0},
          {"logistic3.9_fejer2", builtin("logistic", l39), g1, std::nullopt, 2},
          {"sine0.3_fejer3", builtin("sine"), g0, std::nullopt, 3},
          {"ikeda_fejer8", builtin("ikeda"), g2, std::nullopt, 8},
          {"sine3_fejer4", builtin("sine3"), g3, std::nullopt, 4}};
}

/// Dominant closed-loop root modulus over the multipliers at x*.
inline double predicted_rate(const StabilizedCase& c, const State& xs) {
  double worst = 0.0;
  for (const auto& mu : multipliers(c.sys, xs)) {
    const Polynomial p = c.linear ? char_poly_linear(mu, gains_to_coeffs(*c.linear))
                                  : char_poly_nonlinear(mu, fejer_alphas(c.fejer_n));
    worst = std::max(worst, max_root_modulus(p));
  }
  return worst;
}

inline Trajectory run_case(const StabilizedCase& c, const State& xs, std::uint64_t seed, std::size_t steps,
                           double radius = 1e-3) {
  const std::size_t order = c.linear ? c.linear->order() : static_cast<std::size_t>(c.fejer_n);
  const auto hist = make_history(xs, order, radius, seed);
  if (c.linear) return simulate_linear_dfc(c.sys, *c.linear, hist, steps);
  return simulate_nonlinear_dfc(c.sys, alpha_to_gains(fejer_alphas(c.fejer_n)), hist, steps);
}

inline Outcome form_equivalence(Rng& rng, double scale) {
  double worst = 0.0;
  for (const auto& c : stabilized_cases()) {
    if (c.linear) continue;
    const State xs = find_equilibrium(c.sys, c.guess);
    const auto al = fejer_alphas(c.fejer_n);
    const auto hist = make_history(xs, al.order(), 1e-3, rng());
    const auto te = simulate_nonlinear_dfc(c.sys, alpha_to_gains(al), hist, 1000);
    const auto ta = simulate_nonlinear_dfc(c.sys, al, hist, 1000);
    if (te.states.size() != ta.states.size()) return {false, c.label + " lengths differ"};
    for (std::size_t k = 0; k < te.states.size(); ++k)
      worst = std::max(worst, (te.states[k] - ta.states[k]).lpNorm<Eigen::Infinity>());
  }
  return {worst <= 1e-10 * scale, "steps=1000 max_difference=" + g6(worst)};
}

inline Outcome local_consistency(Rng& rng, double scale) {
  std::string detail;
  bool ok = true;
  for (const auto& c : stabilized_cases()) {
    const State xs = find_equilibrium(c.sys, c.guess);
    const double predicted = predicted_rate(c, xs);
    const auto st = convergence_stats(c.sys, run_case(c, xs, rng(), 5000), xs);
    const bool pass = st.converged && std::abs(st.rate - predicted) <= 0.05 * scale;
    ok = ok && pass;
    detail += (detail.empty() ? "" : " ") + c.label + "=" + g6(st.rate) + "/" + g6(predicted);
  }
  return {ok, "observed/predicted " + detail};
}

inline Outcome jacobian_fd_agreement(Rng& rng, double scale) {
  double worst = 0.0;
  for (const auto& b : benchmarks()) {
    for (int t = 0; t < 100; ++t) {
      State x(b.sys.dim);
      for (int k = 0; k < b.sys.dim; ++k) x[k] = b.sys.wrapped() ? uniform(rng, 0.01, 0.99) : uniform(rng, -1, 1);
      const Eigen::MatrixXd d = b.sys.jacobian(x, b.sys.param) - finite_difference_jacobian(b.sys, x);
      worst = std::max(worst, d.cwiseAbs().maxCoeff());
    }
  }
  return {worst <= 1e-5 * scale, "systems=" + std::to_string(benchmarks().size()) +
                                     " states=100 max_elementwise=" + g6(worst)};
}

inline Outcome builtin_multipliers(Rng& rng, double scale) {
  double worst = 0.0;
  for (int t = 0; t < 20; ++t) {
    const double h = uniform(rng, 1.1, 4.0);
    const std::vector<double> p{h};
    const auto sys = builtin("logistic", p);
    State g(1);
    g << 0.9;
    const State xs = find_equilibrium(sys, g);
    worst = std::max(worst, std::abs(xs[0] - (1.0 - 1.0 / h)));
    worst = std::max(worst, std::abs(multipliers(sys, xs)[0] - cplx(2.0 - h)));
  }
  const double s5 = std::sqrt(5.0);
  const auto cat = builtin("arnold_cat");
  const auto mc = multipliers(cat, State::Zero(2));
  worst = std::max({worst, std::abs(mc[0] - cplx((3 - s5) / 2)), std::abs(mc[1] - cplx((3 + s5) / 2))});
  const double h = -1.5;
  const std::vector<double> ps{h};
  const auto ms = multipliers(builtin("sine3", ps), State::Zero(3));
  const cplx expect[3] = {-2.0 * std::abs(h), std::polar(std::abs(h), -2 * std::numbers::pi / 3),
                          std::polar(std::abs(h), 2 * std::numbers::pi / 3)};
  for (int k = 0; k < 3; ++k) worst = std::max(worst, std::abs(ms[k] - expect[k]));
  return {worst <= 1e-9 * scale, "max_error=" + g6(worst)};
}

}  // namespace props

inline std::vector<Property> property_suite() {
  using namespace props;
  return {{"schur_oracle_agreement", schur_oracle_agreement},
          {"root_residual", root_residual},
          {"vieta_bound", vieta_bound},
          {"char_poly_at_one", char_poly_at_one},
          {"inversion_equivalence", inversion_equivalence},
          {"inner_disc_1_16", inner_disc_1_16},
          {"hull_disc_1_4", hull_disc_1_4},
          {"diameter_bounds", diameter_bounds},
          {"inversion_involution", inversion_involution},
          {"ma_inversion_cross_check", ma_inversion_cross_check},
          {"a2_triangle", a2_triangle},
          {"resolution_consistency", resolution_consistency},
          {"gains_coeffs_round_trip", gains_coeffs_round_trip},
          {"fejer_unit_sum", fejer_unit_sum},
          {"fejer_real_part_bound", fejer_real_part_bound},
          {"fejer_disc_covering", fejer_disc_covering},
          {"one_delay_gain_guarantee", one_delay_gain_guarantee},
          {"blocker_monotone", blocker_monotone},
          {"admissible_domain_cross_check", admissible_domain_cross_check},
          {"equilibrium_invariance", equilibrium_invariance},
          {"form_equivalence", form_equivalence},
          {"local_consistency", local_consistency},
          {"jacobian_fd_agreement", jacobian_fd_agreement},
          {"builtin_multipliers", builtin_multipliers}};
}

inline Rng property_rng(std::uint64_t seed, std::size_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index)};
  return Rng(seq);
}

/// Runs every property (or those whose name is listed in `only`).
inline std::vector<PropertyResult> run_properties(std::uint64_t seed, double tolerance_scale,
                                                  const std::vector<std::string>& only = {}) {
  std::vector<PropertyResult> out;
  const auto suite = property_suite();
  for (std::size_t i = 0; i < suite.size(); ++i) {
    if (!only.empty() && std::find(only.begin(), only.end(), suite[i].name) == only.end()) continue;
    Rng rng = property_rng(seed, i);
    PropertyResult r{suite[i].name, {}};
    try {
      r.outcome = suite[i].run(rng, tolerance_scale);
    } catch (const std::exception& e) {
      r.outcome = {false, std::string("exception: ") + e.what()};
    }
    out.push_back(std::move(r));
  }
  return out;
}

inline std::string format_results(const std::vector<PropertyResult>& rs, std::uint64_t seed, double scale) {
  std::string out;
  int failed = 0;
  for (const auto& r : rs) {
    out += std::string(r.outcome.pass ? "PASS " : "FAIL ") + r.name + " : " + r.outcome.detail + "\n";
    failed += !r.outcome.pass;
  }
  out += "summary: passed=" + std::to_string(rs.size() - failed) + " failed=" + std::to_string(failed) +
         " seed=" + std::to_string(seed) + " tolerance_scale=" + fmt_double(scale, "%g") + "\n";
  return out;
}

}  // namespace dfc
