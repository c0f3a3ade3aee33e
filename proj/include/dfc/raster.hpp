#pragma once

// Boolean rasters over a rectangle of the complex plane, with connected
// component labels, hole filling and diameter measurement.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "dfc/error.hpp"
#include "dfc/geometry.hpp"
#include "dfc/parallel.hpp"

namespace dfc {

/// Axis-aligned rectangle [re_min, re_max] x [im_min, im_max].
struct Window {
  double re_min = -18.0;
  double re_max = 18.0;
  double im_min = -18.0;
  double im_max = 18.0;

  bool contains(std::complex<double> z) const {
    return z.real() >= re_min && z.real() <= re_max && z.imag() >= im_min && z.imag() <= im_max;
  }

  /// Square window of half-width `half` whose pixel (res/2, res/2) is
  /// centred exactly on `c`.
  static Window centered_on(std::complex<double> c, double half, int res) {
    const double d = 2.0 * half / res;
    const double off = (res / 2 + 0.5) * d;
    return {c.real() - off, c.real() - off + 2.0 * half, c.imag() - off, c.imag() - off + 2.0 * half};
  }
};

inline constexpr Window kDefaultWindow{};
inline constexpr int kDefaultResolution = 1024;

/// Raster of a subset of the plane. Pixel (i, j) has column i (real axis)
/// and row j (imaginary axis, increasing upward); storage is row-major.
/// labels are 0 outside the mask and dense 1..components inside.
struct RegionRaster {
  Window window;
  int resolution = 0;
  std::vector<std::uint8_t> mask;
  std::vector<int> labels;
  int components = 0;
  bool contains_infinity = false;

  double dx() const { return (window.re_max - window.re_min) / resolution; }
  double dy() const { return (window.im_max - window.im_min) / resolution; }
  double pixel_diag() const { return std::hypot(dx(), dy()); }

  std::size_t index(int i, int j) const { return static_cast<std::size_t>(j) * resolution + i; }

  std::complex<double> center(int i, int j) const {
    return {window.re_min + (i + 0.5) * dx(), window.im_min + (j + 0.5) * dy()};
  }

  bool inside(int i, int j) const { return mask[index(i, j)] != 0; }

  /// Pixel containing z, if z lies in the window.
  std::optional<std::pair<int, int>> pixel_of(std::complex<double> z) const {
    if (!window.contains(z)) return std::nullopt;
    int i = static_cast<int>(std::floor((z.real() - window.re_min) / dx()));
    int j = static_cast<int>(std::floor((z.imag() - window.im_min) / dy()));
    i = std::clamp(i, 0, resolution - 1);
    j = std::clamp(j, 0, resolution - 1);
    return std::make_pair(i, j);
  }

  bool contains_point(std::complex<double> z) const {
    const auto px = pixel_of(z);
    return px && inside(px->first, px->second);
  }

  std::size_t count() const {
    return static_cast<std::size_t>(std::count(mask.begin(), mask.end(), std::uint8_t{1}));
  }
};

/// Labels 4-connected components in scan order; ids are dense from 1.
inline void label_components(RegionRaster& r) {
  const int n = r.resolution;
  r.labels.assign(r.mask.size(), 0);
  r.components = 0;
  std::vector<std::pair<int, int>> stack;
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      if (!r.inside(i, j) || r.labels[r.index(i, j)] != 0) continue;
      const int id = ++r.components;
      r.labels[r.index(i, j)] = id;
      stack.assign(1, {i, j});
      while (!stack.empty()) {
        const auto [ci, cj] = stack.back();
        stack.pop_back();
        const int nbr[4][2] = {{ci + 1, cj}, {ci - 1, cj}, {ci, cj + 1}, {ci, cj - 1}};
        for (const auto& p : nbr) {
          if (p[0] < 0 || p[1] < 0 || p[0] >= n || p[1] >= n) continue;
          const std::size_t k = r.index(p[0], p[1]);
          if (r.mask[k] && r.labels[k] == 0) {
            r.labels[k] = id;
            stack.push_back({p[0], p[1]});
          }
        }
      }
    }
  }
}

/// Rasterizes `member` at pixel centres (rows in parallel), labels the
/// result and probes one far exterior point for contains_infinity.
template <class Member>
RegionRaster rasterize(const Window& w, int resolution, Member&& member) {
  RegionRaster r;
  r.window = w;
  r.resolution = resolution;
  r.mask.assign(static_cast<std::size_t>(resolution) * resolution, 0);
  parallel_for(static_cast<std::size_t>(resolution), [&](std::size_t row) {
    const int j = static_cast<int>(row);
    for (int i = 0; i < resolution; ++i) r.mask[r.index(i, j)] = member(r.center(i, j)) ? 1 : 0;
  });
  const std::complex<double> mid{(w.re_min + w.re_max) / 2, (w.im_min + w.im_max) / 2};
  r.contains_infinity = member(mid + std::complex<double>(1e7, 1e7));
  label_components(r);
  return r;
}

/// Raster from an explicit mask.
inline RegionRaster from_mask(const Window& w, int resolution, std::vector<std::uint8_t> mask) {
  RegionRaster r;
  r.window = w;
  r.resolution = resolution;
  r.mask = std::move(mask);
  label_components(r);
  return r;
}

/// Pixels within Chebyshev distance `band` of a pixel whose mask value
/// differs from their own.
inline std::vector<std::uint8_t> boundary_band(const RegionRaster& r, int band) {
  const int n = r.resolution;
  std::vector<std::uint8_t> edge(r.mask.size(), 0);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      const bool v = r.inside(i, j);
      if ((i + 1 < n && r.inside(i + 1, j) != v) || (j + 1 < n && r.inside(i, j + 1) != v) ||
          (i > 0 && r.inside(i - 1, j) != v) || (j > 0 && r.inside(i, j - 1) != v))
        edge[r.index(i, j)] = 1;
    }
  if (band <= 0) return edge;
  std::vector<std::uint8_t> out(r.mask.size(), 0);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      if (!edge[r.index(i, j)]) continue;
      for (int dj = -band; dj <= band; ++dj)
        for (int di = -band; di <= band; ++di) {
          const int a = i + di, b = j + dj;
          if (a >= 0 && b >= 0 && a < n && b < n) out[r.index(a, b)] = 1;
        }
    }
  return out;
}

struct MaskAgreement {
  std::size_t disagreements = 0;  // all differing pixels
  std::size_t outside_band = 0;   // differing pixels not excused by the band
  bool agree() const { return outside_band == 0; }
};

/// Compares two rasters on the same grid; differences inside the
/// `band`-pixel boundary band of `primary` are tolerated.
inline MaskAgreement compare_masks(const RegionRaster& primary, const RegionRaster& check, int band) {
  MaskAgreement out;
  const auto excused = boundary_band(primary, band);
  for (std::size_t k = 0; k < primary.mask.size(); ++k) {
    if (primary.mask[k] == check.mask[k]) continue;
    ++out.disagreements;
    if (!excused[k]) ++out.outside_band;
  }
  return out;
}

/// Ids of components that contain a core pixel, i.e. one whose whole
/// (2 band + 1)^2 neighbourhood lies in the mask. Components without a core
/// pixel live entirely inside the boundary band and are not resolved at
/// this resolution.
inline std::vector<int> resolved_components(const RegionRaster& r, int band = 2) {
  const int n = r.resolution;
  std::vector<std::uint8_t> seen(static_cast<std::size_t>(r.components) + 1, 0);
  for (int j = band; j < n - band; ++j)
    for (int i = band; i < n - band; ++i) {
      const int id = r.labels[r.index(i, j)];
      if (id == 0 || seen[id]) continue;
      bool core = true;
      for (int dj = -band; dj <= band && core; ++dj)
        for (int di = -band; di <= band && core; ++di) core = r.inside(i + di, j + dj);
      if (core) seen[id] = 1;
    }
  std::vector<int> ids;
  for (int id = 1; id <= r.components; ++id)
    if (seen[id]) ids.push_back(id);
  return ids;
}

/// Minimal simply connected superset on the grid: everything except the
/// background reachable (4-connectivity) from unmasked border pixels.
inline RegionRaster fill_holes(const RegionRaster& r) {
  const int n = r.resolution;
  std::vector<std::uint8_t> outside(r.mask.size(), 0);
  std::deque<std::pair<int, int>> queue;
  auto seed = [&](int i, int j) {
    const std::size_t k = r.index(i, j);
    if (!r.mask[k] && !outside[k]) {
      outside[k] = 1;
      queue.push_back({i, j});
    }
  };
  for (int t = 0; t < n; ++t) {
    seed(t, 0);
    seed(t, n - 1);
    seed(0, t);
    seed(n - 1, t);
  }
  while (!queue.empty()) {
    const auto [i, j] = queue.front();
    queue.pop_front();
    if (i + 1 < n) seed(i + 1, j);
    if (i > 0) seed(i - 1, j);
    if (j + 1 < n) seed(i, j + 1);
    if (j > 0) seed(i, j - 1);
  }
  std::vector<std::uint8_t> hull(r.mask.size());
  for (std::size_t k = 0; k < hull.size(); ++k) hull[k] = outside[k] ? 0 : 1;
  auto out = from_mask(r.window, n, std::move(hull));
  out.contains_infinity = r.contains_infinity;
  return out;
}

struct DiameterReport {
  double total_diameter = 0.0;
  std::pair<std::complex<double>, std::complex<double>> total_witness{};
  std::map<int, double> component_diameters;
  std::map<int, std::pair<std::complex<double>, std::complex<double>>> witness_pairs;
};

namespace detail {

// Leftmost and rightmost pixel centres of each row suffice for the hull.
// Key 0 collects the whole mask; other keys are component ids.
inline std::map<int, std::vector<std::complex<double>>> row_extremes(const RegionRaster& r) {
  std::map<int, std::vector<std::complex<double>>> pts;
  const int n = r.resolution;
  std::map<int, std::pair<int, int>> span;
  for (int j = 0; j < n; ++j) {
    span.clear();
    for (int i = 0; i < n; ++i) {
      const int id = r.labels[r.index(i, j)];
      if (id == 0) continue;
      for (int key : {0, id}) {
        auto [it, fresh] = span.try_emplace(key, i, i);
        if (!fresh) it->second.second = i;
      }
    }
    for (const auto& [key, lohi] : span) {
      auto& v = pts[key];
      v.push_back(r.center(lohi.first, j));
      if (lohi.second != lohi.first) v.push_back(r.center(lohi.second, j));
    }
  }
  return pts;
}

}  // namespace detail

/// Total and per-component diameters over pixel centres.
inline DiameterReport diameters(const RegionRaster& r) {
  if (r.count() == 0) throw Error(Errc::EmptyRegion, "raster has no pixel inside the set");
  DiameterReport rep;
  const auto pts = detail::row_extremes(r);
  for (const auto& [key, v] : pts) {
    const auto fp = farthest_pair(v);
    if (key == 0) {
      rep.total_diameter = fp.distance;
      rep.total_witness = {fp.p, fp.q};
    } else {
      rep.component_diameters[key] = fp.distance;
      rep.witness_pairs[key] = {fp.p, fp.q};
    }
  }
  return rep;
}

}  // namespace dfc
