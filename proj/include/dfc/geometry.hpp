#pragma once

// Planar convex hull and farthest pair (rotating calipers) on points stored
// as complex numbers.

#include <algorithm>
#include <complex>
#include <vector>

namespace dfc {

struct FarthestPair {
  double distance = 0.0;
  std::complex<double> p{};
  std::complex<double> q{};
};

namespace detail {

inline double cross(std::complex<double> o, std::complex<double> a, std::complex<double> b) {
  return (a.real() - o.real()) * (b.imag() - o.imag()) - (a.imag() - o.imag()) * (b.real() - o.real());
}

}  // namespace detail

/// Andrew's monotone chain. Counterclockwise, collinear points dropped.
inline std::vector<std::complex<double>> convex_hull(std::vector<std::complex<double>> pts) {
  auto less = [](const std::complex<double>& a, const std::complex<double>& b) {
    return a.real() < b.real() || (a.real() == b.real() && a.imag() < b.imag());
  };
  std::sort(pts.begin(), pts.end(), less);
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 3) return pts;

  std::vector<std::complex<double>> hull(2 * pts.size());
  std::size_t k = 0;
  for (const auto& p : pts) {
    while (k >= 2 && detail::cross(hull[k - 2], hull[k - 1], p) <= 0) --k;
    hull[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
    while (k >= t && detail::cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  return hull;
}

/// Diameter of a point set: rotating calipers over its convex hull.
inline FarthestPair farthest_pair(const std::vector<std::complex<double>>& pts) {
  FarthestPair best;
  if (pts.empty()) return best;
  const auto hull = convex_hull(pts);
  const std::size_t h = hull.size();
  if (h == 1) {
    best.p = best.q = hull[0];
    return best;
  }
  if (h == 2) {
    best = {std::abs(hull[0] - hull[1]), hull[0], hull[1]};
    return best;
  }
  std::size_t j = 1;
  for (std::size_t i = 0; i < h; ++i) {
    const std::size_t ni = (i + 1) % h;
    while (std::abs(detail::cross(hull[i], hull[ni], hull[(j + 1) % h])) >
           std::abs(detail::cross(hull[i], hull[ni], hull[j])))
      j = (j + 1) % h;
    for (std::size_t cand : {i, ni}) {
      const double d = std::abs(hull[cand] - hull[j]);
      if (d > best.distance) best = {d, hull[cand], hull[j]};
    }
  }
  return best;
}

}  // namespace dfc
