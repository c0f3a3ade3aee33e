#pragma once

// Sets of possible multiplier locations as unions of simple shapes, their
// text format, coverage tests against rasters, and the necessary conditions
// that rule out any stabilizing linear delayed feedback control.

#include <algorithm>
#include <cmath>
#include <complex>
#include <istream>
#include <numbers>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

#include "dfc/error.hpp"
#include "dfc/geometry.hpp"
#include "dfc/raster.hpp"

namespace dfc {

namespace shape {
struct Point {
  std::complex<double> c;
};
struct Segment {
  std::complex<double> from, to;
};
struct Arc {
  std::complex<double> center;
  double radius, theta1, theta2;
};
struct Disc {
  std::complex<double> center;
  double radius;
};
/// { rho e^{i theta} : rho in [rho1, rho2] }
struct Radial {
  double rho1, rho2, theta;
};
}  // namespace shape

using Primitive = std::variant<shape::Point, shape::Segment, shape::Arc, shape::Disc, shape::Radial>;

struct MultiplierSet {
  std::vector<Primitive> primitives;
};

inline constexpr int kDefaultCoverDensity = 1000;
inline constexpr int kDefaultBlockerSamples = 10000;

/// `n` deterministic samples of a primitive. Curves are sampled uniformly
/// including both endpoints; discs use a Vogel spiral, which stays strictly
/// inside the open disc.
inline std::vector<std::complex<double>> sample(const Primitive& p, int n) {
  n = std::max(n, 2);
  std::vector<std::complex<double>> out;
  auto line = [&](auto at) {
    out.reserve(n);
    for (int k = 0; k < n; ++k) out.push_back(at(static_cast<double>(k) / (n - 1)));
  };
  std::visit(
      [&](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, shape::Point>) {
          out.push_back(s.c);
        } else if constexpr (std::is_same_v<T, shape::Segment>) {
          line([&](double t) { return s.from + t * (s.to - s.from); });
        } else if constexpr (std::is_same_v<T, shape::Arc>) {
          line([&](double t) { return s.center + std::polar(s.radius, s.theta1 + t * (s.theta2 - s.theta1)); });
        } else if constexpr (std::is_same_v<T, shape::Radial>) {
          line([&](double t) { return std::polar(s.rho1 + t * (s.rho2 - s.rho1), s.theta); });
        } else {
          const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
          out.reserve(n);
          for (int k = 0; k < n; ++k)
            out.push_back(s.center + std::polar(s.radius * std::sqrt((k + 0.5) / n), golden * k));
        }
      },
      p);
  return out;
}

/// Typical distance between neighbouring samples.
inline double sample_spacing(const Primitive& p, int n) {
  n = std::max(n, 2);
  return std::visit(
      [&](const auto& s) -> double {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, shape::Point>) return 0.0;
        else if constexpr (std::is_same_v<T, shape::Segment>) return std::abs(s.to - s.from) / (n - 1);
        else if constexpr (std::is_same_v<T, shape::Arc>)
          return s.radius * std::abs(s.theta2 - s.theta1) / (n - 1);
        else if constexpr (std::is_same_v<T, shape::Radial>) return std::abs(s.rho2 - s.rho1) / (n - 1);
        else return 2.0 * s.radius * std::sqrt(std::numbers::pi / n);
      },
      p);
}

// ---------------------------------------------------------------------------
// Text format: one primitive per line, '#' starts a comment.
//   point re im | segment re1 im1 re2 im2 | disc re im r
//   arc re im r th1 th2 | radial rho1 rho2 theta

inline MultiplierSet parse_multiplier_set(std::istream& in) {
  MultiplierSet m;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    std::string kind;
    if (!(ls >> kind)) continue;
    auto fail = [&](const std::string& why) {
      throw Error(Errc::ParseError, "line " + std::to_string(lineno) + ": " + why);
    };
    auto read = [&](int count) {
      std::vector<double> v(count);
      for (auto& x : v)
        if (!(ls >> x)) fail("expected " + std::to_string(count) + " numbers after '" + kind + "'");
      std::string extra;
      if (ls >> extra) fail("trailing token '" + extra + "'");
      for (double x : v)
        if (!std::isfinite(x)) fail("non-finite number");
      return v;
    };
    if (kind == "point") {
      const auto v = read(2);
      m.primitives.push_back(shape::Point{{v[0], v[1]}});
    } else if (kind == "segment") {
      const auto v = read(4);
      m.primitives.push_back(shape::Segment{{v[0], v[1]}, {v[2], v[3]}});
    } else if (kind == "disc") {
      const auto v = read(3);
      if (v[2] <= 0) fail("disc radius must be positive");
      m.primitives.push_back(shape::Disc{{v[0], v[1]}, v[2]});
    } else if (kind == "arc") {
      const auto v = read(5);
      if (v[2] <= 0) fail("arc radius must be positive");
      m.primitives.push_back(shape::Arc{{v[0], v[1]}, v[2], v[3], v[4]});
    } else if (kind == "radial") {
      const auto v = read(3);
      m.primitives.push_back(shape::Radial{v[0], v[1], v[2]});
    } else {
      fail("unknown primitive '" + kind + "'");
    }
  }
  if (m.primitives.empty()) throw Error(Errc::ParseError, "multiplier set is empty");
  return m;
}

inline MultiplierSet parse_multiplier_set(const std::string& text) {
  std::istringstream in(text);
  return parse_multiplier_set(in);
}

inline std::string format_multiplier_set(const MultiplierSet& m) {
  std::ostringstream os;
  os.precision(17);
  for (const auto& p : m.primitives) {
    std::visit(
        [&](const auto& s) {
          using T = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<T, shape::Point>)
            os << "point " << s.c.real() << ' ' << s.c.imag();
          else if constexpr (std::is_same_v<T, shape::Segment>)
            os << "segment " << s.from.real() << ' ' << s.from.imag() << ' ' << s.to.real() << ' ' << s.to.imag();
          else if constexpr (std::is_same_v<T, shape::Arc>)
            os << "arc " << s.center.real() << ' ' << s.center.imag() << ' ' << s.radius << ' ' << s.theta1 << ' '
               << s.theta2;
          else if constexpr (std::is_same_v<T, shape::Radial>)
            os << "radial " << s.rho1 << ' ' << s.rho2 << ' ' << s.theta;
          else
            os << "disc " << s.center.real() << ' ' << s.center.imag() << ' ' << s.radius;
        },
        p);
    os << '\n';
  }
  return os.str();
}

// ---------------------------------------------------------------------------

struct CoverageReport {
  std::size_t samples = 0;
  double fraction = 0.0;
  std::vector<std::complex<double>> uncovered;
};

/// Fraction of primitive samples whose pixel lies in the raster.
inline CoverageReport covers(const MultiplierSet& m, const RegionRaster& r, int density = kDefaultCoverDensity) {
  CoverageReport rep;
  std::size_t inside = 0;
  for (const auto& p : m.primitives) {
    for (const auto& z : sample(p, density)) {
      if (!r.window.contains(z)) throw Error(Errc::WindowMiss, "primitive leaves the raster window");
      ++rep.samples;
      if (r.contains_point(z)) ++inside;
      else rep.uncovered.push_back(z);
    }
  }
  rep.fraction = rep.samples ? static_cast<double>(inside) / rep.samples : 0.0;
  return rep;
}

enum class Verdict { Unknown, Blocked };

enum class BlockReason {
  None,
  DiameterAbove16,         // d(M) > 16
  ComponentAbove4,         // a connected component has diameter > 4
  RealMultiplierNotBelow1  // a real multiplier >= 1
};

inline const char* to_string(BlockReason r) {
  switch (r) {
    case BlockReason::None: return "none";
    case BlockReason::DiameterAbove16: return "diameter > 16";
    case BlockReason::ComponentAbove4: return "component diameter > 4";
    case BlockReason::RealMultiplierNotBelow1: return "real multiplier >= 1";
  }
  return "?";
}

struct ControlVerdict {
  Verdict verdict = Verdict::Unknown;
  BlockReason reason = BlockReason::None;
  double d_total = 0.0;
  double max_component_diameter = 0.0;
  int components = 0;
  bool blocked() const { return verdict == Verdict::Blocked; }
};

namespace detail {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};

// True when some sample of `a` is within `thr` of some sample of `b`.
inline bool within(const std::vector<std::complex<double>>& a, const std::vector<std::complex<double>>& b,
                   double thr) {
  if (thr <= 0.0) {
    for (const auto& x : a)
      for (const auto& y : b)
        if (x == y) return true;
    return false;
  }
  auto key = [thr](std::complex<double> z) {
    const auto ix = static_cast<long long>(std::floor(z.real() / thr));
    const auto iy = static_cast<long long>(std::floor(z.imag() / thr));
    return std::make_pair(ix, iy);
  };
  struct Hash {
    std::size_t operator()(const std::pair<long long, long long>& k) const {
      return std::hash<long long>()(k.first * 1000003LL ^ k.second);
    }
  };
  std::unordered_map<std::pair<long long, long long>, std::vector<std::complex<double>>, Hash> grid;
  for (const auto& y : b) grid[key(y)].push_back(y);
  for (const auto& x : a) {
    const auto [ix, iy] = key(x);
    for (long long dx = -1; dx <= 1; ++dx)
      for (long long dy = -1; dy <= 1; ++dy) {
        const auto it = grid.find({ix + dx, iy + dy});
        if (it == grid.end()) continue;
        for (const auto& y : it->second)
          if (std::abs(x - y) <= thr) return true;
      }
  }
  return false;
}

}  // namespace detail

/// Necessary conditions for any stabilizing linear control: d(M) <= 16,
/// every connected component of diameter <= 4, and every real multiplier
/// below 1. Returns Blocked with the first violated condition, otherwise
/// Unknown (the conditions are not sufficient). Primitives whose samples
/// come within two sample spacings of each other form one component.
inline ControlVerdict no_control_exists(const MultiplierSet& m, int samples = kDefaultBlockerSamples) {
  ControlVerdict v;
  const int k = static_cast<int>(m.primitives.size());
  std::vector<std::vector<std::complex<double>>> pts(k);
  std::vector<double> spacing(k);
  std::vector<std::complex<double>> all;
  for (int i = 0; i < k; ++i) {
    pts[i] = sample(m.primitives[i], samples);
    spacing[i] = sample_spacing(m.primitives[i], samples);
    all.insert(all.end(), pts[i].begin(), pts[i].end());
  }
  v.d_total = farthest_pair(all).distance;

  detail::UnionFind uf(k);
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j)
      if (uf.find(i) != uf.find(j) && detail::within(pts[i], pts[j], 2.0 * std::max(spacing[i], spacing[j])))
        uf.unite(i, j);
  std::vector<std::vector<std::complex<double>>> groups(k);
  for (int i = 0; i < k; ++i) {
    auto& g = groups[uf.find(i)];
    g.insert(g.end(), pts[i].begin(), pts[i].end());
  }
  for (const auto& g : groups) {
    if (g.empty()) continue;
    ++v.components;
    v.max_component_diameter = std::max(v.max_component_diameter, farthest_pair(g).distance);
  }

  bool real_at_or_above_one = false;
  for (const auto& z : all)
    if (std::abs(z.imag()) <= 1e-12 * std::max(1.0, std::abs(z)) && z.real() >= 1.0) real_at_or_above_one = true;

  if (v.d_total > 16.0) v.reason = BlockReason::DiameterAbove16;
  else if (v.max_component_diameter > 4.0) v.reason = BlockReason::ComponentAbove4;
  else if (real_at_or_above_one) v.reason = BlockReason::RealMultiplierNotBelow1;
  v.verdict = v.reason == BlockReason::None ? Verdict::Unknown : Verdict::Blocked;
  return v;
}

/// Smallest R with every sample of M in {|z + R| < R} or {|z| < 1}, if any.
inline std::optional<double> fit_left_disc(const MultiplierSet& m, int density = kDefaultCoverDensity) {
  double radius = 0.0;
  for (const auto& p : m.primitives)
    for (const auto& z : sample(p, density)) {
      if (std::abs(z) < 1.0) continue;
      if (z.real() >= 0.0) return std::nullopt;
      radius = std::max(radius, std::norm(z) / (-2.0 * z.real()));
    }
  return radius > 0.0 ? radius : 0.5;
}

/// Axis-aligned box around every sample of M.
inline Window bounding_window(const MultiplierSet& m, double pad, int density = kDefaultCoverDensity) {
  Window w{1e300, -1e300, 1e300, -1e300};
  for (const auto& p : m.primitives)
    for (const auto& z : sample(p, density)) {
      w.re_min = std::min(w.re_min, z.real());
      w.re_max = std::max(w.re_max, z.real());
      w.im_min = std::min(w.im_min, z.imag());
      w.im_max = std::max(w.im_max, z.imag());
    }
  w.re_min -= pad;
  w.re_max += pad;
  w.im_min -= pad;
  w.im_max += pad;
  return w;
}

}  // namespace dfc
