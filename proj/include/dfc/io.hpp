#pragma once

// Artifact writers: PGM rasters, SVG figures, trajectory CSV, scalar vector
// files and key=value reports. All numeric output is locale-free and
// deterministic.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <istream>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dfc/dynamics.hpp"
#include "dfc/error.hpp"
#include "dfc/raster.hpp"

namespace dfc {

inline std::string fmt_double(double x, const char* spec = "%.17g") {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, x);
  return buf;
}

// ---------------------------------------------------------------------------
// PGM

/// Binary P5 image, top row = largest imaginary part. 0 outside; 255 inside
/// for a single component, otherwise max(1, round(255 id / k)).
inline std::string pgm_bytes(const RegionRaster& r) {
  const int n = r.resolution;
  std::string out = "P5\n" + std::to_string(n) + " " + std::to_string(n) + "\n255\n";
  out.reserve(out.size() + static_cast<std::size_t>(n) * n);
  const int k = r.components;
  for (int j = n - 1; j >= 0; --j) {
    for (int i = 0; i < n; ++i) {
      const std::size_t idx = r.index(i, j);
      unsigned char v = 0;
      if (r.mask[idx]) {
        if (k <= 1 || r.labels.empty()) v = 255;
        else v = static_cast<unsigned char>(std::max(1L, std::lround(255.0 * r.labels[idx] / k)));
      }
      out.push_back(static_cast<char>(v));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// SVG

class SvgCanvas {
 public:
  explicit SvgCanvas(const Window& w, int width_px = 800) : w_(w), width_(width_px) {
    const double aspect = (w.im_max - w.im_min) / (w.re_max - w.re_min);
    height_ = std::clamp(static_cast<int>(std::lround(width_px * aspect)), 100, 4 * width_px);
  }

  double px(double re) const { return kMargin + (re - w_.re_min) / (w_.re_max - w_.re_min) * width_; }
  double py(double im) const { return kMargin + (w_.im_max - im) / (w_.im_max - w_.im_min) * height_; }

  void axes(int ticks = 8) {
    std::ostringstream os;
    os << "<g stroke=\"#888\" stroke-width=\"0.5\" font-family=\"monospace\" font-size=\"10\" fill=\"#444\">\n";
    os << rect_str();
    if (w_.im_min <= 0.0 && w_.im_max >= 0.0) os << line_str({w_.re_min, 0.0}, {w_.re_max, 0.0});
    if (w_.re_min <= 0.0 && w_.re_max >= 0.0) os << line_str({0.0, w_.im_min}, {0.0, w_.im_max});
    for (int t = 0; t <= ticks; ++t) {
      const double re = w_.re_min + (w_.re_max - w_.re_min) * t / ticks;
      const double im = w_.im_min + (w_.im_max - w_.im_min) * t / ticks;
      os << "<text x=\"" << num(px(re)) << "\" y=\"" << num(kMargin + height_ + 14.0)
         << "\" text-anchor=\"middle\" stroke=\"none\">" << fmt_double(re, "%.4g") << "</text>\n";
      os << "<text x=\"" << num(kMargin - 4.0) << "\" y=\"" << num(py(im) + 3.0)
         << "\" text-anchor=\"end\" stroke=\"none\">" << fmt_double(im, "%.4g") << "</text>\n";
    }
    os << "</g>\n";
    body_ += os.str();
  }

  void polyline(const std::vector<std::complex<double>>& pts, std::string_view stroke, bool closed = true) {
    if (pts.empty()) return;
    std::string s = std::string("<") + (closed ? "polygon" : "polyline") + " fill=\"none\" stroke=\"" +
                    std::string(stroke) + "\" stroke-width=\"1\" points=\"";
    for (const auto& z : pts) s += num(px(z.real())) + "," + num(py(z.imag())) + " ";
    s += "\"/>\n";
    body_ += s;
  }

  void circle(std::complex<double> c, double radius, std::string_view stroke, bool dashed = false) {
    const double rx = radius / (w_.re_max - w_.re_min) * width_;
    const double ry = radius / (w_.im_max - w_.im_min) * height_;
    body_ += "<ellipse cx=\"" + num(px(c.real())) + "\" cy=\"" + num(py(c.imag())) + "\" rx=\"" + num(rx) +
             "\" ry=\"" + num(ry) + "\" fill=\"none\" stroke=\"" + std::string(stroke) + "\"" +
             (dashed ? " stroke-dasharray=\"4 3\"" : "") + "/>\n";
  }

  void segment(std::complex<double> a, std::complex<double> b, std::string_view stroke) {
    body_ += "<g stroke=\"" + std::string(stroke) + "\" stroke-width=\"1.2\">" + line_str(a, b) + "</g>\n";
  }

  void label(std::complex<double> at, std::string_view text) {
    body_ += "<text x=\"" + num(px(at.real()) + 4.0) + "\" y=\"" + num(py(at.imag()) - 4.0) +
             "\" font-family=\"monospace\" font-size=\"11\">" + std::string(text) + "</text>\n";
  }

  /// Pixel-edge outline of the mask: every edge between an inside and an
  /// outside pixel (or the window border) becomes one segment.
  void raster_outline(const RegionRaster& r, std::string_view stroke) {
    const int n = r.resolution;
    const double dx = r.dx(), dy = r.dy();
    std::string d;
    auto edge = [&](double x0, double y0, double x1, double y1) {
      d += "M" + num(px(x0)) + " " + num(py(y0)) + "L" + num(px(x1)) + " " + num(py(y1));
    };
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        if (!r.inside(i, j)) continue;
        const double x0 = r.window.re_min + i * dx, y0 = r.window.im_min + j * dy;
        if (i == 0 || !r.inside(i - 1, j)) edge(x0, y0, x0, y0 + dy);
        if (i == n - 1 || !r.inside(i + 1, j)) edge(x0 + dx, y0, x0 + dx, y0 + dy);
        if (j == 0 || !r.inside(i, j - 1)) edge(x0, y0, x0 + dx, y0);
        if (j == n - 1 || !r.inside(i, j + 1)) edge(x0, y0 + dy, x0 + dx, y0 + dy);
      }
    if (!d.empty())
      body_ += "<path fill=\"none\" stroke=\"" + std::string(stroke) + "\" stroke-width=\"0.8\" d=\"" + d + "\"/>\n";
  }

  std::string str() const {
    const int W = width_ + 2 * static_cast<int>(kMargin);
    const int H = height_ + 2 * static_cast<int>(kMargin);
    return "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
           std::to_string(W) + "\" height=\"" + std::to_string(H) + "\" viewBox=\"0 0 " + std::to_string(W) + " " +
           std::to_string(H) + "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n" + body_ + "</svg>\n";
  }

 private:
  static constexpr double kMargin = 48.0;

  static std::string num(double v) { return fmt_double(v, "%.2f"); }

  std::string line_str(std::complex<double> a, std::complex<double> b) const {
    return "<line x1=\"" + num(px(a.real())) + "\" y1=\"" + num(py(a.imag())) + "\" x2=\"" + num(px(b.real())) +
           "\" y2=\"" + num(py(b.imag())) + "\"/>\n";
  }

  std::string rect_str() const {
    return "<rect x=\"" + num(kMargin) + "\" y=\"" + num(kMargin) + "\" width=\"" + std::to_string(width_) +
           "\" height=\"" + std::to_string(height_) + "\" fill=\"none\"/>\n";
  }

  Window w_;
  int width_;
  int height_ = 0;
  std::string body_;
};

// ---------------------------------------------------------------------------
// CSV and vectors

/// step,x1..xm,control_norm; row 0 carries control_norm 0.
inline std::string trajectory_csv(const Trajectory& t) {
  std::string out = "step";
  const int m = t.states.empty() ? 0 : static_cast<int>(t.states.front().size());
  for (int k = 1; k <= m; ++k) out += ",x" + std::to_string(k);
  out += ",control_norm\n";
  for (std::size_t n = 0; n < t.states.size(); ++n) {
    out += std::to_string(n);
    for (int k = 0; k < m; ++k) out += "," + fmt_double(t.states[n][k]);
    out += "," + fmt_double(n == 0 ? 0.0 : t.control_magnitudes[n - 1]) + "\n";
  }
  return out;
}

inline std::string vector_text(const std::vector<double>& v) {
  std::string out;
  for (double x : v) out += fmt_double(x) + "\n";
  return out;
}

/// One real per line; blank lines and '#' comments are skipped.
inline std::vector<double> parse_vector(std::istream& in) {
  std::vector<double> v;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string tok;
    if (!(ls >> tok)) continue;
    std::size_t used = 0;
    double x = 0.0;
    try {
      x = std::stod(tok, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    std::string extra;
    if (used != tok.size() || !std::isfinite(x) || (ls >> extra))
      throw Error(Errc::ParseError, "line " + std::to_string(lineno) + ": expected one real number");
    v.push_back(x);
  }
  return v;
}

// ---------------------------------------------------------------------------
// Key=value reports

class Report {
 public:
  Report& add(std::string key, std::string value) {
    rows_.emplace_back(std::move(key), std::move(value));
    return *this;
  }
  Report& add(std::string key, const char* value) { return add(std::move(key), std::string(value)); }
  Report& add(std::string key, double value) { return add(std::move(key), fmt_double(value)); }
  Report& add(std::string key, bool value) { return add(std::move(key), std::string(value ? "true" : "false")); }
  Report& add(std::string key, int value) { return add(std::move(key), std::to_string(value)); }
  Report& add(std::string key, std::size_t value) { return add(std::move(key), std::to_string(value)); }
  Report& add(std::string key, std::complex<double> z) {
    return add(std::move(key), fmt_double(z.real()) + "," + fmt_double(z.imag()));
  }

  std::string str() const {
    std::string out;
    for (const auto& [k, v] : rows_) out += k + "=" + v + "\n";
    return out;
  }

 private:
  std::vector<std::pair<std::string, std::string>> rows_;
};

inline void write_file(const std::filesystem::path& path, std::string_view content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path.string() + " for writing");
  f.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!f) throw std::runtime_error("write failed: " + path.string());
}

}  // namespace dfc
