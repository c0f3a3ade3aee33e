#pragma once

// Complex polynomials, companion-matrix roots and Schur stability.

#include <algorithm>
#include <cmath>
#include <complex>
#include <span>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "dfc/error.hpp"

namespace dfc {

using cplx = std::complex<double>;

/// Strict-interior convention: a root counts as inside only if |r| < 1 - kBoundaryTol.
inline constexpr double kBoundaryTol = 1e-9;
/// Leading coefficients below kTrimTol * max|c| are dropped.
inline constexpr double kTrimTol = 1e-12;

/// Polynomial over complex scalars. Coefficients are stored lowest degree
/// first: coeffs()[k] multiplies z^k. The leading stored coefficient is
/// nonzero after trimming, except for the zero polynomial.
class Polynomial {
 public:
  Polynomial() : coeffs_{cplx(0.0)} {}

  explicit Polynomial(std::vector<cplx> lowest_first) : coeffs_(std::move(lowest_first)) {
    if (coeffs_.empty()) coeffs_.push_back(0.0);
    trim();
  }

  /// Builds from the highest-degree-first order in which characteristic
  /// polynomials are usually written.
  static Polynomial from_highest_first(std::span<const cplx> c) {
    return Polynomial(std::vector<cplx>(c.rbegin(), c.rend()));
  }

  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  const std::vector<cplx>& coeffs() const { return coeffs_; }
  cplx leading() const { return coeffs_.back(); }
  cplx operator[](int k) const { return k <= degree() ? coeffs_[k] : cplx(0.0); }

  cplx operator()(cplx z) const {
    cplx acc = 0.0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * z + *it;
    return acc;
  }

  /// z^n conj(p(1/conj z)); roots are mapped r -> 1/conj(r).
  Polynomial reciprocal() const {
    std::vector<cplx> r(coeffs_.rbegin(), coeffs_.rend());
    for (auto& c : r) c = std::conj(c);
    return Polynomial(std::move(r));
  }

 private:
  void trim() {
    double scale = 0.0;
    for (const auto& c : coeffs_) scale = std::max(scale, std::abs(c));
    const double cut = kTrimTol * scale;
    while (coeffs_.size() > 1 && std::abs(coeffs_.back()) <= cut) coeffs_.pop_back();
  }

  std::vector<cplx> coeffs_;
};

inline cplx eval(const Polynomial& p, cplx z) { return p(z); }

namespace detail {

// Parlett-Reinsch style balancing of the companion matrix. Scaling by powers
// of two keeps the eigenvalues bit-exact.
inline void balance(Eigen::MatrixXcd& m) {
  const Eigen::Index n = m.rows();
  constexpr double gamma = 0.9;
  bool changed = true;
  for (int sweep = 0; changed && sweep < 64; ++sweep) {
    changed = false;
    for (Eigen::Index i = 0; i < n; ++i) {
      double row = 0.0, col = 0.0;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (j == i) continue;
        row += std::abs(m(i, j));
        col += std::abs(m(j, i));
      }
      if (row == 0.0 || col == 0.0) continue;
      int exponent = 0;
      std::frexp(row / col, &exponent);
      exponent /= 2;
      if (exponent == 0) continue;
      const double sc = std::ldexp(col, exponent);
      const double sr = std::ldexp(row, -exponent);
      if (sc + sr < gamma * (col + row)) {
        changed = true;
        m.row(i) *= std::ldexp(1.0, -exponent);
        m.col(i) *= std::ldexp(1.0, exponent);
      }
    }
  }
}

}  // namespace detail

/// All roots with multiplicity, as eigenvalues of the balanced companion
/// matrix of the monic-normalized polynomial.
inline std::vector<cplx> roots(const Polynomial& p) {
  const int n = p.degree();
  if (n < 1) throw Error(Errc::DegreeZero, "roots of a constant polynomial");
  const cplx lead = p.leading();
  if (n == 1) return {-p[0] / lead};

  Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(n, n);
  for (int j = 0; j < n; ++j) companion(0, j) = -p[n - 1 - j] / lead;
  for (int i = 1; i < n; ++i) companion(i, i - 1) = 1.0;
  detail::balance(companion);

  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(companion, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success)
    throw Error(Errc::IllConditioned, "companion eigen-solve did not converge");
  std::vector<cplx> out(n);
  for (int i = 0; i < n; ++i) out[i] = solver.eigenvalues()[i];
  return out;
}

struct StabilityVerdict {
  bool stable = false;
  double max_root_modulus = 0.0;
  std::vector<cplx> roots;
  double margin = 0.0;  // 1 - max_root_modulus
};

/// Root-modulus Schur test with the strict-interior convention.
inline StabilityVerdict is_schur_stable(const Polynomial& p) {
  if (p.degree() < 1) throw Error(Errc::DegreeZero, "stability of a constant polynomial");
  StabilityVerdict v;
  v.roots = roots(p);
  for (const auto& r : v.roots) v.max_root_modulus = std::max(v.max_root_modulus, std::abs(r));
  v.margin = 1.0 - v.max_root_modulus;
  v.stable = v.max_root_modulus < 1.0 - kBoundaryTol;
  return v;
}

/// Schur-Cohn reduction. Returns true iff every root lies in the open unit
/// disc; no roots are computed. Each step replaces p by
/// (conj(a_n) p - a_0 p*) / z, which keeps the count of interior roots
/// minus one whenever |a_0| < |a_n|.
inline bool schur_cohn_stable(const Polynomial& p) {
  if (p.degree() < 1) throw Error(Errc::DegreeZero, "stability of a constant polynomial");
  std::vector<cplx> a = p.coeffs();
  while (a.size() > 1) {
    const std::size_t n = a.size() - 1;
    const cplx a0 = a.front();
    const cplx an = a.back();
    if (std::abs(a0) >= std::abs(an)) return false;
    std::vector<cplx> next(n);
    // coefficient k+1 of conj(an) p - a0 p*, where p*[k] = conj(a[n-k])
    for (std::size_t k = 0; k < n; ++k)
      next[k] = std::conj(an) * a[k + 1] - a0 * std::conj(a[n - k - 1]);
    double scale = 0.0;
    for (const auto& c : next) scale = std::max(scale, std::abs(c));
    if (scale == 0.0) return false;
    for (auto& c : next) c /= scale;
    a = std::move(next);
  }
  return true;
}

/// lambda^N + (-mu + a_1) lambda^{N-1} + a_2 lambda^{N-2} + ... + a_N.
inline Polynomial char_poly_linear(cplx mu, std::span<const cplx> a) {
  if (a.empty()) throw Error(Errc::EmptyCoeffs, "coefficient vector is empty");
  const std::size_t n = a.size();
  std::vector<cplx> c(n + 1);
  c[n] = 1.0;
  for (std::size_t j = 1; j <= n; ++j) c[n - j] = a[j - 1];
  c[n - 1] -= mu;
  return Polynomial(std::move(c));
}

inline Polynomial char_poly_linear(cplx mu, std::span<const double> a) {
  std::vector<cplx> ac(a.begin(), a.end());
  return char_poly_linear(mu, std::span<const cplx>(ac));
}

/// lambda^N - mu * sum_{j=1}^{N} alpha_j lambda^{N-j}.
inline Polynomial char_poly_nonlinear(cplx mu, std::span<const double> alpha) {
  if (alpha.empty()) throw Error(Errc::EmptyCoeffs, "alpha vector is empty");
  const std::size_t n = alpha.size();
  std::vector<cplx> c(n + 1);
  c[n] = 1.0;
  for (std::size_t j = 1; j <= n; ++j) c[n - j] = -mu * alpha[j - 1];
  return Polynomial(std::move(c));
}

}  // namespace dfc
