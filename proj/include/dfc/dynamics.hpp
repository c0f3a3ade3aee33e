#pragma once

// Benchmark maps, equilibria, multipliers, and open/closed-loop simulation
// under linear and non-linear delayed feedback control.

#include <algorithm>
#include <cmath>
#include <complex>
#include <deque>
#include <functional>
#include <numbers>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "dfc/control.hpp"
#include "dfc/error.hpp"
#include "dfc/types.hpp"

namespace dfc {

using State = Eigen::VectorXd;

inline constexpr double kOverflowLimit = 1e12;
inline constexpr double kEquilibriumTol = 1e-12;
inline constexpr int kNewtonIterations = 200;
inline constexpr double kConvergenceTol = 1e-6;
inline constexpr std::size_t kConvergenceWindow = 100;
inline constexpr std::size_t kDefaultHorizon = 100000;

struct SystemDef {
  std::string name;
  int dim = 1;
  double param = 0.0;
  std::function<State(const State&, double)> map;
  std::function<Eigen::MatrixXd(const State&, double)> jacobian;  // optional
  std::vector<double> wrap;  // per-coordinate modulus, empty if none

  State operator()(const State& x) const { return map(x, param); }
  bool wrapped() const { return !wrap.empty(); }
};

/// Reduces wrapped coordinates into [0, modulus).
inline void wrap_state(const SystemDef& sys, State& x) {
  for (std::size_t k = 0; k < sys.wrap.size(); ++k) {
    const double m = sys.wrap[k];
    if (m <= 0.0) continue;
    double v = std::fmod(x[k], m);
    if (v < 0.0) v += m;
    if (v >= m) v -= m;
    x[k] = v;
  }
}

/// a - b with wrapped coordinates reduced to the shortest representative.
inline State wrapped_difference(const SystemDef& sys, const State& a, const State& b) {
  State d = a - b;
  for (std::size_t k = 0; k < sys.wrap.size(); ++k) {
    const double m = sys.wrap[k];
    if (m <= 0.0) continue;
    d[k] -= m * std::round(d[k] / m);
  }
  return d;
}

inline double wrapped_distance(const SystemDef& sys, const State& a, const State& b) {
  return wrapped_difference(sys, a, b).norm();
}

/// Central differences with step 1e-6 * max(1, |x_k|).
inline Eigen::MatrixXd finite_difference_jacobian(const SystemDef& sys, const State& x) {
  Eigen::MatrixXd jac(sys.dim, sys.dim);
  for (int k = 0; k < sys.dim; ++k) {
    const double h = 1e-6 * std::max(1.0, std::abs(x[k]));
    State xp = x, xm = x;
    xp[k] += h;
    xm[k] -= h;
    jac.col(k) = wrapped_difference(sys, sys(xp), sys(xm)) / (2.0 * h);
  }
  return jac;
}

inline Eigen::MatrixXd jacobian(const SystemDef& sys, const State& x) {
  return sys.jacobian ? sys.jacobian(x, sys.param) : finite_difference_jacobian(sys, x);
}

namespace builtins {

inline SystemDef logistic(double h) {
  return {"logistic", 1, h,
          [](const State& x, double p) { return State::Constant(1, p * x[0] * (1.0 - x[0])); },
          [](const State& x, double p) { return Eigen::MatrixXd::Constant(1, 1, p * (1.0 - 2.0 * x[0])); },
          {}};
}

inline SystemDef sine(double h) {
  using std::numbers::pi;
  return {"sine", 1, h, [](const State& x, double p) { return State::Constant(1, p * std::sin(pi * x[0])); },
          [](const State& x, double p) { return Eigen::MatrixXd::Constant(1, 1, p * pi * std::cos(pi * x[0])); },
          {}};
}

/// Linear two-dimensional system with both rows driven by x.
inline SystemDef example_b(double mu1, double mu2) {
  return {"example_b", 2, mu1,
          [mu2](const State& x, double p) {
            State y(2);
            y << p * x[0], mu2 * x[0];
            return y;
          },
          [mu2](const State&, double p) {
            Eigen::MatrixXd j(2, 2);
            j << p, 0.0, mu2, 0.0;
            return j;
          },
          {}};
}

/// Diagonal variant with y_{n+1} = mu2 y_n.
inline SystemDef example_b_diagonal(double mu1, double mu2) {
  return {"example_b_diagonal", 2, mu1,
          [mu2](const State& x, double p) {
            State y(2);
            y << p * x[0], mu2 * x[1];
            return y;
          },
          [mu2](const State&, double p) {
            Eigen::MatrixXd j(2, 2);
            j << p, 0.0, 0.0, mu2;
            return j;
          },
          {}};
}

/// h (sin(x+y), sin(y+z), sin(z+x)).
inline SystemDef sine3(double h) {
  return {"sine3", 3, h,
          [](const State& v, double p) {
            State y(3);
            y << p * std::sin(v[0] + v[1]), p * std::sin(v[1] + v[2]), p * std::sin(v[2] + v[0]);
            return y;
          },
          [](const State& v, double p) {
            const double a = p * std::cos(v[0] + v[1]);
            const double b = p * std::cos(v[1] + v[2]);
            const double c = p * std::cos(v[2] + v[0]);
            Eigen::MatrixXd j(3, 3);
            j << a, a, 0.0, 0.0, b, b, c, 0.0, c;
            return j;
          },
          {}};
}

namespace detail {

// Optical resonator map with phase t = 0.2 - 6/(1 + x^2 + y^2) and gain u:
// x' = 1 + u (x cos t - y sin t), y' = u (x sin t + s y cos t).
inline SystemDef ikeda_family(std::string name, double u, double s) {
  auto phase = [](const State& v) { return 0.2 - 6.0 / (1.0 + v[0] * v[0] + v[1] * v[1]); };
  return {std::move(name), 2, u,
          [phase, s](const State& v, double g) {
            const double t = phase(v);
            State y(2);
            y << 1.0 + g * (v[0] * std::cos(t) - v[1] * std::sin(t)), g * (v[0] * std::sin(t) + s * v[1] * std::cos(t));
            return y;
          },
          [phase, s](const State& v, double g) {
            const double t = phase(v);
            const double c = std::cos(t), sn = std::sin(t);
            const double den = 1.0 + v[0] * v[0] + v[1] * v[1];
            const double tx = 12.0 * v[0] / (den * den);
            const double ty = 12.0 * v[1] / (den * den);
            const double dx_dt = -v[0] * sn - v[1] * c;
            const double dy_dt = v[0] * c - s * v[1] * sn;
            Eigen::MatrixXd j(2, 2);
            j << g * (c + dx_dt * tx), g * (-sn + dx_dt * ty), g * (sn + dy_dt * tx), g * (s * c + dy_dt * ty);
            return j;
          },
          {}};
}

}  // namespace detail

/// Standard rotation form, y' = 0.9 (x sin t + y cos t).
inline SystemDef ikeda(double u = 0.9) { return detail::ikeda_family("ikeda", u, 1.0); }

/// Form with y' = 0.9 (x sin t - y cos t), kept for comparison.
inline SystemDef ikeda_printed(double u = 0.9) { return detail::ikeda_family("ikeda_printed", u, -1.0); }

inline SystemDef arnold_cat() {
  SystemDef s{"arnold_cat", 2, 0.0,
              [](const State& v, double) {
                State y(2);
                y << v[0] + v[1], v[0] + 2.0 * v[1];
                for (int k = 0; k < 2; ++k) {
                  y[k] = std::fmod(y[k], 1.0);
                  if (y[k] < 0.0) y[k] += 1.0;
                }
                return y;
              },
              [](const State&, double) {
                Eigen::MatrixXd j(2, 2);
                j << 1.0, 1.0, 1.0, 2.0;
                return j;
              },
              {1.0, 1.0}};
  return s;
}

/// (h sin(pi(y-x)), h sin(pi(z-y)), h sin(pi(x-z))), h = 12 by default.
inline SystemDef neural_sine3(double h = 12.0) {
  using std::numbers::pi;
  return {"neural_sine3", 3, h,
          [](const State& v, double p) {
            State y(3);
            y << p * std::sin(pi * (v[1] - v[0])), p * std::sin(pi * (v[2] - v[1])), p * std::sin(pi * (v[0] - v[2]));
            return y;
          },
          [](const State& v, double p) {
            const double a = p * pi * std::cos(pi * (v[1] - v[0]));
            const double b = p * pi * std::cos(pi * (v[2] - v[1]));
            const double c = p * pi * std::cos(pi * (v[0] - v[2]));
            Eigen::MatrixXd j(3, 3);
            j << -a, a, 0.0, 0.0, -b, b, c, 0.0, -c;
            return j;
          },
          {}};
}

}  // namespace builtins

inline const std::vector<std::string>& builtin_names() {
  static const std::vector<std::string> names{"logistic", "sine",   "example_b",     "example_b_diagonal",
                                              "sine3",    "ikeda",  "ikeda_printed", "arnold_cat",
                                              "neural_sine3"};
  return names;
}

/// Builtin system by name. `params` overrides the defaults: logistic {4},
/// sine {0.3}, example_b {-79/24, 23/24}, sine3 {-1.5}, ikeda {0.9},
/// neural_sine3 {12}; arnold_cat takes none.
inline SystemDef builtin(std::string_view name, std::span<const double> params = {}) {
  auto p = [&](std::size_t k, double def) { return k < params.size() ? params[k] : def; };
  if (name == "logistic") return builtins::logistic(p(0, 4.0));
  if (name == "sine") return builtins::sine(p(0, 0.3));
  if (name == "example_b") return builtins::example_b(p(0, -79.0 / 24.0), p(1, 23.0 / 24.0));
  if (name == "example_b_diagonal") return builtins::example_b_diagonal(p(0, -79.0 / 24.0), p(1, 23.0 / 24.0));
  if (name == "sine3") return builtins::sine3(p(0, -1.5));
  if (name == "ikeda") return builtins::ikeda(p(0, 0.9));
  if (name == "ikeda_printed") return builtins::ikeda_printed(p(0, 0.9));
  if (name == "arnold_cat") return builtins::arnold_cat();
  if (name == "neural_sine3") return builtins::neural_sine3(p(0, 12.0));
  throw Error(Errc::UnknownSystem, std::string(name));
}

/// Damped Newton on F(x) - x.
inline State find_equilibrium(const SystemDef& sys, const State& guess) {
  if (guess.size() != sys.dim) throw Error(Errc::OutOfRange, "guess has the wrong dimension");
  State x = guess;
  auto residual = [&](const State& s) { return wrapped_difference(sys, sys(s), s); };
  State g = residual(x);
  auto newton_step = [&](const State& at, const State& r) {
    const Eigen::MatrixXd jg = jacobian(sys, at) - Eigen::MatrixXd::Identity(sys.dim, sys.dim);
    return State(jg.fullPivLu().solve(-r));
  };
  // A few undamped steps past the tolerance, kept while the residual shrinks.
  auto polish = [&] {
    for (int k = 0; k < 3; ++k) {
      const State trial = x + newton_step(x, g);
      const State gt = residual(trial);
      if (!trial.allFinite() || !(gt.norm() < g.norm())) break;
      x = trial;
      g = gt;
    }
    wrap_state(sys, x);
    return x;
  };
  for (int it = 0; it < kNewtonIterations; ++it) {
    if (g.lpNorm<Eigen::Infinity>() <= kEquilibriumTol) return polish();
    const State step = newton_step(x, g);
    if (!step.allFinite()) break;
    double t = 1.0;
    State trial = x + step;
    State gt = residual(trial);
    for (int k = 0; k < 30 && !(gt.norm() < g.norm()); ++k) {
      t *= 0.5;
      trial = x + t * step;
      gt = residual(trial);
    }
    x = trial;
    g = gt;
  }
  if (g.lpNorm<Eigen::Infinity>() <= kEquilibriumTol) return polish();
  throw Error(Errc::NoConvergence, "Newton iteration for the equilibrium of " + sys.name + " did not converge");
}

/// Eigenvalues of the Jacobian at x*, sorted by (real, imag).
inline std::vector<std::complex<double>> multipliers(const SystemDef& sys, const State& x_star) {
  const Eigen::MatrixXd jac = jacobian(sys, x_star);
  if (!jac.allFinite()) throw Error(Errc::SingularJacobianEvaluation, "non-finite Jacobian");
  Eigen::EigenSolver<Eigen::MatrixXd> es(jac, false);
  std::vector<std::complex<double>> out;
  for (int k = 0; k < jac.rows(); ++k) out.push_back(es.eigenvalues()[k]);
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return a.real() < b.real() || (a.real() == b.real() && a.imag() < b.imag());
  });
  return out;
}

struct Trajectory {
  std::vector<State> states;
  std::vector<double> control_magnitudes;  // |u_n|, one per transition
  std::optional<State> converged_to;
  std::optional<std::size_t> convergence_step;
  bool overflow = false;
};

struct ConvergenceStats {
  bool converged = false;
  std::optional<std::size_t> step;  // first index after which every state is within tol
  double rate = std::numeric_limits<double>::quiet_NaN();
  double final_error = std::numeric_limits<double>::quiet_NaN();
};

/// converged: the last `window` states are within `tol` of x*. rate: decay
/// factor per step of the error envelope over the latter half of the
/// samples whose error is above the rounding floor.
inline ConvergenceStats convergence_stats(const SystemDef& sys, const Trajectory& traj, const State& x_star,
                                          double tol = kConvergenceTol,
                                          std::size_t window = kConvergenceWindow) {
  ConvergenceStats st;
  const std::size_t n = traj.states.size();
  if (n == 0) return st;
  std::vector<double> err(n);
  for (std::size_t k = 0; k < n; ++k) err[k] = wrapped_distance(sys, traj.states[k], x_star);
  st.final_error = err.back();

  const std::size_t w = std::min(window, n);
  st.converged = !traj.overflow && std::all_of(err.end() - static_cast<std::ptrdiff_t>(w), err.end(),
                                               [tol](double e) { return e <= tol; });
  if (st.converged) {
    std::size_t k = n;
    while (k > 0 && err[k - 1] <= tol) --k;
    st.step = k;
  }

  const double floor = 1e-13 * std::max(1.0, x_star.norm());
  std::size_t last = 0;
  bool any = false;
  for (std::size_t k = 0; k < n; ++k)
    if (err[k] > floor) {
      last = k;
      any = true;
    }
  if (!any || last < 20) return st;
  const std::size_t first = last / 2;
  const std::size_t span = std::min<std::size_t>(10, (last - first) / 4 + 1);
  double head = 0.0, tail = 0.0;
  for (std::size_t k = first; k < first + span; ++k) head = std::max(head, err[k]);
  for (std::size_t k = last + 1 - span; k <= last; ++k) tail = std::max(tail, err[k]);
  const double steps = static_cast<double>(last + 1 - span - first);
  if (head > 0.0 && tail > 0.0 && steps > 0.0) st.rate = std::pow(tail / head, 1.0 / steps);
  return st;
}

struct SimOptions {
  std::optional<State> target;  // when set, converged_to/convergence_step are filled
  double tol = kConvergenceTol;
  std::size_t window = kConvergenceWindow;
};

namespace detail {

inline bool escaped(const State& x) {
  return !x.allFinite() || x.lpNorm<Eigen::Infinity>() > kOverflowLimit;
}

inline void annotate(const SystemDef& sys, Trajectory& traj, const SimOptions& opt) {
  if (!opt.target) return;
  const auto st = convergence_stats(sys, traj, *opt.target, opt.tol, opt.window);
  if (st.converged) {
    traj.converged_to = *opt.target;
    traj.convergence_step = st.step;
  }
}

inline std::deque<State> tail_history(std::span<const State> history, std::size_t order) {
  if (history.size() < order) throw Error(Errc::HistoryTooShort, "history needs one state per delay");
  // newest first: past[j] = x_{n-j}
  std::deque<State> past;
  for (std::size_t j = 0; j < order; ++j) past.push_back(history[history.size() - 1 - j]);
  return past;
}

}  // namespace detail

/// `order` states ending in x0 (oldest first), each perturbed uniformly in
/// [-radius, radius] per coordinate except the newest.
inline std::vector<State> make_history(const State& x0, std::size_t order, double radius = 0.0,
                                       std::uint64_t seed = 0) {
  std::vector<State> h(order, x0);
  if (radius > 0.0) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-radius, radius);
    for (std::size_t k = 0; k + 1 < order; ++k)
      for (int c = 0; c < x0.size(); ++c) h[k][c] += u(rng);
  }
  return h;
}

inline Trajectory simulate_open(const SystemDef& sys, const State& x0, std::size_t n_steps,
                                const SimOptions& opt = {}) {
  if (n_steps < 1) throw Error(Errc::OutOfRange, "n_steps must be positive");
  Trajectory t;
  t.states.reserve(n_steps + 1);
  t.states.push_back(x0);
  for (std::size_t n = 0; n < n_steps; ++n) {
    State next = sys(t.states.back());
    wrap_state(sys, next);
    if (detail::escaped(next)) {
      t.overflow = true;
      break;
    }
    t.states.push_back(std::move(next));
    t.control_magnitudes.push_back(0.0);
  }
  detail::annotate(sys, t, opt);
  return t;
}

/// x_{n+1} = F(x_n) - sum_{j=1}^{N-1} eps_j (x_{n-j} - x_{n-j+1}).
/// `history` is oldest first and must hold at least N states.
inline Trajectory simulate_linear_dfc(const SystemDef& sys, const GainVector& g, std::span<const State> history,
                                      std::size_t n_steps, const SimOptions& opt = {}) {
  if (n_steps < 1) throw Error(Errc::OutOfRange, "n_steps must be positive");
  const std::size_t order = g.order();
  auto past = detail::tail_history(history, order);
  Trajectory t;
  t.states.reserve(n_steps + 1);
  t.states.push_back(past.front());
  for (std::size_t n = 0; n < n_steps; ++n) {
    State u = State::Zero(sys.dim);
    for (std::size_t j = 1; j < order; ++j) u -= g.eps[j - 1] * (past[j] - past[j - 1]);
    State next = sys(past.front()) + u;
    wrap_state(sys, next);
    if (detail::escaped(next)) {
      t.overflow = true;
      break;
    }
    t.control_magnitudes.push_back(u.norm());
    past.pop_back();
    past.push_front(next);
    t.states.push_back(std::move(next));
  }
  detail::annotate(sys, t, opt);
  return t;
}

/// x_{n+1} = F(x_n) - sum_{j=1}^{N-1} eps_j (F(x_{n-j+1}) - F(x_{n-j})).
inline Trajectory simulate_nonlinear_dfc(const SystemDef& sys, const GainVector& g, std::span<const State> history,
                                         std::size_t n_steps, const SimOptions& opt = {}) {
  if (n_steps < 1) throw Error(Errc::OutOfRange, "n_steps must be positive");
  const std::size_t order = g.order();
  auto past = detail::tail_history(history, order);
  std::deque<State> images;  // images[j] = F(x_{n-j})
  for (const auto& x : past) images.push_back(sys(x));
  Trajectory t;
  t.states.reserve(n_steps + 1);
  t.states.push_back(past.front());
  for (std::size_t n = 0; n < n_steps; ++n) {
    State u = State::Zero(sys.dim);
    for (std::size_t j = 1; j < order; ++j) u -= g.eps[j - 1] * (images[j - 1] - images[j]);
    State next = images.front() + u;
    wrap_state(sys, next);
    if (detail::escaped(next)) {
      t.overflow = true;
      break;
    }
    t.control_magnitudes.push_back(u.norm());
    images.pop_back();
    images.push_front(sys(next));
    t.states.push_back(std::move(next));
  }
  detail::annotate(sys, t, opt);
  return t;
}

/// Convolution form of the non-linear control:
/// x_{n+1} = sum_{j=1}^{N} alpha_j F(x_{n-j+1}).
inline Trajectory simulate_nonlinear_dfc(const SystemDef& sys, const AlphaVector& al, std::span<const State> history,
                                         std::size_t n_steps, const SimOptions& opt = {}) {
  if (n_steps < 1) throw Error(Errc::OutOfRange, "n_steps must be positive");
  const std::size_t order = al.order();
  auto past = detail::tail_history(history, order);
  std::deque<State> images;
  for (const auto& x : past) images.push_back(sys(x));
  Trajectory t;
  t.states.reserve(n_steps + 1);
  t.states.push_back(past.front());
  for (std::size_t n = 0; n < n_steps; ++n) {
    State next = State::Zero(sys.dim);
    for (std::size_t j = 0; j < order; ++j) next += al.alpha[j] * images[j];
    const State u = next - images.front();
    wrap_state(sys, next);
    if (detail::escaped(next)) {
      t.overflow = true;
      break;
    }
    t.control_magnitudes.push_back(u.norm());
    images.pop_back();
    images.push_front(sys(next));
    t.states.push_back(std::move(next));
  }
  detail::annotate(sys, t, opt);
  return t;
}

}  // namespace dfc
