#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "catch_amalgamated.hpp"
#include "dfc/control.hpp"
#include "dfc/dynamics.hpp"

using namespace dfc;
using Catch::Matchers::WithinAbs;
using std::numbers::pi;

namespace {

State vec(std::initializer_list<double> xs) {
  State s(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index k = 0;
  for (double x : xs) s[k++] = x;
  return s;
}

bool has_near(const std::vector<std::complex<double>>& zs, std::complex<double> z, double tol) {
  for (const auto& w : zs)
    if (std::abs(w - z) <= tol) return true;
  return false;
}

// Independent fixed point of the standard Ikeda form: for a fixed radius the
// fixed-point equation is linear, so solve it and bisect on r^2.
State ikeda_fixed_point_oracle(double u, double lo, double hi) {
  auto at = [u](double r2) {
    const double t = 0.2 - 6.0 / (1.0 + r2);
    const double c = std::cos(t), s = std::sin(t);
    // [1 - u c, u s; -u s, 1 - u c] (x, y) = (1, 0)
    const double a = 1.0 - u * c, b = u * s;
    const double det = a * a + b * b;
    return std::pair{a / det, b / det};
  };
  auto g = [&](double r2) {
    const auto [x, y] = at(r2);
    return x * x + y * y - r2;
  };
  REQUIRE(g(lo) * g(hi) < 0.0);
  for (int k = 0; k < 200; ++k) {
    const double mid = 0.5 * (lo + hi);
    (g(lo) * g(mid) <= 0.0 ? hi : lo) = mid;
  }
  const auto [x, y] = at(0.5 * (lo + hi));
  return vec({x, y});
}

}  // namespace

TEST_CASE("builtin maps at sample points", "[dynamics]") {
  CHECK(builtins::logistic(4.0)(vec({0.5}))[0] == 1.0);
  const auto cat = builtins::arnold_cat()(vec({0.5, 0.5}));
  CHECK_THAT(cat[0], WithinAbs(0.0, 1e-15));
  CHECK_THAT(cat[1], WithinAbs(0.5, 1e-15));
  const auto ik = builtins::ikeda()(vec({0.0, 0.0}));
  CHECK_THAT(ik[0], WithinAbs(1.0, 1e-15));
  CHECK_THAT(ik[1], WithinAbs(0.0, 1e-15));
  CHECK_THAT(builtins::sine(0.3)(vec({0.5}))[0], WithinAbs(0.3, 1e-15));
  const auto s3 = builtins::sine3(2.0)(vec({pi / 4, pi / 4, 0.0}));
  CHECK_THAT(s3[0], WithinAbs(2.0, 1e-15));
}

TEST_CASE("builtin lookup", "[dynamics]") {
  for (const auto& name : builtin_names()) CHECK(builtin(name).name == name);
  const std::vector<double> p{3.2};
  CHECK(builtin("logistic", p).param == 3.2);
  CHECK(builtin("logistic").param == 4.0);
  CHECK_THROWS_MATCHES(builtin("henon"), Error, Catch::Matchers::Predicate<Error>([](const Error& e) {
                         return e.code() == Errc::UnknownSystem;
                       }));
}

TEST_CASE("analytic Jacobians agree with finite differences", "[dynamics]") {
  struct Case {
    SystemDef sys;
    State x;
  };
  const std::vector<Case> cases{
      {builtins::logistic(3.7), vec({0.3})},
      {builtins::sine(0.8), vec({0.2})},
      {builtins::sine3(-1.5), vec({0.1, -0.4, 0.7})},
      {builtins::ikeda(), vec({0.4, 0.2})},
      {builtins::ikeda_printed(), vec({-0.3, 0.6})},
      {builtins::arnold_cat(), vec({0.2, 0.3})},
      {builtins::neural_sine3(), vec({0.1, 0.25, 0.6})},
      {builtins::example_b(-2.0, 0.5), vec({0.3, 0.1})},
  };
  for (const auto& c : cases) {
    const auto analytic = jacobian(c.sys, c.x);
    const auto fd = finite_difference_jacobian(c.sys, c.x);
    INFO(c.sys.name);
    CHECK((analytic - fd).cwiseAbs().maxCoeff() <= 1e-6 * std::max(1.0, analytic.cwiseAbs().maxCoeff()));
  }
}

TEST_CASE("equilibria and multipliers", "[dynamics]") {
  SECTION("logistic") {
    for (double h : {3.2, 3.9, 4.0}) {
      const auto x = find_equilibrium(builtins::logistic(h), vec({0.6}));
      CHECK_THAT(x[0], WithinAbs(1.0 - 1.0 / h, 1e-14));
      const auto m = multipliers(builtins::logistic(h), x);
      REQUIRE(m.size() == 1);
      CHECK_THAT(m[0].real(), WithinAbs(2.0 - h, 1e-12));
    }
  }
  SECTION("sine at the origin") {
    const auto x = find_equilibrium(builtins::sine(0.3), vec({0.01}));
    CHECK(std::abs(x[0]) < 1e-14);
    CHECK_THAT(multipliers(builtins::sine(0.3), x)[0].real(), WithinAbs(0.3 * pi, 1e-12));
  }
  SECTION("sine3 at the origin") {
    const double h = -1.5;
    const auto m = multipliers(builtins::sine3(h), State::Zero(3));
    REQUIRE(m.size() == 3);
    const double r = std::abs(h);
    CHECK(has_near(m, -2.0 * r, 1e-12));
    CHECK(has_near(m, std::polar(r, 2 * pi / 3), 1e-12));
    CHECK(has_near(m, std::polar(r, -2 * pi / 3), 1e-12));
  }
  SECTION("cat map") {
    const auto x = find_equilibrium(builtins::arnold_cat(), vec({0.02, 0.98}));
    CHECK(wrapped_distance(builtins::arnold_cat(), x, State::Zero(2)) < 1e-12);
    const auto m = multipliers(builtins::arnold_cat(), x);
    CHECK(has_near(m, (3.0 + std::sqrt(5.0)) / 2, 1e-12));
    CHECK(has_near(m, (3.0 - std::sqrt(5.0)) / 2, 1e-12));
  }
  SECTION("ikeda against a bisection oracle") {
    const auto sys = builtins::ikeda();
    const auto x = find_equilibrium(sys, vec({0.5, 0.3}));
    const auto want = ikeda_fixed_point_oracle(0.9, 0.3, 0.45);
    CHECK((x - want).norm() < 1e-12);
    CHECK_THAT(x[0], WithinAbs(0.53498297376692383, 1e-12));
    CHECK_THAT(x[1], WithinAbs(0.28641760927885268, 1e-12));
    const auto m = multipliers(sys, x);
    CHECK(has_near(m, -2.40469147459, 1e-9));
    CHECK(has_near(m, -0.336841548514, 1e-9));
    // determinant of the standard form is u^2
    CHECK_THAT((m[0] * m[1]).real(), WithinAbs(0.81, 1e-10));
  }
  SECTION("the printed sign changes the fixed point") {
    const auto x = find_equilibrium(builtins::ikeda_printed(), vec({0.5, 0.7}));
    CHECK((builtins::ikeda_printed()(x) - x).norm() < 1e-12);
    CHECK((x - vec({0.53498297376692383, 0.28641760927885268})).norm() > 1e-3);
  }
}

TEST_CASE("open trajectories", "[dynamics]") {
  const auto t = simulate_open(builtins::logistic(4.0), vec({0.5}), 3);
  REQUIRE(t.states.size() == 4);
  CHECK(t.states[1][0] == 1.0);
  CHECK(t.states[2][0] == 0.0);
  CHECK(t.states[3][0] == 0.0);
  CHECK_FALSE(t.overflow);
  CHECK_THROWS_AS(simulate_open(builtins::logistic(4.0), vec({0.5}), 0), Error);

  const auto esc = simulate_open(builtins::logistic(4.0), vec({2.0}), 50);
  CHECK(esc.overflow);
  CHECK(esc.states.size() < 51);
}

TEST_CASE("zero gain reproduces the open map", "[dynamics]") {
  const auto sys = builtins::logistic(3.7);
  const auto hist = make_history(vec({0.3}), 3, 0.05, 1);
  const auto open = simulate_open(sys, hist.back(), 40);
  const auto lin = simulate_linear_dfc(sys, GainVector{{0.0, 0.0}}, hist, 40);
  const auto non = simulate_nonlinear_dfc(sys, GainVector{{0.0, 0.0}}, hist, 40);
  REQUIRE(lin.states.size() == open.states.size());
  for (std::size_t k = 0; k < open.states.size(); ++k) {
    CHECK(lin.states[k][0] == open.states[k][0]);
    CHECK(non.states[k][0] == open.states[k][0]);
  }
  for (double u : lin.control_magnitudes) CHECK(u == 0.0);
}

TEST_CASE("a synchronized history at the equilibrium stays put", "[dynamics]") {
  const auto sys = builtins::logistic(3.9);
  const auto xs = find_equilibrium(sys, vec({0.7}));
  const auto hist = make_history(xs, 4);
  const auto t = simulate_nonlinear_dfc(sys, fejer_alphas(4), hist, 100);
  for (const auto& s : t.states) CHECK(std::abs(s[0] - xs[0]) < 1e-14);
  for (double u : t.control_magnitudes) CHECK(u < 1e-14);
}

TEST_CASE("history length is checked", "[dynamics]") {
  const auto sys = builtins::logistic(3.2);
  const auto hist = make_history(vec({0.5}), 2);
  CHECK_THROWS_MATCHES(simulate_linear_dfc(sys, GainVector{{0.1, 0.1, 0.1}}, hist, 10), Error,
                       Catch::Matchers::Predicate<Error>([](const Error& e) {
                         return e.code() == Errc::HistoryTooShort;
                       }));
  CHECK_THROWS_AS(simulate_nonlinear_dfc(sys, fejer_alphas(3), hist, 10), Error);
}

TEST_CASE("make_history keeps the newest state exact", "[dynamics]") {
  const auto h = make_history(vec({0.1, 0.2}), 5, 0.01, 42);
  REQUIRE(h.size() == 5);
  CHECK(h.back() == vec({0.1, 0.2}));
  for (std::size_t k = 0; k + 1 < h.size(); ++k) CHECK((h[k] - vec({0.1, 0.2})).lpNorm<Eigen::Infinity>() <= 0.01);
  CHECK(make_history(vec({0.1, 0.2}), 5, 0.01, 42) == h);
}

TEST_CASE("one-delay linear control stabilizes the logistic map", "[dynamics]") {
  for (double h : {3.2, 3.9}) {
    const auto sys = builtins::logistic(h);
    const auto xs = find_equilibrium(sys, vec({0.7}));
    const double gain = theorem6_gain(-2.0, 1.0).midpoint();
    SimOptions opt;
    opt.target = xs;
    const auto t = simulate_linear_dfc(sys, GainVector{{gain}}, make_history(xs + vec({0.01}), 2, 0.01, 3), 10000, opt);
    CHECK_FALSE(t.overflow);
    REQUIRE(t.converged_to.has_value());
    const auto st = convergence_stats(sys, t, xs, 1e-8);
    CHECK(st.converged);
    // rate equals the dominant root modulus of the closed loop
    const double mu = 2.0 - h;
    const auto v = is_schur_stable(char_poly_linear(mu, CoeffVector{{-gain, gain}}));
    CHECK_THAT(st.rate, WithinAbs(v.max_root_modulus, 5e-3));
  }
}

TEST_CASE("unstable gains overflow", "[dynamics]") {
  const auto sys = builtins::logistic(3.9);
  const auto t = simulate_linear_dfc(sys, GainVector{{-3.0}}, make_history(vec({0.6}), 2, 0.01, 1), 2000);
  CHECK(t.overflow);
}

TEST_CASE("the two non-linear forms agree", "[dynamics]") {
  const auto sys = builtins::ikeda();
  const auto al = fejer_alphas(8);
  const auto g = alpha_to_gains(al);
  const auto hist = make_history(vec({0.5, 0.3}), 8, 0.01, 5);
  const auto a = simulate_nonlinear_dfc(sys, g, hist, 300);
  const auto b = simulate_nonlinear_dfc(sys, al, hist, 300);
  REQUIRE(a.states.size() == b.states.size());
  double worst = 0.0;
  for (std::size_t k = 0; k < a.states.size(); ++k) worst = std::max(worst, (a.states[k] - b.states[k]).norm());
  CHECK(worst < 1e-9);
}

TEST_CASE("Fejer control stabilizes Ikeda", "[dynamics]") {
  const auto sys = builtins::ikeda();
  const auto xs = find_equilibrium(sys, vec({0.5, 0.3}));
  SimOptions opt;
  opt.target = xs;
  const auto t = simulate_nonlinear_dfc(sys, fejer_alphas(8), make_history(xs, 8, 0.01, 7), 3000, opt);
  REQUIRE(t.converged_to.has_value());
  const auto st = convergence_stats(sys, t, xs);
  double predicted = 0.0;
  for (const auto& m : multipliers(sys, xs))
    predicted = std::max(predicted, is_schur_stable(char_poly_nonlinear(m, fejer_alphas(8))).max_root_modulus);
  CHECK_THAT(st.rate, WithinAbs(predicted, 0.02));
}

TEST_CASE("convergence statistics on a synthetic geometric sequence", "[dynamics]") {
  const auto sys = builtins::logistic(3.0);
  Trajectory t;
  for (int k = 0; k < 200; ++k) t.states.push_back(vec({0.5 + std::pow(0.8, k)}));
  const auto st = convergence_stats(sys, t, vec({0.5}), 1e-6, 20);
  CHECK(st.converged);
  REQUIRE(st.step.has_value());
  CHECK(*st.step == static_cast<std::size_t>(std::ceil(std::log(1e-6) / std::log(0.8))));
  // the 0.5 offset rounds the smallest errors, hence the loose tolerance
  CHECK_THAT(st.rate, WithinAbs(0.8, 1e-5));

  Trajectory flat;
  for (int k = 0; k < 50; ++k) flat.states.push_back(vec({0.7}));
  const auto fs = convergence_stats(sys, flat, vec({0.5}), 1e-6, 20);
  CHECK_FALSE(fs.converged);
  CHECK((std::isnan(fs.rate) || std::abs(fs.rate - 1.0) < 1e-12));
}

TEST_CASE("wrapped distance on the torus", "[dynamics]") {
  const auto cat = builtins::arnold_cat();
  CHECK_THAT(wrapped_distance(cat, vec({0.99, 0.0}), vec({0.01, 0.0})), WithinAbs(0.02, 1e-12));
  State x = vec({1.25, -0.25});
  wrap_state(cat, x);
  CHECK_THAT(x[0], WithinAbs(0.25, 1e-15));
  CHECK_THAT(x[1], WithinAbs(0.75, 1e-15));
}
