// One PASS/FAIL line per acceptance criterion; exits nonzero if any fails.

#include <sys/wait.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "dfc/control.hpp"
#include "dfc/dynamics.hpp"
#include "dfc/multiplier_set.hpp"
#include "dfc/region.hpp"
#include "dfc/verify.hpp"

using namespace dfc;
using std::numbers::pi;

namespace {

constexpr std::uint64_t kSeed = 1;

struct Criterion {
  int id;
  std::string name;
  std::function<Outcome()> run;
  double time_limit_s = 0.0;  // 0: no runtime bound
};

std::string g6(double x) { return props::g6(x); }

// Criteria 4 and 5 share the same maps.
const std::vector<AdmissiblePair>& shared_maps() {
  static const auto maps = [] {
    Rng rng = property_rng(kSeed, 100);
    return props::random_maps(rng, 20);
  }();
  return maps;
}

Outcome schur_equivalence() {
  Rng rng = property_rng(kSeed, 1);
  return props::schur_oracle_agreement(rng, 1.0);
}

Outcome a2_triangle() {
  Rng rng = property_rng(kSeed, 2);
  return props::a2_triangle(rng, 1.0);
}

Outcome inversion() {
  Rng rng = property_rng(kSeed, 3);
  return props::inversion_equivalence(rng, 1.0);
}

Outcome inner_disc() {
  int failures = 0;
  const double radius = 1.0 / 16.0 - 1e-6;
  for (const auto& s : shared_maps()) {
    const PhiMap phi = make_phi(s.a, s.mu0);
    for (int k = 0; k < 32; ++k)
      if (!in_phi_image(phi, std::polar(radius, 2.0 * pi * k / 32))) ++failures;
  }
  return {failures == 0, "maps=20 samples=640 failures=" + std::to_string(failures)};
}

Outcome hull_disc() {
  int misses = 0, failing_maps = 0;
  for (const auto& s : shared_maps()) {
    const int m = props::hull_disc_misses(make_phi(s.a, s.mu0), 1024, 2.0, 1.0);
    misses += m;
    failing_maps += m > 0;
  }
  return {misses == 0, "maps=20 resolution=1024 missed_pixels=" + std::to_string(misses) +
                           " failing_maps=" + std::to_string(failing_maps)};
}

Outcome diameter_bounds() {
  Rng rng = property_rng(kSeed, 6);
  int failures = 0;
  double worst_total = 0.0, worst_component = 0.0;
  for (int t = 0; t < 50; ++t) {
    const int n = 2 + t % 3;
    const auto s = random_admissible_real(rng, n);
    const int res = 512;
    const auto b = verify_diameter_bounds(real_part(s.a), s.mu0, Window::centered_on(s.mu0, 17.0, res), res);
    worst_total = std::max(worst_total, b.d_total);
    worst_component = std::max(worst_component, b.d_component);
    if (!(b.pass_16 && b.pass_4)) ++failures;
  }
  return {failures == 0, "vectors=50 resolution=512 max_d_total=" + g6(worst_total) +
                             " max_d_component=" + g6(worst_component) + " failures=" + std::to_string(failures)};
}

Outcome extremal_sharpness() {
  bool ok = true;
  std::string detail;
  for (double eps : {0.1, 0.01, 0.001}) {
    const CoeffVector a{{2 * (1 - eps), 1 - eps}};
    // The region is a thin ellipse on (-eps, 4 - 3 eps); the window hugs it.
    const int res = 2049;
    const Window w{-eps - 0.05, 4.05 - 3 * eps, -1.25 * eps, 1.25 * eps};
    const auto b = verify_diameter_bounds(a, 0.0, w, res);
    const double lower = 4 - 3 * eps - 2 * b.pixel_diag;
    const bool diameter_ok = b.d_component >= lower && b.d_component < 4.0;
    const auto v = is_schur_stable(char_poly_linear(4 - 3 * eps, a));
    ok = ok && diameter_ok && v.stable;
    detail += (detail.empty() ? "" : " | ") + std::string("eps=") + g6(eps) + " d_component=" + g6(b.d_component) +
              " lower=" + g6(lower) + " diameter_ok=" + (diameter_ok ? "yes" : "no") +
              " mu1_stable=" + (v.stable ? "yes" : "no") + " mu1_max_modulus=" + fmt_double(v.max_root_modulus, "%.15g");
  }
  return {ok, detail};
}

Outcome gain_interval() {
  Rng rng = property_rng(kSeed, 8);
  return props::one_delay_gain_guarantee(rng, 1.0);
}

Outcome fejer() {
  Rng rng = property_rng(kSeed, 9);
  const auto sum = props::fejer_unit_sum(rng, 1.0);
  const auto real = props::fejer_real_part_bound(rng, 1.0);
  const auto disc = props::fejer_disc_covering(rng, 1.0);
  return {sum.pass && real.pass && disc.pass, sum.detail + " " + real.detail + " " + disc.detail};
}

Outcome two_dim_example() {
  const CoeffVector a{{-7.0 / 6.0, 1.5, 0.0, -1.0 / 3.0}};
  const auto v1 = is_schur_stable(char_poly_linear(-79.0 / 24.0, a));
  const auto v2 = is_schur_stable(char_poly_linear(23.0 / 24.0, a));
  const auto printed = is_schur_stable(char_poly_linear(-23.0 / 24.0, a));
  const cplx mu0 = 23.0 / 24.0;
  const auto r = raster_Ma(a, mu0, Window{-3.5, 1.5, -0.5, 0.5}, 1024);
  const auto resolved = resolved_components(r);
  const bool both_in = r.contains_point(-79.0 / 24.0) && r.contains_point(mu0);
  // the two anchors must sit in different resolved components
  bool separate = false;
  if (both_in) {
    const auto p1 = r.pixel_of(-79.0 / 24.0), p2 = r.pixel_of(mu0);
    separate = r.labels[r.index(p1->first, p1->second)] != r.labels[r.index(p2->first, p2->second)];
  }
  const bool ok = v1.stable && v2.stable && resolved.size() == 2 && both_in && separate;
  return {ok, "mu(-79/24)_modulus=" + fmt_double(v1.max_root_modulus, "%.16g") +
                  " mu(+23/24)_modulus=" + fmt_double(v2.max_root_modulus, "%.16g") +
                  " literal(-23/24)_modulus=" + g6(printed.max_root_modulus) +
                  " resolved_components=" + std::to_string(resolved.size()) +
                  " raw_components=" + std::to_string(r.components) + " anchors_separate=" + (separate ? "yes" : "no")};
}

Outcome stabilization() {
  std::string detail;
  bool ok = true;
  auto record = [&](const std::string& tag, const SystemDef& sys, const Trajectory& t, const State& xs, double tol,
                    std::size_t horizon) {
    const auto st = convergence_stats(sys, t, xs, tol);
    const bool pass = !t.overflow && st.converged && st.step && *st.step <= horizon;
    ok = ok && pass;
    detail += (detail.empty() ? "" : " | ") + tag + " converged=" + (pass ? "yes" : "no") +
              " step=" + (st.step ? std::to_string(*st.step) : std::string("-")) + " final_error=" + g6(st.final_error);
  };

  {
    const auto sys = builtins::logistic(3.2);
    const State xs = State::Constant(1, 1.0 - 1.0 / 3.2);
    const double gain = theorem6_gain(-2.0, 1.0).midpoint();
    const auto hist = make_history(xs, 2, 0.01, kSeed);
    record("logistic(3.2) gain=" + g6(gain), sys, simulate_linear_dfc(sys, GainVector{{gain}}, hist, 10000), xs, 1e-8,
           10000);
  }
  {
    const auto sys = builtins::logistic(3.9);
    const State xs = State::Constant(1, 1.0 - 1.0 / 3.9);
    const auto hist = make_history(xs, 2, 0.01, kSeed);
    record("logistic(3.9) N=2", sys, simulate_nonlinear_dfc(sys, fejer_alphas(2), hist, 10000), xs, 1e-8, 10000);
  }
  {
    const auto sys = builtins::ikeda();
    State guess(2);
    guess << 0.5, 0.3;
    const State xs = find_equilibrium(sys, guess);
    const auto hist = make_history(xs, 150, 0.01, kSeed);
    record("ikeda N=150", sys, simulate_nonlinear_dfc(sys, fejer_alphas(150), hist, 100000), xs, 1e-6, 100000);
  }
  return {ok, detail};
}

Outcome blockers() {
  const double h0 = 10.0;
  const MultiplierSet c{{shape::Point{-2 * h0}, shape::Point{std::polar(h0, 2 * pi / 3)},
                         shape::Point{std::polar(h0, -2 * pi / 3)}}};
  const auto vc = no_control_exists(c);
  const MultiplierSet a{{shape::Segment{-pi * 1.0, 1.0}}};
  const auto va = no_control_exists(a);
  const bool ok = vc.blocked() && vc.reason == BlockReason::DiameterAbove16 && va.blocked() &&
                  va.reason == BlockReason::ComponentAbove4;
  return {ok, std::string("sine3(h0=10): ") + (vc.blocked() ? "BLOCKED" : "UNKNOWN") + " reason=" +
                  to_string(vc.reason) + " d_total=" + g6(vc.d_total) + " | interval(h0=1): " +
                  (va.blocked() ? "BLOCKED" : "UNKNOWN") + " reason=" + to_string(va.reason) +
                  " component=" + g6(va.max_component_diameter)};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

Outcome determinism() {
  namespace fs = std::filesystem;
  const fs::path out = fs::current_path() / "acceptance_out";
  fs::create_directories(out);
  std::vector<std::string> reports;
  for (const char* threads : {"1", "2"}) {
    const std::string label = std::string("det") + threads;
    const std::string cmd = std::string("DFC_THREADS=") + threads + " " + DFC_CLI_PATH + " verify --seed 7 --out-dir " +
                            out.string() + " --label " + label + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    if (!WIFEXITED(status) || WEXITSTATUS(status) > 1)
      return {false, "verify run failed with status " + std::to_string(status)};
    reports.push_back(slurp(out / ("verify-" + label + ".txt")));
  }
  const bool same = !reports[0].empty() && reports[0] == reports[1];
  return {same, "bytes=" + std::to_string(reports[0].size()) + " identical=" + (same ? "yes" : "no") +
                    " threads=1,2 seed=7"};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "schur_oracle_equivalence", schur_equivalence, 10.0},
      {2, "a2_triangle", a2_triangle, 30.0},
      {3, "inversion_equivalence", inversion, 30.0},
      {4, "inner_disc_1_16", inner_disc},
      {5, "hull_disc_1_4", hull_disc},
      {6, "diameter_bounds", diameter_bounds, 300.0},
      {7, "extremal_sharpness", extremal_sharpness},
      {8, "one_delay_gain_interval", gain_interval},
      {9, "fejer_construction", fejer, 60.0},
      {10, "two_dimensional_example", two_dim_example},
      {11, "closed_loop_stabilization", stabilization},
      {12, "blocker_verdicts", blockers},
      {13, "verify_determinism", determinism},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    bool pass = o.pass;
    std::string timing = "time=" + fmt_double(secs, "%.2f") + "s";
    if (c.time_limit_s > 0.0) {
      timing += " limit=" + fmt_double(c.time_limit_s, "%g") + "s";
      pass = pass && secs < c.time_limit_s;
    }
    failed += !pass;
    std::printf("%s %2d %s : %s %s\n", pass ? "PASS" : "FAIL", c.id, c.name.c_str(), o.detail.c_str(), timing.c_str());
    std::fflush(stdout);
  }
  std::printf("acceptance: passed=%d failed=%d\n", static_cast<int>(criteria.size()) - failed, failed);
  return failed == 0 ? 0 : 1;
}
