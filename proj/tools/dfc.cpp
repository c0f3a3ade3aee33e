// dfc: command-line front end for region analysis, control synthesis,
// closed-loop simulation and the property suite.
//
// Exit codes: 0 ok, 1 a verify property failed, 2 malformed input,
// 3 empty region or mu0 outside its region, 4 no control can exist,
// 5 a simulation overflowed.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dfc/control.hpp"
#include "dfc/dynamics.hpp"
#include "dfc/io.hpp"
#include "dfc/multiplier_set.hpp"
#include "dfc/region.hpp"
#include "dfc/verify.hpp"

namespace fs = std::filesystem;
using namespace dfc;

namespace {

enum Exit { kOk = 0, kVerifyFailed = 1, kBadInput = 2, kEmptyRegion = 3, kBlocked = 4, kOverflow = 5 };

struct Common {
  std::string out_dir = ".";
  std::string label = "run";
  std::uint64_t seed = 1;
};

std::vector<double> parse_reals(const std::string& text, const char* what) {
  std::vector<double> v;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    std::size_t used = 0;
    double x = 0.0;
    try {
      x = std::stod(tok, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    while (used < tok.size() && std::isspace(static_cast<unsigned char>(tok[used]))) ++used;
    if (tok.empty() || used != tok.size() || !std::isfinite(x))
      throw Error(Errc::ParseError, std::string(what) + ": cannot read '" + tok + "' as a real number");
    v.push_back(x);
  }
  if (v.empty()) throw Error(Errc::ParseError, std::string(what) + ": empty list");
  return v;
}

cplx parse_complex(const std::string& text, const char* what) {
  const auto v = parse_reals(text, what);
  if (v.size() > 2) throw Error(Errc::ParseError, std::string(what) + ": expected re or re,im");
  return {v[0], v.size() == 2 ? v[1] : 0.0};
}

Window parse_window(const std::string& text) {
  const auto v = parse_reals(text, "--window");
  if (v.size() != 4 || !(v[0] < v[1]) || !(v[2] < v[3]))
    throw Error(Errc::ParseError, "--window: expected xmin,xmax,ymin,ymax with min < max");
  return {v[0], v[1], v[2], v[3]};
}

std::string read_text_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error(Errc::ParseError, "cannot read " + path);
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

fs::path artifact(const Common& c, const std::string& command, const std::string& suffix, const std::string& ext) {
  fs::create_directories(c.out_dir);
  return fs::path(c.out_dir) / (command + "-" + c.label + suffix + "." + ext);
}

std::string window_text(const Window& w) {
  return fmt_double(w.re_min) + "," + fmt_double(w.re_max) + "," + fmt_double(w.im_min) + "," + fmt_double(w.im_max);
}

// ---------------------------------------------------------------------------
// analyze-region

struct AnalyzeArgs {
  std::string a, eps, mu0 = "0,0", window;
  int resolution = kDefaultResolution;
  int boundary_samples = 4096;
};

void draw_phi(const Common& c, const PhiMap& phi, int samples) {
  const auto pts = phi_boundary(phi, samples);
  double ext = 0.3;
  for (const auto& z : pts) ext = std::max({ext, std::abs(z.real()), std::abs(z.imag())});
  ext *= 1.1;
  SvgCanvas svg(Window{-ext, ext, -ext, ext});
  svg.axes();
  svg.polyline(pts, "#1f4e9c");
  svg.circle(0.0, 0.25, "#c0392b", true);
  svg.circle(0.0, 1.0 / 16.0, "#27ae60", true);
  write_file(artifact(c, "analyze-region", "-phi", "svg"), svg.str());
}

int cmd_analyze(const Common& c, const AnalyzeArgs& args) {
  CoeffVector a;
  if (!args.a.empty() == !args.eps.empty()) throw Error(Errc::ParseError, "give exactly one of --a and --eps");
  if (!args.a.empty()) a.a = parse_reals(args.a, "--a");
  else a = gains_to_coeffs(GainVector{parse_reals(args.eps, "--eps")});
  const cplx mu0 = parse_complex(args.mu0, "--mu0");
  const Window w = args.window.empty() ? kDefaultWindow : parse_window(args.window);
  if (args.resolution < 64) throw Error(Errc::OutOfRange, "--resolution must be at least 64");

  const PhiMap phi = make_phi(a, mu0);
  Report rep;
  rep.add("a", [&] {
    std::string s;
    for (double x : a.a) s += (s.empty() ? "" : ",") + fmt_double(x);
    return s;
  }());
  rep.add("mu0", mu0).add("window", window_text(w)).add("resolution", args.resolution);
  rep.add("pole_free", phi.pole_free).add("min_pole_modulus", phi.min_pole_modulus);
  if (phi.pole_free) draw_phi(c, phi, args.boundary_samples);

  const auto r = raster_Ma(a, mu0, w, args.resolution);  // EmptyRegion -> exit 3
  const auto cross = compare_masks(r, raster_Ma_inversion(a, mu0, w, args.resolution), 2);
  write_file(artifact(c, "analyze-region", "", "pgm"), pgm_bytes(r));

  const auto dia = diameters(r);
  const auto resolved = resolved_components(r);
  SvgCanvas svg(w);
  svg.axes();
  svg.raster_outline(r, "#1f4e9c");
  svg.segment(dia.total_witness.first, dia.total_witness.second, "#c0392b");
  for (int id : resolved) {
    const auto& wp = dia.witness_pairs.at(id);
    svg.segment(wp.first, wp.second, "#e67e22");
  }
  svg.circle(mu0, 0.5 * r.pixel_diag() + 0.004 * (w.re_max - w.re_min), "#000000");
  svg.label(mu0, "mu0");
  write_file(artifact(c, "analyze-region", "", "svg"), svg.str());

  rep.add("pixel_diag", r.pixel_diag()).add("stable_pixels", r.count()).add("contains_infinity", r.contains_infinity);
  rep.add("components", r.components).add("resolved_components", static_cast<int>(resolved.size()));
  rep.add("cross_check_disagreements", cross.disagreements).add("cross_check_outside_band", cross.outside_band);
  for (int id : resolved) rep.add("component_" + std::to_string(id) + "_diameter", dia.component_diameters.at(id));

  const auto px = r.pixel_of(mu0);
  const bool mu0_inside = px && r.inside(px->first, px->second);
  rep.add("mu0_in_region", mu0_inside);
  rep.add("d_total", dia.total_diameter);
  if (mu0_inside) {
    const auto b = verify_diameter_bounds(r, mu0);
    rep.add("d_component", b.d_component).add("pass_16", b.pass_16).add("pass_4", b.pass_4);
  }
  write_file(artifact(c, "analyze-region", "", "txt"), rep.str());
  std::cout << rep.str();
  return mu0_inside ? kOk : kEmptyRegion;
}

// ---------------------------------------------------------------------------
// synthesize

struct SynthesizeArgs {
  std::string multiplier_set;
  int resolution = 512;
  int density = kDefaultCoverDensity;
};

bool all_real(const MultiplierSet& m, double& lo, double& hi) {
  lo = 1e300;
  hi = -1e300;
  for (const auto& p : m.primitives)
    for (const auto& z : sample(p, kDefaultCoverDensity)) {
      if (std::abs(z.imag()) > 1e-12 * std::max(1.0, std::abs(z))) return false;
      lo = std::min(lo, z.real());
      hi = std::max(hi, z.real());
    }
  return true;
}

int cmd_synthesize(const Common& c, const SynthesizeArgs& args) {
  const MultiplierSet m = parse_multiplier_set(read_text_file(args.multiplier_set));
  const auto v = no_control_exists(m);
  Report rep;
  rep.add("linear_verdict", v.blocked() ? "BLOCKED" : "UNKNOWN").add("reason", to_string(v.reason));
  rep.add("d_total", v.d_total).add("max_component_diameter", v.max_component_diameter);
  rep.add("components", v.components);

  double lo = 0.0, hi = 0.0;
  if (all_real(m, lo, hi) && lo >= -3.0 && lo < hi && hi <= 1.0 && !v.blocked()) {
    const auto iv = theorem6_gain(lo, hi);
    rep.add("gain_interval_lo", iv.lo).add("gain_interval_hi", iv.hi).add("one_delay_gain", iv.midpoint());
    write_file(artifact(c, "synthesize", "-linear-gains", "txt"), vector_text({iv.midpoint()}));
  }

  const auto radius = fit_left_disc(m, args.density);
  if (!radius) {
    rep.add("nonlinear", "no left disc |z + R| < R contains the set");
    write_file(artifact(c, "synthesize", "", "txt"), rep.str());
    std::cout << rep.str();
    return v.blocked() ? kBlocked : kOk;
  }
  const int n = min_N_for_disc(*radius);
  const auto al = fejer_alphas(n);
  const auto gains = alpha_to_gains(al);
  rep.add("R", *radius).add("N", n);

  Window w = bounding_window(m, 0.5, args.density);
  const double half = n / 2.0;
  w.re_min = std::min(w.re_min, -2.0 * half - 0.5);
  w.re_max = std::max(w.re_max, 1.5);
  w.im_min = std::min(w.im_min, -half - 0.5);
  w.im_max = std::max(w.im_max, half + 0.5);
  const auto r = admissible_domain(al, w, args.resolution);
  const auto cov = covers(m, r, args.density);
  rep.add("window", window_text(w)).add("resolution", args.resolution);
  rep.add("coverage", cov.fraction).add("samples", cov.samples).add("uncovered", cov.uncovered.size());

  write_file(artifact(c, "synthesize", "-gains", "txt"), vector_text(gains.eps));
  write_file(artifact(c, "synthesize", "-alpha", "txt"), vector_text(al.alpha));
  write_file(artifact(c, "synthesize", "", "pgm"), pgm_bytes(r));
  SvgCanvas svg(w);
  svg.axes();
  svg.raster_outline(r, "#1f4e9c");
  svg.circle(-half, half, "#27ae60", true);
  for (const auto& p : m.primitives) {
    const auto pts = sample(p, 256);
    if (pts.size() == 1) svg.circle(pts[0], 0.005 * (w.re_max - w.re_min), "#c0392b");
    else svg.polyline(pts, "#c0392b", false);
  }
  write_file(artifact(c, "synthesize", "", "svg"), svg.str());
  write_file(artifact(c, "synthesize", "", "txt"), rep.str());
  std::cout << rep.str();
  return kOk;
}

// ---------------------------------------------------------------------------
// simulate

struct SimulateArgs {
  std::string system, h, x0, eps, alpha, n_list, gain_interval, control;
  std::size_t horizon = kDefaultHorizon;
  double perturb = 0.01;
};

State default_guess(const SystemDef& sys) {
  for (const auto& b : props::benchmarks())
    if (b.sys.name == sys.name) return b.guess;
  return State::Zero(sys.dim);
}

int cmd_simulate(const Common& c, const SimulateArgs& args) {
  std::vector<double> params;
  if (!args.h.empty()) params = parse_reals(args.h, "--h");
  const SystemDef sys = builtin(args.system, params);

  State x0;
  if (!args.x0.empty()) {
    const auto v = parse_reals(args.x0, "--x0");
    if (static_cast<int>(v.size()) != sys.dim) throw Error(Errc::ParseError, "--x0 has the wrong dimension");
    x0 = Eigen::Map<const State>(v.data(), sys.dim);
  }
  Report rep;
  rep.add("system", sys.name).add("param", sys.param);
  std::optional<State> xs;
  try {
    xs = find_equilibrium(sys, x0.size() ? x0 : default_guess(sys));
  } catch (const Error& e) {
    if (e.code() != Errc::NoConvergence) throw;
  }
  if (!x0.size()) {
    if (!xs) throw Error(Errc::NoConvergence, "no equilibrium found; pass --x0");
    x0 = *xs;
  }
  if (xs) {
    std::string s;
    for (int k = 0; k < sys.dim; ++k) s += (k ? "," : "") + fmt_double((*xs)[k]);
    rep.add("equilibrium", s);
    const auto mus = multipliers(sys, *xs);
    for (std::size_t k = 0; k < mus.size(); ++k) rep.add("multiplier_" + std::to_string(k + 1), mus[k]);
  }

  struct Run {
    std::string suffix;
    std::string kind;
    GainVector gains;
    std::optional<AlphaVector> alpha;
  };
  std::vector<Run> runs;
  std::string mode = args.control;
  if (!args.gain_interval.empty()) {
    const auto v = parse_reals(args.gain_interval, "--gain-interval");
    if (v.size() != 2) throw Error(Errc::ParseError, "--gain-interval expects a,b");
    runs.push_back({"", "linear", GainVector{{theorem6_gain(v[0], v[1]).midpoint()}}, std::nullopt});
  } else if (!args.eps.empty()) {
    if (mode.empty()) mode = "linear";
    runs.push_back({"", mode, GainVector{parse_reals(args.eps, "--eps")}, std::nullopt});
  } else if (!args.alpha.empty()) {
    AlphaVector al{parse_reals(args.alpha, "--alpha")};
    runs.push_back({"", "nonlinear", alpha_to_gains(al), al});
  } else if (!args.n_list.empty()) {
    const auto ns = parse_reals(args.n_list, "--N");
    for (double nd : ns) {
      const int n = static_cast<int>(nd);
      if (n != nd || n < 1) throw Error(Errc::ParseError, "--N values must be positive integers");
      const auto al = fejer_alphas(n);
      const std::string k = mode.empty() ? "nonlinear" : mode;
      runs.push_back({ns.size() > 1 ? "-N" + std::to_string(n) : "", k, alpha_to_gains(al), std::nullopt});
    }
  } else {
    runs.push_back({"", "none", GainVector{}, std::nullopt});
  }

  bool overflow = false;
  for (const auto& run : runs) {
    if (run.kind != "linear" && run.kind != "nonlinear" && run.kind != "none")
      throw Error(Errc::ParseError, "--control must be linear or nonlinear");
    const std::size_t order = run.alpha ? run.alpha->order() : run.gains.order();
    const auto hist = make_history(x0, order, args.perturb, c.seed);
    SimOptions opt;
    opt.target = xs;
    Trajectory t;
    if (run.kind == "none") t = simulate_open(sys, x0, args.horizon, opt);
    else if (run.kind == "linear") t = simulate_linear_dfc(sys, run.gains, hist, args.horizon, opt);
    else if (run.alpha) t = simulate_nonlinear_dfc(sys, *run.alpha, hist, args.horizon, opt);
    else t = simulate_nonlinear_dfc(sys, run.gains, hist, args.horizon, opt);
    write_file(artifact(c, "simulate", run.suffix, "csv"), trajectory_csv(t));

    const std::string p = run.suffix.empty() ? "" : run.suffix.substr(1) + "_";
    rep.add(p + "control", run.kind).add(p + "order", order);
    if (!run.gains.eps.empty()) write_file(artifact(c, "simulate", run.suffix + "-gains", "txt"), vector_text(run.gains.eps));
    rep.add(p + "steps", t.states.size() - 1).add(p + "overflow", t.overflow);
    if (xs) {
      const auto st = convergence_stats(sys, t, *xs);
      rep.add(p + "converged", st.converged);
      if (st.step) rep.add(p + "convergence_step", *st.step);
      rep.add(p + "rate", st.rate).add(p + "final_error", st.final_error);
      double predicted = 0.0;
      for (const auto& mu : multipliers(sys, *xs)) {
        Polynomial poly = run.kind == "linear"
                              ? char_poly_linear(mu, gains_to_coeffs(run.gains))
                              : char_poly_nonlinear(mu, run.alpha ? *run.alpha : gains_to_alpha(run.gains));
        predicted = std::max(predicted, is_schur_stable(poly).max_root_modulus);
      }
      rep.add(p + "predicted_rate", predicted);
    }
    overflow = overflow || t.overflow;
  }
  write_file(artifact(c, "simulate", "", "txt"), rep.str());
  std::cout << rep.str();
  return overflow ? kOverflow : kOk;
}

// ---------------------------------------------------------------------------
// verify, multipliers

struct VerifyArgs {
  double tolerance_scale = 1.0;
  std::vector<std::string> only;
};

int cmd_verify(const Common& c, const VerifyArgs& args) {
  const auto results = run_properties(c.seed, args.tolerance_scale, args.only);
  const std::string text = format_results(results, c.seed, args.tolerance_scale);
  write_file(artifact(c, "verify", "", "txt"), text);
  std::cout << text;
  for (const auto& r : results)
    if (!r.outcome.pass) return kVerifyFailed;
  return kOk;
}

int cmd_multipliers(const Common& c, const SimulateArgs& args) {
  std::vector<double> params;
  if (!args.h.empty()) params = parse_reals(args.h, "--h");
  const SystemDef sys = builtin(args.system, params);
  State guess = default_guess(sys);
  if (!args.x0.empty()) {
    const auto v = parse_reals(args.x0, "--x0");
    if (static_cast<int>(v.size()) != sys.dim) throw Error(Errc::ParseError, "--x0 has the wrong dimension");
    guess = Eigen::Map<const State>(v.data(), sys.dim);
  }
  const State xs = find_equilibrium(sys, guess);
  Report rep;
  rep.add("system", sys.name).add("param", sys.param);
  std::string s;
  for (int k = 0; k < sys.dim; ++k) s += (k ? "," : "") + fmt_double(xs[k]);
  rep.add("equilibrium", s);
  const auto mus = multipliers(sys, xs);
  double spread = 0.0;
  for (std::size_t k = 0; k < mus.size(); ++k) {
    rep.add("multiplier_" + std::to_string(k + 1), mus[k]);
    for (const auto& o : mus) spread = std::max(spread, std::abs(mus[k] - o));
  }
  rep.add("multiplier_diameter", spread);
  write_file(artifact(c, "multipliers", "", "txt"), rep.str());
  std::cout << rep.str();
  return kOk;
}

int exit_code_for(Errc e) {
  switch (e) {
    case Errc::EmptyRegion:
    case Errc::Mu0NotInRegion: return kEmptyRegion;
    default: return kBadInput;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Delayed feedback control: regions, synthesis, simulation"};
  app.set_help_flag("--help", "print this help and exit");
  app.require_subcommand(1);
  Common common;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--out-dir", common.out_dir, "artifact directory")->capture_default_str();
    sub->add_option("--label", common.label, "artifact label, files are <command>-<label>.<ext>")
        ->capture_default_str();
    sub->add_option("--seed", common.seed, "seed for every randomized step")->capture_default_str();
  };

  AnalyzeArgs an;
  auto* analyze = app.add_subcommand("analyze-region", "raster M_a, its components and diameters");
  add_common(analyze);
  analyze->add_option("--a", an.a, "closed-loop coefficients a_1..a_N, comma separated");
  analyze->add_option("--eps", an.eps, "gains eps_1..eps_{N-1}, comma separated");
  analyze->add_option("--mu0", an.mu0, "anchor multiplier re,im")->capture_default_str();
  analyze->add_option("--window", an.window, "xmin,xmax,ymin,ymax (default -18,18,-18,18)");
  analyze->add_option("--resolution", an.resolution, "pixels per axis")->capture_default_str();

  SynthesizeArgs sy;
  auto* synth = app.add_subcommand("synthesize", "control synthesis for a multiplier set");
  add_common(synth);
  synth->add_option("--multiplier-set", sy.multiplier_set, "multiplier set file")->required();
  synth->add_option("--resolution", sy.resolution, "pixels per axis of the admissible domain")
      ->capture_default_str();

  SimulateArgs si;
  auto* sim = app.add_subcommand("simulate", "open or closed-loop orbit of a builtin system");
  add_common(sim);
  sim->add_option("--system", si.system, "builtin system name")->required();
  sim->add_option("--h", si.h, "system parameters, comma separated");
  sim->add_option("--x0", si.x0, "initial state (default: the equilibrium)");
  sim->add_option("--perturb", si.perturb, "history perturbation radius")->capture_default_str();
  sim->add_option("--eps", si.eps, "gains eps_1..eps_{N-1}");
  sim->add_option("--alpha", si.alpha, "convolution weights alpha_1..alpha_N");
  sim->add_option("--N", si.n_list, "Fejer orders, comma separated for a sweep");
  sim->add_option("--gain-interval", si.gain_interval, "a,b: one-delay linear gain at the interval midpoint");
  sim->add_option("--control", si.control, "linear or nonlinear (with --eps or --N)");
  sim->add_option("--horizon", si.horizon, "steps")->capture_default_str();

  VerifyArgs ve;
  auto* verify = app.add_subcommand("verify", "run the property suite");
  add_common(verify);
  verify->add_option("--tolerance-scale", ve.tolerance_scale, "multiplies every tolerance")->capture_default_str();
  verify->add_option("--only", ve.only, "run only the named properties");

  SimulateArgs mu;
  auto* mults = app.add_subcommand("multipliers", "equilibrium and Jacobian spectrum of a builtin");
  add_common(mults);
  mults->add_option("--system", mu.system, "builtin system name")->required();
  mults->add_option("--h", mu.h, "system parameters, comma separated");
  mults->add_option("--x0", mu.x0, "Newton starting guess");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kBadInput;
  }

  try {
    if (*analyze) return cmd_analyze(common, an);
    if (*synth) return cmd_synthesize(common, sy);
    if (*sim) return cmd_simulate(common, si);
    if (*verify) return cmd_verify(common, ve);
    if (*mults) return cmd_multipliers(common, mu);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kBadInput;
  }
  return kBadInput;
}
