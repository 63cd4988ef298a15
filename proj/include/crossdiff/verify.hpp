#ifndef CROSSDIFF_VERIFY_HPP
#define CROSSDIFF_VERIFY_HPP

#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "crossdiff/diagnostics.hpp"
#include "crossdiff/runner.hpp"

// Invariant batteries behind `verify <suite>`; the acceptance tests reuse
// these checks.

namespace crossdiff {

struct Check {
  std::string name;
  bool pass = false;
  std::string detail;
};

namespace verify_detail {

inline Field sample_1d(const Grid& g, double (*fn)(double)) {
  Field f = make_field(g);
  for (int j = 0; j < g.n; ++j) f[j] = fn(g.coord(j));
  return f;
}

inline Check make_check(const std::string& name, bool pass, double value) {
  std::ostringstream os;
  os << value;
  return {name, pass, os.str()};
}

}  // namespace verify_detail

inline std::vector<Check> verify_operators() {
  using std::numbers::pi;
  std::vector<Check> out;

  // discrete eigenfunction identity: Lap sin(k pi x) = -mu_k sin(k pi x)
  {
    const Grid g = build_uniform_grid(1, 64, 1.0);
    double worst = 0.0;
    for (int k = 1; k <= 3; ++k) {
      Field f = make_field(g);
      for (int j = 0; j < g.n; ++j) f[j] = std::sin(k * pi * g.coord(j));
      const Field lap = laplacian(g, f);
      const double mu = 2.0 / (g.h * g.h) * (1.0 - std::cos(k * pi * g.h));
      for (int j = 0; j < g.n; ++j)
        worst = std::max(worst, std::abs(lap[j] + mu * f[j]));
    }
    out.push_back(verify_detail::make_check("laplacian-eigenfunction",
                                            worst <= 1e-8, worst));
  }

  // second-order convergence on sin(pi x)
  {
    double err[2];
    const int ns[2] = {63, 127};
    for (int c = 0; c < 2; ++c) {
      const Grid g = build_uniform_grid(1, ns[c], 1.0);
      Field f = verify_detail::sample_1d(
          g, +[](double x) { return std::sin(std::numbers::pi * x); });
      const Field lap = laplacian(g, f);
      double e = 0.0;
      for (int j = 0; j < g.n; ++j)
        e = std::max(e, std::abs(lap[j] + pi * pi * f[j]));
      err[c] = e;
    }
    const double ratio = err[0] / err[1];
    out.push_back(verify_detail::make_check(
        "laplacian-convergence-order", ratio >= 3.2 && ratio <= 4.8, ratio));
  }

  // L2 quadrature of sin(pi x): exact integral 1/2
  {
    const Grid g = build_uniform_grid(1, 128, 1.0);
    Field f = verify_detail::sample_1d(
        g, +[](double x) { return std::sin(std::numbers::pi * x); });
    const double l2 = integrate_lp(g, f, 2.0);
    const double err = std::abs(l2 - std::sqrt(0.5));
    out.push_back(verify_detail::make_check("l2-quadrature", err <= 1e-3, err));
  }

  // gradient sup of sin(pi x) vs pi
  {
    const Grid g = build_uniform_grid(1, 128, 1.0);
    Field f = verify_detail::sample_1d(
        g, +[](double x) { return std::sin(std::numbers::pi * x); });
    const double err = std::abs(gradient_sup(g, f) - pi);
    out.push_back(verify_detail::make_check("gradient-sup", err <= 1e-2, err));
  }

  // explicit heat run vs e^{-pi^2 t} sin(pi x)
  {
    const Scenario sc = load_scenario("heat-1d");
    const Grid g = build_uniform_grid(sc.grid_dim, sc.grid_n, sc.grid_length);
    const State s0 = build_initial_state(g, sc.model, sc.initial);
    const RunResult res = run(sc.model, g, s0, sc.solver);
    double err = 0.0;
    const State& fin = res.traj.snapshots.back();
    for (int j = 0; j < g.n; ++j) {
      const double exact =
          std::exp(-pi * pi * fin.t) * std::sin(pi * g.coord(j));
      err = std::max(err, std::abs(fin.u[0][j] - exact));
    }
    out.push_back(verify_detail::make_check(
        "heat-analytic",
        res.traj.outcome == Outcome::Completed && err <= 1e-3, err));
  }
  return out;
}

inline std::vector<Check> verify_reduction() {
  std::vector<Check> out;
  for (const std::string name :
       {"skt-equal-diffusion", "yw-small-eps", "ywz"}) {
    Scenario sc = load_scenario(name);
    const Grid g = build_uniform_grid(sc.grid_dim, sc.grid_n, sc.grid_length);
    const State s0 = build_initial_state(g, sc.model, sc.initial);
    const RunResult res = run(sc.model, g, s0, sc.solver);
    double rmax = 0.0;
    for (auto [t, r] : w_reduction_residual(sc.model, g, res.traj))
      rmax = std::max(rmax, r);
    out.push_back(verify_detail::make_check("w-reduction/" + name,
                                            rmax <= 1e-12, rmax));
  }
  return out;
}

inline std::vector<Check> verify_positivity() {
  std::vector<Check> out;
  // ten seeded nonnegative random profiles on the SKT preset
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    json cfg = preset_config("skt-equal-diffusion");
    cfg["initial"] = {{"profile", "random-nonneg"},
                      {"amplitude", 1.0},
                      {"seed", seed}};
    const Scenario sc = parse_scenario(cfg);
    const Grid g = build_uniform_grid(sc.grid_dim, sc.grid_n, sc.grid_length);
    const State s0 = build_initial_state(g, sc.model, sc.initial);
    const RunResult res = run(sc.model, g, s0, sc.solver);
    double sup = 0.0, minv = 0.0;
    for (const NormSample& ns : res.series) {
      sup = std::max({sup, std::abs(ns.max), std::abs(ns.min)});
      minv = std::min(minv, ns.min);
    }
    const bool pass = res.traj.outcome == Outcome::Completed &&
                      minv >= -positivity_tolerance(sup);
    out.push_back(verify_detail::make_check(
        "positivity/seed-" + std::to_string(seed), pass, minv));
  }

  // negative control: a strong sign-indefinite reaction drives the explicit
  // update negative; the solver must report it instead of clamping
  {
    json cfg = preset_config("skt-equal-diffusion");
    cfg["model"]["reaction"] = {
        {"kind", "constant"},
        {"k", {-1e6, -1e6}},
        {"certificate", {{"C", {{1e6, 0.0}, {0.0, 1e6}}},
                         {"c", {{0.0, 0.0}, {0.0, 0.0}}}}}};
    const Scenario sc = parse_scenario(cfg);
    const Grid g = build_uniform_grid(sc.grid_dim, sc.grid_n, sc.grid_length);
    State s = build_initial_state(g, sc.model, sc.initial);
    const double dt = cfl_dt(sc.model, g, s, sc.solver.safety);
    double minv = 0.0;
    for (int step = 0; step < 3; ++step) {
      s = step_explicit(sc.model, g, s, dt);
      for (const Field& f : s.u) minv = std::min(minv, field_min(f));
    }
    out.push_back(verify_detail::make_check("positivity/negative-control",
                                            minv < -1e-3, minv));
  }
  return out;
}

// Bounded nonnegative run used by the ladder check: heat diffusion balanced
// by a constant reaction so the profile stays near sin(pi x).
inline Scenario ladder_scenario() {
  json cfg = preset_config("heat-1d");
  const double k = std::numbers::pi * std::numbers::pi;
  cfg["model"]["reaction"] = {
      {"kind", "constant"},
      {"k", {k}},
      {"certificate", {{"C", {{k + 1.0}}}, {"c", {{0.0}}}}}};
  cfg["solver"]["t_end"] = 0.05;
  cfg["solver"]["record_every"] = 4;
  return parse_scenario(cfg);
}

inline std::vector<Check> verify_ladder() {
  std::vector<Check> out;
  const Scenario sc = ladder_scenario();
  const Grid g = build_uniform_grid(sc.grid_dim, sc.grid_n, sc.grid_length);
  const State s0 = build_initial_state(g, sc.model, sc.initial);
  const RunResult res = run(sc.model, g, s0, sc.solver);
  const MuMeasure mu{sc.model.lambda0, sc.model.psi};
  const LadderReport lad = moser_ladder(g, res.traj, mu, 64);
  const double gap = std::abs(lad.norms.back() - lad.sup_norm) / lad.sup_norm;
  out.push_back(verify_detail::make_check("ladder/limit-vs-sup", gap <= 0.1, gap));
  bool monotone = true;
  for (double r : lad.ratios)
    if (r < 1.0 - 1e-12) monotone = false;
  out.push_back(verify_detail::make_check("ladder/nondecreasing", monotone,
                                          lad.ratios.empty() ? 0.0
                                                             : lad.ratios.front()));
  return out;
}

inline double sobolev_test_ratio(int n) {
  using std::numbers::pi;
  const Grid g = build_uniform_grid(1, n, 1.0);
  Field G = make_field(g);
  for (int j = 0; j < g.n; ++j) G[j] = std::sin(pi * g.coord(j));
  const std::vector<double> times = {0.0, 0.05};
  const std::vector<Field> gs(2, make_field(g, 1.0));
  const std::vector<Field> Gs(2, G);
  return sobolev_ratio(g, times, gs, Gs, 2.0);
}

inline std::vector<Check> verify_sobolev() {
  std::vector<Check> out;
  const double r64 = sobolev_test_ratio(64);
  const double r128 = sobolev_test_ratio(128);
  const bool finite = std::isfinite(r64) && std::isfinite(r128) && r64 > 0.0;
  out.push_back(verify_detail::make_check("sobolev/finite", finite, r128));
  const double change = r64 > r128 ? r64 / r128 : r128 / r64;
  out.push_back(
      verify_detail::make_check("sobolev/refinement-stable", change <= 2.0, change));
  return out;
}

inline std::vector<Check> verify_suite(const std::string& suite) {
  if (suite == "operators") return verify_operators();
  if (suite == "reduction") return verify_reduction();
  if (suite == "positivity") return verify_positivity();
  if (suite == "ladder") return verify_ladder();
  if (suite == "sobolev") return verify_sobolev();
  if (suite == "all") {
    std::vector<Check> out;
    for (const char* s :
         {"operators", "reduction", "positivity", "ladder", "sobolev"}) {
      auto part = verify_suite(s);
      out.insert(out.end(), part.begin(), part.end());
    }
    return out;
  }
  throw ConfigError("unknown verify suite '" + suite + "'");
}

}  // namespace crossdiff

#endif  // CROSSDIFF_VERIFY_HPP
