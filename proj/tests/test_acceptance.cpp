// Acceptance suite: one pass/fail line per criterion on stdout.

#include <catch2/catch_amalgamated.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "crossdiff/runner.hpp"
#include "crossdiff/verify.hpp"

using namespace crossdiff;
using std::numbers::pi;
namespace fs = std::filesystem;

namespace {

void report(int criterion, const char* what, bool pass) {
  std::printf("criterion %2d [%s] %s\n", criterion, pass ? "PASS" : "FAIL",
              what);
  CHECK(pass);
}

double elapsed_s(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
      .count();
}

double heat_sup_error(int n) {
  json cfg = preset_config("heat-1d");
  cfg["grid"]["n"] = n;
  const Scenario sc = parse_scenario(cfg);
  const Grid g = build_uniform_grid(sc.grid_dim, sc.grid_n, sc.grid_length);
  const State s0 = build_initial_state(g, sc.model, sc.initial);
  const RunResult res = run(sc.model, g, s0, sc.solver);
  REQUIRE(res.traj.outcome == Outcome::Completed);
  const State& fin = res.traj.snapshots.back();
  double err = 0.0;
  for (int j = 0; j < g.n; ++j)
    err = std::max(err, std::abs(fin.u[0][j] - std::exp(-pi * pi * fin.t) *
                                                   std::sin(pi * g.coord(j))));
  return err;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("criterion 1: operator fidelity on the 1D heat equation") {
  const auto start = std::chrono::steady_clock::now();
  const double err128 = heat_sup_error(128);
  const double err63 = heat_sup_error(63);
  const double err127 = heat_sup_error(127);
  const double ratio = err63 / err127;
  const double secs = elapsed_s(start);
  report(1, "heat sup error at t=0.1 <= 1e-3", err128 <= 1e-3);
  report(1, "halving h shrinks error by [3.2, 4.8]",
         ratio >= 3.2 && ratio <= 4.8);
  report(1, "runtime < 5 s", secs < 5.0);
}

TEST_CASE("criterion 2: exact W-reduction on the shipped presets") {
  const auto start = std::chrono::steady_clock::now();
  bool all = true;
  for (const Check& c : verify_reduction()) all = all && c.pass;
  const double secs = elapsed_s(start);
  report(2, "w-reduction residual <= 1e-12 on all presets", all);
  report(2, "runtime < 10 s", secs < 10.0);
}

TEST_CASE("criterion 3: positivity suite with negative control") {
  bool seeds = true, control = false;
  for (const Check& c : verify_positivity()) {
    if (c.name == "positivity/negative-control") control = c.pass;
    else seeds = seeds && c.pass;
  }
  report(3, "10 seeded nonnegative runs stay >= -1e-10*(1+sup)", seeds);
  report(3, "sign-indefinite reaction produces detectable negativity", control);
}

TEST_CASE("criterion 4: W-trajectory equivalence for yw with equal reactions") {
  json cfg = preset_config("yw-small-eps");
  cfg["solver"]["record_every"] = 100;
  const Scenario sc = parse_scenario(cfg);
  const Grid g = build_uniform_grid(sc.grid_dim, sc.grid_n, sc.grid_length);
  const State s0 = build_initial_state(g, sc.model, sc.initial);

  // fix dt for both runs so the snapshots align step for step
  SolverConfig cfg_fixed = sc.solver;
  cfg_fixed.dt = cfl_dt(sc.model, g, s0, sc.solver.safety);
  const RunResult sys = run(sc.model, g, s0, cfg_fixed);
  REQUIRE(sys.traj.outcome == Outcome::Completed);

  // scalar W-equation with the same Psi, lambda0 and reaction
  ModelSpec wmod;
  wmod.variant = Variant::Scalar;
  wmod.m = 1;
  wmod.lambda0 = sc.model.lambda0;
  wmod.psi = sc.model.psi;
  wmod.combo.a = {1.0};
  wmod.reaction.kind = ReactionKind::PsiBounded;
  wmod.reaction.k = {sc.model.reaction.k[0]};
  wmod.reaction.c0 = sc.model.reaction.c0;
  wmod.reaction.cert_C = {{sc.model.reaction.cert_C[0][0]}};
  wmod.reaction.cert_c = {{sc.model.reaction.cert_c[0][0]}};
  const double b = sc.model.combo.a[0], a = sc.model.combo.a[1];
  State w0;
  w0.u.push_back(make_field(g));
  for (std::size_t j = 0; j < g.node_count(); ++j)
    w0.u[0][j] = b * s0.u[0][j] + a * s0.u[1][j];
  const RunResult wrun = run(wmod, g, w0, cfg_fixed);
  REQUIRE(wrun.traj.outcome == Outcome::Completed);
  REQUIRE(wrun.traj.snapshots.size() == sys.traj.snapshots.size());

  double worst = 0.0;
  for (std::size_t si = 0; si < sys.traj.snapshots.size(); ++si) {
    const State& ss = sys.traj.snapshots[si];
    const State& ws = wrun.traj.snapshots[si];
    const double scale = std::max(1e-30, field_max_abs(ws.u[0]));
    for (std::size_t j = 0; j < g.node_count(); ++j)
      worst = std::max(
          worst, std::abs(b * ss.u[0][j] + a * ss.u[1][j] - ws.u[0][j]) / scale);
  }
  report(4, "co-solved W matches b*u + a*v to <= 1e-10 relative",
         worst <= 1e-10);
}

TEST_CASE("criterion 5: Gronwall bound and fit stability") {
  // g == 0: the L2 energy decays, so C_fit <= 0
  {
    const Scenario sc = load_scenario("heat-1d");
    const Grid g = build_uniform_grid(sc.grid_dim, sc.grid_n, sc.grid_length);
    const State s0 = build_initial_state(g, sc.model, sc.initial);
    const RunResult res = run(sc.model, g, s0, sc.solver);
    std::vector<std::pair<double, double>> l2;
    for (const NormSample& ns : res.series)
      if (ns.l2 > 0.0) l2.emplace_back(ns.t, ns.l2);
    report(5, "pure diffusion gives C_fit <= 0", gronwall_fit(l2) <= 0.0);
  }
  // bounded run with |g| <= c0 Psi: bound holds at every sample and the fit
  // is stable under 2x subsampling
  {
    const Scenario sc = load_scenario("skt-equal-diffusion");
    const Grid g = build_uniform_grid(sc.grid_dim, sc.grid_n, sc.grid_length);
    const State s0 = build_initial_state(g, sc.model, sc.initial);
    const RunResult res = run(sc.model, g, s0, sc.solver);
    REQUIRE(res.traj.outcome == Outcome::Completed);
    std::vector<std::pair<double, double>> l2, half;
    std::size_t idx = 0;
    for (const NormSample& ns : res.series) {
      if (ns.species != 0 || ns.l2 <= 0.0) continue;
      l2.emplace_back(ns.t, ns.l2);
      if (idx++ % 2 == 0) half.emplace_back(ns.t, ns.l2);
    }
    const double c = gronwall_fit(l2);
    bool holds = true;
    for (auto [t, y] : l2)
      if (y > l2.front().second * std::exp(c * (t - l2.front().first)) *
                  (1.0 + 1e-12))
        holds = false;
    report(5, "y(t) <= y(0) e^{C_fit t} at every sample", holds);
    const double c_half = gronwall_fit(half);
    report(5, "C_fit stable within 5% under 2x subsampling",
           std::abs(c - c_half) <= 0.05 * std::abs(c));
  }
}

TEST_CASE("criterion 6: Moser ladder approaches the sup norm") {
  bool limit = false, monotone = false;
  for (const Check& c : verify_ladder()) {
    if (c.name == "ladder/limit-vs-sup") limit = c.pass;
    if (c.name == "ladder/nondecreasing") monotone = c.pass;
  }
  report(6, "|L64 norm - sup| / sup <= 0.1", limit);
  report(6, "ladder norms nondecreasing under normalized mu", monotone);
}

TEST_CASE("criterion 7: parabolic Sobolev ratio is refinement-stable") {
  const double r64 = sobolev_test_ratio(64);
  const double r128 = sobolev_test_ratio(128);
  report(7, "ratio finite for (g=1, G=sin(pi x), p=2)",
         std::isfinite(r64) && std::isfinite(r128) && r64 > 0.0);
  const double change = r64 > r128 ? r64 / r128 : r128 / r64;
  report(7, "ratio varies <= 2x between n=64 and n=128", change <= 2.0);
}

TEST_CASE("criterion 8: F-growth comparability for the shipped Psi family") {
  std::vector<double> ps, vs;
  for (double p = 1.0; p <= 64.0; p *= 2.0) ps.push_back(p);
  for (double v = 0.1; v <= 100.0; v *= 3.1623) vs.push_back(v);
  vs.push_back(100.0);
  bool ok = true;
  for (const PsiSpec psi :
       {PsiSpec{1.0, 0.0, 1.0, false}, PsiSpec{0.0, 1.0, 2.0, false}}) {
    const MuMeasure mu{1.0, psi};
    const GrowthReport rep = f_growth_check(mu, ps, vs);
    if (!(rep.c_low >= 0.2 && rep.c_high <= 5.0)) ok = false;
  }
  report(8, "F(v,p)p/(lambda^{1/2} v^p) in [0.2, 5] for Psi=s+ and s+^2", ok);
}

TEST_CASE("criterion 9: threshold sweeps") {
  // eps0 sweep on yw: eps0 = 0 decouples the coupling, positivity holds
  {
    json cfg = preset_config("yw-small-eps");
    const std::vector<double> values{0.0, 0.01, 0.1, 1.0};
    const auto rows = sweep(cfg, "model.eps0", values, "");
    bool ordered = rows.size() == values.size();
    for (std::size_t i = 0; i < rows.size(); ++i)
      if (rows[i].value != values[i]) ordered = false;
    report(9, "eps0 sweep rows in input order", ordered);
    const double tol = positivity_tolerance(rows[0].sup_norm);
    report(9, "eps0 = 0 keeps min v >= -1e-10*(1+sup)",
           rows[0].min_value >= -tol);
  }
  // c0 sweep on the superlinear scalar model: Completed -> BlowUp transition
  {
    json cfg = preset_config("scalar-superlinear");
    const std::vector<double> values{0.5, 2.0, 10.0, 40.0};
    const auto rows = sweep(cfg, "model.reaction.c0", values, "");
    bool transition = false, tstar_ok = true;
    bool seen_blowup = false;
    bool seen_completed_first = false;
    for (const SweepRow& r : rows) {
      if (r.outcome == Outcome::Completed && !seen_blowup)
        seen_completed_first = true;
      if (r.outcome == Outcome::BlowUp) {
        seen_blowup = true;
        if (!(r.t_star > 0.0 && std::isfinite(r.t_star))) tstar_ok = false;
      }
    }
    transition = seen_completed_first && seen_blowup;
    report(9, "c0 sweep flips Completed -> BlowUp with finite t*",
           transition && tstar_ok);
  }
}

TEST_CASE("criterion 10: determinism of seeded runs") {
  json cfg = preset_config("skt-equal-diffusion");
  cfg["initial"] = {{"profile", "random-nonneg"}, {"amplitude", 1.0},
                    {"seed", 2026}};
  const Scenario sc = parse_scenario(cfg);
  const fs::path d1 = fs::temp_directory_path() / "crossdiff_accept_det1";
  const fs::path d2 = fs::temp_directory_path() / "crossdiff_accept_det2";
  fs::remove_all(d1);
  fs::remove_all(d2);
  run_scenario(sc, d1.string());
  run_scenario(sc, d2.string());
  report(10, "fixed seed yields byte-identical series.csv",
         slurp(d1 / "series.csv") == slurp(d2 / "series.csv"));
}
