#ifndef CROSSDIFF_RUNNER_HPP
#define CROSSDIFF_RUNNER_HPP

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <mutex>
#include <thread>

#include "crossdiff/config.hpp"
#include "crossdiff/diagnostics.hpp"
#include "crossdiff/io.hpp"

namespace crossdiff {

struct RunArtifacts {
  int exit_code = 0;  // 0 success, 1 run/invariant failure
  Outcome outcome = Outcome::Completed;
  double t_fail = 0.0;
  double sup_norm = 0.0;   // max over run, all species
  double min_value = 0.0;  // min over run, all species
  double gronwall_c = 0.0;
  double max_residual = 0.0;
  json manifest;
};

inline double positivity_tolerance(double sup_norm) {
  return 1e-10 * (1.0 + sup_norm);
}

// Execute a scenario and (optionally) write manifest/series/snapshots under
// out_dir. Empty out_dir means in-memory only.
inline RunArtifacts run_scenario(const Scenario& sc,
                                 const std::string& out_dir = "") {
  namespace fs = std::filesystem;
  const auto wall_start = std::chrono::steady_clock::now();

  RunArtifacts art;
  const Grid grid = build_uniform_grid(sc.grid_dim, sc.grid_n, sc.grid_length);
  const State state0 = build_initial_state(grid, sc.model, sc.initial);

  // sampled growth certificate gate
  auto box = sc.cert_box;
  if (box.empty())
    box.assign(sc.model.m, {0.0, 10.0});
  const CertReport cert =
      verify_growth_certificate(sc.model, box, sc.cert_samples);

  const RunResult res = run(sc.model, grid, state0, sc.solver);
  art.outcome = res.traj.outcome;
  art.t_fail = res.traj.t_fail;

  double sup = 0.0, minv = std::numeric_limits<double>::infinity();
  for (const NormSample& ns : res.series) {
    sup = std::max(sup, std::abs(ns.max));
    sup = std::max(sup, std::abs(ns.min));
    minv = std::min(minv, ns.min);
  }
  art.sup_norm = sup;
  art.min_value = minv;

  json checks = json::object();
  bool all_checks_pass = true;
  checks["certificate"] = {{"pass", cert.pass},
                           {"worst_margin", cert.worst_margin},
                           {"pass_alt", cert.pass_alt},
                           {"worst_margin_alt", cert.worst_margin_alt}};
  if (!cert.pass) all_checks_pass = false;

  bool initial_nonneg = true;
  for (const Field& f : state0.u)
    if (field_min(f) < 0.0) initial_nonneg = false;

  if (sc.diag.positivity && initial_nonneg) {
    const double tol = positivity_tolerance(sup);
    const bool pass = minv >= -tol;
    checks["positivity"] = {{"pass", pass}, {"min", minv}, {"tol", tol}};
    if (!pass) all_checks_pass = false;
  }

  json diag = json::object();
  if (sc.diag.residuals && res.traj.outcome == Outcome::Completed) {
    const auto resid = w_reduction_residual(sc.model, grid, res.traj);
    double rmax = 0.0;
    json rows = json::array();
    for (auto [t, r] : resid) {
      rmax = std::max(rmax, r);
      rows.push_back({{"t", t}, {"residual", r}});
    }
    art.max_residual = rmax;
    diag["residuals"] = rows;
    const bool pass = rmax <= 1e-12;
    checks["w_reduction"] = {{"pass", pass}, {"max_residual", rmax}};
    if (!pass) all_checks_pass = false;
  }
  if (sc.diag.gronwall) {
    std::vector<std::pair<double, double>> l2;
    for (const NormSample& ns : res.series)
      if (ns.species == 0 && ns.l2 > 0.0) l2.emplace_back(ns.t, ns.l2);
    if (l2.size() >= 2) {
      art.gronwall_c = gronwall_fit(l2);
      diag["gronwall"] = {{"c_fit", art.gronwall_c}};
    }
  }
  if (sc.diag.ladder && res.traj.outcome == Outcome::Completed) {
    MuMeasure mu{sc.model.lambda0, sc.model.psi};
    const LadderReport lad =
        moser_ladder(grid, res.traj, mu, sc.diag.ladder_pmax, 0, sc.diag.q);
    diag["ladder"] = {{"exponents", lad.exponents}, {"norms", lad.norms},
                      {"ratios", lad.ratios},      {"sup_norm", lad.sup_norm},
                      {"mu_total", lad.mu_total},  {"q", lad.q},
                      {"gamma", lad.gamma},        {"gamma0", lad.gamma0}};
  }
  if (sc.diag.sobolev && res.traj.outcome == Outcome::Completed) {
    std::vector<double> times;
    std::vector<Field> ones, G;
    for (const State& s : res.traj.snapshots) {
      times.push_back(s.t);
      ones.push_back(make_field(grid, 1.0));
      G.push_back(s.u[0]);
    }
    diag["sobolev"] = {{"ratio", sobolev_ratio(grid, times, ones, G, 2.0)},
                       {"p", 2.0}};
  }
  if (sc.diag.sign_split) {
    json rows = json::array();
    for (const auto& ss :
         sign_split_stats(grid, res.traj, sc.model.m > 1 ? 1 : 0))
      rows.push_back({{"t", ss.t},
                      {"measure_pos", ss.measure_pos},
                      {"measure_neg", ss.measure_neg},
                      {"min", ss.min_v}});
    diag["sign_split"] = rows;
  }

  const double wall_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                    wall_start)
          .count();

  json manifest;
  manifest["name"] = sc.name;
  manifest["outcome"] = outcome_name(res.traj.outcome);
  if (res.traj.outcome != Outcome::Completed)
    manifest["t_star"] = res.traj.t_fail;
  manifest["sup_norm"] = sup;
  manifest["min_value"] = minv;
  manifest["wall_time_s"] = wall_s;
  manifest["rng"] = "mt19937_64 (raw >> 11, scaled 2^-53)";
  manifest["seed"] = sc.initial.seed;
  manifest["checks"] = checks;
  manifest["diagnostics"] = diag;
  art.manifest = manifest;

  art.exit_code =
      (res.traj.outcome == Outcome::Completed && all_checks_pass) ? 0 : 1;

  if (!out_dir.empty()) {
    fs::create_directories(fs::path(out_dir) / "fields");
    write_text_file((fs::path(out_dir) / "series.csv").string(),
                    series_csv(res.series));
    for (std::size_t i = 0; i < res.traj.snapshots.size(); ++i) {
      const State& s = res.traj.snapshots[i];
      for (int sp = 0; sp < sc.model.m; ++sp) {
        std::string fname = "t_" + std::to_string(i);
        if (sc.model.m > 1) fname += "_s" + std::to_string(sp);
        write_field_snapshot(
            (fs::path(out_dir) / "fields" / (fname + ".txt")).string(), grid,
            s.u[sp], s.t);
      }
    }
    write_text_file((fs::path(out_dir) / "manifest.json").string(),
                    manifest.dump(2) + "\n");
  }
  return art;
}

struct SweepRow {
  double value = 0.0;
  Outcome outcome = Outcome::Completed;
  double t_star = 0.0;
  double sup_norm = 0.0;
  double min_value = 0.0;
  double gronwall_c = 0.0;
};

// set a double at a dotted path inside a json document
inline void set_json_path(json& doc, const std::string& path, double value) {
  json* cur = &doc;
  std::size_t pos = 0;
  while (true) {
    const std::size_t dot = path.find('.', pos);
    const std::string key = path.substr(pos, dot - pos);
    if (dot == std::string::npos) {
      (*cur)[key] = value;
      return;
    }
    if (!cur->contains(key)) (*cur)[key] = json::object();
    cur = &(*cur)[key];
    pos = dot + 1;
  }
}

inline int sweep_thread_count() {
  if (const char* env = std::getenv("CROSSDIFF_THREADS")) {
    const int n = std::atoi(env);
    if (n >= 1) return n;
  }
  const unsigned hc = std::thread::hardware_concurrency();
  return hc > 0 ? static_cast<int>(hc) : 1;
}

// One run per value; rows come back in input order.
inline std::vector<SweepRow> sweep(const json& base_config,
                                   const std::string& param_path,
                                   const std::vector<double>& values,
                                   const std::string& out_dir = "") {
  if (values.empty()) throw ConfigError("sweep: empty value list");
  std::vector<SweepRow> rows(values.size());
  std::vector<std::string> errors(values.size());

  std::mutex next_mtx;
  std::size_t next = 0;
  const auto worker = [&] {
    while (true) {
      std::size_t i;
      {
        std::lock_guard<std::mutex> lk(next_mtx);
        if (next >= values.size()) return;
        i = next++;
      }
      try {
        json cfg = base_config;
        set_json_path(cfg, param_path, values[i]);
        const Scenario sc = parse_scenario(cfg);
        std::string run_dir;
        if (!out_dir.empty())
          run_dir = (std::filesystem::path(out_dir) /
                     ("run_" + std::to_string(i)))
                        .string();
        const RunArtifacts art = run_scenario(sc, run_dir);
        rows[i] = {values[i],     art.outcome,   art.t_fail,
                   art.sup_norm,  art.min_value, art.gronwall_c};
      } catch (const std::exception& e) {
        rows[i] = {values[i], Outcome::NumericalFailure, 0.0, 0.0, 0.0, 0.0};
        errors[i] = e.what();
      }
    }
  };

  const int nthreads =
      std::min<int>(sweep_thread_count(), static_cast<int>(values.size()));
  std::vector<std::thread> pool;
  for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();

  if (!out_dir.empty()) {
    std::ostringstream csv;
    csv << "value,outcome,t_star,sup_norm,min_value,gronwall_c\n";
    for (const SweepRow& r : rows) {
      csv << fmt_double(r.value) << ',' << outcome_name(r.outcome) << ','
          << (r.outcome == Outcome::Completed ? "" : fmt_double(r.t_star))
          << ',' << fmt_double(r.sup_norm) << ',' << fmt_double(r.min_value)
          << ',' << fmt_double(r.gronwall_c) << '\n';
    }
    std::filesystem::create_directories(out_dir);
    write_text_file(
        (std::filesystem::path(out_dir) / "summary.csv").string(), csv.str());
  }
  return rows;
}

// Resolve a config argument: preset name or path to a JSON file.
inline Scenario load_scenario(const std::string& name_or_path, json* raw = nullptr) {
  json doc;
  for (const std::string& p : preset_names()) {
    if (p == name_or_path) {
      doc = preset_config(p);
      if (raw) *raw = doc;
      return parse_scenario(doc);
    }
  }
  std::ifstream in(name_or_path);
  if (!in) throw ConfigError("no such preset or config file: " + name_or_path);
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  if (raw) *raw = doc;
  return parse_scenario(doc);
}

}  // namespace crossdiff

#endif  // CROSSDIFF_RUNNER_HPP
