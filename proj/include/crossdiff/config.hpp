#ifndef CROSSDIFF_CONFIG_HPP
#define CROSSDIFF_CONFIG_HPP

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "crossdiff/grid.hpp"
#include "crossdiff/models.hpp"
#include "crossdiff/solver.hpp"

namespace crossdiff {

using json = nlohmann::json;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Profile { Sine, Bump, ConstantPatch, RandomNonneg };

struct InitialSpec {
  Profile profile = Profile::Sine;
  std::vector<double> amplitude;  // per species
  int waves = 1;                  // sine mode count per axis
  std::uint64_t seed = 1;
};

struct DiagToggles {
  bool positivity = true;
  bool gronwall = true;
  bool residuals = true;
  bool ladder = false;
  bool sobolev = false;
  bool sign_split = false;
  int ladder_pmax = 64;
  double q = 0.0;  // 0 means N/2 + 2
};

struct Scenario {
  std::string name;
  ModelSpec model;
  int grid_dim = 1;
  int grid_n = 64;
  double grid_length = 1.0;
  InitialSpec initial;
  SolverConfig solver;
  DiagToggles diag;
  std::vector<std::pair<double, double>> cert_box;  // empty: default per species
  int cert_samples = 21;
};

namespace detail {

inline void check_keys(const json& j, std::initializer_list<const char*> allowed,
                       const std::string& where) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* a : allowed)
      if (it.key() == a) { ok = true; break; }
    if (!ok) throw ConfigError("unknown key '" + it.key() + "' in " + where);
  }
}

template <class T>
T get_or(const json& j, const char* key, T def) {
  return j.contains(key) ? j.at(key).get<T>() : def;
}

}  // namespace detail

inline PsiSpec parse_psi(const json& j) {
  detail::check_keys(j, {"alpha", "beta", "k", "dominates_identity"}, "psi");
  PsiSpec p;
  p.alpha = detail::get_or(j, "alpha", 0.0);
  p.beta = detail::get_or(j, "beta", 0.0);
  p.k = detail::get_or(j, "k", 1.0);
  p.dominates_identity = detail::get_or(j, "dominates_identity", false);
  return p;
}

inline ReactionSpec parse_reaction(const json& j, int m) {
  detail::check_keys(j, {"kind", "k", "lin", "c0", "certificate"}, "reaction");
  ReactionSpec r;
  const std::string kind = detail::get_or<std::string>(j, "kind", "constant");
  if (kind == "constant") r.kind = ReactionKind::Constant;
  else if (kind == "affine") r.kind = ReactionKind::Affine;
  else if (kind == "psi-bounded") r.kind = ReactionKind::PsiBounded;
  else throw ConfigError("unknown reaction kind '" + kind + "'");
  r.k = detail::get_or(j, "k", std::vector<double>(m, 0.0));
  r.lin = detail::get_or(j, "lin", std::vector<std::vector<double>>{});
  r.c0 = detail::get_or(j, "c0", 0.0);
  if (j.contains("certificate")) {
    const json& c = j.at("certificate");
    detail::check_keys(c, {"C", "c"}, "reaction.certificate");
    r.cert_C = detail::get_or(c, "C", std::vector<std::vector<double>>{});
    r.cert_c = detail::get_or(c, "c", std::vector<std::vector<double>>{});
  }
  if (r.cert_C.empty())
    r.cert_C.assign(m, std::vector<double>(m, 0.0));
  if (r.cert_c.empty())
    r.cert_c.assign(m, std::vector<double>(m, 0.0));
  return r;
}

inline ModelSpec parse_model(const json& j) {
  detail::check_keys(
      j, {"variant", "m", "lambda0", "psi", "combo", "reaction", "eps0", "abs_v"},
      "model");
  ModelSpec mod;
  const std::string v = detail::get_or<std::string>(j, "variant", "scalar");
  if (v == "scalar") mod.variant = Variant::Scalar;
  else if (v == "equal-diffusion") mod.variant = Variant::EqualDiffusion;
  else if (v == "yw") mod.variant = Variant::YW;
  else if (v == "ywz") mod.variant = Variant::YWz;
  else throw ConfigError("unknown model variant '" + v + "'");
  mod.m = detail::get_or(j, "m", mod.variant == Variant::Scalar ? 1 : 2);
  mod.lambda0 = detail::get_or(j, "lambda0", 1.0);
  if (j.contains("psi")) mod.psi = parse_psi(j.at("psi"));
  mod.combo.a = detail::get_or(j, "combo", std::vector<double>(mod.m, 1.0));
  mod.reaction = j.contains("reaction") ? parse_reaction(j.at("reaction"), mod.m)
                                        : [&] {
                                            ReactionSpec r;
                                            r.k.assign(mod.m, 0.0);
                                            r.cert_C.assign(mod.m, std::vector<double>(mod.m, 0.0));
                                            r.cert_c.assign(mod.m, std::vector<double>(mod.m, 0.0));
                                            return r;
                                          }();
  mod.eps0 = detail::get_or(j, "eps0", 0.0);
  mod.abs_v = detail::get_or(j, "abs_v", false);
  try {
    validate_model(mod);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return mod;
}

inline Scenario parse_scenario_impl(const json& j) {
  detail::check_keys(j,
                     {"name", "model", "grid", "initial", "solver",
                      "diagnostics", "certificate_box", "certificate_samples"},
                     "scenario");
  Scenario sc;
  sc.name = detail::get_or<std::string>(j, "name", "unnamed");
  if (!j.contains("model")) throw ConfigError("scenario: missing model");
  sc.model = parse_model(j.at("model"));
  if (j.contains("grid")) {
    const json& g = j.at("grid");
    detail::check_keys(g, {"dim", "n", "length"}, "grid");
    sc.grid_dim = detail::get_or(g, "dim", 1);
    sc.grid_n = detail::get_or(g, "n", 64);
    sc.grid_length = detail::get_or(g, "length", 1.0);
  }
  if (j.contains("initial")) {
    const json& in = j.at("initial");
    detail::check_keys(in, {"profile", "amplitude", "waves", "seed"}, "initial");
    const std::string p = detail::get_or<std::string>(in, "profile", "sine");
    if (p == "sine") sc.initial.profile = Profile::Sine;
    else if (p == "bump") sc.initial.profile = Profile::Bump;
    else if (p == "constant-patch") sc.initial.profile = Profile::ConstantPatch;
    else if (p == "random-nonneg") sc.initial.profile = Profile::RandomNonneg;
    else throw ConfigError("unknown initial profile '" + p + "'");
    if (in.contains("amplitude")) {
      if (in.at("amplitude").is_number())
        sc.initial.amplitude.assign(sc.model.m, in.at("amplitude").get<double>());
      else
        sc.initial.amplitude = in.at("amplitude").get<std::vector<double>>();
    }
    sc.initial.waves = detail::get_or(in, "waves", 1);
    sc.initial.seed = detail::get_or<std::uint64_t>(in, "seed", 1);
  }
  if (sc.initial.amplitude.empty()) sc.initial.amplitude.assign(sc.model.m, 1.0);
  if (static_cast<int>(sc.initial.amplitude.size()) != sc.model.m)
    throw ConfigError("initial: amplitude length must equal m");
  if (j.contains("solver")) {
    const json& s = j.at("solver");
    detail::check_keys(s,
                       {"scheme", "dt", "t_end", "safety", "blowup_threshold",
                        "record_every", "linsolve_tol", "linsolve_maxiter"},
                       "solver");
    const std::string scheme = detail::get_or<std::string>(s, "scheme", "explicit");
    if (scheme == "explicit") sc.solver.scheme = Scheme::Explicit;
    else if (scheme == "imex") sc.solver.scheme = Scheme::Imex;
    else throw ConfigError("unknown scheme '" + scheme + "'");
    if (s.contains("dt")) {
      if (s.at("dt").is_string()) {
        if (s.at("dt").get<std::string>() != "auto")
          throw ConfigError("solver.dt must be a number or \"auto\"");
        sc.solver.dt = 0.0;
      } else {
        sc.solver.dt = s.at("dt").get<double>();
      }
    }
    sc.solver.t_end = detail::get_or(s, "t_end", 0.1);
    sc.solver.safety = detail::get_or(s, "safety", 0.4);
    sc.solver.blowup_threshold = detail::get_or(s, "blowup_threshold", 1e8);
    sc.solver.record_every = detail::get_or(s, "record_every", 1);
    sc.solver.linsolve_tol = detail::get_or(s, "linsolve_tol", 1e-10);
    sc.solver.linsolve_maxiter = detail::get_or(s, "linsolve_maxiter", 0);
  }
  if (j.contains("diagnostics")) {
    const json& d = j.at("diagnostics");
    detail::check_keys(d,
                       {"positivity", "gronwall", "residuals", "ladder",
                        "sobolev", "sign_split", "ladder_pmax", "q"},
                       "diagnostics");
    sc.diag.positivity = detail::get_or(d, "positivity", true);
    sc.diag.gronwall = detail::get_or(d, "gronwall", true);
    sc.diag.residuals = detail::get_or(d, "residuals", true);
    sc.diag.ladder = detail::get_or(d, "ladder", false);
    sc.diag.sobolev = detail::get_or(d, "sobolev", false);
    sc.diag.sign_split = detail::get_or(d, "sign_split", false);
    sc.diag.ladder_pmax = detail::get_or(d, "ladder_pmax", 64);
    sc.diag.q = detail::get_or(d, "q", 0.0);
  }
  if (j.contains("certificate_box")) {
    for (const auto& row : j.at("certificate_box")) {
      if (!row.is_array() || row.size() != 2)
        throw ConfigError("certificate_box rows must be [lo, hi]");
      sc.cert_box.emplace_back(row[0].get<double>(), row[1].get<double>());
    }
  }
  sc.cert_samples = detail::get_or(j, "certificate_samples", 21);
  return sc;
}

inline Scenario parse_scenario(const json& j) {
  try {
    return parse_scenario_impl(j);
  } catch (const json::exception& e) {
    // wrong JSON types are config mistakes, not internal errors
    throw ConfigError(e.what());
  }
}

// Seeded uniform doubles in [0,1), pinned to mt19937_64 raw output so the
// stream is reproducible across standard libraries.
struct PinnedRng {
  std::mt19937_64 eng;
  explicit PinnedRng(std::uint64_t seed) : eng(seed) {}
  double uniform() { return (eng() >> 11) * 0x1.0p-53; }
};

inline Field build_profile(const Grid& g, Profile profile, double amplitude,
                           int waves, PinnedRng& rng) {
  Field f = make_field(g);
  constexpr double pi = 3.14159265358979323846;
  const double L = g.length;
  const auto set = [&](int i, int jj, double val) {
    f[g.dim == 1 ? jj : static_cast<std::size_t>(i) * g.n + jj] = val;
  };
  for (int i = 0; i < (g.dim == 1 ? 1 : g.n); ++i) {
    const double y = g.coord(i);
    for (int jj = 0; jj < g.n; ++jj) {
      const double x = g.coord(jj);
      double val = 0.0;
      switch (profile) {
        case Profile::Sine:
          val = std::sin(waves * pi * x / L);
          if (g.dim == 2) val *= std::sin(waves * pi * y / L);
          break;
        case Profile::Bump: {
          const double sx = (x - 0.5 * L) / (0.15 * L);
          double r2 = sx * sx;
          if (g.dim == 2) {
            const double sy = (y - 0.5 * L) / (0.15 * L);
            r2 += sy * sy;
          }
          val = std::exp(-0.5 * r2);
          break;
        }
        case Profile::ConstantPatch: {
          const bool inx = x > L / 3.0 && x < 2.0 * L / 3.0;
          const bool iny = g.dim == 1 || (y > L / 3.0 && y < 2.0 * L / 3.0);
          val = inx && iny ? 1.0 : 0.0;
          break;
        }
        case Profile::RandomNonneg:
          val = rng.uniform();
          break;
      }
      set(i, jj, amplitude * val);
    }
  }
  return f;
}

inline State build_initial_state(const Grid& g, const ModelSpec& mod,
                                 const InitialSpec& init) {
  State s;
  s.t = 0.0;
  PinnedRng rng(init.seed);
  for (int i = 0; i < mod.m; ++i)
    s.u.push_back(
        build_profile(g, init.profile, init.amplitude[i], init.waves, rng));
  return s;
}

// ---- preset catalog -------------------------------------------------------

inline std::vector<std::string> preset_names() {
  return {"heat-1d", "skt-equal-diffusion", "yw-small-eps", "ywz",
          "scalar-superlinear"};
}

inline json preset_config(const std::string& name) {
  if (name == "heat-1d") {
    return json{
        {"name", "heat-1d"},
        {"model",
         {{"variant", "scalar"},
          {"lambda0", 1.0},
          {"psi", {{"alpha", 0.0}, {"beta", 0.0}}},
          {"combo", {1.0}},
          {"reaction", {{"kind", "constant"}, {"k", {0.0}}}}}},
        {"grid", {{"dim", 1}, {"n", 128}, {"length", 1.0}}},
        {"initial", {{"profile", "sine"}, {"amplitude", 1.0}}},
        {"solver",
         {{"scheme", "explicit"}, {"dt", "auto"}, {"t_end", 0.1},
          {"record_every", 16}}}};
  }
  if (name == "skt-equal-diffusion") {
    // two species, Psi(s) = s, logistic-type diagonal reactions
    return json{
        {"name", "skt-equal-diffusion"},
        {"model",
         {{"variant", "equal-diffusion"},
          {"m", 2},
          {"lambda0", 1.0},
          {"psi", {{"alpha", 1.0}}},
          {"combo", {0.2, 0.2}},
          {"reaction",
           {{"kind", "affine"},
            {"k", {0.05, 0.05}},
            {"lin", {{-0.01, 0.0}, {0.0, -0.01}}},
            {"certificate",
             {{"C", {{0.05, 0.0}, {0.0, 0.05}}},
              {"c", {{0.01, 0.0}, {0.0, 0.01}}}}}}}}},
        {"grid", {{"dim", 1}, {"n", 64}, {"length", 1.0}}},
        {"initial", {{"profile", "sine"}, {"amplitude", {1.0, 0.5}}}},
        {"solver",
         {{"scheme", "explicit"}, {"dt", "auto"}, {"t_end", 0.05},
          {"record_every", 8}}}};
  }
  if (name == "yw-small-eps") {
    return json{
        {"name", "yw-small-eps"},
        {"model",
         {{"variant", "yw"},
          {"m", 2},
          {"lambda0", 1.0},
          {"psi", {{"alpha", 1.0}, {"dominates_identity", true}}},
          {"combo", {1.0, 1.0}},
          {"eps0", 0.01},
          {"abs_v", true},
          {"reaction",
           {{"kind", "psi-bounded"},
            {"k", {0.05, 0.05}},
            {"c0", 0.02},
            {"certificate", {{"C", {{0.05, 0.0}, {0.0, 0.05}}},
                             {"c", {{0.02, 0.0}, {0.0, 0.02}}}}}}}}},
        {"grid", {{"dim", 1}, {"n", 64}, {"length", 1.0}}},
        {"initial", {{"profile", "sine"}, {"amplitude", {1.0, 0.5}}}},
        {"solver",
         {{"scheme", "explicit"}, {"dt", "auto"}, {"t_end", 0.05},
          {"record_every", 8}}}};
  }
  if (name == "ywz") {
    return json{
        {"name", "ywz"},
        {"model",
         {{"variant", "ywz"},
          {"m", 2},
          {"lambda0", 1.0},
          {"psi", {{"alpha", 1.0}, {"dominates_identity", true}}},
          {"combo", {1.0, 1.0}},
          {"eps0", 0.5},
          {"abs_v", true},
          {"reaction",
           {{"kind", "psi-bounded"},
            {"k", {0.05, 0.05}},
            {"c0", 0.02},
            {"certificate", {{"C", {{0.05, 0.0}, {0.0, 0.05}}},
                             {"c", {{0.02, 0.0}, {0.0, 0.02}}}}}}}}},
        {"grid", {{"dim", 1}, {"n", 64}, {"length", 1.0}}},
        {"initial", {{"profile", "sine"}, {"amplitude", {1.0, 0.5}}}},
        {"solver",
         {{"scheme", "explicit"}, {"dt", "auto"}, {"t_end", 0.05},
          {"record_every", 8}}}};
  }
  if (name == "scalar-superlinear") {
    // Psi(s) = s_+^2 with reaction g = c0 Psi(|v|); blows up for large c0
    return json{
        {"name", "scalar-superlinear"},
        {"model",
         {{"variant", "scalar"},
          {"lambda0", 1.0},
          {"psi", {{"beta", 1.0}, {"k", 2.0}}},
          {"combo", {1.0}},
          {"reaction",
           {{"kind", "psi-bounded"},
            {"k", {0.0}},
            {"c0", 1.0},
            {"certificate", {{"C", {{0.0}}}, {"c", {{1.0}}}}}}}}},
        {"grid", {{"dim", 1}, {"n", 32}, {"length", 1.0}}},
        {"initial", {{"profile", "bump"}, {"amplitude", 6.0}}},
        {"solver",
         {{"scheme", "explicit"}, {"dt", "auto"}, {"t_end", 0.05},
          {"blowup_threshold", 1e6}, {"record_every", 32}}}};
  }
  throw ConfigError("unknown preset '" + name + "'");
}

}  // namespace crossdiff

#endif  // CROSSDIFF_CONFIG_HPP
