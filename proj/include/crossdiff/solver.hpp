#ifndef CROSSDIFF_SOLVER_HPP
#define CROSSDIFF_SOLVER_HPP

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "crossdiff/grid.hpp"
#include "crossdiff/models.hpp"

namespace crossdiff {

enum class Scheme { Explicit, Imex };

struct SolverConfig {
  Scheme scheme = Scheme::Explicit;
  double dt = 0.0;  // 0 means auto (CFL at t = 0, halved when the bound shrinks)
  double t_end = 0.0;
  double safety = 0.4;
  double blowup_threshold = 1e8;
  int record_every = 1;
  double linsolve_tol = 1e-10;
  int linsolve_maxiter = 0;  // 0 means 10 * node count
};

enum class Outcome { Completed, BlowUp, NumericalFailure };

inline std::string outcome_name(Outcome o) {
  switch (o) {
    case Outcome::Completed: return "completed";
    case Outcome::BlowUp: return "blow-up";
    case Outcome::NumericalFailure: return "numerical-failure";
  }
  return "?";
}

struct Trajectory {
  std::vector<State> snapshots;
  Outcome outcome = Outcome::Completed;
  double t_fail = 0.0;  // t* for BlowUp / NumericalFailure
};

struct NormSample {
  double t = 0.0;
  int species = 0;
  double min = 0.0, max = 0.0, l1 = 0.0, l2 = 0.0, grad_sup = 0.0;
};

// Explicit-scheme step bound from the nodewise effective diffusivity.
inline double cfl_dt(const ModelSpec& mod, const Grid& grid,
                     const State& state, double safety = 0.4) {
  const auto sc = signed_combo(mod);
  double amax = 0.0;
  for (double a : mod.combo.a) amax = std::max(amax, a);
  double dmax_node = 0.0;
  std::vector<double> un(mod.m);
  for (std::size_t j = 0; j < grid.node_count(); ++j) {
    double L = 0.0, uabs = 0.0;
    for (int i = 0; i < mod.m; ++i) {
      un[i] = state.u[i][j];
      if (!std::isfinite(un[i]))
        throw std::invalid_argument("cfl_dt: non-finite state");
      L += sc[i] * un[i];
      uabs = std::max(uabs, std::abs(un[i]));
    }
    double d = eval_psi(mod.psi, L) + eval_psi_prime(mod.psi, L) * amax * uabs;
    if (mod.variant == Variant::YW || mod.variant == Variant::YWz)
      d += mod.eps0 * (mod.combo.a[0] + mod.combo.a[1]) * uabs;
    dmax_node = std::max(dmax_node, d);
  }
  const double dmax = mod.lambda0 + dmax_node;
  return safety * grid.h * grid.h / (2.0 * grid.dim * dmax);
}

inline State step_explicit(const ModelSpec& mod, const Grid& grid,
                           const State& state, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("step: dt must be > 0");
  const auto rhs = assemble_rhs(mod, grid, state);
  State out = state;
  out.t = state.t + dt;
  for (int i = 0; i < mod.m; ++i)
    for (std::size_t j = 0; j < rhs[i].size(); ++j)
      out.u[i][j] += dt * rhs[i][j];
  return out;
}

// Conjugate gradient for (I - dt*lambda0*Lap) x = b, matrix-free and SPD.
inline Field solve_helmholtz_cg(const Grid& grid, double coef, const Field& b,
                                double tol, int maxiter) {
  const auto apply = [&](const Field& x) {
    Field ax = laplacian(grid, x);
    for (std::size_t j = 0; j < x.size(); ++j) ax[j] = x[j] - coef * ax[j];
    return ax;
  };
  const auto dot = [](const Field& x, const Field& y) {
    double s = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) s += x[j] * y[j];
    return s;
  };
  Field x(b.size(), 0.0);
  Field r = b;
  Field p = r;
  double rr = dot(r, r);
  const double bnorm = std::sqrt(rr);
  if (bnorm == 0.0) return x;
  for (int it = 0; it < maxiter; ++it) {
    if (std::sqrt(rr) <= tol * bnorm) return x;
    const Field ap = apply(p);
    const double alpha = rr / dot(p, ap);
    for (std::size_t j = 0; j < x.size(); ++j) {
      x[j] += alpha * p[j];
      r[j] -= alpha * ap[j];
    }
    const double rr_new = dot(r, r);
    const double beta = rr_new / rr;
    rr = rr_new;
    for (std::size_t j = 0; j < p.size(); ++j) p[j] = r[j] + beta * p[j];
  }
  if (std::sqrt(rr) <= tol * bnorm) return x;
  throw std::runtime_error("cg: no convergence within maxiter");
}

// IMEX step: lambda0*Lap implicit, Psi-flux + coupling + reaction explicit.
inline State step_imex(const ModelSpec& mod, const Grid& grid,
                       const State& state, double dt, double tol = 1e-10,
                       int maxiter = 0) {
  if (!(dt > 0.0)) throw std::invalid_argument("step: dt must be > 0");
  if (maxiter <= 0) maxiter = 10 * static_cast<int>(grid.node_count());
  const auto rhs = assemble_rhs(mod, grid, state);
  State out = state;
  out.t = state.t + dt;
  for (int i = 0; i < mod.m; ++i) {
    // explicit part = rhs - lambda0*Lap(u_i)
    Field lap = laplacian(grid, state.u[i]);
    Field b = state.u[i];
    for (std::size_t j = 0; j < b.size(); ++j)
      b[j] += dt * (rhs[i][j] - mod.lambda0 * lap[j]);
    out.u[i] =
        solve_helmholtz_cg(grid, dt * mod.lambda0, b, tol, maxiter);
  }
  return out;
}

struct RunResult {
  Trajectory traj;
  std::vector<NormSample> series;  // per step, per species
};

inline RunResult run(const ModelSpec& mod, const Grid& grid,
                     const State& state0, const SolverConfig& cfg) {
  if (!(cfg.t_end > 0.0)) throw std::invalid_argument("run: t_end must be > 0");
  if (!(cfg.blowup_threshold > 0.0))
    throw std::invalid_argument("run: blowup_threshold must be > 0");
  if (cfg.record_every < 1)
    throw std::invalid_argument("run: record_every must be >= 1");
  for (const Field& f : state0.u)
    if (!all_finite(f))
      throw std::invalid_argument("run: non-finite initial state");

  RunResult res;
  State cur = state0;
  cur.t = 0.0;
  res.traj.snapshots.push_back(cur);

  const bool auto_dt = !(cfg.dt > 0.0);
  double dt = auto_dt ? cfl_dt(mod, grid, cur, cfg.safety) : cfg.dt;

  const auto record_norms = [&](const State& s) {
    for (int i = 0; i < mod.m; ++i) {
      NormSample ns;
      ns.t = s.t;
      ns.species = i;
      ns.min = field_min(s.u[i]);
      ns.max = *std::max_element(s.u[i].begin(), s.u[i].end());
      ns.l1 = integrate_lp(grid, s.u[i], 1.0);
      ns.l2 = integrate_lp(grid, s.u[i], 2.0);
      ns.grad_sup = gradient_sup(grid, s.u[i]);
      res.series.push_back(ns);
    }
  };
  record_norms(cur);

  long step_index = 0;
  while (cur.t < cfg.t_end) {
    if (auto_dt) {
      const double bound = cfl_dt(mod, grid, cur, cfg.safety);
      while (dt > bound) dt *= 0.5;  // never raised
    }
    const double dt_step = std::min(dt, cfg.t_end - cur.t);
    // time stagnation (dt below machine resolution) or runaway step counts
    // are numerical failures, not hangs
    if (cur.t + dt_step == cur.t || step_index > 50'000'000) {
      res.traj.outcome = Outcome::NumericalFailure;
      res.traj.t_fail = cur.t;
      return res;
    }
    State next;
    try {
      next = cfg.scheme == Scheme::Explicit
                 ? step_explicit(mod, grid, cur, dt_step)
                 : step_imex(mod, grid, cur, dt_step, cfg.linsolve_tol,
                             cfg.linsolve_maxiter);
    } catch (const std::runtime_error&) {
      res.traj.outcome = Outcome::NumericalFailure;
      res.traj.t_fail = cur.t + dt_step;
      return res;
    }
    ++step_index;
    cur = next;
    double sup = 0.0;
    bool finite = true;
    for (const Field& f : cur.u) {
      if (!all_finite(f)) finite = false;
      sup = std::max(sup, field_max_abs(f));
    }
    if (!finite) {
      res.traj.outcome = Outcome::NumericalFailure;
      res.traj.t_fail = cur.t;
      return res;
    }
    record_norms(cur);
    if (sup > cfg.blowup_threshold) {
      res.traj.outcome = Outcome::BlowUp;
      res.traj.t_fail = cur.t;
      res.traj.snapshots.push_back(cur);
      return res;
    }
    if (step_index % cfg.record_every == 0 || cur.t >= cfg.t_end)
      res.traj.snapshots.push_back(cur);
  }
  res.traj.outcome = Outcome::Completed;
  return res;
}

}  // namespace crossdiff

#endif  // CROSSDIFF_SOLVER_HPP
