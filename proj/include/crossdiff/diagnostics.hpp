#ifndef CROSSDIFF_DIAGNOSTICS_HPP
#define CROSSDIFF_DIAGNOSTICS_HPP

#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

#include "crossdiff/grid.hpp"
#include "crossdiff/models.hpp"
#include "crossdiff/solver.hpp"

namespace crossdiff {

// Effective diffusivity lambda(v) = lambda0 + Psi(v) + Psi'(v)*v, the weight
// of the space-time measure dmu = lambda(v) dz.
struct MuMeasure {
  double lambda0 = 1.0;
  PsiSpec psi;
  double lambda(double v) const {
    return lambda0 + eval_psi(psi, v) + eval_psi_prime(psi, v) * v;
  }
};

namespace detail {

inline double adaptive_simpson(const std::function<double(double)>& f,
                               double a, double b, double fa, double fm,
                               double fb, double whole, double eps,
                               int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0) throw std::runtime_error("quadrature: no convergence");
  if (std::abs(delta) <= 15.0 * eps)
    return left + right + delta / 15.0;
  return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * eps, depth - 1) +
         adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * eps, depth - 1);
}

inline double integrate_adaptive(const std::function<double(double)>& f,
                                 double a, double b, double rel_tol) {
  if (a == b) return 0.0;
  // coarse scan for the absolute tolerance scale; the integrand can be
  // sharply peaked at b for large p
  const int scan = 64;
  double rough = 0.0;
  for (int i = 0; i < scan; ++i) {
    const double x = a + (b - a) * (i + 0.5) / scan;
    rough += f(x);
  }
  rough *= (b - a) / scan;
  const double eps = rel_tol * std::max(std::abs(rough),
                                        std::numeric_limits<double>::min());
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return adaptive_simpson(f, a, b, fa, fm, fb, whole, eps, 60);
}

}  // namespace detail

// F(v,p) = int_0^v lambda^{1/2}(s) s^{p-1} ds, adaptive quadrature at
// relative tolerance 1e-10.
inline double f_of_vp(const std::function<double(double)>& lambda_fn, double v,
                      double p) {
  if (!(p >= 1.0)) throw std::invalid_argument("f_of_vp: need p >= 1");
  if (v < 0.0) throw std::invalid_argument("f_of_vp: need v >= 0");
  if (v == 0.0) return 0.0;
  const auto integrand = [&](double s) {
    return std::sqrt(lambda_fn(s)) * std::pow(s, p - 1.0);
  };
  return detail::integrate_adaptive(integrand, 0.0, v, 1e-10);
}

inline double f_of_vp(const MuMeasure& mu, double v, double p) {
  return f_of_vp([&mu](double s) { return mu.lambda(s); }, v, p);
}

struct GrowthReport {
  double c_low = 0.0;
  double c_high = 0.0;
  bool comparable = false;
};

// Ratio F(v,p)*p / (lambda^{1/2}(v) v^p) over a (p,v) grid; two-sided
// comparability means min and max are bounded away from 0 and infinity.
inline GrowthReport f_growth_check(const MuMeasure& mu,
                                   const std::vector<double>& p_list,
                                   const std::vector<double>& v_list) {
  if (p_list.empty() || v_list.empty())
    throw std::invalid_argument("f_growth_check: empty sample list");
  GrowthReport rep;
  rep.c_low = std::numeric_limits<double>::infinity();
  rep.c_high = 0.0;
  for (double p : p_list) {
    for (double v : v_list) {
      if (!(v > 0.0))
        throw std::invalid_argument("f_growth_check: need v > 0");
      const double denom = std::sqrt(mu.lambda(v)) * std::pow(v, p);
      const double ratio = f_of_vp(mu, v, p) * p / denom;
      rep.c_low = std::min(rep.c_low, ratio);
      rep.c_high = std::max(rep.c_high, ratio);
    }
  }
  rep.comparable = rep.c_low > 0.0 && std::isfinite(rep.c_high);
  return rep;
}

struct LadderReport {
  std::vector<double> exponents;  // the 2p ladder values
  std::vector<double> norms;      // ||v||_{L^{2p}(Q,dmu)} under normalized mu
  std::vector<double> ratios;     // successive norm ratios
  double sup_norm = 0.0;          // ||v||_{L^inf(Q)}
  double mu_total = 0.0;          // mu(Q), reported, not asserted finite
  double q = 0.0, qprime = 0.0, gamma = 0.0, gamma0 = 0.0;
};

namespace detail {

// trapezoid weights in t over the snapshot times
inline std::vector<double> time_weights(const std::vector<double>& t) {
  std::vector<double> w(t.size(), 0.0);
  if (t.size() < 2) {
    if (!w.empty()) w[0] = 1.0;
    return w;
  }
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double left = i > 0 ? t[i] - t[i - 1] : 0.0;
    const double right = i + 1 < t.size() ? t[i + 1] - t[i] : 0.0;
    w[i] = 0.5 * (left + right);
  }
  return w;
}

}  // namespace detail

// L^{2p}(Q,dmu) ladder over 2p = gamma0^i up to p_max, snapshot trapezoid in
// t, midpoint in x, normalized by mu(Q).
inline LadderReport moser_ladder(const Grid& grid, const Trajectory& traj,
                                 const MuMeasure& mu, int p_max,
                                 int species = 0, double q_user = 0.0) {
  if (p_max < 1) throw std::invalid_argument("moser_ladder: p_max must be >= 1");
  if (traj.outcome != Outcome::Completed)
    throw std::invalid_argument("moser_ladder: trajectory must be completed");
  if (traj.snapshots.empty())
    throw std::invalid_argument("moser_ladder: empty trajectory");

  LadderReport rep;
  const int N = grid.dim;
  rep.gamma = 1.0 + 2.0 / N;
  rep.q = q_user > 0.0 ? q_user : N / 2.0 + 2.0;
  rep.qprime = rep.q / (rep.q - 1.0);
  rep.gamma0 = rep.gamma / rep.qprime;
  if (!(rep.gamma0 > 1.0))
    throw std::invalid_argument("moser_ladder: need q > N/2 + 1");

  for (double tp = 1.0; tp < p_max; tp *= rep.gamma0)
    rep.exponents.push_back(tp);
  rep.exponents.push_back(static_cast<double>(p_max));

  std::vector<double> times;
  for (const State& s : traj.snapshots) times.push_back(s.t);
  const auto wt = detail::time_weights(times);

  double vmax = 0.0;
  for (const State& s : traj.snapshots) {
    if (!all_finite(s.u[species]))
      throw std::invalid_argument("moser_ladder: unbounded field");
    vmax = std::max(vmax, field_max_abs(s.u[species]));
  }
  rep.sup_norm = vmax;

  double mu_total = 0.0;
  for (std::size_t si = 0; si < traj.snapshots.size(); ++si) {
    for (double v : traj.snapshots[si].u[species])
      mu_total += wt[si] * mu.lambda(v) * grid.cell_measure();
  }
  rep.mu_total = mu_total;
  if (vmax == 0.0) {
    rep.norms.assign(rep.exponents.size(), 0.0);
    return rep;
  }

  for (double tp : rep.exponents) {
    double acc = 0.0;
    for (std::size_t si = 0; si < traj.snapshots.size(); ++si) {
      for (double v : traj.snapshots[si].u[species])
        acc += wt[si] * mu.lambda(v) * std::pow(std::abs(v) / vmax, tp) *
               grid.cell_measure();
    }
    rep.norms.push_back(vmax * std::pow(acc / mu_total, 1.0 / tp));
  }
  for (std::size_t i = 1; i < rep.norms.size(); ++i)
    rep.ratios.push_back(rep.norms[i] / rep.norms[i - 1]);
  return rep;
}

// LHS/RHS of the parabolic Sobolev inequality for a sampled pair (g, G):
// LHS = int int g^{r*} G^p, RHS = sup_t (int g)^{r*} * int int (|DG|^p + G^p),
// with r* = p/N for N > p, else 1/2. Degenerate 0/0 reported as 0.
inline double sobolev_ratio(const Grid& grid,
                            const std::vector<double>& times,
                            const std::vector<Field>& g_series,
                            const std::vector<Field>& G_series, double p) {
  if (times.size() != g_series.size() || times.size() != G_series.size() ||
      times.empty())
    throw std::invalid_argument("sobolev_ratio: series length mismatch");
  const double rstar = grid.dim > p ? p / grid.dim : 0.5;
  const auto wt = detail::time_weights(times);

  double lhs = 0.0, rhs_int = 0.0, sup_mass = 0.0;
  for (std::size_t si = 0; si < times.size(); ++si) {
    check_shape(grid, g_series[si]);
    check_shape(grid, G_series[si]);
    double mass = 0.0;
    const Field dG = gradient_magnitude(grid, G_series[si]);
    for (std::size_t j = 0; j < g_series[si].size(); ++j) {
      const double gv = g_series[si][j];
      if (gv < 0.0)
        throw std::invalid_argument("sobolev_ratio: negative g");
      const double Gv = std::abs(G_series[si][j]);
      mass += gv * grid.cell_measure();
      lhs += wt[si] * std::pow(gv, rstar) * std::pow(Gv, p) *
             grid.cell_measure();
      rhs_int += wt[si] * (std::pow(dG[j], p) + std::pow(Gv, p)) *
                 grid.cell_measure();
    }
    sup_mass = std::max(sup_mass, mass);
  }
  const double rhs = std::pow(sup_mass, rstar) * rhs_int;
  if (rhs == 0.0) return 0.0;
  return lhs / rhs;
}

// Smallest C with y(t) <= y(0) e^{C t} at every sample.
inline double gronwall_fit(const std::vector<std::pair<double, double>>& series) {
  if (series.empty()) throw std::invalid_argument("gronwall_fit: empty series");
  for (auto [t, y] : series)
    if (!(y > 0.0)) throw std::invalid_argument("gronwall_fit: need y > 0");
  const double t0 = series.front().first;
  const double ly0 = std::log(series.front().second);
  double c = 0.0;
  bool any = false;
  for (std::size_t i = 1; i < series.size(); ++i) {
    const auto [t, y] = series[i];
    if (t <= t0) continue;
    const double ci = (std::log(y) - ly0) / (t - t0);
    c = any ? std::max(c, ci) : ci;
    any = true;
  }
  return any ? c : 0.0;
}

// Residual of the scalar W-equation against the combined per-species rhs:
// R = sum a~_i rhs_i - [lambda0 Lap W + Lap(Psi(W) W) + sum a~_i u_i g_i],
// reported per snapshot as max|R| / (1 + max|rhs|).
inline std::vector<std::pair<double, double>> w_reduction_residual(
    const ModelSpec& mod, const Grid& grid, const Trajectory& traj) {
  const auto sc = signed_combo(mod);
  std::vector<std::pair<double, double>> out;
  for (const State& s : traj.snapshots) {
    const auto rhs = assemble_rhs(mod, grid, s);
    const std::size_t nn = grid.node_count();
    Field wcomp(nn), f(nn), combined(nn);
    std::vector<double> un(mod.m);
    for (std::size_t j = 0; j < nn; ++j) {
      double W = 0.0;
      for (int i = 0; i < mod.m; ++i) {
        un[i] = s.u[i][j];
        W += sc[i] * un[i];
      }
      wcomp[j] = mod.lambda0 * W + eval_psi(mod.psi, W) * W;
      double fj = 0.0, cj = 0.0;
      for (int i = 0; i < mod.m; ++i) {
        fj += sc[i] * un[i] * eval_g(mod, un, i);
        cj += sc[i] * rhs[i][j];
      }
      f[j] = fj;
      combined[j] = cj;
    }
    const Field lapw = laplacian(grid, wcomp);
    double rmax = 0.0, rhsmax = 0.0;
    for (int i = 0; i < mod.m; ++i)
      rhsmax = std::max(rhsmax, field_max_abs(rhs[i]));
    for (std::size_t j = 0; j < nn; ++j)
      rmax = std::max(rmax, std::abs(combined[j] - (lapw[j] + f[j])));
    out.emplace_back(s.t, rmax / (1.0 + rhsmax));
  }
  return out;
}

struct SignSplitSample {
  double t = 0.0;
  double measure_pos = 0.0;  // |{v >= 0}|
  double measure_neg = 0.0;  // |{v < 0}|
  double min_v = 0.0;
};

inline std::vector<SignSplitSample> sign_split_stats(const Grid& grid,
                                                     const Trajectory& traj,
                                                     int species) {
  if (traj.snapshots.empty() ||
      species >= static_cast<int>(traj.snapshots.front().u.size()))
    throw std::invalid_argument("sign_split_stats: no such species");
  std::vector<SignSplitSample> out;
  for (const State& s : traj.snapshots) {
    SignSplitSample ss;
    ss.t = s.t;
    ss.min_v = field_min(s.u[species]);
    for (double v : s.u[species])
      (v >= 0.0 ? ss.measure_pos : ss.measure_neg) += grid.cell_measure();
    out.push_back(ss);
  }
  return out;
}

}  // namespace crossdiff

#endif  // CROSSDIFF_DIAGNOSTICS_HPP
