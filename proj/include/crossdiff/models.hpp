#ifndef CROSSDIFF_MODELS_HPP
#define CROSSDIFF_MODELS_HPP

#include <cmath>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "crossdiff/grid.hpp"

namespace crossdiff {

// Nonlinearity Psi(s) = alpha*s_+ + beta*(s_+)^k with alpha,beta >= 0 and
// k >= 1. Nonnegative and nondecreasing on s >= 0 by construction.
struct PsiSpec {
  double alpha = 0.0;
  double beta = 0.0;
  double k = 1.0;
  // asserts Psi(s) >= s for s >= 0; requires alpha >= 1
  bool dominates_identity = false;
};

inline double eval_psi(const PsiSpec& psi, double s) {
  if (s <= 0.0) return 0.0;
  return psi.alpha * s + psi.beta * std::pow(s, psi.k);
}

// right-derivative at 0
inline double eval_psi_prime(const PsiSpec& psi, double s) {
  if (s < 0.0) return 0.0;
  if (s == 0.0) return psi.k > 1.0 ? psi.alpha : psi.alpha + psi.beta;
  return psi.alpha + psi.beta * psi.k * std::pow(s, psi.k - 1.0);
}

struct LinearCombo {
  std::vector<double> a;  // all > 0
};

inline double eval_L(const LinearCombo& combo, std::span<const double> u) {
  if (combo.a.size() != u.size())
    throw std::invalid_argument("eval_L: length mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) s += combo.a[i] * u[i];
  return s;
}

enum class ReactionKind { Constant, Affine, PsiBounded };

// g_i(u):
//   Constant:   g_i = k_i
//   Affine:     g_i = k_i + sum_j lin[i][j] u_j
//   PsiBounded: g_i = k_i + c0 * Psi(|L(u)|)
// certificate (C_ij, c_ij) claims |g_i| <= sum_j (C_ij + c_ij Psi(|u_i|));
// for the two-species YW/YWz variants (C_00, c_00) play (C, c0) in
// |g| <= C + c0 Psi(|L|).
struct ReactionSpec {
  ReactionKind kind = ReactionKind::Constant;
  std::vector<double> k;
  std::vector<std::vector<double>> lin;
  double c0 = 0.0;
  std::vector<std::vector<double>> cert_C;
  std::vector<std::vector<double>> cert_c;
};

enum class Variant { Scalar, EqualDiffusion, YW, YWz };

inline std::string variant_name(Variant v) {
  switch (v) {
    case Variant::Scalar: return "scalar";
    case Variant::EqualDiffusion: return "equal-diffusion";
    case Variant::YW: return "yw";
    case Variant::YWz: return "ywz";
  }
  return "?";
}

struct ModelSpec {
  Variant variant = Variant::Scalar;
  int m = 1;
  double lambda0 = 1.0;
  PsiSpec psi;
  LinearCombo combo;  // (b, a) for YW/YWz, stored positive
  ReactionSpec reaction;
  double eps0 = 0.0;
  bool abs_v = false;  // use |v| inside the eps0 coupling
};

inline void validate_model(const ModelSpec& mod) {
  if (!(mod.lambda0 > 0.0))
    throw std::invalid_argument("model: lambda0 must be > 0");
  if (mod.eps0 < 0.0) throw std::invalid_argument("model: eps0 must be >= 0");
  if (mod.psi.alpha < 0.0 || mod.psi.beta < 0.0 || mod.psi.k < 1.0)
    throw std::invalid_argument("model: psi needs alpha,beta >= 0 and k >= 1");
  if (mod.psi.dominates_identity && mod.psi.alpha < 1.0)
    throw std::invalid_argument("model: dominates_identity needs alpha >= 1");
  switch (mod.variant) {
    case Variant::Scalar:
      if (mod.m != 1) throw std::invalid_argument("model: scalar needs m = 1");
      break;
    case Variant::EqualDiffusion:
      if (mod.m < 1) throw std::invalid_argument("model: m must be >= 1");
      break;
    case Variant::YW:
      if (mod.m != 2) throw std::invalid_argument("model: yw needs m = 2");
      if (!mod.psi.dominates_identity)
        throw std::invalid_argument("model: yw needs Psi(s) >= s on s >= 0");
      break;
    case Variant::YWz:
      if (mod.m != 2) throw std::invalid_argument("model: ywz needs m = 2");
      break;
  }
  if (static_cast<int>(mod.combo.a.size()) != mod.m)
    throw std::invalid_argument("model: combo length must equal m");
  for (double a : mod.combo.a)
    if (!(a > 0.0))
      throw std::invalid_argument("model: combo coefficients must be > 0");
  if (static_cast<int>(mod.reaction.k.size()) != mod.m)
    throw std::invalid_argument("model: reaction constants length mismatch");
  if (mod.reaction.kind == ReactionKind::Affine &&
      static_cast<int>(mod.reaction.lin.size()) != mod.m)
    throw std::invalid_argument("model: affine reaction matrix shape");
  for (const auto& row : mod.reaction.cert_C)
    for (double x : row)
      if (x < 0.0) throw std::invalid_argument("model: certificate C_ij < 0");
  for (const auto& row : mod.reaction.cert_c)
    for (double x : row)
      if (x < 0.0) throw std::invalid_argument("model: certificate c_ij < 0");
  if ((mod.variant == Variant::YW || mod.variant == Variant::YWz)) {
    // equal reaction rates across the two species
    if (mod.reaction.k[0] != mod.reaction.k[1])
      throw std::invalid_argument("model: yw/ywz need equal reaction rates");
    if (mod.reaction.kind == ReactionKind::Affine)
      throw std::invalid_argument("model: yw/ywz reactions are Constant or PsiBounded");
  }
}

// Signed combination coefficients realizing L: YWz uses L = b*u - a*v.
inline std::vector<double> signed_combo(const ModelSpec& mod) {
  std::vector<double> s = mod.combo.a;
  if (mod.variant == Variant::YWz) s[1] = -s[1];
  return s;
}

inline double eval_L_model(const ModelSpec& mod, std::span<const double> u) {
  const auto s = signed_combo(mod);
  double acc = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) acc += s[i] * u[i];
  return acc;
}

inline double eval_g(const ModelSpec& mod, std::span<const double> u, int i) {
  const ReactionSpec& r = mod.reaction;
  switch (r.kind) {
    case ReactionKind::Constant:
      return r.k[i];
    case ReactionKind::Affine: {
      double s = r.k[i];
      for (std::size_t j = 0; j < u.size(); ++j) s += r.lin[i][j] * u[j];
      return s;
    }
    case ReactionKind::PsiBounded:
      return r.k[i] + r.c0 * eval_psi(mod.psi, std::abs(eval_L_model(mod, u)));
  }
  return 0.0;
}

struct CertReport {
  bool pass = false;
  double worst_margin = 0.0;  // min over samples of bound - |g|
  std::vector<double> worst_point;
  // same check with Psi(|u_j|) inside the sum instead of Psi(|u_i|)
  bool pass_alt = false;
  double worst_margin_alt = 0.0;
};

// Deterministic lattice sampling of the growth bound over a box.
inline CertReport verify_growth_certificate(
    const ModelSpec& mod, const std::vector<std::pair<double, double>>& box,
    int samples) {
  if (samples < 1)
    throw std::invalid_argument("certificate: samples must be >= 1");
  if (static_cast<int>(box.size()) != mod.m)
    throw std::invalid_argument("certificate: box rank must equal m");
  for (auto [lo, hi] : box)
    if (!std::isfinite(lo) || !std::isfinite(hi) || hi < lo)
      throw std::invalid_argument("certificate: bad box bounds");

  const bool pairform =
      mod.variant == Variant::YW || mod.variant == Variant::YWz;
  CertReport rep;
  rep.worst_margin = std::numeric_limits<double>::infinity();
  rep.worst_margin_alt = std::numeric_limits<double>::infinity();

  std::vector<double> u(mod.m, 0.0);
  std::vector<int> idx(mod.m, 0);
  const long total = static_cast<long>(std::pow(samples, mod.m));
  for (long t = 0; t < total; ++t) {
    long rem = t;
    for (int d = 0; d < mod.m; ++d) {
      idx[d] = static_cast<int>(rem % samples);
      rem /= samples;
      const auto [lo, hi] = box[d];
      u[d] = samples == 1 ? lo : lo + (hi - lo) * idx[d] / (samples - 1);
    }
    for (int i = 0; i < mod.m; ++i) {
      const double gi = std::abs(eval_g(mod, u, i));
      double bound = 0.0, bound_alt = 0.0;
      if (pairform) {
        const double C = mod.reaction.cert_C[0][0];
        const double c0 = mod.reaction.cert_c[0][0];
        bound = C + c0 * eval_psi(mod.psi, std::abs(eval_L_model(mod, u)));
        bound_alt = bound;
      } else {
        for (int j = 0; j < mod.m; ++j) {
          bound += mod.reaction.cert_C[i][j] +
                   mod.reaction.cert_c[i][j] * eval_psi(mod.psi, std::abs(u[i]));
          bound_alt += mod.reaction.cert_C[i][j] +
                       mod.reaction.cert_c[i][j] * eval_psi(mod.psi, std::abs(u[j]));
        }
      }
      if (bound - gi < rep.worst_margin) {
        rep.worst_margin = bound - gi;
        rep.worst_point = u;
      }
      rep.worst_margin_alt = std::min(rep.worst_margin_alt, bound_alt - gi);
    }
  }
  rep.pass = rep.worst_margin >= 0.0;
  rep.pass_alt = rep.worst_margin_alt >= 0.0;
  return rep;
}

// m species fields on a shared grid at time t
struct State {
  double t = 0.0;
  std::vector<Field> u;
};

// Spatial right-hand side dU_i/dt. The scalar composite under the Laplacian
// is evaluated nodewise first, then differenced once per species.
inline std::vector<Field> assemble_rhs(const ModelSpec& mod, const Grid& grid,
                                       const State& state) {
  if (static_cast<int>(state.u.size()) != mod.m)
    throw std::invalid_argument("assemble_rhs: species count mismatch");
  for (const Field& f : state.u) check_shape(grid, f);

  const std::size_t nn = grid.node_count();
  const auto sc = signed_combo(mod);
  std::vector<Field> comp(mod.m, Field(nn));
  std::vector<Field> react(mod.m, Field(nn));
  std::vector<double> un(mod.m);

  for (std::size_t j = 0; j < nn; ++j) {
    for (int i = 0; i < mod.m; ++i) un[i] = state.u[i][j];
    double L = 0.0;
    for (int i = 0; i < mod.m; ++i) L += sc[i] * un[i];
    const double diff = mod.lambda0 + eval_psi(mod.psi, L);
    for (int i = 0; i < mod.m; ++i) comp[i][j] = diff * un[i];
    if ((mod.variant == Variant::YW || mod.variant == Variant::YWz) &&
        mod.eps0 > 0.0) {
      const double vt = mod.abs_v ? std::abs(un[1]) : un[1];
      const double uv = un[0] * vt;
      const double b = mod.combo.a[0], a = mod.combo.a[1];
      comp[0][j] += mod.eps0 * a * uv;
      comp[1][j] += (mod.variant == Variant::YW ? -1.0 : 1.0) * mod.eps0 * b * uv;
    }
    for (int i = 0; i < mod.m; ++i)
      react[i][j] = un[i] * eval_g(mod, un, i);
  }

  std::vector<Field> rhs(mod.m);
  for (int i = 0; i < mod.m; ++i) {
    rhs[i] = laplacian(grid, comp[i]);
    for (std::size_t j = 0; j < nn; ++j) rhs[i][j] += react[i][j];
  }
  return rhs;
}

}  // namespace crossdiff

#endif  // CROSSDIFF_MODELS_HPP
