#ifndef CROSSDIFF_GRID_HPP
#define CROSSDIFF_GRID_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace crossdiff {

// One scalar value per interior node; boundary values are identically zero
// and never stored.
using Field = std::vector<double>;

// Uniform rectangular grid on (0,length)^dim with homogeneous Dirichlet
// boundary. n interior nodes per axis, spacing h = length/(n+1).
struct Grid {
  int dim = 1;
  int n = 0;
  double length = 1.0;
  double h = 0.0;

  std::size_t node_count() const {
    return dim == 1 ? static_cast<std::size_t>(n)
                    : static_cast<std::size_t>(n) * static_cast<std::size_t>(n);
  }
  double cell_measure() const { return dim == 1 ? h : h * h; }
  // interior node coordinate along one axis, j = 0..n-1
  double coord(int j) const { return (j + 1) * h; }
};

inline Grid build_uniform_grid(int dim, int n, double length) {
  if (dim != 1 && dim != 2)
    throw std::invalid_argument("grid: dim must be 1 or 2");
  if (n < 3) throw std::invalid_argument("grid: need n >= 3 interior nodes");
  if (!(length > 0.0)) throw std::invalid_argument("grid: length must be > 0");
  Grid g;
  g.dim = dim;
  g.n = n;
  g.length = length;
  g.h = length / (n + 1);
  return g;
}

inline Field make_field(const Grid& g, double value = 0.0) {
  return Field(g.node_count(), value);
}

inline bool all_finite(const Field& f) {
  return std::all_of(f.begin(), f.end(),
                     [](double x) { return std::isfinite(x); });
}

inline void check_shape(const Grid& g, const Field& f) {
  if (f.size() != g.node_count())
    throw std::invalid_argument("field size does not match grid");
}

// Second-order central Laplacian with zero ghost values on the Dirichlet
// boundary. 1D three-point stencil, 2D five-point.
inline Field laplacian(const Grid& g, const Field& f) {
  check_shape(g, f);
  Field out(f.size());
  const double ih2 = 1.0 / (g.h * g.h);
  const int n = g.n;
  if (g.dim == 1) {
    for (int j = 0; j < n; ++j) {
      const double l = j > 0 ? f[j - 1] : 0.0;
      const double r = j < n - 1 ? f[j + 1] : 0.0;
      out[j] = (l - 2.0 * f[j] + r) * ih2;
    }
  } else {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        const std::size_t c = static_cast<std::size_t>(i) * n + j;
        const double w = j > 0 ? f[c - 1] : 0.0;
        const double e = j < n - 1 ? f[c + 1] : 0.0;
        const double s = i > 0 ? f[c - n] : 0.0;
        const double nn = i < n - 1 ? f[c + n] : 0.0;
        out[c] = (w + e + s + nn - 4.0 * f[c]) * ih2;
      }
    }
  }
  return out;
}

// Centered-difference gradient magnitude per node; boundary-adjacent nodes
// use the known zero boundary value.
inline Field gradient_magnitude(const Grid& g, const Field& f) {
  check_shape(g, f);
  Field out(f.size());
  const double i2h = 0.5 / g.h;
  const int n = g.n;
  if (g.dim == 1) {
    for (int j = 0; j < n; ++j) {
      const double l = j > 0 ? f[j - 1] : 0.0;
      const double r = j < n - 1 ? f[j + 1] : 0.0;
      out[j] = std::abs((r - l) * i2h);
    }
  } else {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        const std::size_t c = static_cast<std::size_t>(i) * n + j;
        const double w = j > 0 ? f[c - 1] : 0.0;
        const double e = j < n - 1 ? f[c + 1] : 0.0;
        const double s = i > 0 ? f[c - n] : 0.0;
        const double nn = i < n - 1 ? f[c + n] : 0.0;
        const double gx = (e - w) * i2h;
        const double gy = (nn - s) * i2h;
        out[c] = std::sqrt(gx * gx + gy * gy);
      }
    }
  }
  return out;
}

inline double gradient_sup(const Grid& g, const Field& f) {
  const Field m = gradient_magnitude(g, f);
  return m.empty() ? 0.0 : *std::max_element(m.begin(), m.end());
}

// Weighted discrete L^p norm (integral ~ midpoint rule over interior cells):
// (sum_j w_j |f_j|^p h^dim)^(1/p). Omitted weight means weight == 1.
inline double integrate_lp(const Grid& g, const Field& f, double p,
                           const Field* weight = nullptr) {
  check_shape(g, f);
  if (!(p >= 1.0)) throw std::invalid_argument("integrate_lp: need p >= 1");
  if (weight) {
    check_shape(g, *weight);
    for (double w : *weight)
      if (w < 0.0)
        throw std::invalid_argument("integrate_lp: negative weight");
  }
  // scale by the max to keep |f/fmax|^p in range for large p
  double fmax = 0.0;
  for (double x : f) fmax = std::max(fmax, std::abs(x));
  if (fmax == 0.0) return 0.0;
  double sum = 0.0;
  for (std::size_t j = 0; j < f.size(); ++j) {
    const double w = weight ? (*weight)[j] : 1.0;
    sum += w * std::pow(std::abs(f[j]) / fmax, p);
  }
  sum *= g.cell_measure();
  return fmax * std::pow(sum, 1.0 / p);
}

inline double field_min(const Field& f) {
  return f.empty() ? 0.0 : *std::min_element(f.begin(), f.end());
}

inline double field_max_abs(const Field& f) {
  double m = 0.0;
  for (double x : f) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace crossdiff

#endif  // CROSSDIFF_GRID_HPP
