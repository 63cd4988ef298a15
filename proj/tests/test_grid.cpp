#include <catch2/catch_amalgamated.hpp>

#include <numbers>
#include <random>

#include "crossdiff/grid.hpp"

using namespace crossdiff;
using std::numbers::pi;

namespace {

Field random_field(const Grid& g, std::mt19937_64& eng) {
  Field f = make_field(g);
  for (double& x : f) x = 2.0 * ((eng() >> 11) * 0x1.0p-53) - 1.0;
  return f;
}

Field sample_sin(const Grid& g, int k = 1) {
  Field f = make_field(g);
  for (int j = 0; j < g.n; ++j) f[j] = std::sin(k * pi * g.coord(j));
  return f;
}

}  // namespace

TEST_CASE("build_uniform_grid") {
  const Grid g1 = build_uniform_grid(1, 3, 1.0);
  CHECK(g1.h == Catch::Approx(0.25));
  CHECK(g1.node_count() == 3);
  CHECK(g1.coord(0) == Catch::Approx(0.25));
  CHECK(g1.coord(1) == Catch::Approx(0.5));
  CHECK(g1.coord(2) == Catch::Approx(0.75));

  const Grid g2 = build_uniform_grid(2, 4, 2.0);
  CHECK(g2.h == Catch::Approx(0.4));
  CHECK(g2.node_count() == 16);

  CHECK_THROWS_AS(build_uniform_grid(3, 8, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(build_uniform_grid(1, 2, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(build_uniform_grid(1, 8, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(build_uniform_grid(1, 8, -1.0), std::invalid_argument);
}

TEST_CASE("laplacian of zero field is zero") {
  const Grid g = build_uniform_grid(2, 8, 1.0);
  const Field z = make_field(g);
  for (double v : laplacian(g, z)) CHECK(v == 0.0);
}

TEST_CASE("laplacian unit spike, h = 0.25") {
  const Grid g = build_uniform_grid(1, 3, 1.0);
  Field f = make_field(g);
  f[1] = 1.0;
  const Field lap = laplacian(g, f);
  CHECK(lap[0] == Catch::Approx(16.0));
  CHECK(lap[1] == Catch::Approx(-32.0));
  CHECK(lap[2] == Catch::Approx(16.0));
}

TEST_CASE("laplacian of sin(pi x) approximates -pi^2 sin(pi x)") {
  const Grid g = build_uniform_grid(1, 128, 1.0);
  const Field f = sample_sin(g);
  const Field lap = laplacian(g, f);
  const double bound = std::pow(pi, 4) * g.h * g.h / 12.0;
  for (int j = 0; j < g.n; ++j)
    CHECK(std::abs(lap[j] + pi * pi * f[j]) <= bound);
}

TEST_CASE("laplacian discrete eigenvalue identity, k = 1..3") {
  const Grid g = build_uniform_grid(1, 64, 1.0);
  for (int k = 1; k <= 3; ++k) {
    const Field f = sample_sin(g, k);
    const Field lap = laplacian(g, f);
    const double mu = 2.0 / (g.h * g.h) * (1.0 - std::cos(k * pi * g.h));
    for (int j = 0; j < g.n; ++j)
      CHECK(lap[j] == Catch::Approx(-mu * f[j]).margin(1e-8));
  }
}

TEST_CASE("laplacian is linear on random fields") {
  std::mt19937_64 eng(42);
  const Grid g = build_uniform_grid(2, 12, 1.0);
  for (int trial = 0; trial < 10; ++trial) {
    const Field f = random_field(g, eng);
    const Field h = random_field(g, eng);
    const double a = 2.0 * ((eng() >> 11) * 0x1.0p-53) - 1.0;
    const double b = 2.0 * ((eng() >> 11) * 0x1.0p-53) - 1.0;
    Field comb = make_field(g);
    for (std::size_t j = 0; j < comb.size(); ++j)
      comb[j] = a * f[j] + b * h[j];
    const Field lc = laplacian(g, comb);
    const Field lf = laplacian(g, f);
    const Field lh = laplacian(g, h);
    for (std::size_t j = 0; j < comb.size(); ++j)
      CHECK(lc[j] == Catch::Approx(a * lf[j] + b * lh[j]).margin(1e-9));
  }
}

TEST_CASE("laplacian second-order convergence") {
  double err[2];
  const int ns[2] = {63, 127};
  for (int c = 0; c < 2; ++c) {
    const Grid g = build_uniform_grid(1, ns[c], 1.0);
    const Field f = sample_sin(g);
    const Field lap = laplacian(g, f);
    double e = 0.0;
    for (int j = 0; j < g.n; ++j)
      e = std::max(e, std::abs(lap[j] + pi * pi * f[j]));
    err[c] = e;
  }
  const double ratio = err[0] / err[1];
  CHECK(ratio >= 3.2);
  CHECK(ratio <= 4.8);
}

TEST_CASE("integrate_lp basics") {
  const Grid g = build_uniform_grid(1, 99, 1.0);
  const Field ones = make_field(g, 1.0);
  CHECK(std::abs(integrate_lp(g, ones, 2.0) - 1.0) <= g.h);

  const Field zeros = make_field(g);
  for (double p : {1.0, 2.0, 7.5})
    CHECK(integrate_lp(g, zeros, p) == 0.0);

  CHECK_THROWS_AS(integrate_lp(g, ones, 0.5), std::invalid_argument);
  Field w = make_field(g, 1.0);
  w[4] = -1.0;
  CHECK_THROWS_AS(integrate_lp(g, ones, 2.0, &w), std::invalid_argument);
}

TEST_CASE("integrate_lp of sin(pi x), p = 2") {
  const Grid g = build_uniform_grid(1, 128, 1.0);
  const Field f = sample_sin(g);
  CHECK(integrate_lp(g, f, 2.0) == Catch::Approx(std::sqrt(0.5)).margin(1e-3));
}

TEST_CASE("integrate_lp is monotone in |f|") {
  std::mt19937_64 eng(7);
  const Grid g = build_uniform_grid(1, 40, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const Field f = random_field(g, eng);
    Field bigger = f;
    for (double& x : bigger) x *= 1.0 + (eng() >> 11) * 0x1.0p-53;
    for (double p : {1.0, 2.0, 4.0})
      CHECK(integrate_lp(g, f, p) <= integrate_lp(g, bigger, p) + 1e-14);
  }
}

TEST_CASE("gradient_sup") {
  const Grid g = build_uniform_grid(1, 16, 1.0);
  CHECK(gradient_sup(g, make_field(g)) == 0.0);

  // linear ramp f_j = x_j; right edge sees the Dirichlet mismatch
  Field ramp = make_field(g);
  for (int j = 0; j < g.n; ++j) ramp[j] = g.coord(j);
  const Field mag = gradient_magnitude(g, ramp);
  // centered difference at the last interior node against the zero boundary
  CHECK(mag[g.n - 1] ==
        Catch::Approx(std::abs(0.0 - ramp[g.n - 2]) / (2.0 * g.h)));
  CHECK(gradient_sup(g, ramp) == Catch::Approx(mag[g.n - 1]));

  const Grid gf = build_uniform_grid(1, 128, 1.0);
  const Field s = sample_sin(gf);
  CHECK(gradient_sup(gf, s) == Catch::Approx(pi).margin(1e-2));
}
