#ifndef CROSSDIFF_IO_HPP
#define CROSSDIFF_IO_HPP

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "crossdiff/grid.hpp"
#include "crossdiff/solver.hpp"

namespace crossdiff {

// shortest round-trip decimal form; deterministic across runs
inline std::string fmt_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  // trim to the shortest representation that round-trips
  for (int prec = 1; prec < 17; ++prec) {
    char tmp[32];
    std::snprintf(tmp, sizeof(tmp), "%.*g", prec, x);
    double back;
    std::sscanf(tmp, "%lf", &back);
    if (back == x) return tmp;
  }
  return buf;
}

// Field snapshot: header line "dim n h t", then one value per line in
// row-major node order.
inline void write_field_snapshot(const std::string& path, const Grid& g,
                                 const Field& f, double t) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << g.dim << ' ' << g.n << ' ' << fmt_double(g.h) << ' ' << fmt_double(t)
      << '\n';
  for (double v : f) out << fmt_double(v) << '\n';
}

struct FieldSnapshot {
  Grid grid;
  Field field;
  double t = 0.0;
};

inline FieldSnapshot read_field_snapshot(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  FieldSnapshot snap;
  int dim, n;
  double h, t;
  if (!(in >> dim >> n >> h >> t))
    throw std::runtime_error("bad snapshot header in " + path);
  snap.grid = build_uniform_grid(dim, n, h * (n + 1));
  snap.t = t;
  snap.field.reserve(snap.grid.node_count());
  double v;
  while (in >> v) snap.field.push_back(v);
  check_shape(snap.grid, snap.field);
  return snap;
}

inline std::string series_csv(const std::vector<NormSample>& series) {
  std::ostringstream out;
  out << "t,species,min,max,l1,l2,grad_sup\n";
  for (const NormSample& s : series)
    out << fmt_double(s.t) << ',' << s.species << ',' << fmt_double(s.min)
        << ',' << fmt_double(s.max) << ',' << fmt_double(s.l1) << ','
        << fmt_double(s.l2) << ',' << fmt_double(s.grad_sup) << '\n';
  return out.str();
}

inline void write_text_file(const std::string& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << body;
}

}  // namespace crossdiff

#endif  // CROSSDIFF_IO_HPP
