#include "rmdisk/grid.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "rmdisk/errors.hpp"

namespace rmdisk {

double PolarGrid::dtheta() const { return 2.0 * std::numbers::pi / ntheta; }

PolarGrid make_grid(int nr, int ntheta, double R) {
  if (nr < 2) throw ConfigError("grid: nr must be >= 2, got " + std::to_string(nr));
  if (ntheta < 4 || ntheta % 2) {
    throw ConfigError("grid: ntheta must be even and >= 4, got " + std::to_string(ntheta));
  }
  if (!(R > 0)) throw ConfigError("grid: radius must be > 0");
  return PolarGrid{nr, ntheta, R};
}

Field constant_field(const PolarGrid& g, double u, double v) {
  return Field{std::vector<double>(g.size(), u), std::vector<double>(g.size(), v)};
}

std::vector<double> rotate(const PolarGrid& g, const std::vector<double>& a, int steps) {
  const int n = g.ntheta;
  const int s = ((steps % n) + n) % n;
  std::vector<double> out(a.size());
  for (int i = 0; i < g.nr; ++i) {
    for (int j = 0; j < n; ++j) out[g.idx(i, (j + s) % n)] = a[g.idx(i, j)];
  }
  return out;
}

Field rotate(const PolarGrid& g, const Field& f, int steps) {
  return Field{rotate(g, f.u, steps), rotate(g, f.v, steps)};
}

std::vector<double> reflect(const PolarGrid& g, const std::vector<double>& a) {
  const int n = g.ntheta;
  std::vector<double> out(a.size());
  for (int i = 0; i < g.nr; ++i) {
    for (int j = 0; j < n; ++j) out[g.idx(i, (n - j) % n)] = a[g.idx(i, j)];
  }
  return out;
}

Field reflect(const PolarGrid& g, const Field& f) { return Field{reflect(g, f.u), reflect(g, f.v)}; }

double integrate(const PolarGrid& g, const std::vector<double>& a) {
  if (a.size() != g.size()) throw std::invalid_argument("integrate: size mismatch");
  double total = 0.0;
  for (int i = 0; i < g.nr; ++i) {
    double ring = 0.0;
    for (int j = 0; j < g.ntheta; ++j) ring += a[g.idx(i, j)];
    total += g.area(i) * ring;
  }
  return total;
}

double l2_distance(const PolarGrid& g, const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != g.size() || (!b.empty() && b.size() != a.size())) {
    throw std::invalid_argument("l2_distance: size mismatch");
  }
  double total = 0.0;
  for (int i = 0; i < g.nr; ++i) {
    double ring = 0.0;
    for (int j = 0; j < g.ntheta; ++j) {
      const std::size_t k = g.idx(i, j);
      const double d = b.empty() ? a[k] : a[k] - b[k];
      ring += d * d;
    }
    total += g.area(i) * ring;
  }
  return std::sqrt(total);
}

double l2_deviation(const PolarGrid& g, const std::vector<double>& a, double c) {
  double total = 0.0;
  for (int i = 0; i < g.nr; ++i) {
    double ring = 0.0;
    for (int j = 0; j < g.ntheta; ++j) {
      const double d = a[g.idx(i, j)] - c;
      ring += d * d;
    }
    total += g.area(i) * ring;
  }
  return std::sqrt(total);
}

}  // namespace rmdisk
