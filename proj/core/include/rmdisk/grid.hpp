#pragma once

// Cell-centred polar grid on the disk. Cell (i, j) covers
// [i dr, (i+1) dr] x [j dtheta - dtheta/2, j dtheta + dtheta/2]; its centre sits at
// r_i = (i + 1/2) dr, theta_j = j dtheta. Arrays are stored r-major: index i * ntheta + j.

#include <cstddef>
#include <vector>

namespace rmdisk {

struct PolarGrid {
  int nr = 0;
  int ntheta = 0;
  double R = 1.0;

  [[nodiscard]] double dr() const { return R / nr; }
  [[nodiscard]] double dtheta() const;
  [[nodiscard]] double r(int i) const { return (i + 0.5) * dr(); }
  [[nodiscard]] double r_face(int i) const { return i * dr(); }  // i = 0..nr
  [[nodiscard]] double theta(int j) const { return j * dtheta(); }
  // Same angle folded to (-pi, pi]; cells j and ntheta - j get exactly opposite values.
  [[nodiscard]] double signed_theta(int j) const { return (2 * j <= ntheta ? j : j - ntheta) * dtheta(); }
  [[nodiscard]] std::size_t size() const { return static_cast<std::size_t>(nr) * ntheta; }
  [[nodiscard]] std::size_t idx(int i, int j) const { return static_cast<std::size_t>(i) * ntheta + j; }
  // Exact area of cell (i, j).
  [[nodiscard]] double area(int i) const { return r(i) * dr() * dtheta(); }
  bool operator==(const PolarGrid&) const = default;
};

// Throws ConfigError unless nr >= 2, ntheta >= 4 is even and R > 0.
PolarGrid make_grid(int nr, int ntheta, double R);

struct Field {
  std::vector<double> u;
  std::vector<double> v;
};

Field constant_field(const PolarGrid& g, double u, double v);

// Shift by `steps` angular cells: out(i, j + steps) = in(i, j).
std::vector<double> rotate(const PolarGrid& g, const std::vector<double>& a, int steps);
Field rotate(const PolarGrid& g, const Field& f, int steps);
// Mirror theta -> -theta: out(i, -j) = in(i, j).
std::vector<double> reflect(const PolarGrid& g, const std::vector<double>& a);
Field reflect(const PolarGrid& g, const Field& f);

// Sum of area * a.
double integrate(const PolarGrid& g, const std::vector<double>& a);
// sqrt(sum of area * (a - b)^2); b may be empty (treated as 0).
double l2_distance(const PolarGrid& g, const std::vector<double>& a, const std::vector<double>& b);
double l2_deviation(const PolarGrid& g, const std::vector<double>& a, double c);

}  // namespace rmdisk
