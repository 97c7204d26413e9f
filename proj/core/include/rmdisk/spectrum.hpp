#pragma once

#include <complex>
#include <memory>
#include <optional>
#include <vector>

namespace rmdisk {

enum class Parity { Cos, Sin };

// One Neumann eigenpair of -Lap on the disk of radius R:
//   phi(r, theta) = norm * J_n(beta r / R) * {cos, sin}(n theta),  lambda = (beta / R)^2.
// For n = 0, m = 0 is the constant mode (beta = 0); m >= 1 indexes zeros of J_0'.
struct EigenMode {
  int n = 0;
  int m = 0;
  double beta = 0.0;
  double lambda = 0.0;
  double R = 1.0;
  double norm_c = 0.0;
  std::optional<double> norm_s;  // absent for n = 0

  [[nodiscard]] double norm(Parity p) const;
  [[nodiscard]] double radial(double r) const;     // J_n(beta r / R)
  [[nodiscard]] double radial_dr(double r) const;  // d/dr J_n(beta r / R)
  [[nodiscard]] double angular(Parity p, double theta) const;
  [[nodiscard]] double angular_dtheta(Parity p, double theta) const;
  [[nodiscard]] double value(Parity p, double r, double theta) const;
};

EigenMode eigenmode(int n, int m, double R);

// Gauss-Legendre rule on [0, R]; weights carry the factor r, so they sum to R^2 / 2.
struct RadialQuadrature {
  double R = 1.0;
  std::vector<double> nodes;
  std::vector<double> weights;
};

RadialQuadrature radial_quadrature(double R, int n_nodes);

// Gauss-Legendre nodes and weights on [-1, 1].
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w);

// Tensor rule on the disk: radial Gauss-Legendre times uniform trapezoid in theta,
// optionally rotated by theta0. Point (i, j) is stored at i * n_theta + j.
class DiskQuadrature {
 public:
  DiskQuadrature(double R, int n_radial, int n_theta, double theta0 = 0.0);

  [[nodiscard]] double R() const { return radial_.R; }
  [[nodiscard]] int n_radial() const { return static_cast<int>(radial_.nodes.size()); }
  [[nodiscard]] int n_theta() const { return n_theta_; }
  [[nodiscard]] std::size_t size() const { return radial_.nodes.size() * static_cast<std::size_t>(n_theta_); }
  [[nodiscard]] double r(int i) const { return radial_.nodes[static_cast<std::size_t>(i)]; }
  [[nodiscard]] double theta(int j) const;
  [[nodiscard]] double theta0() const { return theta0_; }
  // Weight of point (i, j), including r dr dtheta.
  [[nodiscard]] double weight(int i) const;
  [[nodiscard]] bool same_grid(const DiskQuadrature& other) const;

 private:
  RadialQuadrature radial_;
  int n_theta_;
  double theta0_;
};

struct SampledField {
  std::shared_ptr<const DiskQuadrature> grid;
  std::vector<std::complex<double>> values;
};

SampledField sample(const EigenMode& mode, Parity parity, std::shared_ptr<const DiskQuadrature> grid);

// <a, b> = iint r a conj(b) dr dtheta. Throws std::invalid_argument on mismatched grids.
std::complex<double> inner_product(const SampledField& a, const SampledField& b);

// Immutable table of modes with n <= n_max and radial index <= m_max; safe to share read-only.
class ModeTable {
 public:
  ModeTable(double R, int n_max, int m_max);

  [[nodiscard]] const std::vector<EigenMode>& modes() const { return modes_; }
  [[nodiscard]] const EigenMode& get(int n, int m) const;

 private:
  std::vector<EigenMode> modes_;
};

}  // namespace rmdisk
