#include "rmdisk/spectrum.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "rmdisk/bessel.hpp"
#include "rmdisk/errors.hpp"

namespace rmdisk {

double EigenMode::norm(Parity p) const {
  if (p == Parity::Sin) {
    if (!norm_s) throw std::invalid_argument("sin eigenfunction does not exist for n = 0");
    return *norm_s;
  }
  return norm_c;
}

double EigenMode::radial(double r) const {
  if (beta == 0.0) return 1.0;
  return bessel_j(n, beta * r / R);
}

double EigenMode::radial_dr(double r) const {
  if (beta == 0.0) return 0.0;
  return beta / R * bessel_jprime(n, beta * r / R);
}

double EigenMode::angular(Parity p, double theta) const {
  return p == Parity::Cos ? std::cos(n * theta) : std::sin(n * theta);
}

double EigenMode::angular_dtheta(Parity p, double theta) const {
  return p == Parity::Cos ? -n * std::sin(n * theta) : n * std::cos(n * theta);
}

double EigenMode::value(Parity p, double r, double theta) const {
  return norm(p) * radial(r) * angular(p, theta);
}

EigenMode eigenmode(int n, int m, double R) {
  if (n < 0 || m < 0 || (n > 0 && m == 0)) {
    throw ConfigError("invalid eigenmode indices (" + std::to_string(n) + "," + std::to_string(m) + ")");
  }
  if (!(R > 0)) throw ConfigError("disk radius must be > 0");
  EigenMode e;
  e.n = n;
  e.m = m;
  e.R = R;
  const double pi = std::numbers::pi;
  if (n == 0 && m == 0) {
    e.norm_c = 1.0 / std::sqrt(pi * R * R);
    return e;
  }
  e.beta = bessel_jprime_zeros(n, m).back();
  e.lambda = (e.beta / R) * (e.beta / R);
  // iint r J_n(beta r/R)^2 {cos,sin}^2 = (pi or 2 pi) R^2/2 (1 - n^2/beta^2) J_n(beta)^2
  const double jb = bessel_j(n, e.beta);
  const double radial_sq = 0.5 * R * R * (1.0 - static_cast<double>(n) * n / (e.beta * e.beta)) * jb * jb;
  if (n == 0) {
    e.norm_c = 1.0 / std::sqrt(2.0 * pi * radial_sq);
  } else {
    e.norm_c = 1.0 / std::sqrt(pi * radial_sq);
    e.norm_s = e.norm_c;
  }
  return e;
}

void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n must be >= 1");
  x.assign(static_cast<std::size_t>(n), 0.0);
  w.assign(static_cast<std::size_t>(n), 0.0);
  const double pi = std::numbers::pi;
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = z;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (z * p1 - p0) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    // recompute derivative at the converged node
    double p0 = 1.0, p1 = z;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    if (n == 1) p0 = 1.0;
    dp = n * (z * p1 - p0) / (z * z - 1.0);
    const double wi = 2.0 / ((1.0 - z * z) * dp * dp);
    x[static_cast<std::size_t>(i)] = -z;
    x[static_cast<std::size_t>(n - 1 - i)] = z;
    w[static_cast<std::size_t>(i)] = wi;
    w[static_cast<std::size_t>(n - 1 - i)] = wi;
  }
}

RadialQuadrature radial_quadrature(double R, int n_nodes) {
  RadialQuadrature q;
  q.R = R;
  std::vector<double> x, w;
  gauss_legendre(n_nodes, x, w);
  q.nodes.resize(x.size());
  q.weights.resize(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = 0.5 * R * (x[i] + 1.0);
    q.nodes[i] = r;
    q.weights[i] = 0.5 * R * w[i] * r;
  }
  return q;
}

DiskQuadrature::DiskQuadrature(double R, int n_radial, int n_theta, double theta0)
    : radial_(radial_quadrature(R, n_radial)), n_theta_(n_theta), theta0_(theta0) {
  if (n_theta < 1) throw std::invalid_argument("DiskQuadrature: n_theta must be >= 1");
}

double DiskQuadrature::theta(int j) const {
  return theta0_ + 2.0 * std::numbers::pi * j / n_theta_;
}

double DiskQuadrature::weight(int i) const {
  return radial_.weights[static_cast<std::size_t>(i)] * 2.0 * std::numbers::pi / n_theta_;
}

bool DiskQuadrature::same_grid(const DiskQuadrature& other) const {
  return this == &other || (radial_.R == other.radial_.R && radial_.nodes == other.radial_.nodes &&
                            n_theta_ == other.n_theta_ && theta0_ == other.theta0_);
}

SampledField sample(const EigenMode& mode, Parity parity, std::shared_ptr<const DiskQuadrature> grid) {
  SampledField f;
  f.values.resize(grid->size());
  const double nc = mode.norm(parity);
  for (int i = 0; i < grid->n_radial(); ++i) {
    const double rad = nc * mode.radial(grid->r(i));
    for (int j = 0; j < grid->n_theta(); ++j) {
      f.values[static_cast<std::size_t>(i) * grid->n_theta() + j] = rad * mode.angular(parity, grid->theta(j));
    }
  }
  f.grid = std::move(grid);
  return f;
}

std::complex<double> inner_product(const SampledField& a, const SampledField& b) {
  if (!a.grid || !b.grid || !a.grid->same_grid(*b.grid)) {
    throw std::invalid_argument("inner_product: fields sampled on different grids");
  }
  const auto& g = *a.grid;
  std::complex<double> sum = 0.0;
  for (int i = 0; i < g.n_radial(); ++i) {
    std::complex<double> ring = 0.0;
    for (int j = 0; j < g.n_theta(); ++j) {
      const std::size_t k = static_cast<std::size_t>(i) * g.n_theta() + j;
      ring += a.values[k] * std::conj(b.values[k]);
    }
    sum += g.weight(i) * ring;
  }
  return sum;
}

ModeTable::ModeTable(double R, int n_max, int m_max) {
  for (int n = 0; n <= n_max; ++n) {
    for (int m = (n == 0 ? 0 : 1); m <= m_max; ++m) modes_.push_back(eigenmode(n, m, R));
  }
}

const EigenMode& ModeTable::get(int n, int m) const {
  for (const auto& e : modes_) {
    if (e.n == n && e.m == m) return e;
  }
  throw std::out_of_range("mode (" + std::to_string(n) + "," + std::to_string(m) + ") not in table");
}

}  // namespace rmdisk
