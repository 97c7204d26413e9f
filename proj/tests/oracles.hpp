#pragma once

// Independent reference computations for tests. None of these call into the library's
// numerical routines for the quantity they check.

#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

#include <boost/math/special_functions/bessel.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include "rmdisk/grid.hpp"
#include "rmdisk/model.hpp"

namespace oracle {

using big = boost::multiprecision::cpp_bin_float_50;

// d/dx J_n at 50 digits, from J_{n-1} and J_{n+1}.
inline big jprime_mp(int n, const big& x) {
  using boost::math::cyl_bessel_j;
  if (n == 0) return -cyl_bessel_j(1, x);
  return (cyl_bessel_j(n - 1, x) - cyl_bessel_j(n + 1, x)) / 2;
}

// First `count` positive zeros of J_n' by a coarse sign scan and bisection in 50-digit arithmetic.
inline std::vector<double> jprime_zeros_mp(int n, int count) {
  std::vector<double> zeros;
  const big step = big(1) / 20;
  big a = n == 0 ? step : big(n) / 2 + step;  // J_n' > 0 on (0, n) for n >= 1
  big fa = jprime_mp(n, a);
  while (static_cast<int>(zeros.size()) < count) {
    const big b = a + step;
    const big fb = jprime_mp(n, b);
    if (fa * fb < 0) {
      big lo = a, hi = b, flo = fa;
      for (int it = 0; it < 120; ++it) {
        const big mid = (lo + hi) / 2;
        const big fm = jprime_mp(n, mid);
        if (flo * fm <= 0) {
          hi = mid;
        } else {
          lo = mid;
          flo = fm;
        }
      }
      zeros.push_back(static_cast<double>((lo + hi) / 2));
    }
    a = b;
    fa = fb;
  }
  return zeros;
}

// Classical RK4 for the spatially homogeneous system
//   u' = f(u, v),  v' = g(u(t - tau), v)
// with history h(t) on [-tau, 0]; tau / h must be an integer. The delayed value at RK4
// half steps is interpolated with the cubic Hermite polynomial built from stored values and slopes.
struct DdeResult {
  std::vector<double> t, u, v;
};

inline DdeResult rk4_dde(const rmdisk::ModelParams& p, const std::function<double(double)>& hist_u,
                         const std::function<double(double)>& hist_v, double h, double t_end) {
  const int delay = static_cast<int>(std::lround(p.tau / h));
  const int steps = static_cast<int>(std::lround(t_end / h));
  DdeResult r;
  // stored for index k = -delay .. steps; slope of u for Hermite interpolation
  std::vector<double> us(static_cast<std::size_t>(delay + steps + 1)), dus(us.size());
  auto at = [&](int k) -> std::size_t { return static_cast<std::size_t>(k + delay); };
  const double eps = 1e-6;
  for (int k = -delay; k <= 0; ++k) {
    const double t = k * h;
    us[at(k)] = hist_u(t);
    dus[at(k)] = (hist_u(t + eps) - hist_u(t - eps)) / (2 * eps);
  }
  auto delayed = [&](double t) {
    const double s = t - p.tau;
    if (s <= 0) return hist_u(s);
    const int k = static_cast<int>(std::floor(s / h + 1e-12));
    const double th = (s - k * h) / h;
    if (th < 1e-12) return us[at(k)];
    const double y0 = us[at(k)], y1 = us[at(k + 1)], m0 = dus[at(k)] * h, m1 = dus[at(k + 1)] * h;
    const double t2 = th * th, t3 = t2 * th;
    return (2 * t3 - 3 * t2 + 1) * y0 + (t3 - 2 * t2 + th) * m0 + (-2 * t3 + 3 * t2) * y1 + (t3 - t2) * m1;
  };
  double u = hist_u(0.0), v = hist_v(0.0);
  r.t.push_back(0.0);
  r.u.push_back(u);
  r.v.push_back(v);
  auto fu = [&](double uu, double vv) { return uu * (1 - uu / p.K) - p.alpha * uu * vv / (1 + uu); };
  auto gv = [&](double w, double vv) { return -p.d * vv + p.alpha * w * vv / (1 + w); };
  for (int k = 0; k < steps; ++k) {
    const double t = k * h;
    const double w0 = delayed(t), wh = delayed(t + h / 2), w1 = delayed(t + h);
    const double k1u = fu(u, v), k1v = gv(w0, v);
    const double k2u = fu(u + h / 2 * k1u, v + h / 2 * k1v), k2v = gv(wh, v + h / 2 * k1v);
    const double k3u = fu(u + h / 2 * k2u, v + h / 2 * k2v), k3v = gv(wh, v + h / 2 * k2v);
    const double k4u = fu(u + h * k3u, v + h * k3v), k4v = gv(w1, v + h * k3v);
    u += h / 6 * (k1u + 2 * k2u + 2 * k3u + k4u);
    v += h / 6 * (k1v + 2 * k2v + 2 * k3v + k4v);
    us[at(k + 1)] = u;
    dus[at(k + 1)] = fu(u, v);
    r.t.push_back(t + h);
    r.u.push_back(u);
    r.v.push_back(v);
  }
  return r;
}

// Smooth manufactured steady state satisfying the Neumann condition, with rho = r / R:
//   u = u* (1 + a (rho^2 - rho^4 / 2) cos 2 theta),  v = v* (1 + b (rho - rho^3 / 3) cos theta)
// Both are smooth at the pole (r^2 cos 2 theta and r cos theta are polynomials in x, y).
struct Manufactured {
  rmdisk::ModelParams p;
  double u_star = 0, v_star = 0;
  double a = 0.2, b = 0.2;

  // radial profile P and its first two r-derivatives
  void pu(double r, double& P, double& P1, double& P2) const {
    const double R = p.R, x = r / R;
    P = x * x - x * x * x * x / 2;
    P1 = (2 * x - 2 * x * x * x) / R;
    P2 = (2 - 6 * x * x) / (R * R);
  }
  void pv(double r, double& P, double& P1, double& P2) const {
    const double R = p.R, x = r / R;
    P = x - x * x * x / 3;
    P1 = (1 - x * x) / R;
    P2 = -2 * x / (R * R);
  }
  double u(double r, double th) const {
    double P, P1, P2;
    pu(r, P, P1, P2);
    return u_star * (1 + a * P * std::cos(2 * th));
  }
  double v(double r, double th) const {
    double P, P1, P2;
    pv(r, P, P1, P2);
    return v_star * (1 + b * P * std::cos(th));
  }
  // Source terms making (u, v) a steady solution: S_u = -(d1 Lap u + chi div(u grad v) + f),
  // S_v = -(d2 Lap v + g(u, v)); the delayed argument equals u because the solution is steady.
  void source(double r, double th, double& su, double& sv) const {
    double P, P1, P2, Q, Q1, Q2;
    pu(r, P, P1, P2);
    pv(r, Q, Q1, Q2);
    const double c2 = std::cos(2 * th), s2 = std::sin(2 * th), c1 = std::cos(th), s1 = std::sin(th);
    const double U = u_star * (1 + a * P * c2), V = v_star * (1 + b * Q * c1);
    const double Ur = u_star * a * P1 * c2, Ut = -2 * u_star * a * P * s2;
    const double Vr = v_star * b * Q1 * c1, Vt = -v_star * b * Q * s1;
    const double lapU = u_star * a * c2 * (P2 + P1 / r - 4 * P / (r * r));
    const double lapV = v_star * b * c1 * (Q2 + Q1 / r - Q / (r * r));
    const double div = Ur * Vr + Ut * Vt / (r * r) + U * lapV;
    const double f = U * (1 - U / p.K) - p.alpha * U * V / (1 + U);
    const double g = -p.d * V + p.alpha * U * V / (1 + U);
    su = -(p.d1 * lapU + p.chi * div + f);
    sv = -(p.d2 * lapV + g);
  }
};

}  // namespace oracle
