#include "rmdisk/model.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "rmdisk/errors.hpp"

namespace rmdisk {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw ConfigError("invalid model parameters: " + what);
}

}  // namespace

void validate(const ModelParams& p) {
  require(std::isfinite(p.d1) && p.d1 > 0, "d1 must be > 0");
  require(std::isfinite(p.d2) && p.d2 > 0, "d2 must be > 0");
  require(std::isfinite(p.chi) && p.chi >= 0, "chi must be >= 0");
  require(std::isfinite(p.K) && p.K > 0, "K must be > 0");
  require(std::isfinite(p.alpha) && p.alpha > 0, "alpha must be > 0");
  require(std::isfinite(p.d) && p.d > 0, "d must be > 0");
  require(std::isfinite(p.tau) && p.tau >= 0, "tau must be >= 0");
  require(std::isfinite(p.R) && p.R > 0, "R must be > 0");
  require(p.alpha > p.d, "alpha must exceed d for a positive steady state");
}

H1Report check_h1(const ModelParams& p) {
  H1Report h;
  h.alpha_gt_d = p.alpha > p.d;
  h.K_positive = p.K > 0;
  h.chi_positive = p.chi > 0;
  if (!h.alpha_gt_d) {
    h.u_star = std::numeric_limits<double>::quiet_NaN();
    return h;
  }
  h.u_star = p.d / (p.alpha - p.d);
  h.K_lt_1_plus_2u = p.K < 1.0 + 2.0 * h.u_star;
  h.u_in_0_K = h.u_star > 0 && h.u_star < p.K;
  return h;
}

SteadyState steady_state(const ModelParams& p) {
  if (!(p.alpha > p.d)) {
    throw ConfigError("no positive steady state: alpha must exceed d");
  }
  SteadyState s;
  s.u_star = p.d / (p.alpha - p.d);
  s.v_star = (p.K - s.u_star) * (1.0 + s.u_star) / (p.K * p.alpha);
  if (!(s.v_star > 0)) {
    throw ConfigError("no positive steady state: u* = d/(alpha-d) must be below K");
  }
  const double q = 1.0 + s.u_star;
  s.a21 = p.alpha * s.v_star / (q * q);
  s.a11 = 1.0 - 2.0 * s.u_star / p.K - s.a21;
  return s;
}

double reaction_f(const ModelParams& p, double u, double v) {
  return u * (1.0 - u / p.K) - p.alpha * u * v / (u + 1.0);
}

double reaction_g(const ModelParams& p, double u_delayed, double v) {
  return -p.d * v + p.alpha * u_delayed * v / (u_delayed + 1.0);
}

KineticForms kinetic_forms(const SteadyState& ss, const ModelParams& p) {
  // h(s) = s / (1 + s) and its derivatives; f and g are built from h.
  const double q = 1.0 + ss.u_star;
  const double h0 = ss.u_star / q;
  const double h1 = 1.0 / (q * q);
  const double h2 = -2.0 / (q * q * q);
  const double h3 = 6.0 / (q * q * q * q);
  const double a = p.alpha;
  const double v = ss.v_star;

  KineticForms k;
  k.f_u = 1.0 - 2.0 * ss.u_star / p.K - a * v * h1;
  k.f_v = -a * h0;
  k.g_w = a * v * h1;
  k.g_v = -p.d + a * h0;

  k.f_uu = -2.0 / p.K - a * v * h2;
  k.f_uv = -a * h1;
  k.f_vv = 0.0;
  k.g_ww = a * v * h2;
  k.g_wv = a * h1;
  k.g_vv = 0.0;

  k.f_uuu = -a * v * h3;
  k.f_uuv = -a * h2;
  k.f_uvv = 0.0;
  k.f_vvv = 0.0;
  k.g_www = a * v * h3;
  k.g_wwv = a * h2;
  k.g_wvv = 0.0;
  k.g_vvv = 0.0;

  k.chi = p.chi;
  return k;
}

}  // namespace rmdisk
