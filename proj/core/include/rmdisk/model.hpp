#pragma once

// Delayed Rosenzweig-MacArthur kinetics with predator-taxis on a disk:
//
//   u_t = d1 Lap u + chi div(u grad v) + f(u, v)
//   v_t = d2 Lap v + g(u(t - tau), v)
//
//   f(u, v) = u (1 - u/K) - alpha u v / (1 + u)
//   g(w, v) = -d v + alpha w v / (1 + w)
//
// with homogeneous Neumann conditions on the rim r = R.

namespace rmdisk {

struct ModelParams {
  double d1 = 0.1;
  double d2 = 0.2;
  double chi = 0.0;
  double K = 6.0;
  double alpha = 1.0;
  double d = 0.8;
  double tau = 0.0;
  double R = 10.0;
};

// Throws ConfigError when a field is out of range or alpha <= d.
void validate(const ModelParams& p);

struct SteadyState {
  double u_star = 0.0;
  double v_star = 0.0;
  double a11 = 0.0;  // df/du at (u*, v*)
  double a21 = 0.0;  // dg/dw at (u*, v*), w the delayed prey density
};

struct H1Report {
  bool alpha_gt_d = false;
  bool K_positive = false;
  bool K_lt_1_plus_2u = false;
  bool u_in_0_K = false;
  bool chi_positive = false;
  double u_star = 0.0;  // NaN when alpha <= d

  [[nodiscard]] bool all() const {
    return alpha_gt_d && K_positive && K_lt_1_plus_2u && u_in_0_K && chi_positive;
  }
};

H1Report check_h1(const ModelParams& p);

// Throws ConfigError when alpha <= d or the implied predator density is not positive.
SteadyState steady_state(const ModelParams& p);

// Reaction terms, evaluated pointwise.
double reaction_f(const ModelParams& p, double u, double v);
double reaction_g(const ModelParams& p, double u_delayed, double v);

// Partial derivatives of the kinetics at the steady state. The delayed prey
// density w = u(t - tau) is a separate argument of g.
struct KineticForms {
  // first order
  double f_u = 0, f_v = 0;
  double g_w = 0, g_v = 0;
  // second order
  double f_uu = 0, f_uv = 0, f_vv = 0;
  double g_ww = 0, g_wv = 0, g_vv = 0;
  // third order
  double f_uuu = 0, f_uuv = 0, f_uvv = 0, f_vvv = 0;
  double g_www = 0, g_wwv = 0, g_wvv = 0, g_vvv = 0;
  // coefficient of the bilinear taxis term chi div(u grad v)
  double chi = 0;
};

KineticForms kinetic_forms(const SteadyState& ss, const ModelParams& p);

}  // namespace rmdisk
