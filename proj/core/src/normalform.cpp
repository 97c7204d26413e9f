#include "rmdisk/normalform.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numbers>
#include <string>

#include "rmdisk/errors.hpp"

namespace rmdisk {

using cplx = std::complex<double>;

std::string to_string(Branch b) {
  switch (b) {
    case Branch::RotatingCW: return "rotating-cw";
    case Branch::RotatingCCW: return "rotating-ccw";
    case Branch::Standing: return "standing";
    case Branch::StandingCos: return "standing-cos";
  }
  return "unknown";
}

Branch branch_from_string(const std::string& s) {
  for (Branch b : {Branch::RotatingCW, Branch::RotatingCCW, Branch::Standing, Branch::StandingCos}) {
    if (s == to_string(b)) return b;
  }
  throw ConfigError("unknown branch '" + s + "' (expected rotating-cw, rotating-ccw, standing, standing-cos)");
}

KernelBasis kernel_basis(const HopfPoint& hp, const ModelParams& p, const SteadyState& ss, Branch branch,
                         double gauge) {
  if (hp.n <= 0 || hp.m <= 0) {
    throw ConfigError("normal form requires n > 0 and m > 0, got (" + std::to_string(hp.n) + "," +
                      std::to_string(hp.m) + ")");
  }
  KernelBasis kb;
  kb.branch = branch;
  kb.n = hp.n;
  kb.m = hp.m;
  kb.lambda = hp.lambda;
  kb.omega = hp.omega_star;
  kb.tau = hp.tau_c;
  kb.gauge = gauge;
  const cplx iw(0.0, kb.omega);
  const cplx e = std::exp(-iw * kb.tau);
  kb.V1 = {1.0, ss.a21 * e / (p.d2 * kb.lambda + iw)};
  cvec2 y = {ss.a21 * e, iw + p.d1 * kb.lambda - ss.a11};
  // (I + tau A_tau e^{-i w tau}) V1 with A_tau = [[0, 0], [a21, 0]]
  const cplx norm = y[0] * kb.V1[0] + y[1] * (kb.V1[1] + kb.tau * e * ss.a21 * kb.V1[0]);
  kb.Y = {y[0] / norm, y[1] / norm};
  kb.V2 = {std::conj(kb.Y[0]), std::conj(kb.Y[1])};
  switch (branch) {
    case Branch::RotatingCW: kb.s_cos = 1.0; kb.s_sin = cplx(0.0, 1.0); break;
    case Branch::RotatingCCW: kb.s_cos = 1.0; kb.s_sin = cplx(0.0, -1.0); break;
    case Branch::Standing: kb.s_cos = 1.0; kb.s_sin = 1.0; break;
    case Branch::StandingCos: kb.s_cos = 1.0; kb.s_sin = 0.0; break;
  }
  const cplx g = std::polar(1.0, gauge);
  kb.s_cos *= g;
  kb.s_sin *= g;
  return kb;
}

namespace {

// A scalar field on the quadrature nodes with its gradient (d/dr, (1/r) d/dtheta) and Laplacian.
struct Comp {
  std::vector<cplx> val, gr, gt, lap;
  void resize(std::size_t n) {
    val.assign(n, 0.0);
    gr.assign(n, 0.0);
    gt.assign(n, 0.0);
    lap.assign(n, 0.0);
  }
  void axpy(cplx a, const Comp& x) {
    for (std::size_t k = 0; k < val.size(); ++k) {
      val[k] += a * x.val[k];
      gr[k] += a * x.gr[k];
      gt[k] += a * x.gt[k];
      lap[k] += a * x.lap[k];
    }
  }
};

// Arguments of the quadratic and cubic forms: u, v and the delayed prey value.
struct Arg {
  Comp u, v;
  std::vector<cplx> u_tau;
};

Arg conj(const Arg& a) {
  Arg c = a;
  for (auto* vec : {&c.u.val, &c.u.gr, &c.u.gt, &c.u.lap, &c.v.val, &c.v.gr, &c.v.gt, &c.v.lap, &c.u_tau}) {
    for (auto& x : *vec) x = std::conj(x);
  }
  return c;
}

struct Context {
  std::shared_ptr<const DiskQuadrature> quad;
  std::vector<double> weight;  // per node
  std::size_t size() const { return quad->size(); }

  Context(double R, int n, const NormalFormOptions& o) {
    const int nq = o.quad_radial > 0 ? o.quad_radial : 3 * o.radial_modes + 40;
    const int nt = o.quad_theta > 0 ? o.quad_theta : 16 * n + 16;
    quad = std::make_shared<DiskQuadrature>(R, nq, nt, o.theta0);
    weight.resize(quad->size());
    for (int i = 0; i < quad->n_radial(); ++i) {
      for (int j = 0; j < quad->n_theta(); ++j) weight[static_cast<std::size_t>(i) * quad->n_theta() + j] = quad->weight(i);
    }
  }

  Comp mode(const EigenMode& e, Parity par) const {
    Comp c;
    c.resize(size());
    const double nc = e.norm(par);
    for (int i = 0; i < quad->n_radial(); ++i) {
      const double r = quad->r(i);
      const double rad = nc * e.radial(r), drad = nc * e.radial_dr(r);
      for (int j = 0; j < quad->n_theta(); ++j) {
        const double th = quad->theta(j);
        const std::size_t k = static_cast<std::size_t>(i) * quad->n_theta() + j;
        const double a = e.angular(par, th), da = e.angular_dtheta(par, th);
        c.val[k] = rad * a;
        c.gr[k] = drad * a;
        c.gt[k] = rad * da / r;
        c.lap[k] = -e.lambda * rad * a;
      }
    }
    return c;
  }

  // sum of weight * a * b
  cplx integrate(const std::vector<cplx>& a, const std::vector<cplx>& b) const {
    cplx s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) s += weight[k] * a[k] * b[k];
    return s;
  }
};

struct Pair {
  std::vector<cplx> u, v;
};

Pair quadratic(const KineticForms& F, const Arg& P, const Arg& Q) {
  const std::size_t n = P.u.val.size();
  Pair out{std::vector<cplx>(n), std::vector<cplx>(n)};
  for (std::size_t k = 0; k < n; ++k) {
    const cplx pu = P.u.val[k], pv = P.v.val[k], qu = Q.u.val[k], qv = Q.v.val[k];
    const cplx taxis = (P.u.gr[k] * Q.v.gr[k] + P.u.gt[k] * Q.v.gt[k] + pu * Q.v.lap[k]) +
                       (Q.u.gr[k] * P.v.gr[k] + Q.u.gt[k] * P.v.gt[k] + qu * P.v.lap[k]);
    out.u[k] = F.chi * taxis + F.f_uu * pu * qu + F.f_uv * (pu * qv + pv * qu) + F.f_vv * pv * qv;
    const cplx pw = P.u_tau[k], qw = Q.u_tau[k];
    out.v[k] = F.g_ww * pw * qw + F.g_wv * (pw * qv + qw * pv) + F.g_vv * pv * qv;
  }
  return out;
}

Pair cubic(const KineticForms& F, const Arg& P, const Arg& Q, const Arg& R) {
  const std::size_t n = P.u.val.size();
  Pair out{std::vector<cplx>(n), std::vector<cplx>(n)};
  for (std::size_t k = 0; k < n; ++k) {
    const cplx pu = P.u.val[k], qu = Q.u.val[k], ru = R.u.val[k];
    const cplx pv = P.v.val[k], qv = Q.v.val[k], rv = R.v.val[k];
    out.u[k] = F.f_uuu * pu * qu * ru + F.f_uuv * (pu * qu * rv + pu * qv * ru + pv * qu * ru) +
               F.f_uvv * (pu * qv * rv + pv * qu * rv + pv * qv * ru) + F.f_vvv * pv * qv * rv;
    const cplx pw = P.u_tau[k], qw = Q.u_tau[k], rw = R.u_tau[k];
    out.v[k] = F.g_www * pw * qw * rw + F.g_wwv * (pw * qw * rv + pw * qv * rw + pv * qw * rw) +
               F.g_wvv * (pw * qv * rv + pv * qw * rv + pv * qv * rw) + F.g_vvv * pv * qv * rv;
  }
  return out;
}

Comp spatial_profile(const Context& ctx, const KernelBasis& kb, const EigenMode& e) {
  Comp s;
  s.resize(ctx.size());
  s.axpy(kb.s_cos, ctx.mode(e, Parity::Cos));
  s.axpy(kb.s_sin, ctx.mode(e, Parity::Sin));
  return s;
}

Arg psi_arg(const KernelBasis& kb, const Comp& s) {
  Arg a;
  a.u.resize(s.val.size());
  a.v.resize(s.val.size());
  a.u.axpy(kb.V1[0], s);
  a.v.axpy(kb.V1[1], s);
  const cplx e = std::exp(cplx(0.0, -kb.omega * kb.tau));
  a.u_tau.resize(s.val.size());
  for (std::size_t k = 0; k < s.val.size(); ++k) a.u_tau[k] = e * a.u.val[k];
  return a;
}

// Delta(nu; mu) = nu I - M(mu) - A_tau e^{-nu tau}
std::array<std::array<cplx, 2>, 2> char_matrix(cplx nu, double mu, double tau, const ModelParams& p,
                                               const SteadyState& ss, const KineticForms& F) {
  std::array<std::array<cplx, 2>, 2> D{};
  D[0][0] = nu + p.d1 * mu - F.f_u;
  D[0][1] = p.chi * ss.u_star * mu - F.f_v;
  D[1][0] = -F.g_w * std::exp(-nu * tau);
  D[1][1] = nu + p.d2 * mu - F.g_v;
  return D;
}

double condition_2x2(const std::array<std::array<cplx, 2>, 2>& D) {
  // singular values from the Hermitian matrix D^H D
  const double a = std::norm(D[0][0]) + std::norm(D[1][0]);
  const double c = std::norm(D[0][1]) + std::norm(D[1][1]);
  const cplx b = std::conj(D[0][0]) * D[0][1] + std::conj(D[1][0]) * D[1][1];
  const double tr = a + c;
  const double det = std::abs(D[0][0] * D[1][1] - D[0][1] * D[1][0]);
  const double disc = std::sqrt(std::max(0.0, 0.25 * (a - c) * (a - c) + std::norm(b)));
  const double s_max2 = 0.5 * tr + disc;
  if (det == 0.0) return std::numeric_limits<double>::infinity();
  // s_min = det / s_max
  const double s_max = std::sqrt(s_max2);
  return s_max * s_max / det;
}

struct ExcitedMode {
  EigenMode e;
  Parity parity;
  Comp field;
};

std::vector<ExcitedMode> excited_modes(const Context& ctx, int n, int M, double R) {
  std::vector<ExcitedMode> out;
  for (int m = 0; m <= M; ++m) {
    EigenMode e = eigenmode(0, m, R);
    out.push_back({e, Parity::Cos, ctx.mode(e, Parity::Cos)});
  }
  for (int m = 1; m <= M; ++m) {
    EigenMode e = eigenmode(2 * n, m, R);
    out.push_back({e, Parity::Cos, ctx.mode(e, Parity::Cos)});
    out.push_back({e, Parity::Sin, ctx.mode(e, Parity::Sin)});
  }
  return out;
}

ModalCorrection solve_modes(const Context& ctx, const std::vector<ExcitedMode>& modes, const Pair& rhs, cplx nu,
                            double tau, const ModelParams& p, const SteadyState& ss, const KineticForms& F,
                            const NormalFormOptions& opts, double& max_cond, double& max_res) {
  ModalCorrection mc;
  for (const auto& em : modes) {
    ModalCorrection::Term t;
    t.n = em.e.n;
    t.m = em.e.m;
    t.parity = em.parity;
    t.mu = em.e.lambda;
    t.rhs = {ctx.integrate(rhs.u, em.field.val), ctx.integrate(rhs.v, em.field.val)};
    const auto D = char_matrix(nu, t.mu, tau, p, ss, F);
    t.cond = condition_2x2(D);
    if (!(t.cond <= opts.resonance_cond)) {
      throw ResonanceError("resonant correction at mode (" + std::to_string(t.n) + "," + std::to_string(t.m) +
                           "), frequency " + std::to_string(nu.imag()) + ": condition number " +
                           std::to_string(t.cond));
    }
    max_cond = std::max(max_cond, t.cond);
    const cplx det = D[0][0] * D[1][1] - D[0][1] * D[1][0];
    t.coeff = {(D[1][1] * t.rhs[0] - D[0][1] * t.rhs[1]) / det, (D[0][0] * t.rhs[1] - D[1][0] * t.rhs[0]) / det};
    const cplx r0 = D[0][0] * t.coeff[0] + D[0][1] * t.coeff[1] - t.rhs[0];
    const cplx r1 = D[1][0] * t.coeff[0] + D[1][1] * t.coeff[1] - t.rhs[1];
    const double scale = std::max({std::abs(t.rhs[0]), std::abs(t.rhs[1]), 1e-300});
    max_res = std::max(max_res, std::max(std::abs(r0), std::abs(r1)) / scale);
    mc.terms.push_back(t);
  }
  return mc;
}

Arg correction_arg(const Context& ctx, const ModalCorrection& mc, const std::vector<ExcitedMode>& modes,
                   cplx delay_phase) {
  Arg a;
  a.u.resize(ctx.size());
  a.v.resize(ctx.size());
  for (std::size_t k = 0; k < mc.terms.size(); ++k) {
    a.u.axpy(mc.terms[k].coeff[0], modes[k].field);
    a.v.axpy(mc.terms[k].coeff[1], modes[k].field);
  }
  a.u_tau.resize(ctx.size());
  for (std::size_t k = 0; k < ctx.size(); ++k) a.u_tau[k] = delay_phase * a.u.val[k];
  return a;
}

double center_projection(const Context& ctx, const Pair& b, const EigenMode& e) {
  double worst = 0.0;
  for (Parity par : {Parity::Cos, Parity::Sin}) {
    const Comp phi = ctx.mode(e, par);
    worst = std::max({worst, std::abs(ctx.integrate(b.u, phi.val)), std::abs(ctx.integrate(b.v, phi.val))});
  }
  return worst;
}

struct Pipeline {
  Context ctx;
  EigenMode e;
  Comp s;
  Arg psi, psib;
  std::vector<ExcitedMode> modes;

  Pipeline(const KernelBasis& kb, const ModelParams& p, const NormalFormOptions& opts)
      : ctx(p.R, kb.n, opts), e(eigenmode(kb.n, kb.m, p.R)) {
    if (opts.radial_modes < 1) throw ConfigError("normal form: radial_modes must be >= 1");
    s = spatial_profile(ctx, kb, e);
    psi = psi_arg(kb, s);
    psib = conj(psi);
    modes = excited_modes(ctx, kb.n, opts.radial_modes, p.R);
  }
};

Corrections corrections_on(const Pipeline& pl, const KernelBasis& kb, const ModelParams& p, const SteadyState& ss,
                           const KineticForms& F, const NormalFormOptions& opts) {
  Corrections c;
  const Pair b11 = quadratic(F, pl.psi, pl.psib);
  const Pair b20 = quadratic(F, pl.psi, pl.psi);
  c.W11 = solve_modes(pl.ctx, pl.modes, b11, 0.0, kb.tau, p, ss, F, opts, c.max_cond, c.max_solve_residual);
  c.W20 = solve_modes(pl.ctx, pl.modes, b20, cplx(0.0, 2.0 * kb.omega), kb.tau, p, ss, F, opts, c.max_cond,
                      c.max_solve_residual);
  c.range_residual_11 = center_projection(pl.ctx, b11, pl.e);
  c.range_residual_20 = center_projection(pl.ctx, b20, pl.e);
  return c;
}

cplx g21_on(const Pipeline& pl, const KernelBasis& kb, const KineticForms& F, const Corrections& corr) {
  if (corr.W11.terms.size() != pl.modes.size() || corr.W20.terms.size() != pl.modes.size()) {
    throw ConfigError("g21: corrections were computed with a different truncation");
  }
  const Arg w11 = correction_arg(pl.ctx, corr.W11, pl.modes, 1.0);
  const Arg w20 = correction_arg(pl.ctx, corr.W20, pl.modes, std::exp(cplx(0.0, -2.0 * kb.omega * kb.tau)));
  const Pair c3 = cubic(F, pl.psi, pl.psi, pl.psib);
  const Pair q1 = quadratic(F, pl.psi, w11);
  const Pair q2 = quadratic(F, pl.psib, w20);
  const std::size_t n = pl.ctx.size();
  std::vector<cplx> tu(n), tv(n);
  for (std::size_t k = 0; k < n; ++k) {
    tu[k] = c3.u[k] + 2.0 * q1.u[k] + q2.u[k];
    tv[k] = c3.v[k] + 2.0 * q1.v[k] + q2.v[k];
  }
  // S* = S / <S, S>; projection <T, S*> = sum w T conj(S*)
  std::vector<cplx> sconj(n);
  double ss_norm = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    ss_norm += pl.ctx.weight[k] * std::norm(pl.s.val[k]);
    sconj[k] = std::conj(pl.s.val[k]);
  }
  const cplx pu = pl.ctx.integrate(tu, sconj) / ss_norm;
  const cplx pv = pl.ctx.integrate(tv, sconj) / ss_norm;
  return kb.Y[0] * pu + kb.Y[1] * pv;
}

}  // namespace

Corrections w_corrections(const KernelBasis& kb, const ModelParams& p, const SteadyState& ss, const KineticForms& forms,
                          const NormalFormOptions& opts) {
  const Pipeline pl(kb, p, opts);
  return corrections_on(pl, kb, p, ss, forms, opts);
}

std::complex<double> compute_g21(const KernelBasis& kb, const ModelParams& p, const SteadyState& /*ss*/,
                                 const KineticForms& forms, const Corrections& corr, const NormalFormOptions& opts) {
  const Pipeline pl(kb, p, opts);
  return g21_on(pl, kb, forms, corr);
}

NormalFormResult branch_coefficients(const HopfPoint& hp, std::complex<double> g21, Branch branch) {
  NormalFormResult r;
  r.n = hp.n;
  r.m = hp.m;
  r.k = hp.k;
  r.branch = branch;
  r.omega = hp.omega_star;
  r.tau_c = hp.tau_c;
  r.gamma_prime = hp.gamma_prime;
  r.g21 = g21;
  const double re = hp.gamma_prime.real();
  r.tau_prime0 = g21.real() / re;
  r.rho_prime0 = (hp.gamma_prime * std::conj(g21)).imag() / re;
  r.supercritical = r.tau_prime0 < 0;
  r.predicted_side = r.tau_prime0 < 0 ? 1 : (r.tau_prime0 > 0 ? -1 : 0);
  return r;
}

NormalFormReport normal_form(const ModelParams& p, const HopfPoint& hp, Branch branch, const NormalFormOptions& opts,
                             double gauge) {
  const SteadyState ss = steady_state(p);
  const KineticForms forms = kinetic_forms(ss, p);
  NormalFormReport rep;
  rep.basis = kernel_basis(hp, p, ss, branch, gauge);
  const Pipeline pl(rep.basis, p, opts);
  rep.corrections = corrections_on(pl, rep.basis, p, ss, forms, opts);
  rep.result = branch_coefficients(hp, g21_on(pl, rep.basis, forms, rep.corrections), branch);
  return rep;
}

std::array<std::array<cplx, 4>, 4> dual_pairing(const KernelBasis& kb, const ModelParams& p, const SteadyState& ss,
                                                const NormalFormOptions& opts) {
  if (opts.pairing_time_nodes < 3 || opts.pairing_delay_nodes < 1) {
    throw ConfigError("dual pairing: need >= 3 time nodes and >= 1 delay node");
  }
  const Context ctx(p.R, kb.n, opts);
  const EigenMode e = eigenmode(kb.n, kb.m, p.R);
  const Comp phi[2] = {ctx.mode(e, Parity::Cos), ctx.mode(e, Parity::Sin)};

  struct Elem {
    int sign;
    cvec2 vec;
    int spatial;
  };
  const cvec2 v1c = {std::conj(kb.V1[0]), std::conj(kb.V1[1])};
  const cvec2 v2c = {std::conj(kb.V2[0]), std::conj(kb.V2[1])};
  const Elem basis[4] = {{1, kb.V1, 0}, {-1, v1c, 0}, {1, kb.V1, 1}, {-1, v1c, 1}};
  const Elem adjoint[4] = {{1, kb.V2, 0}, {-1, v2c, 0}, {1, kb.V2, 1}, {-1, v2c, 1}};

  std::vector<double> gx, gw;
  gauss_legendre(opts.pairing_delay_nodes, gx, gw);
  const double w = kb.omega, tau = kb.tau, period = 2.0 * std::numbers::pi / w;
  const int nt = opts.pairing_time_nodes;

  std::array<std::array<cplx, 4>, 4> P{};
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      const auto& a = adjoint[i];
      const auto& b = basis[j];
      auto phi_at = [&](double t, double xi) {
        const cplx ph = std::exp(cplx(0.0, b.sign * w * (t + xi)));
        return cvec2{ph * b.vec[0], ph * b.vec[1]};
      };
      auto adj_at = [&](double t, double s) {
        const cplx ph = std::exp(cplx(0.0, a.sign * w * (t + s)));
        return cvec2{ph * a.vec[0], ph * a.vec[1]};
      };
      cplx temporal = 0.0;
      for (int q = 0; q < nt; ++q) {
        const double t = period * q / nt;
        const cvec2 f0 = phi_at(t, 0.0), g0 = adj_at(t, 0.0);
        cplx term = std::conj(g0[0]) * f0[0] + std::conj(g0[1]) * f0[1];
        for (std::size_t l = 0; l < gx.size(); ++l) {
          const double xi = -0.5 * tau * (1.0 - gx[l]);  // maps [-1, 1] to [-tau, 0]
          const cvec2 f = phi_at(t, xi);
          const cvec2 g = adj_at(t, xi + tau);
          // A_tau f = (0, a21 f_u)
          term += 0.5 * tau * gw[l] * std::conj(g[1]) * ss.a21 * f[0];
        }
        temporal += term;
      }
      temporal /= static_cast<double>(nt);
      const cplx spatial = ctx.integrate(phi[b.spatial].val, phi[a.spatial].val);  // real eigenfunctions
      P[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = temporal * spatial;
    }
  }
  return P;
}

}  // namespace rmdisk
