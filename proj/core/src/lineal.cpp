#include "rmdisk/lineal.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "rmdisk/errors.hpp"

namespace rmdisk {

using cplx = std::complex<double>;

CharCoeffs char_coeffs(const ModelParams& p, const SteadyState& ss, double lambda, int n, int m) {
  CharCoeffs c;
  c.A = (p.d1 + p.d2) * lambda - ss.a11;
  c.B = ss.a21 * (p.chi * ss.u_star * lambda + p.d);
  c.C = (p.d1 * lambda - ss.a11) * p.d2 * lambda;
  c.n = n;
  c.m = m;
  c.lambda = lambda;
  c.chi = p.chi;
  return c;
}

cplx char_value(cplx gamma, const CharCoeffs& c, double tau) {
  return gamma * gamma + c.A * gamma + c.B * std::exp(-gamma * tau) + c.C;
}

cplx char_dgamma(cplx gamma, const CharCoeffs& c, double tau) {
  return 2.0 * gamma + c.A - tau * c.B * std::exp(-gamma * tau);
}

H2Flags check_h2(const CharCoeffs& c) {
  H2Flags f;
  f.c_minus_b_negative = c.C - c.B < 0;
  f.c2_minus_b2_negative = c.C * c.C - c.B * c.B < 0;
  f.positive_frequency = hopf_frequency(c).has_value();
  return f;
}

std::optional<double> hopf_frequency(const CharCoeffs& c) {
  const double p = c.A * c.A - 2.0 * c.C;
  const double q = c.C * c.C - c.B * c.B;
  const double disc = p * p - 4.0 * q;
  if (disc < 0) return std::nullopt;
  const double s = std::sqrt(disc);
  double x;
  if (p >= 0) {
    if (p + s <= 0) return std::nullopt;
    x = -2.0 * q / (p + s);
  } else {
    x = 0.5 * (-p + s);
  }
  if (!(x > 0)) return std::nullopt;
  // one Newton step on x^2 + p x + q
  const double h = x * x + p * x + q;
  const double dh = 2.0 * x + p;
  if (dh != 0.0) x -= h / dh;
  if (!(x > 0)) return std::nullopt;
  return std::sqrt(x);
}

std::vector<double> critical_delays(const CharCoeffs& c, double omega, int k_max) {
  if (!(omega > 0)) throw NumericalError("critical_delays: omega must be > 0");
  if (c.B == 0.0) throw NumericalError("critical_delays: B = 0, no delay-induced crossing");
  const double cosv = (omega * omega - c.C) / c.B;
  const double sinv = c.A * omega / c.B;
  if (std::abs(cosv) > 1.0 + 1e-9) {
    throw NumericalError("critical_delays: |(omega^2 - C)/B| = " + std::to_string(std::abs(cosv)) +
                         " exceeds 1; omega is not a crossing frequency");
  }
  double theta0 = std::atan2(sinv, cosv);
  if (theta0 <= 0.0) theta0 += 2.0 * std::numbers::pi;
  std::vector<double> taus;
  taus.reserve(static_cast<std::size_t>(k_max) + 1);
  for (int k = 0; k <= k_max; ++k) taus.push_back((theta0 + 2.0 * std::numbers::pi * k) / omega);
  return taus;
}

std::complex<double> root_velocity(const CharCoeffs& c, double omega, double tau) {
  const cplx g(0.0, omega);
  const cplx e = c.B * std::exp(-g * tau);
  const cplx den = 2.0 * g + c.A - tau * e;
  if (std::abs(den) < 1e-14 * (1.0 + std::abs(c.A) + std::abs(c.B))) {
    throw NumericalError("root_velocity: degenerate root (dGamma/dgamma vanishes)");
  }
  return g * e / den;
}

double transversality(const CharCoeffs& c, double omega, double tau) {
  return root_velocity(c, omega, tau).real();
}

cplx newton_root(const CharCoeffs& c, double tau, cplx guess, double tol, int max_iter) {
  cplx g = guess;
  for (int it = 0; it < max_iter; ++it) {
    const cplx f = char_value(g, c, tau);
    const cplx df = char_dgamma(g, c, tau);
    if (df == cplx(0.0)) break;
    const cplx step = f / df;
    g -= step;
    if (!std::isfinite(g.real()) || !std::isfinite(g.imag())) break;
    if (std::abs(step) < tol * (1.0 + std::abs(g))) return g;
  }
  throw NumericalError("newton_root: no convergence");
}

cplx rightmost_root(const CharCoeffs& c, double tau, double im_max) {
  bool found = false;
  cplx best;
  for (double re : {-1.0, -0.3, 0.0, 0.2, 1.0, 2.0}) {
    for (int k = 0; k <= 24; ++k) {
      const cplx guess(re, im_max * k / 24.0);
      try {
        const cplx g = newton_root(c, tau, guess);
        if (g.imag() < -1e-12) continue;
        if (std::abs(char_value(g, c, tau)) > 1e-10) continue;
        if (!found || g.real() > best.real()) {
          best = g;
          found = true;
        }
      } catch (const NumericalError&) {
      }
    }
  }
  if (!found) throw NumericalError("rightmost_root: no root located");
  return best;
}

namespace {

double segment_winding(const CharCoeffs& c, double tau, cplx a, cplx b, cplx fa, cplx fb, int depth) {
  const double d = std::arg(fb / fa);
  if (std::abs(d) < std::numbers::pi / 8 || depth > 40) return d;
  const cplx mid = 0.5 * (a + b);
  const cplx fm = char_value(mid, c, tau);
  return segment_winding(c, tau, a, mid, fa, fm, depth + 1) + segment_winding(c, tau, mid, b, fm, fb, depth + 1);
}

double side_winding(const CharCoeffs& c, double tau, cplx a, cplx b) {
  constexpr int kBase = 400;
  double total = 0.0;
  cplx prev = a;
  cplx fprev = char_value(a, c, tau);
  for (int i = 1; i <= kBase; ++i) {
    const cplx z = a + (b - a) * (static_cast<double>(i) / kBase);
    const cplx fz = char_value(z, c, tau);
    if (fz == cplx(0.0)) throw NumericalError("count_roots_in_box: root on the contour");
    total += segment_winding(c, tau, prev, z, fprev, fz, 0);
    prev = z;
    fprev = fz;
  }
  return total;
}

}  // namespace

int count_roots_in_box(const CharCoeffs& c, double tau, double re_lo, double re_hi, double im_lo,
                       double im_hi) {
  const cplx z0(re_lo, im_lo), z1(re_hi, im_lo), z2(re_hi, im_hi), z3(re_lo, im_hi);
  const double total = side_winding(c, tau, z0, z1) + side_winding(c, tau, z1, z2) +
                       side_winding(c, tau, z2, z3) + side_winding(c, tau, z3, z0);
  return static_cast<int>(std::lround(total / (2.0 * std::numbers::pi)));
}

std::vector<HopfPoint> hopf_points(const ModelParams& p, const SteadyState& ss, const EigenMode& mode,
                                   int k_max) {
  const CharCoeffs c = char_coeffs(p, ss, mode.lambda, mode.n, mode.m);
  const auto w = hopf_frequency(c);
  if (!w) return {};
  double omega = *w;
  double tau0 = critical_delays(c, omega, 0).front();

  // Joint Newton polish of (omega, tau0) on Gamma(i omega; tau) = 0.
  for (int it = 0; it < 4; ++it) {
    const cplx g(0.0, omega);
    const cplx f = char_value(g, c, tau0);
    if (std::abs(f) < 1e-16) break;
    const cplx d_omega = cplx(0.0, 1.0) * char_dgamma(g, c, tau0);
    const cplx d_tau = -g * c.B * std::exp(-g * tau0);
    const double det = d_omega.real() * d_tau.imag() - d_tau.real() * d_omega.imag();
    if (det == 0.0) break;
    const double dw = (f.real() * d_tau.imag() - d_tau.real() * f.imag()) / det;
    const double dt = (d_omega.real() * f.imag() - f.real() * d_omega.imag()) / det;
    omega -= dw;
    tau0 -= dt;
  }

  const H2Flags flags = check_h2(c);
  std::vector<HopfPoint> out;
  for (int k = 0; k <= k_max; ++k) {
    HopfPoint h;
    h.n = mode.n;
    h.m = mode.m;
    h.k = k;
    h.lambda = mode.lambda;
    h.chi = p.chi;
    h.omega_star = omega;
    h.tau_c = tau0 + 2.0 * std::numbers::pi * k / omega;
    h.residual = std::abs(char_value(cplx(0.0, omega), c, h.tau_c));
    if (!(h.residual < 1e-10)) {
      throw NumericalError("hopf_points: residual " + std::to_string(h.residual) + " at mode (" +
                           std::to_string(mode.n) + "," + std::to_string(mode.m) + ")");
    }
    h.gamma_prime = root_velocity(c, omega, h.tau_c);
    h.transversality = h.gamma_prime.real();
    h.flags = flags;
    out.push_back(h);
  }
  return out;
}

ChiTauCurves chi_tau_curves(const ModelParams& p, const std::vector<EigenMode>& modes, double chi_lo,
                            double chi_hi, int samples, int k_max) {
  if (samples < 1) throw ConfigError("chi_tau_curves: samples must be >= 1");
  ChiTauCurves out;
  const SteadyState ss = steady_state(p);
  for (const auto& mode : modes) {
    ModeOnset onset{mode.n, mode.m, std::nullopt};
    std::vector<CurvePoint> per_mode;
    for (int s = 0; s < samples; ++s) {
      const double chi = samples == 1 ? chi_lo : chi_lo + (chi_hi - chi_lo) * s / (samples - 1);
      ModelParams q = p;
      q.chi = chi;
      const auto hps = hopf_points(q, ss, mode, k_max);
      if (hps.empty()) continue;
      if (!onset.chi_lower) onset.chi_lower = chi;
      for (const auto& h : hps) {
        per_mode.push_back({chi, h.n, h.m, h.k, h.omega_star, h.tau_c, h.transversality, h.residual});
      }
    }
    std::stable_sort(per_mode.begin(), per_mode.end(),
                     [](const CurvePoint& a, const CurvePoint& b) { return a.k < b.k; });
    out.points.insert(out.points.end(), per_mode.begin(), per_mode.end());
    out.onsets.push_back(onset);
  }
  return out;
}

std::optional<HopfPoint> first_hopf(const ModelParams& p, const SteadyState& ss,
                                    const std::vector<EigenMode>& modes) {
  std::optional<HopfPoint> best;
  for (const auto& mode : modes) {
    const auto hps = hopf_points(p, ss, mode, 0);
    if (hps.empty()) continue;
    if (!best || hps.front().tau_c < best->tau_c) best = hps.front();
  }
  return best;
}

}  // namespace rmdisk
