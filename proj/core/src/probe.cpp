#include "rmdisk/probe.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "rmdisk/diagnostics.hpp"

#include "rmdisk/errors.hpp"
#include "rmdisk/spectrum.hpp"

namespace rmdisk {

std::complex<double> fit_growth(const std::vector<std::vector<double>>& series, double h, double* rms) {
  // least squares for x[k+2] = c1 x[k+1] + c2 x[k], each series scaled to unit peak
  double a11 = 0, a12 = 0, a22 = 0, b1 = 0, b2 = 0, total = 0;
  bool all_constant = true;
  std::vector<std::vector<double>> scaled;
  for (const auto& s : series) {
    if (s.size() < 4) throw NumericalError("fit_growth: need at least 4 samples");
    double peak = 0.0;
    for (double x : s) peak = std::max(peak, std::abs(x));
    if (peak == 0.0) continue;
    std::vector<double> y(s.size());
    for (std::size_t k = 0; k < s.size(); ++k) y[k] = s[k] / peak;
    for (double x : y) {
      if (std::abs(x - y[0]) > 1e-14) all_constant = false;
    }
    scaled.push_back(std::move(y));
  }
  if (scaled.empty()) throw NumericalError("fit_growth: all series vanish");
  if (all_constant) {
    if (rms) *rms = 0.0;
    return {0.0, 0.0};
  }
  for (const auto& y : scaled) {
    for (std::size_t k = 0; k + 2 < y.size(); ++k) {
      a11 += y[k + 1] * y[k + 1];
      a12 += y[k + 1] * y[k];
      a22 += y[k] * y[k];
      b1 += y[k + 2] * y[k + 1];
      b2 += y[k + 2] * y[k];
      total += y[k + 2] * y[k + 2];
    }
  }
  const double det = a11 * a22 - a12 * a12;
  if (!(std::abs(det) > 1e-300)) throw NumericalError("fit_growth: singular predictor system");
  const double c1 = (b1 * a22 - b2 * a12) / det;
  const double c2 = (a11 * b2 - a12 * b1) / det;
  if (rms) {
    double res = 0.0;
    std::size_t count = 0;
    for (const auto& y : scaled) {
      for (std::size_t k = 0; k + 2 < y.size(); ++k) {
        const double e = y[k + 2] - c1 * y[k + 1] - c2 * y[k];
        res += e * e;
        ++count;
      }
    }
    *rms = std::sqrt(res / std::max(total, 1e-300));
  }
  // z^2 - c1 z - c2 = 0
  const double disc = c1 * c1 + 4.0 * c2;
  std::complex<double> z;
  if (disc < 0) {
    z = {0.5 * c1, 0.5 * std::sqrt(-disc)};
  } else {
    const double s = std::sqrt(disc);
    z = std::abs(0.5 * (c1 + s)) >= std::abs(0.5 * (c1 - s)) ? 0.5 * (c1 + s) : 0.5 * (c1 - s);
    if (z.real() <= 0) throw NumericalError("fit_growth: dominant root is not positive");
  }
  return std::log(z) / h;
}

ProbeResult linear_growth_probe(const ModelParams& p, int n, int m, double tau, const ProbeOptions& opts) {
  if (!(opts.sample_interval > 0) || !(opts.t_window > 0) || opts.t_transient < 0) {
    throw ConfigError("probe: sample_interval and t_window must be > 0, t_transient >= 0");
  }
  ModelParams q = p;
  q.tau = tau;
  SimConfig cfg;
  cfg.nr = opts.nr;
  cfg.ntheta = opts.ntheta;
  cfg.dt = opts.dt;
  cfg.t_end = std::max(opts.t_transient + opts.t_window, tau) + 1.0;
  cfg.keep_frames = false;
  cfg.scheme = opts.scheme;
  cfg.initial.kind = InitialHistory::Kind::Eigenmode;
  cfg.initial.amplitude = opts.amplitude;
  cfg.initial.mode_n = n;
  cfg.initial.mode_m = m;
  cfg.initial.mode_parity = Parity::Cos;
  Simulator sim(q, cfg);
  const PolarGrid& g = sim.grid();
  const SteadyState& ss = sim.steady();

  const EigenMode e = eigenmode(n, m, q.R);
  std::vector<double> w(g.size());
  for (int i = 0; i < g.nr; ++i) {
    const double rad = e.norm_c * e.radial(g.r(i)) * g.area(i);
    for (int j = 0; j < g.ntheta; ++j) w[g.idx(i, j)] = rad * e.angular(Parity::Cos, g.signed_theta(j));
  }
  auto project = [&](const Field& f, double& au, double& av) {
    au = av = 0.0;
    for (std::size_t k = 0; k < w.size(); ++k) {
      au += w[k] * (f.u[k] - ss.u_star);
      av += w[k] * (f.v[k] - ss.v_star);
    }
  };

  ProbeResult res;
  res.dt = sim.dt();
  double au0, av0;
  project(sim.state(), au0, av0);
  const double start = std::hypot(au0, av0);
  if (start == 0.0 && q.R > 0 && (n > 0 || m > 0)) throw NumericalError("probe: seed has no projection on the mode");
  double peak = start;
  const int nsamples = static_cast<int>(std::floor(opts.t_window / opts.sample_interval + 1e-9)) + 1;
  for (int s = 0; s < nsamples; ++s) {
    const double t = opts.t_transient + s * opts.sample_interval;
    sim.advance_to(t, [&](double, const Field& f) {
      double au, av;
      project(f, au, av);
      peak = std::max(peak, std::hypot(au, av));
    });
    double au, av;
    project(sim.state(), au, av);
    res.t.push_back(sim.time());
    res.a_u.push_back(au);
    res.a_v.push_back(av);
  }
  res.growth_factor = start > 0 ? peak / start : 1.0;
  if (res.growth_factor > opts.max_growth) {
    throw NumericalError("probe: projection grew by " + std::to_string(res.growth_factor) +
                         "x, beyond the linear-regime limit");
  }
  // samples fall on whole steps; their spacing is the snapped interval
  const double h = res.t.size() > 1 ? (res.t.back() - res.t.front()) / static_cast<double>(res.t.size() - 1)
                                    : opts.sample_interval;
  res.gamma = fit_growth({res.a_u, res.a_v}, h, &res.fit_rms);
  return res;
}

namespace {

// u-projections of a run onto phi^c and phi^s of mode (n, m), sampled every h time units.
struct ModalSeries {
  double h = 0.0;
  std::vector<double> t, ac, as;
};

ModalSeries modal_run(const ModelParams& q, int n, int m, int nr, int ntheta, double dt, double t_end,
                      const InitialHistory& ini, const Scheme& scheme, double h) {
  SimConfig cfg;
  cfg.nr = nr;
  cfg.ntheta = ntheta;
  cfg.dt = dt;
  cfg.t_end = std::max(t_end, q.tau + dt);
  cfg.keep_frames = false;
  cfg.scheme = scheme;
  cfg.initial = ini;
  Simulator sim(q, cfg);
  const PolarGrid& g = sim.grid();
  const EigenMode e = eigenmode(n, m, q.R);
  std::vector<double> wc(g.size()), ws(g.size());
  for (int i = 0; i < g.nr; ++i) {
    const double rad = e.radial(g.r(i)) * g.area(i);
    for (int j = 0; j < g.ntheta; ++j) {
      wc[g.idx(i, j)] = rad * e.norm_c * e.angular(Parity::Cos, g.signed_theta(j));
      ws[g.idx(i, j)] = n > 0 ? rad * e.norm(Parity::Sin) * e.angular(Parity::Sin, g.signed_theta(j)) : 0.0;
    }
  }
  ModalSeries out;
  const double us = sim.steady().u_star;
  auto record = [&] {
    double c = 0, s = 0;
    const auto& u = sim.state().u;
    for (std::size_t k = 0; k < u.size(); ++k) {
      c += wc[k] * (u[k] - us);
      s += ws[k] * (u[k] - us);
    }
    out.t.push_back(sim.time());
    out.ac.push_back(c);
    out.as.push_back(s);
  };
  record();
  const int samples = static_cast<int>(std::floor(t_end / h + 1e-9));
  for (int k = 1; k <= samples; ++k) {
    sim.advance_to(k * h);
    record();
  }
  out.h = (out.t.back() - out.t.front()) / static_cast<double>(out.t.size() - 1);
  return out;
}

// Frequency of the projections over [t0, t1].
double series_omega(const ModalSeries& s, double t0, double t1) {
  std::vector<std::complex<double>> z;
  for (std::size_t k = 0; k < s.t.size(); ++k) {
    if (s.t[k] >= t0 - 1e-9 && s.t[k] <= t1 + 1e-9) z.emplace_back(s.ac[k], s.as[k]);
  }
  if (z.size() < 8) return 0.0;
  return recurrence_frequency(z, s.h);
}

// RMS of (ac, as) over [t0, t0 + len).
double envelope(const ModalSeries& s, double t0, double len) {
  double sum = 0.0;
  int cnt = 0;
  for (std::size_t k = 0; k < s.t.size(); ++k) {
    if (s.t[k] >= t0 - 1e-9 && s.t[k] < t0 + len - 1e-9) {
      sum += s.ac[k] * s.ac[k] + s.as[k] * s.as[k];
      ++cnt;
    }
  }
  if (cnt == 0) throw NumericalError("envelope: empty window");
  return std::sqrt(sum / cnt);
}

InitialHistory eigen_seed(int n, int m, double amplitude) {
  InitialHistory ini;
  ini.kind = InitialHistory::Kind::Eigenmode;
  ini.amplitude = amplitude;
  ini.mode_n = n;
  ini.mode_m = m;
  ini.mode_parity = Parity::Cos;
  return ini;
}

}  // namespace

OnsetSample long_run_ratio(const ModelParams& p, int n, int m, double tau, const OnsetOptions& opts) {
  if (!(opts.t_end > opts.t_skip) || opts.t_skip < 0) throw ConfigError("onset: need 0 <= t_skip < t_end");
  ModelParams q = p;
  q.tau = tau;
  const ModalSeries s = modal_run(q, n, m, opts.nr, opts.ntheta, opts.dt, opts.t_end,
                                  eigen_seed(n, m, opts.amplitude), opts.scheme, 0.5);
  OnsetSample out;
  out.tau = tau;
  out.omega = series_omega(s, opts.t_skip, opts.t_end);
  const double period = out.omega > 0 ? 2.0 * std::numbers::pi / out.omega : 50.0;
  if (opts.t_end - opts.t_skip < 2.0 * period) throw ConfigError("onset: run shorter than two periods after t_skip");
  const double early = envelope(s, opts.t_skip, period);
  const double late = envelope(s, opts.t_end - period, period + 1.0);
  if (!(early > 0) || !std::isfinite(late)) throw NumericalError("onset: degenerate amplitude");
  out.ratio = late / early;
  return out;
}

OnsetResult locate_onset(const ModelParams& p, int n, int m, double tau_lo, double tau_hi, const OnsetOptions& opts) {
  if (!(tau_hi > tau_lo) || tau_lo < 0) throw ConfigError("onset: need 0 <= tau_lo < tau_hi");
  OnsetResult r;
  const OnsetSample lo = long_run_ratio(p, n, m, tau_lo, opts);
  const OnsetSample hi = long_run_ratio(p, n, m, tau_hi, opts);
  r.samples = {lo, hi};
  if (!(lo.ratio < 1.0) || !(hi.ratio > 1.0)) {
    throw NumericalError("onset: bracket [" + std::to_string(tau_lo) + ", " + std::to_string(tau_hi) +
                         "] does not contain a change from decay to growth");
  }
  r.tau_lo = tau_lo;
  r.tau_hi = tau_hi;
  int runs = 2;
  while ((r.tau_hi - r.tau_lo) / (0.5 * (r.tau_hi + r.tau_lo)) > opts.rel_tol && runs < opts.max_runs) {
    const double mid = 0.5 * (r.tau_lo + r.tau_hi);
    const OnsetSample s = long_run_ratio(p, n, m, mid, opts);
    r.samples.push_back(s);
    ++runs;
    (s.ratio > 1.0 ? r.tau_hi : r.tau_lo) = mid;
  }
  r.tau_onset = 0.5 * (r.tau_lo + r.tau_hi);
  double best = INFINITY;
  for (const auto& s : r.samples) {
    if (std::abs(s.tau - r.tau_onset) < best) {
      best = std::abs(s.tau - r.tau_onset);
      r.omega = s.omega;
    }
  }
  return r;
}

SideResult branch_side(const ModelParams& p, int n, int m, double tau, double omega, SeedShape shape,
                       const SideOptions& opts) {
  if (n < 1 || !(omega > 0)) throw ConfigError("branch side: need n >= 1 and omega > 0");
  if (!(opts.large > opts.small) || !(opts.small > 0)) throw ConfigError("branch side: need 0 < small < large");
  ModelParams q = p;
  q.tau = tau;
  const SteadyState ss = steady_state(q);
  const EigenMode e = eigenmode(n, m, q.R);

  auto measure = [&](double amp, double& sigma, double& env) {
    InitialHistory ini;
    if (shape == SeedShape::Standing) {
      ini = eigen_seed(n, m, amp);
    } else {
      ini.kind = InitialHistory::Kind::Custom;
      ini.custom = [&, amp](double t, const PolarGrid& g, Field& f) {
        f.u.assign(g.size(), 0.0);
        f.v.assign(g.size(), ss.v_star);
        for (int i = 0; i < g.nr; ++i) {
          const double rad = e.radial(g.r(i));
          for (int j = 0; j < g.ntheta; ++j) {
            f.u[g.idx(i, j)] = ss.u_star * (1.0 + amp * rad * std::cos(n * g.signed_theta(j) - omega * t));
          }
        }
      };
    }
    const double t_end = opts.t_skip + opts.t_window;
    const ModalSeries s = modal_run(q, n, m, opts.nr, opts.ntheta, opts.dt, t_end, ini, opts.scheme, 0.5);
    const double w = series_omega(s, opts.t_skip, t_end);
    const double period = w > 0 ? 2.0 * std::numbers::pi / w : 2.0 * std::numbers::pi / omega;
    const int periods = static_cast<int>(std::floor(opts.t_window / period));
    if (periods < 3) throw ConfigError("branch side: window shorter than three periods");
    double sx = 0, sy = 0, sxx = 0, sxy = 0, se = 0;
    for (int k = 0; k < periods; ++k) {
      const double t0 = opts.t_skip + k * period;
      const double E = envelope(s, t0, period);
      const double x = t0 + 0.5 * period, y = std::log(E);
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
      se += E;
    }
    const double P = periods;
    sigma = (P * sxy - sx * sy) / (P * sxx - sx * sx);
    env = se / P;
  };

  SideResult r;
  measure(opts.small, r.sigma_small, r.env_small);
  measure(opts.large, r.sigma_large, r.env_large);
  r.landau = (r.sigma_large - r.sigma_small) / (r.env_large * r.env_large - r.env_small * r.env_small);
  r.side = r.landau < 0 ? 1 : (r.landau > 0 ? -1 : 0);
  return r;
}

}  // namespace rmdisk
