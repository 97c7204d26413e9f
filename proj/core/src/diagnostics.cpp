#include "rmdisk/diagnostics.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "rmdisk/errors.hpp"
#include "rmdisk/model.hpp"

namespace rmdisk {

namespace {

using cplx = std::complex<double>;
constexpr double kPi = std::numbers::pi;

double wrap_pi(double a) {
  a = std::fmod(a, kPi);
  return a < 0 ? a + kPi : a;
}

std::vector<cplx> coefficient_series(const FrameWindow& w, int n, const RadiusBand& band) {
  std::vector<cplx> s;
  s.reserve(w.frames.size());
  for (const auto& f : w.frames) s.push_back(angular_spectrum(w.grid, f.u, w.u_star, band, n).at(n));
  return s;
}

double uniform_spacing(const std::vector<double>& t) {
  return (t.back() - t.front()) / static_cast<double>(t.size() - 1);
}

void add_note(WaveReport& r, const std::string& s) {
  if (!r.note.empty()) r.note += "; ";
  r.note += s;
}

}  // namespace

AngularSpectrum angular_spectrum(const PolarGrid& g, const std::vector<double>& u, double u_ref, const RadiusBand& band,
                                 int n_max) {
  if (u.size() != g.size()) throw ConfigError("angular_spectrum: field size does not match the grid");
  n_max = std::clamp(n_max, 0, g.ntheta / 2);
  const double hi = band.r_hi < 0 ? g.R : band.r_hi;
  AngularSpectrum out;
  out.n_max = n_max;
  out.c.assign(2 * static_cast<std::size_t>(n_max) + 1, cplx{});
  std::vector<cplx> ring(static_cast<std::size_t>(n_max) + 1);
  // e^{-2 pi i e / N}; indices k j reduced mod N keep grid rotations exact up to rounding
  std::vector<cplx> table(static_cast<std::size_t>(g.ntheta));
  for (int e = 0; e < g.ntheta; ++e) {
    const double a = 2.0 * kPi * e / g.ntheta;
    table[e] = cplx(std::cos(a), -std::sin(a));
  }
  double wsum = 0.0;
  for (int i = 0; i < g.nr; ++i) {
    const double r = g.r(i);
    if (r < band.r_lo || r > hi) continue;
    std::fill(ring.begin(), ring.end(), cplx{});
    for (int j = 0; j < g.ntheta; ++j) {
      const double x = u[g.idx(i, j)] - u_ref;
      for (int k = 0; k <= n_max; ++k) ring[k] += x * table[static_cast<std::size_t>((k * j) % g.ntheta)];
    }
    for (int k = 0; k <= n_max; ++k) out.c[n_max + k] += r * ring[k] / static_cast<double>(g.ntheta);
    wsum += r;
  }
  if (wsum == 0.0) throw ConfigError("angular_spectrum: radius band contains no cell centre");
  for (int k = 0; k <= n_max; ++k) {
    out.c[n_max + k] /= wsum;
    out.c[n_max - k] = std::conj(out.c[n_max + k]);
  }
  return out;
}

FrameWindow window_from(const Trajectory& tr) {
  FrameWindow w;
  w.grid = tr.grid;
  w.u_star = steady_state(tr.params).u_star;
  w.tau = tr.params.tau;
  w.times = tr.times;
  w.frames = tr.frames;
  return w;
}

FrameWindow trim(const FrameWindow& w, double t_from) {
  FrameWindow out;
  out.grid = w.grid;
  out.u_star = w.u_star;
  out.tau = w.tau;
  for (std::size_t k = 0; k < w.times.size(); ++k) {
    if (w.times[k] >= t_from - 1e-9) {
      out.times.push_back(w.times[k]);
      out.frames.push_back(w.frames[k]);
    }
  }
  return out;
}

GridShift nearest_rotation(const PolarGrid& g, double angle) {
  GridShift s;
  s.requested = angle;
  s.steps = static_cast<int>(std::lround(angle / g.dtheta()));
  s.used = s.steps * g.dtheta();
  return s;
}

SymmetryResidual symmetry_residual(const FrameWindow& w, const SymmetryRelation& rel) {
  const PolarGrid& g = w.grid;
  const int N = g.ntheta;
  const std::size_t K = w.frames.size();
  if (K == 0) throw ConfigError("symmetry_residual: empty window");
  std::vector<double> shifted(g.size());
  double num = 0.0, den = 0.0;
  int used = 0;
  for (std::size_t k = 0; k < K; ++k) {
    const double ts = w.times[k] + rel.time_shift;
    if (ts > w.times.back() + 1e-9 || ts < w.times.front() - 1e-9) continue;
    auto it = std::upper_bound(w.times.begin(), w.times.end(), ts + 1e-9);
    std::size_t hi = static_cast<std::size_t>(it - w.times.begin());
    if (hi >= K) hi = K - 1;
    std::size_t lo = hi > 0 ? hi - 1 : 0;
    double wt = 0.0;
    if (std::abs(w.times[hi] - ts) <= 1e-9) {
      lo = hi;
    } else if (std::abs(w.times[lo] - ts) <= 1e-9) {
      hi = lo;
    } else {
      wt = (ts - w.times[lo]) / (w.times[hi] - w.times[lo]);
    }
    const auto& a = w.frames[lo].u;
    const auto& b = w.frames[hi].u;
    for (int i = 0; i < g.nr; ++i) {
      for (int j = 0; j < N; ++j) {
        int src = rel.reflect ? rel.reflect_index - j : j;
        src = ((src + rel.rotate_steps) % N + N) % N;
        const std::size_t q = g.idx(i, src);
        shifted[g.idx(i, j)] = lo == hi ? a[q] : (1.0 - wt) * a[q] + wt * b[q];
      }
    }
    const auto& u = w.frames[k].u;
    for (int i = 0; i < g.nr; ++i) {
      const double area = g.area(i);
      for (int j = 0; j < N; ++j) {
        const std::size_t q = g.idx(i, j);
        num += area * (shifted[q] - u[q]) * (shifted[q] - u[q]);
        den += area * (u[q] - w.u_star) * (u[q] - w.u_star);
      }
    }
    ++used;
  }
  if (used == 0) throw ConfigError("symmetry_residual: time shift leaves no frame inside the window");
  SymmetryResidual r;
  r.frames_used = used;
  r.value = den > 0 ? std::sqrt(num / den) : (num > 0 ? INFINITY : 0.0);
  return r;
}

double recurrence_frequency(const std::vector<cplx>& s, double h) {
  const std::size_t K = s.size();
  if (K < 4) throw NumericalError("recurrence_frequency: need at least 4 samples");
  // rows: [Re s_k, 1, 0] [p, Re q, Im q]^T = Re(s_{k+1} + s_{k-1}); imaginary rows alike
  Eigen::MatrixXd A(2 * (K - 2), 3);
  Eigen::VectorXd rhs(2 * (K - 2));
  for (std::size_t k = 1; k + 1 < K; ++k) {
    const std::size_t r = 2 * (k - 1);
    const cplx y = s[k + 1] + s[k - 1];
    A(r, 0) = s[k].real();
    A(r, 1) = 1.0;
    A(r, 2) = 0.0;
    rhs(r) = y.real();
    A(r + 1, 0) = s[k].imag();
    A(r + 1, 1) = 0.0;
    A(r + 1, 2) = 1.0;
    rhs(r + 1) = y.imag();
  }
  const Eigen::VectorXd x = A.colPivHouseholderQr().solve(rhs);
  const double c = x(0) / 2.0;
  if (!std::isfinite(c) || std::abs(c) >= 1.0) return 0.0;
  return std::acos(c) / h;
}

SymmetryRelation relation(const WaveReport& rep, const std::string& kind) {
  const auto need = [&](const char* key) -> const GridShift& {
    const auto it = rep.shifts.find(key);
    if (it == rep.shifts.end()) throw ConfigError("wave report has no '" + std::string(key) + "' shift");
    return it->second;
  };
  if (kind == "rotating-ccw" || kind == "rotating-cw") {
    const GridShift& q = need("rotation");
    const double s = q.used / (rep.omega / rep.n);
    return {kind == "rotating-ccw" ? q.steps : -q.steps, false, 0, s};
  }
  if (kind == "standing") return {-need("standing").steps, true, need("axis").steps, rep.period / 2.0};
  throw ConfigError("unknown relation '" + kind + "'");
}

WaveReport classify(const FrameWindow& w_in, const ClassifyOptions& opts) {
  WaveReport rep;
  rep.tag = "inconclusive";
  if (w_in.frames.size() < 8 || w_in.frames.size() != w_in.times.size()) {
    add_note(rep, "fewer than 8 frames");
    return rep;
  }
  const PolarGrid& g = w_in.grid;
  const int n_max = std::clamp(opts.n_max, 1, g.ntheta / 2);

  auto dominant = [&](const FrameWindow& w) {
    std::vector<double> pw(static_cast<std::size_t>(n_max) + 1, 0.0);
    for (const auto& f : w.frames) {
      const AngularSpectrum sp = angular_spectrum(g, f.u, w.u_star, opts.band, n_max);
      for (int k = 1; k <= n_max; ++k) pw[k] += sp.power(k);
    }
    int best = 1;
    for (int k = 2; k <= n_max; ++k) {
      if (pw[k] > pw[best]) best = k;
    }
    return std::make_pair(best, pw[best] / static_cast<double>(w.frames.size()));
  };

  // first pass on the whole window fixes the period used for trimming
  const int n0 = dominant(w_in).first;
  const double h0 = uniform_spacing(w_in.times);
  const double omega0 = recurrence_frequency(coefficient_series(w_in, n0, opts.band), h0);
  double cut = opts.trim;
  if (cut < 0) cut = std::max(omega0 > 0 ? 5.0 * 2.0 * kPi / omega0 : 0.0, 20.0 * w_in.tau);
  const FrameWindow w = trim(w_in, w_in.times.front() + cut);
  rep.frames = static_cast<int>(w.frames.size());
  if (w.frames.size() < 8) {
    add_note(rep, "fewer than 8 frames after trimming " + std::to_string(cut) + " time units");
    return rep;
  }
  rep.t_start = w.times.front();
  rep.t_end = w.times.back();

  double amp_sum = 0.0;
  std::vector<double> amp(w.frames.size());
  for (std::size_t k = 0; k < w.frames.size(); ++k) {
    amp[k] = l2_deviation(g, w.frames[k].u, w.u_star);
    amp_sum += amp[k];
  }
  rep.amplitude = amp_sum / static_cast<double>(amp.size());

  auto [n, pn] = dominant(w);
  rep.n = n;
  if (!(pn > 1e-28 * w.u_star * w.u_star)) {
    rep.tag = "other";
    add_note(rep, "no angular structure");
    return rep;
  }
  const double h = uniform_spacing(w.times);
  const std::vector<cplx> s = coefficient_series(w, n, opts.band);
  rep.omega = recurrence_frequency(s, h);
  if (!(rep.omega > 0)) {
    rep.tag = "other";
    add_note(rep, "dominant coefficient is not oscillatory");
    return rep;
  }
  rep.period = 2.0 * kPi / rep.omega;
  const double span = rep.t_end - rep.t_start;
  if (span < 3.0 * rep.period) {
    add_note(rep, "window shorter than 3 periods after trimming");
    return rep;
  }

  // s(t) ~ a e^{-i w t} + b e^{i w t} + c
  {
    const std::size_t K = s.size();
    Eigen::MatrixXcd A(K, 3);
    Eigen::VectorXcd y(K);
    for (std::size_t k = 0; k < K; ++k) {
      const double t = w.times[k] - rep.t_start;
      A(k, 0) = std::exp(cplx(0.0, -rep.omega * t));
      A(k, 1) = std::exp(cplx(0.0, rep.omega * t));
      A(k, 2) = 1.0;
      y(k) = s[k];
    }
    const Eigen::VectorXcd x = A.colPivHouseholderQr().solve(y);
    rep.amp_ccw = std::abs(x(0));
    rep.amp_cw = std::abs(x(1));
    const double big = std::max(rep.amp_ccw, rep.amp_cw);
    rep.balance = big > 0 ? std::abs(rep.amp_ccw - rep.amp_cw) / big : 0.0;
    // standing: a b = |a b| e^{-2 i n axis}
    const cplx ab = x(0) * x(1);
    rep.symmetry_axis = std::abs(ab) > 0 ? wrap_pi(-std::arg(ab) / (2.0 * n)) : 0.0;
    rep.symmetry_axis = std::fmod(rep.symmetry_axis, kPi / n);
    for (int k = 0; k < n; ++k) rep.nodal_axes.push_back(wrap_pi(rep.symmetry_axis + kPi / (2.0 * n) + k * kPi / n));
    std::sort(rep.nodal_axes.begin(), rep.nodal_axes.end());
  }

  // phase velocity from the unwrapped phase of c_n
  {
    double prev = std::arg(s[0]), acc = prev;
    double st = 0, sp = 0, stt = 0, stp = 0;
    const double K = static_cast<double>(s.size());
    for (std::size_t k = 0; k < s.size(); ++k) {
      if (k > 0) {
        const double a = std::arg(s[k]);
        double d = a - prev;
        d -= 2.0 * kPi * std::round(d / (2.0 * kPi));
        acc += d;
        prev = a;
      }
      const double t = w.times[k] - rep.t_start;
      st += t;
      sp += acc;
      stt += t * t;
      stp += t * acc;
    }
    const double slope = (K * stp - st * sp) / (K * stt - st * st);
    rep.phase_velocity = -slope / n;
  }

  // amplitude trend over whole periods
  {
    const int periods = static_cast<int>(std::floor(span / rep.period));
    std::vector<double> means;
    for (int p = 0; p < periods; ++p) {
      const double a = rep.t_start + p * rep.period, b = a + rep.period;
      double sum = 0;
      int cnt = 0;
      for (std::size_t k = 0; k < w.times.size(); ++k) {
        if (w.times[k] >= a && w.times[k] < b) {
          sum += amp[k];
          ++cnt;
        }
      }
      if (cnt > 0) means.push_back(sum / cnt);
    }
    if (means.size() >= 2) {
      double sx = 0, sy = 0, sxx = 0, sxy = 0;
      const double M = static_cast<double>(means.size());
      for (std::size_t p = 0; p < means.size(); ++p) {
        sx += p;
        sy += means[p];
        sxx += static_cast<double>(p * p);
        sxy += p * means[p];
      }
      const double slope = (M * sxy - sx * sy) / (M * sxx - sx * sx);
      rep.trend = sy > 0 ? slope / (sy / M) : 0.0;
    }
  }

  // symmetry relations
  const GridShift quarter = nearest_rotation(g, kPi / (2.0 * n));
  const GridShift half = nearest_rotation(g, kPi / n);
  const int reflect_index = static_cast<int>(std::lround(2.0 * rep.symmetry_axis / g.dtheta()));
  rep.shifts["rotation"] = quarter;
  rep.shifts["standing"] = half;
  rep.shifts["axis"] = GridShift{reflect_index, 2.0 * rep.symmetry_axis, reflect_index * g.dtheta()};
  if (std::abs(quarter.used - quarter.requested) > 1e-12) {
    std::ostringstream os;
    os.precision(17);
    os << "rotation shift rounded from " << quarter.requested << " to " << quarter.used;
    add_note(rep, os.str());
  }
  if (std::abs(half.used - half.requested) > 1e-12) add_note(rep, "half-wavelength shift rounded to the grid");

  for (const char* kind : {"rotating-ccw", "rotating-cw", "standing"}) {
    rep.residuals[kind] = symmetry_residual(w, relation(rep, kind)).value;
  }

  if (std::abs(rep.trend) > opts.trend_threshold) {
    add_note(rep, "amplitude trend exceeds threshold per period");
    rep.tag = "inconclusive";
    return rep;
  }
  std::string best;
  double best_val = INFINITY;
  for (const auto& [k, v] : rep.residuals) {
    if (v < best_val) {
      best_val = v;
      best = k;
    }
  }
  rep.tag = "other";
  if (best_val < opts.residual_threshold) {
    if (best == "standing" && rep.balance <= opts.balance_threshold) {
      rep.tag = best;
    } else if (best == "rotating-ccw" && rep.amp_ccw > rep.amp_cw && rep.phase_velocity > 0) {
      rep.tag = best;
    } else if (best == "rotating-cw" && rep.amp_cw > rep.amp_ccw && rep.phase_velocity < 0) {
      rep.tag = best;
    }
  }
  if (rep.tag == "standing") rep.phase_velocity = 0.0;
  return rep;
}

}  // namespace rmdisk
