#include "rmdisk/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "rmdisk/errors.hpp"

namespace rmdisk {

std::string Scheme::name() const {
  std::string s = "sbdf2-adi-fv";
  s += taxis_face == TaxisFace::Centered ? ";taxis-face=centered" : ";taxis-face=upwind";
  if (!reaction) s += ";reaction=off";
  if (!taxis) s += ";taxis=off";
  if (!diffusion) s += ";diffusion=off";
  return s;
}

double AngularFactor::operator()(double theta) const {
  return parity == Parity::Cos ? std::cos(n * theta) : std::sin(n * theta);
}

HistoryBuffer::HistoryBuffer(int delay_steps, std::size_t cells)
    : delay_(delay_steps), ring_(static_cast<std::size_t>(delay_steps) + 1, std::vector<double>(cells, 0.0)) {}

const std::vector<double>& HistoryBuffer::at(long long s) const {
  const long long L = static_cast<long long>(ring_.size());
  return ring_[static_cast<std::size_t>(((s % L) + L) % L)];
}

std::vector<double>& HistoryBuffer::slot(long long s) {
  const long long L = static_cast<long long>(ring_.size());
  return ring_[static_cast<std::size_t>(((s % L) + L) % L)];
}

Simulator::Simulator(const ModelParams& p, const SimConfig& cfg) : p_(p), cfg_(cfg) {
  validate(p_);
  ss_ = steady_state(p_);
  grid_ = make_grid(cfg_.nr, cfg_.ntheta, p_.R);
  if (!(cfg_.dt > 0)) throw ConfigError("simulation: dt must be > 0");
  if (!(cfg_.t_end > p_.tau)) throw ConfigError("simulation: t_end must exceed tau");
  if (!(cfg_.output_interval > 0)) throw ConfigError("simulation: output_interval must be > 0");
  if (cfg_.scheme.max_halvings < 0) throw ConfigError("simulation: max_halvings must be >= 0");
  if (p_.tau > 0) {
    delay_ = static_cast<int>(std::max(1L, std::lround(p_.tau / cfg_.dt)));
    dt_ = p_.tau / delay_;
  } else {
    delay_ = 0;
    dt_ = cfg_.dt;
  }
  stride_ = static_cast<int>(std::max(1L, std::lround(cfg_.output_interval / dt_)));

  const std::size_t n = grid_.size();
  for (Field* f : {&cur_, &prev_, &n_cur_, &n_prev_, &rhs_, &next_}) {
    f->u.assign(n, 0.0);
    f->v.assign(n, 0.0);
  }
  scratch_.assign(n, 0.0);
  ext_.assign(2 * static_cast<std::size_t>(grid_.ntheta), 0.0);
  hist_ = HistoryBuffer(delay_, n);
  fill_history();
}

long long Simulator::total_steps() const {
  return static_cast<long long>(std::ceil(cfg_.t_end / dt_ - 1e-9));
}

void Simulator::fill_history() {
  const auto& ini = cfg_.initial;
  const std::size_t n = grid_.size();
  Field f{std::vector<double>(n), std::vector<double>(n)};
  const double us = ss_.u_star, vs = ss_.v_star;

  std::vector<double> ru, rv;
  if (ini.kind == InitialHistory::Kind::Random) {
    std::mt19937_64 rng(ini.seed);
    auto uniform = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
    ru.resize(n);
    rv.resize(n);
    for (auto& x : ru) x = us * (1.0 + ini.amplitude * (2.0 * uniform() - 1.0));
    for (auto& x : rv) x = vs * (1.0 + ini.amplitude * (2.0 * uniform() - 1.0));
  }
  std::vector<double> mode_vals;
  if (ini.kind == InitialHistory::Kind::Eigenmode) {
    const EigenMode e = eigenmode(ini.mode_n, ini.mode_m, p_.R);
    mode_vals.resize(n);
    for (int i = 0; i < grid_.nr; ++i) {
      const double rad = e.radial(grid_.r(i));
      for (int j = 0; j < grid_.ntheta; ++j) mode_vals[grid_.idx(i, j)] = rad * e.angular(ini.mode_parity, grid_.signed_theta(j));
    }
  }

  for (long long s = -delay_; s <= 0; ++s) {
    const double t = static_cast<double>(s) * dt_;
    switch (ini.kind) {
      case InitialHistory::Kind::Formula:
        for (int i = 0; i < grid_.nr; ++i) {
          const double radial = std::cos(t) * std::cos(2.0 * std::numbers::pi * grid_.r(i) / p_.R);
          for (int j = 0; j < grid_.ntheta; ++j) {
            const double th = grid_.signed_theta(j);
            f.u[grid_.idx(i, j)] = us * (1.0 + ini.amplitude * radial * ini.u_factor(th));
            f.v[grid_.idx(i, j)] = vs * (1.0 + ini.amplitude * radial * ini.v_factor(th));
          }
        }
        break;
      case InitialHistory::Kind::Random:
        f.u = ru;
        f.v = rv;
        break;
      case InitialHistory::Kind::Eigenmode:
        for (std::size_t k = 0; k < n; ++k) {
          f.u[k] = us * (1.0 + ini.amplitude * mode_vals[k]);
          f.v[k] = vs;
        }
        break;
      case InitialHistory::Kind::Constant:
        std::fill(f.u.begin(), f.u.end(), us);
        std::fill(f.v.begin(), f.v.end(), vs);
        break;
      case InitialHistory::Kind::Custom:
        if (!ini.custom) throw ConfigError("simulation: custom initial history without a function");
        ini.custom(t, grid_, f);
        if (f.u.size() != n || f.v.size() != n) throw ConfigError("simulation: custom history has wrong size");
        break;
    }
    hist_.slot(s) = f.u;
    if (s == 0) cur_ = f;
  }
  n_ = 0;
  have_prev_ = false;
}

void Simulator::laplacian(const std::vector<double>& x, double diff, std::vector<double>& out) const {
  const int nr = grid_.nr, nt = grid_.ntheta;
  const double dr = grid_.dr(), dth = grid_.dtheta();
  out.resize(x.size());
  for (int i = 0; i < nr; ++i) {
    const double ri = grid_.r(i);
    const double wp = i < nr - 1 ? grid_.r_face(i + 1) / (ri * dr * dr) : 0.0;
    const double wm = i > 0 ? grid_.r_face(i) / (ri * dr * dr) : 0.0;
    const double wa = 1.0 / (ri * dth * ri * dth);
    const double* xc = &x[grid_.idx(i, 0)];
    const double* xp = i < nr - 1 ? &x[grid_.idx(i + 1, 0)] : xc;
    const double* xm = i > 0 ? &x[grid_.idx(i - 1, 0)] : xc;
    double* o = &out[grid_.idx(i, 0)];
    for (int j = 0; j < nt; ++j) {
      const int jp = j + 1 == nt ? 0 : j + 1;
      const int jm = j == 0 ? nt - 1 : j - 1;
      const double radial = wp * (xp[j] - xc[j]) - wm * (xc[j] - xm[j]);
      const double angular = wa * ((xc[jp] + xc[jm]) - 2.0 * xc[j]);
      o[j] = diff * (radial + angular);
    }
  }
}

void Simulator::taxis(const std::vector<double>& u, const std::vector<double>& v, std::vector<double>& out) const {
  const int nr = grid_.nr, nt = grid_.ntheta;
  const double dr = grid_.dr(), dth = grid_.dtheta();
  const bool upwind = cfg_.scheme.taxis_face == TaxisFace::Upwind;
  auto face_u = [upwind](double ua, double ub, double dv) {
    if (upwind) return dv > 0 ? ub : ua;
    return 0.5 * (ua + ub);
  };
  out.assign(u.size(), 0.0);
  // radial faces: flux r_{i+1/2} * u_f * dv/dr across face i+1/2
  std::vector<double> flux_lo(static_cast<std::size_t>(nt), 0.0), flux_hi(static_cast<std::size_t>(nt));
  for (int i = 0; i < nr; ++i) {
    const double ri = grid_.r(i);
    for (int j = 0; j < nt; ++j) {
      if (i < nr - 1) {
        const std::size_t a = grid_.idx(i, j), b = grid_.idx(i + 1, j);
        const double dv = v[b] - v[a];
        flux_hi[static_cast<std::size_t>(j)] = grid_.r_face(i + 1) * face_u(u[a], u[b], dv) * dv / dr;
      } else {
        flux_hi[static_cast<std::size_t>(j)] = 0.0;
      }
      out[grid_.idx(i, j)] = (flux_hi[static_cast<std::size_t>(j)] - flux_lo[static_cast<std::size_t>(j)]) / (ri * dr);
    }
    std::swap(flux_lo, flux_hi);
  }
  // angular faces
  std::vector<double> g(static_cast<std::size_t>(nt));
  for (int i = 0; i < nr; ++i) {
    const double h = grid_.r(i) * dth;
    for (int j = 0; j < nt; ++j) {
      const int jp = j + 1 == nt ? 0 : j + 1;
      const std::size_t a = grid_.idx(i, j), b = grid_.idx(i, jp);
      const double dv = v[b] - v[a];
      g[static_cast<std::size_t>(j)] = face_u(u[a], u[b], dv) * dv / h;
    }
    for (int j = 0; j < nt; ++j) {
      const int jm = j == 0 ? nt - 1 : j - 1;
      out[grid_.idx(i, j)] += (g[static_cast<std::size_t>(j)] - g[static_cast<std::size_t>(jm)]) / h;
    }
  }
  for (double& x : out) x *= p_.chi;
}

void Simulator::explicit_terms(double t, const Field& f, const std::vector<double>& u_delayed, Field& out) const {
  const std::size_t n = grid_.size();
  if (cfg_.scheme.taxis && p_.chi != 0.0) {
    taxis(f.u, f.v, out.u);
  } else {
    out.u.assign(n, 0.0);
  }
  out.v.assign(n, 0.0);
  if (cfg_.scheme.reaction) {
    for (std::size_t k = 0; k < n; ++k) {
      out.u[k] += reaction_f(p_, f.u[k], f.v[k]);
      out.v[k] = reaction_g(p_, u_delayed[k], f.v[k]);
    }
  }
  if (cfg_.source) cfg_.source(t, grid_, out);
}

const Simulator::Implicit& Simulator::implicit(double c, double diff) {
  const auto key = std::make_pair(c, diff);
  if (auto it = ops_.find(key); it != ops_.end()) return it->second;

  const int nr = grid_.nr, nt = grid_.ntheta, half = nt / 2;
  const double dr = grid_.dr(), dth = grid_.dtheta();
  const double s = c * diff;
  Implicit op;
  op.lower.resize(static_cast<std::size_t>(nr));
  op.upper_p.resize(static_cast<std::size_t>(nr));
  op.inv_denom.resize(static_cast<std::size_t>(nr));
  for (int i = 0; i < nr; ++i) {
    const double ri = grid_.r(i);
    const double wp = i < nr - 1 ? grid_.r_face(i + 1) / (ri * dr * dr) : 0.0;
    const double wm = i > 0 ? grid_.r_face(i) / (ri * dr * dr) : 0.0;
    const double diag = 1.0 + s * (wp + wm);
    const double lower = -s * wm, upper = -s * wp;
    const double denom = i == 0 ? diag : diag - lower * op.upper_p[static_cast<std::size_t>(i - 1)];
    op.lower[static_cast<std::size_t>(i)] = lower;
    op.inv_denom[static_cast<std::size_t>(i)] = 1.0 / denom;
    op.upper_p[static_cast<std::size_t>(i)] = upper / denom;
  }
  // Inverse of (I - a D2) on a ring of nt points is the circulant
  //   c_k = (1/nt) sum_m cos(2 pi m k / nt) / (1 + 4 a sin^2(pi m / nt)).
  op.kernel.resize(static_cast<std::size_t>(nr));
  op.width.resize(static_cast<std::size_t>(nr));
  const long double pi = std::numbers::pi_v<long double>;
  std::vector<long double> cos_table(static_cast<std::size_t>(nt));
  for (int q = 0; q < nt; ++q) cos_table[static_cast<std::size_t>(q)] = std::cos(2.0L * pi * q / nt);
  for (int i = 0; i < nr; ++i) {
    const double ri = grid_.r(i);
    const long double a = s / (ri * dth * ri * dth);
    std::vector<long double> inv(static_cast<std::size_t>(nt));
    for (int m = 0; m < nt; ++m) {
      const long double sn = std::sin(pi * m / nt);
      inv[static_cast<std::size_t>(m)] = 1.0L / (1.0L + 4.0L * a * sn * sn);
    }
    auto& ker = op.kernel[static_cast<std::size_t>(i)];
    ker.resize(static_cast<std::size_t>(half) + 1);
    for (int k = 0; k <= half; ++k) {
      long double sum = 0.0L;
      for (int m = 0; m < nt; ++m) {
        sum += cos_table[static_cast<std::size_t>((static_cast<long long>(m) * k) % nt)] *
               inv[static_cast<std::size_t>(m)];
      }
      ker[static_cast<std::size_t>(k)] = static_cast<double>(sum / nt);
    }
    int w = half;
    while (w > 0 && std::abs(ker[static_cast<std::size_t>(w)]) < 1e-18 * std::abs(ker[0])) --w;
    op.width[static_cast<std::size_t>(i)] = w;
  }
  return ops_.emplace(key, std::move(op)).first->second;
}

void Simulator::solve_implicit(const Implicit& op, std::vector<double>& x) {
  const int nr = grid_.nr, nt = grid_.ntheta, half = nt / 2;
  // radial Thomas sweep, all angular columns at once
  for (int i = 0; i < nr; ++i) {
    double* xi = &x[grid_.idx(i, 0)];
    const double inv = op.inv_denom[static_cast<std::size_t>(i)];
    if (i == 0) {
      for (int j = 0; j < nt; ++j) xi[j] *= inv;
    } else {
      const double* xm = &x[grid_.idx(i - 1, 0)];
      const double lo = op.lower[static_cast<std::size_t>(i)];
      for (int j = 0; j < nt; ++j) xi[j] = (xi[j] - lo * xm[j]) * inv;
    }
  }
  for (int i = nr - 2; i >= 0; --i) {
    double* xi = &x[grid_.idx(i, 0)];
    const double* xp = &x[grid_.idx(i + 1, 0)];
    const double up = op.upper_p[static_cast<std::size_t>(i)];
    for (int j = 0; j < nt; ++j) xi[j] -= up * xp[j];
  }
  // angular circulant per ring
  for (int i = 0; i < nr; ++i) {
    double* xi = &x[grid_.idx(i, 0)];
    for (int p = 0; p < 2 * nt; ++p) ext_[static_cast<std::size_t>(p)] = xi[(p + half) % nt];
    // ext_[p] = x[p - half (mod nt)], so x[j + k] = ext_[j + half + k]
    const auto& ker = op.kernel[static_cast<std::size_t>(i)];
    const int w = op.width[static_cast<std::size_t>(i)];
    const int wl = std::min(w, half - 1);
    for (int j = 0; j < nt; ++j) {
      const double* e = &ext_[static_cast<std::size_t>(j + half)];
      double acc = ker[0] * e[0];
      for (int k = 1; k <= wl; ++k) acc += ker[static_cast<std::size_t>(k)] * (e[-k] + e[k]);
      if (w == half) acc += ker[static_cast<std::size_t>(half)] * e[half];
      xi[j] = acc;
    }
  }
}

bool Simulator::valid(const Field& f) const {
  const double lo = -cfg_.scheme.negative_tol;
  for (const auto* a : {&f.u, &f.v}) {
    for (double x : *a) {
      if (!std::isfinite(x) || x < lo) return false;
    }
  }
  return true;
}

bool Simulator::try_substeps(int halvings, Field& out) {
  const int m = 1 << halvings;
  const double kk = dt_ / m;
  Field w = cur_;
  Field nn;
  std::vector<double> ud(grid_.size()), lap;
  for (int s = 0; s < m; ++s) {
    const double t = time() + s * kk;
    if (delay_ >= 1) {
      const double frac = static_cast<double>(s) / m;
      const auto& a = hist_.at(n_ - delay_);
      const auto& b = hist_.at(n_ - delay_ + 1);
      for (std::size_t k = 0; k < ud.size(); ++k) ud[k] = (1.0 - frac) * a[k] + frac * b[k];
    } else {
      ud = w.u;
    }
    explicit_terms(t, w, ud, nn);
    const double diffs[2] = {p_.d1, p_.d2};
    std::vector<double>* xs[2] = {&w.u, &w.v};
    std::vector<double>* ns[2] = {&nn.u, &nn.v};
    for (int c = 0; c < 2; ++c) {
      auto& rhs = *ns[c];
      for (double& x : rhs) x *= kk;
      if (cfg_.scheme.diffusion) {
        laplacian(*xs[c], diffs[c], lap);
        for (std::size_t k = 0; k < rhs.size(); ++k) rhs[k] += kk * lap[k];
        solve_implicit(implicit(kk, diffs[c]), rhs);
      }
      for (std::size_t k = 0; k < rhs.size(); ++k) (*xs[c])[k] += rhs[k];
    }
    if (!valid(w)) return false;
  }
  out = std::move(w);
  return true;
}

void Simulator::step() {
  const auto& ud = hist_.at(n_ - delay_);
  explicit_terms(time(), cur_, ud, n_cur_);
  const bool bdf2 = have_prev_;
  const double c = bdf2 ? 2.0 * dt_ / 3.0 : dt_;
  const double diffs[2] = {p_.d1, p_.d2};
  const std::vector<double>* xc[2] = {&cur_.u, &cur_.v};
  const std::vector<double>* xp[2] = {&prev_.u, &prev_.v};
  const std::vector<double>* nc[2] = {&n_cur_.u, &n_cur_.v};
  const std::vector<double>* np[2] = {&n_prev_.u, &n_prev_.v};
  std::vector<double>* out[2] = {&next_.u, &next_.v};
  const std::size_t n = grid_.size();
  for (int f = 0; f < 2; ++f) {
    auto& rhs = *out[f];
    const auto& x = *xc[f];
    const auto& nn = *nc[f];
    if (bdf2) {
      const auto& xo = *xp[f];
      const auto& no = *np[f];
      for (std::size_t k = 0; k < n; ++k) rhs[k] = (x[k] - xo[k]) / 3.0 + c * (2.0 * nn[k] - no[k]);
    } else {
      for (std::size_t k = 0; k < n; ++k) rhs[k] = c * nn[k];
    }
    if (cfg_.scheme.diffusion) {
      laplacian(x, diffs[f], scratch_);
      for (std::size_t k = 0; k < n; ++k) rhs[k] += c * scratch_[k];
      solve_implicit(implicit(c, diffs[f]), rhs);
    }
    for (std::size_t k = 0; k < n; ++k) rhs[k] += x[k];
  }

  if (valid(next_)) {
    std::swap(prev_, cur_);
    std::swap(cur_, next_);
    std::swap(n_prev_, n_cur_);
    have_prev_ = true;
  } else {
    ++rejected_;
    bool ok = false;
    for (int h = 1; h <= cfg_.scheme.max_halvings && !ok; ++h) ok = try_substeps(h, next_);
    if (!ok) {
      throw NumericalError("simulation: step rejected at t = " + std::to_string(time()) +
                           " (non-finite or negative density after " +
                           std::to_string(cfg_.scheme.max_halvings) + " halvings)");
    }
    std::swap(prev_, cur_);
    std::swap(cur_, next_);
    have_prev_ = false;  // restart the two-step formula
  }
  ++n_;
  hist_.slot(n_) = cur_.u;
}

void Simulator::advance_to(double t_end, const Observer& obs) {
  const long long target = static_cast<long long>(std::ceil(t_end / dt_ - 1e-9));
  while (n_ < target) {
    step();
    if (obs) obs(time(), cur_);
  }
}

Trajectory Simulator::run(const Observer& on_frame) {
  Trajectory tr;
  tr.grid = grid_;
  tr.params = p_;
  tr.dt = dt_;
  tr.delay_steps = delay_;
  auto record = [&] {
    tr.times.push_back(time());
    if (cfg_.keep_frames) tr.frames.push_back(cur_);
    if (on_frame) on_frame(time(), cur_);
  };
  if (n_ % stride_ == 0) record();
  const long long total = total_steps();
  while (n_ < total) {
    step();
    if (n_ % stride_ == 0) record();
  }
  return tr;
}

}  // namespace rmdisk
