#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "rmdisk/errors.hpp"
#include "rmdisk/simulator.hpp"

using namespace rmdisk;

namespace {

Field random_field(const PolarGrid& g, const SteadyState& ss, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(-1, 1);
  Field f{std::vector<double>(g.size()), std::vector<double>(g.size())};
  for (std::size_t k = 0; k < g.size(); ++k) {
    f.u[k] = ss.u_star * (1 + 0.2 * U(rng));
    f.v[k] = ss.v_star * (1 + 0.2 * U(rng));
  }
  return f;
}

double mms_error(int nr, double dt, double t_end) {
  oracle::Manufactured m;
  m.p.chi = 0.38;
  m.p.tau = 1.0;
  const SteadyState ss = steady_state(m.p);
  m.u_star = ss.u_star;
  m.v_star = ss.v_star;
  SimConfig c;
  c.nr = nr;
  c.ntheta = 2 * nr;
  c.dt = dt;
  c.t_end = t_end;
  c.keep_frames = false;
  c.initial.kind = InitialHistory::Kind::Custom;
  c.initial.custom = [&](double, const PolarGrid& g, Field& f) {
    f.u.resize(g.size());
    f.v.resize(g.size());
    for (int i = 0; i < g.nr; ++i) {
      for (int j = 0; j < g.ntheta; ++j) {
        f.u[g.idx(i, j)] = m.u(g.r(i), g.theta(j));
        f.v[g.idx(i, j)] = m.v(g.r(i), g.theta(j));
      }
    }
  };
  std::vector<double> su, sv;
  c.source = [&](double, const PolarGrid& g, Field& out) {
    if (su.empty()) {
      su.resize(g.size());
      sv.resize(g.size());
      for (int i = 0; i < g.nr; ++i) {
        for (int j = 0; j < g.ntheta; ++j) m.source(g.r(i), g.theta(j), su[g.idx(i, j)], sv[g.idx(i, j)]);
      }
    }
    for (std::size_t k = 0; k < g.size(); ++k) {
      out.u[k] += su[k];
      out.v[k] += sv[k];
    }
  };
  Simulator s(m.p, c);
  s.advance_to(t_end);
  const PolarGrid& g = s.grid();
  std::vector<double> eu(g.size()), ev(g.size());
  for (int i = 0; i < g.nr; ++i) {
    for (int j = 0; j < g.ntheta; ++j) {
      eu[g.idx(i, j)] = m.u(g.r(i), g.theta(j));
      ev[g.idx(i, j)] = m.v(g.r(i), g.theta(j));
    }
  }
  return l2_distance(g, s.state().u, eu) + l2_distance(g, s.state().v, ev);
}

}  // namespace

TEST(Simulator, ManufacturedSolutionSecondOrderInSpace) {
  const double e1 = mms_error(16, 0.01, 5.0);
  const double e2 = mms_error(32, 0.01, 5.0);
  EXPECT_GE(std::log2(e1 / e2), 1.9);
}

TEST(Simulator, HomogeneousRunMatchesDelayOdeOracle) {
  ModelParams p;
  p.tau = 2.0;
  const SteadyState ss = steady_state(p);
  auto hu = [&](double t) { return ss.u_star * (1 + 0.1 * std::cos(t)); };
  auto hv = [&](double t) { return ss.v_star * (1 + 0.1 * std::sin(t)); };
  const auto ref = oracle::rk4_dde(p, hu, hv, 0.001, 20.0);
  std::vector<double> err;
  for (double dt : {0.02, 0.01}) {
    SimConfig c;
    c.nr = 4;
    c.ntheta = 8;
    c.dt = dt;
    c.t_end = 20.0;
    c.keep_frames = false;
    c.initial.kind = InitialHistory::Kind::Custom;
    c.initial.custom = [&](double t, const PolarGrid& g, Field& f) {
      f.u.assign(g.size(), hu(t));
      f.v.assign(g.size(), hv(t));
    };
    Simulator s(p, c);
    s.advance_to(20.0);
    err.push_back(std::abs(s.state().u[5] - ref.u.back()) + std::abs(s.state().v[5] - ref.v.back()));
  }
  EXPECT_LT(err[1], 1e-6);
  EXPECT_GE(std::log2(err[0] / err[1]), 1.9);
}

TEST(Simulator, TemporalSelfConvergence) {
  auto run = [](double dt) {
    ModelParams p;
    p.chi = 0.38;
    p.tau = 9.88;
    SimConfig c;
    c.nr = 12;
    c.ntheta = 24;
    c.dt = dt;
    c.t_end = 25.0;
    c.keep_frames = false;
    c.initial.u_factor = {Parity::Cos, 1};
    c.initial.v_factor = {Parity::Cos, 1};
    Simulator s(p, c);
    s.advance_to(25.0);
    return s.state();
  };
  const Field a = run(0.04), b = run(0.02), c = run(0.01);
  const PolarGrid g = make_grid(12, 24, 10.0);
  const double e1 = l2_distance(g, a.u, b.u) + l2_distance(g, a.v, b.v);
  const double e2 = l2_distance(g, b.u, c.u) + l2_distance(g, b.v, c.v);
  EXPECT_GE(std::log2(e1 / e2), 1.9);
}

TEST(Simulator, RotationAndReflectionEquivarianceBitwise) {
  ModelParams p;
  p.chi = 0.38;
  p.tau = 2.0;
  const SteadyState ss = steady_state(p);
  const PolarGrid g = make_grid(10, 20, p.R);
  const Field base = random_field(g, ss, 11);
  auto run = [&](const std::function<Field(const Field&)>& T) {
    SimConfig c;
    c.nr = g.nr;
    c.ntheta = g.ntheta;
    c.dt = 0.1;
    c.t_end = 10.0;
    c.keep_frames = false;
    c.initial.kind = InitialHistory::Kind::Custom;
    c.initial.custom = [&, T](double t, const PolarGrid&, Field& f) {
      Field h = base;
      for (double& x : h.u) x *= 1 + 0.01 * std::cos(t);
      f = T(h);
    };
    Simulator s(p, c);
    s.advance_to(10.0);
    return s.state();
  };
  const Field a = run([](const Field& f) { return f; });
  for (int st : {1, 7, 10}) {
    const Field b = run([&](const Field& f) { return rotate(g, f, st); });
    const Field ra = rotate(g, a, st);
    EXPECT_TRUE(ra.u == b.u && ra.v == b.v) << "rotation by " << st;
  }
  const Field b = run([&](const Field& f) { return reflect(g, f); });
  const Field ra = reflect(g, a);
  EXPECT_TRUE(ra.u == b.u && ra.v == b.v);
}

TEST(Simulator, PureDiffusionConservesMass) {
  ModelParams p;
  p.tau = 1.0;
  const SteadyState ss = steady_state(p);
  const PolarGrid g = make_grid(12, 24, p.R);
  const Field base = random_field(g, ss, 3);
  SimConfig c;
  c.nr = g.nr;
  c.ntheta = g.ntheta;
  c.dt = 0.1;
  c.t_end = 100.0;
  c.keep_frames = false;
  c.scheme.reaction = false;
  c.scheme.taxis = false;
  c.initial.kind = InitialHistory::Kind::Custom;
  c.initial.custom = [&](double, const PolarGrid&, Field& f) { f = base; };
  Simulator s(p, c);
  const double mu = integrate(g, s.state().u), mv = integrate(g, s.state().v);
  while (s.steps() < 1000) s.step();
  EXPECT_LT(std::abs(integrate(g, s.state().u) - mu) / mu, 1e-10);
  EXPECT_LT(std::abs(integrate(g, s.state().v) - mv) / mv, 1e-10);
}

TEST(Simulator, TaxisConservesMass) {
  ModelParams p;
  p.chi = 0.5;
  p.tau = 1.0;
  const SteadyState ss = steady_state(p);
  const PolarGrid g = make_grid(12, 24, p.R);
  const Field base = random_field(g, ss, 5);
  SimConfig c;
  c.nr = g.nr;
  c.ntheta = g.ntheta;
  c.dt = 0.05;
  c.t_end = 10.0;
  c.keep_frames = false;
  c.initial.kind = InitialHistory::Kind::Custom;
  c.initial.custom = [&](double, const PolarGrid&, Field& f) { f = base; };
  Simulator s(p, c);
  std::vector<double> out;
  s.taxis(base.u, base.v, out);
  EXPECT_NEAR(integrate(g, out), 0.0, 1e-12);
  s.laplacian(base.u, 1.0, out);
  EXPECT_NEAR(integrate(g, out), 0.0, 1e-12);
}

TEST(Simulator, SteadyStatePreserved) {
  ModelParams p;
  p.chi = 0.38;
  p.tau = 9.88;
  const SteadyState ss = steady_state(p);
  SimConfig c;
  c.nr = 16;
  c.ntheta = 32;
  c.dt = 0.1;
  c.t_end = 50.0;
  c.keep_frames = false;
  c.initial.kind = InitialHistory::Kind::Constant;
  Simulator s(p, c);
  for (int k = 0; k < 200; ++k) {
    s.step();
    for (std::size_t q = 0; q < s.state().u.size(); ++q) {
      ASSERT_LT(std::abs(s.state().u[q] - ss.u_star), 1e-12);
      ASSERT_LT(std::abs(s.state().v[q] - ss.v_star), 1e-12);
    }
  }
}

TEST(Simulator, DeterministicWithSeed) {
  ModelParams p;
  p.chi = 0.46;
  p.tau = 9.6;
  SimConfig c;
  c.nr = 8;
  c.ntheta = 16;
  c.t_end = 20.0;
  c.initial.kind = InitialHistory::Kind::Random;
  c.initial.seed = 42;
  c.initial.amplitude = 0.05;
  const Trajectory a = Simulator(p, c).run(), b = Simulator(p, c).run();
  ASSERT_EQ(a.frames.size(), b.frames.size());
  EXPECT_TRUE(a.frames.back().u == b.frames.back().u);
  c.initial.seed = 43;
  const Trajectory d = Simulator(p, c).run();
  EXPECT_FALSE(a.frames.back().u == d.frames.back().u);
}

TEST(Simulator, DelayStepSnapping) {
  ModelParams p;
  p.tau = 9.88;
  SimConfig c;
  c.nr = 4;
  c.ntheta = 8;
  c.dt = 0.1;
  c.t_end = 20.0;
  Simulator s(p, c);
  EXPECT_NEAR(s.dt() * s.delay_steps(), p.tau, 1e-12);
  EXPECT_LE(s.dt(), 0.1 + 1e-15);
}

TEST(Simulator, FramesAtOutputStride) {
  ModelParams p;
  p.tau = 1.0;
  SimConfig c;
  c.nr = 4;
  c.ntheta = 8;
  c.dt = 0.1;
  c.t_end = 5.0;
  c.output_interval = 0.5;
  const Trajectory tr = Simulator(p, c).run();
  ASSERT_EQ(tr.times.size(), 11u);
  EXPECT_NEAR(tr.times[1], 0.5, 1e-12);
  EXPECT_NEAR(tr.times.back(), 5.0, 1e-9);
}

TEST(Simulator, InvalidConfigurationThrows) {
  ModelParams p;
  SimConfig c;
  c.ntheta = 7;
  EXPECT_THROW(Simulator(p, c), ConfigError);
  ModelParams q;
  q.alpha = 0.5;
  EXPECT_THROW(Simulator(q, SimConfig{}), ConfigError);
}
