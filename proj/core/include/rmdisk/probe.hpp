#pragma once

// Growth exponent of one Neumann mode measured from the simulator in the linear regime.
// The run is seeded with u = u*(1 + eps J_n(beta r/R) cos(n theta)), v = v*; the deviation is
// projected onto the same mode at regular intervals and an order-2 linear predictor is
// fitted to both projections. Its roots z give gamma = log(z) / sample_interval.

#include <complex>
#include <vector>

#include "rmdisk/model.hpp"
#include "rmdisk/simulator.hpp"

namespace rmdisk {

struct ProbeOptions {
  int nr = 64;
  int ntheta = 128;
  double dt = 0.05;
  double amplitude = 1e-6;      // eps, relative to u*
  double t_transient = 150.0;   // discarded before the fit window
  double t_window = 300.0;
  double sample_interval = 1.0;
  double max_growth = 10.0;     // reject when the projection exceeds this multiple of its start value
  Scheme scheme{};
};

struct ProbeResult {
  std::complex<double> gamma;   // Im >= 0
  double fit_rms = 0.0;         // relative residual of the linear predictor
  double growth_factor = 0.0;   // max |projection| / initial |projection|
  double dt = 0.0;              // step actually used
  std::vector<double> t, a_u, a_v;
};

// Throws NumericalError when the amplitude exceeds max_growth (nonlinearity) or the fit is
// degenerate.
ProbeResult linear_growth_probe(const ModelParams& p, int n, int m, double tau, const ProbeOptions& opts = {});

// Order-2 linear-predictor fit shared by the probe and the onset scans. Series must be sampled
// on a uniform grid of spacing h. A series that is constant to rounding yields gamma = 0.
std::complex<double> fit_growth(const std::vector<std::vector<double>>& series, double h, double* rms = nullptr);

// Onset localization by bisection on the long-run amplitude of one mode. Each run starts from the
// eigenmode seed of linear_growth_probe; the amplitude is the RMS of the (cos, sin) projections of
// u - u* over one period, compared between an early window (after t_skip) and the end of the run.
struct OnsetOptions {
  int nr = 64;
  int ntheta = 128;
  double dt = 0.1;
  double amplitude = 1e-6;
  double t_skip = 200.0;
  double t_end = 1000.0;
  double rel_tol = 2e-3;    // stop when (hi - lo) / mid falls below this
  int max_runs = 24;
  Scheme scheme{};
};

struct OnsetSample {
  double tau = 0.0;
  double ratio = 0.0;   // late / early amplitude
  double omega = 0.0;   // frequency measured from the projections
};

struct OnsetResult {
  double tau_onset = 0.0;   // bracket midpoint
  double tau_lo = 0.0;      // last decaying delay
  double tau_hi = 0.0;      // last growing delay
  double omega = 0.0;       // measured frequency at the run closest to the onset
  std::vector<OnsetSample> samples;
};

OnsetSample long_run_ratio(const ModelParams& p, int n, int m, double tau, const OnsetOptions& opts = {});

// Throws NumericalError unless tau_lo decays and tau_hi grows.
OnsetResult locate_onset(const ModelParams& p, int n, int m, double tau_lo, double tau_hi, const OnsetOptions& opts = {});

// Side of the onset on which small periodic orbits exist, from the amplitude dependence of the
// growth rate at a delay near onset: sigma(E) ~ sigma0 + L E^2. L < 0 (saturating) puts the branch
// above the onset (+1), L > 0 below it (-1).
enum class SeedShape { Standing, Rotating };

struct SideOptions {
  int nr = 64;
  int ntheta = 128;
  double dt = 0.1;
  double small = 0.03;      // seed amplitudes relative to u*
  double large = 0.12;
  double t_skip = 100.0;
  double t_window = 300.0;
  Scheme scheme{};
};

struct SideResult {
  int side = 0;
  double sigma_small = 0.0;   // measured growth rates of the period-RMS envelope
  double sigma_large = 0.0;
  double env_small = 0.0;     // mean envelope over the window
  double env_large = 0.0;
  double landau = 0.0;        // (sigma_large - sigma_small) / (env_large^2 - env_small^2)
};

// Rotating seeds turn counterclockwise: u = u*(1 + a J_n cos(n theta - omega t)) on [-tau, 0].
// Standing seeds: u = u*(1 + a J_n cos(n theta)). v = v* in both.
SideResult branch_side(const ModelParams& p, int n, int m, double tau, double omega, SeedShape shape,
                       const SideOptions& opts = {});

}  // namespace rmdisk
