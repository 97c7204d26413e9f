#pragma once

// Wave classification of simulated trajectories.
//
// Angular orientation is mathematical: theta increases counterclockwise. A pattern
// cos(n theta - w t) turns counterclockwise with phase velocity +w/n; its angular
// coefficient c_n(t) = mean_j (u - u*) e^{-i n theta_j} then behaves like e^{-i w t}.
//
// Tested relations (u is the prey density, T the period, c the phase velocity):
//   rotating-ccw  u(r, theta + c s, t + s)              = u(r, theta, t)
//   rotating-cw   u(r, theta - |c| s, t + s)            = u(r, theta, t)
//   standing      u(r, 2 a - theta - pi/n, t + T/2)     = u(r, theta, t)   (a: symmetry axis)
// The rotation shift s corresponds to a quarter wavelength, rounded to whole grid cells.

#include <complex>
#include <map>
#include <string>
#include <vector>

#include "rmdisk/grid.hpp"
#include "rmdisk/simulator.hpp"

namespace rmdisk {

struct RadiusBand {
  double r_lo = 0.0;
  double r_hi = -1.0;  // negative: up to R
};

// Coefficients c_k for k = -n_max..n_max of (u - u_ref), averaged over the rings whose centres fall
// in the band with weights r_i.
struct AngularSpectrum {
  int n_max = 0;
  std::vector<std::complex<double>> c;  // index k + n_max
  [[nodiscard]] std::complex<double> at(int k) const { return c.at(static_cast<std::size_t>(k + n_max)); }
  [[nodiscard]] double power(int k) const { return std::norm(at(k)); }
};

AngularSpectrum angular_spectrum(const PolarGrid& g, const std::vector<double>& u, double u_ref,
                                 const RadiusBand& band = {}, int n_max = 8);

// Frames at uniformly spaced times (the last spacing may differ by rounding).
struct FrameWindow {
  PolarGrid grid;
  double u_star = 0.0;
  double tau = 0.0;
  std::vector<double> times;
  std::vector<Field> frames;
};

FrameWindow window_from(const Trajectory& tr);
// Frames with t >= t_from.
FrameWindow trim(const FrameWindow& w, double t_from);

struct SymmetryRelation {
  int rotate_steps = 0;       // applied after the optional reflection: theta -> theta + steps * dtheta
  bool reflect = false;       // theta -> reflect_index * dtheta / 2 - theta
  int reflect_index = 0;      // reflection axis at reflect_index * dtheta / 2
  double time_shift = 0.0;
};

struct SymmetryResidual {
  double value = 0.0;
  int frames_used = 0;
};

// || u(T x, t + s) - u(x, t) || / || u - u* || over the frames whose shifted time lies in the window;
// the shifted frame is linearly interpolated in time. Throws ConfigError if no frame qualifies.
SymmetryResidual symmetry_residual(const FrameWindow& w, const SymmetryRelation& rel);

// Nearest representable rotation for a requested angle, with the angle actually used.
struct GridShift {
  int steps = 0;
  double requested = 0.0;
  double used = 0.0;
};
GridShift nearest_rotation(const PolarGrid& g, double angle);

struct ClassifyOptions {
  double residual_threshold = 0.05;
  double balance_threshold = 0.10;   // standing: | |a+| - |a-| | / max <= this
  double trend_threshold = 0.01;     // per period
  double trim = -1.0;                // negative: max(5 periods, 20 tau) after the first frame
  int n_max = 8;
  RadiusBand band{};
};

struct WaveReport {
  std::string tag;                   // rotating-ccw, rotating-cw, standing, other, inconclusive
  int n = 0;
  double period = 0.0;
  double omega = 0.0;
  double phase_velocity = 0.0;       // rad / time, positive counterclockwise
  std::vector<double> nodal_axes;    // angles in [0, pi) of the nodal diameters (standing)
  double symmetry_axis = 0.0;        // a in the standing relation
  std::map<std::string, double> residuals;
  std::map<std::string, GridShift> shifts;
  double amplitude = 0.0;            // mean L2 deviation of u from u*
  double balance = 0.0;              // | |a+| - |a-| | / max(|a+|, |a-|)
  double amp_ccw = 0.0;              // |a+|: weight of e^{-i w t} in c_n
  double amp_cw = 0.0;               // |a-|: weight of e^{+i w t}
  double trend = 0.0;                // relative amplitude change per period
  double t_start = 0.0;
  double t_end = 0.0;
  int frames = 0;
  std::string note;
};

WaveReport classify(const FrameWindow& w, const ClassifyOptions& opts = {});

// Relation used for residual `kind` ("rotating-ccw", "rotating-cw", "standing") of a report with
// a detected period. Throws ConfigError otherwise.
SymmetryRelation relation(const WaveReport& rep, const std::string& kind);

// Frequency of a uniformly sampled complex signal modelled as a e^{-i w t} + b e^{i w t} + c,
// from the exact recurrence s[k+1] + s[k-1] - 2 cos(w h) s[k] = const. Returns w in (0, pi/h).
double recurrence_frequency(const std::vector<std::complex<double>>& s, double h);

}  // namespace rmdisk
