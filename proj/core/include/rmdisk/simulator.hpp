#pragma once

// Finite-volume integrator for the delayed taxis system on a cell-centred polar grid.
//
// Time stepping is second-order semi-implicit BDF (SBDF2): diffusion implicit, taxis,
// kinetics and the delayed term extrapolated. The implicit operator is split as
// (I - c Lr)(I - c Lth) acting on the increment U^{n+1} - U^n, so the splitting error
// is O(dt^3) per step. Lr is solved with a Thomas sweep per angular column, Lth with a
// precomputed symmetric circulant kernel per ring; both are applied identically at
// every angle, which keeps the scheme exactly equivariant under grid rotations and
// the reflection theta -> -theta.

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "rmdisk/grid.hpp"
#include "rmdisk/model.hpp"
#include "rmdisk/spectrum.hpp"

namespace rmdisk {

enum class TaxisFace { Centered, Upwind };

struct Scheme {
  bool reaction = true;
  bool taxis = true;
  bool diffusion = true;
  TaxisFace taxis_face = TaxisFace::Centered;
  int max_halvings = 4;          // step rejection: retry with up to 2^max_halvings substeps
  double negative_tol = 1e-8;    // densities below -negative_tol reject the step
  [[nodiscard]] std::string name() const;
};

struct AngularFactor {
  Parity parity = Parity::Cos;
  int n = 1;
  [[nodiscard]] double operator()(double theta) const;
};

// Initial data on [-tau, 0].
struct InitialHistory {
  enum class Kind { Formula, Random, Eigenmode, Constant, Custom };
  Kind kind = Kind::Formula;
  // Formula: x = x* (1 + amplitude cos(t) cos(2 pi r / R) A_x(theta)).
  // Random: x = x* (1 + amplitude U(-1, 1)), iid per cell, constant in time.
  // Eigenmode: u = u* (1 + amplitude J_n(beta r / R) {cos, sin}(n theta)), v = v*.
  double amplitude = 0.1;
  AngularFactor u_factor{};
  AngularFactor v_factor{};
  int mode_n = 1;
  int mode_m = 1;
  Parity mode_parity = Parity::Cos;
  std::uint64_t seed = 0;
  // Custom: fills the field at history time t (tests).
  std::function<void(double t, const PolarGrid&, Field&)> custom;
};

// Adds a forcing term to the right-hand side at time t (manufactured solutions).
using SourceFn = std::function<void(double t, const PolarGrid&, Field& out)>;

struct SimConfig {
  int nr = 64;
  int ntheta = 128;
  double dt = 0.1;               // requested; snapped so tau / dt is an integer
  double t_end = 100.0;
  double output_interval = 1.0;  // frame spacing in time, rounded to whole steps
  bool keep_frames = true;
  InitialHistory initial;
  Scheme scheme;
  SourceFn source;
};

// Delayed prey densities for the last delay_steps + 1 time levels. Only u enters
// with a delay, so v is not stored.
class HistoryBuffer {
 public:
  HistoryBuffer() = default;
  HistoryBuffer(int delay_steps, std::size_t cells);

  // Frame at step s (valid for s in [newest - delay_steps, newest]).
  [[nodiscard]] const std::vector<double>& at(long long s) const;
  std::vector<double>& slot(long long s);
  [[nodiscard]] int delay_steps() const { return delay_; }

 private:
  int delay_ = 0;
  std::vector<std::vector<double>> ring_;
};

struct Trajectory {
  PolarGrid grid;
  ModelParams params;
  double dt = 0.0;
  int delay_steps = 0;
  std::vector<double> times;
  std::vector<Field> frames;
};

class Simulator {
 public:
  Simulator(const ModelParams& p, const SimConfig& cfg);

  [[nodiscard]] const PolarGrid& grid() const { return grid_; }
  [[nodiscard]] const ModelParams& params() const { return p_; }
  [[nodiscard]] const SimConfig& config() const { return cfg_; }
  [[nodiscard]] const SteadyState& steady() const { return ss_; }
  [[nodiscard]] double dt() const { return dt_; }
  [[nodiscard]] int delay_steps() const { return delay_; }
  [[nodiscard]] long long steps() const { return n_; }
  [[nodiscard]] double time() const { return static_cast<double>(n_) * dt_; }
  [[nodiscard]] int output_stride() const { return stride_; }
  [[nodiscard]] long long total_steps() const;
  [[nodiscard]] const Field& state() const { return cur_; }
  [[nodiscard]] long long rejected_steps() const { return rejected_; }

  // Advance one step of size dt. Throws NumericalError with the failing time when
  // every retry is rejected.
  void step();

  using Observer = std::function<void(double t, const Field&)>;
  // Steps until time() >= t_end (within rounding), calling obs after each step.
  void advance_to(double t_end, const Observer& obs = nullptr);

  // Full run to cfg.t_end; frames every output_stride steps (t = 0 included) go to
  // on_frame and, if keep_frames, into the returned trajectory.
  Trajectory run(const Observer& on_frame = nullptr);

  // Discrete operators, exposed for tests.
  void laplacian(const std::vector<double>& x, double diff, std::vector<double>& out) const;
  void taxis(const std::vector<double>& u, const std::vector<double>& v, std::vector<double>& out) const;
  void explicit_terms(double t, const Field& f, const std::vector<double>& u_delayed, Field& out) const;

 private:
  struct Implicit {
    std::vector<double> lower, upper_p, inv_denom;  // radial Thomas factors
    std::vector<int> width;                          // angular kernel half-width per ring
    std::vector<std::vector<double>> kernel;         // c_0 .. c_{ntheta/2} per ring
  };

  const Implicit& implicit(double c, double diff);
  void solve_implicit(const Implicit& op, std::vector<double>& x);
  bool valid(const Field& f) const;
  bool try_substeps(int halvings, Field& out);
  void fill_history();

  ModelParams p_;
  SimConfig cfg_;
  PolarGrid grid_;
  SteadyState ss_;
  double dt_ = 0.0;
  int delay_ = 0;
  int stride_ = 1;
  long long n_ = 0;
  bool have_prev_ = false;
  long long rejected_ = 0;
  Field cur_, prev_, n_cur_, n_prev_, rhs_, next_;
  std::vector<double> scratch_, ext_;
  HistoryBuffer hist_;
  std::map<std::pair<double, double>, Implicit> ops_;
};

}  // namespace rmdisk
