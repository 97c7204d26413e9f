#pragma once

// Cubic normal-form coefficient of the equivariant Hopf bifurcation at a critical delay.
//
// At tau_c the centre space of mode (n, m) is spanned by e^{+-i omega t} V1 phi^{c,s}.
// A branch is selected by a spatial profile S (a complex combination of phi^c and
// phi^s) and the reduced equation on the corresponding fixed-point space reads
//
//   dz/dt = gamma(tau) z + (g21 / 2) z |z|^2 + ...
//
// with z the coefficient of psi = e^{i omega t} V1 S. Quadratic terms of the restricted
// equation vanish because products of angular index n only excite indices 0 and 2n.
// The second-order corrections solve, mode by mode over the excited families,
//
//   Delta(0)       W11 = B(psi, conj psi),   Delta(2 i omega) W20 = B(psi, psi),
//   Delta(nu; mu)  = nu I - M(mu) - A_tau e^{-nu tau},
//
// and g21 = Y . < C(psi,psi,conj psi) + 2 B(psi, W11) + B(conj psi, W20), S* >, where Y is
// the left null vector normalized by Y (I + tau A_tau e^{-i omega tau}) V1 = 1 and
// S* = S / <S, S>.

#include <array>
#include <complex>
#include <string>
#include <vector>

#include "rmdisk/lineal.hpp"
#include "rmdisk/model.hpp"
#include "rmdisk/spectrum.hpp"

namespace rmdisk {

using cvec2 = std::array<std::complex<double>, 2>;

enum class Branch {
  RotatingCW,   // S = phi^c + i phi^s  (profile ~ e^{i n theta}, pattern turns with angular velocity -omega/n)
  RotatingCCW,  // S = phi^c - i phi^s  (angular velocity +omega/n)
  Standing,     // S = phi^c + phi^s
  StandingCos,  // S = phi^c
};

std::string to_string(Branch b);
// Throws ConfigError on an unknown name.
Branch branch_from_string(const std::string& s);

struct KernelBasis {
  Branch branch = Branch::Standing;
  int n = 0;
  int m = 0;
  double lambda = 0.0;
  double omega = 0.0;
  double tau = 0.0;
  double gauge = 0.0;                  // psi is multiplied by e^{i gauge}
  cvec2 V1{};                          // (1, a21 e^{-i omega tau} / (d2 lambda + i omega))
  cvec2 Y{};                           // left null row, Y (I + tau A_tau e^{-i omega tau}) V1 = 1
  cvec2 V2{};                          // conj(Y): the adjoint vector in the conjugate-linear pairing
  std::complex<double> s_cos, s_sin;   // S = s_cos phi^c + s_sin phi^s (gauge included)
};

// Throws ConfigError for n = 0 or m = 0.
KernelBasis kernel_basis(const HopfPoint& hp, const ModelParams& p, const SteadyState& ss, Branch branch,
                         double gauge = 0.0);

struct NormalFormOptions {
  int radial_modes = 24;          // per excited angular family
  int quad_radial = 0;            // 0: 3 * radial_modes + 40
  int quad_theta = 0;             // 0: 16 n + 16
  double theta0 = 0.0;            // rotation of the angular quadrature nodes
  double resonance_cond = 1e10;   // per-mode condition number limit
  int pairing_time_nodes = 16;    // dual pairing: trapezoid nodes per period
  int pairing_delay_nodes = 16;   // dual pairing: Gauss-Legendre nodes on [-tau, 0]
};

// Second-order correction expanded in Neumann modes of angular index 0 and 2n.
struct ModalCorrection {
  struct Term {
    int n = 0;
    int m = 0;
    Parity parity = Parity::Cos;
    double mu = 0.0;   // eigenvalue
    cvec2 rhs{};       // projection of the quadratic form onto the mode
    cvec2 coeff{};     // solution of the per-mode 2x2 system
    double cond = 0.0;
  };
  std::vector<Term> terms;
};

struct Corrections {
  ModalCorrection W11;
  ModalCorrection W20;
  double max_cond = 0.0;
  double max_solve_residual = 0.0;   // max |Delta coeff - rhs| / max(|rhs|, tiny)
  // Projections of B(psi, conj psi) and B(psi, psi) onto the centre direction S*; both vanish in exact
  // arithmetic (membership in the range of the linear operator).
  double range_residual_11 = 0.0;
  double range_residual_20 = 0.0;
};

// Throws ResonanceError when a per-mode matrix exceeds opts.resonance_cond.
Corrections w_corrections(const KernelBasis& kb, const ModelParams& p, const SteadyState& ss,
                          const KineticForms& forms, const NormalFormOptions& opts = {});

std::complex<double> compute_g21(const KernelBasis& kb, const ModelParams& p, const SteadyState& ss,
                                 const KineticForms& forms, const Corrections& corr,
                                 const NormalFormOptions& opts = {});

struct NormalFormResult {
  int n = 0;
  int m = 0;
  int k = 0;
  Branch branch = Branch::Standing;
  double omega = 0.0;
  double tau_c = 0.0;
  std::complex<double> gamma_prime;
  std::complex<double> g21;
  double tau_prime0 = 0.0;   // Re g21 / Re gamma'
  double rho_prime0 = 0.0;   // Im(gamma' conj g21) / Re gamma'
  bool supercritical = false;   // tau_prime0 < 0
  // Side of tau_c on which the branch lies, from dz/dt = gamma(tau) z + (g21/2) z|z|^2:
  // +1 above, -1 below, 0 degenerate. Equals -sign(tau_prime0).
  int predicted_side = 0;
};

NormalFormResult branch_coefficients(const HopfPoint& hp, std::complex<double> g21, Branch branch);

struct NormalFormReport {
  NormalFormResult result;
  Corrections corrections;
  KernelBasis basis;
};

// Full pipeline at one Hopf point.
NormalFormReport normal_form(const ModelParams& p, const HopfPoint& hp, Branch branch,
                             const NormalFormOptions& opts = {}, double gauge = 0.0);

// 4x4 matrix (phi_i*, phi_j) for the basis
//   { e^{i w t} V1 phi^c, e^{-i w t} conj V1 phi^c, e^{i w t} V1 phi^s, e^{-i w t} conj V1 phi^s }
// and the matching adjoint elements built from V2, evaluated numerically: trapezoid in t over one
// period, Gauss-Legendre over the delay interval, disk quadrature in space.
std::array<std::array<std::complex<double>, 4>, 4> dual_pairing(const KernelBasis& kb, const ModelParams& p,
                                                                const SteadyState& ss,
                                                                const NormalFormOptions& opts = {});

}  // namespace rmdisk
