#pragma once

// Linear stability of the constant steady state, one Neumann mode at a time.
// Each mode with eigenvalue lambda contributes the characteristic function
//
//   Gamma(gamma) = gamma^2 + A gamma + B exp(-gamma tau) + C
//   A = (d1 + d2) lambda - a11,  B = a21 (chi u* lambda + d),  C = (d1 lambda - a11) d2 lambda.
//
// Modes with n > 0 carry this factor twice (cos and sin eigenfunctions).

#include <complex>
#include <optional>
#include <vector>

#include "rmdisk/model.hpp"
#include "rmdisk/spectrum.hpp"

namespace rmdisk {

struct CharCoeffs {
  double A = 0.0;
  double B = 0.0;
  double C = 0.0;
  int n = -1;
  int m = -1;
  double lambda = 0.0;
  double chi = 0.0;
};

CharCoeffs char_coeffs(const ModelParams& p, const SteadyState& ss, double lambda, int n = -1, int m = -1);

std::complex<double> char_value(std::complex<double> gamma, const CharCoeffs& c, double tau);
std::complex<double> char_dgamma(std::complex<double> gamma, const CharCoeffs& c, double tau);

struct H2Flags {
  bool c_minus_b_negative = false;    // C - B < 0
  bool c2_minus_b2_negative = false;  // C^2 - B^2 < 0
  bool positive_frequency = false;    // omega^4 + (A^2 - 2C) omega^2 + C^2 - B^2 has a positive root
};

H2Flags check_h2(const CharCoeffs& c);

// Largest positive root of omega^4 + (A^2 - 2C) omega^2 + (C^2 - B^2) = 0, if any.
std::optional<double> hopf_frequency(const CharCoeffs& c);

// tau_k = (theta0 + 2 pi k) / omega for k = 0..k_max, theta0 in (0, 2 pi].
// Throws NumericalError when |(omega^2 - C)/B| exceeds 1 + 1e-9.
std::vector<double> critical_delays(const CharCoeffs& c, double omega, int k_max);

// d gamma / d tau along the root through i omega at tau.
// Throws NumericalError when the root is degenerate (vanishing dGamma/dgamma).
std::complex<double> root_velocity(const CharCoeffs& c, double omega, double tau);
double transversality(const CharCoeffs& c, double omega, double tau);

// Newton iteration on Gamma(., tau). Throws NumericalError if it fails to converge.
std::complex<double> newton_root(const CharCoeffs& c, double tau, std::complex<double> guess,
                                 double tol = 1e-13, int max_iter = 100);

// Rightmost characteristic root found by multi-start Newton in [-1, 2] x [0, im_max].
std::complex<double> rightmost_root(const CharCoeffs& c, double tau, double im_max = 3.0);

// Number of roots of Gamma inside the rectangle, by the argument principle.
// The boundary must not pass through a root.
int count_roots_in_box(const CharCoeffs& c, double tau, double re_lo, double re_hi, double im_lo,
                       double im_hi);

struct HopfPoint {
  int n = 0;
  int m = 0;
  int k = 0;
  double lambda = 0.0;
  double chi = 0.0;
  double omega_star = 0.0;
  double tau_c = 0.0;
  std::complex<double> gamma_prime;  // d gamma / d tau at tau_c
  double transversality = 0.0;       // Re gamma_prime
  double residual = 0.0;             // |Gamma(i omega_star; tau_c)|
  H2Flags flags;
};

// Hopf points of one mode for k = 0..k_max; empty when the mode has no positive frequency.
std::vector<HopfPoint> hopf_points(const ModelParams& p, const SteadyState& ss, const EigenMode& mode,
                                   int k_max);

struct CurvePoint {
  double chi = 0.0;
  int n = 0;
  int m = 0;
  int k = 0;
  double omega_star = 0.0;
  double tau_c = 0.0;
  double transversality = 0.0;
  double residual = 0.0;
};

struct ModeOnset {
  int n = 0;
  int m = 0;
  // Smallest sampled chi at which a positive Hopf frequency exists (empirical H3 bound).
  std::optional<double> chi_lower;
};

struct ChiTauCurves {
  std::vector<CurvePoint> points;  // ordered by (n, m, k, chi)
  std::vector<ModeOnset> onsets;
};

ChiTauCurves chi_tau_curves(const ModelParams& p, const std::vector<EigenMode>& modes, double chi_lo,
                            double chi_hi, int samples, int k_max = 0);

// Smallest tau_c^0 over the given modes at p.chi; the mode attaining it is reported.
std::optional<HopfPoint> first_hopf(const ModelParams& p, const SteadyState& ss,
                                    const std::vector<EigenMode>& modes);

}  // namespace rmdisk
