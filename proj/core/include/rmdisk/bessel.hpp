#pragma once

#include <vector>

namespace rmdisk {

// Bessel function of the first kind J_n(x), n >= 0, x >= 0.
// Absolute error below 1e-13 for x <= 200. Throws NumericalError for x < 0.
double bessel_j(int n, double x);

// J_0(x) .. J_nmax(x) from a single backward recurrence.
std::vector<double> bessel_j_upto(int nmax, double x);

// d/dx J_n(x).
double bessel_jprime(int n, double x);

// d^2/dx^2 J_n(x), from Bessel's equation; requires x > 0.
double bessel_jsecond(int n, double x);

// First `count` positive zeros of J_n', strictly increasing.
std::vector<double> bessel_jprime_zeros(int n, int count);

}  // namespace rmdisk
