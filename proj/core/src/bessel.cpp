#include "rmdisk/bessel.hpp"

#include <cmath>
#include <string>

#include "rmdisk/errors.hpp"

namespace rmdisk {

namespace {

constexpr double kSeriesLimit = 5.0;

void check_args(int n, double x) {
  if (n < 0) throw NumericalError("bessel: negative order " + std::to_string(n));
  if (!(x >= 0.0) || !std::isfinite(x)) {
    throw NumericalError("bessel: argument must be finite and >= 0");
  }
}

// Ascending series; cancellation stays below ~e^x * eps, acceptable for x < kSeriesLimit.
double series(int n, double x) {
  const double h = 0.5 * x;
  double term = 1.0;
  for (int k = 1; k <= n; ++k) term *= h / k;
  double sum = term;
  const double h2 = h * h;
  for (int k = 1; k < 200; ++k) {
    term *= -h2 / (static_cast<double>(k) * (k + n));
    sum += term;
    if (std::abs(term) < 1e-18 * std::abs(sum)) break;
  }
  return sum;
}

// Miller's backward recurrence normalized by J_0 + 2 sum J_2k = 1.
std::vector<double> miller(int nmax, double x) {
  const double big = std::max(static_cast<double>(nmax), x);
  int start = static_cast<int>(big + 20.0 + std::sqrt(60.0 * big));
  if (start % 2) ++start;

  std::vector<double> out(static_cast<std::size_t>(nmax) + 1, 0.0);
  double next = 0.0;  // J_{k+1}
  double cur = 1e-280;
  double norm = 0.0;
  const double two_over_x = 2.0 / x;
  for (int k = start; k >= 1; --k) {
    // cur holds J_k (unnormalized)
    if (k <= nmax) out[static_cast<std::size_t>(k)] = cur;
    if (k % 2 == 0) norm += 2.0 * cur;
    const double prev = k * two_over_x * cur - next;
    next = cur;
    cur = prev;
    if (std::abs(cur) > 1e250) {
      const double s = 1e-250;
      cur *= s;
      next *= s;
      norm *= s;
      for (int i = k; i <= nmax; ++i) out[static_cast<std::size_t>(i)] *= s;
    }
  }
  out[0] = cur;
  norm += cur;
  for (double& v : out) v /= norm;
  return out;
}

}  // namespace

std::vector<double> bessel_j_upto(int nmax, double x) {
  check_args(nmax, x);
  if (x == 0.0) {
    std::vector<double> out(static_cast<std::size_t>(nmax) + 1, 0.0);
    out[0] = 1.0;
    return out;
  }
  if (x < kSeriesLimit) {
    std::vector<double> out(static_cast<std::size_t>(nmax) + 1);
    for (int k = 0; k <= nmax; ++k) out[static_cast<std::size_t>(k)] = series(k, x);
    return out;
  }
  return miller(nmax, x);
}

double bessel_j(int n, double x) {
  check_args(n, x);
  if (x == 0.0) return n == 0 ? 1.0 : 0.0;
  if (x < kSeriesLimit) return series(n, x);
  return miller(n, x)[static_cast<std::size_t>(n)];
}

double bessel_jprime(int n, double x) {
  check_args(n, x);
  const auto j = bessel_j_upto(n + 1, x);
  if (n == 0) return -j[1];
  return 0.5 * (j[static_cast<std::size_t>(n - 1)] - j[static_cast<std::size_t>(n + 1)]);
}

double bessel_jsecond(int n, double x) {
  if (!(x > 0.0)) throw NumericalError("bessel_jsecond: x must be > 0");
  const auto j = bessel_j_upto(n + 1, x);
  const double jn = j[static_cast<std::size_t>(n)];
  const double jp =
      n == 0 ? -j[1] : 0.5 * (j[static_cast<std::size_t>(n - 1)] - j[static_cast<std::size_t>(n + 1)]);
  return -jp / x - (1.0 - static_cast<double>(n) * n / (x * x)) * jn;
}

std::vector<double> bessel_jprime_zeros(int n, int count) {
  if (n < 0) throw NumericalError("bessel_jprime_zeros: negative order");
  if (count < 1) throw NumericalError("bessel_jprime_zeros: count must be >= 1");

  std::vector<double> zeros;
  zeros.reserve(static_cast<std::size_t>(count));
  constexpr double step = 0.1;
  double a = std::max(static_cast<double>(n), 0.5);
  double fa = bessel_jprime(n, a);
  while (static_cast<int>(zeros.size()) < count) {
    const double b = a + step;
    const double fb = bessel_jprime(n, b);
    if (fa == 0.0) {
      zeros.push_back(a);
    } else if (fa * fb < 0.0) {
      double lo = a, hi = b, flo = fa;
      while (hi - lo > 1e-6) {
        const double mid = 0.5 * (lo + hi);
        const double fm = bessel_jprime(n, mid);
        if (flo * fm <= 0.0) {
          hi = mid;
        } else {
          lo = mid;
          flo = fm;
        }
      }
      // Newton polish inside the bracket.
      double x = 0.5 * (lo + hi);
      for (int it = 0; it < 20; ++it) {
        const double f = bessel_jprime(n, x);
        const double df = bessel_jsecond(n, x);
        const double nx = x - f / df;
        if (!(nx > lo - 1e-6 && nx < hi + 1e-6)) break;
        const bool done = std::abs(nx - x) < 1e-15 * x;
        x = nx;
        if (done) break;
      }
      zeros.push_back(x);
    }
    a = b;
    fa = fb;
  }
  return zeros;
}

}  // namespace rmdisk
