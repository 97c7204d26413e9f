#include <gtest/gtest.h>

#include "oracles.hpp"
#include "rmdisk/bessel.hpp"
#include "rmdisk/errors.hpp"

using namespace rmdisk;

TEST(Bessel, DerivativeZerosMatchMultiprecisionBisection) {
  for (int n = 0; n <= 4; ++n) {
    const auto ref = oracle::jprime_zeros_mp(n, 4);
    const auto got = bessel_jprime_zeros(n, 4);
    ASSERT_EQ(got.size(), 4u);
    for (int k = 0; k < 4; ++k) EXPECT_NEAR(got[k], ref[k], 1e-10) << "n=" << n << " k=" << k;
  }
}

// frozen from the oracle above
TEST(Bessel, FirstZerosFrozen) {
  EXPECT_NEAR(bessel_jprime_zeros(0, 1)[0], 3.8317059702075125, 1e-12);
  EXPECT_NEAR(bessel_jprime_zeros(1, 1)[0], 1.8411837813406593, 1e-12);
  EXPECT_NEAR(bessel_jprime_zeros(2, 1)[0], 3.0542369282271404, 1e-12);
}

TEST(Bessel, ValuesMatchBoost) {
  for (int n = 0; n <= 6; ++n) {
    for (double x : {0.0, 0.3, 1.0, 4.7, 12.5, 40.0, 150.0}) {
      const double ref = static_cast<double>(boost::math::cyl_bessel_j(n, oracle::big(x)));
      EXPECT_NEAR(bessel_j(n, x), ref, 1e-13) << n << " " << x;
      EXPECT_NEAR(bessel_jprime(n, x), static_cast<double>(oracle::jprime_mp(n, oracle::big(x))), 1e-13);
    }
  }
}

TEST(Bessel, UptoAgreesWithSingle) {
  const auto all = bessel_j_upto(8, 7.3);
  for (int n = 0; n <= 8; ++n) EXPECT_NEAR(all[n], bessel_j(n, 7.3), 1e-14);
}

TEST(Bessel, SecondDerivativeSatisfiesBesselEquation) {
  for (int n = 0; n <= 3; ++n) {
    for (double x : {0.5, 2.0, 9.0}) {
      const double lhs = x * x * bessel_jsecond(n, x) + x * bessel_jprime(n, x) + (x * x - n * n) * bessel_j(n, x);
      EXPECT_NEAR(lhs, 0.0, 1e-12);
    }
  }
}

TEST(Bessel, NegativeArgumentThrows) { EXPECT_THROW(bessel_j(1, -1.0), NumericalError); }
