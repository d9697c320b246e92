#include <gtest/gtest.h>

#include <boost/math/special_functions/ellint_1.hpp>
#include <boost/math/special_functions/ellint_2.hpp>
#include <boost/math/special_functions/jacobi_elliptic.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include "elastica/elliptic.hpp"
#include "elastica/quadrature.hpp"

namespace el = elastica::elliptic;
using std::numbers::pi;

namespace {

// Reference values computed to 30 digits with an arbitrary-precision library.
constexpr double kK05 = 1.685750354812596042871203657799;
constexpr double kE05 = 1.467462209339427155459795266991;
constexpr double kKInvSqrt2 = 1.854074677301371918433850347195;
constexpr double kAm07At06 = 0.6814464878851570158622718456734;
constexpr double kCn2IntegralAt13 = 0.8241494486587136432554534380417;

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST(CompleteIntegrals, ValuesAtZero) {
  EXPECT_EQ(el::complete_K(0.0), pi / 2);
  EXPECT_EQ(el::complete_E(0.0), pi / 2);
  EXPECT_EQ(el::complete_E(1.0), 1.0);
}

TEST(CompleteIntegrals, ReferenceValues) {
  EXPECT_LT(rel(el::complete_K(0.5), kK05), 1e-15);
  EXPECT_LT(rel(el::complete_E(0.5), kE05), 1e-15);
  EXPECT_LT(rel(el::complete_K(1.0 / std::sqrt(2.0)), kKInvSqrt2), 1e-15);
}

TEST(CompleteIntegrals, MatchBoost) {
  for (int i = 0; i <= 200; ++i) {
    const double p = 0.995 * i / 200.0;
    EXPECT_LT(rel(el::complete_K(p), boost::math::ellint_1(p)), 1e-13) << p;
    EXPECT_LT(rel(el::complete_E(p), boost::math::ellint_2(p)), 1e-13) << p;
  }
}

TEST(CompleteIntegrals, EMatchesQuadratureOfDefinition) {
  // Substitution z = sin(t) removes the endpoint singularity.
  const double p = 0.5;
  const auto r = elastica::integrate_adaptive(
      [p](double t) { return std::sqrt(1.0 - p * p * std::sin(t) * std::sin(t)); }, 0.0, pi / 2);
  EXPECT_LT(rel(el::complete_E(p), r.value), 1e-14);
}

TEST(CompleteIntegrals, DomainErrors) {
  EXPECT_THROW(el::complete_K(-0.1), std::domain_error);
  EXPECT_THROW(el::complete_K(1.0), std::domain_error);
  EXPECT_THROW(el::complete_E(1.0 + 1e-12), std::domain_error);
  EXPECT_THROW(el::complete_E(-1e-12), std::domain_error);
  EXPECT_THROW(el::derivative_K(0.0), std::domain_error);
  EXPECT_THROW(el::derivative_E(1.0), std::domain_error);
}

TEST(CompleteIntegrals, KGrowsWithoutOverflowNearOne) {
  double prev = 0.0;
  for (double gap : {1e-2, 1e-4, 1e-6, 1e-8, 1e-10, 1e-12}) {
    const double k = el::complete_K(1.0 - gap);
    EXPECT_TRUE(std::isfinite(k));
    EXPECT_GT(k, prev);
    prev = k;
  }
}

TEST(CompleteIntegrals, RStarFromKAndE) {
  const double p = 1.0 / std::sqrt(2.0);
  const double r = 2.0 * el::complete_E(p) / el::complete_K(p) - 1.0;
  EXPECT_NEAR(r, 0.456946581, 1e-9);
}

TEST(CompleteIntegrals, LegendreRelation) {
  for (int i = 0; i < 100; ++i) {
    const double p = 0.01 + 0.98 * i / 99.0;
    const double q = std::sqrt(1.0 - p * p);
    const double lhs = el::complete_E(p) * el::complete_K(q) + el::complete_E(q) * el::complete_K(p) -
                       el::complete_K(p) * el::complete_K(q);
    EXPECT_LT(rel(lhs, pi / 2), 1e-11) << p;
  }
}

TEST(CompleteIntegrals, LargeModulusFromLogComplement) {
  // K ~ log(4/q) as q -> 0.
  const auto m = el::Modulus::from_log_complement(-200.0);
  EXPECT_TRUE(m.hyperbolic_limit());
  EXPECT_LT(rel(el::complete_K(m), std::log(4.0) + 200.0), 1e-15);
  EXPECT_EQ(el::complete_E(m), 1.0);

  const auto near = el::Modulus::from_log_complement(-40.0);
  EXPECT_FALSE(near.hyperbolic_limit());
  EXPECT_LT(rel(el::complete_K(near), std::log(4.0) + 40.0), 1e-15);
}

TEST(Derivatives, Signs) {
  for (double p : {0.3, 0.6, 0.9}) {
    EXPECT_GT(el::derivative_K(p), 0.0);
    EXPECT_LT(el::derivative_E(p), 0.0);
  }
}

TEST(Derivatives, MatchFiniteDifferences) {
  const double h = 1e-6;
  for (int i = 1; i <= 9; ++i) {
    const double p = 0.1 * i;
    const double dk = (el::complete_K(p + h) - el::complete_K(p - h)) / (2 * h);
    const double de = (el::complete_E(p + h) - el::complete_E(p - h)) / (2 * h);
    EXPECT_LT(rel(el::derivative_K(p), dk), 1e-6) << p;
    EXPECT_LT(rel(el::derivative_E(p), de), 1e-6) << p;
  }
}

TEST(Derivatives, EnergyBracketDerivativeIsPK) {
  const double h = 1e-6;
  for (double p : {0.2, 0.5, 0.8, 0.95}) {
    const auto up = el::Modulus::from_p(p + h);
    const auto dn = el::Modulus::from_p(p - h);
    const double fd = (el::energy_bracket(up) - el::energy_bracket(dn)) / (2 * h);
    EXPECT_LT(rel(fd, p * el::complete_K(p)), 1e-6) << p;
  }
}

TEST(Carlson, KnownValues) {
  // Carlson (1995), table values.
  EXPECT_NEAR(el::detail::carlson_rf(1.0, 2.0, 0.0), 1.3110287771461, 1e-13);
  EXPECT_NEAR(el::detail::carlson_rd(0.0, 2.0, 1.0), 1.7972103521034, 1e-13);
}

TEST(Amplitude, ReferenceAndLandmarks) {
  EXPECT_EQ(el::jacobi_am(0.0, 0.5), 0.0);
  EXPECT_NEAR(el::jacobi_am(el::complete_K(0.5), 0.5), pi / 2, 1e-15);
  EXPECT_NEAR(el::jacobi_am(0.7, 0.6), kAm07At06, 1e-15);
  // Inverts the incomplete integral of the first kind.
  const double phi = el::jacobi_am(0.7, 0.6);
  EXPECT_NEAR(boost::math::ellint_1(0.6, phi), 0.7, 1e-12);
}

TEST(Amplitude, QuasiPeriodicAndIncreasing) {
  for (double p : {0.1, 0.5, 0.9, 0.999}) {
    const double k = el::complete_K(p);
    double prev = -1e300;
    for (int i = -40; i <= 40; ++i) {
      const double u = 0.1 * i * k;
      const double a = el::jacobi_am(u, p);
      EXPECT_GT(a, prev);
      prev = a;
      EXPECT_NEAR(el::jacobi_am(u + 2 * k, p), a + pi, 1e-12) << p << " " << u;
    }
  }
}

TEST(Amplitude, InvertsIncompleteF) {
  const auto m = el::Modulus::from_p(0.8);
  for (double phi : {-4.0, -0.3, 0.2, 1.0, 2.5, 7.0}) {
    EXPECT_NEAR(el::jacobi_am(el::incomplete_F(phi, m), m), phi, 1e-13);
  }
}

TEST(Jacobi, SpecialPoints) {
  const auto z = el::jacobi_scd(0.0, 0.3);
  EXPECT_EQ(z.sn, 0.0);
  EXPECT_EQ(z.cn, 1.0);
  EXPECT_EQ(z.dn, 1.0);

  const double p = 0.7;
  const auto t = el::jacobi_scd(el::complete_K(p), p);
  EXPECT_NEAR(t.cn, 0.0, 1e-15);
  EXPECT_NEAR(t.sn, 1.0, 1e-15);
  EXPECT_NEAR(t.dn, std::sqrt(1 - p * p), 1e-15);

  EXPECT_NEAR(el::jacobi_scd(3 * el::complete_K(0.4), 0.4).cn, 0.0, 1e-15);
}

TEST(Jacobi, TrigonometricLimit) {
  for (double u : {-3.0, 0.4, 2.0, 11.0}) {
    const auto t = el::jacobi_scd(u, 0.0);
    EXPECT_NEAR(t.sn, std::sin(u), 1e-15);
    EXPECT_NEAR(t.cn, std::cos(u), 1e-15);
    EXPECT_EQ(t.dn, 1.0);
  }
}

TEST(Jacobi, MatchBoostAndIdentities) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> pu(0.0, 0.999);
  std::uniform_real_distribution<double> uu(-1.0, 1.0);
  for (int i = 0; i < 500; ++i) {
    const double p = pu(rng);
    const double u = 10.0 * el::complete_K(p) * uu(rng);
    const auto t = el::jacobi_scd(u, p);
    double cn = 0.0;
    double dn = 0.0;
    const double sn = boost::math::jacobi_elliptic(p, u, &cn, &dn);
    EXPECT_NEAR(t.sn, sn, 1e-12);
    EXPECT_NEAR(t.cn, cn, 1e-12);
    EXPECT_NEAR(t.dn, dn, 1e-12);
    EXPECT_NEAR(t.sn * t.sn + t.cn * t.cn, 1.0, 1e-12);
    EXPECT_NEAR(t.dn * t.dn + p * p * t.sn * t.sn, 1.0, 1e-12);
    EXPECT_GE(t.dn, std::sqrt(1 - p * p) - 1e-15);
  }
}

TEST(Jacobi, Antiperiodicity) {
  for (double p : {0.2, 0.6, 0.95}) {
    const double k = el::complete_K(p);
    for (int i = -50; i <= 50; ++i) {
      const double u = 0.2 * i * k;
      EXPECT_NEAR(el::jacobi_scd(u + 2 * k, p).cn, -el::jacobi_scd(u, p).cn, 1e-11);
    }
  }
}

TEST(Jacobi, QuarterPeriodArgument) {
  const auto m = el::Modulus::from_p(0.9);
  const double k = el::complete_K(m);
  for (double t : {-2.5, 0.0, 0.3, 1.0, 3.7}) {
    const auto a = el::jacobi_scd_quarter(t, m);
    const auto b = el::jacobi_scd(t * k, m);
    EXPECT_NEAR(a.sn, b.sn, 1e-14);
    EXPECT_NEAR(a.cn, b.cn, 1e-14);
  }
  // Zeros of cn land exactly on odd multiples.
  EXPECT_EQ(el::jacobi_scd_quarter(1.0, m).cn, 0.0);
  EXPECT_EQ(el::jacobi_scd_quarter(101.0, m).cn, 0.0);
}

TEST(Jacobi, DerivativeOfCn) {
  EXPECT_EQ(el::cn_derivative(0.0, 0.5), 0.0);
  EXPECT_NEAR(el::cn_derivative(el::complete_K(0.5), 0.5), -std::sqrt(0.75), 1e-15);
  const double h = 1e-6;
  const double fd = (el::jacobi_scd(0.3 + h, 0.8).cn - el::jacobi_scd(0.3 - h, 0.8).cn) / (2 * h);
  EXPECT_NEAR(el::cn_derivative(0.3, 0.8), fd, 1e-6);
}

TEST(Jacobi, DomainErrors) {
  EXPECT_THROW(el::jacobi_scd(0.1, 1.0), std::domain_error);
  EXPECT_THROW(el::jacobi_am(0.1, -0.2), std::domain_error);
  EXPECT_THROW(el::Modulus::from_p(1.0), std::domain_error);
  EXPECT_THROW(el::Modulus::from_log_complement(0.1), std::domain_error);
}

TEST(CnSquared, ZeroAndQuarterPeriod) {
  EXPECT_EQ(el::cn_squared_antiderivative(0.0, 0.6), 0.0);
  const double p = 0.6;
  const double k = el::complete_K(p);
  const double e = el::complete_E(p);
  EXPECT_LT(rel(el::cn_squared_antiderivative(k, p), (p * p * k - k + e) / (p * p)), 1e-14);
}

TEST(CnSquared, ReferenceValue) {
  EXPECT_NEAR(el::cn_squared_antiderivative(1.3, 0.75), kCn2IntegralAt13, 1e-15);
  EXPECT_NEAR(el::cn_squared_integral_adaptive(0.0, 1.3, el::Modulus::from_p(0.75)),
              kCn2IntegralAt13, 1e-13);
}

TEST(CnSquared, QuarterIntegralIdentity) {
  for (int i = 0; i < 50; ++i) {
    const double p = 0.02 + 0.96 * i / 49.0;
    const auto m = el::Modulus::from_p(p);
    const double k = el::complete_K(p);
    const double e = el::complete_E(p);
    const double closed = (p * p * k - k + e) / (p * p);
    EXPECT_LT(rel(el::cn_squared_quarter_integral(m), closed), 1e-10) << p;
    EXPECT_LT(rel(el::cn_squared_integral_adaptive(0.0, k, m), closed), 1e-10) << p;
  }
}

TEST(CnSquared, DifferencesMatchQuadrature) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> pu(0.05, 0.99);
  std::uniform_real_distribution<double> uu(-3.0, 3.0);
  for (int i = 0; i < 60; ++i) {
    const auto m = el::Modulus::from_p(pu(rng));
    const double k = el::complete_K(m);
    const double u = uu(rng) * k;
    const double v = uu(rng) * k;
    const double closed = el::cn_squared_antiderivative(u, m) - el::cn_squared_antiderivative(v, m);
    EXPECT_NEAR(closed, el::cn_squared_integral_adaptive(v, u, m), 1e-10) << m.p();
  }
}

TEST(CnSquared, AdditiveOverPeriods) {
  const auto m = el::Modulus::from_p(0.85);
  const double c = el::cn_squared_quarter_integral(m);
  for (int j = -6; j <= 6; ++j) {
    EXPECT_NEAR(el::cn_squared_antiderivative_quarter(j, m), j * c, 1e-13 * (1 + std::abs(j)));
  }
}

TEST(CnSquared, TinyComplementMatchesQuadrature) {
  // q = 1e-12: the integral is close to tanh over most of the quarter period.
  const auto m = el::Modulus::from_log_complement(std::log(1e-12));
  const double k = el::complete_K(m);
  for (double t : {0.2, 0.7, 0.95, 0.999, 1.0, 1.3, 2.0}) {
    EXPECT_NEAR(el::cn_squared_antiderivative_quarter(t, m),
                el::cn_squared_integral_adaptive(0.0, t * k, m), 1e-11)
        << t;
  }
}

TEST(Epsilon, MatchesIncompleteE) {
  const auto m = el::Modulus::from_p(0.7);
  for (double u : {-5.0, -1.0, 0.5, 2.0, 9.0}) {
    EXPECT_NEAR(el::jacobi_epsilon(u, m), el::incomplete_E(el::jacobi_am(u, m), m), 1e-13);
  }
  EXPECT_NEAR(el::incomplete_E(1.1, m), boost::math::ellint_2(0.7, 1.1), 1e-14);
  EXPECT_NEAR(el::incomplete_F(1.1, m), boost::math::ellint_1(0.7, 1.1), 1e-14);
}
