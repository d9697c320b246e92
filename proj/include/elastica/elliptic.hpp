#pragma once

// Complete and incomplete elliptic integrals, Jacobi elliptic functions and
// the closed-form antiderivative of cn^2, all in double precision.
//
// Conventions: the modulus is p (not the parameter m = p^2). The
// complementary modulus q = sqrt(1 - p^2) is carried alongside p because the
// loop-carrying curves need moduli whose distance to 1 is far below the
// spacing of doubles near 1; see Modulus.

#include <stdexcept>

namespace elastica::elliptic {

/// Elliptic modulus p in [0, 1], stored together with its complement
/// q = sqrt(1 - p^2) and log(q).
///
/// Moduli built with from_p() satisfy 0 <= p < 1. from_log_complement()
/// reaches moduli arbitrarily close to 1 (q may underflow to zero, in which
/// case log(q) remains exact and all functions switch to their p -> 1
/// asymptotic forms).
class Modulus {
 public:
  /// Throws std::domain_error unless 0 <= p < 1.
  static Modulus from_p(double p);
  /// log_q = log(sqrt(1 - p^2)); throws std::domain_error unless log_q <= 0
  /// and finite.
  static Modulus from_log_complement(double log_q);

  double p() const noexcept { return p_; }
  double q() const noexcept { return q_; }
  double log_q() const noexcept { return log_q_; }
  double p2() const noexcept { return p_ * p_; }
  double q2() const noexcept { return q_ * q_; }

  /// True when q is too small for the AGM and Landen iterations; the
  /// hyperbolic (p = 1) limits are exact to double precision there.
  bool hyperbolic_limit() const noexcept;

  friend bool operator==(const Modulus& a, const Modulus& b) noexcept {
    return a.p_ == b.p_ && a.log_q_ == b.log_q_;
  }
  /// Orders by p, breaking ties (p rounded to 1) by decreasing q.
  friend bool operator<(const Modulus& a, const Modulus& b) noexcept {
    if (a.p_ != b.p_) return a.p_ < b.p_;
    return a.log_q_ > b.log_q_;
  }

 private:
  Modulus(double p, double q, double log_q) : p_(p), q_(q), log_q_(log_q) {}
  double p_;
  double q_;
  double log_q_;
};

struct EllipticPair {
  double k;  ///< K(p)
  double e;  ///< E(p)
  double p;
};

struct JacobiTriple {
  double sn;
  double cn;
  double dn;
  double u;
  double p;
};

// --- complete integrals --------------------------------------------------

/// K(p) by the arithmetic-geometric mean. Domain: 0 <= p < 1.
double complete_K(double p);
double complete_K(const Modulus& m);

/// E(p). Domain: 0 <= p <= 1 (E(1) = 1).
double complete_E(double p);
double complete_E(const Modulus& m);

EllipticPair complete_KE(const Modulus& m);

/// dK/dp = E/((1-p^2)p) - K/p. Domain: 0 < p < 1.
double derivative_K(double p);
/// dE/dp = (E - K)/p. Domain: 0 < p < 1.
double derivative_E(double p);

/// Integral of cn^2 over one quarter period, (p^2 K - K + E)/p^2.
/// Evaluated without the 1/p^2 cancellation; finite at p = 0 (value pi/2).
double cn_squared_quarter_integral(const Modulus& m);

/// p^2 K - K + E, the energy bracket. Stable for all p in [0, 1).
double energy_bracket(const Modulus& m);

// --- incomplete integrals ------------------------------------------------

/// F(phi, p) for any real phi (quasi-periodic extension).
double incomplete_F(double phi, const Modulus& m);
/// E(phi, p) for any real phi.
double incomplete_E(double phi, const Modulus& m);

// --- Jacobi functions ----------------------------------------------------

/// Amplitude am(u, p): continuous, increasing, am(u + 2K) = am(u) + pi.
double jacobi_am(double u, double p);
double jacobi_am(double u, const Modulus& m);

JacobiTriple jacobi_scd(double u, double p);
JacobiTriple jacobi_scd(double u, const Modulus& m);

/// (sn, cn, dn) at u = t * K(p). Reduction modulo the period happens in t, so
/// large quarter-period multiples keep full accuracy.
JacobiTriple jacobi_scd_quarter(double t, const Modulus& m);

/// d/du cn(u, p) = -sn dn.
double cn_derivative(double u, double p);

/// Jacobi epsilon function, the integral of dn^2 from 0 to u.
double jacobi_epsilon(double u, const Modulus& m);

/// Integral of cn(t, p)^2 for t in [0, u].
double cn_squared_antiderivative(double u, double p);
double cn_squared_antiderivative(double u, const Modulus& m);
/// Same integral with upper limit t * K(p).
double cn_squared_antiderivative_quarter(double t, const Modulus& m);

/// Adaptive Gauss-Kronrod integral of cn^2 over [a, b]; the slow reference
/// path for cn_squared_antiderivative.
double cn_squared_integral_adaptive(double a, double b, const Modulus& m,
                                    double tolerance = 1e-13);

namespace detail {
/// Carlson symmetric integral R_F(x, y, z).
double carlson_rf(double x, double y, double z);
/// Carlson symmetric integral R_D(x, y, z).
double carlson_rd(double x, double y, double z);
}  // namespace detail

}  // namespace elastica::elliptic
