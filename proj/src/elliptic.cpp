#include "elastica/elliptic.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "elastica/quadrature.hpp"

namespace elastica::elliptic {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kLn4 = 1.3862943611198906188;

// Below this log(q) the p = 1 forms (tanh, sech) are exact to ~1e-20.
constexpr double kHyperbolicLogQ = -46.0;
// Outside [kNewtonLow, 1 - kNewtonHigh] the amplitude is obtained by Newton
// inversion of F instead of the Landen back-substitution.
constexpr double kNewtonLow = 1e-8;
constexpr double kNewtonHigh = 1e-8;

[[noreturn]] void domain(const std::string& what) { throw std::domain_error(what); }

double checked_p(double p, const char* op) {
  if (!(p >= 0.0 && p < 1.0)) {
    domain(std::string(op) + ": modulus must satisfy 0 <= p < 1, got " + std::to_string(p));
  }
  return p;
}

// Arithmetic-geometric mean of 1 and q, plus the sum used for E.
struct AgmResult {
  double mean;
  double e_sum;  // c0^2/2 + sum_{n>=1} 2^(n-1) c_n^2
};

AgmResult agm(const Modulus& m) {
  double a = 1.0;
  double b = m.q();
  double sum = 0.5 * m.p2();
  double weight = 0.5;
  for (int i = 0; i < 64 && std::abs(a - b) > kEps * a; ++i) {
    const double c = 0.5 * (a - b);
    const double next_b = std::sqrt(a * b);
    a = 0.5 * (a + b);
    b = next_b;
    weight *= 2.0;
    sum += weight * c * c;
  }
  return {0.5 * (a + b), sum};
}

long nearest_period(double x) { return std::lround(x); }

double sign_of_period(long j) { return (j % 2 == 0) ? 1.0 : -1.0; }

// F(phi) for phi in [-pi/2, pi/2].
double principal_F(double phi, const Modulus& m) {
  if (m.hyperbolic_limit()) return std::atanh(std::sin(phi));
  const double s = std::sin(phi);
  const double c = std::cos(phi);
  const double dn2 = m.q2() + m.p2() * c * c;
  return s * detail::carlson_rf(c * c, dn2, 1.0);
}

double principal_E(double phi, const Modulus& m) {
  const double s = std::sin(phi);
  if (m.hyperbolic_limit()) return s;
  const double c = std::cos(phi);
  const double dn2 = m.q2() + m.p2() * c * c;
  return s * detail::carlson_rf(c * c, dn2, 1.0) -
         m.p2() / 3.0 * s * s * s * detail::carlson_rd(c * c, dn2, 1.0);
}

// Safeguarded Newton inversion of F on [0, pi/2] for target in [0, K].
double newton_amplitude(double target, const Modulus& m, double start) {
  double lo = 0.0;
  double hi = kPi / 2.0;
  double phi = std::clamp(start, lo, hi);
  for (int it = 0; it < 100; ++it) {
    const double f = principal_F(phi, m) - target;
    if (f == 0.0) break;
    if (f > 0.0) {
      hi = phi;
    } else {
      lo = phi;
    }
    const double c = std::cos(phi);
    const double dn = std::sqrt(m.q2() + m.p2() * c * c);
    double next = phi - f * dn;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - phi) <= 2.0 * kEps * std::max(1.0, phi)) {
      phi = next;
      break;
    }
    phi = next;
  }
  return phi;
}

// Descending Landen transformation with phase back-substitution.
double landen_amplitude(double u, const Modulus& m) {
  std::array<double, 40> a{};
  std::array<double, 40> c{};
  a[0] = 1.0;
  c[0] = m.p();
  double b = m.q();
  int n = 0;
  while (n + 1 < static_cast<int>(a.size()) && std::abs(c[n]) > kEps * a[n]) {
    a[n + 1] = 0.5 * (a[n] + b);
    c[n + 1] = 0.5 * (a[n] - b);
    b = std::sqrt(a[n] * b);
    ++n;
  }
  double phi = std::ldexp(a[n] * u, n);
  for (int i = n; i > 0; --i) {
    phi = 0.5 * (phi + std::asin(std::clamp(c[i] * std::sin(phi) / a[i], -1.0, 1.0)));
  }
  return phi;
}

// Amplitude of u0 in [-K, K]; result in [-pi/2, pi/2].
double principal_amplitude(double u0, const Modulus& m) {
  const double magnitude = std::abs(u0);
  double phi;
  if (m.hyperbolic_limit()) {
    phi = 2.0 * std::atan(std::tanh(0.5 * magnitude));
  } else if (m.p() < kNewtonLow) {
    phi = newton_amplitude(magnitude, m, magnitude);
  } else if (m.q() < std::sqrt(2.0 * kNewtonHigh)) {
    phi = newton_amplitude(magnitude, m, 2.0 * std::atan(std::tanh(0.5 * magnitude)));
  } else {
    phi = landen_amplitude(magnitude, m);
  }
  return std::copysign(phi, u0);
}

struct Reduced {
  long period;        // u = u0 + 2 * period * K
  double u0;          // in [-K, K]
  double complement;  // K - |u0|, carried separately to keep it exact
};

Reduced reduce_quarter(double t, double k) {
  const long j = nearest_period(0.5 * t);
  const double t0 = t - 2.0 * static_cast<double>(j);
  return {j, t0 * k, (1.0 - std::abs(t0)) * k};
}

Reduced reduce(double u, double k) {
  const long j = nearest_period(0.5 * u / k);
  const double u0 = u - 2.0 * static_cast<double>(j) * k;
  return {j, u0, k - std::abs(u0)};
}

// Solves K - F(pi/2 - chi) = v for chi, using
//   K - F(pi/2 - chi) = sin(chi) R_F(q^2 cos^2 chi, q^2 cos^2 chi + sin^2 chi, q^2).
double complement_amplitude(double v, const Modulus& m) {
  const double q2 = m.q2();
  double lo = 0.0;
  double hi = kPi / 2.0;
  double chi = std::atan(m.q() * std::sinh(v));
  for (int it = 0; it < 100; ++it) {
    const double s = std::sin(chi);
    const double c = std::cos(chi);
    const double f = s * detail::carlson_rf(q2 * c * c, q2 * c * c + s * s, q2) - v;
    if (f == 0.0) break;
    if (f > 0.0) {
      hi = chi;
    } else {
      lo = chi;
    }
    double next = chi - f * std::sqrt(q2 * c * c + s * s);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - chi) <= 2.0 * kEps * std::max(chi, kEps)) {
      chi = next;
      break;
    }
    chi = next;
  }
  return chi;
}

// Below this q, cos(am u) near u = K is taken from the complementary angle;
// cos of an angle close to pi/2 would lose most of its digits.
constexpr double kComplementQ = 1e-3;

struct Angles {
  double phi;
  double s;
  double c;
};

Angles principal_angles(const Reduced& r, const Modulus& m) {
  if (r.complement == 0.0) {
    const double sign = r.u0 < 0.0 ? -1.0 : 1.0;
    return {sign * kPi / 2.0, sign, 0.0};
  }
  if (m.q() < kComplementQ && r.complement < std::abs(r.u0)) {
    const double chi = complement_amplitude(r.complement, m);
    const double sign = r.u0 < 0.0 ? -1.0 : 1.0;
    return {sign * (kPi / 2.0 - chi), sign * std::cos(chi), std::sin(chi)};
  }
  const double phi = principal_amplitude(r.u0, m);
  return {phi, std::sin(phi), std::cos(phi)};
}

JacobiTriple triple_from_reduced(const Reduced& r, double u, const Modulus& m) {
  const double sign = sign_of_period(r.period);
  if (m.hyperbolic_limit()) {
    const double sech = 1.0 / std::cosh(r.u0);
    return {sign * std::tanh(r.u0), sign * sech, sech, u, m.p()};
  }
  const Angles a = principal_angles(r, m);
  return {sign * a.s, sign * a.c, std::sqrt(m.q2() + m.p2() * a.c * a.c), u, m.p()};
}

// Integral of cn^2 over [0, u0], as sn cn/dn + (q^2/3) sn^3 R_D(cn^2, 1, dn^2).
// Both terms have the sign of u0, so nothing cancels.
double principal_cn_squared(const Reduced& r, const Modulus& m) {
  if (m.hyperbolic_limit()) return std::tanh(r.u0);
  const Angles a = principal_angles(r, m);
  const double dn2 = m.q2() + m.p2() * a.c * a.c;
  return a.s * a.c / std::sqrt(dn2) +
         m.q2() / 3.0 * a.s * a.s * a.s * detail::carlson_rd(a.c * a.c, 1.0, dn2);
}

}  // namespace

// --- Modulus -------------------------------------------------------------

Modulus Modulus::from_p(double p) {
  checked_p(p, "Modulus::from_p");
  const double q = std::sqrt((1.0 - p) * (1.0 + p));
  const double log_q = 0.5 * (std::log1p(-p) + std::log1p(p));
  return Modulus(p, q, log_q);
}

Modulus Modulus::from_log_complement(double log_q) {
  if (!(log_q <= 0.0) || !std::isfinite(log_q)) {
    domain("Modulus::from_log_complement: log(q) must be finite and <= 0");
  }
  const double p = std::sqrt(-std::expm1(2.0 * log_q));
  return Modulus(p, std::exp(log_q), log_q);
}

bool Modulus::hyperbolic_limit() const noexcept { return log_q_ < kHyperbolicLogQ; }

// --- complete integrals --------------------------------------------------

double complete_K(const Modulus& m) {
  if (m.hyperbolic_limit()) return kLn4 - m.log_q();
  return kPi / (2.0 * agm(m).mean);
}

double complete_E(const Modulus& m) {
  if (m.hyperbolic_limit()) return 1.0;
  const AgmResult r = agm(m);
  return kPi / (2.0 * r.mean) * (1.0 - r.e_sum);
}

double complete_K(double p) { return complete_K(Modulus::from_p(checked_p(p, "complete_K"))); }

double complete_E(double p) {
  if (p == 1.0) return 1.0;
  if (!(p >= 0.0 && p <= 1.0)) {
    domain("complete_E: modulus must satisfy 0 <= p <= 1, got " + std::to_string(p));
  }
  return complete_E(Modulus::from_p(p));
}

EllipticPair complete_KE(const Modulus& m) {
  return {complete_K(m), complete_E(m), m.p()};
}

double derivative_K(double p) {
  if (!(p > 0.0 && p < 1.0)) domain("derivative_K: requires 0 < p < 1");
  const Modulus m = Modulus::from_p(p);
  return complete_E(m) / (m.q2() * p) - complete_K(m) / p;
}

double derivative_E(double p) {
  if (!(p > 0.0 && p < 1.0)) domain("derivative_E: requires 0 < p < 1");
  const Modulus m = Modulus::from_p(p);
  return (complete_E(m) - complete_K(m)) / p;
}

double cn_squared_quarter_integral(const Modulus& m) {
  if (m.hyperbolic_limit()) return 1.0;
  const double k = complete_K(m);
  if (m.p() < 0.5) return k - detail::carlson_rd(0.0, m.q2(), 1.0) / 3.0;
  return (complete_E(m) - m.q2() * k) / m.p2();
}

double energy_bracket(const Modulus& m) {
  if (m.hyperbolic_limit()) return 1.0;
  if (m.p() < 0.5) return m.p2() * cn_squared_quarter_integral(m);
  return complete_E(m) - m.q2() * complete_K(m);
}

// --- incomplete integrals ------------------------------------------------

double incomplete_F(double phi, const Modulus& m) {
  const long j = nearest_period(phi / kPi);
  const double phi0 = phi - static_cast<double>(j) * kPi;
  return 2.0 * static_cast<double>(j) * complete_K(m) + principal_F(phi0, m);
}

double incomplete_E(double phi, const Modulus& m) {
  const long j = nearest_period(phi / kPi);
  const double phi0 = phi - static_cast<double>(j) * kPi;
  return 2.0 * static_cast<double>(j) * complete_E(m) + principal_E(phi0, m);
}

// --- Jacobi functions ----------------------------------------------------

double jacobi_am(double u, const Modulus& m) {
  const Reduced r = reduce(u, complete_K(m));
  const double phi0 = m.hyperbolic_limit() ? principal_amplitude(r.u0, m)
                                           : principal_angles(r, m).phi;
  return phi0 + static_cast<double>(r.period) * kPi;
}

double jacobi_am(double u, double p) { return jacobi_am(u, Modulus::from_p(checked_p(p, "jacobi_am"))); }

JacobiTriple jacobi_scd(double u, const Modulus& m) {
  return triple_from_reduced(reduce(u, complete_K(m)), u, m);
}

JacobiTriple jacobi_scd(double u, double p) {
  return jacobi_scd(u, Modulus::from_p(checked_p(p, "jacobi_scd")));
}

JacobiTriple jacobi_scd_quarter(double t, const Modulus& m) {
  const double k = complete_K(m);
  return triple_from_reduced(reduce_quarter(t, k), t * k, m);
}

double cn_derivative(double u, double p) {
  const JacobiTriple j = jacobi_scd(u, Modulus::from_p(checked_p(p, "cn_derivative")));
  return -j.sn * j.dn;
}

double jacobi_epsilon(double u, const Modulus& m) {
  const Reduced r = reduce(u, complete_K(m));
  const double e0 = m.q2() * r.u0 + m.p2() * principal_cn_squared(r, m);
  return 2.0 * static_cast<double>(r.period) * complete_E(m) + e0;
}

double cn_squared_antiderivative(double u, const Modulus& m) {
  const Reduced r = reduce(u, complete_K(m));
  return 2.0 * static_cast<double>(r.period) * cn_squared_quarter_integral(m) +
         principal_cn_squared(r, m);
}

double cn_squared_antiderivative(double u, double p) {
  return cn_squared_antiderivative(u, Modulus::from_p(checked_p(p, "cn_squared_antiderivative")));
}

double cn_squared_antiderivative_quarter(double t, const Modulus& m) {
  const Reduced r = reduce_quarter(t, complete_K(m));
  return 2.0 * static_cast<double>(r.period) * cn_squared_quarter_integral(m) +
         principal_cn_squared(r, m);
}

double cn_squared_integral_adaptive(double a, double b, const Modulus& m, double tolerance) {
  const auto integrand = [&m](double t) {
    const double cn = jacobi_scd(t, m).cn;
    return cn * cn;
  };
  return integrate_adaptive(integrand, a, b, tolerance, tolerance).value;
}

// --- Carlson symmetric forms ---------------------------------------------

namespace detail {

double carlson_rf(double x, double y, double z) {
  constexpr double kTol = 0.0008;
  if (std::min({x, y, z}) < 0.0 || std::min({x + y, x + z, y + z}) <= 0.0) {
    domain("carlson_rf: arguments must be nonnegative with at most one zero");
  }
  double dx = 1.0;
  double dy = 1.0;
  double dz = 1.0;
  double mean = 0.0;
  for (int it = 0; it < 2000; ++it) {
    const double sx = std::sqrt(x);
    const double sy = std::sqrt(y);
    const double sz = std::sqrt(z);
    const double lambda = sx * (sy + sz) + sy * sz;
    x = 0.25 * (x + lambda);
    y = 0.25 * (y + lambda);
    z = 0.25 * (z + lambda);
    mean = (x + y + z) / 3.0;
    dx = (mean - x) / mean;
    dy = (mean - y) / mean;
    dz = (mean - z) / mean;
    if (std::max({std::abs(dx), std::abs(dy), std::abs(dz)}) < kTol) break;
  }
  const double e2 = dx * dy - dz * dz;
  const double e3 = dx * dy * dz;
  return (1.0 + (e2 / 24.0 - 0.1 - 3.0 * e3 / 44.0) * e2 + e3 / 14.0) / std::sqrt(mean);
}

double carlson_rd(double x, double y, double z) {
  constexpr double kTol = 0.0004;
  constexpr double c1 = 3.0 / 14.0;
  constexpr double c2 = 1.0 / 6.0;
  constexpr double c3 = 9.0 / 22.0;
  constexpr double c4 = 3.0 / 26.0;
  constexpr double c5 = 0.25 * c3;
  constexpr double c6 = 1.5 * c4;
  if (std::min(x, y) < 0.0 || x + y <= 0.0 || z <= 0.0) {
    domain("carlson_rd: requires x, y >= 0, x + y > 0, z > 0");
  }
  double sum = 0.0;
  double factor = 1.0;
  double dx = 1.0;
  double dy = 1.0;
  double dz = 1.0;
  double mean = 0.0;
  for (int it = 0; it < 2000; ++it) {
    const double sx = std::sqrt(x);
    const double sy = std::sqrt(y);
    const double sz = std::sqrt(z);
    const double lambda = sx * (sy + sz) + sy * sz;
    sum += factor / (sz * (z + lambda));
    factor *= 0.25;
    x = 0.25 * (x + lambda);
    y = 0.25 * (y + lambda);
    z = 0.25 * (z + lambda);
    mean = 0.2 * (x + y + 3.0 * z);
    dx = (mean - x) / mean;
    dy = (mean - y) / mean;
    dz = (mean - z) / mean;
    if (std::max({std::abs(dx), std::abs(dy), std::abs(dz)}) < kTol) break;
  }
  const double ea = dx * dy;
  const double eb = dz * dz;
  const double ec = ea - eb;
  const double ed = ea - 6.0 * eb;
  const double ee = ed + ec + ec;
  return 3.0 * sum +
         factor * (1.0 + ed * (-c1 + c5 * ed - c6 * dz * ee) +
                   dz * (c2 * ee + dz * (-c3 * ec + dz * c4 * ea))) /
             (mean * std::sqrt(mean));
}

}  // namespace detail
}  // namespace elastica::elliptic
