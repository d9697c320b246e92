#include "elastica/elastica.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace elastica {
namespace {

void check_arc_length(const CriticalPoint& cp, double s, const char* op) {
  if (!(s >= 0.0 && s <= cp.problem().L())) {
    std::ostringstream msg;
    msg << op << ": arc length " << s << " outside [0, " << cp.problem().L() << "]";
    throw std::domain_error(msg.str());
  }
}

// Phase of the cn argument in quarter periods: 2(n+1)s/L + 1 for the hat
// family, 2(n+1)s/L - 1 for the check family.
double quarter_phase(const CriticalPoint& cp, double s) {
  const double t = 2.0 * (cp.n() + 1) * (s / cp.problem().L());
  return cp.family() == Family::Hat ? t + 1.0 : t - 1.0;
}

double orientation(const CriticalPoint& cp) { return cp.sign() == Sign::Plus ? 1.0 : -1.0; }

}  // namespace

std::string_view to_string(Sign sign) { return sign == Sign::Plus ? "plus" : "minus"; }

CriticalPoint::CriticalPoint(const PinnedProblem& problem, Family family, int n, Sign sign,
                             const Modulus& modulus)
    : problem_(problem), family_(family), n_(n), sign_(sign), modulus_(modulus) {
  const auto ke = elliptic::complete_KE(modulus_);
  K_ = ke.k;
  C_ = elliptic::cn_squared_quarter_integral(modulus_);
  const double L = problem_.L();
  alpha_ = 2.0 * (n_ + 1) * K_ / L;
  const double alpha2 = alpha_ * alpha_;
  const double magnitude = 2.0 * alpha2 * modulus_.p() * modulus_.q();
  const double hat_sign = family_ == Family::Hat ? -1.0 : 1.0;
  b_ = hat_sign * (sign_ == Sign::Plus ? 1.0 : -1.0) * magnitude;
  lambda_ = -2.0 * alpha2 * (modulus_.q2() - modulus_.p2());
  const double np1 = n_ + 1;
  energy_ = 16.0 * np1 * np1 * K_ * elliptic::energy_bracket(modulus_) / L;
}

CriticalPoint make_critical_point(const PinnedProblem& problem, const ModulusSolution& modulus,
                                  int n, Sign sign) {
  if (n < 0 || n > kMaxInflectionIndex) {
    std::ostringstream msg;
    msg << "make_critical_point: n = " << n << " outside [0, " << kMaxInflectionIndex << "]";
    throw std::domain_error(msg.str());
  }
  return CriticalPoint(problem, modulus.family, n, sign, modulus.modulus);
}

CriticalPoint make_critical_point(const PinnedProblem& problem, Family family, int n, Sign sign) {
  if (n < 0 || n > kMaxInflectionIndex) {
    std::ostringstream msg;
    msg << "make_critical_point: n = " << n << " outside [0, " << kMaxInflectionIndex << "]";
    throw std::domain_error(msg.str());
  }
  return make_critical_point(problem, solve_modulus(problem, family), n, sign);
}

double curvature_at(const CriticalPoint& cp, double s) {
  check_arc_length(cp, s, "curvature_at");
  const auto jac = elliptic::jacobi_scd_quarter(quarter_phase(cp, s), cp.modulus());
  const double k = orientation(cp) * (4.0 * (cp.n() + 1) * cp.p() * cp.K() / cp.problem().L()) * jac.cn;
  return k + 0.0;  // no -0 at the zeros
}

Vec2 position_at(const CriticalPoint& cp, double s) {
  check_arc_length(cp, s, "position_at");
  if (s == 0.0) return {0.0, 0.0};
  const Modulus& m = cp.modulus();
  const double L = cp.problem().L();
  const double np1 = cp.n() + 1;
  const double t = quarter_phase(cp, s);
  const double integral = elliptic::cn_squared_antiderivative_quarter(t, m);
  const auto jac = elliptic::jacobi_scd_quarter(t, m);
  const double scale = L / (np1 * cp.K());
  // Hat: C(tK) - C(K); check: C(tK) - C(-K) = C(tK) + C(K).
  double x;
  double y;
  if (cp.family() == Family::Hat) {
    x = m.p2() * scale * (integral - cp.quarter_integral()) + (m.q2() - m.p2()) * s;
    y = -cp.p() * scale * jac.cn;
  } else {
    x = -m.p2() * scale * (integral + cp.quarter_integral()) - (m.q2() - m.p2()) * s;
    y = cp.p() * scale * jac.cn;
  }
  return {x, orientation(cp) * y + 0.0};
}

Vec2 tangent_at(const CriticalPoint& cp, double s) {
  check_arc_length(cp, s, "tangent_at");
  const Modulus& m = cp.modulus();
  const auto jac = elliptic::jacobi_scd_quarter(quarter_phase(cp, s), m);
  const double dir = cp.family() == Family::Hat ? 1.0 : -1.0;
  const double tx = dir * (2.0 * m.p2() * jac.cn * jac.cn + m.q2() - m.p2());
  const double ty = dir * 2.0 * cp.p() * jac.sn * jac.dn;
  return {tx, orientation(cp) * ty};
}

double bending_energy(const CriticalPoint& cp) { return cp.energy(); }

SampledCurve sample_curve(const CriticalPoint& cp, long m) {
  if (m < 2) throw std::invalid_argument("sample_curve: need at least 2 samples");
  if (m > kMaxSamples) throw std::length_error("sample_curve: sample count too large");
  const double L = cp.problem().L();
  SampledCurve out;
  const auto count = static_cast<std::size_t>(m);
  out.s.resize(count);
  out.x.resize(count);
  out.y.resize(count);
  out.kappa.resize(count);
  out.tangent_x.resize(count);
  out.tangent_y.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double s = i + 1 == count ? L : L * (static_cast<double>(i) / (m - 1));
    const Vec2 pos = position_at(cp, s);
    const Vec2 tan = tangent_at(cp, s);
    out.s[i] = s;
    out.x[i] = pos.x;
    out.y[i] = pos.y;
    out.kappa[i] = curvature_at(cp, s);
    out.tangent_x[i] = tan.x;
    out.tangent_y[i] = tan.y;
  }
  return out;
}

std::vector<CriticalPoint> enumerate_spectrum(const PinnedProblem& problem, int n_max) {
  if (n_max < 0) throw std::domain_error("enumerate_spectrum: n_max must be >= 0");
  if (n_max > kMaxInflectionIndex) throw std::domain_error("enumerate_spectrum: n_max too large");
  const ModulusSolution hat = solve_hat_modulus(problem);
  const ModulusSolution check = solve_check_modulus(problem);
  std::vector<CriticalPoint> out;
  out.reserve(4 * static_cast<std::size_t>(n_max + 1));
  for (int n = 0; n <= n_max; ++n) {
    for (const ModulusSolution* sol : {&hat, &check}) {
      out.push_back(make_critical_point(problem, *sol, n, Sign::Plus));
      out.push_back(make_critical_point(problem, *sol, n, Sign::Minus));
    }
  }
  std::stable_sort(out.begin(), out.end(), [](const CriticalPoint& a, const CriticalPoint& b) {
    return a.energy() < b.energy();
  });
  return out;
}

std::string describe(const CriticalPoint& cp) {
  std::ostringstream out;
  out << to_string(cp.family()) << (cp.sign() == Sign::Plus ? "+" : "-") << " n=" << cp.n();
  return out.str();
}

}  // namespace elastica
