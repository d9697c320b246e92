#include "elastica/modulus.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace elastica {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kHatLowerBracket = 1e-12;
// log(1/q) at which K(p) is about 1e7; covers ratios up to 1 - 2e-7.
constexpr double kCheckUpperBracket = 1e7;

struct ValueSlope {
  double value;
  double slope;
};

struct Root {
  double x;
  double residual;
  int iterations;
};

// Newton iteration safeguarded by a sign-change bracket; a step that leaves
// the bracket is replaced by bisection.
template <class Fn>
Root bracketed_newton(Fn&& f, double lo, double hi) {
  const double f_lo = f(lo).value;
  const bool rising = f_lo < 0.0;
  double x = 0.5 * (lo + hi);
  ValueSlope fx = f(x);
  Root best{x, fx.value, 0};
  for (int it = 1; it <= 200; ++it) {
    if (std::abs(fx.value) < std::abs(best.residual)) best = {x, fx.value, it};
    if (fx.value == 0.0) break;
    if ((fx.value < 0.0) == rising) {
      lo = x;
    } else {
      hi = x;
    }
    double next = x - fx.value / fx.slope;
    if (!std::isfinite(next) || !(next > lo && next < hi)) next = 0.5 * (lo + hi);
    const bool tiny_step = std::abs(next - x) <= 2.0 * kEps * std::abs(x);
    x = next;
    fx = f(x);
    best.iterations = it;
    if (tiny_step || hi - lo <= 4.0 * kEps * std::abs(x)) {
      if (std::abs(fx.value) < std::abs(best.residual)) best = {x, fx.value, it};
      break;
    }
  }
  return best;
}

void check_ratio(const PinnedProblem& problem, const char* op) {
  const double r = problem.ratio();
  if (r < kMinRatio || r > kMaxRatio) {
    std::ostringstream msg;
    msg << op << ": ratio l/L = " << r << " outside the solvable range [" << kMinRatio
        << ", " << kMaxRatio << "]";
    throw std::domain_error(msg.str());
  }
}

ModulusSolution finish(Family family, const Modulus& m, const Root& root, const char* op) {
  if (!(std::abs(root.residual) <= kModulusResidualTolerance)) {
    std::ostringstream msg;
    msg << op << ": residual " << root.residual << " above tolerance after "
        << root.iterations << " iterations";
    throw ConvergenceError(msg.str());
  }
  return {family, m, root.residual, root.iterations};
}

// d(E/K)/dp with K' = pC/q^2 and E' = -p(K - C), C the quarter-period
// integral of cn^2; algebraically the textbook closed forms without their
// 1/p cancellation.
double phi_slope(const Modulus& m) {
  const double k = elliptic::complete_K(m);
  const double e = elliptic::complete_E(m);
  const double c = elliptic::cn_squared_quarter_integral(m);
  const double p = m.p();
  return (-p * (k - c) * k - e * p * c / m.q2()) / (k * k);
}

// d(E/K)/d(log 1/q); tends to -(E/K)^2 as q -> 0.
double phi_slope_log(const Modulus& m) {
  const double k = elliptic::complete_K(m);
  const double e = elliptic::complete_E(m);
  const double q2 = m.q2();
  return (2.0 * q2 * e * k - q2 * k * k - e * e) / (m.p2() * k * k);
}

}  // namespace

PinnedProblem::PinnedProblem(double l, double L) : l_(l), L_(L) {
  if (!(std::isfinite(l) && std::isfinite(L) && l > 0.0 && l < L)) {
    std::ostringstream msg;
    msg << "pinned problem requires 0 < l < L (got l = " << l << ", L = " << L << ")";
    throw std::invalid_argument(msg.str());
  }
}

std::string_view to_string(Family family) {
  return family == Family::Hat ? "hat" : "check";
}

double phi_ratio(const Modulus& m) { return elliptic::complete_E(m) / elliptic::complete_K(m); }

double phi_ratio(double p) { return phi_ratio(Modulus::from_p(p)); }

double phi_ratio_derivative(double p) {
  if (!(p > 0.0 && p < 1.0)) throw std::domain_error("phi_ratio_derivative: requires 0 < p < 1");
  return phi_slope(Modulus::from_p(p));
}

ModulusSolution solve_hat_modulus(const PinnedProblem& problem) {
  check_ratio(problem, "solve_hat_modulus");
  const double r = problem.ratio();
  auto equation = [r](double p) {
    const Modulus m = Modulus::from_p(p);
    return ValueSlope{2.0 * phi_ratio(m) - 1.0 - r, 2.0 * phi_slope(m)};
  };
  const Root root = bracketed_newton(equation, kHatLowerBracket, p_zero());
  return finish(Family::Hat, Modulus::from_p(root.x), root, "solve_hat_modulus");
}

ModulusSolution solve_check_modulus(const PinnedProblem& problem) {
  check_ratio(problem, "solve_check_modulus");
  const double r = problem.ratio();
  // Solved in eta = log(1/q): p itself rounds to 1 long before the ratio
  // reaches its upper limit.
  auto equation = [r](double eta) {
    const Modulus m = Modulus::from_log_complement(-eta);
    return ValueSlope{1.0 - 2.0 * phi_ratio(m) - r, -2.0 * phi_slope_log(m)};
  };
  const Root root = bracketed_newton(equation, -p_zero_modulus().log_q(), kCheckUpperBracket);
  return finish(Family::Check, Modulus::from_log_complement(-root.x), root,
                "solve_check_modulus");
}

ModulusSolution solve_modulus(const PinnedProblem& problem, Family family) {
  return family == Family::Hat ? solve_hat_modulus(problem) : solve_check_modulus(problem);
}

Modulus p_zero_modulus() {
  static const Modulus cached = [] {
    auto equation = [](double p) {
      const Modulus m = Modulus::from_p(p);
      return ValueSlope{2.0 * phi_ratio(m) - 1.0, 2.0 * phi_slope(m)};
    };
    const Root root = bracketed_newton(equation, 0.5, 0.99);
    return Modulus::from_p(root.x);
  }();
  return cached;
}

double p_zero() { return p_zero_modulus().p(); }

double r_star() {
  static const double cached = 2.0 * phi_ratio(1.0 / std::sqrt(2.0)) - 1.0;
  return cached;
}

}  // namespace elastica
