#pragma once

// Modulus equations for the two families of pinned elasticae.
//
//   hat:    2 E(p)/K(p) - 1 = l/L,   0 < p < p0
//   check: -2 E(p)/K(p) + 1 = l/L,   p0 < p < 1
//
// where p0 is the root of 2 E/K = 1.

#include <string_view>

#include "elastica/elliptic.hpp"

namespace elastica {

using elliptic::Modulus;

/// Boundary data: curve of length `L` pinned at (0, 0) and (l, 0).
class PinnedProblem {
 public:
  /// Throws std::invalid_argument unless 0 < l < L (both finite).
  PinnedProblem(double l, double L);

  double l() const noexcept { return l_; }
  double L() const noexcept { return L_; }
  double ratio() const noexcept { return l_ / L_; }

 private:
  double l_;
  double L_;
};

enum class Family { Hat, Check };

std::string_view to_string(Family family);

/// Raised when a root solve cannot meet its residual tolerance.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ModulusSolution {
  Family family;
  Modulus modulus;
  double residual;  ///< family equation evaluated at the root
  int iterations;

  double p() const noexcept { return modulus.p(); }
};

/// Smallest and largest ratios l/L accepted by the modulus solvers.
inline constexpr double kMinRatio = 1e-6;
inline constexpr double kMaxRatio = 1.0 - 1e-6;
/// Residual bound every returned solution satisfies.
inline constexpr double kModulusResidualTolerance = 1e-12;

/// E(p)/K(p); 1 at p = 0, decreasing to 0 as p -> 1.
double phi_ratio(double p);
double phi_ratio(const Modulus& m);

/// d(E/K)/dp from the closed-form derivatives of K and E.
double phi_ratio_derivative(double p);

ModulusSolution solve_hat_modulus(const PinnedProblem& problem);
ModulusSolution solve_check_modulus(const PinnedProblem& problem);
ModulusSolution solve_modulus(const PinnedProblem& problem, Family family);

/// Root of 2 E(p)/K(p) - 1 = 0 (about 0.90890855).
Modulus p_zero_modulus();
double p_zero();

/// 2 E(1/sqrt 2)/K(1/sqrt 2) - 1, the ratio at which the hat multiplier vanishes.
double r_star();

}  // namespace elastica
