#pragma once

// Closed-form critical points of the bending energy among curves of length L
// pinned at (0, 0) and (l, 0).

#include <cstddef>
#include <string>
#include <vector>

#include "elastica/modulus.hpp"

namespace elastica {

enum class Sign { Plus, Minus };

std::string_view to_string(Sign sign);

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

/// Largest inflection index accepted by make_critical_point.
inline constexpr int kMaxInflectionIndex = 1'000'000;

/// One critical point, fixed at construction.
class CriticalPoint {
 public:
  const PinnedProblem& problem() const noexcept { return problem_; }
  Family family() const noexcept { return family_; }
  int n() const noexcept { return n_; }
  Sign sign() const noexcept { return sign_; }
  const Modulus& modulus() const noexcept { return modulus_; }
  double p() const noexcept { return modulus_.p(); }
  double K() const noexcept { return K_; }
  /// Integral of cn^2 over one quarter period.
  double quarter_integral() const noexcept { return C_; }
  /// kappa'(0).
  double b() const noexcept { return b_; }
  double lambda() const noexcept { return lambda_; }
  double energy() const noexcept { return energy_; }
  /// 2 (n + 1) K / L, the frequency of the curvature profile.
  double alpha() const noexcept { return alpha_; }

 private:
  friend CriticalPoint make_critical_point(const PinnedProblem&, Family, int, Sign);
  friend CriticalPoint make_critical_point(const PinnedProblem&, const ModulusSolution&, int,
                                           Sign);
  CriticalPoint(const PinnedProblem& problem, Family family, int n, Sign sign,
                const Modulus& modulus);

  PinnedProblem problem_;
  Family family_;
  int n_;
  Sign sign_;
  Modulus modulus_;
  double K_;
  double C_;  // integral of cn^2 over a quarter period
  double alpha_;
  double b_;
  double lambda_;
  double energy_;
};

/// Solves the modulus equation and fills in multipliers and energy.
/// Throws std::domain_error for n outside [0, kMaxInflectionIndex].
CriticalPoint make_critical_point(const PinnedProblem& problem, Family family, int n, Sign sign);
/// Same, reusing a modulus already solved for this problem and family.
CriticalPoint make_critical_point(const PinnedProblem& problem, const ModulusSolution& modulus,
                                  int n, Sign sign);

/// All accessors below throw std::domain_error unless 0 <= s <= L.
double curvature_at(const CriticalPoint& cp, double s);
Vec2 position_at(const CriticalPoint& cp, double s);
Vec2 tangent_at(const CriticalPoint& cp, double s);

/// 16 (n+1)^2 K (p^2 K - K + E) / L.
double bending_energy(const CriticalPoint& cp);

struct SampledCurve {
  std::vector<double> s;
  std::vector<double> x;
  std::vector<double> y;
  std::vector<double> kappa;
  std::vector<double> tangent_x;
  std::vector<double> tangent_y;

  std::size_t size() const noexcept { return s.size(); }
};

/// m uniformly spaced samples including both endpoints.
/// Throws std::invalid_argument for m < 2 and std::length_error for m > kMaxSamples.
inline constexpr long kMaxSamples = 100'000'000;
SampledCurve sample_curve(const CriticalPoint& cp, long m);

/// The 4 (n_max + 1) critical points with n <= n_max, by ascending energy.
/// Equal energies keep the order n, Hat before Check, Plus before Minus.
std::vector<CriticalPoint> enumerate_spectrum(const PinnedProblem& problem, int n_max);

/// Short label such as "hat+ n=0".
std::string describe(const CriticalPoint& cp);

}  // namespace elastica
