#pragma once

// Discrete bending energy over equal-segment polylines with pinned ends, and a
// constrained descent that should land on the closed-form minimizer.

#include <string>
#include <vector>

#include "elastica/elastica.hpp"

namespace elastica::oracle {

struct DiscreteCurve {
  std::vector<Vec2> vertices;
  double segment_length = 0.0;

  std::size_t size() const noexcept { return vertices.size(); }
};

/// Turning-angle energy: sum over interior vertices of theta^2 / h, where
/// theta is the signed angle between consecutive segments and h the
/// segment_length field. Throws std::invalid_argument for fewer than 3
/// vertices and std::domain_error for a degenerate (zero-length) segment.
double discrete_energy(const DiscreteCurve& curve);

/// Exact gradient of discrete_energy with respect to every vertex, endpoints
/// included.
std::vector<Vec2> energy_gradient(const DiscreteCurve& curve);

/// Largest of |segment length - L/(m-1)| and the endpoint offsets from
/// (0, 0) and (l, 0).
double constraint_violation(const DiscreteCurve& curve, const PinnedProblem& problem);

/// Nearest feasible curve: segment directions are kept, lengths set to
/// L/(m-1), and the far end pulled onto (l, 0) by Newton steps in the segment
/// angles. Throws ConvergenceError when the far end cannot be reached.
DiscreteCurve project_constraints(const DiscreteCurve& curve, const PinnedProblem& problem);

/// Feasible starting curves: "arc-up", "arc-down" (circular arcs above and
/// below the chord) and "random:<text>" (an arc of random orientation with
/// smooth random perturbations, deterministic in <text>). Throws
/// std::invalid_argument for an unknown seed.
DiscreteCurve seed_curve(const PinnedProblem& problem, int m, const std::string& seed);

struct MinimizeOptions {
  int max_iterations = 100000;
  /// Stop once the projected gradient norm is below this times the energy.
  double gradient_tolerance = 1e-8;
};

struct DescentReport {
  int iterations = 0;
  double final_energy = 0.0;
  double max_constraint_violation = 0.0;
  double hausdorff_to_reference = 0.0;
  bool converged = false;
  double gradient_norm = 0.0;
  /// Closed-form minimizer nearest in Hausdorff distance (hat n = 0, this sign).
  Sign reference_sign = Sign::Plus;
  /// Critical point whose energy is within 3% of final_energy, nearest first;
  /// empty when none is.
  std::string classification;
  bool monotone = true;
  /// Energy after every accepted step, accumulated from per-step changes.
  std::vector<double> energy_trace;
};

struct MinimizeResult {
  DiscreteCurve curve;
  DescentReport report;
};

/// Projected, preconditioned gradient descent with Armijo backtracking.
/// Throws std::domain_error for m < 16 and std::invalid_argument for an
/// infeasible initial curve. Hitting the iteration cap is reported through
/// report.converged, not thrown.
MinimizeResult minimize(const PinnedProblem& problem, const DiscreteCurve& init,
                        const MinimizeOptions& options = {});
MinimizeResult minimize(const PinnedProblem& problem, int m, const std::string& seed,
                        const MinimizeOptions& options = {});

/// Symmetric Hausdorff distance between two polylines (point-to-segment).
double hausdorff_distance(const std::vector<Vec2>& a, const std::vector<Vec2>& b);

}  // namespace elastica::oracle
