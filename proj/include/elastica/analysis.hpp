#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "elastica/elastica.hpp"

namespace elastica {

/// Raised when a sampled curve is too coarse for a reliable count.
class ResolutionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct GeometryReport {
  int interior_inflections = 0;
  bool graph_representable = false;
  int loop_count = 0;
  double max_unit_speed_error = 0.0;
  double max_el_residual = 0.0;  ///< scaled, see euler_lagrange_residual
};

/// Strict sign changes of kappa at interior samples. Values with
/// |kappa| < 1e-10 max|kappa| count as zero. Throws ResolutionError when the
/// curve has fewer than 128 samples per sign change found (plus one).
int count_interior_inflections(const SampledCurve& curve);

/// Transverse self-intersections of the polyline (x, y), adjacent segments
/// excluded, crossings closer than 1e-7 L merged. Throws ResolutionError on a
/// collinear overlap of non-adjacent segments.
int count_self_intersections(const SampledCurve& curve);

/// Self-intersections that close a loop: the sub-arc between the two crossing
/// parameters has no curvature sign change. Crossings between different
/// half-waves (hat curves with l/L small and n >= 2) are not loops.
int detect_loops(const SampledCurve& curve);

/// Hat curves: true iff 1 - 2p^2 > 0, i.e. l/L > R*; exactly at the boundary
/// (|1 - 2p^2| <= 1e-12) the answer is false. Check curves: always false.
bool classify_graph_representability(const CriticalPoint& cp);

/// |kappa'' + kappa^3/2 - lambda kappa/2| / max(1, |lambda| K, K^3/2), where
/// K = max|kappa| and kappa'' comes from a five-point stencil. s must stay two
/// stencil steps inside (0, L).
double euler_lagrange_residual(const CriticalPoint& cp, double s);

/// Samples cp with samples_per_period points on each of its n + 1 periods of
/// length L/(n+1) and fills every field of the report.
GeometryReport analyze_geometry(const CriticalPoint& cp, int samples_per_period = 512);

struct OrderingVerdict {
  bool holds = true;
  std::string violated_clause;  ///< empty when holds

  explicit operator bool() const noexcept { return holds; }
};

/// For n <= n_max: W(hat_n) = (n+1)^2 W(hat_0) and W(check_n) = (n+1)^2
/// W(check_0) to 1e-14 relative, and W(hat_n) < W(check_n).
OrderingVerdict verify_energy_ordering(const PinnedProblem& problem, int n_max,
                                       double tolerance_scale = 1.0);

/// |W(hat_0) - W(check_0)| for each ratio, at length L.
std::vector<double> energy_gap_small_l_limit(double L, const std::vector<double>& r_values);

struct CrossoverResult {
  double ratio = 0.0;  ///< where W(check_0) = W(hat_1)
  double lower = 0.0;  ///< final bracket
  double upper = 0.0;
  int iterations = 0;
};

/// Bisection for W(check_0) - W(hat_1) = 0 on [lower, upper]. Throws
/// std::domain_error unless the difference is negative at lower and positive
/// at upper.
CrossoverResult locate_energy_crossover(double lower = 0.05, double upper = 0.95,
                                        double tolerance = 1e-13);

/// Bisection on the classifier for the hat n = 0 curve; the ratio where
/// graph representability switches on.
double locate_graph_boundary(double tolerance = 1e-13);

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct VerificationOptions {
  /// Multiplies every tolerance; values far below 1 force failures.
  double tolerance_scale = 1.0;
  int samples_per_period = 512;
  /// Loop and inflection counts are checked for n up to this bound.
  int geometry_n_max = 6;
};

struct VerificationReport {
  std::vector<CheckResult> checks;

  bool all_passed() const;
  const CheckResult* first_failure() const;
};

/// Invariant battery for one problem over every critical point with n <= n_max.
VerificationReport run_verification(const PinnedProblem& problem, int n_max,
                                    const VerificationOptions& options = {});

}  // namespace elastica
