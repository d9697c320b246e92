#include "elastica/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace elastica {
namespace {

constexpr double kDeadBand = 1e-10;
constexpr int kMinSamplesPerHalfWave = 128;
constexpr double kLoopMergeRadius = 1e-7;
constexpr double kGraphBand = 1e-12;

struct Segment {
  double x0, y0, x1, y1;
  double xmin, xmax, ymin, ymax;
};

Segment make_segment(const SampledCurve& c, std::size_t i) {
  const double x0 = c.x[i];
  const double y0 = c.y[i];
  const double x1 = c.x[i + 1];
  const double y1 = c.y[i + 1];
  return {x0, y0, x1, y1, std::min(x0, x1), std::max(x0, x1), std::min(y0, y1), std::max(y0, y1)};
}

double cross(double ax, double ay, double bx, double by) { return ax * by - ay * bx; }

std::string format(double v) {
  std::ostringstream out;
  out.precision(3);
  out << v;
  return out.str();
}

// Five-point stencil width for kappa''; balances truncation against the
// ~1e-15 relative error of each curvature evaluation.
double stencil_step(const CriticalPoint& cp) { return 8e-3 / cp.alpha(); }

double max_abs_curvature(const CriticalPoint& cp) {
  return 4.0 * (cp.n() + 1) * cp.p() * cp.K() / cp.problem().L();
}

}  // namespace

int count_interior_inflections(const SampledCurve& curve) {
  const std::size_t m = curve.size();
  if (m < 3) return 0;
  double peak = 0.0;
  for (double k : curve.kappa) peak = std::max(peak, std::abs(k));
  const double band = kDeadBand * peak;
  int changes = 0;
  int last = 0;
  for (std::size_t i = 1; i + 1 < m; ++i) {
    const double k = curve.kappa[i];
    if (std::abs(k) <= band) continue;
    const int sign = k > 0.0 ? 1 : -1;
    if (last != 0 && sign != last) ++changes;
    last = sign;
  }
  if (m < static_cast<std::size_t>(kMinSamplesPerHalfWave) * static_cast<std::size_t>(changes + 1)) {
    throw ResolutionError("count_interior_inflections: " + std::to_string(m) +
                          " samples are too few for " + std::to_string(changes) +
                          " sign changes");
  }
  return changes;
}

namespace {

struct Crossing {
  std::size_t first;   // segment indices, first < second
  std::size_t second;
};

std::vector<Crossing> find_crossings(const SampledCurve& curve) {
  const std::size_t m = curve.size();
  if (m < 4) return {};
  const double length = curve.s.back() - curve.s.front();
  const double merge = kLoopMergeRadius * length;
  std::vector<Segment> segs;
  segs.reserve(m - 1);
  for (std::size_t i = 0; i + 1 < m; ++i) segs.push_back(make_segment(curve, i));

  std::vector<std::pair<double, double>> found;
  std::vector<Crossing> crossings;
  for (std::size_t i = 0; i < segs.size(); ++i) {
    const Segment& a = segs[i];
    const double rx = a.x1 - a.x0;
    const double ry = a.y1 - a.y0;
    for (std::size_t j = i + 2; j < segs.size(); ++j) {
      const Segment& b = segs[j];
      if (b.xmin > a.xmax || b.xmax < a.xmin || b.ymin > a.ymax || b.ymax < a.ymin) continue;
      const double sx = b.x1 - b.x0;
      const double sy = b.y1 - b.y0;
      const double qx = b.x0 - a.x0;
      const double qy = b.y0 - a.y0;
      const double denom = cross(rx, ry, sx, sy);
      const double scale = std::hypot(rx, ry) * std::hypot(sx, sy);
      if (std::abs(denom) <= 1e-14 * scale) {
        if (std::abs(cross(qx, qy, rx, ry)) <= 1e-14 * scale) {
          const double rr = rx * rx + ry * ry;
          const double t0 = (qx * rx + qy * ry) / rr;
          const double t1 = t0 + (sx * rx + sy * ry) / rr;
          if (std::max(t0, t1) >= 0.0 && std::min(t0, t1) <= 1.0) {
            throw ResolutionError("detect_loops: collinear overlap between segments " +
                                  std::to_string(i) + " and " + std::to_string(j));
          }
        }
        continue;
      }
      const double t = cross(qx, qy, sx, sy) / denom;
      const double u = cross(qx, qy, rx, ry) / denom;
      if (t < 0.0 || t > 1.0 || u < 0.0 || u > 1.0) continue;
      const double px = a.x0 + t * rx;
      const double py = a.y0 + t * ry;
      const bool seen = std::any_of(found.begin(), found.end(), [&](const auto& f) {
        return std::hypot(f.first - px, f.second - py) <= merge;
      });
      if (!seen) {
        found.emplace_back(px, py);
        crossings.push_back({i, j});
      }
    }
  }
  return crossings;
}

}  // namespace

int count_self_intersections(const SampledCurve& curve) {
  return static_cast<int>(find_crossings(curve).size());
}

int detect_loops(const SampledCurve& curve) {
  const auto crossings = find_crossings(curve);
  if (crossings.empty()) return 0;
  double peak = 0.0;
  for (double k : curve.kappa) peak = std::max(peak, std::abs(k));
  const double band = kDeadBand * peak;
  // changes[k]: curvature sign changes among samples 0..k.
  std::vector<int> changes(curve.size(), 0);
  int last = 0;
  for (std::size_t k = 0; k < curve.size(); ++k) {
    const double v = curve.kappa[k];
    int here = k == 0 ? 0 : changes[k - 1];
    if (std::abs(v) > band) {
      const int sign = v > 0.0 ? 1 : -1;
      if (last != 0 && sign != last) ++here;
      last = sign;
    }
    changes[k] = here;
  }
  int loops = 0;
  for (const auto& c : crossings) {
    if (changes[c.second + 1] == changes[c.first]) ++loops;
  }
  return loops;
}

bool classify_graph_representability(const CriticalPoint& cp) {
  if (cp.family() == Family::Check) return false;
  const Modulus& m = cp.modulus();
  // X'(0) = 1 - 2p^2; X' attains its minimum at the endpoints.
  return m.q2() - m.p2() > kGraphBand;
}

double euler_lagrange_residual(const CriticalPoint& cp, double s) {
  const double h = stencil_step(cp);
  const double k0 = curvature_at(cp, s);
  const double k1 = curvature_at(cp, s + h);
  const double km1 = curvature_at(cp, s - h);
  const double k2 = curvature_at(cp, s + 2.0 * h);
  const double km2 = curvature_at(cp, s - 2.0 * h);
  const double second = (-k2 + 16.0 * k1 - 30.0 * k0 + 16.0 * km1 - km2) / (12.0 * h * h);
  const double residual = second + 0.5 * k0 * k0 * k0 - 0.5 * cp.lambda() * k0;
  const double kmax = max_abs_curvature(cp);
  // The cubic term keeps the scale meaningful where lambda vanishes (l/L = R*).
  const double scale = std::max({1.0, std::abs(cp.lambda()) * kmax, 0.5 * kmax * kmax * kmax});
  return std::abs(residual) / scale;
}

namespace {

void fill_pointwise(const CriticalPoint& cp, const SampledCurve& curve, GeometryReport& report) {
  for (std::size_t i = 0; i < curve.size(); ++i) {
    const double norm = std::hypot(curve.tangent_x[i], curve.tangent_y[i]);
    report.max_unit_speed_error = std::max(report.max_unit_speed_error, std::abs(norm - 1.0));
  }
  const double h = stencil_step(cp);
  const double L = cp.problem().L();
  for (std::size_t i = 1; i + 1 < curve.size(); ++i) {
    const double s = curve.s[i];
    if (s < 2.0 * h || s > L - 2.0 * h) continue;
    report.max_el_residual = std::max(report.max_el_residual, euler_lagrange_residual(cp, s));
  }
}

long sample_count(const CriticalPoint& cp, int samples_per_period) {
  const int per = std::max(samples_per_period, 2);
  return static_cast<long>(cp.n() + 1) * per + 1;
}

// Unit speed and Euler-Lagrange residual only.
GeometryReport pointwise_checks(const CriticalPoint& cp, int samples_per_period) {
  GeometryReport report;
  fill_pointwise(cp, sample_curve(cp, sample_count(cp, samples_per_period)), report);
  report.interior_inflections = cp.n();
  report.graph_representable = classify_graph_representability(cp);
  return report;
}

}  // namespace

GeometryReport analyze_geometry(const CriticalPoint& cp, int samples_per_period) {
  const SampledCurve curve = sample_curve(cp, sample_count(cp, samples_per_period));
  GeometryReport report;
  report.interior_inflections = count_interior_inflections(curve);
  report.graph_representable = classify_graph_representability(cp);
  report.loop_count = detect_loops(curve);
  fill_pointwise(cp, curve, report);
  return report;
}

OrderingVerdict verify_energy_ordering(const PinnedProblem& problem, int n_max,
                                       double tolerance_scale) {
  if (n_max < 0) throw std::domain_error("verify_energy_ordering: n_max must be >= 0");
  const double tol = 1e-14 * tolerance_scale;
  const ModulusSolution hat = solve_hat_modulus(problem);
  const ModulusSolution check = solve_check_modulus(problem);
  const double hat0 = make_critical_point(problem, hat, 0, Sign::Plus).energy();
  const double check0 = make_critical_point(problem, check, 0, Sign::Plus).energy();
  for (int n = 0; n <= n_max; ++n) {
    const double factor = static_cast<double>(n + 1) * (n + 1);
    const double wh = make_critical_point(problem, hat, n, Sign::Plus).energy();
    const double wc = make_critical_point(problem, check, n, Sign::Plus).energy();
    if (!(std::abs(wh / (factor * hat0) - 1.0) <= tol)) {
      return {false, "hat energy scaling fails at n = " + std::to_string(n)};
    }
    if (!(std::abs(wc / (factor * check0) - 1.0) <= tol)) {
      return {false, "check energy scaling fails at n = " + std::to_string(n)};
    }
    if (!(wh < wc)) {
      return {false, "hat energy not below check energy at n = " + std::to_string(n)};
    }
  }
  return {};
}

std::vector<double> energy_gap_small_l_limit(double L, const std::vector<double>& r_values) {
  std::vector<double> gaps;
  gaps.reserve(r_values.size());
  for (double r : r_values) {
    if (!(r > 0.0 && r < 1.0)) {
      throw std::domain_error("energy_gap_small_l_limit: ratio " + format(r) + " outside (0, 1)");
    }
    const PinnedProblem problem(r * L, L);
    const double wh = make_critical_point(problem, Family::Hat, 0, Sign::Plus).energy();
    const double wc = make_critical_point(problem, Family::Check, 0, Sign::Plus).energy();
    gaps.push_back(std::abs(wc - wh));
  }
  return gaps;
}

CrossoverResult locate_energy_crossover(double lower, double upper, double tolerance) {
  auto difference = [](double r) {
    const PinnedProblem problem(r, 1.0);
    return make_critical_point(problem, Family::Check, 0, Sign::Plus).energy() -
           make_critical_point(problem, Family::Hat, 1, Sign::Plus).energy();
  };
  if (!(difference(lower) < 0.0 && difference(upper) > 0.0)) {
    throw std::domain_error("locate_energy_crossover: bracket does not straddle the crossover");
  }
  CrossoverResult result{0.5 * (lower + upper), lower, upper, 0};
  while (result.upper - result.lower > tolerance && result.iterations < 200) {
    const double mid = 0.5 * (result.lower + result.upper);
    if (difference(mid) < 0.0) {
      result.lower = mid;
    } else {
      result.upper = mid;
    }
    ++result.iterations;
  }
  result.ratio = 0.5 * (result.lower + result.upper);
  return result;
}

double locate_graph_boundary(double tolerance) {
  auto graph = [](double r) {
    return classify_graph_representability(
        make_critical_point(PinnedProblem(r, 1.0), Family::Hat, 0, Sign::Plus));
  };
  double lo = 0.1;
  double hi = 0.9;
  for (int it = 0; it < 200 && hi - lo > tolerance; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (graph(mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return 0.5 * (lo + hi);
}

bool VerificationReport::all_passed() const { return first_failure() == nullptr; }

const CheckResult* VerificationReport::first_failure() const {
  for (const auto& c : checks) {
    if (!c.passed) return &c;
  }
  return nullptr;
}

VerificationReport run_verification(const PinnedProblem& problem, int n_max,
                                    const VerificationOptions& options) {
  if (n_max < 0) throw std::domain_error("run_verification: n_max must be >= 0");
  const double scale = options.tolerance_scale;
  const double L = problem.L();
  const double l = problem.l();
  const ModulusSolution hat = solve_hat_modulus(problem);
  const ModulusSolution check = solve_check_modulus(problem);

  std::vector<CriticalPoint> points;
  for (int n = 0; n <= n_max; ++n) {
    for (const ModulusSolution* sol : {&hat, &check}) {
      points.push_back(make_critical_point(problem, *sol, n, Sign::Plus));
      points.push_back(make_critical_point(problem, *sol, n, Sign::Minus));
    }
  }

  VerificationReport report;
  auto add = [&report](std::string name, double worst, double tol) {
    const bool ok = worst <= tol;
    report.checks.push_back({std::move(name), ok, "worst " + format(worst) + ", tolerance " + format(tol)});
  };

  {
    double worst = 0.0;
    for (const auto& cp : points) {
      const Vec2 a = position_at(cp, 0.0);
      const Vec2 b = position_at(cp, L);
      worst = std::max({worst, std::hypot(a.x, a.y), std::hypot(b.x - l, b.y)});
    }
    add("endpoint closure", worst / L, 1e-9 * scale);
  }
  {
    double worst = 0.0;
    for (const auto& cp : points) {
      worst = std::max({worst, std::abs(curvature_at(cp, 0.0)), std::abs(curvature_at(cp, L))});
    }
    add("zero end curvature", worst * L, 1e-9 * scale);
  }

  // Full geometry (with the quadratic loop search) only where counts are checked.
  std::vector<GeometryReport> geometry;
  geometry.reserve(points.size());
  for (const auto& cp : points) {
    if (cp.n() <= options.geometry_n_max) {
      geometry.push_back(analyze_geometry(cp, options.samples_per_period));
    } else {
      geometry.push_back(pointwise_checks(cp, options.samples_per_period));
    }
  }

  {
    double worst = 0.0;
    for (const auto& g : geometry) worst = std::max(worst, g.max_unit_speed_error);
    add("unit speed", worst, 1e-9 * scale);
  }
  {
    double worst = 0.0;
    for (const auto& g : geometry) worst = std::max(worst, g.max_el_residual);
    add("Euler-Lagrange residual", worst, 1e-7 * scale);
  }
  {
    double worst = 0.0;
    for (const auto& cp : points) {
      const double a2 = cp.alpha() * cp.alpha();
      const double lhs = cp.lambda() * cp.lambda() + 4.0 * cp.b() * cp.b();
      worst = std::max(worst, std::abs(lhs / (4.0 * a2 * a2) - 1.0));
    }
    add("multiplier identity", worst, 1e-12 * scale);
  }
  {
    const OrderingVerdict verdict = verify_energy_ordering(problem, n_max, scale);
    report.checks.push_back({"energy laws", verdict.holds,
                             verdict.holds ? "scaling and hat < check hold" : verdict.violated_clause});
  }
  {
    std::string detail;
    for (std::size_t i = 0; i < points.size(); ++i) {
      const auto& cp = points[i];
      if (cp.n() > options.geometry_n_max) continue;
      if (geometry[i].interior_inflections != cp.n()) {
        detail = describe(cp) + " has " + std::to_string(geometry[i].interior_inflections) +
                 " inflections";
        break;
      }
    }
    report.checks.push_back({"inflection count", detail.empty(), detail.empty() ? "equals n" : detail});
  }
  {
    std::string detail;
    for (std::size_t i = 0; i < points.size(); ++i) {
      const auto& cp = points[i];
      if (cp.n() > options.geometry_n_max) continue;
      const int expected = cp.family() == Family::Hat ? 0 : cp.n() + 1;
      if (geometry[i].loop_count != expected) {
        detail = describe(cp) + " has " + std::to_string(geometry[i].loop_count) + " loops";
        break;
      }
    }
    report.checks.push_back(
        {"loop count", detail.empty(), detail.empty() ? "hat 0, check n+1" : detail});
  }
  {
    // Reflection symmetry of the n = 0 curves and tiling of the higher ones.
    double worst = 0.0;
    for (const auto& cp : points) {
      if (cp.n() != 0) continue;
      for (int i = 0; i <= 20; ++i) {
        const double s = L * i / 20.0;
        const Vec2 a = position_at(cp, s);
        const Vec2 b = position_at(cp, L - s);
        worst = std::max({worst, std::abs(a.x - (l - b.x)), std::abs(a.y - b.y)});
      }
    }
    for (int n = 1; n <= std::min(n_max, 4); ++n) {
      for (const ModulusSolution* sol : {&hat, &check}) {
        const CriticalPoint base = make_critical_point(problem, *sol, 0, Sign::Plus);
        const CriticalPoint cp = make_critical_point(problem, *sol, n, Sign::Plus);
        const double np1 = n + 1;
        for (int m = 0; m <= n; ++m) {
          for (int i = 0; i <= 10; ++i) {
            const double s = L / np1 * i / 10.0;
            const Vec2 tiled = position_at(cp, std::min(L, s + m * L / np1));
            const Vec2 ref = position_at(base, std::min(L, np1 * s));
            const double sign = m % 2 == 0 ? 1.0 : -1.0;
            worst = std::max({worst, std::abs(tiled.x - (ref.x / np1 + m * l / np1)),
                              std::abs(tiled.y - sign * ref.y / np1)});
          }
        }
      }
    }
    add("symmetry and tiling", worst / L, 1e-10 * scale);
  }
  {
    const auto spectrum = enumerate_spectrum(problem, n_max);
    const bool ok = spectrum.size() >= 2 && spectrum[0].family() == Family::Hat &&
                    spectrum[0].n() == 0 && spectrum[1].family() == Family::Hat &&
                    spectrum[1].n() == 0 && spectrum[1].energy() < spectrum[2 % spectrum.size()].energy();
    report.checks.push_back({"global minimizer", ok,
                             ok ? "hat n=0 pair has the least energy" : "minimizer is " + describe(spectrum[0])});
  }
  {
    const double r = problem.ratio();
    const bool graph = classify_graph_representability(points[0]);
    const double gap = r - r_star();
    std::string detail;
    bool ok;
    if (std::abs(gap) <= 1e-9) {
      ok = true;
      detail = "boundary: l/L equals R* = " + format(r_star()) + ", X'(0) = 0";
    } else {
      ok = graph == (gap > 0.0);
      detail = std::string(graph ? "graph" : "not a graph") + " with l/L " +
               (gap > 0.0 ? "above" : "below") + " R*";
    }
    report.checks.push_back({"graph representability", ok, detail});
  }
  return report;
}

}  // namespace elastica
