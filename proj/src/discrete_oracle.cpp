#include "elastica/discrete_oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

namespace elastica::oracle {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kArmijo = 1e-4;
constexpr int kMaxHalvings = 60;
constexpr int kMaxRestoreSteps = 30;
constexpr int kReferenceSamples = 4096;
constexpr double kClassifyWindow = 0.03;

using Angles = std::vector<double>;  // direction of every segment

double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
Vec2 sub(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }

// Geometry of the segment-angle parameterization: vertex k is
// h * sum_{j<k} (cos psi_j, sin psi_j).
struct Chain {
  double h;
  double l;

  Vec2 endpoint_error(const Angles& psi) const {
    double x = 0.0;
    double y = 0.0;
    for (double a : psi) {
      x += h * std::cos(a);
      y += h * std::sin(a);
    }
    return {x - l, y};
  }

  double energy(const Angles& psi) const {
    double e = 0.0;
    for (std::size_t j = 1; j < psi.size(); ++j) {
      const double d = psi[j] - psi[j - 1];
      e += d * d;
    }
    return e / h;
  }

  // energy(b) - energy(a) without subtracting two large sums.
  double energy_change(const Angles& a, const Angles& b) const {
    double e = 0.0;
    for (std::size_t j = 1; j < a.size(); ++j) {
      const double da = a[j] - a[j - 1];
      const double db = b[j] - b[j - 1];
      e += ((b[j] - a[j]) - (b[j - 1] - a[j - 1])) * (da + db);
    }
    return e / h;
  }

  Angles gradient(const Angles& psi) const {
    Angles g(psi.size(), 0.0);
    for (std::size_t j = 1; j < psi.size(); ++j) {
      const double d = 2.0 * (psi[j] - psi[j - 1]) / h;
      g[j] += d;
      g[j - 1] -= d;
    }
    return g;
  }

  DiscreteCurve curve(const Angles& psi) const {
    DiscreteCurve out;
    out.segment_length = h;
    out.vertices.reserve(psi.size() + 1);
    Vec2 v{0.0, 0.0};
    out.vertices.push_back(v);
    for (double a : psi) {
      v = {v.x + h * std::cos(a), v.y + h * std::sin(a)};
      out.vertices.push_back(v);
    }
    out.vertices.back() = {l, 0.0};
    return out;
  }
};

// (2/h) times the path Laplacian plus h/L^2 times the identity: the energy
// Hessian in segment angles, shifted to fix the rotation mode.
struct Preconditioner {
  std::vector<double> diag;
  double off;

  Preconditioner(std::size_t n, double h, double L) : diag(n), off(-2.0 / h) {
    for (std::size_t j = 0; j < n; ++j) {
      const double degree = (j == 0 || j + 1 == n) ? 1.0 : 2.0;
      diag[j] = 2.0 * degree / h + h / (L * L);
    }
  }

  Angles solve(const Angles& rhs) const {
    const std::size_t n = diag.size();
    std::vector<double> c(n, 0.0);
    Angles x(n, 0.0);
    double denom = diag[0];
    x[0] = rhs[0] / denom;
    for (std::size_t i = 1; i < n; ++i) {
      c[i - 1] = off / denom;
      denom = diag[i] - off * c[i - 1];
      x[i] = (rhs[i] - off * x[i - 1]) / denom;
    }
    for (std::size_t i = n - 1; i-- > 0;) x[i] -= c[i] * x[i + 1];
    return x;
  }
};

// Constraint Jacobian rows: d(endpoint)/d(psi_j) = h (-sin psi_j, cos psi_j).
struct Jacobian {
  Angles rx;
  Angles ry;
};

Jacobian jacobian(const Angles& psi, double h) {
  Jacobian j{Angles(psi.size()), Angles(psi.size())};
  for (std::size_t i = 0; i < psi.size(); ++i) {
    j.rx[i] = -h * std::sin(psi[i]);
    j.ry[i] = h * std::cos(psi[i]);
  }
  return j;
}

double inner(const Angles& a, const Angles& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

struct Sym2 {
  double a, b, d;  // [[a, b], [b, d]]

  std::array<double, 2> solve(double u, double v) const {
    const double det = a * d - b * b;
    return {(d * u - b * v) / det, (a * v - b * u) / det};
  }
};

// Directions along which the endpoint is corrected: M^-1 J^T.
struct Correction {
  Angles wx;
  Angles wy;
};

Correction correction(const Preconditioner& pre, const Jacobian& jac) {
  return {pre.solve(jac.rx), pre.solve(jac.ry)};
}

// Newton on the two endpoint equations along the fixed correction directions.
bool restore(const Chain& chain, const Correction& w, Angles& psi, double tol) {
  for (int it = 0; it < kMaxRestoreSteps; ++it) {
    const Vec2 err = chain.endpoint_error(psi);
    if (std::hypot(err.x, err.y) <= tol) return true;
    const Jacobian jac = jacobian(psi, chain.h);
    const double a = inner(jac.rx, w.wx);
    const double b = inner(jac.rx, w.wy);
    const double c = inner(jac.ry, w.wx);
    const double d = inner(jac.ry, w.wy);
    const double det = a * d - b * c;
    if (!(std::abs(det) > 0.0) || !std::isfinite(det)) return false;
    const double nx = (d * err.x - b * err.y) / det;
    const double ny = (a * err.y - c * err.x) / det;
    for (std::size_t i = 0; i < psi.size(); ++i) psi[i] -= nx * w.wx[i] + ny * w.wy[i];
    if (!std::isfinite(psi[0])) return false;
  }
  const Vec2 err = chain.endpoint_error(psi);
  return std::hypot(err.x, err.y) <= tol;
}

// Damped restoration for curves that start far from the constraint set.
bool restore_damped(const Chain& chain, const Preconditioner& pre, Angles& psi, double tol) {
  for (int outer = 0; outer < 200; ++outer) {
    const Vec2 err = chain.endpoint_error(psi);
    const double norm = std::hypot(err.x, err.y);
    if (norm <= tol) return true;
    const Correction w = correction(pre, jacobian(psi, chain.h));
    const Jacobian jac = jacobian(psi, chain.h);
    const Sym2 g{inner(jac.rx, w.wx), inner(jac.rx, w.wy), inner(jac.ry, w.wy)};
    const auto nu = g.solve(err.x, err.y);
    double t = 1.0;
    bool moved = false;
    for (int k = 0; k < 40; ++k, t *= 0.5) {
      Angles trial = psi;
      for (std::size_t i = 0; i < psi.size(); ++i) trial[i] -= t * (nu[0] * w.wx[i] + nu[1] * w.wy[i]);
      const Vec2 e2 = chain.endpoint_error(trial);
      if (std::hypot(e2.x, e2.y) < (1.0 - 0.5 * t) * norm) {
        psi = std::move(trial);
        moved = true;
        break;
      }
    }
    if (!moved) return false;
  }
  return false;
}

Angles angles_of(const DiscreteCurve& curve) {
  Angles psi;
  psi.reserve(curve.size() - 1);
  double previous = 0.0;
  for (std::size_t i = 0; i + 1 < curve.size(); ++i) {
    const Vec2 d = sub(curve.vertices[i + 1], curve.vertices[i]);
    if (!(std::hypot(d.x, d.y) > 0.0)) throw std::domain_error("degenerate segment in curve");
    double a = std::atan2(d.y, d.x);
    if (i > 0) a = previous + std::remainder(a - previous, 2.0 * kPi);
    psi.push_back(a);
    previous = a;
  }
  return psi;
}

// Half the turning angle of a circular arc with chord/length ratio r:
// sin(theta)/theta = r on (0, pi).
double arc_half_angle(double r) {
  double lo = 0.0;
  double hi = kPi;
  for (int it = 0; it < 200 && hi - lo > 1e-16; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (std::sin(mid) / mid > r) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

Angles arc_angles(std::size_t segments, double r, double orientation) {
  const double theta = arc_half_angle(r);
  Angles psi(segments);
  for (std::size_t j = 0; j < segments; ++j) {
    const double x = (static_cast<double>(j) + 0.5) / static_cast<double>(segments);
    psi[j] = orientation * theta * (1.0 - 2.0 * x);
  }
  return psi;
}

std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

double point_segment_distance(Vec2 p, Vec2 a, Vec2 b) {
  const Vec2 ab = sub(b, a);
  const double len2 = dot(ab, ab);
  double t = len2 > 0.0 ? dot(sub(p, a), ab) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return std::hypot(p.x - (a.x + t * ab.x), p.y - (a.y + t * ab.y));
}

double directed_hausdorff(const std::vector<Vec2>& from, const std::vector<Vec2>& to) {
  double worst = 0.0;
  for (const Vec2& p : from) {
    double best = std::numeric_limits<double>::infinity();
    if (to.size() == 1) best = std::hypot(p.x - to[0].x, p.y - to[0].y);
    for (std::size_t i = 0; i + 1 < to.size(); ++i) {
      best = std::min(best, point_segment_distance(p, to[i], to[i + 1]));
    }
    worst = std::max(worst, best);
  }
  return worst;
}

std::vector<Vec2> reference_polyline(const PinnedProblem& problem, Sign sign) {
  const SampledCurve c = sample_curve(make_critical_point(problem, Family::Hat, 0, sign),
                                      kReferenceSamples);
  std::vector<Vec2> out(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) out[i] = {c.x[i], c.y[i]};
  return out;
}

std::string classify(const PinnedProblem& problem, double energy) {
  const auto spectrum = enumerate_spectrum(problem, 10);
  const CriticalPoint* best = nullptr;
  double best_gap = kClassifyWindow;
  for (const auto& cp : spectrum) {
    const double gap = std::abs(energy / cp.energy() - 1.0);
    if (gap <= best_gap) {
      best_gap = gap;
      best = &cp;
    }
  }
  if (best == nullptr) return {};
  std::string label = describe(*best);
  // Plus and Minus share an energy; the sign is decided by the shape.
  return label.erase(label.find(' ') - 1, 1);
}

}  // namespace

double discrete_energy(const DiscreteCurve& curve) {
  if (curve.size() < 3) throw std::invalid_argument("discrete_energy: need at least 3 vertices");
  const double h = curve.segment_length;
  if (!(h > 0.0)) throw std::domain_error("discrete_energy: segment length must be positive");
  double e = 0.0;
  for (std::size_t i = 1; i + 1 < curve.size(); ++i) {
    const Vec2 a = sub(curve.vertices[i], curve.vertices[i - 1]);
    const Vec2 b = sub(curve.vertices[i + 1], curve.vertices[i]);
    if (!(dot(a, a) > 0.0) || !(dot(b, b) > 0.0)) {
      throw std::domain_error("discrete_energy: degenerate segment at vertex " + std::to_string(i));
    }
    const double theta = std::atan2(cross(a, b), dot(a, b));
    e += theta * theta;
  }
  return e / h;
}

std::vector<Vec2> energy_gradient(const DiscreteCurve& curve) {
  if (curve.size() < 3) throw std::invalid_argument("energy_gradient: need at least 3 vertices");
  const double h = curve.segment_length;
  if (!(h > 0.0)) throw std::domain_error("energy_gradient: segment length must be positive");
  std::vector<Vec2> g(curve.size());
  for (std::size_t i = 1; i + 1 < curve.size(); ++i) {
    const Vec2 a = sub(curve.vertices[i], curve.vertices[i - 1]);
    const Vec2 b = sub(curve.vertices[i + 1], curve.vertices[i]);
    const double aa = dot(a, a);
    const double bb = dot(b, b);
    if (!(aa > 0.0) || !(bb > 0.0)) {
      throw std::domain_error("energy_gradient: degenerate segment at vertex " + std::to_string(i));
    }
    const double theta = std::atan2(cross(a, b), dot(a, b));
    const double w = 2.0 * theta / h;
    // d(angle of v)/dv = perp(v)/|v|^2 with perp(v) = (-v.y, v.x).
    const Vec2 pa{-a.y / aa, a.x / aa};
    const Vec2 pb{-b.y / bb, b.x / bb};
    g[i + 1].x += w * pb.x;
    g[i + 1].y += w * pb.y;
    g[i].x -= w * (pb.x + pa.x);
    g[i].y -= w * (pb.y + pa.y);
    g[i - 1].x += w * pa.x;
    g[i - 1].y += w * pa.y;
  }
  return g;
}

double constraint_violation(const DiscreteCurve& curve, const PinnedProblem& problem) {
  if (curve.size() < 2) throw std::invalid_argument("constraint_violation: need at least 2 vertices");
  const double h = problem.L() / static_cast<double>(curve.size() - 1);
  double worst = std::max(std::hypot(curve.vertices.front().x, curve.vertices.front().y),
                          std::hypot(curve.vertices.back().x - problem.l(), curve.vertices.back().y));
  for (std::size_t i = 0; i + 1 < curve.size(); ++i) {
    const Vec2 d = sub(curve.vertices[i + 1], curve.vertices[i]);
    worst = std::max(worst, std::abs(std::hypot(d.x, d.y) - h));
  }
  return worst;
}

DiscreteCurve project_constraints(const DiscreteCurve& curve, const PinnedProblem& problem) {
  if (curve.size() < 3) throw std::invalid_argument("project_constraints: need at least 3 vertices");
  const std::size_t segments = curve.size() - 1;
  const Chain chain{problem.L() / static_cast<double>(segments), problem.l()};
  const Preconditioner pre(segments, chain.h, problem.L());
  Angles psi = angles_of(curve);
  if (!restore_damped(chain, pre, psi, 1e-13 * problem.L())) {
    throw ConvergenceError("project_constraints: far end cannot be pinned from this curve");
  }
  return chain.curve(psi);
}

DiscreteCurve seed_curve(const PinnedProblem& problem, int m, const std::string& seed) {
  if (m < 3) throw std::invalid_argument("seed_curve: need at least 3 vertices");
  const auto segments = static_cast<std::size_t>(m - 1);
  const Chain chain{problem.L() / static_cast<double>(segments), problem.l()};
  const Preconditioner pre(segments, chain.h, problem.L());
  const double tol = 1e-13 * problem.L();

  Angles psi;
  if (seed == "arc-up" || seed == "arc-down") {
    psi = arc_angles(segments, problem.ratio(), seed == "arc-up" ? 1.0 : -1.0);
    if (!restore_damped(chain, pre, psi, tol)) {
      throw ConvergenceError("seed_curve: cannot pin the arc seed");
    }
    return chain.curve(psi);
  }
  if (seed.rfind("random:", 0) != 0) {
    throw std::invalid_argument("seed_curve: unknown seed '" + seed +
                                "' (expected arc-up, arc-down or random:<text>)");
  }
  std::mt19937_64 rng(fnv1a(seed.substr(7)));
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  const double orientation = unit(rng) < 0.0 ? -1.0 : 1.0;
  constexpr int kModes = 6;
  std::array<double, kModes> a{};
  std::array<double, kModes> b{};
  for (int k = 0; k < kModes; ++k) {
    a[k] = unit(rng) / (k + 1);
    b[k] = unit(rng) / (k + 1);
  }
  const Angles base = arc_angles(segments, problem.ratio(), orientation);
  for (double amplitude = 1.0; amplitude > 1e-3; amplitude *= 0.5) {
    psi = base;
    for (std::size_t j = 0; j < segments; ++j) {
      const double x = (static_cast<double>(j) + 0.5) / static_cast<double>(segments);
      for (int k = 0; k < kModes; ++k) {
        psi[j] += amplitude * (a[k] * std::sin(kPi * (k + 1) * x) + b[k] * std::cos(kPi * (k + 1) * x));
      }
    }
    if (restore_damped(chain, pre, psi, tol)) return chain.curve(psi);
  }
  throw ConvergenceError("seed_curve: cannot pin the random seed '" + seed + "'");
}

MinimizeResult minimize(const PinnedProblem& problem, const DiscreteCurve& init,
                        const MinimizeOptions& options) {
  const int m = static_cast<int>(init.size());
  if (m < 16) throw std::domain_error("minimize: m >= 16 required (got " + std::to_string(m) + ")");
  const auto segments = static_cast<std::size_t>(m - 1);
  const Chain chain{problem.L() / static_cast<double>(segments), problem.l()};
  const double feas_tol = 1e-9 * problem.L();
  if (constraint_violation(init, problem) > feas_tol) {
    throw std::invalid_argument("minimize: initial curve violates the length or endpoint constraints");
  }
  const Preconditioner pre(segments, chain.h, problem.L());
  const double restore_tol = 1e-13 * problem.L();

  Angles psi = angles_of(init);
  double energy = chain.energy(psi);
  DescentReport report;
  report.energy_trace.push_back(energy);

  for (int it = 0; it < options.max_iterations; ++it) {
    const Angles g = chain.gradient(psi);
    const Jacobian jac = jacobian(psi, chain.h);
    const Correction w = correction(pre, jac);
    const Angles mg = pre.solve(g);
    const Sym2 gram{inner(jac.rx, w.wx), inner(jac.rx, w.wy), inner(jac.ry, w.wy)};
    const auto mu = gram.solve(inner(jac.rx, mg), inner(jac.ry, mg));

    // Residual first, then the step from the residual: near a constrained
    // stationary point g is almost in the range of J^T and forming d from g
    // directly cancels.
    Angles r(segments);
    double residual2 = 0.0;
    for (std::size_t i = 0; i < segments; ++i) {
      r[i] = g[i] - mu[0] * jac.rx[i] - mu[1] * jac.ry[i];
      residual2 += r[i] * r[i];
    }
    report.gradient_norm = std::sqrt(residual2);
    if (report.gradient_norm <= options.gradient_tolerance * energy) {
      report.converged = true;
      break;
    }
    const Angles mr = pre.solve(r);
    const auto nu = gram.solve(inner(jac.rx, mr), inner(jac.ry, mr));
    Angles d(segments);
    double dmax = 0.0;
    for (std::size_t i = 0; i < segments; ++i) {
      d[i] = -mr[i] + nu[0] * w.wx[i] + nu[1] * w.wy[i];
      dmax = std::max(dmax, std::abs(d[i]));
    }
    const double slope = inner(r, d);
    if (!(slope < 0.0)) break;

    double t = std::min(1.0, 1.0 / dmax);
    bool accepted = false;
    for (int k = 0; k < kMaxHalvings; ++k, t *= 0.5) {
      Angles trial = psi;
      for (std::size_t i = 0; i < segments; ++i) trial[i] += t * d[i];
      if (!restore(chain, w, trial, restore_tol)) continue;
      const double change = chain.energy_change(psi, trial);
      if (change <= kArmijo * t * slope) {
        if (change > 0.0) report.monotone = false;
        psi = std::move(trial);
        energy += change;
        accepted = true;
        break;
      }
    }
    report.iterations = it + 1;
    if (!accepted) break;  // no decrease representable at this precision
    report.energy_trace.push_back(energy);
  }

  MinimizeResult result{chain.curve(psi), std::move(report)};
  DescentReport& rep = result.report;
  rep.final_energy = discrete_energy(result.curve);
  rep.max_constraint_violation = constraint_violation(result.curve, problem);

  const double up = hausdorff_distance(result.curve.vertices, reference_polyline(problem, Sign::Plus));
  const double down =
      hausdorff_distance(result.curve.vertices, reference_polyline(problem, Sign::Minus));
  rep.reference_sign = up <= down ? Sign::Plus : Sign::Minus;
  rep.hausdorff_to_reference = std::min(up, down);
  rep.classification = classify(problem, rep.final_energy);
  return result;
}

MinimizeResult minimize(const PinnedProblem& problem, int m, const std::string& seed,
                        const MinimizeOptions& options) {
  if (m < 16) throw std::domain_error("minimize: m >= 16 required (got " + std::to_string(m) + ")");
  return minimize(problem, seed_curve(problem, m, seed), options);
}

double hausdorff_distance(const std::vector<Vec2>& a, const std::vector<Vec2>& b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("hausdorff_distance: empty polyline");
  return std::max(directed_hausdorff(a, b), directed_hausdorff(b, a));
}

}  // namespace elastica::oracle
