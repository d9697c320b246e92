#pragma once

// Text formats for sampled curves, polylines and descent reports.

#include <stdexcept>
#include <string>

#include "elastica/discrete_oracle.hpp"
#include "elastica/elastica.hpp"

namespace elastica::io {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Header `s,x,y,kappa,tx,ty`, 17 significant digits, LF endings.
std::string curve_csv(const SampledCurve& curve);
/// Object with arrays s, x, y, kappa, tangent_x, tangent_y.
std::string curve_json(const SampledCurve& curve);
/// 800x600 SVG 1.1: the x-axis and one path. The path carries data-scale,
/// data-origin-x and data-origin-y so coordinates can be mapped back:
/// x = (X - origin_x) / scale, y = (origin_y - Y) / scale.
std::string curve_svg(const SampledCurve& curve);

/// Parses curve_csv output. Throws IoError on malformed input.
SampledCurve parse_curve_csv(const std::string& text);

/// Header `index,x,y`.
std::string polyline_csv(const oracle::DiscreteCurve& curve);
/// Parses polyline_csv output; segment_length is set to L/(m-1).
oracle::DiscreteCurve parse_polyline_csv(const std::string& text, double L);

struct DescentContext {
  double l;
  double L;
  int m;
  std::string seed;
  double closed_form_energy;
};

std::string descent_report_json(const oracle::DescentReport& report, const DescentContext& context);

std::string read_text(const std::string& path);
/// Throws IoError when the file cannot be written.
void write_text(const std::string& path, const std::string& content);

}  // namespace elastica::io
