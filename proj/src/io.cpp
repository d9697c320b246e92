#include "elastica/io.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace elastica::io {
namespace {

constexpr double kWidth = 800.0;
constexpr double kHeight = 600.0;
constexpr double kMargin = 40.0;

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, sep)) out.push_back(field);
  return out;
}

double to_double(const std::string& field, std::size_t line_no) {
  try {
    std::size_t used = 0;
    const double v = std::stod(field, &used);
    if (used != field.size()) throw std::invalid_argument(field);
    return v;
  } catch (const std::exception&) {
    throw IoError(fmt::format("line {}: '{}' is not a number", line_no, field));
  }
}

std::vector<std::vector<double>> parse_table(const std::string& text, const std::string& header) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != header) {
    throw IoError("expected csv header '" + header + "'");
  }
  const std::size_t columns = split(header, ',').size();
  std::vector<std::vector<double>> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto fields = split(line, ',');
    if (fields.size() != columns) {
      throw IoError(fmt::format("line {}: expected {} fields, got {}", line_no, columns, fields.size()));
    }
    std::vector<double> row;
    row.reserve(columns);
    for (const auto& f : fields) row.push_back(to_double(f, line_no));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

std::string curve_csv(const SampledCurve& curve) {
  std::string out = "s,x,y,kappa,tx,ty\n";
  for (std::size_t i = 0; i < curve.size(); ++i) {
    out += fmt::format("{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g}\n", curve.s[i], curve.x[i],
                       curve.y[i], curve.kappa[i], curve.tangent_x[i], curve.tangent_y[i]);
  }
  return out;
}

std::string curve_json(const SampledCurve& curve) {
  nlohmann::ordered_json j;
  j["s"] = curve.s;
  j["x"] = curve.x;
  j["y"] = curve.y;
  j["kappa"] = curve.kappa;
  j["tangent_x"] = curve.tangent_x;
  j["tangent_y"] = curve.tangent_y;
  return j.dump() + "\n";
}

std::string curve_svg(const SampledCurve& curve) {
  double xmin = 0.0;
  double xmax = 0.0;
  double ymin = 0.0;
  double ymax = 0.0;
  for (std::size_t i = 0; i < curve.size(); ++i) {
    xmin = std::min(xmin, curve.x[i]);
    xmax = std::max(xmax, curve.x[i]);
    ymin = std::min(ymin, curve.y[i]);
    ymax = std::max(ymax, curve.y[i]);
  }
  const double w = std::max(xmax - xmin, 1e-300);
  const double h = ymax - ymin;
  double scale = (kWidth - 2.0 * kMargin) / w;
  if (h > 0.0) scale = std::min(scale, (kHeight - 2.0 * kMargin) / h);
  const double ox = 0.5 * kWidth - scale * 0.5 * (xmin + xmax);
  const double oy = 0.5 * kHeight + scale * 0.5 * (ymin + ymax);

  std::string d;
  for (std::size_t i = 0; i < curve.size(); ++i) {
    d += fmt::format("{}{:.6f},{:.6f}", i == 0 ? "M " : " L ", ox + scale * curve.x[i],
                     oy - scale * curve.y[i]);
  }
  std::string out;
  out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{0}\" height=\"{1}\" "
      "viewBox=\"0 0 {0} {1}\">\n",
      kWidth, kHeight);
  out += fmt::format(
      "<line x1=\"0\" y1=\"{0:.6f}\" x2=\"{1}\" y2=\"{0:.6f}\" stroke=\"#999999\" "
      "stroke-width=\"1\"/>\n",
      oy, kWidth);
  out += fmt::format(
      "<path data-scale=\"{:.17g}\" data-origin-x=\"{:.17g}\" data-origin-y=\"{:.17g}\" "
      "fill=\"none\" stroke=\"#1f4e9c\" stroke-width=\"2\" d=\"{}\"/>\n",
      scale, ox, oy, d);
  out += "</svg>\n";
  return out;
}

SampledCurve parse_curve_csv(const std::string& text) {
  const auto rows = parse_table(text, "s,x,y,kappa,tx,ty");
  SampledCurve c;
  for (const auto& r : rows) {
    c.s.push_back(r[0]);
    c.x.push_back(r[1]);
    c.y.push_back(r[2]);
    c.kappa.push_back(r[3]);
    c.tangent_x.push_back(r[4]);
    c.tangent_y.push_back(r[5]);
  }
  return c;
}

std::string polyline_csv(const oracle::DiscreteCurve& curve) {
  std::string out = "index,x,y\n";
  for (std::size_t i = 0; i < curve.size(); ++i) {
    out += fmt::format("{},{:.17g},{:.17g}\n", i, curve.vertices[i].x, curve.vertices[i].y);
  }
  return out;
}

oracle::DiscreteCurve parse_polyline_csv(const std::string& text, double L) {
  const auto rows = parse_table(text, "index,x,y");
  oracle::DiscreteCurve c;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i][0] != static_cast<double>(i)) {
      throw IoError(fmt::format("line {}: index {} out of sequence", i + 2, rows[i][0]));
    }
    c.vertices.push_back({rows[i][1], rows[i][2]});
  }
  if (c.size() < 2) throw IoError("polyline needs at least 2 vertices");
  c.segment_length = L / static_cast<double>(c.size() - 1);
  return c;
}

std::string descent_report_json(const oracle::DescentReport& report, const DescentContext& context) {
  nlohmann::ordered_json j;
  j["l"] = context.l;
  j["L"] = context.L;
  j["m"] = context.m;
  j["seed"] = context.seed;
  j["iterations"] = report.iterations;
  j["converged"] = report.converged;
  j["final_energy"] = report.final_energy;
  j["closed_form_energy"] = context.closed_form_energy;
  j["max_constraint_violation"] = report.max_constraint_violation;
  j["hausdorff_to_reference"] = report.hausdorff_to_reference;
  j["reference_sign"] = std::string(to_string(report.reference_sign));
  j["gradient_norm"] = report.gradient_norm;
  j["classification"] = report.classification;
  j["monotone"] = report.monotone;
  j["energy_trace"] = report.energy_trace;
  return j.dump(2) + "\n";
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("error reading '" + path + "'");
  return buf.str();
}

void write_text(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << content;
  out.flush();
  if (!out) throw IoError("error writing '" + path + "'");
}

}  // namespace elastica::io
