#include "acute/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "acute/errors.hpp"

namespace acute {

namespace {

constexpr double kWidth = 720;
constexpr double kHeight = 440;
constexpr double kLeft = 70;
constexpr double kRight = 160;
constexpr double kTop = 40;
constexpr double kBottom = 50;

const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string header(double w, double h, const Stamp& stamp) {
  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(w) << "\" height=\""
      << num(h) << "\" viewBox=\"0 0 " << num(w) << ' ' << num(h) << "\">\n"
      << "<!-- config_hash=" << stamp.config_hash << " seed=" << stamp.seed << " -->\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  return out.str();
}

long curve_end(const LearningCurve& c) {
  return c.points.empty() ? c.sunk_cost_timesteps : c.points.back().cumulative_timesteps;
}

}  // namespace

std::string render_learning_curves(const std::vector<CurveSeries>& series, const Stamp& stamp,
                                   int grid_points) {
  if (grid_points < 2) throw ValidationError("render_learning_curves: need >= 2 grid points");
  long x_max = 1;
  for (const auto& s : series)
    for (const auto& c : s.trials) x_max = std::max(x_max, curve_end(c));

  struct Band {
    std::vector<long> grid;
    std::vector<Aggregate> values;
  };
  std::vector<Band> bands;
  double y_min = 0.0, y_max = 0.0;
  bool first = true;
  for (const auto& s : series) {
    Band band;
    if (s.trials.empty()) {
      bands.push_back(band);
      continue;
    }
    long x0 = s.trials.front().sunk_cost_timesteps;
    for (const auto& c : s.trials) x0 = std::min(x0, c.sunk_cost_timesteps);
    for (int i = 0; i < grid_points; ++i)
      band.grid.push_back(x0 + static_cast<long>(std::llround(
                                   static_cast<double>(x_max - x0) * i / (grid_points - 1))));
    if (s.trials.size() >= 2) {
      band.values = aggregate_trials(s.trials, band.grid);
    } else {
      for (long x : band.grid) band.values.push_back({curve_value_at(s.trials.front(), x), 0.0});
    }
    for (const auto& a : band.values) {
      const double lo = a.mean - a.sd, hi = a.mean + a.sd;
      y_min = first ? lo : std::min(y_min, lo);
      y_max = first ? hi : std::max(y_max, hi);
      first = false;
    }
    bands.push_back(std::move(band));
  }
  if (y_max <= y_min) y_max = y_min + 1.0;

  const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
  auto px = [&](double x) { return kLeft + pw * x / static_cast<double>(x_max); };
  auto py = [&](double y) { return kTop + ph * (1.0 - (y - y_min) / (y_max - y_min)); };

  std::ostringstream out;
  out << header(kWidth, kHeight, stamp);
  out << "<g font-family=\"sans-serif\" font-size=\"12\">\n";
  // Axes with ticks at 0, 1/4, ..., 1 of the range.
  out << "<line x1=\"" << num(kLeft) << "\" y1=\"" << num(kTop + ph) << "\" x2=\""
      << num(kLeft + pw) << "\" y2=\"" << num(kTop + ph) << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << num(kLeft) << "\" y1=\"" << num(kTop) << "\" x2=\"" << num(kLeft)
      << "\" y2=\"" << num(kTop + ph) << "\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double xv = static_cast<double>(x_max) * i / 4.0;
    const double yv = y_min + (y_max - y_min) * i / 4.0;
    out << "<text x=\"" << num(px(xv)) << "\" y=\"" << num(kTop + ph + 18)
        << "\" text-anchor=\"middle\">" << static_cast<long>(std::llround(xv)) << "</text>\n";
    out << "<text x=\"" << num(kLeft - 6) << "\" y=\"" << num(py(yv) + 4)
        << "\" text-anchor=\"end\">" << num(yv) << "</text>\n";
  }
  out << "<text x=\"" << num(kLeft + pw / 2) << "\" y=\"" << num(kHeight - 10)
      << "\" text-anchor=\"middle\">total timesteps (sunk cost included)</text>\n";
  out << "<text x=\"14\" y=\"" << num(kTop + ph / 2) << "\" text-anchor=\"middle\" transform=\"rotate(-90 14 "
      << num(kTop + ph / 2) << ")\">return</text>\n";

  for (std::size_t k = 0; k < series.size(); ++k) {
    const Band& b = bands[k];
    const char* color = kPalette[k % std::size(kPalette)];
    if (!b.grid.empty()) {
      out << "<polygon fill=\"" << color << "\" fill-opacity=\"0.2\" stroke=\"none\" points=\"";
      for (std::size_t i = 0; i < b.grid.size(); ++i)
        out << (i ? " " : "") << num(px(b.grid[i])) << ',' << num(py(b.values[i].mean + b.values[i].sd));
      for (std::size_t i = b.grid.size(); i-- > 0;)
        out << ' ' << num(px(b.grid[i])) << ',' << num(py(b.values[i].mean - b.values[i].sd));
      out << "\"/>\n";
      out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
      for (std::size_t i = 0; i < b.grid.size(); ++i)
        out << (i ? " " : "") << num(px(b.grid[i])) << ',' << num(py(b.values[i].mean));
      out << "\"/>\n";
    }
    const double ly = kTop + 16 + 20 * static_cast<double>(k);
    out << "<rect x=\"" << num(kWidth - kRight + 12) << "\" y=\"" << num(ly - 9)
        << "\" width=\"12\" height=\"12\" fill=\"" << color << "\"/>\n";
    out << "<text x=\"" << num(kWidth - kRight + 30) << "\" y=\"" << num(ly + 1) << "\">"
        << escape(series[k].method) << " (n=" << series[k].trials.size() << ")</text>\n";
  }
  out << "</g>\n</svg>\n";
  return out.str();
}

std::string render_replay(const Json& trajectory, const Stamp& stamp) {
  const std::string where = "trajectory";
  if (!trajectory.is_object() || !trajectory.contains("layout") || !trajectory.contains("path"))
    throw SchemaError(where + ": expected keys 'layout' and 'path'");
  const Json& layout = trajectory["layout"];
  if (!layout.contains("width") || !layout.contains("height") || !layout.contains("objects") ||
      !layout.contains("fidelity"))
    throw SchemaError(where + ".layout: expected width, height, fidelity and objects");
  const bool grid = layout["fidelity"] == "low";
  const double w = layout["width"].get<double>(), h = layout["height"].get<double>();
  if (!(w > 0 && h > 0)) throw SchemaError(where + ".layout: non-positive arena");
  // Grid cells are drawn at their centers.
  const double shift = grid ? 0.5 : 0.0;
  const double scale = 480.0 / std::max(w, h);
  const double margin = 20.0;
  const double sw = w * scale + 2 * margin, sh = h * scale + 2 * margin;
  auto px = [&](double x) { return margin + (x + shift) * scale; };
  auto py = [&](double y) { return margin + (h - y - shift) * scale; };
  const double r = (grid ? 0.4 : kBodyRadius) * scale;

  std::ostringstream out;
  out << header(sw, sh, stamp);
  out << "<rect x=\"" << num(margin) << "\" y=\"" << num(margin) << "\" width=\"" << num(w * scale)
      << "\" height=\"" << num(h * scale) << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (const auto& o : layout["objects"]) {
    const std::string kind = o.at("kind").get<std::string>();
    const char* color = kind == "tree"             ? "#2ca02c"
                        : kind == "rock"           ? "#7f7f7f"
                        : kind == "crafting_table" ? "#8c564b"
                                                   : "#d62728";
    out << "<circle cx=\"" << num(px(o.at("x").get<double>())) << "\" cy=\""
        << num(py(o.at("y").get<double>())) << "\" r=\"" << num(r) << "\" fill=\"" << color
        << "\"><title>" << escape(kind) << "</title></circle>\n";
  }
  const Json& path = trajectory["path"];
  if (!path.is_array()) throw SchemaError(where + ".path: expected an array");
  if (!path.empty()) {
    out << "<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"2\" points=\"";
    for (std::size_t i = 0; i < path.size(); ++i) {
      if (!path[i].contains("x") || !path[i].contains("y"))
        throw SchemaError(where + ".path[" + std::to_string(i) + "]: expected x and y");
      out << (i ? " " : "") << num(px(path[i]["x"].get<double>())) << ','
          << num(py(path[i]["y"].get<double>()));
    }
    out << "\"/>\n";
    out << "<circle cx=\"" << num(px(path.front()["x"].get<double>())) << "\" cy=\""
        << num(py(path.front()["y"].get<double>())) << "\" r=\"" << num(r * 0.6)
        << "\" fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"2\"/>\n";
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace acute
