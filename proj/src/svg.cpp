#include "soc/svg.hpp"

#include <charconv>
#include <fstream>

#include "soc/errors.hpp"

namespace soc {

namespace {

void num(std::string& out, double v) {
  char buf[32];
  auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::fixed, 2);
  (void)ec;
  out.append(buf, p);
}

const char* kPalette[] = {"#d62728", "#1f77b4", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};

}  // namespace

void write_mission_svg(const std::string& path, const Scenario& sc,
                       const std::vector<Trajectory>& trajectories, double width_px) {
  const Box& dom = sc.grid.domain();
  const double wx = dom.width(0), wy = dom.width(1);
  const double s = width_px / wx;
  const double H = wy * s;
  auto X = [&](double x) { return (x - dom.lower[0]) * s; };
  auto Y = [&](double y) { return H - (y - dom.lower[1]) * s; };

  std::string out;
  out.reserve(1 << 16);
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 ";
  num(out, width_px);
  out += " ";
  num(out, H);
  out += "\">\n<rect x=\"0\" y=\"0\" width=\"";
  num(out, width_px);
  out += "\" height=\"";
  num(out, H);
  out += "\" fill=\"#fbfbf8\" stroke=\"#333\" stroke-width=\"1\"/>\n";

  auto rect = [&](const Box& b, const char* fill, const char* stroke, const char* extra) {
    out += "<rect x=\"";
    num(out, X(b.lower[0]));
    out += "\" y=\"";
    num(out, Y(b.upper[1]));
    out += "\" width=\"";
    num(out, (b.upper[0] - b.lower[0]) * s);
    out += "\" height=\"";
    num(out, (b.upper[1] - b.lower[1]) * s);
    out += "\" fill=\"";
    out += fill;
    out += "\" stroke=\"";
    out += stroke;
    out += "\"";
    out += extra;
    out += "/>\n";
  };

  for (const auto& seg : sc.cost.lanes) {
    out += "<line x1=\"";
    num(out, X(seg.x1));
    out += "\" y1=\"";
    num(out, Y(seg.y1));
    out += "\" x2=\"";
    num(out, X(seg.x2));
    out += "\" y2=\"";
    num(out, Y(seg.y2));
    out += "\" stroke=\"#c9c9c9\" stroke-width=\"1\" stroke-dasharray=\"3,3\"/>\n";
  }
  for (const auto& b : sc.obstacles_plot) rect(b, "#555555", "#333333", "");
  for (const auto& b : sc.nofly_plot)
    rect(b, "#aaaaaa", "#777777", " fill-opacity=\"0.5\" stroke-dasharray=\"4,2\"");
  for (std::size_t i = 0; i < sc.mission.targets.size(); ++i) {
    const Box& t = sc.mission.targets[i];
    const Box planar({t.lower[0], t.lower[1]}, {t.upper[0], t.upper[1]});
    if (i == 0)
      rect(planar, "#b5e7b0", "#1a7a1a", " stroke-width=\"2\"");
    else
      rect(planar, "#d9f2d0", "#4aa64a", "");
    out += "<text x=\"";
    num(out, X(0.5 * (t.lower[0] + t.upper[0])));
    out += "\" y=\"";
    num(out, Y(0.5 * (t.lower[1] + t.upper[1])) + 4);
    out += "\" font-size=\"11\" text-anchor=\"middle\" fill=\"#1a5c1a\">";
    out += (i == 0) ? std::string("A1") : ("A" + std::to_string(i + 1));
    out += "</text>\n";
  }

  for (std::size_t v = 0; v < trajectories.size(); ++v) {
    const auto& tr = trajectories[v];
    if (tr.samples.empty()) continue;
    out += "<polyline fill=\"none\" stroke=\"";
    out += kPalette[v % (sizeof(kPalette) / sizeof(kPalette[0]))];
    out += "\" stroke-width=\"1.5\" points=\"";
    for (const auto& smp : tr.samples) {
      num(out, X(smp.x[0]));
      out += ",";
      num(out, Y(smp.x[1]));
      out += " ";
    }
    out += "\"/>\n";
    // start marker
    out += "<circle cx=\"";
    num(out, X(tr.samples.front().x[0]));
    out += "\" cy=\"";
    num(out, Y(tr.samples.front().x[1]));
    out += "\" r=\"3\" fill=\"";
    out += kPalette[v % (sizeof(kPalette) / sizeof(kPalette[0]))];
    out += "\"/>\n";
  }
  out += "</svg>\n";

  std::ofstream f(path, std::ios::trunc | std::ios::binary);
  if (!f) throw validation_error("cannot write " + path);
  f << out;
  if (!f) throw validation_error("write failed: " + path);
}

}  // namespace soc
