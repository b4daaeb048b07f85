#include "ruq/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "ruq/errors.hpp"

namespace ruq::svg {

namespace {

constexpr double kWidth = 720.0;
constexpr double kHeight = 480.0;
constexpr double kLeft = 72.0;
constexpr double kRight = 170.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 56.0;

const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                "#ff7f0e", "#8c564b", "#e377c2", "#7f7f7f"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string tick_label(double v) {
  if (std::fabs(v) < 1e-12) v = 0.0;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();

  void add(double v) {
    if (!std::isfinite(v)) return;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }

  void finish() {
    if (!(lo <= hi)) {
      lo = 0.0;
      hi = 1.0;
    }
    if (hi - lo < 1e-12) {
      const double pad = std::max(1e-3, std::fabs(lo) * 0.1);
      lo -= pad;
      hi += pad;
    }
  }
};

double nice_step(double span) {
  const double raw = span / 6.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double f = raw / mag;
  return (f < 1.5 ? 1.0 : f < 3.0 ? 2.0 : f < 7.0 ? 5.0 : 10.0) * mag;
}

struct Frame {
  Range xr, yr;
  double xstep = 1.0, ystep = 1.0;

  void snap() {
    xr.finish();
    yr.finish();
    xstep = nice_step(xr.hi - xr.lo);
    ystep = nice_step(yr.hi - yr.lo);
    yr.lo = std::floor(yr.lo / ystep) * ystep;
    yr.hi = std::ceil(yr.hi / ystep) * ystep;
  }

  double px(double x) const {
    return kLeft + (x - xr.lo) / (xr.hi - xr.lo) * (kWidth - kLeft - kRight);
  }
  double py(double y) const {
    return kHeight - kBottom - (y - yr.lo) / (yr.hi - yr.lo) * (kHeight - kTop - kBottom);
  }
};

void header(std::ostringstream& out, const std::string& title) {
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
      << kHeight << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text x=\"" << num(kWidth / 2) << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">"
      << escape(title) << "</text>\n";
}

void axes(std::ostringstream& out, const Frame& f, const std::string& xl, const std::string& yl,
          bool x_ticks) {
  const double x0 = kLeft, x1 = kWidth - kRight, y0 = kHeight - kBottom, y1 = kTop;
  out << "<rect x=\"" << num(x0) << "\" y=\"" << num(y1) << "\" width=\"" << num(x1 - x0)
      << "\" height=\"" << num(y0 - y1) << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (double v = f.yr.lo; v <= f.yr.hi + 1e-9 * f.ystep; v += f.ystep) {
    out << "<line x1=\"" << num(x0) << "\" x2=\"" << num(x1) << "\" y1=\"" << num(f.py(v))
        << "\" y2=\"" << num(f.py(v)) << "\" stroke=\"#dddddd\"/>\n"
        << "<text x=\"" << num(x0 - 6) << "\" y=\"" << num(f.py(v) + 4)
        << "\" text-anchor=\"end\">" << tick_label(v) << "</text>\n";
  }
  if (x_ticks) {
    const double first = std::ceil(f.xr.lo / f.xstep - 1e-9) * f.xstep;
    for (double v = first; v <= f.xr.hi + 1e-9 * f.xstep; v += f.xstep) {
      out << "<line x1=\"" << num(f.px(v)) << "\" x2=\"" << num(f.px(v)) << "\" y1=\"" << num(y0)
          << "\" y2=\"" << num(y0 + 5) << "\" stroke=\"black\"/>\n"
          << "<text x=\"" << num(f.px(v)) << "\" y=\"" << num(y0 + 18)
          << "\" text-anchor=\"middle\">" << tick_label(v) << "</text>\n";
    }
  }
  out << "<text x=\"" << num((x0 + x1) / 2) << "\" y=\"" << num(kHeight - 14)
      << "\" text-anchor=\"middle\">" << escape(xl) << "</text>\n"
      << "<text transform=\"translate(18," << num((y0 + y1) / 2)
      << ") rotate(-90)\" text-anchor=\"middle\">" << escape(yl) << "</text>\n";
}

std::string polyline(const Frame& f, const std::vector<double>& x, const std::vector<double>& y) {
  std::string pts;
  for (std::size_t i = 0; i < x.size() && i < y.size(); ++i) {
    if (!std::isfinite(x[i]) || !std::isfinite(y[i])) continue;
    if (!pts.empty()) pts += ' ';
    pts += num(f.px(x[i])) + "," + num(f.py(y[i]));
  }
  return pts;
}

}  // namespace

std::string render(const LinePlot& plot) {
  Frame f;
  for (const auto& s : plot.series) {
    for (double v : s.x) f.xr.add(v);
    for (double v : s.y) f.yr.add(v);
  }
  for (const auto& b : plot.bands) {
    for (double v : b.x) f.xr.add(v);
    for (double v : b.lower) f.yr.add(v);
    for (double v : b.upper) f.yr.add(v);
  }
  for (const auto& p : plot.points) {
    for (double v : p.x) f.xr.add(v);
    for (double v : p.y) f.yr.add(v);
  }
  if (plot.diagonal) {
    f.xr.add(0.0);
    f.xr.add(1.0);
    f.yr.add(0.0);
    f.yr.add(1.0);
  }
  f.snap();

  std::ostringstream out;
  header(out, plot.title);
  axes(out, f, plot.x_label, plot.y_label, true);
  out << "<clipPath id=\"plot\"><rect x=\"" << num(kLeft) << "\" y=\"" << num(kTop)
      << "\" width=\"" << num(kWidth - kLeft - kRight) << "\" height=\""
      << num(kHeight - kTop - kBottom) << "\"/></clipPath>\n<g clip-path=\"url(#plot)\">\n";

  for (std::size_t k = 0; k < plot.bands.size(); ++k) {
    const auto& b = plot.bands[k];
    std::vector<double> rx(b.x.rbegin(), b.x.rend());
    std::vector<double> ru(b.upper.rbegin(), b.upper.rend());
    out << "<polygon points=\"" << polyline(f, b.x, b.lower) << ' ' << polyline(f, rx, ru)
        << "\" fill=\"" << kPalette[k % 8] << "\" fill-opacity=\"0.18\" stroke=\"none\"/>\n";
  }
  for (const auto& p : plot.points) {
    for (std::size_t i = 0; i < p.x.size(); ++i) {
      if (!std::isfinite(p.x[i]) || !std::isfinite(p.y[i])) continue;
      const bool hi = i < p.highlight.size() && p.highlight[i];
      out << "<circle cx=\"" << num(f.px(p.x[i])) << "\" cy=\"" << num(f.py(p.y[i]))
          << "\" r=\"1.6\" fill=\"" << (hi ? "#d62728" : "#555555") << "\" fill-opacity=\"0.6\"/>\n";
    }
  }
  if (plot.diagonal) {
    out << "<line x1=\"" << num(f.px(0)) << "\" y1=\"" << num(f.py(0)) << "\" x2=\""
        << num(f.px(1)) << "\" y2=\"" << num(f.py(1))
        << "\" stroke=\"black\" stroke-dasharray=\"4 4\"/>\n";
  }
  for (std::size_t k = 0; k < plot.series.size(); ++k) {
    const auto& s = plot.series[k];
    const char* colour = kPalette[k % 8];
    out << "<polyline class=\"series\" data-label=\"" << escape(s.label) << "\" points=\""
        << polyline(f, s.x, s.y) << "\" fill=\"none\" stroke=\"" << colour
        << "\" stroke-width=\"1.8\"" << (s.dashed ? " stroke-dasharray=\"6 3\"" : "") << "/>\n";
    if (s.markers) {
      for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
        if (!std::isfinite(s.y[i])) continue;
        out << "<circle cx=\"" << num(f.px(s.x[i])) << "\" cy=\"" << num(f.py(s.y[i]))
            << "\" r=\"3\" fill=\"" << colour << "\"/>\n";
      }
    }
  }
  out << "</g>\n";
  for (std::size_t k = 0; k < plot.series.size(); ++k) {
    const double y = kTop + 14 + 18.0 * static_cast<double>(k);
    const double x = kWidth - kRight + 14;
    out << "<line x1=\"" << num(x) << "\" x2=\"" << num(x + 22) << "\" y1=\"" << num(y - 4)
        << "\" y2=\"" << num(y - 4) << "\" stroke=\"" << kPalette[k % 8]
        << "\" stroke-width=\"2\"/>\n<text x=\"" << num(x + 28) << "\" y=\"" << num(y) << "\">"
        << escape(plot.series[k].label) << "</text>\n";
  }
  out << "</svg>\n";
  return out.str();
}

std::string render(const BoxPlot& plot) {
  Frame f;
  for (const auto& b : plot.boxes) {
    f.yr.add(b.lo_whisker);
    f.yr.add(b.hi_whisker);
  }
  f.xr.lo = 0.0;
  f.xr.hi = static_cast<double>(std::max<std::size_t>(1, plot.boxes.size()));
  f.snap();
  f.xr.lo = 0.0;
  f.xr.hi = static_cast<double>(std::max<std::size_t>(1, plot.boxes.size()));

  std::ostringstream out;
  header(out, plot.title);
  axes(out, f, "", plot.y_label, false);
  const double slot = f.px(1.0) - f.px(0.0);
  const double half = std::min(28.0, slot * 0.3);
  for (std::size_t k = 0; k < plot.boxes.size(); ++k) {
    const auto& b = plot.boxes[k];
    const double cx = f.px(static_cast<double>(k) + 0.5);
    const char* colour = kPalette[k % 8];
    out << "<g class=\"box\" data-label=\"" << escape(b.label) << "\">\n"
        << "<line x1=\"" << num(cx) << "\" x2=\"" << num(cx) << "\" y1=\"" << num(f.py(b.lo_whisker))
        << "\" y2=\"" << num(f.py(b.hi_whisker)) << "\" stroke=\"black\"/>\n"
        << "<rect x=\"" << num(cx - half) << "\" y=\"" << num(f.py(b.q3)) << "\" width=\""
        << num(2 * half) << "\" height=\"" << num(f.py(b.q1) - f.py(b.q3)) << "\" fill=\"" << colour
        << "\" fill-opacity=\"0.35\" stroke=\"" << colour << "\"/>\n"
        << "<line x1=\"" << num(cx - half) << "\" x2=\"" << num(cx + half) << "\" y1=\""
        << num(f.py(b.median)) << "\" y2=\"" << num(f.py(b.median))
        << "\" stroke=\"black\" stroke-width=\"2\"/>\n"
        << "<text x=\"" << num(cx) << "\" y=\"" << num(kHeight - kBottom + 14)
        << "\" transform=\"rotate(-25 " << num(cx) << ' ' << num(kHeight - kBottom + 14)
        << ")\" text-anchor=\"end\" font-size=\"10\">" << escape(b.label) << "</text>\n</g>\n";
  }
  out << "</svg>\n";
  return out.str();
}

void write(const std::filesystem::path& path, const std::string& document) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write '" + path.string() + "'");
  out << document;
}

}  // namespace ruq::svg
