#include "rlab/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace rlab::plot {

namespace {

const char* kPalette[] = {"#1f6fb2", "#d1495b", "#2e8b57", "#8a5fbf",
                          "#c77d2e", "#3a3a3a"};
constexpr int kPaletteSize = 6;

std::string num(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string tick_label(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

struct Extent {
  double lo = 0.0;
  double hi = 1.0;
};

Extent pad(Extent e) {
  if (e.lo == e.hi) {
    const double delta = e.lo == 0.0 ? 1.0 : std::fabs(e.lo) * 0.1;
    return {e.lo - delta, e.hi + delta};
  }
  const double margin = (e.hi - e.lo) * 0.04;
  return {e.lo - margin, e.hi + margin};
}

}  // namespace

void write_line_svg(const std::string& path, const PlotSpec& spec,
                    const std::vector<Series>& series) {
  if (series.empty()) {
    throw std::invalid_argument("write_line_svg: no series");
  }
  Extent xe{1e300, -1e300};
  Extent ye{1e300, -1e300};
  for (const Series& s : series) {
    if (s.x.size() != s.y.size() || s.x.empty()) {
      throw std::invalid_argument("write_line_svg: bad series shape");
    }
    if (!s.half_band.empty() && s.half_band.size() != s.y.size()) {
      throw std::invalid_argument("write_line_svg: band length mismatch");
    }
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      double xv = s.x[i];
      if (spec.log_x) {
        if (!(xv > 0.0)) {
          throw std::invalid_argument("write_line_svg: log axis needs x > 0");
        }
        xv = std::log2(xv);
      }
      const double band = s.half_band.empty() ? 0.0 : s.half_band[i];
      xe.lo = std::min(xe.lo, xv);
      xe.hi = std::max(xe.hi, xv);
      ye.lo = std::min(ye.lo, s.y[i] - band);
      ye.hi = std::max(ye.hi, s.y[i] + band);
    }
  }
  xe = pad(xe);
  ye = pad(ye);

  const double left = 80, right = 30, top = 50, bottom = 60;
  const double plot_w = spec.width - left - right;
  const double plot_h = spec.height - top - bottom;
  const auto sx = [&](double x) {
    if (spec.log_x) x = std::log2(x);
    return left + (x - xe.lo) / (xe.hi - xe.lo) * plot_w;
  };
  const auto sy = [&](double y) {
    return top + (ye.hi - y) / (ye.hi - ye.lo) * plot_h;
  };

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
         std::to_string(spec.width) + "\" height=\"" +
         std::to_string(spec.height) + "\" font-family=\"sans-serif\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg += "<text x=\"" + num(spec.width / 2.0) +
         "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">" + spec.title +
         "</text>\n";

  // Gridlines and ticks.
  constexpr int kTicks = 6;
  for (int i = 0; i < kTicks; ++i) {
    const double fraction = static_cast<double>(i) / (kTicks - 1);
    const double gx = left + fraction * plot_w;
    const double gy = top + fraction * plot_h;
    const double xv = xe.lo + fraction * (xe.hi - xe.lo);
    const double yv = ye.hi - fraction * (ye.hi - ye.lo);
    svg += "<line x1=\"" + num(gx) + "\" y1=\"" + num(top) + "\" x2=\"" + num(gx) +
           "\" y2=\"" + num(top + plot_h) + "\" stroke=\"#dddddd\"/>\n";
    svg += "<line x1=\"" + num(left) + "\" y1=\"" + num(gy) + "\" x2=\"" +
           num(left + plot_w) + "\" y2=\"" + num(gy) + "\" stroke=\"#dddddd\"/>\n";
    const double x_value = spec.log_x ? std::exp2(xv) : xv;
    svg += "<text x=\"" + num(gx) + "\" y=\"" + num(top + plot_h + 18) +
           "\" text-anchor=\"middle\" font-size=\"11\">" + tick_label(x_value) +
           "</text>\n";
    svg += "<text x=\"" + num(left - 8) + "\" y=\"" + num(gy + 4) +
           "\" text-anchor=\"end\" font-size=\"11\">" + tick_label(yv) +
           "</text>\n";
  }
  svg += "<rect x=\"" + num(left) + "\" y=\"" + num(top) + "\" width=\"" +
         num(plot_w) + "\" height=\"" + num(plot_h) +
         "\" fill=\"none\" stroke=\"#333333\"/>\n";
  svg += "<text x=\"" + num(left + plot_w / 2.0) + "\" y=\"" +
         num(spec.height - 14.0) + "\" text-anchor=\"middle\" font-size=\"13\">" +
         spec.x_label + "</text>\n";
  svg += "<text x=\"18\" y=\"" + num(top + plot_h / 2.0) +
         "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 18 " +
         num(top + plot_h / 2.0) + ")\">" + spec.y_label + "</text>\n";

  for (std::size_t si = 0; si < series.size(); ++si) {
    const Series& s = series[si];
    const char* color = kPalette[si % kPaletteSize];
    if (!s.half_band.empty()) {
      std::string points;
      for (std::size_t i = 0; i < s.x.size(); ++i) {
        points += num(sx(s.x[i])) + "," + num(sy(s.y[i] + s.half_band[i])) + " ";
      }
      for (std::size_t i = s.x.size(); i-- > 0;) {
        points += num(sx(s.x[i])) + "," + num(sy(s.y[i] - s.half_band[i])) + " ";
      }
      svg += "<polygon points=\"" + points + "\" fill=\"" + std::string(color) +
             "\" opacity=\"0.15\"/>\n";
    }
    std::string points;
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      points += num(sx(s.x[i])) + "," + num(sy(s.y[i])) + " ";
    }
    svg += "<polyline points=\"" + points + "\" fill=\"none\" stroke=\"" +
           std::string(color) + "\" stroke-width=\"1.8\"/>\n";

    const double ly = top + 16.0 + 16.0 * static_cast<double>(si);
    svg += "<line x1=\"" + num(left + plot_w - 150) + "\" y1=\"" + num(ly - 4) +
           "\" x2=\"" + num(left + plot_w - 126) + "\" y2=\"" + num(ly - 4) +
           "\" stroke=\"" + std::string(color) + "\" stroke-width=\"2\"/>\n";
    svg += "<text x=\"" + num(left + plot_w - 120) + "\" y=\"" + num(ly) +
           "\" font-size=\"12\">" + s.label + "</text>\n";
  }
  svg += "</svg>\n";

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw std::runtime_error("write_line_svg: cannot open " + path);
  }
  out.write(svg.data(), static_cast<std::streamsize>(svg.size()));
  if (!out) {
    throw std::runtime_error("write_line_svg: write failed for " + path);
  }
}

}  // namespace rlab::plot
