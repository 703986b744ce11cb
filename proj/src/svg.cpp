#include <algorithm>
#include <cmath>
#include <sstream>

#include "helmrbf/experiment.hpp"

namespace helmrbf {

namespace {

constexpr double kWidth = 640, kHeight = 420;
constexpr double kPadLeft = 70, kPadRight = 170, kPadTop = 40, kPadBottom = 50;
const char* const kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf", "#8c564b"};

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

std::string num(double v) {
  std::ostringstream ss;
  ss.precision(6);
  ss << v;
  return ss.str();
}

}  // namespace

std::string render_svg(const PlotSpec& spec) {
  if (spec.series.empty()) throw ValidationError("series", "nothing to plot");
  double xmin = INFINITY, xmax = -INFINITY, ymin = INFINITY, ymax = -INFINITY;
  std::size_t usable = 0;
  auto ty = [&](double y) { return spec.log_y ? std::log10(y) : y; };
  for (const auto& s : spec.series) {
    if (s.x.size() != s.y.size()) throw ValidationError("series", "'" + s.label + "' has unequal x and y lengths");
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i]) || (spec.log_y && !(s.y[i] > 0))) continue;
      ++usable;
      xmin = std::min(xmin, s.x[i]);
      xmax = std::max(xmax, s.x[i]);
      ymin = std::min(ymin, ty(s.y[i]));
      ymax = std::max(ymax, ty(s.y[i]));
    }
  }
  if (usable == 0) throw ValidationError("series", "no plottable points");
  if (xmax == xmin) {
    xmin -= 0.5;
    xmax += 0.5;
  }
  if (spec.log_y) {
    ymin = std::floor(ymin);
    ymax = std::ceil(ymax);
  }
  if (ymax == ymin) {
    ymin -= 0.5;
    ymax += 0.5;
  }
  const double pw = kWidth - kPadLeft - kPadRight, ph = kHeight - kPadTop - kPadBottom;
  auto px = [&](double x) { return kPadLeft + (x - xmin) / (xmax - xmin) * pw; };
  auto py = [&](double y) { return kPadTop + (1 - (ty(y) - ymin) / (ymax - ymin)) * ph; };

  std::ostringstream o;
  o << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
    << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
    << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
    << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
    << "<text x=\"" << kWidth / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" << escape(spec.title)
    << "</text>\n"
    << "<rect x=\"" << kPadLeft << "\" y=\"" << kPadTop << "\" width=\"" << pw << "\" height=\"" << ph
    << "\" fill=\"none\" stroke=\"black\"/>\n";

  // y ticks: decades on a log axis, five steps otherwise.
  const int ysteps = spec.log_y ? static_cast<int>(ymax - ymin) : 5;
  for (int i = 0; i <= ysteps; ++i) {
    const double v = ymin + (ymax - ymin) * i / ysteps;
    const double y = kPadTop + (1 - (v - ymin) / (ymax - ymin)) * ph;
    o << "<line x1=\"" << kPadLeft - 4 << "\" y1=\"" << y << "\" x2=\"" << kPadLeft << "\" y2=\"" << y
      << "\" stroke=\"black\"/>\n"
      << "<text x=\"" << kPadLeft - 6 << "\" y=\"" << y + 4 << "\" text-anchor=\"end\">"
      << (spec.log_y ? "1e" + num(v) : num(v)) << "</text>\n";
  }
  for (int i = 0; i <= 5; ++i) {
    const double v = xmin + (xmax - xmin) * i / 5;
    const double x = px(v);
    o << "<line x1=\"" << x << "\" y1=\"" << kPadTop + ph << "\" x2=\"" << x << "\" y2=\"" << kPadTop + ph + 4
      << "\" stroke=\"black\"/>\n"
      << "<text x=\"" << x << "\" y=\"" << kPadTop + ph + 18 << "\" text-anchor=\"middle\">" << num(v) << "</text>\n";
  }
  o << "<text x=\"" << kPadLeft + pw / 2 << "\" y=\"" << kHeight - 10 << "\" text-anchor=\"middle\">"
    << escape(spec.xlabel) << "</text>\n"
    << "<text x=\"16\" y=\"" << kPadTop + ph / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
    << kPadTop + ph / 2 << ")\">" << escape(spec.ylabel) << "</text>\n";

  for (std::size_t k = 0; k < spec.series.size(); ++k) {
    const auto& s = spec.series[k];
    const char* color = kColors[k % std::size(kColors)];
    std::ostringstream pts;
    o << "<g class=\"series\" data-label=\"" << escape(s.label) << "\">\n";
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i]) || (spec.log_y && !(s.y[i] > 0))) continue;
      pts << px(s.x[i]) << ',' << py(s.y[i]) << ' ';
      if (s.markers) {
        o << "<circle class=\"marker\" cx=\"" << px(s.x[i]) << "\" cy=\"" << py(s.y[i])
          << "\" r=\"3.5\" fill=\"" << color << "\"/>\n";
      }
    }
    if (s.line) {
      o << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\""
        << (s.dashed ? " stroke-dasharray=\"6,4\"" : "") << " points=\"" << pts.str() << "\"/>\n";
    }
    o << "</g>\n";
    const double ly = kPadTop + 14 + 18 * static_cast<double>(k);
    const double lx = kPadLeft + pw + 12;
    o << "<line x1=\"" << lx << "\" y1=\"" << ly - 4 << "\" x2=\"" << lx + 18 << "\" y2=\"" << ly - 4
      << "\" stroke=\"" << color << "\" stroke-width=\"2\"" << (s.dashed ? " stroke-dasharray=\"4,3\"" : "")
      << "/>\n"
      << "<text x=\"" << lx + 24 << "\" y=\"" << ly << "\">" << escape(s.label) << "</text>\n";
  }
  for (std::size_t i = 0; i < spec.notes.size(); ++i) {
    o << "<text class=\"note\" x=\"" << kPadLeft + 8 << "\" y=\"" << kPadTop + 16 + 16 * static_cast<double>(i) << "\">"
      << escape(spec.notes[i]) << "</text>\n";
  }
  o << "</svg>\n";
  return o.str();
}

}  // namespace helmrbf
