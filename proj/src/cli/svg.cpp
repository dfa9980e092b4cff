#include "hall_edge/cli/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace hall_edge::cli {

namespace {

constexpr double kWidth = 640, kHeight = 420;
constexpr double kLeft = 80, kRight = 30, kTop = 40, kBottom = 60;

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

// "--" may not appear inside an XML comment.
std::string comment_safe(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '-' && !out.empty() && out.back() == '-') out += ' ';
    out += c;
  }
  return out;
}

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

struct Range {
  double lo, hi;
};

Range range_of(const std::vector<double>& v) {
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  Range r{*lo, *hi};
  if (r.hi == r.lo) {
    const double pad = r.lo == 0.0 ? 1.0 : 0.05 * std::abs(r.lo);
    r.lo -= pad;
    r.hi += pad;
  }
  return r;
}

void check_finite(const std::vector<double>& v, const char* what) {
  if (v.empty()) throw PlotError(std::string("no data for ") + what);
  for (double x : v)
    if (!std::isfinite(x)) throw PlotError(std::string("non-finite value in ") + what);
}

void header(std::ostringstream& os, const PlotLabels& labels) {
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
     << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n";
  os << "<!-- provenance: " << comment_safe(labels.provenance) << " -->\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"15\">"
     << escape(labels.title) << "</text>\n";
}

void axes(std::ostringstream& os, const PlotLabels& labels, Range xr, Range yr) {
  const double x0 = kLeft, x1 = kWidth - kRight, y0 = kHeight - kBottom, y1 = kTop;
  os << "<g stroke=\"black\" stroke-width=\"1\">\n";
  os << "<line x1=\"" << x0 << "\" y1=\"" << y0 << "\" x2=\"" << x1 << "\" y2=\"" << y0 << "\"/>\n";
  os << "<line x1=\"" << x0 << "\" y1=\"" << y0 << "\" x2=\"" << x0 << "\" y2=\"" << y1 << "\"/>\n";
  os << "</g>\n<g font-family=\"sans-serif\" font-size=\"11\">\n";
  for (int k = 0; k <= 4; ++k) {
    const double f = k / 4.0;
    const double px = x0 + f * (x1 - x0), py = y0 - f * (y0 - y1);
    os << "<text x=\"" << px << "\" y=\"" << y0 + 16 << "\" text-anchor=\"middle\">" << num(xr.lo + f * (xr.hi - xr.lo))
       << "</text>\n";
    os << "<text x=\"" << x0 - 6 << "\" y=\"" << py + 4 << "\" text-anchor=\"end\">" << num(yr.lo + f * (yr.hi - yr.lo))
       << "</text>\n";
  }
  os << "<text x=\"" << (x0 + x1) / 2 << "\" y=\"" << kHeight - 18 << "\" text-anchor=\"middle\">" << escape(labels.x)
     << "</text>\n";
  os << "<text x=\"18\" y=\"" << (y0 + y1) / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
     << (y0 + y1) / 2 << ")\">" << escape(labels.y) << "</text>\n</g>\n";
}

}  // namespace

std::string line_plot_svg(const std::vector<double>& x, const std::vector<double>& y, const PlotLabels& labels) {
  if (x.size() != y.size()) throw PlotError("x and y have different lengths");
  check_finite(x, "x");
  check_finite(y, "y");
  const Range xr = range_of(x), yr = range_of(y);
  const double x0 = kLeft, x1 = kWidth - kRight, y0 = kHeight - kBottom, y1 = kTop;
  auto px = [&](double v) { return x0 + (v - xr.lo) / (xr.hi - xr.lo) * (x1 - x0); };
  auto py = [&](double v) { return y0 - (v - yr.lo) / (yr.hi - yr.lo) * (y0 - y1); };

  std::ostringstream os;
  header(os, labels);
  axes(os, labels, xr, yr);
  os << "<polyline fill=\"none\" stroke=\"#1f4e9c\" stroke-width=\"1.5\" points=\"";
  for (std::size_t k = 0; k < x.size(); ++k) os << (k ? " " : "") << num(px(x[k])) << ',' << num(py(y[k]));
  os << "\"/>\n<g fill=\"#1f4e9c\">\n";
  for (std::size_t k = 0; k < x.size(); ++k)
    os << "<circle cx=\"" << num(px(x[k])) << "\" cy=\"" << num(py(y[k])) << "\" r=\"2.5\"/>\n";
  os << "</g>\n</svg>\n";
  return os.str();
}

std::string heatmap_svg(const std::vector<double>& xs, const std::vector<double>& ys,
                        const std::vector<double>& values, const PlotLabels& labels,
                        const std::string& value_label) {
  check_finite(xs, "x");
  check_finite(ys, "y");
  check_finite(values, value_label.c_str());
  if (values.size() != xs.size() * ys.size()) throw PlotError("heatmap grid size mismatch");
  const Range xr = range_of(xs), yr = range_of(ys), vr = range_of(values);
  const double x0 = kLeft, x1 = kWidth - kRight - 40, y0 = kHeight - kBottom, y1 = kTop;
  const double cw = (x1 - x0) / static_cast<double>(xs.size());
  const double ch = (y0 - y1) / static_cast<double>(ys.size());

  std::ostringstream os;
  header(os, labels);
  for (std::size_t iy = 0; iy < ys.size(); ++iy)
    for (std::size_t ix = 0; ix < xs.size(); ++ix) {
      const double f = (values[iy * xs.size() + ix] - vr.lo) / (vr.hi - vr.lo);
      const int r = static_cast<int>(std::lround(255 * f));
      const int b = 255 - r;
      os << "<rect x=\"" << num(x0 + ix * cw) << "\" y=\"" << num(y0 - (iy + 1) * ch) << "\" width=\"" << num(cw)
         << "\" height=\"" << num(ch) << "\" fill=\"rgb(" << r << ",64," << b << ")\"/>\n";
    }
  axes(os, labels, xr, yr);
  os << "<g font-family=\"sans-serif\" font-size=\"11\">\n";
  os << "<text x=\"" << kWidth - kRight - 30 << "\" y=\"" << y1 - 6 << "\">" << escape(value_label) << "</text>\n";
  os << "<text x=\"" << kWidth - kRight - 30 << "\" y=\"" << y1 + 12 << "\">" << num(vr.hi) << "</text>\n";
  os << "<text x=\"" << kWidth - kRight - 30 << "\" y=\"" << y0 << "\">" << num(vr.lo) << "</text>\n</g>\n";
  os << "</svg>\n";
  return os.str();
}

}  // namespace hall_edge::cli
