#include "pg/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace pg {
namespace {

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                    "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  void add(double v) {
    if (!std::isfinite(v)) return;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  bool valid() const { return lo <= hi; }
};

double transform(double v, bool log_scale) {
  if (!log_scale) return v;
  return v > 0.0 ? std::log10(v) : std::numeric_limits<double>::quiet_NaN();
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

void write_svg_plot(const std::filesystem::path& path, const std::vector<SvgSeries>& series,
                    const SvgOptions& opt) {
  const double ml = 70, mr = 20, mt = 36, mb = 52;
  const double pw = opt.width - ml - mr;
  const double ph = opt.height - mt - mb;

  Range rx, ry;
  for (const auto& s : series) {
    for (double v : s.x) rx.add(transform(v, opt.log_x));
    for (double v : s.y) ry.add(transform(v, opt.log_y));
    for (double v : s.y_lo) ry.add(transform(v, opt.log_y));
    for (double v : s.y_hi) ry.add(transform(v, opt.log_y));
  }
  if (!rx.valid() || !ry.valid()) throw std::invalid_argument("write_svg_plot: no finite data");
  if (rx.hi == rx.lo) { rx.lo -= 0.5; rx.hi += 0.5; }
  if (ry.hi == ry.lo) { ry.lo -= 0.5; ry.hi += 0.5; }
  const double pad_y = 0.04 * (ry.hi - ry.lo);
  ry.lo -= pad_y;
  ry.hi += pad_y;

  auto px = [&](double v) {
    const double t = transform(v, opt.log_x);
    return ml + (t - rx.lo) / (rx.hi - rx.lo) * pw;
  };
  auto py = [&](double v) {
    const double t = transform(v, opt.log_y);
    return mt + ph - (t - ry.lo) / (ry.hi - ry.lo) * ph;
  };
  auto finite_xy = [&](double x, double y) {
    return std::isfinite(transform(x, opt.log_x)) && std::isfinite(transform(y, opt.log_y));
  };

  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("write_svg_plot: cannot open " + path.string());
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << opt.width << "\" height=\""
      << opt.height << "\" viewBox=\"0 0 " << opt.width << " " << opt.height << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << num(ml + pw / 2) << "\" y=\"20\" text-anchor=\"middle\" "
      << "font-family=\"sans-serif\" font-size=\"14\">" << escape(opt.title) << "</text>\n";

  // Axes and ticks.
  out << "<g stroke=\"#333\" stroke-width=\"1\" fill=\"none\">\n";
  out << "<path d=\"M" << num(ml) << " " << num(mt) << " V" << num(mt + ph) << " H"
      << num(ml + pw) << "\"/>\n</g>\n";
  out << "<g font-family=\"sans-serif\" font-size=\"10\" fill=\"#333\">\n";
  const int n_ticks = 5;
  for (int i = 0; i <= n_ticks; ++i) {
    const double tx = rx.lo + (rx.hi - rx.lo) * i / n_ticks;
    const double vx = opt.log_x ? std::pow(10.0, tx) : tx;
    const double sx = ml + pw * i / n_ticks;
    out << "<line x1=\"" << num(sx) << "\" y1=\"" << num(mt + ph) << "\" x2=\"" << num(sx)
        << "\" y2=\"" << num(mt + ph + 4) << "\" stroke=\"#333\"/>\n";
    char lbl[32];
    std::snprintf(lbl, sizeof lbl, "%.3g", vx);
    out << "<text x=\"" << num(sx) << "\" y=\"" << num(mt + ph + 16)
        << "\" text-anchor=\"middle\">" << lbl << "</text>\n";
    const double ty = ry.lo + (ry.hi - ry.lo) * i / n_ticks;
    const double vy = opt.log_y ? std::pow(10.0, ty) : ty;
    const double sy = mt + ph - ph * i / n_ticks;
    out << "<line x1=\"" << num(ml - 4) << "\" y1=\"" << num(sy) << "\" x2=\"" << num(ml)
        << "\" y2=\"" << num(sy) << "\" stroke=\"#333\"/>\n";
    std::snprintf(lbl, sizeof lbl, "%.3g", vy);
    out << "<text x=\"" << num(ml - 7) << "\" y=\"" << num(sy + 3) << "\" text-anchor=\"end\">"
        << lbl << "</text>\n";
  }
  out << "<text x=\"" << num(ml + pw / 2) << "\" y=\"" << num(opt.height - 10)
      << "\" text-anchor=\"middle\" font-size=\"12\">" << escape(opt.x_label) << "</text>\n";
  out << "<text x=\"16\" y=\"" << num(mt + ph / 2)
      << "\" text-anchor=\"middle\" font-size=\"12\" transform=\"rotate(-90 16 "
      << num(mt + ph / 2) << ")\">" << escape(opt.y_label) << "</text>\n";
  out << "</g>\n";

  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    const char* color = kPalette[k % (sizeof kPalette / sizeof kPalette[0])];
    if (s.y_lo.size() == s.x.size() && s.y_hi.size() == s.x.size()) {
      std::string pts;
      for (std::size_t i = 0; i < s.x.size(); ++i) {
        if (!finite_xy(s.x[i], s.y_lo[i]) || !finite_xy(s.x[i], s.y_hi[i])) continue;
        pts += num(px(s.x[i])) + "," + num(py(s.y_hi[i])) + " ";
      }
      for (std::size_t i = s.x.size(); i-- > 0;) {
        if (!finite_xy(s.x[i], s.y_lo[i]) || !finite_xy(s.x[i], s.y_hi[i])) continue;
        pts += num(px(s.x[i])) + "," + num(py(s.y_lo[i])) + " ";
      }
      if (!pts.empty())
        out << "<polygon points=\"" << pts << "\" fill=\"" << color
            << "\" fill-opacity=\"0.15\" stroke=\"none\"/>\n";
    }
    std::string pts;
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!finite_xy(s.x[i], s.y[i])) continue;
      pts += num(px(s.x[i])) + "," + num(py(s.y[i])) + " ";
    }
    if (!pts.empty())
      out << "<polyline points=\"" << pts << "\" fill=\"none\" stroke=\"" << color
          << "\" stroke-width=\"1.5\"/>\n";
    const double ly = mt + 14 + 14 * static_cast<double>(k);
    out << "<line x1=\"" << num(ml + pw - 150) << "\" y1=\"" << num(ly) << "\" x2=\""
        << num(ml + pw - 130) << "\" y2=\"" << num(ly) << "\" stroke=\"" << color
        << "\" stroke-width=\"2\"/>\n";
    out << "<text x=\"" << num(ml + pw - 125) << "\" y=\"" << num(ly + 3)
        << "\" font-family=\"sans-serif\" font-size=\"11\">" << escape(s.label) << "</text>\n";
  }
  out << "</svg>\n";
}

}  // namespace pg
