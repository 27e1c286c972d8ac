#include "sparsecert/plot.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <limits>
#include <sstream>

#include "sparsecert/errors.hpp"
#include "sparsecert/io.hpp"

namespace sparsecert {

namespace {

constexpr double kPanelWidth = 640.0;
constexpr double kPanelHeight = 360.0;
constexpr double kMarginLeft = 64.0;
constexpr double kMarginRight = 170.0;
constexpr double kMarginTop = 40.0;
constexpr double kMarginBottom = 48.0;

constexpr std::array<const char*, 8> kPalette = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                                 "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};

std::string fixed2(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::fixed, 2);
  return std::string(buf, ptr);
}

struct Frame {
  double x0, y0;  // panel origin
  double alpha_min, alpha_max;

  double px(double alpha) const {
    const double w = kPanelWidth - kMarginLeft - kMarginRight;
    return x0 + kMarginLeft + (alpha - alpha_min) / (alpha_max - alpha_min) * w;
  }
  double py(double rate) const {
    const double h = kPanelHeight - kMarginTop - kMarginBottom;
    return y0 + kMarginTop + (1.0 - rate) * h;
  }
};

void draw_axes(std::ostream& svg, const Frame& f, double rho_multiplier) {
  const double left = f.px(f.alpha_min);
  const double right = f.px(f.alpha_max);
  const double top = f.py(1.0);
  const double bottom = f.py(0.0);

  svg << "<text x=\"" << fixed2(f.x0 + kPanelWidth / 2 - kMarginRight / 2) << "\" y=\""
      << fixed2(f.y0 + 24) << "\" text-anchor=\"middle\" font-size=\"15\">"
      << "Exact support recovery rate, rho = " << format_real(rho_multiplier)
      << " sqrt(n)</text>\n";
  svg << "<rect x=\"" << fixed2(left) << "\" y=\"" << fixed2(top) << "\" width=\""
      << fixed2(right - left) << "\" height=\"" << fixed2(bottom - top)
      << "\" fill=\"none\" stroke=\"#000\"/>\n";

  for (int i = 0; i <= 5; ++i) {
    const double rate = 0.2 * i;
    const double y = f.py(rate);
    svg << "<line x1=\"" << fixed2(left - 4) << "\" y1=\"" << fixed2(y) << "\" x2=\""
        << fixed2(right) << "\" y2=\"" << fixed2(y) << "\" stroke=\"#ddd\"/>\n";
    svg << "<text x=\"" << fixed2(left - 8) << "\" y=\"" << fixed2(y + 4)
        << "\" text-anchor=\"end\" font-size=\"11\">" << fixed2(rate) << "</text>\n";
  }
  for (int i = 0; i <= 6; ++i) {
    const double alpha = f.alpha_min + (f.alpha_max - f.alpha_min) * i / 6.0;
    const double x = f.px(alpha);
    svg << "<line x1=\"" << fixed2(x) << "\" y1=\"" << fixed2(bottom) << "\" x2=\"" << fixed2(x)
        << "\" y2=\"" << fixed2(bottom + 4) << "\" stroke=\"#000\"/>\n";
    svg << "<text x=\"" << fixed2(x) << "\" y=\"" << fixed2(bottom + 18)
        << "\" text-anchor=\"middle\" font-size=\"11\">" << fixed2(alpha) << "</text>\n";
  }
  svg << "<text x=\"" << fixed2((left + right) / 2) << "\" y=\"" << fixed2(bottom + 38)
      << "\" text-anchor=\"middle\" font-size=\"12\">alpha</text>\n";
  svg << "<text x=\"" << fixed2(f.x0 + 16) << "\" y=\"" << fixed2((top + bottom) / 2)
      << "\" text-anchor=\"middle\" font-size=\"12\" transform=\"rotate(-90 "
      << fixed2(f.x0 + 16) << ' ' << fixed2((top + bottom) / 2) << ")\">rate</text>\n";
}

void draw_series(std::ostream& svg, const Frame& f, const RecoveryCurve& curve, bool dcl,
                 const char* color) {
  svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\""
      << (dcl ? "" : " stroke-dasharray=\"6 4\"") << " points=\"";
  for (std::size_t i = 0; i < curve.points.size(); ++i) {
    const RecoveryPoint& pt = curve.points[i];
    svg << (i ? " " : "") << fixed2(f.px(pt.alpha)) << ','
        << fixed2(f.py(dcl ? pt.dcl_rate : pt.pwg_rate));
  }
  svg << "\"/>\n";
  for (const RecoveryPoint& pt : curve.points) {
    const double x = f.px(pt.alpha);
    const double y = f.py(dcl ? pt.dcl_rate : pt.pwg_rate);
    if (dcl) {
      svg << "<circle cx=\"" << fixed2(x) << "\" cy=\"" << fixed2(y) << "\" r=\"3\" fill=\""
          << color << "\"/>\n";
    } else {
      svg << "<rect x=\"" << fixed2(x - 3) << "\" y=\"" << fixed2(y - 3)
          << "\" width=\"6\" height=\"6\" fill=\"white\" stroke=\"" << color << "\"/>\n";
    }
  }
}

}  // namespace

std::string render_recovery_svg(const std::vector<RecoveryCurve>& curves) {
  std::vector<double> rho_order;
  std::vector<Index> p_order;
  double alpha_min = std::numeric_limits<double>::infinity();
  double alpha_max = -std::numeric_limits<double>::infinity();
  for (const RecoveryCurve& c : curves) {
    if (std::find(rho_order.begin(), rho_order.end(), c.rho_multiplier) == rho_order.end()) {
      rho_order.push_back(c.rho_multiplier);
    }
    if (std::find(p_order.begin(), p_order.end(), c.p) == p_order.end()) p_order.push_back(c.p);
    for (const RecoveryPoint& pt : c.points) {
      alpha_min = std::min(alpha_min, pt.alpha);
      alpha_max = std::max(alpha_max, pt.alpha);
    }
  }
  if (rho_order.empty() || !(alpha_min <= alpha_max)) {
    throw InvalidInput("render_recovery_svg: no data points");
  }
  if (alpha_min == alpha_max) {
    alpha_min -= 0.5;
    alpha_max += 0.5;
  }

  std::ostringstream svg;
  const double total_height = kPanelHeight * static_cast<double>(rho_order.size());
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fixed2(kPanelWidth)
      << "\" height=\"" << fixed2(total_height) << "\" viewBox=\"0 0 " << fixed2(kPanelWidth)
      << ' ' << fixed2(total_height) << "\" font-family=\"sans-serif\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  for (std::size_t panel = 0; panel < rho_order.size(); ++panel) {
    const Frame frame{0.0, kPanelHeight * static_cast<double>(panel), alpha_min, alpha_max};
    svg << "<g class=\"panel\">\n";
    draw_axes(svg, frame, rho_order[panel]);

    double legend_y = frame.py(1.0) + 6;
    const double legend_x = frame.px(alpha_max) + 16;
    for (std::size_t pi = 0; pi < p_order.size(); ++pi) {
      const auto it = std::find_if(curves.begin(), curves.end(), [&](const RecoveryCurve& c) {
        return c.p == p_order[pi] && c.rho_multiplier == rho_order[panel];
      });
      if (it == curves.end()) continue;
      const char* color = kPalette[pi % kPalette.size()];
      for (const bool dcl : {true, false}) {
        draw_series(svg, frame, *it, dcl, color);
        svg << "<line x1=\"" << fixed2(legend_x) << "\" y1=\"" << fixed2(legend_y) << "\" x2=\""
            << fixed2(legend_x + 24) << "\" y2=\"" << fixed2(legend_y) << "\" stroke=\"" << color
            << "\" stroke-width=\"2\"" << (dcl ? "" : " stroke-dasharray=\"6 4\"") << "/>\n";
        svg << "<text x=\"" << fixed2(legend_x + 30) << "\" y=\"" << fixed2(legend_y + 4)
            << "\" font-size=\"12\">" << (dcl ? "DCL" : "PWG") << " p=" << p_order[pi]
            << "</text>\n";
        legend_y += 18;
      }
    }
    svg << "</g>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace sparsecert
