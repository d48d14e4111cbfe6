#include <algorithm>
#include <cmath>
#include <fstream>
#include <string>
#include <vector>

#include "fmt_util.hpp"
#include "udep/harness.hpp"

namespace udep::harness {

namespace {

constexpr double kWidth = 860.0;
constexpr double kHeight = 520.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 640.0;
constexpr double kTop = 44.0;
constexpr double kBottom = 468.0;

constexpr const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                                    "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};

struct ChartSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> mean;
  std::vector<double> stddev;
};

std::string series_label(const SweepRow& row) {
  if (row.selector == MeasureSelector::hsic) return "hsic";
  std::string label = "chsic alpha=" + detail::format_g6(*row.alpha);
  label += row.selector == MeasureSelector::chsic_confounder ? " (confounder)" : " (random)";
  return label;
}

// 1-2-5 tick spacing covering [lo, hi] with about `target` steps.
std::vector<double> nice_ticks(double lo, double hi, int target) {
  const double span = hi - lo;
  const double raw_step = span / target;
  const double mag = std::pow(10.0, std::floor(std::log10(raw_step)));
  double step = mag;
  for (double mult : {1.0, 2.0, 2.5, 5.0, 10.0}) {
    if (mag * mult >= raw_step) {
      step = mag * mult;
      break;
    }
  }
  std::vector<double> ticks;
  double tick = std::ceil(lo / step) * step;
  for (; tick <= hi + step * 1e-9; tick += step) {
    ticks.push_back(std::abs(tick) < step * 1e-9 ? 0.0 : tick);
  }
  return ticks;
}

}  // namespace

void render_chart(const SweepResult& result, const std::filesystem::path& path) {
  if (result.rows.empty()) throw InvalidInput("cannot render an empty sweep result");

  // Rows arrive ordered by series then sweep value; regroup into curves.
  std::vector<ChartSeries> curves;
  for (const auto& row : result.rows) {
    const std::string label = series_label(row);
    if (curves.empty() || curves.back().label != label) {
      curves.push_back({label, {}, {}, {}});
    }
    curves.back().x.push_back(result.axis == SweepAxis::gamma_db
                                  ? row.gamma_db
                                  : static_cast<double>(row.L));
    curves.back().mean.push_back(row.mean);
    curves.back().stddev.push_back(row.stddev);
  }

  double x_lo = curves.front().x.front();
  double x_hi = x_lo;
  double y_lo = 0.0;
  double y_hi = curves.front().mean.front();
  for (const auto& curve : curves) {
    for (std::size_t i = 0; i < curve.x.size(); ++i) {
      x_lo = std::min(x_lo, curve.x[i]);
      x_hi = std::max(x_hi, curve.x[i]);
      y_lo = std::min(y_lo, curve.mean[i] - curve.stddev[i]);
      y_hi = std::max(y_hi, curve.mean[i] + curve.stddev[i]);
    }
  }
  if (x_lo == x_hi) {
    x_lo -= 1.0;
    x_hi += 1.0;
  }
  const double y_pad = (y_hi == y_lo) ? 1.0 : 0.05 * (y_hi - y_lo);
  y_lo -= y_pad;
  y_hi += y_pad;

  const auto sx = [&](double v) {
    return kLeft + (v - x_lo) / (x_hi - x_lo) * (kRight - kLeft);
  };
  const auto sy = [&](double v) {
    return kBottom - (v - y_lo) / (y_hi - y_lo) * (kBottom - kTop);
  };
  const auto num = [](double v) { return detail::format_g6(v); };

  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path.string());

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
      << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << ' '
      << kHeight << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  const std::string model = model_name(result.rows.front().model);
  const std::string x_label =
      result.axis == SweepAxis::gamma_db ? "gamma (dB)" : "L";
  out << "<text x=\"" << (kLeft + kRight) / 2.0
      << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"15\">"
      << model << ": sweep over " << x_label << "</text>\n";

  // Grid and axes.
  for (double tick : nice_ticks(x_lo, x_hi, 6)) {
    out << "<line x1=\"" << num(sx(tick)) << "\" y1=\"" << kTop << "\" x2=\""
        << num(sx(tick)) << "\" y2=\"" << kBottom
        << "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n"
        << "<text x=\"" << num(sx(tick)) << "\" y=\"" << kBottom + 18.0
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
        << num(tick) << "</text>\n";
  }
  for (double tick : nice_ticks(y_lo, y_hi, 6)) {
    out << "<line x1=\"" << kLeft << "\" y1=\"" << num(sy(tick)) << "\" x2=\""
        << kRight << "\" y2=\"" << num(sy(tick))
        << "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n"
        << "<text x=\"" << kLeft - 8.0 << "\" y=\"" << num(sy(tick) + 4.0)
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
        << num(tick) << "</text>\n";
  }
  out << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\""
      << kRight - kLeft << "\" height=\"" << kBottom - kTop
      << "\" fill=\"none\" stroke=\"#333333\" stroke-width=\"1\"/>\n"
      << "<text x=\"" << (kLeft + kRight) / 2.0 << "\" y=\"" << kHeight - 12.0
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">"
      << x_label << "</text>\n"
      << "<text x=\"18\" y=\"" << (kTop + kBottom) / 2.0
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
         "transform=\"rotate(-90 18 "
      << (kTop + kBottom) / 2.0 << ")\">dependence measure</text>\n";

  for (std::size_t c = 0; c < curves.size(); ++c) {
    const auto& curve = curves[c];
    const char* color = kPalette[c % (sizeof(kPalette) / sizeof(kPalette[0]))];

    if (curve.x.size() > 1) {
      out << "<polygon points=\"";
      for (std::size_t i = 0; i < curve.x.size(); ++i) {
        out << num(sx(curve.x[i])) << ',' << num(sy(curve.mean[i] + curve.stddev[i])) << ' ';
      }
      for (std::size_t i = curve.x.size(); i-- > 0;) {
        out << num(sx(curve.x[i])) << ',' << num(sy(curve.mean[i] - curve.stddev[i])) << ' ';
      }
      out << "\" fill=\"" << color << "\" fill-opacity=\"0.15\" stroke=\"none\"/>\n";

      out << "<polyline points=\"";
      for (std::size_t i = 0; i < curve.x.size(); ++i) {
        out << num(sx(curve.x[i])) << ',' << num(sy(curve.mean[i])) << ' ';
      }
      out << "\" fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.8\"/>\n";
    }
    for (std::size_t i = 0; i < curve.x.size(); ++i) {
      out << "<circle cx=\"" << num(sx(curve.x[i])) << "\" cy=\""
          << num(sy(curve.mean[i])) << "\" r=\"3\" fill=\"" << color << "\"/>\n";
    }
  }

  // Legend.
  const double legend_x = kRight + 16.0;
  for (std::size_t c = 0; c < curves.size(); ++c) {
    const char* color = kPalette[c % (sizeof(kPalette) / sizeof(kPalette[0]))];
    const double y = kTop + 10.0 + 22.0 * static_cast<double>(c);
    out << "<line x1=\"" << legend_x << "\" y1=\"" << y << "\" x2=\""
        << legend_x + 24.0 << "\" y2=\"" << y << "\" stroke=\"" << color
        << "\" stroke-width=\"2.5\"/>\n"
        << "<text x=\"" << legend_x + 30.0 << "\" y=\"" << y + 4.0
        << "\" font-family=\"sans-serif\" font-size=\"12\">" << curves[c].label
        << "</text>\n";
  }

  out << "</svg>\n";
  if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace udep::harness
