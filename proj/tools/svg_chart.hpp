#pragma once

#include "stpca/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

namespace stl_cli {

// Static line chart of the recorded correlations m_ij(tau) (solid) and
// eigenvalues theta_i(tau) (dashed) for one trajectory. Self-contained SVG,
// no external assets; purely a convenience view over the CSV data.
inline std::string trajectory_svg(const stpca::Trajectory& traj,
                                  const std::string& title) {
  const int width = 860, height = 520;
  const int left = 60, right = 20, top = 40, bottom = 45;
  const double plot_w = width - left - right;
  const double plot_h = height - top - bottom;

  const int r = traj.size() > 0 ? static_cast<int>(traj.corr.front().rows()) : 0;
  const std::size_t T = traj.size();
  double tau_max = 1e-12, y_min = 0.0, y_max = 1.0;
  for (std::size_t s = 0; s < T; ++s) {
    tau_max = std::max(tau_max, traj.taus[s]);
    y_min = std::min(y_min, traj.corr[s].minCoeff());
    y_max = std::max(y_max, traj.corr[s].maxCoeff());
  }
  y_min = std::max(y_min, -1.1);
  y_max = std::min(y_max, 1.1);

  auto sx = [&](double tau) { return left + plot_w * tau / tau_max; };
  auto sy = [&](double v) {
    return top + plot_h * (y_max - v) / (y_max - y_min);
  };
  auto num = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4g", v);
    return std::string(buf);
  };

  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                 "#ff7f0e", "#8c564b", "#e377c2", "#7f7f7f",
                                 "#bcbd22", "#17becf", "#aec7e8", "#ffbb78",
                                 "#98df8a", "#ff9896", "#c5b0d5", "#c49c94"};
  const int n_colors = 16;

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
         std::to_string(width) + "\" height=\"" + std::to_string(height) +
         "\" viewBox=\"0 0 " + std::to_string(width) + " " +
         std::to_string(height) + "\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg += "<text x=\"" + std::to_string(width / 2) +
         "\" y=\"22\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"15\">" + title + "</text>\n";

  // Axes and gridlines.
  for (int g = 0; g <= 4; ++g) {
    const double v = y_min + (y_max - y_min) * g / 4.0;
    const double y = sy(v);
    svg += "<line x1=\"" + num(left) + "\" y1=\"" + num(y) + "\" x2=\"" +
           num(width - right) + "\" y2=\"" + num(y) +
           "\" stroke=\"#dddddd\"/>\n";
    svg += "<text x=\"" + num(left - 8) + "\" y=\"" + num(y + 4) +
           "\" text-anchor=\"end\" font-family=\"sans-serif\" "
           "font-size=\"11\">" + num(v) + "</text>\n";
  }
  for (int g = 0; g <= 5; ++g) {
    const double tau = tau_max * g / 5.0;
    const double x = sx(tau);
    svg += "<line x1=\"" + num(x) + "\" y1=\"" + num(top) + "\" x2=\"" +
           num(x) + "\" y2=\"" + num(height - bottom) +
           "\" stroke=\"#eeeeee\"/>\n";
    svg += "<text x=\"" + num(x) + "\" y=\"" + num(height - bottom + 16) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"11\">" + num(tau) + "</text>\n";
  }
  svg += "<text x=\"" + std::to_string(width / 2) + "\" y=\"" +
         std::to_string(height - 10) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"12\">population time</text>\n";

  auto polyline = [&](const std::vector<double>& ys, const char* color,
                      bool dashed) {
    std::string pts;
    for (std::size_t s = 0; s < T; ++s) {
      const double v = std::clamp(ys[s], y_min, y_max);
      pts += num(sx(traj.taus[s])) + "," + num(sy(v)) + " ";
    }
    svg += "<polyline fill=\"none\" stroke=\"";
    svg += color;
    svg += "\" stroke-width=\"1.5\"";
    if (dashed) svg += " stroke-dasharray=\"6,4\"";
    svg += " points=\"" + pts + "\"/>\n";
  };

  int series = 0;
  std::vector<double> ys(T);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j) {
      for (std::size_t s = 0; s < T; ++s) ys[s] = traj.corr[s](i, j);
      const char* color = colors[series % n_colors];
      polyline(ys, color, false);
      svg += "<text x=\"" + num(left + 10 + 78 * (series % 8)) + "\" y=\"" +
             num(top + 14 + 14 * (series / 8)) +
             "\" font-family=\"sans-serif\" font-size=\"11\" fill=\"" +
             color + "\">m_" + std::to_string(i + 1) + "_" +
             std::to_string(j + 1) + "</text>\n";
      ++series;
    }
  if (!traj.eigs.empty() && traj.eigs.size() == T) {
    for (int i = 0; i < r; ++i) {
      for (std::size_t s = 0; s < T; ++s) ys[s] = traj.eigs[s](i);
      polyline(ys, "#555555", true);
    }
  }

  svg += "</svg>\n";
  return svg;
}

}  // namespace stl_cli
