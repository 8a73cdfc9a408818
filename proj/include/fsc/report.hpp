#pragma once

#include <string>
#include <vector>

#include "fsc/oracle.hpp"
#include "fsc/spectral.hpp"

namespace fsc {

// "t,mean,variance" with %.17g values.
void write_moments_csv(const std::string& path, const MomentSeries& series);
// "t,eps_mean,eps_var".
void write_errors_csv(const std::string& path, const ErrorReport& report);

struct PlotLine {
  std::string label;
  std::vector<double> x, y;
};

struct PlotSpec {
  std::string title, xlabel, ylabel;
  bool log_y = false;
  std::vector<PlotLine> lines;
};

// Self-contained SVG line chart. Non-positive values are skipped on a log axis.
std::string render_svg(const PlotSpec& spec);
void write_text(const std::string& path, const std::string& text);

}  // namespace fsc
