#include "fsc/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "fsc/error.hpp"

namespace fsc {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidParameters: return "InvalidParameters";
    case ErrorCode::NumericalFailure: return "NumericalFailure";
    case ErrorCode::DimensionTooLarge: return "DimensionTooLarge";
    case ErrorCode::NodeSetMismatch: return "NodeSetMismatch";
    case ErrorCode::DegenerateFunction: return "DegenerateFunction";
    case ErrorCode::SingularCovariance: return "SingularCovariance";
    case ErrorCode::ChainUnavailable: return "ChainUnavailable";
    case ErrorCode::NonfiniteDerivative: return "NonfiniteDerivative";
    case ErrorCode::BasisCollapse: return "BasisCollapse";
    case ErrorCode::NonfiniteRhs: return "NonfiniteRhs";
    case ErrorCode::NonfiniteState: return "NonfiniteState";
    case ErrorCode::UnknownVariant: return "UnknownVariant";
    case ErrorCode::GridMismatch: return "GridMismatch";
    case ErrorCode::NonfinitePath: return "NonfinitePath";
    case ErrorCode::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

namespace {

std::string g17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string short_num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '<') out += "&lt;";
    else if (c == '>') out += "&gt;";
    else if (c == '&') out += "&amp;";
    else out += c;
  }
  return out;
}

}  // namespace

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::ConfigError, "cannot write '" + path + "'");
  out << text;
}

void write_moments_csv(const std::string& path, const MomentSeries& s) {
  std::ostringstream os;
  os << "t,mean,variance\n";
  for (std::size_t i = 0; i < s.times.size(); ++i)
    os << g17(s.times[i]) << ',' << g17(s.mean[i]) << ',' << g17(s.variance[i]) << '\n';
  write_text(path, os.str());
}

void write_errors_csv(const std::string& path, const ErrorReport& r) {
  std::ostringstream os;
  os << "t,eps_mean,eps_var\n";
  for (std::size_t i = 0; i < r.times.size(); ++i)
    os << g17(r.times[i]) << ',' << g17(r.eps_mean[i]) << ',' << g17(r.eps_var[i]) << '\n';
  write_text(path, os.str());
}

std::string render_svg(const PlotSpec& spec) {
  const double W = 720, H = 440, left = 80, right = 170, top = 40, bottom = 60;
  const double pw = W - left - right, ph = H - top - bottom;
  auto ty = [&](double y) { return spec.log_y ? std::log10(y) : y; };
  auto usable = [&](double y) { return std::isfinite(y) && (!spec.log_y || y > 0); };

  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  for (const auto& l : spec.lines)
    for (std::size_t i = 0; i < l.x.size() && i < l.y.size(); ++i) {
      if (!usable(l.y[i]) || !std::isfinite(l.x[i])) continue;
      x0 = std::min(x0, l.x[i]);
      x1 = std::max(x1, l.x[i]);
      y0 = std::min(y0, ty(l.y[i]));
      y1 = std::max(y1, ty(l.y[i]));
    }
  if (!(x0 <= x1)) x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  if (x1 == x0) x1 = x0 + 1;
  if (y1 == y0) y0 -= 0.5, y1 += 0.5;
  if (spec.log_y) y0 = std::floor(y0), y1 = std::ceil(y1);
  auto px = [&](double x) { return left + (x - x0) / (x1 - x0) * pw; };
  auto py = [&](double y) { return top + (y1 - y) / (y1 - y0) * ph; };

  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"};
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
     << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
     << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
     << "<text x=\"" << W / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" << escape(spec.title)
     << "</text>\n"
     << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph
     << "\" fill=\"none\" stroke=\"black\"/>\n";

  for (int k = 0; k <= 5; ++k) {
    double xv = x0 + (x1 - x0) * k / 5.0;
    os << "<text x=\"" << px(xv) << "\" y=\"" << top + ph + 18 << "\" text-anchor=\"middle\">"
       << short_num(xv) << "</text>\n";
  }
  int yticks = spec.log_y ? static_cast<int>(std::min(10.0, y1 - y0)) : 5;
  if (yticks < 1) yticks = 1;
  for (int k = 0; k <= yticks; ++k) {
    double yv = y0 + (y1 - y0) * k / yticks;
    std::string label = spec.log_y ? "1e" + short_num(yv) : short_num(yv);
    os << "<text x=\"" << left - 6 << "\" y=\"" << py(yv) + 4 << "\" text-anchor=\"end\">" << label
       << "</text>\n"
       << "<line x1=\"" << left << "\" x2=\"" << left + pw << "\" y1=\"" << py(yv) << "\" y2=\"" << py(yv)
       << "\" stroke=\"#ddd\"/>\n";
  }
  os << "<text x=\"" << left + pw / 2 << "\" y=\"" << H - 15 << "\" text-anchor=\"middle\">"
     << escape(spec.xlabel) << "</text>\n"
     << "<text transform=\"translate(18," << top + ph / 2 << ") rotate(-90)\" text-anchor=\"middle\">"
     << escape(spec.ylabel) << "</text>\n";

  for (std::size_t li = 0; li < spec.lines.size(); ++li) {
    const auto& l = spec.lines[li];
    const char* color = colors[li % 6];
    std::ostringstream pts;
    bool open = false;
    auto flush = [&] {
      if (open)
        os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"" << pts.str()
           << "\"/>\n";
      pts.str("");
      open = false;
    };
    // Thin long series so files stay small.
    std::size_t stride = std::max<std::size_t>(1, l.x.size() / 2000);
    for (std::size_t i = 0; i < l.x.size() && i < l.y.size(); i += stride) {
      if (!usable(l.y[i])) {
        flush();
        continue;
      }
      pts << px(l.x[i]) << ',' << py(ty(l.y[i])) << ' ';
      open = true;
    }
    flush();
    double ly = top + 14 + 18.0 * li;
    os << "<line x1=\"" << left + pw + 10 << "\" x2=\"" << left + pw + 30 << "\" y1=\"" << ly << "\" y2=\"" << ly
       << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n"
       << "<text x=\"" << left + pw + 35 << "\" y=\"" << ly + 4 << "\">" << escape(l.label) << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace fsc
