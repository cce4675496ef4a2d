#include "bergman/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include "bergman/errors.hpp"

namespace bergman {

std::size_t CsvTable::column(std::string_view name) const {
  for (std::size_t k = 0; k < header.size(); ++k)
    if (header[k] == name) return k;
  throw Error(ErrorKind::InvalidArgument, "csv has no column '" + std::string(name) + "'");
}

double CsvTable::number(std::size_t row, std::size_t col) const { return std::stod(rows.at(row).at(col)); }

CsvTable parse_csv(std::string_view text) {
  CsvTable out;
  std::istringstream in{std::string(text)};
  std::string line;
  bool have_header = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (!have_header) {
      out.header = std::move(fields);
      have_header = true;
    } else {
      out.rows.push_back(std::move(fields));
    }
  }
  return out;
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::InvalidArgument, "cannot read " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_csv(text.str());
}

namespace {

constexpr double kWidth = 640;
constexpr double kHeight = 480;
constexpr double kMargin = 60;

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

struct Frame {
  double x0, x1, y0, y1;
  double px(double x) const { return kMargin + (x - x0) / (x1 - x0) * (kWidth - 2 * kMargin); }
  double py(double y) const { return kHeight - kMargin - (y - y0) / (y1 - y0) * (kHeight - 2 * kMargin); }
};

std::string open_svg() {
  return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(kWidth) + "\" height=\"" + fmt(kHeight) +
         "\" viewBox=\"0 0 " + fmt(kWidth) + " " + fmt(kHeight) + "\" font-family=\"sans-serif\" font-size=\"12\">\n" +
         "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
}

std::string axes(const Frame& f, const std::string& xlabel, const std::string& ylabel) {
  std::ostringstream s;
  s << "<rect x=\"" << kMargin << "\" y=\"" << kMargin << "\" width=\"" << kWidth - 2 * kMargin << "\" height=\""
    << kHeight - 2 * kMargin << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int k = 0; k <= 4; ++k) {
    const double x = f.x0 + (f.x1 - f.x0) * k / 4;
    const double y = f.y0 + (f.y1 - f.y0) * k / 4;
    s << "<text x=\"" << fmt(f.px(x)) << "\" y=\"" << fmt(kHeight - kMargin + 16) << "\" text-anchor=\"middle\">"
      << fmt(x) << "</text>\n";
    s << "<text x=\"" << fmt(kMargin - 6) << "\" y=\"" << fmt(f.py(y) + 4) << "\" text-anchor=\"end\">" << fmt(y)
      << "</text>\n";
  }
  s << "<text x=\"" << kWidth / 2 << "\" y=\"" << kHeight - 15 << "\" text-anchor=\"middle\">" << xlabel
    << "</text>\n";
  s << "<text x=\"15\" y=\"" << kHeight / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 15 " << kHeight / 2
    << ")\">" << ylabel << "</text>\n";
  return s.str();
}

// Blue-to-yellow ramp for t in [0, 1].
std::string ramp(double t) {
  t = std::clamp(t, 0.0, 1.0);
  const int r = static_cast<int>(std::lround(30 + 220 * t));
  const int g = static_cast<int>(std::lround(40 + 190 * t));
  const int b = static_cast<int>(std::lround(120 - 80 * t));
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", r, g, b);
  return buf;
}

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

std::map<std::string, std::vector<std::pair<double, double>>> series_rows(const CsvTable& report) {
  const auto cs = report.column("series");
  const auto cp = report.column("p");
  const auto cv = report.column("value");
  std::map<std::string, std::vector<std::pair<double, double>>> out;
  for (std::size_t r = 0; r < report.rows.size(); ++r)
    out[report.rows[r][cs]].emplace_back(report.number(r, cp), report.number(r, cv));
  return out;
}

}  // namespace

std::string zero_scatter_svg(const CsvTable& curvature, const CsvTable& zeros) {
  const auto cre = curvature.column("re");
  const auto cim = curvature.column("im");
  const auto cd = curvature.column("density");
  double extent = 0.0;
  std::vector<double> xs;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (std::size_t r = 0; r < curvature.rows.size(); ++r) {
    extent = std::max(extent, std::abs(curvature.number(r, cre)));
    xs.push_back(curvature.number(r, cre));
    const double v = curvature.number(r, cd);
    if (v > 0) {
      lo = std::min(lo, std::log10(v));
      hi = std::max(hi, std::log10(v));
    }
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  const double cell = xs.size() > 1 ? xs[1] - xs[0] : 1.0;
  extent += 0.5 * cell;
  const Frame f{-extent, extent, -extent, extent};

  std::ostringstream s;
  s << open_svg();
  const double w = f.px(cell) - f.px(0);
  for (std::size_t r = 0; r < curvature.rows.size(); ++r) {
    const double v = curvature.number(r, cd);
    const double t = v > 0 && hi > lo ? (std::log10(v) - lo) / (hi - lo) : 0.0;
    s << "<rect x=\"" << fmt(f.px(curvature.number(r, cre) - 0.5 * cell)) << "\" y=\""
      << fmt(f.py(curvature.number(r, cim) + 0.5 * cell)) << "\" width=\"" << fmt(w) << "\" height=\"" << fmt(w)
      << "\" fill=\"" << ramp(t) << "\"/>\n";
  }
  const auto zre = zeros.column("re");
  const auto zim = zeros.column("im");
  for (std::size_t r = 0; r < zeros.rows.size(); ++r) {
    const double x = zeros.number(r, zre);
    const double y = zeros.number(r, zim);
    if (std::abs(x) > extent || std::abs(y) > extent) continue;
    s << "<circle cx=\"" << fmt(f.px(x)) << "\" cy=\"" << fmt(f.py(y)) << "\" r=\"1.5\" fill=\"black\"/>\n";
  }
  s << axes(f, "Re zeta", "Im zeta") << "</svg>\n";
  return s.str();
}

std::string kernel_fit_svg(const CsvTable& report) {
  const auto all = series_rows(report);
  const auto it = all.find("min_kernel");
  if (it == all.end() || it->second.size() < 2) throw Error(ErrorKind::InvalidArgument, "report has no min_kernel");
  std::vector<double> x;
  std::vector<double> y;
  for (const auto& [p, v] : it->second) {
    x.push_back(std::log(p));
    y.push_back(std::log(v));
  }
  const double n = static_cast<double>(x.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    mx += x[k] / n;
    my += y[k] / n;
  }
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    sxx += (x[k] - mx) * (x[k] - mx);
    sxy += (x[k] - mx) * (y[k] - my);
  }
  const double slope = sxy / sxx;
  const double icpt = my - slope * mx;

  const auto [xlo, xhi] = std::minmax_element(x.begin(), x.end());
  const auto [ylo, yhi] = std::minmax_element(y.begin(), y.end());
  const double pad = 0.1 * std::max(*yhi - *ylo, 0.1);
  const Frame f{*xlo - 0.1, *xhi + 0.1, *ylo - pad, *yhi + pad};
  std::ostringstream s;
  s << open_svg();
  s << "<line x1=\"" << fmt(f.px(f.x0)) << "\" y1=\"" << fmt(f.py(icpt + slope * f.x0)) << "\" x2=\""
    << fmt(f.px(f.x1)) << "\" y2=\"" << fmt(f.py(icpt + slope * f.x1)) << "\" stroke=\"#d62728\"/>\n";
  for (std::size_t k = 0; k < x.size(); ++k)
    s << "<circle cx=\"" << fmt(f.px(x[k])) << "\" cy=\"" << fmt(f.py(y[k])) << "\" r=\"4\" fill=\"#1f77b4\"/>\n";
  s << "<text x=\"" << kMargin + 10 << "\" y=\"" << kMargin + 20 << "\">slope " << fmt(slope) << "</text>\n";
  s << axes(f, "log p", "log min P") << "</svg>\n";
  return s.str();
}

std::string l1_decay_svg(const CsvTable& report) {
  const auto all = series_rows(report);
  std::vector<std::pair<std::string, std::vector<std::pair<double, double>>>> curves;
  for (const auto& [name, rows] : all)
    if (name.rfind("l1_log_kernel", 0) == 0) curves.emplace_back(name, rows);
  if (curves.empty()) throw Error(ErrorKind::InvalidArgument, "report has no l1_log_kernel series");

  double xlo = std::numeric_limits<double>::infinity();
  double xhi = -xlo;
  double ylo = xlo;
  double yhi = -xlo;
  for (const auto& [name, rows] : curves)
    for (const auto& [p, v] : rows) {
      xlo = std::min(xlo, std::log2(p));
      xhi = std::max(xhi, std::log2(p));
      ylo = std::min(ylo, std::log10(v));
      yhi = std::max(yhi, std::log10(v));
    }
  const double pad = 0.1 * std::max(yhi - ylo, 0.1);
  const Frame f{xlo - 0.2, xhi + 0.2, ylo - pad, yhi + pad};
  std::ostringstream s;
  s << open_svg();
  for (std::size_t c = 0; c < curves.size(); ++c) {
    const auto* colour = kPalette[c % std::size(kPalette)];
    s << "<polyline fill=\"none\" stroke=\"" << colour << "\" points=\"";
    for (const auto& [p, v] : curves[c].second) s << fmt(f.px(std::log2(p))) << "," << fmt(f.py(std::log10(v))) << " ";
    s << "\"/>\n";
    s << "<text x=\"" << kWidth - kMargin - 150 << "\" y=\"" << kMargin + 20 + 16 * c << "\" fill=\"" << colour
      << "\">" << curves[c].first << "</text>\n";
  }
  s << axes(f, "log2 p", "log10 (1/p) |log P|_L1") << "</svg>\n";
  return s.str();
}

}  // namespace bergman
