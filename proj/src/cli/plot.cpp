#include "blockmod/experiments.hpp"

#include <algorithm>
#include <cstdio>
#include <istream>
#include <map>
#include <set>
#include <sstream>

namespace blockmod::experiments {

namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double to_double(const std::string& s, std::size_t line) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("plot: line " + std::to_string(line) + ": '" + s + "' is not a number");
  }
}

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", x);
  return buf;
}

struct Point {
  double x, recovery, misclassification;
};

const char* kColours[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

void panel(std::ostringstream& svg, double left, const std::string& title,
           const std::map<std::string, std::vector<Point>>& series, bool recovery, double xmin,
           double xmax, bool log_x, const std::string& xlabel) {
  const double top = 40, width = 360, height = 260;
  auto sx = [&](double x) {
    const double a = log_x ? std::log(x) : x, lo = log_x ? std::log(xmin) : xmin,
                 hi = log_x ? std::log(xmax) : xmax;
    return left + (hi > lo ? (a - lo) / (hi - lo) : 0.5) * width;
  };
  auto sy = [&](double y) { return top + (1.0 - y) * height; };

  svg << "<text x=\"" << left + width / 2 << "\" y=\"24\" text-anchor=\"middle\">" << title
      << "</text>\n";
  svg << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << width << "\" height=\""
      << height << "\" fill=\"none\" stroke=\"#444\"/>\n";
  for (double y : {0.0, 0.25, 0.5, 0.75, 1.0})
    svg << "<text x=\"" << left - 6 << "\" y=\"" << sy(y) + 4
        << "\" text-anchor=\"end\" font-size=\"11\">" << num(y) << "</text>\n";
  std::set<double> ticks;
  for (const auto& [_, pts] : series)
    for (const auto& p : pts) ticks.insert(p.x);
  for (double x : ticks)
    svg << "<text x=\"" << sx(x) << "\" y=\"" << top + height + 16
        << "\" text-anchor=\"middle\" font-size=\"11\">" << num(x) << "</text>\n";
  svg << "<text x=\"" << left + width / 2 << "\" y=\"" << top + height + 36
      << "\" text-anchor=\"middle\" font-size=\"12\">" << xlabel << "</text>\n";

  std::size_t k = 0;
  for (const auto& [name, pts] : series) {
    const char* colour = kColours[k % std::size(kColours)];
    svg << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"2\" points=\"";
    for (const auto& p : pts) svg << sx(p.x) << ',' << sy(recovery ? p.recovery : p.misclassification) << ' ';
    svg << "\"/>\n";
    for (const auto& p : pts)
      svg << "<circle cx=\"" << sx(p.x) << "\" cy=\"" << sy(recovery ? p.recovery : p.misclassification)
          << "\" r=\"3\" fill=\"" << colour << "\"/>\n";
    if (series.size() > 1)
      svg << "<text x=\"" << left + 8 << "\" y=\"" << top + 16 + 14 * static_cast<double>(k)
          << "\" font-size=\"11\" fill=\"" << colour << "\">" << name << "</text>\n";
    ++k;
  }
}

}  // namespace

std::string render_recovery_svg(std::istream& csv) {
  std::string line;
  if (!std::getline(csv, line)) throw ConfigError("plot: empty CSV");
  const auto header = split_csv(line);
  auto column = [&](const std::string& name) {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw ConfigError("plot: CSV lacks column '" + name + "'");
    return static_cast<std::size_t>(it - header.begin());
  };
  const auto c_n = column("n"), c_regime = column("regime"), c_rho = column("rho"),
             c_deg = column("expected_degree"), c_mis = column("misclassification"),
             c_rec = column("strong_recovery");

  struct Acc {
    double x_n = 0, x_deg = 0, rec = 0, mis = 0;
    int count = 0;
  };
  // key: (regime, rho, n)
  std::map<std::tuple<std::string, double, double>, Acc> groups;
  std::set<double> ns;
  std::size_t line_no = 1;
  while (std::getline(csv, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto cells = split_csv(line);
    if (cells.size() != header.size())
      throw ConfigError("plot: line " + std::to_string(line_no) + " has the wrong number of fields");
    const double n = to_double(cells[c_n], line_no), rho = to_double(cells[c_rho], line_no);
    auto& acc = groups[{cells[c_regime], rho, n}];
    acc.x_n = n;
    acc.x_deg += to_double(cells[c_deg], line_no);
    acc.rec += to_double(cells[c_rec], line_no);
    acc.mis += to_double(cells[c_mis], line_no);
    ++acc.count;
    ns.insert(n);
  }
  if (groups.empty()) throw ConfigError("plot: CSV has no rows");

  // Several n: one curve per (regime, rho) against n. A single n: one curve
  // against the expected degree.
  const bool by_n = ns.size() > 1;
  std::map<std::string, std::vector<Point>> series;
  for (const auto& [key, acc] : groups) {
    const auto& [regime, rho, n] = key;
    const std::string name = by_n ? (regime == "dense" ? "dense" : "rho " + num(rho))
                                  : "n " + num(n);
    const double x = by_n ? acc.x_n : acc.x_deg / acc.count;
    series[name].push_back({x, acc.rec / acc.count, acc.mis / acc.count});
  }
  double xmin = 1e300, xmax = -1e300;
  for (auto& [_, pts] : series) {
    std::sort(pts.begin(), pts.end(), [](const Point& a, const Point& b) { return a.x < b.x; });
    for (const auto& p : pts) {
      xmin = std::min(xmin, p.x);
      xmax = std::max(xmax, p.x);
    }
  }
  const bool log_x = xmin > 0 && xmax / xmin > 4;
  const std::string xlabel = by_n ? "n" : "expected degree";

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"900\" height=\"360\" "
         "font-family=\"sans-serif\">\n";
  svg << "<rect width=\"900\" height=\"360\" fill=\"white\"/>\n";
  panel(svg, 60, "strong recovery rate", series, true, xmin, xmax, log_x, xlabel);
  panel(svg, 510, "mean misclassification", series, false, xmin, xmax, log_x, xlabel);
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace blockmod::experiments
