#pragma once

// Output helpers shared by every exporter: round-trip number formatting,
// header-first CSV, grids and polyline SVG.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "sellopt/errors.hpp"

namespace sellopt::io {

using json = nlohmann::ordered_json;

/// 17 significant digits: parses back to the same double.
inline std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// JSON cannot carry inf/nan; they are emitted as null.
inline json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

class CsvWriter {
 public:
  CsvWriter(std::ostream& out, std::initializer_list<std::string> header) : out_(out) {
    bool first = true;
    for (const auto& h : header) {
      out_ << (first ? "" : ",") << h;
      first = false;
    }
    out_ << '\n';
  }
  void row(std::initializer_list<double> values) {
    bool first = true;
    for (double v : values) {
      out_ << (first ? "" : ",") << fmt(v);
      first = false;
    }
    out_ << '\n';
  }
  std::ostream& stream() { return out_; }

 private:
  std::ostream& out_;
};

inline std::vector<double> linspace(double lo, double hi, std::size_t n) {
  std::vector<double> g(n);
  if (n == 1) {
    g[0] = lo;
    return g;
  }
  for (std::size_t i = 0; i < n; ++i) g[i] = lo + (hi - lo) * static_cast<double>(i) / (n - 1);
  g.back() = hi;
  return g;
}

/// n points log-spaced on [lo, hi], lo > 0.
inline std::vector<double> logspace(double lo, double hi, std::size_t n) {
  std::vector<double> g(n);
  const double a = std::log(lo), b = std::log(hi);
  for (std::size_t i = 0; i < n; ++i) {
    g[i] = n == 1 ? lo : std::exp(a + (b - a) * static_cast<double>(i) / (n - 1));
  }
  if (n > 1) g.back() = hi;
  return g;
}

/// Parses "lo:hi:n" (linear), "log:lo:hi:n" or a comma list "a,b,c".
inline std::vector<double> parse_grid(const std::string& text) {
  auto split = [](const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    for (;;) {
      const auto pos = s.find(sep, start);
      parts.push_back(s.substr(start, pos - start));
      if (pos == std::string::npos) break;
      start = pos + 1;
    }
    return parts;
  };
  auto number = [&](const std::string& s) {
    try {
      std::size_t used = 0;
      const double v = std::stod(s, &used);
      if (used != s.size()) throw ParseError("bad number '" + s + "' in grid " + text);
      return v;
    } catch (const std::invalid_argument&) {
      throw ParseError("bad number '" + s + "' in grid " + text);
    } catch (const std::out_of_range&) {
      throw ParseError("number out of range in grid " + text);
    }
  };
  if (text.find(':') != std::string::npos) {
    auto parts = split(text, ':');
    const bool log = parts.front() == "log";
    if (log) parts.erase(parts.begin());
    if (parts.size() != 3) throw ParseError("grid must be lo:hi:n or log:lo:hi:n, got " + text);
    const double lo = number(parts[0]), hi = number(parts[1]);
    const double n = number(parts[2]);
    if (!(n >= 1 && n == std::floor(n))) throw ParseError("grid count must be a positive integer");
    if (log && !(lo > 0)) throw ParseError("log grid needs lo > 0");
    return log ? logspace(lo, hi, static_cast<std::size_t>(n)) : linspace(lo, hi, static_cast<std::size_t>(n));
  }
  std::vector<double> out;
  for (const auto& p : split(text, ',')) out.push_back(number(p));
  return out;
}

/// Plain polyline chart, one line per series; no axes beyond a frame.
struct SvgSeries {
  std::string color;
  std::vector<double> x, y;
};

inline void write_svg(std::ostream& out, const std::string& title, const std::vector<SvgSeries>& series) {
  constexpr double W = 640, H = 400, pad = 40;
  double xmin = INFINITY, xmax = -INFINITY, ymin = INFINITY, ymax = -INFINITY;
  for (const auto& s : series) {
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      xmin = std::min(xmin, s.x[i]);
      xmax = std::max(xmax, s.x[i]);
      ymin = std::min(ymin, s.y[i]);
      ymax = std::max(ymax, s.y[i]);
    }
  }
  if (!(xmax > xmin)) xmax = xmin + 1;
  if (!(ymax > ymin)) ymax = ymin + 1;
  auto px = [&](double x) { return pad + (x - xmin) / (xmax - xmin) * (W - 2 * pad); };
  auto py = [&](double y) { return H - pad - (y - ymin) / (ymax - ymin) * (H - 2 * pad); };
  char buf[64];
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n";
  out << "<title>" << title << "</title>\n";
  out << "<rect x=\"" << pad << "\" y=\"" << pad << "\" width=\"" << W - 2 * pad << "\" height=\""
      << H - 2 * pad << "\" fill=\"none\" stroke=\"#888\"/>\n";
  for (const auto& s : series) {
    out << "<polyline fill=\"none\" stroke=\"" << s.color << "\" points=\"";
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      std::snprintf(buf, sizeof buf, "%.2f,%.2f ", px(s.x[i]), py(s.y[i]));
      out << buf;
    }
    out << "\"/>\n";
  }
  out << "</svg>\n";
}

inline std::ofstream open_output(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write " + path.string());
  return out;
}

}  // namespace sellopt::io
