#include "svg_plot.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>

namespace ffdd_cli {
namespace {

constexpr double kWidth = 760.0;
constexpr double kHeight = 420.0;
constexpr double kLeft = 72.0;
constexpr double kRight = 170.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 52.0;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string label_num(double v) {
  if (std::abs(v) < 1e-12) v = 0.0;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

std::string escape(const std::string& text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Rgb {
  double r, g, b;
};

std::string hex(Rgb c) {
  char buf[8];
  auto byte = [](double v) { return static_cast<int>(std::lround(std::clamp(v, 0.0, 1.0) * 255)); };
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", byte(c.r), byte(c.g), byte(c.b));
  return buf;
}

template <std::size_t N>
Rgb lerp_stops(const std::array<Rgb, N>& stops, double t) {
  t = std::clamp(t, 0.0, 1.0) * static_cast<double>(N - 1);
  const std::size_t k = std::min(static_cast<std::size_t>(t), N - 2);
  const double f = t - static_cast<double>(k);
  const Rgb a = stops[k], b = stops[k + 1];
  return {a.r + f * (b.r - a.r), a.g + f * (b.g - a.g), a.b + f * (b.b - a.b)};
}

// viridis, sampled at five points
constexpr std::array<Rgb, 5> kSequential{{{0.267, 0.005, 0.329},
                                          {0.231, 0.322, 0.545},
                                          {0.129, 0.569, 0.549},
                                          {0.369, 0.788, 0.384},
                                          {0.993, 0.906, 0.144}}};
constexpr std::array<Rgb, 3> kDiverging{{{0.129, 0.400, 0.675},
                                         {0.850, 0.850, 0.850},
                                         {0.698, 0.094, 0.169}}};

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  void add(double v) {
    if (!std::isfinite(v)) return;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  void add(const std::vector<double>& v) {
    for (double x : v) add(x);
  }
  bool empty() const { return lo > hi; }
};

double nice_step(double span) {
  const double raw = span / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double f = raw / mag;
  return (f < 1.5 ? 1.0 : f < 3.5 ? 2.0 : f < 7.5 ? 5.0 : 10.0) * mag;
}

}  // namespace

std::string Plot::render() const {
  Range xr, yr;
  for (const auto& b : bands) {
    xr.add(b.x);
    yr.add(b.lo);
    yr.add(b.hi);
  }
  for (const auto& s : series) {
    xr.add(s.x);
    yr.add(s.y);
  }
  for (const auto& c : colored) {
    xr.add(c.x);
    yr.add(c.y);
  }
  for (double h : hlines) yr.add(h);
  if (xr.empty()) xr = {0.0, 1.0};
  if (yr.empty()) yr = {0.0, 1.0};
  if (xr.hi - xr.lo <= 0.0) xr = {xr.lo - 0.5, xr.hi + 0.5};
  if (yr.hi - yr.lo <= 1e-12 * std::max(1.0, std::abs(yr.hi))) {
    const double pad = std::max(0.05 * std::abs(yr.hi), 0.5);
    yr = {yr.lo - pad, yr.hi + pad};
  } else {
    const double pad = 0.05 * (yr.hi - yr.lo);
    yr = {yr.lo - pad, yr.hi + pad};
  }

  const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
  auto px = [&](double x) { return kLeft + (x - xr.lo) / (xr.hi - xr.lo) * pw; };
  auto py = [&](double y) { return kTop + (yr.hi - y) / (yr.hi - yr.lo) * ph; };

  std::string out;
  out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(kWidth) + "\" height=\"" +
         num(kHeight) + "\" viewBox=\"0 0 " + num(kWidth) + " " + num(kHeight) +
         "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  if (!metadata.empty()) out += "<metadata>" + escape(metadata) + "</metadata>\n";
  out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out += "<text x=\"" + num(kLeft + pw / 2) + "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">" +
         escape(title) + "</text>\n";

  // grid and ticks
  const double xs = nice_step(xr.hi - xr.lo), ys = nice_step(yr.hi - yr.lo);
  for (double t = std::ceil(xr.lo / xs) * xs; t <= xr.hi + 1e-9 * xs; t += xs) {
    out += "<line x1=\"" + num(px(t)) + "\" y1=\"" + num(kTop) + "\" x2=\"" + num(px(t)) +
           "\" y2=\"" + num(kTop + ph) + "\" stroke=\"#e6e6e6\"/>\n";
    out += "<text x=\"" + num(px(t)) + "\" y=\"" + num(kTop + ph + 16) +
           "\" text-anchor=\"middle\">" + label_num(t) + "</text>\n";
  }
  for (double t = std::ceil(yr.lo / ys) * ys; t <= yr.hi + 1e-9 * ys; t += ys) {
    out += "<line x1=\"" + num(kLeft) + "\" y1=\"" + num(py(t)) + "\" x2=\"" + num(kLeft + pw) +
           "\" y2=\"" + num(py(t)) + "\" stroke=\"#e6e6e6\"/>\n";
    out += "<text x=\"" + num(kLeft - 6) + "\" y=\"" + num(py(t) + 4) +
           "\" text-anchor=\"end\">" + label_num(t) + "</text>\n";
  }
  out += "<rect x=\"" + num(kLeft) + "\" y=\"" + num(kTop) + "\" width=\"" + num(pw) +
         "\" height=\"" + num(ph) + "\" fill=\"none\" stroke=\"#444\"/>\n";
  out += "<text x=\"" + num(kLeft + pw / 2) + "\" y=\"" + num(kHeight - 12) +
         "\" text-anchor=\"middle\">" + escape(x_label) + "</text>\n";
  out += "<text transform=\"translate(18 " + num(kTop + ph / 2) +
         ") rotate(-90)\" text-anchor=\"middle\">" + escape(y_label) + "</text>\n";

  for (const auto& b : bands) {
    // one polygon per finite run
    std::size_t k = 0;
    const std::size_t n = std::min({b.x.size(), b.lo.size(), b.hi.size()});
    while (k < n) {
      while (k < n && !(std::isfinite(b.lo[k]) && std::isfinite(b.hi[k]))) ++k;
      std::size_t e = k;
      while (e < n && std::isfinite(b.lo[e]) && std::isfinite(b.hi[e])) ++e;
      if (e > k) {
        std::string pts;
        for (std::size_t i = k; i < e; ++i) pts += num(px(b.x[i])) + "," + num(py(b.hi[i])) + " ";
        for (std::size_t i = e; i-- > k;) pts += num(px(b.x[i])) + "," + num(py(b.lo[i])) + " ";
        pts.pop_back();
        out += "<polygon points=\"" + pts + "\" fill=\"" + b.color +
               "\" fill-opacity=\"0.45\" stroke=\"none\"/>\n";
      }
      k = e;
    }
  }
  for (double h : hlines)
    out += "<line x1=\"" + num(kLeft) + "\" y1=\"" + num(py(h)) + "\" x2=\"" + num(kLeft + pw) +
           "\" y2=\"" + num(py(h)) + "\" stroke=\"#888\" stroke-dasharray=\"4 3\"/>\n";

  for (const auto& s : series) {
    const std::size_t n = std::min(s.x.size(), s.y.size());
    std::string pts;
    auto flush = [&] {
      if (!pts.empty()) {
        pts.pop_back();
        out += "<polyline points=\"" + pts + "\" fill=\"none\" stroke=\"" + s.color +
               "\" stroke-width=\"1.8\"" + (s.dashed ? " stroke-dasharray=\"6 4\"" : "") + "/>\n";
      }
      pts.clear();
    };
    for (std::size_t i = 0; i < n; ++i) {
      if (std::isfinite(s.y[i]))
        pts += num(px(s.x[i])) + "," + num(py(s.y[i])) + " ";
      else
        flush();
    }
    flush();
  }

  double limit = scale_limit;
  if (limit <= 0.0) {
    for (const auto& c : colored)
      for (double v : c.value)
        if (std::isfinite(v)) limit = std::max(limit, std::abs(v));
    if (limit <= 0.0) limit = 1.0;
  }
  auto colour = [&](double v) {
    return scale == Scale::kDiverging ? hex(lerp_stops(kDiverging, 0.5 + 0.5 * v / limit))
                                      : hex(lerp_stops(kSequential, v / limit));
  };
  for (const auto& c : colored) {
    const std::size_t n = std::min({c.x.size(), c.y.size(), c.value.size()});
    for (std::size_t i = 0; i + 1 < n; ++i) {
      if (!std::isfinite(c.y[i]) || !std::isfinite(c.y[i + 1])) continue;
      const double v = 0.5 * (c.value[i] + c.value[i + 1]);
      if (!std::isfinite(v)) continue;
      out += "<line x1=\"" + num(px(c.x[i])) + "\" y1=\"" + num(py(c.y[i])) + "\" x2=\"" +
             num(px(c.x[i + 1])) + "\" y2=\"" + num(py(c.y[i + 1])) + "\" stroke=\"" + colour(v) +
             "\" stroke-width=\"3\" stroke-linecap=\"round\"/>\n";
    }
  }
  for (double m : markers)
    out += "<line x1=\"" + num(px(m)) + "\" y1=\"" + num(kTop + 2) + "\" x2=\"" + num(px(m)) +
           "\" y2=\"" + num(kTop + 10) + "\" stroke=\"#b2182b\" stroke-width=\"2\"/>\n";

  // legend and colour bar in the right margin
  double ly = kTop + 8;
  const double lx = kLeft + pw + 14;
  auto legend = [&](const std::string& colour_hex, const std::string& text, bool filled) {
    if (text.empty()) return;
    if (filled)
      out += "<rect x=\"" + num(lx) + "\" y=\"" + num(ly - 8) + "\" width=\"18\" height=\"10\" fill=\"" +
             colour_hex + "\" fill-opacity=\"0.45\"/>\n";
    else
      out += "<line x1=\"" + num(lx) + "\" y1=\"" + num(ly - 3) + "\" x2=\"" + num(lx + 18) +
             "\" y2=\"" + num(ly - 3) + "\" stroke=\"" + colour_hex + "\" stroke-width=\"2\"/>\n";
    out += "<text x=\"" + num(lx + 24) + "\" y=\"" + num(ly + 1) + "\">" + escape(text) + "</text>\n";
    ly += 18;
  };
  for (const auto& s : series) legend(s.color, s.label, false);
  for (const auto& b : bands) legend(b.color, b.label, true);
  if (!colored.empty()) {
    if (!colored.front().label.empty()) {
      out += "<text x=\"" + num(lx) + "\" y=\"" + num(ly + 1) + "\">" +
             escape(colored.front().label) + "</text>\n";
      ly += 10;
    }
    const int steps = 40;
    const double bar_h = 120.0;
    const double lo = scale == Scale::kDiverging ? -limit : 0.0;
    for (int k = 0; k < steps; ++k) {
      const double v = limit - (limit - lo) * (k + 0.5) / steps;
      out += "<rect x=\"" + num(lx) + "\" y=\"" + num(ly + bar_h * k / steps) +
             "\" width=\"14\" height=\"" + num(bar_h / steps + 0.5) + "\" fill=\"" + colour(v) +
             "\"/>\n";
    }
    out += "<text x=\"" + num(lx + 20) + "\" y=\"" + num(ly + 8) + "\">" + label_num(limit) +
           "</text>\n";
    out += "<text x=\"" + num(lx + 20) + "\" y=\"" + num(ly + bar_h) + "\">" + label_num(lo) +
           "</text>\n";
  }
  out += "</svg>\n";
  return out;
}

}  // namespace ffdd_cli
