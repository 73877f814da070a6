// Static SVG line plots for the CLI.
#pragma once

#include <string>
#include <vector>

namespace ffdd_cli {

struct Series {
  std::vector<double> x, y;
  std::string color = "#1f4e9a";
  std::string label;
  bool dashed = false;
};

// Filled region between lo and hi.
struct Band {
  std::vector<double> x, lo, hi;
  std::string color = "#9db7e0";
  std::string label;
};

// Line whose segments are coloured by `value` mapped through the colour scale.
struct ColoredSeries {
  std::vector<double> x, y, value;
  std::string label;
};

enum class Scale { kSequential, kDiverging };

struct Plot {
  std::string title;
  std::string x_label = "arc fraction";
  std::string y_label;
  std::vector<Band> bands;
  std::vector<Series> series;
  std::vector<ColoredSeries> colored;
  Scale scale = Scale::kSequential;
  double scale_limit = 0.0;  // 0 picks the largest |value|
  std::vector<double> markers;  // x positions, drawn as ticks above the axis
  std::vector<double> hlines;
  std::string metadata;  // embedded verbatim (JSON) in <metadata>

  std::string render() const;
};

}  // namespace ffdd_cli
