#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace ruq::svg {

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  bool markers = true;
  bool dashed = false;
};

// Shaded band between two curves sharing x.
struct Band {
  std::vector<double> x;
  std::vector<double> lower;
  std::vector<double> upper;
};

struct Scatter {
  std::vector<double> x;
  std::vector<double> y;
  std::vector<bool> highlight;  // drawn in a second colour; may be empty
};

struct LinePlot {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<Series> series;
  std::vector<Band> bands;
  std::vector<Scatter> points;
  bool diagonal = false;  // y = x reference line
};

struct Box {
  std::string label;
  double lo_whisker, q1, median, q3, hi_whisker;
};

struct BoxPlot {
  std::string title;
  std::string y_label;
  std::vector<Box> boxes;
};

// Output is a pure function of the plot content.
std::string render(const LinePlot& plot);
std::string render(const BoxPlot& plot);

void write(const std::filesystem::path& path, const std::string& document);

}  // namespace ruq::svg
