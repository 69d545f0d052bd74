#pragma once

#include <complex>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "r4bp/linstab.hpp"
#include "r4bp/manifolds.hpp"
#include "r4bp/model.hpp"
#include "r4bp/normal_form.hpp"

namespace r4bp::cli {

using nlohmann::json;

/// %.17g
std::string fmt(double v);

json to_json(const State& s);
json to_json(const Vec2& p);
json to_json(std::complex<double> z);
json to_json(const Matrix4& m);
json to_json(const EquilibriumPoint& e);
json to_json(const LinearAnalysis& la);
json to_json(const TaylorCoefficients& t);
json to_json(const HomoclinicCandidate& c);

/// Minimal standalone SVG scatter/line plot with a framed axis box.
class SvgPlot {
public:
  SvgPlot(double xmin, double xmax, double ymin, double ymax, int width = 640, int height = 640);

  void polyline(const std::vector<std::pair<double, double>>& pts, const std::string& color, double stroke = 1.0);
  void points(const std::vector<std::pair<double, double>>& pts, const std::string& color, double radius = 1.5);
  void title(const std::string& text);
  void axis_labels(const std::string& x, const std::string& y);

  std::string str() const;

private:
  double sx(double x) const;
  double sy(double y) const;

  double xmin_, xmax_, ymin_, ymax_;
  int width_, height_;
  std::string body_;
  std::string title_, xlabel_, ylabel_;
};

/// Bounding box of a point set, padded by a fraction of its extent.
struct Bounds {
  double xmin, xmax, ymin, ymax;
};
Bounds bounds_of(const std::vector<std::pair<double, double>>& pts, double pad = 0.05);

void write_file(const std::string& path, const std::string& content);

}  // namespace r4bp::cli
