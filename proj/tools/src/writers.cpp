#include "r4bp_cli/writers.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <limits>

#include "r4bp/errors.hpp"

namespace r4bp::cli {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json to_json(const State& s) { return {{"x", s.x}, {"y", s.y}, {"vx", s.vx}, {"vy", s.vy}}; }

json to_json(const Vec2& p) { return {{"x", p.x}, {"y", p.y}}; }

json to_json(std::complex<double> z) { return {{"re", z.real()}, {"im", z.imag()}}; }

json to_json(const Matrix4& m) {
  json rows = json::array();
  for (int i = 0; i < 4; ++i) rows.push_back({m(i, 0), m(i, 1), m(i, 2), m(i, 3)});
  return rows;
}

json to_json(const EquilibriumPoint& e) {
  return {{"x", e.position.x}, {"y", e.position.y}, {"kind", to_string(e.kind)}, {"jacobi", e.jacobi_value}};
}

json to_json(const LinearAnalysis& la) {
  json ev = json::array();
  for (auto z : la.eigenvalues) ev.push_back(to_json(z));
  return {{"a", la.a},
          {"b", la.b},
          {"omega_xx", la.omega_xx},
          {"omega_yy", la.omega_yy},
          {"matrix_A", to_json(la.matrix_A)},
          {"charpoly", {{"c2", la.charpoly_c2}, {"c0", la.charpoly_c0}}},
          {"discriminant", la.discriminant},
          {"eigenvalues", ev},
          {"regime", to_string(la.regime)},
          {"omega", la.omega},
          {"alpha", la.alpha},
          {"frequencies", {la.frequencies[0], la.frequencies[1]}}};
}

json to_json(const TaylorCoefficients& t) {
  return {{"a3", t.a3}, {"b3", t.b3}, {"c3", t.c3}, {"d3", t.d3}, {"a4", t.a4},
          {"b4", t.b4}, {"c4", t.c4}, {"d4", t.d4}, {"e4", t.e4}};
}

json to_json(const HomoclinicCandidate& c) {
  return {{"theta_star", c.theta_star}, {"cut_index", c.cut_index}, {"x_cross", c.x_cross},
          {"time", c.time},             {"state", to_json(c.state)},  {"evaluations", c.evaluations}};
}

SvgPlot::SvgPlot(double xmin, double xmax, double ymin, double ymax, int width, int height)
    : xmin_(xmin), xmax_(xmax), ymin_(ymin), ymax_(ymax), width_(width), height_(height) {
  if (!(xmax > xmin) || !(ymax > ymin)) throw DomainError("SvgPlot: empty range");
}

namespace {
constexpr double kMargin = 50.0;
}

double SvgPlot::sx(double x) const { return kMargin + (x - xmin_) / (xmax_ - xmin_) * (width_ - 2 * kMargin); }
double SvgPlot::sy(double y) const { return height_ - kMargin - (y - ymin_) / (ymax_ - ymin_) * (height_ - 2 * kMargin); }

void SvgPlot::polyline(const std::vector<std::pair<double, double>>& pts, const std::string& color, double stroke) {
  if (pts.size() < 2) return;
  body_ += "<polyline fill=\"none\" stroke=\"" + color + "\" stroke-width=\"" + fmt(stroke) + "\" points=\"";
  for (const auto& [x, y] : pts) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.2f,%.2f ", sx(x), sy(y));
    body_ += buf;
  }
  body_ += "\"/>\n";
}

void SvgPlot::points(const std::vector<std::pair<double, double>>& pts, const std::string& color, double radius) {
  for (const auto& [x, y] : pts) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "<circle cx=\"%.2f\" cy=\"%.2f\" r=\"%.2f\" fill=\"%s\"/>\n", sx(x), sy(y), radius,
                  color.c_str());
    body_ += buf;
  }
}

void SvgPlot::title(const std::string& text) { title_ = text; }

void SvgPlot::axis_labels(const std::string& x, const std::string& y) {
  xlabel_ = x;
  ylabel_ = y;
}

std::string SvgPlot::str() const {
  char buf[512];
  std::string s;
  std::snprintf(buf, sizeof buf,
                "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%d\" height=\"%d\" viewBox=\"0 0 %d %d\">\n"
                "<rect width=\"100%%\" height=\"100%%\" fill=\"white\"/>\n"
                "<rect x=\"%.2f\" y=\"%.2f\" width=\"%.2f\" height=\"%.2f\" fill=\"none\" stroke=\"black\"/>\n",
                width_, height_, width_, height_, kMargin, kMargin, width_ - 2 * kMargin, height_ - 2 * kMargin);
  s += buf;
  // Ticks at the box corners are enough to read the scale.
  std::snprintf(buf, sizeof buf,
                "<g font-family=\"sans-serif\" font-size=\"11\">\n"
                "<text x=\"%.2f\" y=\"%.2f\">%.4g</text>\n<text x=\"%.2f\" y=\"%.2f\" text-anchor=\"end\">%.4g</text>\n"
                "<text x=\"%.2f\" y=\"%.2f\" text-anchor=\"end\">%.4g</text>\n<text x=\"%.2f\" y=\"%.2f\" "
                "text-anchor=\"end\">%.4g</text>\n",
                kMargin, height_ - kMargin + 14, xmin_, width_ - kMargin, height_ - kMargin + 14, xmax_, kMargin - 4,
                height_ - kMargin, ymin_, kMargin - 4, kMargin + 10, ymax_);
  s += buf;
  if (!xlabel_.empty()) {
    std::snprintf(buf, sizeof buf, "<text x=\"%.2f\" y=\"%.2f\" text-anchor=\"middle\">%s</text>\n", width_ / 2.0,
                  height_ - 12.0, xlabel_.c_str());
    s += buf;
  }
  if (!ylabel_.empty()) {
    std::snprintf(buf, sizeof buf, "<text x=\"14\" y=\"%.2f\" transform=\"rotate(-90 14 %.2f)\" text-anchor=\"middle\">%s</text>\n",
                  height_ / 2.0, height_ / 2.0, ylabel_.c_str());
    s += buf;
  }
  if (!title_.empty()) {
    std::snprintf(buf, sizeof buf, "<text x=\"%.2f\" y=\"24\" text-anchor=\"middle\" font-size=\"14\">%s</text>\n",
                  width_ / 2.0, title_.c_str());
    s += buf;
  }
  s += "</g>\n";
  s += body_;
  s += "</svg>\n";
  return s;
}

Bounds bounds_of(const std::vector<std::pair<double, double>>& pts, double pad) {
  Bounds b{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity(),
           std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  for (const auto& [x, y] : pts) {
    b.xmin = std::min(b.xmin, x);
    b.xmax = std::max(b.xmax, x);
    b.ymin = std::min(b.ymin, y);
    b.ymax = std::max(b.ymax, y);
  }
  if (pts.empty()) return {-1, 1, -1, 1};
  const double dx = std::max(b.xmax - b.xmin, 1e-9), dy = std::max(b.ymax - b.ymin, 1e-9);
  return {b.xmin - pad * dx, b.xmax + pad * dx, b.ymin - pad * dy, b.ymax + pad * dy};
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open " + path + " for writing");
  f << content;
  if (!f) throw Error("failed writing " + path);
}

}  // namespace r4bp::cli
