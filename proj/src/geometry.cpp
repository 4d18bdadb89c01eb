#include "twopt/geometry.hpp"

#include <algorithm>

#include "twopt/error.hpp"

namespace twopt {

namespace {

void check_coords(const std::vector<double>& coords) {
  require(!coords.empty(), "point must have dimension >= 1");
  require(std::all_of(coords.begin(), coords.end(), [](double v) { return std::isfinite(v); }),
          "point coordinates must be finite");
}

void check_same_dim(std::size_t da, std::size_t db) {
  if (da != db) {
    fail_validation("dimension mismatch: " + std::to_string(da) + " vs " + std::to_string(db));
  }
}

}  // namespace

Point::Point(std::vector<double> coords) : coords_(std::move(coords)) { check_coords(coords_); }

Point::Point(std::initializer_list<double> coords) : coords_(coords) { check_coords(coords_); }

PointSet::PointSet(std::size_t dim, std::vector<double> flat) : dim_(dim), data_(std::move(flat)) {
  require(dim_ >= 1, "point set dimension must be >= 1");
  require(data_.size() % dim_ == 0, "flat coordinate count is not a multiple of the dimension");
  require(std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); }),
          "point coordinates must be finite");
}

PointSet::PointSet(const std::vector<Point>& points) {
  require(!points.empty(), "point set must be nonempty");
  dim_ = points.front().dim();
  data_.reserve(points.size() * dim_);
  for (const auto& p : points) push_back(p);
}

Point PointSet::at(std::size_t i) const {
  require(i < size(), "point index out of range");
  const auto row = (*this)[i];
  return Point(std::vector<double>(row.begin(), row.end()));
}

void PointSet::push_back(std::span<const double> coords) {
  if (dim_ == 0) dim_ = coords.size();
  check_same_dim(dim_, coords.size());
  data_.insert(data_.end(), coords.begin(), coords.end());
}

std::string_view metric_name(Metric m) {
  switch (m) {
    case Metric::manhattan: return "l1";
    case Metric::euclidean: return "l2";
    case Metric::squared_euclidean: return "l2sq";
  }
  return "?";
}

Metric parse_metric(std::string_view name) {
  if (name == "l1" || name == "manhattan") return Metric::manhattan;
  if (name == "l2" || name == "euclidean") return Metric::euclidean;
  if (name == "l2sq" || name == "squared_euclidean") return Metric::squared_euclidean;
  fail_validation("unknown metric '" + std::string(name) + "' (expected l1|l2|l2sq)");
}

double distance(std::span<const double> a, std::span<const double> b, Metric m) {
  check_same_dim(a.size(), b.size());
  return distance_unchecked(a, b, m);
}

double distance(const Point& a, const Point& b, Metric m) { return distance(a.view(), b.view(), m); }

double delta(const Point& a, const Point& b, const Point& c, Metric m) {
  check_same_dim(a.dim(), b.dim());
  return distance(c, a, m) - distance(c, b, m);
}

double two_change_gain(const Point& x1, const Point& x2, const Point& x3, const Point& x4,
                       Metric m) {
  check_same_dim(x1.dim(), x2.dim());
  check_same_dim(x1.dim(), x3.dim());
  check_same_dim(x1.dim(), x4.dim());
  const double removed = distance_unchecked(x1.view(), x2.view(), m) +
                         distance_unchecked(x3.view(), x4.view(), m);
  const double added = distance_unchecked(x1.view(), x3.view(), m) +
                       distance_unchecked(x2.view(), x4.view(), m);
  return removed - added;
}

double eta_geometry_y(double eta, double x, double delta_ab) {
  require(std::isfinite(eta) && std::isfinite(x) && std::isfinite(delta_ab),
          "eta_geometry_y: arguments must be finite");
  require(eta >= 0.0, "eta_geometry_y: eta must be >= 0");
  require(x >= 0.0, "eta_geometry_y: x must be >= 0");
  // eta == delta is the collinear exterior limit; the formula divides by delta^2 - eta^2.
  require(eta < delta_ab, "eta_geometry_y: requires eta < delta (eta > delta is impossible)");
  const double eta2 = eta * eta;
  const double y2 = eta2 / 4.0 + eta2 * x * x / (delta_ab * delta_ab - eta2);
  return std::sqrt(y2);
}

}  // namespace twopt
