#pragma once

#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace twopt {

/// A point in R^d. Coordinates are finite and d >= 1.
class Point {
 public:
  Point() = default;
  explicit Point(std::vector<double> coords);
  Point(std::initializer_list<double> coords);

  std::size_t dim() const noexcept { return coords_.size(); }
  const std::vector<double>& coords() const noexcept { return coords_; }
  double operator[](std::size_t k) const { return coords_[k]; }
  std::span<const double> view() const noexcept { return coords_; }

  friend bool operator==(const Point&, const Point&) = default;

 private:
  std::vector<double> coords_;
};

/// Contiguous storage for n points of a common dimension. Row i holds point i.
class PointSet {
 public:
  PointSet() = default;
  explicit PointSet(std::size_t dim) : dim_(dim) {}
  PointSet(std::size_t dim, std::vector<double> flat);
  explicit PointSet(const std::vector<Point>& points);

  std::size_t size() const noexcept { return dim_ == 0 ? 0 : data_.size() / dim_; }
  std::size_t dim() const noexcept { return dim_; }
  bool empty() const noexcept { return data_.empty(); }

  std::span<const double> operator[](std::size_t i) const {
    return {data_.data() + i * dim_, dim_};
  }
  std::span<double> mutable_row(std::size_t i) { return {data_.data() + i * dim_, dim_}; }
  Point at(std::size_t i) const;
  void push_back(std::span<const double> coords);
  void push_back(const Point& p) { push_back(p.view()); }
  const std::vector<double>& flat() const noexcept { return data_; }

  friend bool operator==(const PointSet&, const PointSet&) = default;

 private:
  std::size_t dim_ = 0;
  std::vector<double> data_;
};

enum class Metric { manhattan, euclidean, squared_euclidean };

/// CLI spelling: l1, l2, l2sq.
std::string_view metric_name(Metric m);
Metric parse_metric(std::string_view name);

/// True for the metrics that satisfy the triangle inequality.
constexpr bool is_triangle_metric(Metric m) { return m != Metric::squared_euclidean; }

/// Hot-path distance without dimension checks.
inline double distance_unchecked(std::span<const double> a, std::span<const double> b,
                                 Metric m) {
  const std::size_t d = a.size();
  double acc = 0.0;
  if (m == Metric::manhattan) {
    for (std::size_t k = 0; k < d; ++k) acc += std::abs(a[k] - b[k]);
    return acc;
  }
  for (std::size_t k = 0; k < d; ++k) {
    const double diff = a[k] - b[k];
    acc += diff * diff;
  }
  return m == Metric::euclidean ? std::sqrt(acc) : acc;
}

double distance(std::span<const double> a, std::span<const double> b, Metric m);
double distance(const Point& a, const Point& b, Metric m);

/// Delta_{a,b}(c) = d(c,a) - d(c,b).
double delta(const Point& a, const Point& b, const Point& c, Metric m);

/// Improvement of replacing {x1,x2},{x3,x4} by {x1,x3},{x2,x4}.
double two_change_gain(const Point& x1, const Point& x2, const Point& x3, const Point& x4,
                       Metric m);

/// Gain of the 2-change on vertices (a,b,c,d) of `pts`: removes {a,b},{c,d}, adds {a,c},{b,d}.
/// Every gain in the library goes through this expression so equal quadruples
/// produce bit-identical values regardless of which routine evaluates them.
inline double quad_gain(const PointSet& pts, Metric m, std::size_t a, std::size_t b,
                        std::size_t c, std::size_t d) {
  const double removed = distance_unchecked(pts[a], pts[b], m) + distance_unchecked(pts[c], pts[d], m);
  const double added = distance_unchecked(pts[a], pts[c], m) + distance_unchecked(pts[b], pts[d], m);
  return removed - added;
}

/// For a = (0,-delta/2), b = (0,delta/2) and eta = |z-a| - |z-b|, returns the
/// height y >= 0 of the point z = (x, y) on the corresponding hyperbola branch.
/// Requires 0 <= eta < delta_ab and x >= 0.
double eta_geometry_y(double eta, double x, double delta_ab);

}  // namespace twopt
