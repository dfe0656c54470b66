#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "smoothcvx/point.hpp"

namespace smoothcvx {

enum class DomainKind { Whole, Ball, Box, Halfspaces };

/// The open halfspace {x : <normal, x> < offset}.
struct Halfspace {
  Point normal;
  double offset = 0.0;

  bool operator==(const Halfspace&) const = default;
};

/// Half-space cut used by the inner solvers: every point y of the (shrunk)
/// domain satisfies <normal, y - x> <= -depth.
struct Cut {
  Point normal;
  double depth = 0.0;
};

/// Open, convex, nonempty subset of R^d.
///
/// Four shapes are supported: the whole space, an open Euclidean ball, an
/// open axis-aligned box and a finite intersection of open halfspaces.
/// Construction rejects empty interiors. Membership and distance to the
/// boundary are exact for every kind.
class Domain {
 public:
  static Domain whole(std::size_t dim);
  static Domain ball(Point center, double radius);
  static Domain box(Point lo, Point hi);
  static Domain halfspaces(std::size_t dim, std::vector<Halfspace> constraints);

  /// Parses `{"kind":"ball","center":[...],"radius":r}` and friends.
  static Domain from_json(std::string_view text);
  [[nodiscard]] std::string to_json() const;

  [[nodiscard]] DomainKind kind() const noexcept { return kind_; }
  [[nodiscard]] std::size_t dim() const noexcept { return dim_; }
  [[nodiscard]] const Point& center() const noexcept { return center_; }
  [[nodiscard]] double radius() const noexcept { return radius_; }
  [[nodiscard]] const Point& lo() const noexcept { return lo_; }
  [[nodiscard]] const Point& hi() const noexcept { return hi_; }
  [[nodiscard]] const std::vector<Halfspace>& constraints() const noexcept { return constraints_; }

  [[nodiscard]] bool contains(PointView x) const;
  /// Signed slack: the distance to the boundary for interior points, a
  /// nonpositive number otherwise. +inf for the whole space.
  [[nodiscard]] double slack(PointView x) const;
  /// Distance from an interior point to the boundary (+inf for the whole space).
  [[nodiscard]] double distance_to_boundary(PointView x) const;

  /// Separating cut for a point with slack(x) <= margin, valid for the shrunk
  /// set {y : slack(y) >= margin}.
  [[nodiscard]] Cut cut(PointView x, double margin) const;

  [[nodiscard]] bool bounded() const noexcept;
  /// Smallest axis-aligned box containing the domain, when bounded.
  [[nodiscard]] std::optional<std::pair<Point, Point>> bounding_box() const;
  /// Largest distance from x to a point of the closure (+inf if unbounded).
  [[nodiscard]] double max_distance_from(PointView x) const;
  /// A point strictly inside the domain.
  [[nodiscard]] const Point& interior_point() const noexcept { return interior_; }
  /// Characteristic length used to scale boundary margins.
  [[nodiscard]] double length_scale() const;

  bool operator==(const Domain& other) const;

 private:
  Domain() = default;

  DomainKind kind_ = DomainKind::Whole;
  std::size_t dim_ = 0;
  Point center_;
  double radius_ = 0.0;
  Point lo_, hi_;
  std::vector<Halfspace> constraints_;
  Point interior_;
};

}  // namespace smoothcvx
