#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "smoothcvx/domain.hpp"
#include "smoothcvx/rng.hpp"

namespace smoothcvx {

using Box = std::pair<Point, Point>;

/// Regular grid over a domain.
///
/// Points are laid out on the window (default: the domain's bounding box
/// shrunk by `margin` toward its middle, or [-5, 5]^d for unbounded kinds).
/// A point is kept when its distance to the boundary is at least
/// margin * inner_radius(domain), so every kept point is strictly inside.
struct GridSpec {
  Domain domain;
  int points_per_axis = 21;
  double margin = 0.05;
  std::optional<Box> window;
};

/// Largest distance to the boundary of a reference point (ball radius, half
/// the narrowest box width, slack of the interior point, +inf for R^d).
double inner_radius(const Domain& domain);

/// Sampling window of a domain (see GridSpec).
Box sampling_window(const Domain& domain, double margin, const std::optional<Box>& window = std::nullopt);

/// True when x is inside with distance to the boundary >= margin * inner_radius.
bool admissible(const Domain& domain, PointView x, double margin);

std::vector<Point> grid_points(const GridSpec& spec);

struct Segment {
  Point a;
  Point b;
};

/// Uniform draw from the window, rejected until admissible.
Point random_point(const Domain& domain, SplitMix64& rng, double margin,
                   const std::optional<Box>& window = std::nullopt);
std::vector<Point> random_points(const Domain& domain, std::size_t count, SplitMix64& rng, double margin,
                                 const std::optional<Box>& window = std::nullopt);
/// Both ends drawn independently; the open domain is convex, so the whole
/// segment lies inside.
std::vector<Segment> random_segments(const Domain& domain, std::size_t count, SplitMix64& rng, double margin,
                                     const std::optional<Box>& window = std::nullopt);
/// Uniform on the unit sphere of R^d.
Point random_direction(std::size_t dim, SplitMix64& rng);

}  // namespace smoothcvx
