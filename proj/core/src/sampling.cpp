#include "smoothcvx/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "smoothcvx/errors.hpp"

namespace smoothcvx {
namespace {

constexpr double kDefaultHalfWidth = 5.0;
constexpr int kMaxRejections = 1000000;

}  // namespace

double inner_radius(const Domain& domain) {
  switch (domain.kind()) {
    case DomainKind::Whole:
      return std::numeric_limits<double>::infinity();
    case DomainKind::Ball:
      return domain.radius();
    case DomainKind::Box: {
      double w = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < domain.dim(); ++i) w = std::min(w, 0.5 * (domain.hi()[i] - domain.lo()[i]));
      return w;
    }
    case DomainKind::Halfspaces:
      return domain.slack(domain.interior_point());
  }
  return 0.0;
}

Box sampling_window(const Domain& domain, double margin, const std::optional<Box>& window) {
  if (window) {
    if (window->first.size() != domain.dim() || window->second.size() != domain.dim())
      throw DomainError("sampling window has the wrong dimension");
    return *window;
  }
  const std::size_t d = domain.dim();
  if (const auto bb = domain.bounding_box()) {
    Box b = *bb;
    for (std::size_t i = 0; i < d; ++i) {
      const double mid = 0.5 * (b.first[i] + b.second[i]);
      const double half = 0.5 * (b.second[i] - b.first[i]) * (1.0 - margin);
      b.first[i] = mid - half;
      b.second[i] = mid + half;
    }
    return b;
  }
  const Point& c = domain.kind() == DomainKind::Whole ? Point(d, 0.0) : domain.interior_point();
  Box b{c, c};
  for (std::size_t i = 0; i < d; ++i) {
    b.first[i] -= kDefaultHalfWidth;
    b.second[i] += kDefaultHalfWidth;
  }
  return b;
}

bool admissible(const Domain& domain, PointView x, double margin) {
  const double s = domain.slack(x);
  if (!(s > 0.0)) return false;
  const double r = inner_radius(domain);
  return !std::isfinite(r) || s >= margin * r;
}

std::vector<Point> grid_points(const GridSpec& spec) {
  if (spec.points_per_axis < 1) throw Error("grid: points per axis must be positive");
  if (!(spec.margin >= 0.0 && spec.margin < 1.0)) throw Error("grid: margin must lie in [0, 1)");
  const std::size_t d = spec.domain.dim();
  const Box box = sampling_window(spec.domain, spec.margin, spec.window);
  const auto m = static_cast<std::size_t>(spec.points_per_axis);

  std::size_t total = 1;
  for (std::size_t i = 0; i < d; ++i) {
    if (total > std::numeric_limits<std::size_t>::max() / m) throw Error("grid: too many points");
    total *= m;
  }
  std::vector<Point> out;
  std::vector<std::size_t> idx(d, 0);
  Point p(d);
  for (std::size_t k = 0; k < total; ++k) {
    for (std::size_t i = 0; i < d; ++i) {
      const double t = m == 1 ? 0.5 : static_cast<double>(idx[i]) / static_cast<double>(m - 1);
      p[i] = box.first[i] + t * (box.second[i] - box.first[i]);
    }
    if (admissible(spec.domain, p, spec.margin)) out.push_back(p);
    for (std::size_t i = 0; i < d; ++i) {
      if (++idx[i] < m) break;
      idx[i] = 0;
    }
  }
  return out;
}

Point random_point(const Domain& domain, SplitMix64& rng, double margin, const std::optional<Box>& window) {
  const Box box = sampling_window(domain, margin, window);
  Point p(domain.dim());
  for (int attempt = 0; attempt < kMaxRejections; ++attempt) {
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = rng.uniform(box.first[i], box.second[i]);
    if (admissible(domain, p, margin)) return p;
  }
  throw DomainError("random point: rejection sampling found no admissible point");
}

std::vector<Point> random_points(const Domain& domain, std::size_t count, SplitMix64& rng, double margin,
                                 const std::optional<Box>& window) {
  std::vector<Point> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(random_point(domain, rng, margin, window));
  return out;
}

std::vector<Segment> random_segments(const Domain& domain, std::size_t count, SplitMix64& rng, double margin,
                                     const std::optional<Box>& window) {
  std::vector<Segment> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    Point a = random_point(domain, rng, margin, window);
    Point b = random_point(domain, rng, margin, window);
    out.push_back({std::move(a), std::move(b)});
  }
  return out;
}

Point random_direction(std::size_t dim, SplitMix64& rng) {
  Point u(dim);
  for (;;) {
    double s = 0.0;
    for (double& v : u) {
      v = rng.uniform(-1.0, 1.0);
      s += v * v;
    }
    if (s > 1e-4 && s <= 1.0) {
      const double r = std::sqrt(s);
      for (double& v : u) v /= r;
      return u;
    }
  }
}

}  // namespace smoothcvx
