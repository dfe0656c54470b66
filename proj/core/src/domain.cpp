#include "smoothcvx/domain.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <json.hpp>

#include "smoothcvx/convex_min.hpp"
#include "smoothcvx/errors.hpp"

namespace smoothcvx {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_finite(PointView p, const char* what) {
  if (!all_finite(p)) throw DomainError(std::string(what) + " must be finite");
}

// Searches for x with <a_i, x> < b_i for all i by minimizing the worst
// normalized violation over growing balls around the origin.
std::optional<Point> find_interior_point(std::size_t dim, const std::vector<Halfspace>& hs) {
  const ConvexOracle oracle = [&](PointView x, std::span<double> g) {
    double worst = -kInf;
    std::size_t arg = 0;
    for (std::size_t i = 0; i < hs.size(); ++i) {
      const double v = (dot(hs[i].normal, x) - hs[i].offset) / norm(hs[i].normal);
      if (v > worst) {
        worst = v;
        arg = i;
      }
    }
    const double n = norm(hs[arg].normal);
    for (std::size_t j = 0; j < g.size(); ++j) g[j] = hs[arg].normal[j] / n;
    return OracleAnswer{true, worst, 0.0};
  };
  Point origin(dim, 0.0);
  for (double radius = 1.0; radius <= 1e12; radius *= 10.0) {
    MinimizeOptions opts;
    opts.tolerance = 1e-12;
    opts.max_iterations = 400 * static_cast<int>(dim * dim) + 400;
    const MinimizeResult r = minimize_convex(oracle, origin, radius, opts);
    if (r.found_feasible && r.value < 0.0) return r.argmin;
    if (r.found_feasible && r.lower_bound >= 0.0 && norm(r.argmin) < 0.5 * radius) return std::nullopt;
  }
  return std::nullopt;
}

}  // namespace

Domain Domain::whole(std::size_t dim) {
  if (dim == 0) throw DomainError("dimension must be positive");
  Domain d;
  d.kind_ = DomainKind::Whole;
  d.dim_ = dim;
  d.interior_.assign(dim, 0.0);
  return d;
}

Domain Domain::ball(Point center, double radius) {
  if (center.empty()) throw DomainError("dimension must be positive");
  require_finite(center, "ball center");
  if (!(radius > 0.0) || !std::isfinite(radius)) throw DomainError("ball radius must be positive and finite");
  Domain d;
  d.kind_ = DomainKind::Ball;
  d.dim_ = center.size();
  d.center_ = std::move(center);
  d.radius_ = radius;
  d.interior_ = d.center_;
  return d;
}

Domain Domain::box(Point lo, Point hi) {
  if (lo.empty()) throw DomainError("dimension must be positive");
  if (lo.size() != hi.size()) throw DomainError("box corners differ in dimension");
  require_finite(lo, "box corner");
  require_finite(hi, "box corner");
  for (std::size_t i = 0; i < lo.size(); ++i)
    if (!(lo[i] < hi[i])) throw DomainError("box has empty interior (need lo < hi componentwise)");
  Domain d;
  d.kind_ = DomainKind::Box;
  d.dim_ = lo.size();
  d.interior_ = lerp(lo, hi, 0.5);
  d.lo_ = std::move(lo);
  d.hi_ = std::move(hi);
  return d;
}

Domain Domain::halfspaces(std::size_t dim, std::vector<Halfspace> constraints) {
  if (dim == 0) throw DomainError("dimension must be positive");
  for (const auto& h : constraints) {
    if (h.normal.size() != dim) throw DomainError("halfspace normal has wrong dimension");
    require_finite(h.normal, "halfspace normal");
    if (!std::isfinite(h.offset)) throw DomainError("halfspace offset must be finite");
    if (norm(h.normal) == 0.0) throw DomainError("halfspace normal must be nonzero");
  }
  Domain d;
  d.kind_ = DomainKind::Halfspaces;
  d.dim_ = dim;
  if (constraints.empty()) {
    d.interior_.assign(dim, 0.0);
  } else {
    auto p = find_interior_point(dim, constraints);
    if (!p) throw DomainError("halfspace intersection has empty interior");
    d.interior_ = std::move(*p);
  }
  d.constraints_ = std::move(constraints);
  return d;
}

Domain Domain::from_json(std::string_view text) {
  using nlohmann::json;
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw DomainError(std::string("domain JSON: ") + e.what());
  }
  try {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "whole") return whole(j.at("dim").get<std::size_t>());
    if (kind == "ball") return ball(j.at("center").get<Point>(), j.at("radius").get<double>());
    if (kind == "box") return box(j.at("lo").get<Point>(), j.at("hi").get<Point>());
    if (kind == "halfspaces") {
      const auto normals = j.at("normals").get<std::vector<Point>>();
      const auto offsets = j.at("offsets").get<std::vector<double>>();
      if (normals.size() != offsets.size()) throw DomainError("normals and offsets differ in length");
      std::size_t dim = j.contains("dim") ? j.at("dim").get<std::size_t>() : 0;
      if (dim == 0 && !normals.empty()) dim = normals.front().size();
      std::vector<Halfspace> hs;
      for (std::size_t i = 0; i < normals.size(); ++i) hs.push_back({normals[i], offsets[i]});
      return halfspaces(dim, std::move(hs));
    }
    throw DomainError("unknown domain kind '" + kind + "'");
  } catch (const json::exception& e) {
    throw DomainError(std::string("domain JSON: ") + e.what());
  }
}

std::string Domain::to_json() const {
  nlohmann::json j;
  switch (kind_) {
    case DomainKind::Whole:
      j = {{"kind", "whole"}, {"dim", dim_}};
      break;
    case DomainKind::Ball:
      j = {{"kind", "ball"}, {"center", center_}, {"radius", radius_}};
      break;
    case DomainKind::Box:
      j = {{"kind", "box"}, {"lo", lo_}, {"hi", hi_}};
      break;
    case DomainKind::Halfspaces: {
      std::vector<Point> normals;
      std::vector<double> offsets;
      for (const auto& h : constraints_) {
        normals.push_back(h.normal);
        offsets.push_back(h.offset);
      }
      j = {{"kind", "halfspaces"}, {"dim", dim_}, {"normals", normals}, {"offsets", offsets}};
      break;
    }
  }
  return j.dump();
}

double Domain::slack(PointView x) const {
  switch (kind_) {
    case DomainKind::Whole:
      return kInf;
    case DomainKind::Ball:
      return radius_ - distance(x, center_);
    case DomainKind::Box: {
      double s = kInf;
      for (std::size_t i = 0; i < dim_; ++i) s = std::min({s, x[i] - lo_[i], hi_[i] - x[i]});
      return s;
    }
    case DomainKind::Halfspaces: {
      double s = kInf;
      for (const auto& h : constraints_) s = std::min(s, (h.offset - dot(h.normal, x)) / norm(h.normal));
      return s;
    }
  }
  return kInf;
}

bool Domain::contains(PointView x) const {
  if (x.size() != dim_ || !all_finite(x)) return false;
  return slack(x) > 0.0;
}

double Domain::distance_to_boundary(PointView x) const { return std::max(0.0, slack(x)); }

Cut Domain::cut(PointView x, double margin) const {
  Cut c;
  c.normal.assign(dim_, 0.0);
  switch (kind_) {
    case DomainKind::Whole:
      break;
    case DomainKind::Ball: {
      const double r = distance(x, center_);
      if (r == 0.0) break;
      for (std::size_t i = 0; i < dim_; ++i) c.normal[i] = (x[i] - center_[i]) / r;
      c.depth = std::max(0.0, r - (radius_ - margin));
      break;
    }
    case DomainKind::Box: {
      double worst = kInf;
      for (std::size_t i = 0; i < dim_; ++i) {
        if (x[i] - lo_[i] < worst) {
          worst = x[i] - lo_[i];
          std::fill(c.normal.begin(), c.normal.end(), 0.0);
          c.normal[i] = -1.0;
        }
        if (hi_[i] - x[i] < worst) {
          worst = hi_[i] - x[i];
          std::fill(c.normal.begin(), c.normal.end(), 0.0);
          c.normal[i] = 1.0;
        }
      }
      c.depth = std::max(0.0, margin - worst);
      break;
    }
    case DomainKind::Halfspaces: {
      double worst = kInf;
      for (const auto& h : constraints_) {
        const double n = norm(h.normal);
        const double s = (h.offset - dot(h.normal, x)) / n;
        if (s < worst) {
          worst = s;
          for (std::size_t i = 0; i < dim_; ++i) c.normal[i] = h.normal[i] / n;
        }
      }
      c.depth = std::max(0.0, margin - worst);
      break;
    }
  }
  return c;
}

bool Domain::bounded() const noexcept {
  if (kind_ == DomainKind::Ball || kind_ == DomainKind::Box) return true;
  return false;
}

std::optional<std::pair<Point, Point>> Domain::bounding_box() const {
  if (kind_ == DomainKind::Box) return std::make_pair(lo_, hi_);
  if (kind_ == DomainKind::Ball) {
    Point lo = center_, hi = center_;
    for (std::size_t i = 0; i < dim_; ++i) {
      lo[i] -= radius_;
      hi[i] += radius_;
    }
    return std::make_pair(lo, hi);
  }
  return std::nullopt;
}

double Domain::max_distance_from(PointView x) const {
  if (kind_ == DomainKind::Ball) return distance(x, center_) + radius_;
  if (kind_ == DomainKind::Box) {
    double s = 0.0;
    for (std::size_t i = 0; i < dim_; ++i) {
      const double d = std::max(std::abs(x[i] - lo_[i]), std::abs(hi_[i] - x[i]));
      s += d * d;
    }
    return std::sqrt(s);
  }
  return kInf;
}

double Domain::length_scale() const {
  switch (kind_) {
    case DomainKind::Ball:
      return radius_;
    case DomainKind::Box: {
      double w = kInf;
      for (std::size_t i = 0; i < dim_; ++i) w = std::min(w, hi_[i] - lo_[i]);
      return w;
    }
    default:
      return 1.0 + norm(interior_);
  }
}

bool Domain::operator==(const Domain& o) const {
  if (kind_ != o.kind_ || dim_ != o.dim_) return false;
  switch (kind_) {
    case DomainKind::Whole:
      return true;
    case DomainKind::Ball:
      return center_ == o.center_ && radius_ == o.radius_;
    case DomainKind::Box:
      return lo_ == o.lo_ && hi_ == o.hi_;
    case DomainKind::Halfspaces:
      return constraints_ == o.constraints_;
  }
  return false;
}

}  // namespace smoothcvx
