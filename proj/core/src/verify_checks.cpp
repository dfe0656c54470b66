#include <algorithm>
#include <cmath>

#include "smoothcvx/verify.hpp"

namespace smoothcvx {

void ViolationTracker::record(double violation, std::vector<Point> witness) {
  ++result_.samples;
  if (std::isnan(violation)) violation = std::numeric_limits<double>::infinity();
  if (violation > result_.worst || result_.witness.empty()) {
    result_.worst = std::max(result_.worst, violation);
    result_.witness = std::move(witness);
  }
}

CheckResult ViolationTracker::finish() const {
  CheckResult r = result_;
  r.pass = strict_ ? r.worst < 0.0 : r.worst <= 0.0;
  return r;
}

CheckResult check_convexity(std::string id, const Pointwise& h, const std::vector<Segment>& segments, double slack,
                            bool strict) {
  ViolationTracker t(std::move(id), strict);
  for (const Segment& s : segments) {
    const double ha = h(s.a);
    const double hb = h(s.b);
    const double tol = strict ? 0.0 : slack * (1.0 + std::abs(ha) + std::abs(hb));
    for (const double w : {0.25, 0.5, 0.75}) {
      const Point m = lerp(s.b, s.a, w);
      t.record(h(m) - (w * ha + (1.0 - w) * hb) - tol, {s.a, s.b, m});
    }
  }
  return t.finish();
}

CheckResult check_c1(std::string id, const Pointwise& h, const std::vector<Point>& points,
                     const std::vector<Point>& directions, double step, double tol) {
  ViolationTracker t(std::move(id));
  const bool paired = directions.size() == points.size();
  const auto one = [&](const Point& x, const Point& u) {
    const double h0 = h(x);
    const auto at = [&](double s) { return h(along(x, s, u)); };
    const double fwd = (at(step) - h0) / step;
    const double bwd = (h0 - at(-step)) / step;
    const auto centered = [&](double s) { return (at(s) - at(-s)) / (2.0 * s); };
    const double d1 = centered(step);
    const double d2 = centered(0.5 * step);
    const double d4 = centered(0.25 * step);
    const double one_sided = std::abs(fwd - bwd) - tol;
    const double richardson = std::abs(d1 - d2) - 4.0 * std::abs(d2 - d4) - tol;
    t.record(std::max(one_sided, richardson), {x, u});
  };
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (paired) {
      one(points[i], directions[i]);
    } else {
      for (const Point& u : directions) one(points[i], u);
    }
  }
  return t.finish();
}

CheckResult check_band(std::string id, const Pointwise& target, const Pointwise& lo, const Pointwise& hi,
                       const std::vector<Point>& points, double slack) {
  ViolationTracker t(std::move(id));
  for (const Point& x : points) {
    const double v = target(x);
    const double s = slack * (1.0 + std::abs(v));
    t.record(std::max(lo(x) - v, v - hi(x)) - s, {x});
  }
  return t.finish();
}

CheckResult check_lipschitz(std::string id, const Pointwise& h, const std::vector<Segment>& pairs, double bound,
                            double slack) {
  ViolationTracker t(std::move(id));
  for (const Segment& s : pairs) {
    const double ha = h(s.a);
    const double hb = h(s.b);
    t.record(std::abs(ha - hb) - bound * distance(s.a, s.b) - slack * (1.0 + std::abs(ha) + std::abs(hb)),
             {s.a, s.b});
  }
  return t.finish();
}

CheckResult check_equality(std::string id, const Pointwise& a, const Pointwise& b, const std::vector<Point>& points,
                           double tol) {
  ViolationTracker t(std::move(id));
  for (const Point& x : points) {
    const double va = a(x);
    const double vb = b(x);
    const double gap = va == vb ? 0.0 : std::abs(va - vb);
    t.record(gap - tol * (1.0 + std::abs(va)), {x});
  }
  return t.finish();
}

CheckResult check_monotone_pair(std::string id, const Pointwise& lower, const Pointwise& upper,
                                const std::vector<Point>& points, double slack) {
  ViolationTracker t(std::move(id));
  for (const Point& x : points) {
    const double u = upper(x);
    t.record(lower(x) - u - slack * (1.0 + std::abs(u)), {x});
  }
  return t.finish();
}

}  // namespace smoothcvx
