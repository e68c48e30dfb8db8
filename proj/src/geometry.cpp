#include "slopes/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace slopes {

SlopeSet::SlopeSet(int delta) : delta_(delta) {
  if (delta < 1) throw GeometryError("SlopeSet: delta must be >= 1");
  s_ = std::max(3, delta - 1);
  angles_.reserve(static_cast<std::size_t>(s_));
  for (int k = 0; k < s_; ++k) angles_.push_back(k * kPi / s_);
}

SlopeSet make_slope_set(int delta) { return SlopeSet(delta); }

double SlopeSet::ray_angle(int r) const {
  if (r < 0 || r >= 2 * s_) throw GeometryError("ray index out of range");
  return r * kPi / s_;
}

int SlopeSet::nearest_slope(double line_angle, double* deviation) const {
  double a = std::fmod(line_angle, kPi);
  if (a < 0) a += kPi;
  double step = kPi / s_;
  int k = static_cast<int>(std::lround(a / step)) % s_;
  double dev = a - k * step;
  if (dev > kPi / 2) dev -= kPi;  // wraparound near pi
  if (deviation) *deviation = std::abs(dev);
  return k;
}

double slope_of(const Point& a, const Point& b) {
  if (a.x == b.x && a.y == b.y) throw GeometryError("slope_of: degenerate segment");
  double ang = std::atan2(b.y - a.y, b.x - a.x);
  if (ang < 0) ang += kPi;
  if (ang >= kPi) ang -= kPi;
  return ang;
}

std::optional<Point> ray_line_intersection(const Ray& r, double horizontal_y) {
  Point d = dir_of(r.angle);
  if (std::abs(d.y) < 1e-15) {
    if (r.origin.y == horizontal_y) return r.origin;
    throw GeometryError("ray_line_intersection: horizontal ray parallel to line");
  }
  double t = (horizontal_y - r.origin.y) / d.y;
  if (t < 0) return std::nullopt;
  return Point{r.origin.x + t * d.x, horizontal_y};
}

namespace {

double cross(const Point& o, const Point& a, const Point& b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

bool near(const Point& a, const Point& b, double eps) {
  return std::abs(a.x - b.x) <= eps && std::abs(a.y - b.y) <= eps;
}

// Distance from p to segment ab, squared scale-free enough for our eps use.
double point_seg_dist(const Point& p, const Point& a, const Point& b) {
  double vx = b.x - a.x, vy = b.y - a.y;
  double wx = p.x - a.x, wy = p.y - a.y;
  double len2 = vx * vx + vy * vy;
  double t = len2 > 0 ? std::clamp((wx * vx + wy * vy) / len2, 0.0, 1.0) : 0.0;
  double dx = wx - t * vx, dy = wy - t * vy;
  return std::hypot(dx, dy);
}

}  // namespace

bool segments_properly_intersect(const Segment& s1, const Segment& s2, double eps,
                                 const std::vector<Point>& shared) {
  double o1 = cross(s1.a, s1.b, s2.a);
  double o2 = cross(s1.a, s1.b, s2.b);
  double o3 = cross(s2.a, s2.b, s1.a);
  double o4 = cross(s2.a, s2.b, s1.b);

  // eps is a distance; a cross product is distance-to-line times segment
  // length, so the orientation tolerance scales with the segment. Without the
  // scaling, segments much shorter than a unit look collinear with anything.
  double len1 = std::hypot(s1.b.x - s1.a.x, s1.b.y - s1.a.y);
  double len2 = std::hypot(s2.b.x - s2.a.x, s2.b.y - s2.a.y);
  auto sgn = [](double v, double tol) { return v > tol ? 1 : (v < -tol ? -1 : 0); };
  double t1 = eps * std::max(len1, eps), t2 = eps * std::max(len2, eps);
  int z1 = sgn(o1, t1), z2 = sgn(o2, t1), z3 = sgn(o3, t2), z4 = sgn(o4, t2);

  if (z1 * z2 < 0 && z3 * z4 < 0) return true;  // interior crossing

  // Collinear overlap: both endpoints of one segment on the other's line.
  if (z1 == 0 && z2 == 0) {
    // Project on the dominant axis of s1.
    bool use_x = std::abs(s1.b.x - s1.a.x) >= std::abs(s1.b.y - s1.a.y);
    auto coord = [use_x](const Point& p) { return use_x ? p.x : p.y; };
    double lo1 = std::min(coord(s1.a), coord(s1.b)), hi1 = std::max(coord(s1.a), coord(s1.b));
    double lo2 = std::min(coord(s2.a), coord(s2.b)), hi2 = std::max(coord(s2.a), coord(s2.b));
    double overlap = std::min(hi1, hi2) - std::max(lo1, lo2);
    if (overlap > eps) return true;
    if (overlap < -eps) return false;
    // Touch at a single point; fall through to the contact check.
  }

  // Possible endpoint contact: collect touch points.
  auto touches = [eps](const Point& p, const Segment& s) {
    return point_seg_dist(p, s.a, s.b) <= eps;
  };
  auto is_shared = [&shared, eps](const Point& p) {
    for (const auto& q : shared)
      if (near(p, q, eps)) return true;
    return false;
  };

  bool any_contact = false;
  for (const Point* p : {&s2.a, &s2.b}) {
    if (touches(*p, s1)) {
      any_contact = true;
      if (!is_shared(*p)) return true;
    }
  }
  for (const Point* p : {&s1.a, &s1.b}) {
    if (touches(*p, s2)) {
      any_contact = true;
      if (!is_shared(*p)) return true;
    }
  }
  if (any_contact) return false;  // all contacts are declared endpoints

  // No endpoint on the other segment and no sign-based crossing.
  return false;
}

}  // namespace slopes
