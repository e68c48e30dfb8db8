#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

namespace slopes {

inline constexpr double kPi = 3.14159265358979323846;

/// Slope membership tolerance used by the verifier, in radians.
inline constexpr double kSlopeTol = 1e-6;
/// Geometric predicate tolerance on unit-normalized coordinates.
inline constexpr double kGeomEps = 1e-9;

struct Point {
  double x = 0.0;
  double y = 0.0;
};

inline bool finite(const Point& p) { return std::isfinite(p.x) && std::isfinite(p.y); }

struct GeometryError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// The equispaced universal slope system: s = max(3, delta-1) angles k*pi/s.
///
/// Ray indexing convention used throughout the drawers: a vertex has 2s rays,
/// ray r (0 <= r < 2s) points in direction r*pi/s measured counter-clockwise
/// from the positive x axis. Ray 0 is the right horizontal, ray s the left
/// horizontal, rays 1..s-1 are top rays and rays s+1..2s-1 are bottom rays.
class SlopeSet {
 public:
  explicit SlopeSet(int delta);

  int delta() const { return delta_; }
  int count() const { return s_; }
  const std::vector<double>& angles() const { return angles_; }
  double angle(int k) const { return angles_.at(static_cast<std::size_t>(k)); }
  /// Minimum angular gap, pi/s.
  double resolution() const { return kPi / s_; }

  int ray_count() const { return 2 * s_; }
  /// Direction angle of ray r in [0, 2*pi).
  double ray_angle(int r) const;
  bool is_top_ray(int r) const { return r > 0 && r < s_; }
  bool is_bottom_ray(int r) const { return r > s_ && r < 2 * s_; }
  bool is_horizontal_ray(int r) const { return r == 0 || r == s_; }
  int opposite_ray(int r) const { return (r + s_) % (2 * s_); }

  /// Nearest slope index for a line angle in [0, pi); deviation returned too.
  int nearest_slope(double line_angle, double* deviation = nullptr) const;

 private:
  int delta_;
  int s_;
  std::vector<double> angles_;
};

SlopeSet make_slope_set(int delta);

/// Angle in [0, pi) of the line through a and b. Throws on a == b.
double slope_of(const Point& a, const Point& b);

/// Unit direction vector of ray angle theta.
inline Point dir_of(double theta) { return Point{std::cos(theta), std::sin(theta)}; }

enum class RayKind { Top, Bottom, HorizontalLeft, HorizontalRight };

struct Ray {
  Point origin;
  double angle = 0.0;  // direction angle in [0, 2*pi)
};

/// Intersection of a ray with the horizontal line y = h, or nullopt when the
/// ray does not reach that half-plane. A horizontal ray with origin.y == h
/// yields its origin; with origin.y != h it throws (parallel lines).
std::optional<Point> ray_line_intersection(const Ray& r, double horizontal_y);

struct Segment {
  Point a;
  Point b;
};

/// True iff the segments share a point other than a declared common endpoint.
/// `shared` lists points the caller declares as legitimate contacts (graph
/// adjacency); touching anywhere else, and any collinear overlap of positive
/// length, counts as a crossing.
bool segments_properly_intersect(const Segment& s1, const Segment& s2, double eps,
                                 const std::vector<Point>& shared = {});

}  // namespace slopes
