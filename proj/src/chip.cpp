#include "slopes/chip.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

namespace slopes {

namespace {

constexpr double kFlat = 1e-6;

void require(bool cond, const std::string& what) {
  if (!cond) throw InvariantViolation(what);
}

/// Apply a point map and a ray map to every coordinate, bend and ray record.
/// `swap_sides` exchanges the pin lists and pole labels; `reverse_order`
/// reverses each pin list (bottom-to-top order flips under a vertical mirror).
Chip map_chip(const Chip& c, const std::function<Point(const Point&)>& pt,
              const std::function<int(int)>& ray, bool swap_sides, bool reverse_order) {
  Chip out;
  Point a = pt(Point{c.rect.x0, c.rect.y0});
  Point b = pt(Point{c.rect.x1, c.rect.y1});
  out.rect = {std::min(a.x, b.x), std::min(a.y, b.y), std::max(a.x, b.x), std::max(a.y, b.y)};
  out.s_pole = swap_sides ? c.t_pole : c.s_pole;
  out.t_pole = swap_sides ? c.s_pole : c.t_pole;
  for (const auto& [v, p] : c.coords) out.coords[v] = pt(p);
  for (const auto& [k, eg] : c.content) {
    EdgeGeom ng = eg;
    if (ng.bend) ng.bend = pt(*ng.bend);
    if (ng.ray_a >= 0) ng.ray_a = ray(ng.ray_a);
    if (ng.ray_b >= 0) ng.ray_b = ray(ng.ray_b);
    out.content[k] = ng;
  }
  out.left_pins = swap_sides ? c.right_pins : c.left_pins;
  out.right_pins = swap_sides ? c.left_pins : c.right_pins;
  if (reverse_order) {
    std::reverse(out.left_pins.begin(), out.left_pins.end());
    std::reverse(out.right_pins.begin(), out.right_pins.end());
  }
  for (const auto& [v, rs] : c.rays) {
    std::set<int>& dst = out.rays[v];
    for (int r : rs) dst.insert(ray(r));
  }
  return out;
}

}  // namespace

Chip translate_chip(const Chip& c, double dx, double dy) {
  return map_chip(
      c, [dx, dy](const Point& p) { return Point{p.x + dx, p.y + dy}; },
      [](int r) { return r; }, false, false);
}

Chip scale_chip(const Chip& c, double factor) {
  if (!(factor > 0.0) || !std::isfinite(factor))
    throw GeometryError("scale factor must be positive");
  double cx = c.rect.x0, cy = c.rect.y0;
  return map_chip(
      c,
      [=](const Point& p) {
        return Point{cx + (p.x - cx) * factor, cy + (p.y - cy) * factor};
      },
      [](int r) { return r; }, false, false);
}

Chip hflip_chip(const Chip& c, const SlopeSet& ss) {
  double m = c.rect.x0 + c.rect.x1;
  int n = ss.ray_count(), s = ss.count();
  return map_chip(
      c, [m](const Point& p) { return Point{m - p.x, p.y}; },
      [n, s](int r) { return ((s - r) % n + n) % n; }, true, false);
}

Chip vflip_chip(const Chip& c, const SlopeSet& ss) {
  double m = c.rect.y0 + c.rect.y1;
  int n = ss.ray_count();
  return map_chip(
      c, [m](const Point& p) { return Point{p.x, m - p.y}; },
      [n](int r) { return (n - r) % n; }, false, true);
}

Chip rotate_chip(const Chip& c, int k, const Point& center, const SlopeSet& ss) {
  int n = ss.ray_count();
  double th = ss.ray_angle(((k % n) + n) % n);
  double co = std::cos(th), si = std::sin(th);
  return map_chip(
      c,
      [=](const Point& p) {
        double dx = p.x - center.x, dy = p.y - center.y;
        return Point{center.x + co * dx - si * dy, center.y + si * dx + co * dy};
      },
      [n, k](int r) { return ((r + k) % n + n) % n; }, false, false);
}

Chip widen_chip(const Chip& c, double extra, bool right_side) {
  if (extra < 0.0 || !std::isfinite(extra)) throw GeometryError("widen amount must be >= 0");
  Chip out = c;
  if (right_side)
    out.rect.x1 += extra;
  else
    out.rect.x0 -= extra;
  return out;
}

Chip orient_chip(const Chip& c, int left_pole, const SlopeSet& ss) {
  if (c.s_pole == left_pole) return c;
  if (c.t_pole == left_pole) return hflip_chip(c, ss);
  throw InvariantViolation("orient_chip: vertex is not a pole of this chip");
}

namespace {

/// Every segment of the chip, stubs included, with its declared endpoints.
struct Piece {
  Segment seg;
  std::vector<Point> ends;
};

std::vector<Piece> chip_pieces(const Chip& c) {
  std::vector<Piece> out;
  for (const auto& [k, eg] : c.content) {
    Point pa = c.coords.at(eg.a), pb = c.coords.at(eg.b);
    if (eg.bend) {
      out.push_back({{pa, *eg.bend}, {pa, *eg.bend, pb}});
      out.push_back({{*eg.bend, pb}, {pa, *eg.bend, pb}});
    } else {
      out.push_back({{pa, pb}, {pa, pb}});
    }
  }
  auto add_stubs = [&](const std::vector<Pin>& pins, double side_x) {
    for (const Pin& p : pins) {
      Point v = c.coords.at(p.vertex);
      Point end{side_x, v.y};
      if (std::abs(end.x - v.x) > kGeomEps) out.push_back({{v, end}, {v, end}});
    }
  };
  add_stubs(c.left_pins, c.rect.x0);
  add_stubs(c.right_pins, c.rect.x1);
  return out;
}

}  // namespace

void check_chip(const Chip& c, const SlopeSet& ss) {
  require(std::isfinite(c.rect.x0) && std::isfinite(c.rect.y0) && std::isfinite(c.rect.x1) &&
              std::isfinite(c.rect.y1),
          "chip rect not finite");
  require(c.rect.x1 >= c.rect.x0 - kGeomEps && c.rect.y1 >= c.rect.y0 - kGeomEps,
          "chip rect inverted");
  if (c.empty()) {
    require(c.content.empty() && c.left_pins.empty() && c.right_pins.empty(),
            "empty chip with content or pins");
    return;
  }
  for (const auto& [v, p] : c.coords) {
    require(finite(p), "chip coordinate not finite");
    require(p.x >= c.rect.x0 - kGeomEps && p.x <= c.rect.x1 + kGeomEps &&
                p.y >= c.rect.y0 - kGeomEps && p.y <= c.rect.y1 + kGeomEps,
            "chip vertex outside rect");
  }
  // Content edges: endpoints known, slopes on-grid, recorded rays consistent.
  for (const auto& [k, eg] : c.content) {
    require(c.coords.count(eg.a) && c.coords.count(eg.b), "content edge endpoint missing");
    Point pa = c.coords.at(eg.a), pb = c.coords.at(eg.b);
    auto check_dir = [&](const Point& from, const Point& to, int r) {
      double ang = std::atan2(to.y - from.y, to.x - from.x);
      double want = ss.ray_angle(r);
      double d = std::remainder(ang - want, 2 * kPi);
      require(std::abs(d) < 1e-6, "recorded ray does not match edge direction");
    };
    if (eg.bend) {
      check_dir(pa, *eg.bend, eg.ray_a);
      check_dir(pb, *eg.bend, eg.ray_b);
    } else {
      check_dir(pa, pb, eg.ray_a);
      check_dir(pb, pa, eg.ray_b);
    }
    require(c.rays.count(eg.a) && c.rays.at(eg.a).count(eg.ray_a), "ray_a not marked");
    require(c.rays.count(eg.b) && c.rays.at(eg.b).count(eg.ray_b), "ray_b not marked");
  }
  // Pins: known vertices, strictly increasing stub heights, horizontal stub
  // direction marked, lowest pin on the bottom side (C.1-C.3).
  int s = ss.count();
  auto check_pins = [&](const std::vector<Pin>& pins, bool left) {
    double prev = -1e300;
    for (const Pin& p : pins) {
      require(c.coords.count(p.vertex), "pin vertex missing from chip");
      double y = c.pin_y(p);
      require(y > prev + kGeomEps, "pins not in strictly ascending stub order");
      prev = y;
      int stub_ray = left ? s : 0;
      require(c.rays.count(p.vertex) && c.rays.at(p.vertex).count(stub_ray),
              "pin stub ray not marked");
    }
    if (!pins.empty())
      require(std::abs(c.pin_y(pins.front()) - c.rect.y0) < kFlat,
              "lowest pin not on the chip's bottom side");
  };
  check_pins(c.left_pins, true);
  check_pins(c.right_pins, false);
  // Planarity of content plus stubs.
  auto pieces = chip_pieces(c);
  for (std::size_t i = 0; i < pieces.size(); ++i)
    for (std::size_t j = i + 1; j < pieces.size(); ++j) {
      std::vector<Point> shared = pieces[i].ends;
      shared.insert(shared.end(), pieces[j].ends.begin(), pieces[j].ends.end());
      require(!segments_properly_intersect(pieces[i].seg, pieces[j].seg, kGeomEps, shared),
              "chip content crosses itself");
    }
}

namespace {

/// True when the open segment enters the open interior of the rect.
bool segment_enters_rect(const Segment& sg, const Rect& r, double eps) {
  auto inside = [&](const Point& p) {
    return p.x > r.x0 + eps && p.x < r.x1 - eps && p.y > r.y0 + eps && p.y < r.y1 - eps;
  };
  if (inside(sg.a) || inside(sg.b)) return true;
  Point c[4] = {{r.x0, r.y0}, {r.x1, r.y0}, {r.x1, r.y1}, {r.x0, r.y1}};
  // Shrink the rect a hair so boundary contact does not count.
  for (int i = 0; i < 4; ++i) {
    Point mid{(r.x0 + r.x1) / 2, (r.y0 + r.y1) / 2};
    c[i].x += (mid.x > c[i].x ? eps : -eps);
    c[i].y += (mid.y > c[i].y ? eps : -eps);
  }
  for (int i = 0; i < 4; ++i) {
    Segment side{c[i], c[(i + 1) % 4]};
    if (segments_properly_intersect(sg, side, eps / 4)) return true;
  }
  return false;
}

}  // namespace

std::vector<EdgeGeom> draw_edges_to_pole(const Chip& c, const Point& pole_pos, int pole,
                                         ChipSide side, const std::vector<int>& rays,
                                         const SlopeSet& ss) {
  const std::vector<Pin>& pins = (side == ChipSide::Left) ? c.left_pins : c.right_pins;
  if (pins.size() != rays.size())
    throw PreconditionUnmet("draw_edges_to_pole: ray count must match pin count");
  if (pins.empty()) return {};
  double side_x = (side == ChipSide::Left) ? c.rect.x0 : c.rect.x1;
  int s = ss.count();
  int stub_ray = (side == ChipSide::Left) ? s : 0;

  auto attempt = [&](const std::vector<int>& order) -> std::optional<std::vector<EdgeGeom>> {
    std::vector<EdgeGeom> out;
    std::vector<std::pair<Segment, Segment>> segs;  // ray part, horizontal part
    for (std::size_t i = 0; i < pins.size(); ++i) {
      int r = order[i];
      double y = c.pin_y(pins[i]);
      Point vtx = c.coords.at(pins[i].vertex);
      EdgeGeom eg;
      eg.a = pole;
      eg.b = pins[i].vertex;
      eg.ray_a = r;
      eg.ray_b = stub_ray;
      Point bend;
      if (ss.is_horizontal_ray(r)) {
        if (std::abs(pole_pos.y - y) > kFlat) return std::nullopt;
        bool pole_outside =
            (side == ChipSide::Left) ? pole_pos.x < side_x - kGeomEps : pole_pos.x > side_x + kGeomEps;
        if (!pole_outside) return std::nullopt;
        if ((r == 0) != (vtx.x > pole_pos.x)) return std::nullopt;
        bend = Point{(pole_pos.x + side_x) / 2, y};  // collinear; kept only for checks
        eg.bend = std::nullopt;
      } else {
        auto hit = ray_line_intersection(Ray{pole_pos, ss.ray_angle(r)}, y);
        if (!hit) return std::nullopt;
        bend = *hit;
        bool outside = (side == ChipSide::Left) ? bend.x <= c.rect.x0 + kGeomEps
                                                : bend.x >= c.rect.x1 - kGeomEps;
        if (!outside) return std::nullopt;
        if (segment_enters_rect({pole_pos, bend}, c.rect, kGeomEps)) return std::nullopt;
        eg.bend = bend;
      }
      out.push_back(eg);
      segs.push_back({{pole_pos, bend}, {bend, vtx}});
    }
    // Pairwise planarity among the new edges (they share only the pole).
    for (std::size_t i = 0; i < segs.size(); ++i)
      for (std::size_t j = i + 1; j < segs.size(); ++j) {
        const Segment* a[2] = {&segs[i].first, &segs[i].second};
        const Segment* b[2] = {&segs[j].first, &segs[j].second};
        for (int p = 0; p < 2; ++p)
          for (int q = 0; q < 2; ++q)
            if (segments_properly_intersect(*a[p], *b[q], kGeomEps, {pole_pos}))
              return std::nullopt;
      }
    return out;
  };

  if (auto r = attempt(rays)) return *r;
  std::vector<int> rev(rays.rbegin(), rays.rend());
  if (auto r = attempt(rev)) return *r;
  std::ostringstream os;
  os << "draw_edges_to_pole: no planar assignment of " << rays.size() << " rays at ("
     << pole_pos.x << ", " << pole_pos.y << ")";
  throw PreconditionUnmet(os.str());
}

}  // namespace slopes
