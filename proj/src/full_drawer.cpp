#include "slopes/full_drawer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <queue>
#include <set>
#include <vector>

#include "slopes/bi_drawer.hpp"
#include "slopes/chip.hpp"
#include "slopes/decomposition.hpp"

namespace slopes {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require(bool ok, const char* what) {
  if (!ok) throw InvariantViolation(what);
}

/// Nearest ray index of the drawn direction from `from` to `to`.
int snap_ray(const SlopeSet& ss, const Point& from, const Point& to) {
  double t = std::atan2(to.y - from.y, to.x - from.x) / ss.resolution();
  int r = static_cast<int>(std::llround(t)) % ss.ray_count();
  return r < 0 ? r + ss.ray_count() : r;
}

/// The growing drawing of one connected graph, assembled block by block.
struct Assembly {
  const Graph& g;
  const SlopeSet& ss;
  Drawing d;
  std::vector<char> placed;

  Assembly(const Graph& gg, const SlopeSet& s2) : g(gg), ss(s2), d(s2) {
    d.coords.assign(static_cast<std::size_t>(gg.n()), Point{});
    placed.assign(static_cast<std::size_t>(gg.n()), 0);
  }

  std::set<int> used_rays(int v) const {
    std::set<int> out;
    const Point& at = d.coords[static_cast<std::size_t>(v)];
    for (const auto& e : d.edges) {
      if (e.u != v && e.v != v) continue;
      Point toward = e.bend ? *e.bend : d.coords[static_cast<std::size_t>(e.u == v ? e.v : e.u)];
      out.insert(snap_ray(ss, at, toward));
    }
    return out;
  }

  /// Min distance from `c` to any drawn geometry whose direction from `c`
  /// falls inside the closed angular sector [alo, ahi] (width <= pi, so the
  /// cone is convex). Segments are clipped against the cone exactly: on every
  /// in-cone piece the minimum is at a piece end (segment end or cone
  /// boundary crossing) or at the unconstrained closest point. Points within
  /// 1e-12 of `c` (the apex itself) are ignored.
  double sector_clearance(const Point& c, double alo, double ahi) const {
    const Point dlo = dir_of(alo), dhi = dir_of(ahi);
    auto cross = [](const Point& a, const Point& b) { return a.x * b.y - a.y * b.x; };
    auto in_cone = [&](const Point& q) {
      double n = std::hypot(q.x, q.y);
      if (n <= 1e-12) return false;
      return cross(dlo, q) >= -1e-9 * n && cross(q, dhi) >= -1e-9 * n;
    };
    double best = kInf;
    auto feed = [&](const Point& p) {
      Point q{p.x - c.x, p.y - c.y};
      if (in_cone(q)) best = std::min(best, std::hypot(q.x, q.y));
    };
    for (int v = 0; v < g.n(); ++v)
      if (placed[static_cast<std::size_t>(v)]) feed(d.coords[static_cast<std::size_t>(v)]);
    for (const auto& e : d.edges) {
      const Point& pu = d.coords[static_cast<std::size_t>(e.u)];
      const Point& pv = d.coords[static_cast<std::size_t>(e.v)];
      for (const Segment& sg : e.segments(pu, pv)) {
        Point ab{sg.b.x - sg.a.x, sg.b.y - sg.a.y};
        double len2 = ab.x * ab.x + ab.y * ab.y;
        double cand[5] = {0.0, 1.0, 0.0, 0.0, 0.0};
        int nc = 2;
        if (len2 > 0) {
          double t = ((c.x - sg.a.x) * ab.x + (c.y - sg.a.y) * ab.y) / len2;
          cand[nc++] = std::clamp(t, 0.0, 1.0);
          for (const Point& dd : {dlo, dhi}) {
            double den = cross(dd, ab);
            if (std::fabs(den) > 1e-15) {
              double tb = -cross(dd, Point{sg.a.x - c.x, sg.a.y - c.y}) / den;
              if (tb > 0.0 && tb < 1.0) cand[nc++] = tb;
            }
          }
        }
        for (int i = 0; i < nc; ++i)
          feed(Point{sg.a.x + cand[i] * ab.x, sg.a.y + cand[i] * ab.y});
      }
    }
    return best;
  }
};

}  // namespace

Drawing draw_connected(const Graph& g, const SlopeSet& ss) {
  if (g.n() == 0) return Drawing(ss);
  if (!is_connected(g)) throw NotConnected("graph is not connected");
  Assembly as(g, ss);
  as.placed.assign(as.placed.size(), 0);
  if (g.n() == 1) {
    as.placed[0] = 1;
    return as.d;
  }

  const BcTree bc = build_bc_tree(g);
  const int nb = static_cast<int>(bc.blocks.size());
  std::vector<std::vector<int>> bverts(static_cast<std::size_t>(nb));
  std::vector<std::map<int, int>> bdeg(static_cast<std::size_t>(nb));
  std::vector<std::vector<int>> blocks_at(static_cast<std::size_t>(g.n()));
  for (int b = 0; b < nb; ++b) {
    for (auto [u, v] : bc.blocks[static_cast<std::size_t>(b)]) {
      ++bdeg[static_cast<std::size_t>(b)][u];
      ++bdeg[static_cast<std::size_t>(b)][v];
    }
    for (const auto& [v, dd] : bdeg[static_cast<std::size_t>(b)]) {
      bverts[static_cast<std::size_t>(b)].push_back(v);  // ascending (map order)
      blocks_at[static_cast<std::size_t>(v)].push_back(b);
    }
  }
  std::vector<char> drawn(static_cast<std::size_t>(nb), 0);

  auto local_id = [&](int b, int v) {
    const auto& vs = bverts[static_cast<std::size_t>(b)];
    return static_cast<int>(std::lower_bound(vs.begin(), vs.end(), v) - vs.begin());
  };
  // Reservations for a block: room at each of its cut vertices (except the
  // parent-side one) for the edges of the blocks still to come.
  auto reservations = [&](int b, int gamma) {
    std::map<int, int> res;
    for (int c : bc.block_cuts[static_cast<std::size_t>(b)]) {
      if (c == gamma) continue;
      int r = g.degree(c) - bdeg[static_cast<std::size_t>(b)].at(c);
      if (r > 0) res[local_id(b, c)] = r;
    }
    return res;
  };
  std::queue<int> pending;  // cut vertices with undrawn blocks
  std::vector<char> queued(static_cast<std::size_t>(g.n()), 0);
  auto merge = [&](int b, const Drawing& dd, const std::vector<int>& omap, auto&& xf) {
    for (std::size_t i = 0; i < omap.size(); ++i) {
      int ov = omap[i];
      if (as.placed[static_cast<std::size_t>(ov)]) continue;
      as.d.coords[static_cast<std::size_t>(ov)] = xf(dd.coords[i]);
      as.placed[static_cast<std::size_t>(ov)] = 1;
    }
    for (const auto& e : dd.edges) {
      PolylineEdge pe;
      pe.u = omap[static_cast<std::size_t>(e.u)];
      pe.v = omap[static_cast<std::size_t>(e.v)];
      if (e.bend) pe.bend = xf(*e.bend);
      as.d.edges.push_back(pe);
    }
    drawn[static_cast<std::size_t>(b)] = 1;
    for (int c : bc.block_cuts[static_cast<std::size_t>(b)])
      if (!queued[static_cast<std::size_t>(c)]) {
        queued[static_cast<std::size_t>(c)] = 1;
        pending.push(c);
      }
  };

  // Root block: the lowest-indexed block containing vertex 0, drawn as-is.
  {
    int rb = blocks_at[0].front();
    std::vector<int> omap;
    Graph bg = g.induced(bverts[static_cast<std::size_t>(rb)], &omap);
    Drawing dd = draw_biconnected(bg, ss, reservations(rb, -1));
    merge(rb, dd, omap, [](const Point& p) { return p; });
  }

  const double step = ss.resolution();
  const int nrays = ss.ray_count();
  while (!pending.empty()) {
    int c = pending.front();
    pending.pop();
    std::vector<int> kids;
    for (int b : blocks_at[static_cast<std::size_t>(c)])
      if (!drawn[static_cast<std::size_t>(b)]) kids.push_back(b);
    if (kids.empty()) continue;
    int delta_c = 0;
    for (int b : kids) delta_c += bdeg[static_cast<std::size_t>(b)].at(c);

    // K.1: the drawn blocks at c left delta_c consecutive rays free; take the
    // run with the smallest starting index.
    const std::set<int> used = as.used_rays(c);
    int base = -1;
    for (int f = 0; f < nrays && base < 0; ++f) {
      bool ok = true;
      for (int j = 0; j < delta_c && ok; ++j) ok = !used.count((f + j) % nrays);
      if (ok) base = f;
    }
    require(base >= 0, "no free ray fan at a cut vertex");

    const Point pc = as.d.coords[static_cast<std::size_t>(c)];
    int fb = base;
    for (int b : kids) {
      const int dz = bdeg[static_cast<std::size_t>(b)].at(c);
      // Clearance: nearest drawn geometry inside the child's fan sector, with
      // a quarter-step angular margin to the neighboring rays. The radial
      // edges at c itself fall outside the sector.
      const double alo = (fb - 0.25) * step, ahi = (fb + dz - 0.25) * step;
      const double rho = as.sector_clearance(pc, alo, ahi);
      require(rho > 0, "cut vertex clearance collapsed");
      if (bverts[static_cast<std::size_t>(b)].size() == 2) {
        // Bridge: one straight segment on the fan's first ray.
        double len = std::isinf(rho) ? 10.0 : std::min(10.0, 0.5 * rho);
        auto [eu, ev] = bc.blocks[static_cast<std::size_t>(b)][0];
        int other = (eu == c) ? ev : eu;
        Point dir = dir_of(fb * step);
        require(!as.placed[static_cast<std::size_t>(other)], "bridge endpoint already placed");
        as.d.coords[static_cast<std::size_t>(other)] = Point{pc.x + len * dir.x, pc.y + len * dir.y};
        as.placed[static_cast<std::size_t>(other)] = 1;
        PolylineEdge pe;
        pe.u = c;
        pe.v = other;
        as.d.edges.push_back(pe);
        drawn[static_cast<std::size_t>(b)] = 1;
        for (int cv : bc.block_cuts[static_cast<std::size_t>(b)])
          if (!queued[static_cast<std::size_t>(cv)]) {
            queued[static_cast<std::size_t>(cv)] = 1;
            pending.push(cv);
          }
      } else {
        std::vector<int> omap;
        Graph bg = g.induced(bverts[static_cast<std::size_t>(b)], &omap);
        const int cl = local_id(b, c);
        Drawing dd = draw_biconnected(bg, ss, reservations(b, c), cl);
        require(std::hypot(dd.coords[static_cast<std::size_t>(cl)].x,
                           dd.coords[static_cast<std::size_t>(cl)].y) < 1e-9,
                "anchored block does not start at its parent pole");
        // The block leaves its parent pole on rays {2s-1, 0, .., dz-2}; rotate
        // that arc onto [fb, fb+dz-1] and scale into the clearance disk.
        const int k = (fb + 1) % nrays;
        const double ca = std::cos(k * step), sa = std::sin(k * step);
        double rad = 0.0;
        for (const Point& p : dd.coords) rad = std::max(rad, std::hypot(p.x, p.y));
        for (const auto& e : dd.edges)
          if (e.bend) rad = std::max(rad, std::hypot(e.bend->x, e.bend->y));
        const double f = std::isinf(rho) ? 1.0 : std::min(1.0, 0.5 * rho / std::max(rad, 1e-12));
        auto xf = [&, ca, sa, f](const Point& p) {
          return Point{pc.x + f * (p.x * ca - p.y * sa), pc.y + f * (p.x * sa + p.y * ca)};
        };
        merge(b, dd, omap, xf);
      }
      fb += dz;
    }
  }

  for (int b = 0; b < nb; ++b) require(drawn[static_cast<std::size_t>(b)], "undrawn block");
  for (int v = 0; v < g.n(); ++v) require(as.placed[static_cast<std::size_t>(v)], "unplaced vertex");
  require(static_cast<int>(as.d.edges.size()) == g.m(), "edge count mismatch after assembly");
  return as.d;
}

Drawing draw(const Graph& g, std::optional<int> delta_override) {
  NotPlanar why;
  if (!planar_embed(g, &why)) throw why;
  int delta = g.max_degree();
  if (delta_override) {
    if (*delta_override < delta)
      throw DegreeOverrideTooSmall("degree override below the graph's maximum degree");
    delta = *delta_override;
  }
  SlopeSet ss = make_slope_set(std::max(1, delta));
  Drawing out(ss);
  out.coords.assign(static_cast<std::size_t>(g.n()), Point{});
  auto comps = connected_components(g);
  out.components = static_cast<int>(comps.size());
  double band_y = 0.0;
  for (auto& comp : comps) {
    std::sort(comp.begin(), comp.end());
    std::vector<int> omap;
    Graph cg = g.induced(comp, &omap);
    Drawing dc = draw_connected(cg, ss);
    double lox = kInf, loy = kInf, hiy = -kInf;
    auto feed = [&](const Point& p) {
      lox = std::min(lox, p.x);
      loy = std::min(loy, p.y);
      hiy = std::max(hiy, p.y);
    };
    for (const Point& p : dc.coords) feed(p);
    for (const auto& e : dc.edges)
      if (e.bend) feed(*e.bend);
    const double dx = -lox, dy = band_y - loy;
    for (std::size_t i = 0; i < omap.size(); ++i)
      out.coords[static_cast<std::size_t>(omap[i])] = Point{dc.coords[i].x + dx, dc.coords[i].y + dy};
    for (const auto& e : dc.edges) {
      PolylineEdge pe;
      pe.u = omap[static_cast<std::size_t>(e.u)];
      pe.v = omap[static_cast<std::size_t>(e.v)];
      if (e.bend) pe.bend = Point{e.bend->x + dx, e.bend->y + dy};
      out.edges.push_back(pe);
    }
    band_y += (hiy - loy) + 10.0;
  }
  return out;
}

}  // namespace slopes
