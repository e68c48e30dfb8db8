#include "slopes/verifier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>

namespace slopes {

namespace {

double direction(const Point& from, const Point& to) {
  double a = std::atan2(to.y - from.y, to.x - from.x);
  if (a < 0) a += 2 * kPi;
  return a;
}

double cyclic_min_gap(std::vector<double>& angles) {
  std::sort(angles.begin(), angles.end());
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < angles.size(); ++i) best = std::min(best, angles[i + 1] - angles[i]);
  best = std::min(best, 2 * kPi - (angles.back() - angles.front()));
  return best;
}

struct SegRec {
  Segment seg;
  int edge;
};

}  // namespace

Report verify(const Drawing& d) {
  const int n = static_cast<int>(d.coords.size());
  for (const Point& p : d.coords)
    if (!finite(p)) throw MalformedDrawing("non-finite vertex coordinate");
  for (const auto& e : d.edges) {
    if (e.u < 0 || e.u >= n || e.v < 0 || e.v >= n || e.u == e.v)
      throw MalformedDrawing("edge endpoint out of range");
    if (e.bend && !finite(*e.bend)) throw MalformedDrawing("non-finite bend");
  }
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (std::abs(d.coords[static_cast<std::size_t>(i)].x - d.coords[static_cast<std::size_t>(j)].x) <= kGeomEps &&
          std::abs(d.coords[static_cast<std::size_t>(i)].y - d.coords[static_cast<std::size_t>(j)].y) <= kGeomEps)
        throw MalformedDrawing("duplicate vertex coordinates");

  Report rep;
  rep.required_angle = d.slope_set.resolution() - kSlopeTol;

  // Slope membership and bend sanity on raw coordinates.
  for (std::size_t ei = 0; ei < d.edges.size(); ++ei) {
    const auto& e = d.edges[ei];
    const Point& pu = d.coords[static_cast<std::size_t>(e.u)];
    const Point& pv = d.coords[static_cast<std::size_t>(e.v)];
    rep.max_bends = std::max(rep.max_bends, e.bend ? 1 : 0);
    std::vector<double> segslopes;
    try {
      for (const auto& s : e.segments(pu, pv)) segslopes.push_back(slope_of(s.a, s.b));
    } catch (const GeometryError&) {
      throw MalformedDrawing("zero-length edge segment");
    }
    for (double a : segslopes) {
      double dev = 0;
      d.slope_set.nearest_slope(a, &dev);
      rep.max_slope_deviation = std::max(rep.max_slope_deviation, dev);
    }
    if (segslopes.size() == 2 && std::abs(segslopes[0] - segslopes[1]) <= kSlopeTol &&
        rep.detail.empty())
      rep.detail = "bend without a direction change on edge " + std::to_string(ei);
  }

  // Normalize to the unit bounding box for the crossing predicates.
  double lox = std::numeric_limits<double>::infinity(), loy = lox;
  double hix = -lox, hiy = -lox;
  auto feed = [&](const Point& p) {
    lox = std::min(lox, p.x);
    loy = std::min(loy, p.y);
    hix = std::max(hix, p.x);
    hiy = std::max(hiy, p.y);
  };
  for (const Point& p : d.coords) feed(p);
  for (const auto& e : d.edges)
    if (e.bend) feed(*e.bend);
  double scale = std::max(hix - lox, hiy - loy);
  if (scale <= 0) scale = 1;
  auto norm = [&](const Point& p) { return Point{(p.x - lox) / scale, (p.y - loy) / scale}; };

  std::vector<std::vector<SegRec>> per_edge(d.edges.size());
  for (std::size_t ei = 0; ei < d.edges.size(); ++ei) {
    const auto& e = d.edges[ei];
    for (const auto& s : e.segments(norm(d.coords[static_cast<std::size_t>(e.u)]),
                                    norm(d.coords[static_cast<std::size_t>(e.v)])))
      per_edge[ei].push_back({s, static_cast<int>(ei)});
    if (per_edge[ei].size() == 2) {
      // The bend itself was normalized through segments() arguments above only
      // for endpoints; rebuild with the normalized bend.
      PolylineEdge ne = e;
      ne.bend = norm(*e.bend);
      per_edge[ei].clear();
      for (const auto& s : ne.segments(norm(d.coords[static_cast<std::size_t>(e.u)]),
                                       norm(d.coords[static_cast<std::size_t>(e.v)])))
        per_edge[ei].push_back({s, static_cast<int>(ei)});
    }
  }

  auto bbox_disjoint = [](const Segment& a, const Segment& b) {
    double e = kGeomEps;
    return std::max(a.a.x, a.b.x) + e < std::min(b.a.x, b.b.x) ||
           std::max(b.a.x, b.b.x) + e < std::min(a.a.x, a.b.x) ||
           std::max(a.a.y, a.b.y) + e < std::min(b.a.y, b.b.y) ||
           std::max(b.a.y, b.b.y) + e < std::min(a.a.y, a.b.y);
  };

  for (std::size_t i = 0; i < d.edges.size(); ++i) {
    for (std::size_t j = i + 1; j < d.edges.size(); ++j) {
      std::vector<Point> shared;
      for (int a : {d.edges[i].u, d.edges[i].v})
        for (int b : {d.edges[j].u, d.edges[j].v})
          if (a == b) shared.push_back(norm(d.coords[static_cast<std::size_t>(a)]));
      bool hit = false;
      for (const auto& sa : per_edge[i])
        for (const auto& sb : per_edge[j]) {
          if (bbox_disjoint(sa.seg, sb.seg)) continue;
          if (segments_properly_intersect(sa.seg, sb.seg, kGeomEps, shared)) hit = true;
        }
      if (hit) rep.crossing_pairs.emplace_back(static_cast<int>(i), static_cast<int>(j));
    }
  }

  // Angular resolution at vertices and bends.
  std::vector<std::vector<double>> at_vertex(static_cast<std::size_t>(n));
  rep.min_angle = 2 * kPi;
  for (const auto& e : d.edges) {
    const Point& pu = d.coords[static_cast<std::size_t>(e.u)];
    const Point& pv = d.coords[static_cast<std::size_t>(e.v)];
    Point mu = e.bend ? *e.bend : pv;
    Point mv = e.bend ? *e.bend : pu;
    at_vertex[static_cast<std::size_t>(e.u)].push_back(direction(pu, mu));
    at_vertex[static_cast<std::size_t>(e.v)].push_back(direction(pv, mv));
    if (e.bend) {
      double a1 = direction(*e.bend, pu);
      double a2 = direction(*e.bend, pv);
      double gap = std::abs(a1 - a2);
      gap = std::min(gap, 2 * kPi - gap);
      rep.min_angle = std::min(rep.min_angle, gap);
    }
  }
  for (auto& angles : at_vertex)
    if (angles.size() >= 2) rep.min_angle = std::min(rep.min_angle, cyclic_min_gap(angles));

  rep.pass = rep.crossing_pairs.empty() && rep.max_bends <= 1 &&
             rep.max_slope_deviation <= kSlopeTol && rep.min_angle >= rep.required_angle &&
             rep.detail.empty();
  if (!rep.pass && rep.detail.empty()) {
    if (!rep.crossing_pairs.empty())
      rep.detail = "crossing edges";
    else if (rep.max_slope_deviation > kSlopeTol)
      rep.detail = "slope outside the slope set";
    else
      rep.detail = "angular resolution below pi/s";
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Canonical-order oracle.
// ---------------------------------------------------------------------------

namespace {

/// Outer cycle (vertex set) of the prefix graph, taken as the face of the
/// induced embedding that contains the base edge with the orientation it has
/// on the full outer face. Returns nullopt if the walk is not available.
std::optional<std::set<int>> prefix_outer_cycle(const Embedding& e, const std::set<int>& prefix,
                                                DirectedEdge d0) {
  std::vector<int> verts(prefix.begin(), prefix.end());
  std::map<int, int> inv;
  for (std::size_t i = 0; i < verts.size(); ++i) inv[verts[i]] = static_cast<int>(i);
  Graph sub(static_cast<int>(verts.size()));
  std::vector<std::vector<int>> rot(verts.size());
  for (std::size_t i = 0; i < verts.size(); ++i)
    for (int w : e.rotation[static_cast<std::size_t>(verts[i])])
      if (prefix.count(w)) {
        rot[i].push_back(inv.at(w));
        if (!sub.has_edge(static_cast<int>(i), inv.at(w)) && static_cast<int>(i) < inv.at(w))
          sub.add_edge(static_cast<int>(i), inv.at(w));
      }
  Embedding se{std::move(sub), std::move(rot), 0};
  DirectedEdge want{inv.at(d0.first), inv.at(d0.second)};
  for (const auto& f : se.faces()) {
    for (const auto& de : f.boundary)
      if (de == want) {
        std::set<int> out;
        for (const auto& [u, v] : f.boundary) out.insert(verts[static_cast<std::size_t>(u)]);
        return out;
      }
  }
  return std::nullopt;
}

}  // namespace

bool oracle_canonical(const CanonicalOrder& order, const Embedding& e) {
  const Graph& g = e.graph;
  if (order.parts.size() < 2) return false;
  if (order.parts.front() != std::vector<int>{order.v1, order.v2}) return false;
  if (order.parts.back().size() != 1 || order.parts.back()[0] != order.vn) return false;

  std::set<int> seen;
  for (const auto& part : order.parts)
    for (int v : part) {
      if (v < 0 || v >= g.n() || seen.count(v)) return false;
      seen.insert(v);
    }
  if (static_cast<int>(seen.size()) != g.n()) return false;

  if (!g.has_edge(order.v1, order.v2) || !g.has_edge(order.v1, order.vn)) return false;
  auto all_faces = e.faces();
  const auto& outer = all_faces[static_cast<std::size_t>(e.outer_face)].boundary;
  auto on_outer = [&outer](int a, int b) {
    for (const auto& de : outer)
      if ((de.first == a && de.second == b) || (de.first == b && de.second == a)) return true;
    return false;
  };
  if (!on_outer(order.v1, order.v2) || !on_outer(order.v1, order.vn)) return false;
  DirectedEdge d0{-1, -1};
  for (const auto& de : outer)
    if ((de.first == order.v1 && de.second == order.v2) ||
        (de.first == order.v2 && de.second == order.v1))
      d0 = de;

  const std::size_t m = order.parts.size() - 1;
  std::set<int> prefix(order.parts[0].begin(), order.parts[0].end());
  // part_index[v] = k with v in P_k
  std::vector<int> part_index(static_cast<std::size_t>(g.n()), -1);
  for (std::size_t k = 0; k < order.parts.size(); ++k)
    for (int v : order.parts[k]) part_index[static_cast<std::size_t>(v)] = static_cast<int>(k);

  for (std::size_t k = 1; k <= m; ++k) {
    const auto& part = order.parts[k];
    std::set<int> prev = prefix;
    for (int v : part) prefix.insert(v);
    if (k == m) break;  // conditions apply to k = 1..m-1

    // (i) G_k biconnected.
    std::vector<int> pv(prefix.begin(), prefix.end());
    if (!is_biconnected(g.induced(pv))) return false;
    // (ii) attachments on the previous outer cycle.
    auto cyc = prefix_outer_cycle(e, prev, d0);
    if (!cyc) return false;
    for (int z : part)
      for (int w : g.neighbors(z))
        if (prev.count(w) && !cyc->count(w)) return false;
    // (iii) singleton, or all vertices of the path have degree two in G_k.
    if (part.size() > 1) {
      for (int z : part) {
        int deg = 0;
        for (int w : g.neighbors(z))
          if (prefix.count(w)) ++deg;
        if (deg != 2) return false;
      }
    }
    // (iv) every vertex keeps a neighbor in a later part.
    for (int z : part) {
      bool later = false;
      for (int w : g.neighbors(z))
        later = later || part_index[static_cast<std::size_t>(w)] > static_cast<int>(k);
      if (!later) return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// SPQR oracle.
// ---------------------------------------------------------------------------

bool oracle_spqr(const SpqrTree& t, const Graph& g) {
  if (g.n() > 8) throw OracleBudgetExceeded("SPQR oracle limited to n <= 8");
  if (t.nodes.empty()) return false;
  if (t.nodes[static_cast<std::size_t>(t.root)].type != SpqrType::Q) return false;

  // Expansion reproduces the edge set exactly, no duplicates.
  auto exp = t.pertinent_edges(t.root);
  std::vector<std::pair<int, int>> want;
  for (const auto& [u, v] : g.edges()) want.emplace_back(std::min(u, v), std::max(u, v));
  std::sort(want.begin(), want.end());
  if (exp != want) return false;
  if (std::adjacent_find(exp.begin(), exp.end()) != exp.end()) return false;

  for (std::size_t id = 0; id < t.nodes.size(); ++id) {
    const SpqrNode& nd = t.nodes[id];
    auto same_pair = [](int a, int b, int c, int d) {
      return (a == c && b == d) || (a == d && b == c);
    };
    switch (nd.type) {
      case SpqrType::Q:
        if (static_cast<int>(id) == t.root) {
          if (nd.edges.size() > 1) return false;
          if (nd.edges.size() == 1 && !same_pair(nd.edges[0].u, nd.edges[0].v, nd.s, nd.t))
            return false;
        } else if (!nd.edges.empty()) {
          return false;
        }
        break;
      case SpqrType::S: {
        if (nd.edges.size() < 2) return false;  // cycle length >= 3 with the reference edge
        if (nd.edges.front().u != nd.s || nd.edges.back().v != nd.t) return false;
        std::set<int> chain{nd.s};
        for (std::size_t i = 0; i < nd.edges.size(); ++i) {
          if (i + 1 < nd.edges.size() && nd.edges[i].v != nd.edges[i + 1].u) return false;
          if (i + 1 < nd.edges.size() && chain.count(nd.edges[i].v)) return false;
          chain.insert(nd.edges[i].v);
        }
        break;
      }
      case SpqrType::P:
        if (nd.edges.size() < 2) return false;  // bundle of >= 3 with the reference edge
        for (const auto& se : nd.edges)
          if (!same_pair(se.u, se.v, nd.s, nd.t)) return false;
        break;
      case SpqrType::R: {
        std::set<int> vs{nd.s, nd.t};
        for (const auto& se : nd.edges) {
          vs.insert(se.u);
          vs.insert(se.v);
        }
        std::vector<int> verts(vs.begin(), vs.end());
        std::map<int, int> inv;
        for (std::size_t i = 0; i < verts.size(); ++i) inv[verts[i]] = static_cast<int>(i);
        Graph skel(static_cast<int>(verts.size()));
        try {
          skel.add_edge(inv.at(nd.s), inv.at(nd.t));
          for (const auto& se : nd.edges) skel.add_edge(inv.at(se.u), inv.at(se.v));
        } catch (const GraphError&) {
          return false;  // parallel skeleton edges
        }
        if (!is_triconnected(skel)) return false;
        break;
      }
    }
    for (const auto& se : nd.edges) {
      if (se.child < 0) {
        if (nd.type != SpqrType::Q) return false;
        continue;
      }
      const SpqrNode& ch = t.nodes[static_cast<std::size_t>(se.child)];
      if (ch.parent != static_cast<int>(id)) return false;
      if (!same_pair(ch.s, ch.t, se.u, se.v)) return false;
      if ((nd.type == SpqrType::S && ch.type == SpqrType::S) ||
          (nd.type == SpqrType::P && ch.type == SpqrType::P))
        return false;
    }
  }
  return true;
}

}  // namespace slopes
