#include "slopes/bi_drawer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "slopes/tri_drawer.hpp"

namespace slopes {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw InvariantViolation(what);
}

std::pair<int, int> norm(int a, int b) { return {std::min(a, b), std::max(a, b)}; }

bool trivial_payload(const EdgePayload& p) {
  return p.chip.empty() && p.has_real && p.d_lo == 1 && p.d_hi == 1;
}

/// Canonical order of a skeleton given by original vertex ids (the graph may
/// contain isolated ids); computed on a compacted copy with an outer face
/// containing the pole edge, then translated back.
CanonicalOrder skeleton_order(const Graph& skel, int s, int t) {
  std::vector<int> ids;
  std::vector<int> comp(static_cast<std::size_t>(skel.n()), -1);
  for (int v = 0; v < skel.n(); ++v)
    if (skel.degree(v) > 0) {
      comp[static_cast<std::size_t>(v)] = static_cast<int>(ids.size());
      ids.push_back(v);
    }
  Graph cg(static_cast<int>(ids.size()));
  for (auto [u, v] : skel.edges())
    cg.add_edge(comp[static_cast<std::size_t>(u)], comp[static_cast<std::size_t>(v)]);
  auto emb = planar_embed(cg);
  require(emb.has_value(), "skeleton of a planar graph must be planar");
  int cs = comp[static_cast<std::size_t>(s)], ct = comp[static_cast<std::size_t>(t)];
  auto faces = emb->faces();
  int pick = -1;
  for (std::size_t i = 0; i < faces.size() && pick < 0; ++i)
    for (auto [u, v] : faces[i].boundary)
      if ((u == cs && v == ct) || (u == ct && v == cs)) {
        pick = static_cast<int>(i);
        break;
      }
  require(pick >= 0, "pole edge missing from the skeleton embedding");
  emb->outer_face = pick;
  CanonicalOrder co = canonical_order(*emb, cs, ct);
  co.v1 = ids[static_cast<std::size_t>(co.v1)];
  co.v2 = ids[static_cast<std::size_t>(co.v2)];
  co.vn = ids[static_cast<std::size_t>(co.vn)];
  for (auto& part : co.parts)
    for (int& v : part) v = ids[static_cast<std::size_t>(v)];
  return co;
}

/// The shifting-algorithm driver: base row, then one chain or singleton per
/// canonical path. Identical to the triconnected pipeline but parameterized on
/// the construction graph (a skeleton here, with payloads already declared).
void drive_order(PartialDrawing& pd, const Graph& g, const CanonicalOrder& order) {
  std::vector<int> p1 = order.parts[1];
  if (p1.size() > 1 && !g.has_edge(order.v1, p1.front())) std::reverse(p1.begin(), p1.end());
  require(!p1.empty() && g.has_edge(order.v1, p1.front()) && g.has_edge(p1.back(), order.v2),
          "first path does not span the base pair");
  pd.place_base_row(p1);

  for (std::size_t k = 2; k < order.parts.size(); ++k) {
    const auto& part = order.parts[k];
    if (part.size() == 1) {
      int v = part[0];
      std::vector<int> nbrs;
      for (int w : g.neighbors(v))
        if (pd.placed(w)) nbrs.push_back(w);
      std::sort(nbrs.begin(), nbrs.end(),
                [&](int a, int b) { return pd.contour_pos(a) < pd.contour_pos(b); });
      if (nbrs.size() == 2)
        pd.place_chain(part, nbrs[0], nbrs[1]);
      else
        pd.place_singleton(v, nbrs);
    } else {
      std::vector<int> chain = part;
      auto sole_drawn = [&](int v) {
        int found = -1;
        for (int w : g.neighbors(v))
          if (pd.placed(w)) {
            require(found == -1, "chain end with two drawn neighbors");
            found = w;
          }
        require(found != -1, "chain end with no drawn neighbor");
        return found;
      };
      int ul = sole_drawn(chain.front());
      int ur = sole_drawn(chain.back());
      if (pd.contour_pos(ul) > pd.contour_pos(ur)) {
        std::reverse(chain.begin(), chain.end());
        std::swap(ul, ur);
      }
      pd.place_chain(chain, ul, ur);
    }
  }
}

/// Longest circular run of unused rays.
int max_free_run(const std::set<int>& used, int total) {
  if (used.empty()) return total;
  int best = 0, run = 0;
  for (int i = 0; i < 2 * total; ++i) {
    if (used.count(i % total))
      run = 0;
    else
      best = std::max(best, ++run);
  }
  return std::min(best, total - static_cast<int>(used.size()));
}

/// Completion at the root edge (rs, rt): the root child's chip sits far to the
/// right of pole rs, whose pertinent edges fan out on the lowest top rays
/// {0, .., deg-2}; pole rt closes the right side symmetrically and the real
/// root edge runs below the base line on rays 2s-1 / s+1. The pole-to-chip
/// distances are chosen so that the entire drawing stays inside the angular
/// range [-pi/s, (deg(rs) - 3/2) pi/s] around rs: together with the closing
/// ray, rs's edges cover deg(rs) consecutive rays (K.2) and a parent drawing
/// can rotate the whole block onto any fan of deg(rs) free rays at a shared
/// cut vertex without leaving the fan's wedge.
Drawing complete_anchored(Chip chip, int rs, int rt, const Graph& g, const SlopeSet& ss,
                          const std::map<int, int>& reserved) {
  const int s = ss.count();
  const double step = ss.resolution();
  chip = orient_chip(chip, rs, ss);
  const int dl = g.degree(rs) - 1, dr = g.degree(rt) - 1;
  require(static_cast<int>(chip.left_pins.size()) == dl &&
              static_cast<int>(chip.right_pins.size()) == dr,
          "pin counts disagree with the pole degrees");
  const double h = chip.rect.height();
  const double cot1 = std::cos(step) / std::sin(step);
  const double cot_half = std::cos(step / 2) / std::sin(step / 2);
  const double margin = 1.4 * cot1 + 2.0;
  chip = translate_chip(chip, (h + 2.0) * cot_half + margin - chip.rect.x0, -chip.rect.y0);
  const Point ps{0.0, 0.0};
  const Point pt{chip.rect.x1 + h * cot1 + margin, 0.0};

  std::vector<int> rays_l(static_cast<std::size_t>(dl)), rays_r(static_cast<std::size_t>(dr));
  for (int i = 0; i < dl; ++i) rays_l[static_cast<std::size_t>(i)] = i;
  for (int i = 0; i < dr; ++i) rays_r[static_cast<std::size_t>(i)] = s - i;
  auto fans_l = draw_edges_to_pole(chip, ps, rs, ChipSide::Left, rays_l, ss);
  auto fans_r = draw_edges_to_pole(chip, pt, rt, ChipSide::Right, rays_r, ss);

  Drawing d(ss);
  d.coords.assign(static_cast<std::size_t>(g.n()), Point{});
  for (const auto& [v, p] : chip.coords) d.coords[static_cast<std::size_t>(v)] = p;
  d.coords[static_cast<std::size_t>(rs)] = ps;
  d.coords[static_cast<std::size_t>(rt)] = pt;
  auto push = [&](const EdgeGeom& eg) {
    PolylineEdge pe;
    pe.u = eg.a;
    pe.v = eg.b;
    pe.bend = eg.bend;
    d.edges.push_back(pe);
  };
  for (const auto& [k, eg] : chip.content) push(eg);
  for (const auto& eg : fans_l) push(eg);
  for (const auto& eg : fans_r) push(eg);
  PolylineEdge root;  // the real root edge, closed below the base line
  root.u = rs;
  root.v = rt;
  root.bend = Point{pt.x / 2.0, -(pt.x / 2.0) * std::tan(step)};
  d.edges.push_back(root);
  require(static_cast<int>(d.edges.size()) == g.m(), "edge count mismatch after completion");

  const double hi = (dl - 0.5) * step + 1e-9;
  auto inside = [&](const Point& p) {
    double a = std::atan2(p.y, p.x);
    return a >= -step - 1e-9 && a <= hi;
  };
  require(inside(pt), "drawing leaks out of the pole wedge");
  for (const auto& [v, p] : chip.coords) require(inside(p), "drawing leaks out of the pole wedge");
  for (const auto& e : d.edges)
    if (e.bend) require(inside(*e.bend), "drawing leaks out of the pole wedge");

  auto used_at = [&](int v) {
    if (v == rs || v == rt) {
      std::set<int> u{v == rs ? 2 * s - 1 : s + 1};
      for (int r : (v == rs ? rays_l : rays_r)) u.insert(r);
      return u;
    }
    auto it = chip.rays.find(v);
    return it == chip.rays.end() ? std::set<int>{} : it->second;
  };
  for (const auto& [v, cnt] : reserved)
    if (cnt > 0)
      require(max_free_run(used_at(v), ss.ray_count()) >= cnt, "reservation not honored");
  return d;
}

}  // namespace

Chip compose_P(const std::vector<Chip>& children, int s_pole, int t_pole, const SlopeSet& ss) {
  require(!children.empty(), "parallel stack without components");
  std::vector<Chip> kids;
  double w = 0.0;
  for (const Chip& ch : children) {
    require(!ch.empty(), "empty chip in a parallel stack");
    kids.push_back(orient_chip(ch, s_pole, ss));
    w = std::max(w, kids.back().rect.width());
  }
  Chip out;
  out.s_pole = s_pole;
  out.t_pole = t_pole;
  double y = 0.0;
  for (Chip& ch : kids) {
    ch = translate_chip(ch, -ch.rect.x0, y - ch.rect.y0);
    ch = widen_chip(ch, w - ch.rect.width(), /*right_side=*/true);
    for (const auto& [v, p] : ch.coords)
      require(out.coords.emplace(v, p).second, "parallel components share a vertex");
    for (const auto& [k, eg] : ch.content)
      require(out.content.emplace(k, eg).second, "parallel components share an edge");
    for (const auto& [v, rs] : ch.rays) out.rays[v] = rs;
    out.left_pins.insert(out.left_pins.end(), ch.left_pins.begin(), ch.left_pins.end());
    out.right_pins.insert(out.right_pins.end(), ch.right_pins.begin(), ch.right_pins.end());
    y = ch.rect.y1 + 0.5;
  }
  out.rect = {0.0, 0.0, w, y - 0.5};
  return out;
}

Chip compose_S(const std::vector<int>& chain, const std::vector<EdgePayload>& children,
               const SlopeSet& ss) {
  require(chain.size() >= 3 && children.size() + 1 == chain.size(),
          "series chain needs at least one interior vertex");
  int n = 0;
  for (int v : chain) n = std::max(n, v + 1);
  for (const EdgePayload& p : children)
    for (const auto& [v, q] : p.chip.coords) n = std::max(n, v + 1);
  Graph skg(n);
  for (std::size_t i = 0; i + 1 < chain.size(); ++i) skg.add_edge(chain[i], chain[i + 1]);
  skg.add_edge(chain.front(), chain.back());  // reference edge, never drawn
  PartialDrawing pd(skg, ss, chain.front(), chain.back());
  for (std::size_t i = 0; i + 1 < chain.size(); ++i)
    if (!trivial_payload(children[i])) pd.set_payload(chain[i], chain[i + 1], children[i]);
  pd.place_base_row(std::vector<int>(chain.begin() + 1, chain.end() - 1));
  return pd.to_chip();
}

Chip compose_R(const Graph& skel, int s_pole, int t_pole,
               const std::map<std::pair<int, int>, EdgePayload>& payloads, const SlopeSet& ss) {
  require(skel.has_edge(s_pole, t_pole), "skeleton lacks its pole edge");
  // The working graph must cover the chip-content vertex ids as well.
  int n = skel.n();
  for (const auto& [k, p] : payloads)
    for (const auto& [v, q] : p.chip.coords) n = std::max(n, v + 1);
  Graph skg(n);
  for (auto [u, v] : skel.edges()) skg.add_edge(u, v);
  CanonicalOrder co = skeleton_order(skg, s_pole, t_pole);
  PartialDrawing pd(skg, ss, s_pole, t_pole);
  for (const auto& [k, p] : payloads)
    if (!trivial_payload(p)) pd.set_payload(k.first, k.second, p);
  drive_order(pd, skg, co);
  return pd.to_chip();
}

Drawing draw_biconnected(const Graph& g, const SlopeSet& ss, const std::map<int, int>& reserved,
                         std::optional<int> parent_vertex) {
  const int s = ss.count();
  auto res_at = [&](int v) {
    auto it = reserved.find(v);
    return it == reserved.end() ? 0 : it->second;
  };
  for (int v = 0; v < g.n(); ++v)
    if (g.degree(v) + res_at(v) > s + 1)
      throw DegreeBudgetExceeded("degree plus reservation exceeds the ray budget");
  if (!is_biconnected(g)) throw NotBiconnected("input graph is not biconnected");
  if (parent_vertex) require(*parent_vertex >= 0 && *parent_vertex < g.n(), "parent vertex out of range");

  if (g.n() == 2) {  // a single edge: one horizontal segment, no SPQR needed
    Drawing d(ss);
    d.coords = {Point{0.0, 0.0}, Point{10.0, 0.0}};
    PolylineEdge pe;
    pe.u = 0;
    pe.v = 1;
    d.edges.push_back(pe);
    return d;
  }

  std::pair<int, int> root_edge;
  if (parent_vertex) {
    int nb = std::numeric_limits<int>::max();
    for (int w : g.neighbors(*parent_vertex)) nb = std::min(nb, w);
    root_edge = {*parent_vertex, nb};
  } else {
    root_edge = {g.n(), g.n()};
    for (auto [u, v] : g.edges()) root_edge = std::min(root_edge, norm(u, v));
  }
  const int rs = root_edge.first, rt = root_edge.second;

  SpqrTree tree = build_spqr(g, root_edge);
  const SpqrNode& root = tree.nodes[static_cast<std::size_t>(tree.root)];
  require(root.type == SpqrType::Q && root.edges.size() == 1, "malformed decomposition root");
  const int rc = root.edges[0].child;

  // Whether a node's pertinent graph contains the real edge joining its poles:
  // a real parallel edge always lands in a Q-leaf under a P-node.
  auto node_real = [&](int nd) {
    const SpqrNode& n = tree.nodes[static_cast<std::size_t>(nd)];
    if (n.type == SpqrType::Q) return true;
    if (n.type != SpqrType::P) return false;
    for (const SkelEdge& e : n.edges)
      if (tree.nodes[static_cast<std::size_t>(e.child)].type == SpqrType::Q) return true;
    return false;
  };

  std::vector<Chip> chips(tree.nodes.size());
  auto payload_for = [&](const SkelEdge& e) {
    EdgePayload p;
    if (tree.nodes[static_cast<std::size_t>(e.child)].type == SpqrType::Q) return p;
    auto k = norm(e.u, e.v);
    p.chip = chips[static_cast<std::size_t>(e.child)];
    p.has_real = node_real(e.child);
    p.d_lo = tree.pertinent_degree(e.child, k.first);
    p.d_hi = tree.pertinent_degree(e.child, k.second);
    return p;
  };
  auto s_chain = [&](const SpqrNode& n) {
    std::vector<int> chain{n.s};
    int cur = n.s;
    for (const SkelEdge& e : n.edges) {
      require(e.u == cur || e.v == cur, "series skeleton out of chain order");
      cur = (e.u == cur) ? e.v : e.u;
      chain.push_back(cur);
    }
    require(cur == n.t, "series chain does not end at the far pole");
    return chain;
  };

  // Bottom-up chip composition (iterative: the tree can be deep).
  std::vector<int> topo{rc};
  for (std::size_t i = 0; i < topo.size(); ++i)
    for (const SkelEdge& e : tree.nodes[static_cast<std::size_t>(topo[i])].edges)
      topo.push_back(e.child);
  for (auto it = topo.rbegin(); it != topo.rend(); ++it) {
    int nd = *it;
    const SpqrNode& n = tree.nodes[static_cast<std::size_t>(nd)];
    switch (n.type) {
      case SpqrType::Q:
        break;  // empty sentinel chip
      case SpqrType::P: {
        std::vector<Chip> kids;
        for (const SkelEdge& e : n.edges)
          if (tree.nodes[static_cast<std::size_t>(e.child)].type != SpqrType::Q)
            kids.push_back(chips[static_cast<std::size_t>(e.child)]);
        chips[static_cast<std::size_t>(nd)] = compose_P(kids, n.s, n.t, ss);
        break;
      }
      case SpqrType::S: {
        std::vector<int> chain = s_chain(n);
        std::vector<EdgePayload> pays;
        for (const SkelEdge& e : n.edges) pays.push_back(payload_for(e));
        chips[static_cast<std::size_t>(nd)] = compose_S(chain, pays, ss);
        break;
      }
      case SpqrType::R: {
        Graph skg(g.n());
        std::map<std::pair<int, int>, EdgePayload> pmap;
        for (const SkelEdge& e : n.edges) {
          skg.add_edge(e.u, e.v);
          pmap[norm(e.u, e.v)] = payload_for(e);
        }
        skg.add_edge(n.s, n.t);
        chips[static_cast<std::size_t>(nd)] = compose_R(skg, n.s, n.t, pmap, ss);
        break;
      }
    }
  }

  // Root completion: the root child's chip with the reference-edge ends as
  // poles, closed by the real root edge below the base line. A Q root child
  // (bare edge) cannot occur past the n == 2 case, and a real parallel edge
  // beside the root edge would make the graph non-simple.
  require(tree.nodes[static_cast<std::size_t>(rc)].type != SpqrType::Q && !node_real(rc),
          "root child cannot duplicate the root edge");
  return complete_anchored(std::move(chips[static_cast<std::size_t>(rc)]), rs, rt, g, ss,
                           reserved);
}

}  // namespace slopes
