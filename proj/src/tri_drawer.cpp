#include "slopes/tri_drawer.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <set>

namespace slopes {

namespace {

constexpr double kDirTol = 1e-6;   // radians; drawn directions are near-exact
constexpr double kFlatTol = 1e-6;  // |dy| below this counts as horizontal

void require(bool ok, const char* what) {
  if (!ok) throw InvariantViolation(what);
}

double angle_of(const Point& from, const Point& to) {
  double a = std::atan2(to.y - from.y, to.x - from.x);
  if (a < 0) a += 2 * kPi;
  return a;
}

}  // namespace

PartialDrawing::PartialDrawing(const Graph& g, SlopeSet ss, int v1, int v2)
    : g_(g),
      ss_(std::move(ss)),
      v1_(v1),
      v2_(v2),
      coords_(static_cast<std::size_t>(g.n())),
      placed_(static_cast<std::size_t>(g.n()), false),
      rays_used_(static_cast<std::size_t>(g.n())),
      succ_b_(static_cast<std::size_t>(g.n()), 0),
      pred_b_(static_cast<std::size_t>(g.n()), ss_.count()) {
  if (g.max_degree() > ss_.count() + 1) throw RayBudgetExceeded("slope set too small for max degree");
}

const EdgeGeom& PartialDrawing::geom(int a, int b) const {
  auto it = edges_.find(key(a, b));
  require(it != edges_.end(), "edge not drawn");
  return it->second;
}

void PartialDrawing::set_payload(int a, int b, EdgePayload p) {
  require(g_.has_edge(a, b), "payload on a non-edge");
  require(contour_.empty(), "payloads must precede placement");
  require(p.d_lo >= 1 && p.d_hi >= 1, "payload demand below one");
  payloads_[key(a, b)] = std::move(p);
  lenient_ = true;
}

void PartialDrawing::set_reserved(int v, int count) {
  require(count >= 0, "negative reservation");
  reserved_[v] = count;
}

const EdgePayload* PartialDrawing::payload(int a, int b) const {
  auto it = payloads_.find(key(a, b));
  return it == payloads_.end() ? nullptr : &it->second;
}

int PartialDrawing::demand(int a, int b) const {
  const EdgePayload* pe = payload(a, b);
  if (!pe) return 1;
  return a < b ? pe->d_lo : pe->d_hi;
}

bool PartialDrawing::edge_real(int a, int b) const {
  const EdgePayload* pe = payload(a, b);
  return pe ? pe->has_real : true;
}

int PartialDrawing::pending_demand(int v) const {
  int need = 0;
  for (int w : g_.neighbors(v))
    if (!placed_[static_cast<std::size_t>(w)]) need += demand(v, w);
  auto it = reserved_.find(v);
  if (it != reserved_.end()) need += it->second;
  return need;
}

int PartialDrawing::instantiate_chip(const Chip& c) {
  PlacedChip pc;
  pc.rect = c.rect;
  for (const auto& [v, p] : c.coords) {
    require(!placed_[static_cast<std::size_t>(v)], "chip vertex already placed");
    coords_[static_cast<std::size_t>(v)] = p;
    placed_[static_cast<std::size_t>(v)] = true;
    pc.members.push_back(v);
  }
  for (const auto& [v, rs] : c.rays)
    for (int r : rs) {
      require(!rays_used_[static_cast<std::size_t>(v)].count(r), "chip ray already occupied");
      rays_used_[static_cast<std::size_t>(v)].insert(r);
    }
  for (const auto& [k, eg] : c.content) {
    auto kk = key(eg.a, eg.b);
    require(!edges_.count(kk), "chip content edge drawn twice");
    edges_[kk] = eg;
  }
  chip_rects_.push_back(std::move(pc));
  return static_cast<int>(chip_rects_.size()) - 1;
}

void PartialDrawing::add_fan_geom(EdgeGeom eg) {
  auto k = key(eg.a, eg.b);
  require(!edges_.count(k), "fan edge drawn twice");
  mark_ray(eg.a, eg.ray_a);  // pin-side stub ray was imported with the chip
  edges_[k] = std::move(eg);
}

double PartialDrawing::fan_margin() const {
  double c = std::cos(ss_.resolution()) / std::sin(ss_.resolution());
  return 1.4 * c + 1.0;
}

void PartialDrawing::add_edge_geom(EdgeGeom eg) {
  require(lenient_ || g_.has_edge(eg.a, eg.b), "drawing a non-edge");
  auto k = key(eg.a, eg.b);
  require(!edges_.count(k), "edge drawn twice");
  mark_ray(eg.a, eg.ray_a);
  mark_ray(eg.b, eg.ray_b);
  if (eg.bend) {
    // A bend that does not change direction is no bend at all.
    const Point& pa = coords_[static_cast<std::size_t>(eg.a)];
    const Point& pb = coords_[static_cast<std::size_t>(eg.b)];
    double a1 = angle_of(pa, *eg.bend);
    double a2 = angle_of(*eg.bend, pb);
    double diff = std::fabs(a1 - a2);
    diff = std::min(diff, 2 * kPi - diff);
    if (diff < kDirTol) eg.bend.reset();
  }
  edges_[k] = std::move(eg);
}

int PartialDrawing::contour_pos(int v) const {
  auto it = std::find(contour_.begin(), contour_.end(), v);
  require(it != contour_.end(), "vertex not on contour");
  return static_cast<int>(it - contour_.begin());
}

int PartialDrawing::succ_ray(int pos) const {
  return succ_b_[static_cast<std::size_t>(contour_[static_cast<std::size_t>(pos)])];
}

int PartialDrawing::pred_ray(int pos) const {
  return pred_b_[static_cast<std::size_t>(contour_[static_cast<std::size_t>(pos)])];
}

double PartialDrawing::max_y() const {
  double y = 0.0;
  for (int v = 0; v < g_.n(); ++v)
    if (placed_[static_cast<std::size_t>(v)]) y = std::max(y, coords_[static_cast<std::size_t>(v)].y);
  for (const auto& [k, eg] : edges_)
    if (eg.bend) y = std::max(y, eg.bend->y);
  for (const auto& pc : chip_rects_) y = std::max(y, pc.rect.y1);
  return y;
}

Point PartialDrawing::ray_point(int v, int ray, double at_y) const {
  Ray r{coords_[static_cast<std::size_t>(v)], ss_.ray_angle(ray)};
  auto p = ray_line_intersection(r, at_y);
  require(p.has_value(), "ray does not reach requested height");
  return *p;
}

void PartialDrawing::mark_ray(int v, int ray) {
  require(ray >= 0 && ray < ss_.ray_count(), "ray index out of range");
  auto& used = rays_used_[static_cast<std::size_t>(v)];
  require(!used.count(ray), "ray already occupied");
  used.insert(ray);
}

std::vector<int> PartialDrawing::free_outer_rays(int v) const {
  int pos = contour_pos(v);
  int rs = succ_ray(pos);
  int rp = pred_ray(pos);
  require(rs >= 0 && rs < ss_.count(), "contour successor direction below horizon");
  require(rp > 0 && rp <= ss_.count(), "contour predecessor direction below horizon");
  require(rs <= rp, "contour sector inverted");
  std::vector<int> out;
  const auto& used = rays_used_[static_cast<std::size_t>(v)];
  for (int r = rs + 1; r < rp; ++r)
    if (!used.count(r)) out.push_back(r);
  return out;
}

std::vector<std::pair<Segment, Point>> PartialDrawing::ray_hits(int u, int ray) const {
  const Point o = coords_[static_cast<std::size_t>(u)];
  double lo_x = o.x, hi_x = o.x, lo_y = o.y, hi_y = o.y;
  auto grow = [&](const Point& p) {
    lo_x = std::min(lo_x, p.x);
    hi_x = std::max(hi_x, p.x);
    lo_y = std::min(lo_y, p.y);
    hi_y = std::max(hi_y, p.y);
  };
  for (int v = 0; v < g_.n(); ++v)
    if (placed_[static_cast<std::size_t>(v)]) grow(coords_[static_cast<std::size_t>(v)]);
  for (const auto& [k, eg] : edges_)
    if (eg.bend) grow(*eg.bend);
  for (const auto& pc : chip_rects_) {
    grow(Point{pc.rect.x0, pc.rect.y0});
    grow(Point{pc.rect.x1, pc.rect.y1});
  }
  double reach = 4.0 * (std::hypot(hi_x - lo_x, hi_y - lo_y) + 10.0);
  double th = ss_.ray_angle(ray);
  Point far{o.x + reach * std::cos(th), o.y + reach * std::sin(th)};
  Segment rs{o, far};

  std::vector<std::pair<Segment, Point>> out;
  // Chip boxes are opaque: a free ray may not thread through one even where
  // the content is sparse. Their sides count as obstructions.
  std::vector<Segment> box_sides;
  for (const auto& pc : chip_rects_) {
    Point c00{pc.rect.x0, pc.rect.y0}, c10{pc.rect.x1, pc.rect.y0};
    Point c11{pc.rect.x1, pc.rect.y1}, c01{pc.rect.x0, pc.rect.y1};
    box_sides.push_back({c00, c10});
    box_sides.push_back({c10, c11});
    box_sides.push_back({c11, c01});
    box_sides.push_back({c01, c00});
  }
  for (const Segment& sg : box_sides) {
    if (!segments_properly_intersect(rs, sg, kGeomEps, {o})) continue;
    double d1x = far.x - o.x, d1y = far.y - o.y;
    double d2x = sg.b.x - sg.a.x, d2y = sg.b.y - sg.a.y;
    double den = d1x * d2y - d1y * d2x;
    Point hit = sg.a;
    if (std::fabs(den) > 1e-12) {
      double t = ((sg.a.x - o.x) * d2y - (sg.a.y - o.y) * d2x) / den;
      hit = Point{o.x + t * d1x, o.y + t * d1y};
    }
    out.push_back({sg, hit});
  }
  for (const auto& [k, eg] : edges_) {
    const Point pa = coords_[static_cast<std::size_t>(eg.a)];
    const Point pb = coords_[static_cast<std::size_t>(eg.b)];
    std::vector<Segment> segs;
    if (eg.bend)
      segs = {{pa, *eg.bend}, {*eg.bend, pb}};
    else
      segs = {{pa, pb}};
    for (const Segment& sg : segs) {
      if (!segments_properly_intersect(rs, sg, kGeomEps, {o})) continue;
      // Intersection of the two supporting lines; for (near-)parallel overlap
      // fall back to a segment endpoint, which is good enough for sizing.
      double d1x = far.x - o.x, d1y = far.y - o.y;
      double d2x = sg.b.x - sg.a.x, d2y = sg.b.y - sg.a.y;
      double den = d1x * d2y - d1y * d2x;
      Point hit = sg.a;
      if (std::fabs(den) > 1e-12) {
        double t = ((sg.a.x - o.x) * d2y - (sg.a.y - o.y) * d2x) / den;
        hit = Point{o.x + t * d1x, o.y + t * d1y};
      }
      out.push_back({sg, hit});
    }
  }
  return out;
}

int PartialDrawing::ray_crossing_count(int u, int ray) const {
  return static_cast<int>(ray_hits(u, ray).size());
}

double PartialDrawing::place_flat_edge(int a, int b, double y,
                                       std::optional<std::pair<int, int>> down) {
  const int s = ss_.count();
  const EdgePayload* pe = payload(a, b);
  const Point pa = coords_[static_cast<std::size_t>(a)];
  int dA = demand(a, b), dB = demand(b, a);
  auto place_b = [&](double xb) {
    require(!placed_[static_cast<std::size_t>(b)], "flat edge target already placed");
    coords_[static_cast<std::size_t>(b)] = Point{xb, y};
    placed_[static_cast<std::size_t>(b)] = true;
  };
  SkelRec rec{down, {}, -1};
  if (!pe || pe->chip.empty()) {
    require(!pe || pe->has_real, "empty child without a real edge");
    place_b(pa.x + 10.0);
    add_edge_geom(EdgeGeom{a, b, std::nullopt, down, 0, s});
    rec.expansion = {key(a, b)};
  } else {
    bool real = pe->has_real;
    require(dA <= s && dB <= s, "flat-edge fan leaves the top sector");
    Chip c = orient_chip(pe->chip, a, ss_);
    if (c.rect.height() > 1.0) c = scale_chip(c, 1.0 / c.rect.height());
    double lift = real ? 0.3 : 0.0;
    double fm = fan_margin();
    c = translate_chip(c, pa.x + fm - c.rect.x0, y + lift - c.rect.y0);
    place_b(c.rect.x1 + fm);
    rec.rect = instantiate_chip(c);
    if (real) {
      add_edge_geom(EdgeGeom{a, b, std::nullopt, down, 0, s});
      rec.expansion.push_back(key(a, b));
    }
    std::vector<int> raysA, raysB;
    for (int i = real ? 1 : 0; i < dA; ++i) raysA.push_back(i);
    for (int i = real ? 1 : 0; i < dB; ++i) raysB.push_back(s - i);
    for (auto& eg : draw_edges_to_pole(c, pa, a, ChipSide::Left, raysA, ss_)) add_fan_geom(eg);
    for (auto& eg :
         draw_edges_to_pole(c, coords_[static_cast<std::size_t>(b)], b, ChipSide::Right, raysB, ss_)) {
      rec.expansion.push_back(key(eg.a, eg.b));
      add_fan_geom(eg);
    }
  }
  succ_b_[static_cast<std::size_t>(a)] = dA - 1;
  pred_b_[static_cast<std::size_t>(b)] = s - (dB - 1);
  skel_[key(a, b)] = std::move(rec);
  return coords_[static_cast<std::size_t>(b)].x;
}

void PartialDrawing::place_base_row(const std::vector<int>& p1) {
  require(contour_.empty(), "base row placed twice");
  // An empty first path is only meaningful when the base pair itself carries a
  // chip (a stack of parallel components): the row is then that single edge.
  if (p1.empty()) {
    const EdgePayload* pe = payload(v1_, v2_);
    require(pe && !pe->chip.empty() && !pe->has_real, "empty first path");
  }
  contour_.push_back(v1_);
  contour_.insert(contour_.end(), p1.begin(), p1.end());
  contour_.push_back(v2_);
  require(!placed_[static_cast<std::size_t>(v1_)], "base vertex placed twice");
  coords_[static_cast<std::size_t>(v1_)] = Point{0.0, 0.0};
  placed_[static_cast<std::size_t>(v1_)] = true;
  succ_b_[static_cast<std::size_t>(v1_)] = 0;
  pred_b_[static_cast<std::size_t>(v1_)] = ss_.count();
  for (std::size_t i = 0; i + 1 < contour_.size(); ++i)
    place_flat_edge(contour_[i], contour_[i + 1], 0.0, std::nullopt);
}

std::vector<std::pair<int, int>> PartialDrawing::compute_cut(std::pair<int, int> contour_edge) const {
  std::vector<std::pair<int, int>> cut;
  std::set<std::pair<int, int>> seen;
  auto cur = key(contour_edge.first, contour_edge.second);
  while (true) {
    require(seen.insert(cur).second, "cyclic cut descent");
    cut.push_back(cur);
    auto it = skel_.find(cur);
    require(it != skel_.end(), "cut reached an unregistered edge");
    if (!it->second.down) break;
    cur = key(it->second.down->first, it->second.down->second);
  }
  return cut;
}

void PartialDrawing::stretch(std::pair<int, int> contour_edge, double sigma) {
  require(sigma >= 0.0, "negative stretch");
  if (sigma == 0.0) return;
  int u = contour_edge.first, v = contour_edge.second;
  int pu = contour_pos(u), pv = contour_pos(v);
  if (pu > pv) {
    std::swap(u, v);
    std::swap(pu, pv);
  }
  require(pv == pu + 1, "stretch target is not a contour edge");

  // Expand the skeleton-level cut into the real drawn edges it crosses.
  auto cut_list = compute_cut({u, v});
  std::set<std::pair<int, int>> cut;
  for (const auto& sk : cut_list) {
    auto it = skel_.find(sk);
    require(it != skel_.end(), "cut crosses an unregistered edge");
    for (const auto& e : it->second.expansion) cut.insert(e);
  }

  // Two-color the drawn graph without the cut edges: component of v1 stays,
  // the rest translates right. Adjacency comes from the drawn edges (content
  // edges need not exist in the skeleton graph), and every placed chip is a
  // rigid body: its members are welded together.
  std::map<int, std::vector<int>> adj;
  for (const auto& [k, eg] : edges_) {
    if (cut.count(k)) continue;
    adj[k.first].push_back(k.second);
    adj[k.second].push_back(k.first);
  }
  for (const auto& pc : chip_rects_)
    for (std::size_t i = 1; i < pc.members.size(); ++i) {
      adj[pc.members[0]].push_back(pc.members[i]);
      adj[pc.members[i]].push_back(pc.members[0]);
    }
  std::vector<char> side(static_cast<std::size_t>(g_.n()), 0);  // 0 unseen, 1 L, 2 R
  auto flood = [&](int start, char mark) {
    std::deque<int> q{start};
    side[static_cast<std::size_t>(start)] = mark;
    while (!q.empty()) {
      int x = q.front();
      q.pop_front();
      auto it = adj.find(x);
      if (it == adj.end()) continue;
      for (int y : it->second)
        if (side[static_cast<std::size_t>(y)] == 0) {
          side[static_cast<std::size_t>(y)] = mark;
          q.push_back(y);
        }
    }
  };
  flood(v1_, 1);
  require(side[static_cast<std::size_t>(v2_)] == 0, "cut does not separate the base pair");
  flood(v2_, 2);
  for (int w = 0; w < g_.n(); ++w)
    require(!placed_[static_cast<std::size_t>(w)] || side[static_cast<std::size_t>(w)] != 0,
            "cut leaves more than two parts");
  require(side[static_cast<std::size_t>(u)] == 1 && side[static_cast<std::size_t>(v)] == 2,
          "cut sides disagree with contour order");

  for (const auto& [k, eg] : edges_) {
    char sa = side[static_cast<std::size_t>(eg.a)], sb = side[static_cast<std::size_t>(eg.b)];
    if (cut.count(k)) {
      require(sa != sb, "cut edge does not straddle the cut");
      if (!eg.bend)
        require(std::fabs(coords_[static_cast<std::size_t>(eg.a)].y -
                          coords_[static_cast<std::size_t>(eg.b)].y) < kFlatTol,
                "crossed straight edge is not horizontal");
    } else {
      require(sa == sb, "uncut edge straddles the cut");
    }
  }

  // Bends first (horizontality decided by y only, unaffected by the shift).
  for (auto& [k, eg] : edges_) {
    if (!eg.bend) continue;
    char sa = side[static_cast<std::size_t>(eg.a)], sb = side[static_cast<std::size_t>(eg.b)];
    if (sa == sb) {
      if (sa == 2) eg.bend->x += sigma;
      continue;
    }
    double ya = coords_[static_cast<std::size_t>(eg.a)].y;
    double yb = coords_[static_cast<std::size_t>(eg.b)].y;
    bool a_flat = std::fabs(ya - eg.bend->y) < kFlatTol;
    bool b_flat = std::fabs(yb - eg.bend->y) < kFlatTol;
    require(a_flat != b_flat, "crossed bent edge lacks a unique horizontal segment");
    int steep_end = a_flat ? eg.b : eg.a;  // the bend rides with this endpoint
    if (side[static_cast<std::size_t>(steep_end)] == 2) eg.bend->x += sigma;
  }
  for (int w = 0; w < g_.n(); ++w)
    if (placed_[static_cast<std::size_t>(w)] && side[static_cast<std::size_t>(w)] == 2)
      coords_[static_cast<std::size_t>(w)].x += sigma;
  for (auto& pc : chip_rects_)
    if (!pc.members.empty() && side[static_cast<std::size_t>(pc.members[0])] == 2) {
      pc.rect.x0 += sigma;
      pc.rect.x1 += sigma;
    }
}

void PartialDrawing::clear_ray(int u, int ray) {
  int pos = contour_pos(u);
  double boost = 1.0;
  for (int iter = 0; iter < 80; ++iter) {
    auto hits = ray_hits(u, ray);
    if (hits.empty()) return;
    if (pos > 0) {
      double sig = 0.0;
      for (const auto& [sg, pt] : hits)
        sig = std::max(sig, std::max(sg.a.x, sg.b.x) - pt.x + 1.0);
      stretch({contour_[static_cast<std::size_t>(pos) - 1], u}, sig + boost);
      hits = ray_hits(u, ray);
      if (hits.empty()) return;
    }
    if (pos + 1 < static_cast<int>(contour_.size())) {
      double sig = 0.0;
      for (const auto& [sg, pt] : hits)
        sig = std::max(sig, pt.x - std::min(sg.a.x, sg.b.x) + 1.0);
      stretch({u, contour_[static_cast<std::size_t>(pos) + 1]}, sig + boost);
    }
    boost = std::min(boost * 2.0, 1e12);
  }
  throw InvariantViolation("ray clearing did not converge");
}

void PartialDrawing::clear_pair(int u_l, int r_l, int u_r, int r_r) {
  for (int iter = 0; iter < 40; ++iter) {
    clear_ray(u_l, r_l);
    clear_ray(u_r, r_r);
    if (ray_crossing_count(u_l, r_l) == 0 && ray_crossing_count(u_r, r_r) == 0) return;
  }
  throw InvariantViolation("could not clear ray pair");
}

void PartialDrawing::clear_set(const std::vector<std::pair<int, int>>& vertex_rays) {
  for (int iter = 0; iter < 60; ++iter) {
    for (const auto& [v, r] : vertex_rays) clear_ray(v, r);
    bool all = true;
    for (const auto& [v, r] : vertex_rays)
      if (ray_crossing_count(v, r) != 0) {
        all = false;
        break;
      }
    if (all) return;
  }
  throw InvariantViolation("could not clear ray set");
}

// Vertices leaving the contour must already have all their neighbors drawn,
// otherwise the order was invalid.
void PartialDrawing::check_coverable(int from_pos, int to_pos) const {
  for (int i = from_pos + 1; i < to_pos; ++i)
    for (int w : g_.neighbors(contour_[static_cast<std::size_t>(i)]))
      require(placed_[static_cast<std::size_t>(w)], "covered vertex keeps an undrawn neighbor");
}

// Largest y reached by the contour edges between two contour positions.
double PartialDrawing::contour_top(int from_pos, int to_pos) const {
  double y = 0.0;
  for (int i = from_pos; i < to_pos; ++i) {
    int a = contour_[static_cast<std::size_t>(i)], b = contour_[static_cast<std::size_t>(i) + 1];
    y = std::max({y, coords_[static_cast<std::size_t>(a)].y, coords_[static_cast<std::size_t>(b)].y});
    auto it = skel_.find(key(a, b));
    if (it != skel_.end() && it->second.rect >= 0)
      y = std::max(y, chip_rects_[static_cast<std::size_t>(it->second.rect)].rect.y1);
    auto eit = edges_.find(key(a, b));
    if (eit != edges_.end() && eit->second.bend) y = std::max(y, eit->second.bend->y);
  }
  return y;
}

void PartialDrawing::place_chain(const std::vector<int>& chain, int u_l, int u_r) {
  require(!chain.empty(), "empty chain");
  require(u_l != u_r, "chain attaches twice to one vertex");
  int pl = contour_pos(u_l);
  int pr = contour_pos(u_r);
  require(pl < pr, "chain attachments out of order");
  require(g_.has_edge(u_l, chain.front()) && g_.has_edge(chain.back(), u_r), "chain ends detached");
  check_coverable(pl, pr);

  auto nontrivial = [&](int a, int b) {
    const EdgePayload* pe = payload(a, b);
    return pe && (!pe->chip.empty() || pe->d_lo > 1 || pe->d_hi > 1 || !pe->has_real);
  };
  bool general = nontrivial(u_l, chain.front()) || nontrivial(chain.back(), u_r);
  for (std::size_t i = 0; i + 1 < chain.size(); ++i)
    if (nontrivial(chain[i], chain[i + 1])) general = true;
  if (general) return place_chain_general(chain, u_l, u_r);

  int r_a = succ_ray(pl) + 1;
  int r_c = pred_ray(pr) - 1;
  if (!ss_.is_top_ray(r_a) || r_a >= pred_ray(pl)) throw RayBudgetExceeded("no free ray at left attachment");
  if (!ss_.is_top_ray(r_c) || r_c <= succ_ray(pr)) throw RayBudgetExceeded("no free ray at right attachment");
  require(!rays_used_[static_cast<std::size_t>(u_l)].count(r_a), "left attachment ray occupied");
  require(!rays_used_[static_cast<std::size_t>(u_r)].count(r_c), "right attachment ray occupied");

  // Widening translates everything from the covered path onward.
  std::pair<int, int> first_below{contour_[static_cast<std::size_t>(pl)],
                                  contour_[static_cast<std::size_t>(pl) + 1]};
  double needed = static_cast<double>(chain.size()) + 1.0;
  Point pa, pc;
  double y_h = 0.0;
  for (int iter = 0;; ++iter) {
    require(iter < 40, "chain span did not stabilize");
    clear_pair(u_l, r_a, u_r, r_c);
    y_h = contour_top(pl, pr) + 1.0;
    pa = ray_point(u_l, r_a, y_h);
    pc = ray_point(u_r, r_c, y_h);
    double width = pc.x - pa.x;
    if (width >= needed) break;
    stretch(first_below, needed - width);
    if (ray_crossing_count(u_l, r_a) == 0 && ray_crossing_count(u_r, r_c) == 0) {
      pa = ray_point(u_l, r_a, y_h);
      pc = ray_point(u_r, r_c, y_h);
      break;
    }
  }

  double spacing = (pc.x - pa.x) / (static_cast<double>(chain.size()) + 1.0);
  for (std::size_t i = 0; i < chain.size(); ++i) {
    int v = chain[i];
    require(!placed_[static_cast<std::size_t>(v)], "chain vertex already placed");
    coords_[static_cast<std::size_t>(v)] = Point{pa.x + spacing * static_cast<double>(i + 1), y_h};
    placed_[static_cast<std::size_t>(v)] = true;
  }

  auto below = key(first_below.first, first_below.second);
  auto record = [&](int a, int b) { skel_[key(a, b)] = SkelRec{below, {key(a, b)}, -1}; };
  add_edge_geom(EdgeGeom{u_l, chain.front(), pa, below, r_a, ss_.count()});
  record(u_l, chain.front());
  for (std::size_t i = 0; i + 1 < chain.size(); ++i) {
    add_edge_geom(EdgeGeom{chain[i], chain[i + 1], std::nullopt, below, 0, ss_.count()});
    record(chain[i], chain[i + 1]);
  }
  add_edge_geom(EdgeGeom{chain.back(), u_r, pc, below, 0, r_c});
  record(chain.back(), u_r);

  succ_b_[static_cast<std::size_t>(u_l)] = r_a;
  pred_b_[static_cast<std::size_t>(u_r)] = r_c;
  for (int v : chain) {
    succ_b_[static_cast<std::size_t>(v)] = 0;
    pred_b_[static_cast<std::size_t>(v)] = ss_.count();
  }

  contour_.erase(contour_.begin() + pl + 1, contour_.begin() + pr);
  contour_.insert(contour_.begin() + pl + 1, chain.begin(), chain.end());
}

// Chain insertion with payloads: each attachment gets a fan of consecutive
// rays (one per pertinent edge), end chips sit on the shelf line next to the
// attachment fans, and interior edges are laid flat with their chips between
// the endpoints.
void PartialDrawing::place_chain_general(const std::vector<int>& chain, int u_l, int u_r) {
  const int s = ss_.count();
  int pl = contour_pos(u_l);
  int pr = contour_pos(u_r);
  int c0 = chain.front(), cz = chain.back();
  std::pair<int, int> first_below{contour_[static_cast<std::size_t>(pl)],
                                  contour_[static_cast<std::size_t>(pl) + 1]};
  auto below = key(first_below.first, first_below.second);

  const int dL = demand(u_l, c0);
  const int dR = demand(u_r, cz);
  const int base_l = succ_b_[static_cast<std::size_t>(u_l)] + 1;  // shallowest left fan ray
  const int base_r = pred_b_[static_cast<std::size_t>(u_r)] - 1;  // shallowest right fan ray
  if (base_l + dL - 1 > s - 1 || base_l + dL - 1 >= pred_b_[static_cast<std::size_t>(u_l)])
    throw RayBudgetExceeded("no free ray fan at left attachment");
  if (base_r - dR + 1 < 1 || base_r - dR + 1 <= succ_b_[static_cast<std::size_t>(u_r)])
    throw RayBudgetExceeded("no free ray fan at right attachment");
  std::vector<std::pair<int, int>> to_clear;
  for (int i = 0; i < dL; ++i) {
    require(!rays_used_[static_cast<std::size_t>(u_l)].count(base_l + i), "left fan ray occupied");
    to_clear.push_back({u_l, base_l + i});
  }
  for (int i = 0; i < dR; ++i) {
    require(!rays_used_[static_cast<std::size_t>(u_r)].count(base_r - i), "right fan ray occupied");
    to_clear.push_back({u_r, base_r - i});
  }

  const double fm = fan_margin();
  auto scaled_width = [&](int a, int b) {
    const EdgePayload* pe = payload(a, b);
    if (!pe || pe->chip.empty()) return 0.0;
    double h = pe->chip.rect.height();
    return pe->chip.rect.width() * (h > 1.0 ? 1.0 / h : 1.0);
  };
  double wtot = scaled_width(u_l, c0) + fm;
  for (std::size_t i = 0; i + 1 < chain.size(); ++i) {
    const EdgePayload* pe = payload(chain[i], chain[i + 1]);
    wtot += (!pe || pe->chip.empty()) ? 10.0 : 2.0 * fm + scaled_width(chain[i], chain[i + 1]);
  }
  wtot += fm + scaled_width(cz, u_r);

  // Find the shelf: rays clear, and enough room between the two fans for every
  // chip. Chips reach at most 1.3 above the shelf, so bounding the fan rays at
  // the shelf height and 1.5 above it keeps all bends outside the chip boxes.
  double y_h = 0.0, xL = 0.0, xR = 0.0;
  for (int iter = 0;; ++iter) {
    require(iter < 40, "chain shelf did not stabilize");
    clear_set(to_clear);
    y_h = contour_top(pl, pr) + 1.0;
    xL = -std::numeric_limits<double>::infinity();
    xR = std::numeric_limits<double>::infinity();
    for (int i = 0; i < dL; ++i)
      for (double yy : {y_h, y_h + 1.5}) xL = std::max(xL, ray_point(u_l, base_l + i, yy).x);
    for (int i = 0; i < dR; ++i)
      for (double yy : {y_h, y_h + 1.5}) xR = std::min(xR, ray_point(u_r, base_r - i, yy).x);
    xL += 1.0;
    xR -= 1.0;
    if (xR - xL >= wtot) break;
    stretch(first_below, wtot - (xR - xL) + 1.0);
  }

  auto prepare = [&](const EdgePayload* pe, int left_pole) {
    Chip c = orient_chip(pe->chip, left_pole, ss_);
    if (c.rect.height() > 1.0) c = scale_chip(c, 1.0 / c.rect.height());
    return c;
  };

  // Left end edge: u_l's fan, the chip at xL, then c0.
  {
    const EdgePayload* pe = payload(u_l, c0);
    bool real = edge_real(u_l, c0);
    bool have = pe && !pe->chip.empty();
    require(real || have, "virtual end edge without a chip");
    Chip c;
    double lift = real ? 0.3 : 0.0;
    if (have) {
      c = prepare(pe, u_l);
      c = translate_chip(c, xL - c.rect.x0, y_h + lift - c.rect.y0);
    }
    double x0 = xL + (have ? c.rect.width() : 0.0) + fm;
    require(!placed_[static_cast<std::size_t>(c0)], "chain vertex already placed");
    coords_[static_cast<std::size_t>(c0)] = Point{x0, y_h};
    placed_[static_cast<std::size_t>(c0)] = true;
    SkelRec rec{below, {}, -1};
    if (have) rec.rect = instantiate_chip(c);
    int dB = demand(c0, u_l);
    if (real) {
      Point bend = ray_point(u_l, base_l, y_h);
      require(bend.x < x0, "left end bend misplaced");
      add_edge_geom(EdgeGeom{u_l, c0, bend, below, base_l, s});
      rec.expansion.push_back(key(u_l, c0));
    }
    if (have) {
      std::vector<int> raysA, raysB;
      for (int i = real ? 1 : 0; i < dL; ++i) raysA.push_back(base_l + i);
      for (int i = real ? 1 : 0; i < dB; ++i) raysB.push_back(s - i);
      for (auto& eg : draw_edges_to_pole(c, coords_[static_cast<std::size_t>(u_l)], u_l,
                                         ChipSide::Left, raysA, ss_))
        add_fan_geom(eg);
      for (auto& eg : draw_edges_to_pole(c, coords_[static_cast<std::size_t>(c0)], c0,
                                         ChipSide::Right, raysB, ss_)) {
        rec.expansion.push_back(key(eg.a, eg.b));
        add_fan_geom(eg);
      }
    }
    pred_b_[static_cast<std::size_t>(c0)] = s - (dB - 1);
    skel_[key(u_l, c0)] = std::move(rec);
  }

  for (std::size_t i = 0; i + 1 < chain.size(); ++i)
    place_flat_edge(chain[i], chain[i + 1], y_h, below);

  // Right end edge: the chip after cz, then u_r's fan.
  {
    const EdgePayload* pe = payload(cz, u_r);
    bool real = edge_real(cz, u_r);
    bool have = pe && !pe->chip.empty();
    require(real || have, "virtual end edge without a chip");
    int dA = demand(cz, u_r);
    Chip c;
    double lift = real ? 0.3 : 0.0;
    SkelRec rec{below, {}, -1};
    double right_edge = coords_[static_cast<std::size_t>(cz)].x;
    if (have) {
      c = prepare(pe, cz);
      c = translate_chip(c, coords_[static_cast<std::size_t>(cz)].x + fm - c.rect.x0,
                         y_h + lift - c.rect.y0);
      require(c.rect.x1 <= xR, "right end chip off the shelf");
      right_edge = c.rect.x1;
      rec.rect = instantiate_chip(c);
    }
    if (real) {
      Point bend = ray_point(u_r, base_r, y_h);
      require(bend.x > right_edge, "right end bend misplaced");
      add_edge_geom(EdgeGeom{cz, u_r, bend, below, 0, base_r});
      rec.expansion.push_back(key(cz, u_r));
    }
    if (have) {
      std::vector<int> raysA, raysB;
      for (int i = real ? 1 : 0; i < dA; ++i) raysA.push_back(i);
      for (int i = real ? 1 : 0; i < dR; ++i) raysB.push_back(base_r - i);
      for (auto& eg : draw_edges_to_pole(c, coords_[static_cast<std::size_t>(cz)], cz,
                                         ChipSide::Left, raysA, ss_))
        add_fan_geom(eg);
      for (auto& eg : draw_edges_to_pole(c, coords_[static_cast<std::size_t>(u_r)], u_r,
                                         ChipSide::Right, raysB, ss_)) {
        rec.expansion.push_back(key(eg.a, eg.b));
        add_fan_geom(eg);
      }
    }
    succ_b_[static_cast<std::size_t>(cz)] = dA - 1;
    skel_[key(cz, u_r)] = std::move(rec);
  }

  succ_b_[static_cast<std::size_t>(u_l)] = base_l + dL - 1;
  pred_b_[static_cast<std::size_t>(u_r)] = base_r - dR + 1;

  contour_.erase(contour_.begin() + pl + 1, contour_.begin() + pr);
  contour_.insert(contour_.begin() + pl + 1, chain.begin(), chain.end());
}

void PartialDrawing::place_singleton(int vi, const std::vector<int>& nbrs) {
  const int d = static_cast<int>(nbrs.size());
  require(d >= 3, "singleton with fewer than three attachments");
  require(!placed_[static_cast<std::size_t>(vi)], "singleton already placed");
  const int s = ss_.count();

  std::vector<int> pos(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) pos[static_cast<std::size_t>(i)] = contour_pos(nbrs[static_cast<std::size_t>(i)]);
  for (int i = 0; i + 1 < d; ++i)
    require(pos[static_cast<std::size_t>(i)] < pos[static_cast<std::size_t>(i) + 1],
            "singleton attachments out of contour order");
  for (int w : nbrs) require(g_.has_edge(vi, w), "attachment is not a neighbor");
  for (int i = 0; i + 1 < d; ++i)
    check_coverable(pos[static_cast<std::size_t>(i)], pos[static_cast<std::size_t>(i) + 1]);

  for (int w : nbrs) {
    const EdgePayload* pe = payload(vi, w);
    if (pe && (!pe->chip.empty() || pe->d_lo > 1 || pe->d_hi > 1 || !pe->has_real))
      return place_singleton_general(vi, nbrs);
  }

  int u_l = nbrs[0];
  int u_r = nbrs[static_cast<std::size_t>(d) - 1];
  const int p0 = pos.front();
  const int pz = pos.back();
  // First contour edge of each covered stretch; cuts and widening stretches
  // between consecutive attachments act on these.
  auto gap_edge = [&](int i) {
    return std::pair<int, int>{contour_[static_cast<std::size_t>(pos[static_cast<std::size_t>(i)])],
                               contour_[static_cast<std::size_t>(pos[static_cast<std::size_t>(i)]) + 1]};
  };

  // Attachment rays: first free above the successor direction at u_l, first
  // free below the predecessor direction elsewhere.
  std::vector<int> ray(static_cast<std::size_t>(d));
  ray[0] = succ_ray(p0) + 1;
  if (!ss_.is_top_ray(ray[0]) || ray[0] >= pred_ray(p0))
    throw RayBudgetExceeded("no free ray at left attachment");
  for (int q = 1; q < d; ++q) {
    int pq = pos[static_cast<std::size_t>(q)];
    ray[static_cast<std::size_t>(q)] = pred_ray(pq) - 1;
    if (!ss_.is_top_ray(ray[static_cast<std::size_t>(q)]) ||
        ray[static_cast<std::size_t>(q)] <= succ_ray(pq))
      throw RayBudgetExceeded("no free ray at attachment");
  }
  for (int q = 0; q < d; ++q)
    require(!rays_used_[static_cast<std::size_t>(nbrs[static_cast<std::size_t>(q)])].count(
                ray[static_cast<std::size_t>(q)]),
            "attachment ray occupied");

  std::vector<Point> p(static_cast<std::size_t>(d));
  double y_h = 0.0;
  for (int round = 0;; ++round) {
    require(round < 40, "attachment points did not stabilize");
    for (int pass = 0;; ++pass) {
      require(pass < 40, "ray clearing did not stabilize");
      for (int q = 0; q < d; ++q)
        clear_ray(nbrs[static_cast<std::size_t>(q)], ray[static_cast<std::size_t>(q)]);
      bool all = true;
      for (int q = 0; q < d && all; ++q)
        all = ray_crossing_count(nbrs[static_cast<std::size_t>(q)], ray[static_cast<std::size_t>(q)]) == 0;
      if (all) break;
    }
    y_h = max_y() + 1.0;
    auto recompute = [&] {
      for (int q = 0; q < d; ++q)
        p[static_cast<std::size_t>(q)] =
            ray_point(nbrs[static_cast<std::size_t>(q)], ray[static_cast<std::size_t>(q)], y_h);
    };
    recompute();
    // Left-to-right ordering of the intersection points, enforced by stretches
    // of sigma+1 between consecutive attachments.
    for (int i = 0; i + 1 < d; ++i) {
      double rest = p[static_cast<std::size_t>(i) + 1].x;
      for (int j = i + 2; j < d; ++j) rest = std::min(rest, p[static_cast<std::size_t>(j)].x);
      if (p[static_cast<std::size_t>(i)].x < rest) continue;
      double sig = p[static_cast<std::size_t>(i)].x - rest + 1.0;
      stretch(gap_edge(i), sig);
      recompute();
    }
    bool clear = true;
    for (int q = 0; q < d && clear; ++q)
      clear = ray_crossing_count(nbrs[static_cast<std::size_t>(q)], ray[static_cast<std::size_t>(q)]) == 0;
    bool ordered = true;
    for (int i = 0; i + 1 < d && ordered; ++i)
      ordered = p[static_cast<std::size_t>(i)].x < p[static_cast<std::size_t>(i) + 1].x;
    if (clear && ordered) break;
  }

  // Bottom rays of vi, consecutive from the left horizontal; ascending index
  // meets the line y_h left to right.
  std::vector<double> cot(static_cast<std::size_t>(d) - 1);
  for (int q = 1; q < d - 1; ++q) {
    double th = ss_.ray_angle(s + q);
    cot[static_cast<std::size_t>(q)] = std::cos(th) / std::sin(th);
  }
  double span = p[static_cast<std::size_t>(d) - 2].x - p[1].x;
  double min_drop = 1.0;
  if (d > 3) {
    double min_diff = std::numeric_limits<double>::infinity();
    for (int q = 1; q + 1 < d - 1; ++q)
      min_diff = std::min(min_diff, cot[static_cast<std::size_t>(q)] - cot[static_cast<std::size_t>(q) + 1]);
    require(min_diff > 0, "bottom rays out of order");
    if (span > 0) min_drop = span / min_diff;
  }
  double y_v = y_h + 2.0 * min_drop;
  double x_v = p[1].x + (y_v - y_h) * cot[1];
  Point vpos{x_v, y_v};

  auto rho = [&](int q) {
    return Point{vpos.x + (y_h - y_v) * cot[static_cast<std::size_t>(q)], y_h};
  };

  // Align the remaining attachment points with the bottom-ray directions.
  for (int q = 2; q < d - 1; ++q) {
    Point pq = ray_point(nbrs[static_cast<std::size_t>(q)], ray[static_cast<std::size_t>(q)], y_h);
    double sig = rho(q).x - pq.x;
    require(sig > -kFlatTol, "attachment point overshot its target");
    if (sig > 0) stretch(gap_edge(q - 1), sig);
  }

  coords_[static_cast<std::size_t>(vi)] = vpos;
  placed_[static_cast<std::size_t>(vi)] = true;

  // Middle edges: attachment ray up to y_h, bottom ray of vi from there.
  for (int q = 1; q < d - 1; ++q) {
    int uq = nbrs[static_cast<std::size_t>(q)];
    Point bend = ray_point(uq, ray[static_cast<std::size_t>(q)], y_h);
    double want = ss_.ray_angle(s + q) - kPi;  // direction bend -> vi
    if (want < 0) want += 2 * kPi;
    require(std::fabs(angle_of(bend, vpos) - want) < kSlopeTol, "attachment point misaligned");
    add_edge_geom(EdgeGeom{vi, uq, bend, std::nullopt, s + q, ray[static_cast<std::size_t>(q)]});
    skel_[key(vi, uq)] = SkelRec{std::nullopt, {key(vi, uq)}, -1};
  }

  // End edges carry the horizontal segment through vi; make sure the cleared
  // rays meet that line on the correct side first.
  {
    Point hit = ray_point(u_l, ray[0], y_v);
    if (hit.x > vpos.x - 1.0) {
      stretch(gap_edge(0), hit.x - vpos.x + 1.0);
      vpos = coords_[static_cast<std::size_t>(vi)];
    }
    hit = ray_point(u_l, ray[0], y_v);
    require(hit.x < vpos.x, "left end ray on the wrong side");
    auto ge = gap_edge(0);
    add_edge_geom(EdgeGeom{u_l, vi, Point{hit.x, y_v}, key(ge.first, ge.second), ray[0], s});
    skel_[key(u_l, vi)] = SkelRec{key(ge.first, ge.second), {key(u_l, vi)}, -1};
  }
  {
    std::pair<int, int> last_below{contour_[static_cast<std::size_t>(pz) - 1],
                                   contour_[static_cast<std::size_t>(pz)]};
    Point hit = ray_point(u_r, ray[static_cast<std::size_t>(d) - 1], y_v);
    if (hit.x < vpos.x + 1.0) stretch(last_below, vpos.x + 1.0 - hit.x);
    hit = ray_point(u_r, ray[static_cast<std::size_t>(d) - 1], y_v);
    require(hit.x > vpos.x, "right end ray on the wrong side");
    add_edge_geom(EdgeGeom{vi, u_r, Point{hit.x, y_v}, key(last_below.first, last_below.second), 0,
                           ray[static_cast<std::size_t>(d) - 1]});
    skel_[key(vi, u_r)] =
        SkelRec{key(last_below.first, last_below.second), {key(vi, u_r)}, -1};
  }

  succ_b_[static_cast<std::size_t>(u_l)] = ray[0];
  pred_b_[static_cast<std::size_t>(u_r)] = ray[static_cast<std::size_t>(d) - 1];
  succ_b_[static_cast<std::size_t>(vi)] = 0;
  pred_b_[static_cast<std::size_t>(vi)] = s;

  contour_.erase(contour_.begin() + p0 + 1, contour_.begin() + pz);
  contour_.insert(contour_.begin() + p0 + 1, vi);
}

// Singleton insertion with payloads. Each attachment edge owns a block of
// consecutive rays at its neighbor and a block of rays at vi: bottom rays for
// the middle edges, the rays around the horizontals for the two end edges.
// Middle chips live in a thin strip just above the attachment line, between
// their neighbor's block and their bottom-ray block; end chips sit beside vi
// on its own line.
void PartialDrawing::place_singleton_general(int vi, const std::vector<int>& nbrs) {
  const int d = static_cast<int>(nbrs.size());
  const int s = ss_.count();
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<int> pos(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i)
    pos[static_cast<std::size_t>(i)] = contour_pos(nbrs[static_cast<std::size_t>(i)]);
  int u_l = nbrs[0];
  int u_r = nbrs[static_cast<std::size_t>(d) - 1];
  const int p0 = pos.front();
  const int pz = pos.back();
  auto gap_edge = [&](int i) {
    return std::pair<int, int>{contour_[static_cast<std::size_t>(pos[static_cast<std::size_t>(i)])],
                               contour_[static_cast<std::size_t>(pos[static_cast<std::size_t>(i)]) + 1]};
  };
  std::pair<int, int> last_below{contour_[static_cast<std::size_t>(pz) - 1],
                                 contour_[static_cast<std::size_t>(pz)]};

  // Per-edge ray demands: a_[q] at the neighbor, b_[q] at vi.
  std::vector<int> a_(static_cast<std::size_t>(d)), b_(static_cast<std::size_t>(d));
  std::vector<bool> real_(static_cast<std::size_t>(d));
  for (int q = 0; q < d; ++q) {
    int uq = nbrs[static_cast<std::size_t>(q)];
    a_[static_cast<std::size_t>(q)] = demand(uq, vi);
    b_[static_cast<std::size_t>(q)] = demand(vi, uq);
    real_[static_cast<std::size_t>(q)] = edge_real(uq, vi);
  }
  int K = 0;
  for (int q = 1; q < d - 1; ++q) K += b_[static_cast<std::size_t>(q)];
  if (K > s - 1 || b_[0] + b_[static_cast<std::size_t>(d) - 1] > s + 1)
    throw RayBudgetExceeded("apex ray budget exhausted");

  // Ray blocks at the neighbors, shallowest (left-to-right innermost) first.
  std::vector<std::vector<int>> blk(static_cast<std::size_t>(d));
  {
    int top = succ_b_[static_cast<std::size_t>(u_l)] + a_[0];
    if (top > s - 1 || top >= pred_b_[static_cast<std::size_t>(u_l)])
      throw RayBudgetExceeded("no free ray fan at left attachment");
    for (int i = 1; i <= a_[0]; ++i) blk[0].push_back(succ_b_[static_cast<std::size_t>(u_l)] + i);
  }
  for (int q = 1; q < d; ++q) {
    int uq = nbrs[static_cast<std::size_t>(q)];
    int low = pred_b_[static_cast<std::size_t>(uq)] - a_[static_cast<std::size_t>(q)];
    if (low < 1 || low <= succ_b_[static_cast<std::size_t>(uq)])
      throw RayBudgetExceeded("no free ray fan at attachment");
    for (int i = 1; i <= a_[static_cast<std::size_t>(q)]; ++i)
      blk[static_cast<std::size_t>(q)].push_back(pred_b_[static_cast<std::size_t>(uq)] - i);
  }
  std::vector<std::pair<int, int>> to_clear;
  for (int q = 0; q < d; ++q)
    for (int r : blk[static_cast<std::size_t>(q)]) {
      require(!rays_used_[static_cast<std::size_t>(nbrs[static_cast<std::size_t>(q)])].count(r),
              "attachment ray occupied");
      to_clear.push_back({nbrs[static_cast<std::size_t>(q)], r});
    }

  // First bottom ray of vi assigned to each middle edge, left to right.
  std::vector<int> bfirst(static_cast<std::size_t>(d), -1);
  {
    int nxt = s + 1;
    for (int q = 1; q < d - 1; ++q) {
      bfirst[static_cast<std::size_t>(q)] = nxt;
      nxt += b_[static_cast<std::size_t>(q)];
    }
  }

  // Clear all block rays and order the blocks left to right on the line y_h.
  double y_h = 0.0;
  std::vector<double> lo(static_cast<std::size_t>(d)), hi(static_cast<std::size_t>(d));
  auto recompute = [&] {
    for (int q = 0; q < d; ++q) {
      lo[static_cast<std::size_t>(q)] = inf;
      hi[static_cast<std::size_t>(q)] = -inf;
      for (int r : blk[static_cast<std::size_t>(q)]) {
        double x = ray_point(nbrs[static_cast<std::size_t>(q)], r, y_h).x;
        lo[static_cast<std::size_t>(q)] = std::min(lo[static_cast<std::size_t>(q)], x);
        hi[static_cast<std::size_t>(q)] = std::max(hi[static_cast<std::size_t>(q)], x);
      }
    }
  };
  for (int round = 0;; ++round) {
    require(round < 40, "attachment blocks did not stabilize");
    clear_set(to_clear);
    y_h = max_y() + 1.0;
    recompute();
    for (int i = 0; i + 1 < d; ++i) {
      double rest = inf;
      for (int j = i + 1; j < d; ++j) rest = std::min(rest, lo[static_cast<std::size_t>(j)]);
      if (hi[static_cast<std::size_t>(i)] < rest) continue;
      stretch(gap_edge(i), hi[static_cast<std::size_t>(i)] - rest + 1.0);
      recompute();
    }
    bool clear = true;
    for (const auto& [v, r] : to_clear)
      if (ray_crossing_count(v, r) != 0) {
        clear = false;
        break;
      }
    bool ordered = true;
    for (int i = 0; i + 1 < d && ordered; ++i)
      ordered = hi[static_cast<std::size_t>(i)] < lo[static_cast<std::size_t>(i) + 1];
    if (clear && ordered) break;
  }

  auto cot = [&](int r) {
    double th = ss_.ray_angle(r);
    return std::cos(th) / std::sin(th);
  };

  // Height of vi above the line: large enough that the bottom-ray crossings of
  // y_h are spaced wider than the full spread of the attachment blocks, so the
  // alignment targets always lie to the right of their blocks.
  double spreadT = std::max(0.0, hi[static_cast<std::size_t>(d) - 2] - lo[1]);
  double h = 2.0;
  {
    double dmin = inf;
    for (int r = s + 1; r < s + K; ++r) dmin = std::min(dmin, cot(r) - cot(r + 1));
    if (std::isfinite(dmin)) {
      require(dmin > 0, "bottom rays out of order");
      h = std::max(h, (4.0 * spreadT + 8.0 * d) / dmin);
    }
  }
  double anchor = real_[1] ? lo[1] : hi[1] + 4.0;
  double y_v = y_h + h;
  Point vpos{anchor + h * cot(s + 1), y_v};
  auto xB = [&](int r) { return vpos.x - h * cot(r); };  // bottom-ray crossing of y_h

  // Pull each later block right until its leading point meets its bottom-ray
  // target: with a closing real edge the shared bend, without one a four-unit
  // gap after the block for the chip.
  for (int q = 2; q < d - 1; ++q) {
    double loq = inf, hiq = -inf;
    for (int r : blk[static_cast<std::size_t>(q)]) {
      double x = ray_point(nbrs[static_cast<std::size_t>(q)], r, y_h).x;
      loq = std::min(loq, x);
      hiq = std::max(hiq, x);
    }
    double target = xB(bfirst[static_cast<std::size_t>(q)]) -
                    (real_[static_cast<std::size_t>(q)] ? 0.0 : 4.0);
    double cur = real_[static_cast<std::size_t>(q)] ? loq : hiq;
    double sig = target - cur;
    require(sig > -kFlatTol, "attachment block overshot its target");
    if (sig > 0) stretch(gap_edge(q - 1), sig);
  }

  coords_[static_cast<std::size_t>(vi)] = vpos;
  placed_[static_cast<std::size_t>(vi)] = true;
  recompute();

  // Strip sizing: every ray involved moves at most g/4 sideways across the
  // strip, so the left-to-right order of the y_h crossings carries over.
  double g = inf, maxcot = 0.0;
  {
    std::vector<double> pts;
    for (int q = 0; q < d; ++q)
      for (int r : blk[static_cast<std::size_t>(q)]) {
        pts.push_back(ray_point(nbrs[static_cast<std::size_t>(q)], r, y_h).x);
        maxcot = std::max(maxcot, std::fabs(cot(r)));
      }
    for (int r = s + 1; r <= s + K; ++r) {
      pts.push_back(xB(r));
      maxcot = std::max(maxcot, std::fabs(cot(r)));
    }
    std::sort(pts.begin(), pts.end());
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
      double dx = pts[i + 1] - pts[i];
      if (dx > 1e-6) g = std::min(g, dx);  // coincident points are shared bends
    }
    require(std::isfinite(g) && g > 1e-6, "attachment line too crowded");
  }
  double strip_h = std::min(1.0, g / (4.0 * (maxcot + 1.0)));
  double strip_lo = y_h + 0.3 * strip_h, strip_hi = y_h + 0.7 * strip_h;

  // Middle edges and their strip chips.
  for (int q = 1; q < d - 1; ++q) {
    int uq = nbrs[static_cast<std::size_t>(q)];
    const EdgePayload* pe = payload(vi, uq);
    bool have = pe && !pe->chip.empty();
    bool real = real_[static_cast<std::size_t>(q)];
    require(real || have, "virtual attachment edge without a chip");
    SkelRec rec{std::nullopt, {}, -1};
    std::vector<int> raysT, raysB;
    for (int i = real ? 1 : 0; i < a_[static_cast<std::size_t>(q)]; ++i)
      raysT.push_back(blk[static_cast<std::size_t>(q)][static_cast<std::size_t>(i)]);
    for (int i = real ? 1 : 0; i < b_[static_cast<std::size_t>(q)]; ++i)
      raysB.push_back(bfirst[static_cast<std::size_t>(q)] + i);
    if (real) {
      Point bend{xB(bfirst[static_cast<std::size_t>(q)]), y_h};
      double at = ray_point(uq, blk[static_cast<std::size_t>(q)][0], y_h).x;
      require(std::fabs(at - bend.x) < 1e-6, "attachment point misaligned");
      add_edge_geom(EdgeGeom{vi, uq, bend, std::nullopt, bfirst[static_cast<std::size_t>(q)],
                             blk[static_cast<std::size_t>(q)][0]});
    }
    if (have) {
      double L = -inf, R = inf;
      for (int r : raysT)
        for (double yy : {strip_lo, strip_hi}) L = std::max(L, ray_point(uq, r, yy).x);
      if (real) L = std::max(L, xB(bfirst[static_cast<std::size_t>(q)]) + g / 2.0);
      L += g / 8.0;
      for (int r : raysB)
        for (double yy : {strip_lo, strip_hi}) R = std::min(R, ray_point(vi, r, yy).x);
      if (raysB.empty())
        R = std::min(R, (q + 1 < d ? lo[static_cast<std::size_t>(q) + 1] : inf) - g / 4.0);
      R -= g / 8.0;
      require(R - L > 0.2, "no room for a strip chip");
      Chip c = orient_chip(pe->chip, uq, ss_);
      double f = 1.0;
      if (c.rect.height() > 1e-12) f = std::min(f, 0.4 * strip_h / c.rect.height());
      if (c.rect.width() > 1e-12) f = std::min(f, (R - L - 0.2) / c.rect.width());
      c = scale_chip(c, f);
      c = translate_chip(c, L + 0.1 - c.rect.x0, strip_lo - c.rect.y0);
      rec.rect = instantiate_chip(c);
      for (auto& eg : draw_edges_to_pole(c, coords_[static_cast<std::size_t>(uq)], uq,
                                         ChipSide::Left, raysT, ss_))
        add_fan_geom(eg);
      for (auto& eg : draw_edges_to_pole(c, vpos, vi, ChipSide::Right, raysB, ss_))
        add_fan_geom(eg);
    }
    skel_[key(vi, uq)] = std::move(rec);
  }

  const double fmarg = 1.0;
  // Left end edge: u_l's fan, the chip beside vi, horizontals on vi's line.
  {
    const EdgePayload* pe = payload(vi, u_l);
    bool real = real_[0];
    bool have = pe && !pe->chip.empty();
    require(real || have, "virtual end edge without a chip");
    double lift = real ? 0.3 : 0.0;
    Chip c;
    double w = 0.0, hc = 0.3;
    if (have) {
      c = orient_chip(pe->chip, u_l, ss_);
      if (c.rect.height() > 1.0) c = scale_chip(c, 1.0 / c.rect.height());
      w = c.rect.width();
      hc = std::max(hc, c.rect.height());
    }
    double xl = 0.0;
    for (int iter = 0;; ++iter) {
      require(iter < 40, "left end room did not stabilize");
      xl = -inf;
      for (int r : blk[0])
        for (double yy : {y_v, y_v + 1.5}) xl = std::max(xl, ray_point(u_l, r, yy).x);
      xl += fmarg;
      double xr = vpos.x - fmarg;
      for (int i = real ? 1 : 0; i < b_[0]; ++i) {
        int r = s - i;
        if (r == s) continue;
        for (double yy : {y_v + lift, y_v + lift + hc}) xr = std::min(xr, ray_point(vi, r, yy).x);
      }
      xr -= fmarg;
      if (xr - xl >= w) break;
      stretch(gap_edge(0), w - (xr - xl) + 1.0);
      vpos = coords_[static_cast<std::size_t>(vi)];
    }
    auto ge = gap_edge(0);
    SkelRec rec{key(ge.first, ge.second), {}, -1};
    if (have) {
      c = translate_chip(c, xl - c.rect.x0, y_v + lift - c.rect.y0);
      rec.rect = instantiate_chip(c);
    }
    if (real) {
      Point bend = ray_point(u_l, blk[0][0], y_v);
      require(bend.x < (have ? c.rect.x0 : vpos.x), "left end bend misplaced");
      add_edge_geom(EdgeGeom{u_l, vi, bend, key(ge.first, ge.second), blk[0][0], s});
      rec.expansion.push_back(key(u_l, vi));
    }
    if (have) {
      std::vector<int> raysA, raysB;
      for (int i = real ? 1 : 0; i < a_[0]; ++i) raysA.push_back(blk[0][static_cast<std::size_t>(i)]);
      for (int i = real ? 1 : 0; i < b_[0]; ++i) raysB.push_back(s - i);
      for (auto& eg : draw_edges_to_pole(c, coords_[static_cast<std::size_t>(u_l)], u_l,
                                         ChipSide::Left, raysA, ss_))
        add_fan_geom(eg);
      for (auto& eg : draw_edges_to_pole(c, vpos, vi, ChipSide::Right, raysB, ss_)) {
        rec.expansion.push_back(key(eg.a, eg.b));
        add_fan_geom(eg);
      }
    }
    skel_[key(u_l, vi)] = std::move(rec);
  }

  // Right end edge, mirrored: vi's fan, the chip, then u_r's fan.
  {
    int qz = d - 1;
    const EdgePayload* pe = payload(vi, u_r);
    bool real = real_[static_cast<std::size_t>(qz)];
    bool have = pe && !pe->chip.empty();
    require(real || have, "virtual end edge without a chip");
    double lift = real ? 0.3 : 0.0;
    Chip c;
    double w = 0.0, hc = 0.3;
    if (have) {
      c = orient_chip(pe->chip, vi, ss_);
      if (c.rect.height() > 1.0) c = scale_chip(c, 1.0 / c.rect.height());
      w = c.rect.width();
      hc = std::max(hc, c.rect.height());
    }
    double xl = 0.0, xr = 0.0;
    for (int iter = 0;; ++iter) {
      require(iter < 40, "right end room did not stabilize");
      xl = vpos.x + fmarg;
      for (int i = real ? 1 : 0; i < b_[static_cast<std::size_t>(qz)]; ++i) {
        int r = i;
        if (r == 0) continue;
        for (double yy : {y_v + lift, y_v + lift + hc}) xl = std::max(xl, ray_point(vi, r, yy).x);
      }
      xl += fmarg;
      xr = inf;
      for (int r : blk[static_cast<std::size_t>(qz)])
        for (double yy : {y_v, y_v + 1.5}) xr = std::min(xr, ray_point(u_r, r, yy).x);
      xr -= fmarg;
      if (xr - xl >= w) break;
      stretch(last_below, w - (xr - xl) + 1.0);
    }
    SkelRec rec{key(last_below.first, last_below.second), {}, -1};
    if (have) {
      c = translate_chip(c, xl - c.rect.x0, y_v + lift - c.rect.y0);
      rec.rect = instantiate_chip(c);
    }
    if (real) {
      Point bend = ray_point(u_r, blk[static_cast<std::size_t>(qz)][0], y_v);
      require(bend.x > (have ? c.rect.x1 : vpos.x), "right end bend misplaced");
      add_edge_geom(EdgeGeom{vi, u_r, bend, key(last_below.first, last_below.second), 0,
                             blk[static_cast<std::size_t>(qz)][0]});
      rec.expansion.push_back(key(vi, u_r));
    }
    if (have) {
      std::vector<int> raysA, raysB;
      for (int i = real ? 1 : 0; i < b_[static_cast<std::size_t>(qz)]; ++i) raysA.push_back(i);
      for (int i = real ? 1 : 0; i < a_[static_cast<std::size_t>(qz)]; ++i)
        raysB.push_back(blk[static_cast<std::size_t>(qz)][static_cast<std::size_t>(i)]);
      for (auto& eg : draw_edges_to_pole(c, vpos, vi, ChipSide::Left, raysA, ss_)) add_fan_geom(eg);
      for (auto& eg : draw_edges_to_pole(c, coords_[static_cast<std::size_t>(u_r)], u_r,
                                         ChipSide::Right, raysB, ss_)) {
        rec.expansion.push_back(key(eg.a, eg.b));
        add_fan_geom(eg);
      }
    }
    skel_[key(vi, u_r)] = std::move(rec);
  }

  succ_b_[static_cast<std::size_t>(u_l)] = blk[0].back();
  pred_b_[static_cast<std::size_t>(u_r)] = blk[static_cast<std::size_t>(d) - 1].back();
  succ_b_[static_cast<std::size_t>(vi)] = b_[static_cast<std::size_t>(d) - 1] - 1;
  pred_b_[static_cast<std::size_t>(vi)] = s - (b_[0] - 1);

  contour_.erase(contour_.begin() + p0 + 1, contour_.begin() + pz);
  contour_.insert(contour_.begin() + p0 + 1, vi);
}

Drawing PartialDrawing::finish() {
  for (int v = 0; v < g_.n(); ++v) require(placed_[static_cast<std::size_t>(v)], "unplaced vertex at finish");
  require(!edges_.count(key(v1_, v2_)), "base edge drawn early");

  const int s = ss_.count();
  int r1 = 2 * s - 1;  // first clockwise bottom ray of v1
  int r2 = s + 1;      // first anti-clockwise bottom ray of v2
  require(!rays_used_[static_cast<std::size_t>(v1_)].count(r1), "closing ray of v1 occupied");
  require(!rays_used_[static_cast<std::size_t>(v2_)].count(r2), "closing ray of v2 occupied");
  Point o1 = coords_[static_cast<std::size_t>(v1_)], o2 = coords_[static_cast<std::size_t>(v2_)];
  double a1 = ss_.ray_angle(r1), a2 = ss_.ray_angle(r2);
  double d1x = std::cos(a1), d1y = std::sin(a1), d2x = std::cos(a2), d2y = std::sin(a2);
  double den = d1x * d2y - d1y * d2x;
  require(std::fabs(den) > 1e-12, "closing rays are parallel");
  double t = ((o2.x - o1.x) * d2y - (o2.y - o1.y) * d2x) / den;
  require(t > 0, "closing rays do not meet forward");
  Point bend{o1.x + t * d1x, o1.y + t * d1y};
  require(bend.y < 0, "closing bend above the base line");
  add_edge_geom(EdgeGeom{v1_, v2_, bend, std::nullopt, r1, r2});

  Drawing out(ss_);
  out.coords = coords_;
  for (const auto& [k, eg] : edges_) {
    PolylineEdge pe;
    pe.u = eg.a;
    pe.v = eg.b;
    pe.bend = eg.bend;
    out.edges.push_back(pe);
  }
  return out;
}

Chip PartialDrawing::to_chip() const {
  require(contour_.size() >= 2, "nothing drawn to extract");
  require(!edges_.count(key(v1_, v2_)), "base edge drawn before extraction");
  const int s = ss_.count();
  Chip c;
  c.s_pole = v1_;
  c.t_pole = v2_;
  for (int v = 0; v < g_.n(); ++v) {
    if (!placed_[static_cast<std::size_t>(v)] || v == v1_ || v == v2_) continue;
    c.coords[v] = coords_[static_cast<std::size_t>(v)];
    if (!rays_used_[static_cast<std::size_t>(v)].empty())
      c.rays[v] = rays_used_[static_cast<std::size_t>(v)];
  }
  for (const auto& [k, eg] : edges_) {
    bool at1 = (eg.a == v1_ || eg.b == v1_);
    bool at2 = (eg.a == v2_ || eg.b == v2_);
    require(!(at1 && at2), "pole-to-pole edge in extraction");
    if (at1 || at2) {
      // The far endpoint becomes a pin; its segment toward the pole must be
      // horizontal (that is exactly invariant M.2 of the construction).
      int far = (eg.a == v1_ || eg.a == v2_) ? eg.b : eg.a;
      int far_ray = (eg.a == far) ? eg.ray_a : eg.ray_b;
      require(far_ray == (at1 ? s : 0), "pole edge without a horizontal far segment");
      require(c.coords.count(far), "pin endpoint missing from extraction");
      (at1 ? c.left_pins : c.right_pins).push_back({far});
    } else {
      EdgeGeom copy = eg;
      copy.down_edge.reset();
      c.content[k] = copy;
    }
  }
  auto by_y = [&](const Pin& a, const Pin& b) { return c.pin_y(a) < c.pin_y(b); };
  std::sort(c.left_pins.begin(), c.left_pins.end(), by_y);
  std::sort(c.right_pins.begin(), c.right_pins.end(), by_y);
  require(!c.coords.empty(), "extraction produced an empty chip");
  double x0 = std::numeric_limits<double>::infinity(), y0 = x0;
  double x1 = -x0, y1 = -x0;
  auto grow = [&](const Point& p) {
    x0 = std::min(x0, p.x);
    y0 = std::min(y0, p.y);
    x1 = std::max(x1, p.x);
    y1 = std::max(y1, p.y);
  };
  for (const auto& [v, p] : c.coords) grow(p);
  for (const auto& [k, eg] : c.content)
    if (eg.bend) grow(*eg.bend);
  for (const auto& pc : chip_rects_) {
    grow(Point{pc.rect.x0, pc.rect.y0});
    grow(Point{pc.rect.x1, pc.rect.y1});
  }
  c.rect = {x0, y0, x1, y1};
  return c;
}

void PartialDrawing::check_invariants() const {
  // I.1: nothing below the base line; the base pair defines it.
  require(std::fabs(coords_[static_cast<std::size_t>(v1_)].y) < kFlatTol, "v1 off the base line");
  require(std::fabs(coords_[static_cast<std::size_t>(v2_)].y) < kFlatTol, "v2 off the base line");
  for (int v = 0; v < g_.n(); ++v)
    if (placed_[static_cast<std::size_t>(v)])
      require(coords_[static_cast<std::size_t>(v)].y > -kFlatTol, "vertex below the base line");
  for (const auto& [k, eg] : edges_)
    if (eg.bend) require(eg.bend->y > -kFlatTol, "bend below the base line");

  // I.2: every contour edge keeps a horizontal segment. A virtual contour edge
  // (a payload without a closing real edge) has no geometry of its own; its
  // stretchability comes from the recorded expansion edges instead.
  require(contour_.size() >= 2 && contour_.front() == v1_ && contour_.back() == v2_,
          "contour endpoints corrupted");
  for (std::size_t i = 0; i + 1 < contour_.size(); ++i) {
    auto k = key(contour_[i], contour_[i + 1]);
    auto it = edges_.find(k);
    if (it == edges_.end()) {
      auto sk = skel_.find(k);
      require(sk != skel_.end() && !sk->second.expansion.empty(),
              "contour edge with neither geometry nor expansion");
      continue;
    }
    const EdgeGeom& eg = it->second;
    double ya = coords_[static_cast<std::size_t>(eg.a)].y;
    double yb = coords_[static_cast<std::size_t>(eg.b)].y;
    bool flat = eg.bend ? (std::fabs(ya - eg.bend->y) < kFlatTol || std::fabs(yb - eg.bend->y) < kFlatTol)
                        : std::fabs(ya - yb) < kFlatTol;
    require(flat, "contour edge without horizontal segment");
  }

  // I.3: free outer rays cover the undrawn neighbors' demands.
  for (int v : contour_)
    require(static_cast<int>(free_outer_rays(v).size()) >= pending_demand(v),
            "free rays exhausted");

  // Planarity of the partial drawing.
  struct Piece {
    Segment seg;
    int u, v;
  };
  std::vector<Piece> pieces;
  for (const auto& [k, eg] : edges_) {
    Point pa = coords_[static_cast<std::size_t>(eg.a)], pb = coords_[static_cast<std::size_t>(eg.b)];
    if (eg.bend) {
      pieces.push_back({{pa, *eg.bend}, eg.a, eg.b});
      pieces.push_back({{*eg.bend, pb}, eg.a, eg.b});
    } else {
      pieces.push_back({{pa, pb}, eg.a, eg.b});
    }
  }
  for (std::size_t i = 0; i < pieces.size(); ++i)
    for (std::size_t j = i + 1; j < pieces.size(); ++j) {
      const Piece& x = pieces[i];
      const Piece& y = pieces[j];
      std::vector<Point> shared;
      if (x.u == y.u && x.v == y.v) {  // two halves of one edge meet at the bend
        shared.push_back(x.seg.b);
        shared.push_back(y.seg.a);
      } else {
        for (int a : {x.u, x.v})
          for (int b : {y.u, y.v})
            if (a == b) shared.push_back(coords_[static_cast<std::size_t>(a)]);
      }
      require(!segments_properly_intersect(x.seg, y.seg, kGeomEps, shared),
              "partial drawing has a crossing");
    }
}

Drawing draw_triconnected(const Embedding& e, const SlopeSet& ss, bool check_each_step) {
  auto faces = e.faces();
  const auto& outer = faces[static_cast<std::size_t>(e.outer_face)].boundary;
  std::pair<int, int> base{e.graph.n(), e.graph.n()};
  for (auto [u, v] : outer) {
    if (u > v) std::swap(u, v);
    base = std::min(base, {u, v});
  }
  CanonicalOrder order = canonical_order(e, base.first, base.second);

  PartialDrawing pd(e.graph, ss, order.v1, order.v2);
  std::vector<int> p1 = order.parts[1];
  if (p1.size() > 1 && !e.graph.has_edge(order.v1, p1.front())) std::reverse(p1.begin(), p1.end());
  if (!e.graph.has_edge(order.v1, p1.front()) || !e.graph.has_edge(p1.back(), order.v2))
    throw InvariantViolation("first path does not span the base pair");
  pd.place_base_row(p1);
  if (check_each_step) pd.check_invariants();

  for (std::size_t k = 2; k < order.parts.size(); ++k) {
    const auto& part = order.parts[k];
    if (part.size() == 1) {
      int v = part[0];
      std::vector<int> nbrs;
      for (int w : e.graph.neighbors(v))
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
        for (int w : e.graph.neighbors(v))
          if (pd.placed(w)) {
            if (found != -1) throw InvariantViolation("chain end with two drawn neighbors");
            found = w;
          }
        if (found == -1) throw InvariantViolation("chain end with no drawn neighbor");
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
    if (check_each_step) pd.check_invariants();
  }
  return pd.finish();
}

}  // namespace slopes
