#include "slopes/cli_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace slopes {

namespace {

std::string num9(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9f", v);
  std::string s(buf);
  if (s == "-0.000000000") s.erase(0, 1);
  return s;
}

std::string escaped(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  return out;
}

}  // namespace

Graph parse_graph(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  long n = -1, m = -1;
  long seen = 0;
  Graph g;
  auto fail = [&](const std::string& msg) {
    throw ParseError("line " + std::to_string(lineno) + ": " + msg);
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string junk;
    if (n < 0) {
      if (!(ls >> n)) {
        n = -1;
        continue;  // blank or comment-only line
      }
      if (!(ls >> m) || (ls >> junk)) fail("expected header 'n m'");
      if (n < 0 || m < 0) fail("negative count in header");
      g = Graph(static_cast<int>(n));
    } else {
      long u, v;
      if (!(ls >> u)) continue;
      if (!(ls >> v) || (ls >> junk)) fail("expected edge 'u v'");
      if (seen == m) fail("more edges than the header declares");
      if (u < 0 || u >= n || v < 0 || v >= n) fail("vertex out of range");
      if (u == v) throw SelfLoop("line " + std::to_string(lineno) + ": self-loop at vertex " +
                                 std::to_string(u));
      if (g.has_edge(static_cast<int>(u), static_cast<int>(v)))
        throw DuplicateEdge("line " + std::to_string(lineno) + ": duplicate edge " +
                            std::to_string(u) + " " + std::to_string(v));
      g.add_edge(static_cast<int>(u), static_cast<int>(v));
      ++seen;
    }
  }
  if (n < 0) throw ParseError("line " + std::to_string(lineno) + ": missing header 'n m'");
  if (seen != m) fail("header declares " + std::to_string(m) + " edges, found " +
                      std::to_string(seen));
  return g;
}

std::string emit_graph(const Graph& g) {
  std::ostringstream os;
  os << g.n() << ' ' << g.m() << '\n';
  for (auto [u, v] : g.edges()) os << u << ' ' << v << '\n';
  return os.str();
}

std::string emit_json(const Drawing& d, const Report& rep) {
  std::ostringstream os;
  os << "{\n  \"delta\": " << d.slope_set.delta() << ",\n  \"edges\": [";
  for (std::size_t i = 0; i < d.edges.size(); ++i) {
    const auto& e = d.edges[i];
    os << (i ? ", " : "") << "{\"bend\": ";
    if (e.bend)
      os << "{\"x\": " << num9(e.bend->x) << ", \"y\": " << num9(e.bend->y) << "}";
    else
      os << "null";
    os << ", \"u\": " << e.u << ", \"v\": " << e.v << "}";
  }
  os << "],\n  \"report\": {\"crossing_pairs\": [";
  for (std::size_t i = 0; i < rep.crossing_pairs.size(); ++i)
    os << (i ? ", " : "") << "[" << rep.crossing_pairs[i].first << ", "
       << rep.crossing_pairs[i].second << "]";
  os << "], \"detail\": \"" << escaped(rep.detail) << "\", \"max_bends\": " << rep.max_bends
     << ", \"max_slope_deviation\": " << num9(rep.max_slope_deviation)
     << ", \"min_angle\": " << num9(rep.min_angle) << ", \"pass\": "
     << (rep.pass ? "true" : "false") << ", \"required_angle\": " << num9(rep.required_angle)
     << "},\n  \"slopes\": [";
  const auto& angles = d.slope_set.angles();
  for (std::size_t i = 0; i < angles.size(); ++i) os << (i ? ", " : "") << num9(angles[i]);
  os << "],\n  \"vertices\": [";
  for (std::size_t i = 0; i < d.coords.size(); ++i)
    os << (i ? ", " : "") << "{\"id\": " << i << ", \"x\": " << num9(d.coords[i].x)
       << ", \"y\": " << num9(d.coords[i].y) << "}";
  os << "]\n}\n";
  return os.str();
}

std::string emit_svg(const Drawing& d) {
  double lox = 0, loy = 0, hix = 1, hiy = 1;
  if (!d.coords.empty()) {
    lox = loy = std::numeric_limits<double>::infinity();
    hix = hiy = -lox;
    auto feed = [&](const Point& p) {
      lox = std::min(lox, p.x);
      loy = std::min(loy, p.y);
      hix = std::max(hix, p.x);
      hiy = std::max(hiy, p.y);
    };
    for (const Point& p : d.coords) feed(p);
    for (const auto& e : d.edges)
      if (e.bend) feed(*e.bend);
  }
  const double extent = std::max({hix - lox, hiy - loy, 1.0});
  const double pad = 0.05 * extent;
  auto fy = [&](double y) { return (loy + hiy) - y; };  // screen y grows downward
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" << num9(lox - pad) << " "
     << num9(loy - pad) << " " << num9(hix - lox + 2 * pad) << " " << num9(hiy - loy + 2 * pad)
     << "\">\n";
  for (const auto& e : d.edges) {
    const Point& pu = d.coords[static_cast<std::size_t>(e.u)];
    const Point& pv = d.coords[static_cast<std::size_t>(e.v)];
    os << "  <polyline fill=\"none\" stroke=\"black\" stroke-width=\"" << num9(0.002 * extent)
       << "\" points=\"" << num9(pu.x) << "," << num9(fy(pu.y));
    if (e.bend) os << " " << num9(e.bend->x) << "," << num9(fy(e.bend->y));
    os << " " << num9(pv.x) << "," << num9(fy(pv.y)) << "\"/>\n";
  }
  for (const Point& p : d.coords)
    os << "  <circle cx=\"" << num9(p.x) << "\" cy=\"" << num9(fy(p.y)) << "\" r=\""
       << num9(0.006 * extent) << "\" fill=\"black\"/>\n";
  os << "</svg>\n";
  return os.str();
}

}  // namespace slopes
