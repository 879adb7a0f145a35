#pragma once

#include <map>
#include <queue>
#include <set>
#include <vector>

#include "a2lab/building.hpp"
#include "a2lab/detecting.hpp"
#include "a2lab/embedding_search.hpp"
#include "a2lab/errors.hpp"
#include "a2lab/report.hpp"

namespace a2lab {

/// Finite piece of the wall-tree T_{u,v} (equivalently T_u via the natural
/// isomorphism): vertices are singular line segments parallel to the pinned
/// base line, edges join lines spanning a width-1 flat strip.
struct PanelTreeTruncation {
  int back = 0, fwd = 0;                  // segment extent of each line
  std::vector<std::vector<Vertex>> lines;  // node -> line segment vertices
  std::vector<std::vector<int>> adj;      // tree adjacency
  std::vector<int> dist;                  // from the base line (node 0)

  int size() const { return static_cast<int>(lines.size()); }

  int distance(int a, int b) const {
    std::vector<int> d(size(), -1);
    std::queue<int> q;
    d[a] = 0;
    q.push(a);
    while (!q.empty()) {
      int v = q.front();
      q.pop();
      for (int w : adj[v])
        if (d[w] < 0) {
          d[w] = d[v] + 1;
          q.push(w);
        }
    }
    if (d[b] < 0) throw InputError("panel tree: nodes not connected");
    return d[b];
  }

  /// The u-side ray germ of a line: its left half [-back..0].
  std::vector<Vertex> u_ray(int node) const {
    return {lines[node].begin(), lines[node].begin() + back + 1};
  }
  std::vector<Vertex> v_ray(int node) const {
    return {lines[node].begin() + back, lines[node].end()};
  }
};

/// Lines at strip-distance 1 from `line`: tops of width-1 strips whose
/// bottom row is pinned to it.
inline std::set<std::vector<Vertex>> neighbor_lines(const BuildingBall& ball,
                                                    const std::vector<Vertex>& line, int back,
                                                    int fwd) {
  ModelComplex strip = model_from_points([&] {
    std::vector<ACoord> pts;
    for (int a = -back; a <= fwd; ++a)
      for (int b = 0; b <= 1; ++b) pts.push_back({a, b});
    return pts;
  }());
  std::vector<std::pair<Vertex, Vertex>> pins;
  for (int a = -back; a <= fwd; ++a)
    pins.push_back({strip.vertex_at({a, 0}), line[a + back]});
  auto embs = enumerate_pinned(strip.complex, ball.complex, pins);
  std::set<std::vector<Vertex>> tops;
  for (const auto& beta : embs) {
    std::vector<Vertex> top;
    for (int a = -back; a <= fwd; ++a) top.push_back(beta[strip.vertex_at({a, 1})]);
    tops.insert(top);
  }
  return tops;
}

/// BFS over parallel lines out to `depth`. Node 0 is the base line.
inline PanelTreeTruncation panel_tree_truncation(const BuildingBall& ball,
                                                 const std::vector<Vertex>& base_line, int back,
                                                 int fwd, int depth) {
  PanelTreeTruncation out;
  out.back = back;
  out.fwd = fwd;
  std::map<std::vector<Vertex>, int> ids;
  ids[base_line] = 0;
  out.lines.push_back(base_line);
  out.adj.push_back({});
  out.dist.push_back(0);
  std::queue<int> frontier;
  frontier.push(0);
  while (!frontier.empty()) {
    int v = frontier.front();
    frontier.pop();
    if (out.dist[v] == depth) continue;
    for (const auto& top : neighbor_lines(ball, out.lines[v], back, fwd)) {
      auto it = ids.find(top);
      int w;
      if (it == ids.end()) {
        w = out.size();
        ids[top] = w;
        out.lines.push_back(top);
        out.adj.push_back({});
        out.dist.push_back(out.dist[v] + 1);
        frontier.push(w);
      } else {
        w = it->second;
      }
      bool known = false;
      for (int z : out.adj[v]) known |= (z == w);
      if (!known && v != w) {
        out.adj[v].push_back(w);
        out.adj[w].push_back(v);
      }
    }
  }
  return out;
}

/// The perspectivity [u;v] at truncation scale: a line maps to its u-ray
/// class, then back through the interval to its v-ray class. At finite
/// depth this is faithful iff distinct visible lines have distinct visible
/// rays; violations are depth artifacts and reported as such.
struct Perspectivity {
  std::map<std::vector<Vertex>, int> u_ray_to_node;
  std::map<std::vector<Vertex>, int> v_ray_to_node;
  bool faithful = true;
};

inline Perspectivity perspectivity_map(const PanelTreeTruncation& trunc) {
  Perspectivity out;
  for (int node = 0; node < trunc.size(); ++node) {
    auto u = trunc.u_ray(node);
    auto v = trunc.v_ray(node);
    if (!out.u_ray_to_node.emplace(u, node).second) out.faithful = false;
    if (!out.v_ray_to_node.emplace(v, node).second) out.faithful = false;
  }
  return out;
}

inline VerificationReport panel_tree_suite(const BuildingBall& ball,
                                           const std::vector<Vertex>& base_line, int back,
                                           int fwd, int depth) {
  VerificationReport report("panel-tree");
  PanelTreeTruncation trunc = panel_tree_truncation(ball, base_line, back, fwd, depth);
  // (q+1)-regularity at interior nodes
  for (int node = 0; node < trunc.size(); ++node) {
    if (trunc.dist[node] >= depth) continue;
    report.check(static_cast<int>(trunc.adj[node].size()) == ball.q + 1,
                 nlohmann::json{{"node", node}, {"degree", trunc.adj[node].size()}});
  }
  // tree: no cycles among explored nodes (edge count)
  int edges = 0;
  for (auto& a : trunc.adj) edges += static_cast<int>(a.size());
  report.check(edges == 2 * (trunc.size() - 1),
               nlohmann::json{{"id", "acyclic"}, {"edges", edges / 2}, {"nodes", trunc.size()}});
  // perspectivity faithful and involutive at this depth
  Perspectivity p = perspectivity_map(trunc);
  report.check(p.faithful, nlohmann::json{{"id", "perspectivity-faithful"}});
  for (int node = 0; node < trunc.size(); ++node) {
    report.check(p.u_ray_to_node.at(trunc.u_ray(node)) == node,
                 nlohmann::json{{"id", "u-ray round trip"}, {"node", node}});
    report.check(p.v_ray_to_node.at(trunc.v_ray(node)) == node,
                 nlohmann::json{{"id", "v-ray round trip"}, {"node", node}});
  }
  // parallel lines in one apartment sit at their strip offset
  for (int node = 0; node < trunc.size(); ++node) {
    if (trunc.dist[node] != 1) continue;
    report.check(trunc.distance(0, node) == 1, nlohmann::json{{"id", "distance"}, {"node", node}});
  }
  return report;
}

}  // namespace a2lab
