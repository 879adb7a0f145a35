#pragma once

#include <algorithm>
#include <map>
#include <queue>
#include <set>
#include <string>
#include <vector>

#include "a2lab/errors.hpp"

namespace a2lab {

/// Incidence structure with separate point and line id spaces.
struct ProjectivePlane {
  int q = 0;
  std::vector<std::vector<int>> point_lines;  // point -> sorted incident lines
  std::vector<std::vector<int>> line_points;  // line  -> sorted incident points

  int point_count() const { return static_cast<int>(point_lines.size()); }
  int line_count() const { return static_cast<int>(line_points.size()); }

  bool incident(int p, int l) const {
    const auto& ls = point_lines.at(p);
    return std::binary_search(ls.begin(), ls.end(), l);
  }

  /// Unique line through two distinct points.
  int line_through(int p1, int p2) const {
    const auto& a = point_lines.at(p1);
    const auto& b = point_lines.at(p2);
    std::vector<int> common;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(common));
    if (common.size() != 1) throw StructureError("line_through: not exactly one common line");
    return common[0];
  }

  /// Unique intersection point of two distinct lines.
  int meet(int l1, int l2) const {
    const auto& a = line_points.at(l1);
    const auto& b = line_points.at(l2);
    std::vector<int> common;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(common));
    if (common.size() != 1) throw StructureError("meet: not exactly one common point");
    return common[0];
  }

  /// "" when all projective-plane axioms hold, else the violated axiom.
  std::string validate() const {
    const int n = q * q + q + 1;
    if (point_count() != n) return "wrong number of points";
    if (line_count() != n) return "wrong number of lines";
    for (int l = 0; l < line_count(); ++l)
      if (static_cast<int>(line_points[l].size()) != q + 1) return "line without q+1 points";
    for (int p = 0; p < point_count(); ++p)
      if (static_cast<int>(point_lines[p].size()) != q + 1) return "point not on q+1 lines";
    for (int p1 = 0; p1 < point_count(); ++p1)
      for (int p2 = p1 + 1; p2 < point_count(); ++p2) {
        const auto& a = point_lines[p1];
        const auto& b = point_lines[p2];
        std::vector<int> common;
        std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                              std::back_inserter(common));
        if (common.size() != 1) return "two points not on exactly one common line";
      }
    if (incidence_girth() != 6) return "incidence graph girth is not 6";
    return "";
  }

  /// Girth of the bipartite incidence graph (points 0..n-1, lines n..2n-1).
  int incidence_girth() const {
    int best = 1 << 30;
    const int n = point_count();
    auto neighbors = [&](int v) -> std::vector<int> {
      std::vector<int> out;
      if (v < n)
        for (int l : point_lines[v]) out.push_back(n + l);
      else
        for (int p : line_points[v - n]) out.push_back(p);
      return out;
    };
    const int total = n + line_count();
    for (int src = 0; src < total; ++src) {
      std::vector<int> dist(total, -1), parent(total, -1);
      std::queue<int> bfs;
      dist[src] = 0;
      bfs.push(src);
      while (!bfs.empty()) {
        int u = bfs.front();
        bfs.pop();
        for (int w : neighbors(u)) {
          if (dist[w] < 0) {
            dist[w] = dist[u] + 1;
            parent[w] = u;
            bfs.push(w);
          } else if (w != parent[u]) {
            best = std::min(best, dist[u] + dist[w] + 1);
          }
        }
      }
    }
    return best;
  }

  /// Opposition of link vertices: a point and a line are opposite iff
  /// non-incident (maximal distance 3 in the incidence graph).
  bool vertices_opposite(int p, int l) const { return !incident(p, l); }

  /// Flags (p,l); two flags are adjacent when they share the point or the line.
  struct Flag {
    int p, l;
    auto operator<=>(const Flag&) const = default;
  };

  std::vector<Flag> flags() const {
    std::vector<Flag> out;
    for (int p = 0; p < point_count(); ++p)
      for (int l : point_lines[p]) out.push_back({p, l});
    std::sort(out.begin(), out.end());
    return out;
  }

  int gallery_distance(Flag a, Flag b) const {
    if (!incident(a.p, a.l) || !incident(b.p, b.l)) throw InputError("not a flag");
    std::map<Flag, int> dist;
    std::queue<Flag> bfs;
    dist[a] = 0;
    bfs.push(a);
    while (!bfs.empty()) {
      Flag f = bfs.front();
      bfs.pop();
      if (f == b) return dist[f];
      auto push = [&](Flag g) {
        if (!dist.count(g)) {
          dist[g] = dist[f] + 1;
          bfs.push(g);
        }
      };
      for (int l : point_lines[f.p])
        if (l != f.l) push({f.p, l});
      for (int p : line_points[f.l])
        if (p != f.p) push({p, f.l});
    }
    throw StructureError("flag graph not connected");
  }

  bool chambers_opposite(Flag a, Flag b) const { return gallery_distance(a, b) == 3; }
};

/// The Fano plane in Singer form: line i = {i+1, i+2, i+4} mod 7.
inline ProjectivePlane fano_plane() {
  ProjectivePlane pl;
  pl.q = 2;
  pl.point_lines.assign(7, {});
  pl.line_points.assign(7, {});
  for (int i = 0; i < 7; ++i)
    for (int d : {1, 2, 4}) {
      int p = (i + d) % 7;
      pl.line_points[i].push_back(p);
      pl.point_lines[p].push_back(i);
    }
  for (auto& v : pl.line_points) std::sort(v.begin(), v.end());
  for (auto& v : pl.point_lines) std::sort(v.begin(), v.end());
  return pl;
}

/// Perspectivity src -> dst through `center`: x maps to line(center,x) ∧ dst.
/// Returns the image of each point of src, aligned with line_points[src].
inline std::vector<int> plane_perspectivity(const ProjectivePlane& pl, int src, int center,
                                            int dst) {
  if (pl.incident(center, src) || pl.incident(center, dst))
    throw InputError("perspectivity center lies on src or dst");
  std::vector<int> image;
  for (int x : pl.line_points.at(src)) {
    int join = pl.line_through(center, x);
    image.push_back(pl.meet(join, dst));
  }
  return image;
}

/// The group generated by closed perspectivity chains of length <= bound
/// based at `line`, as permutations of line_points[line] (by position).
inline std::vector<std::vector<int>> plane_projectivity_group(const ProjectivePlane& pl,
                                                              int line, int chain_bound = 3) {
  const auto& base = pl.line_points.at(line);
  const int k = static_cast<int>(base.size());
  std::map<int, int> pos;
  for (int i = 0; i < k; ++i) pos[base[i]] = i;

  auto to_perm = [&](const std::vector<int>& image_points) {
    std::vector<int> perm(k);
    for (int i = 0; i < k; ++i) perm[i] = pos.at(image_points[i]);
    return perm;
  };

  std::set<std::vector<int>> gens;
  // chains line -> m1 -> ... -> line with up to chain_bound perspectivities
  struct State {
    int current;
    std::vector<int> points;  // images of base points, as plane points on `current`
    int steps;
  };
  std::vector<State> frontier = {{line, base, 0}};
  while (!frontier.empty()) {
    std::vector<State> next;
    for (const auto& st : frontier) {
      if (st.steps >= chain_bound) continue;
      for (int dst = 0; dst < pl.line_count(); ++dst) {
        if (dst == st.current) continue;
        for (int center = 0; center < pl.point_count(); ++center) {
          if (pl.incident(center, st.current) || pl.incident(center, dst)) continue;
          std::vector<int> moved;
          for (int x : st.points) moved.push_back(pl.meet(pl.line_through(center, x), dst));
          if (dst == line)
            gens.insert(to_perm(moved));
          else if (st.steps + 1 < chain_bound)
            next.push_back({dst, moved, st.steps + 1});
        }
      }
    }
    frontier = std::move(next);
  }

  // closure under composition
  std::set<std::vector<int>> group(gens.begin(), gens.end());
  std::vector<int> identity(k);
  for (int i = 0; i < k; ++i) identity[i] = i;
  group.insert(identity);
  bool grew = true;
  while (grew) {
    grew = false;
    std::vector<std::vector<int>> members(group.begin(), group.end());
    for (const auto& a : members)
      for (const auto& b : members) {
        std::vector<int> c(k);
        for (int i = 0; i < k; ++i) c[i] = a[b[i]];
        if (group.insert(c).second) grew = true;
      }
  }
  return {group.begin(), group.end()};
}

}  // namespace a2lab
