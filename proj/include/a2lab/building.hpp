#pragma once

#include <openssl/evp.h>

#include <algorithm>
#include <fstream>
#include <map>
#include <queue>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "a2lab/errors.hpp"
#include "a2lab/triangle_presentation.hpp"
#include "a2lab/typed_complex.hpp"

namespace a2lab {

inline std::string sha256_hex(const std::string& data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr);
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 0xf];
  }
  return out;
}

namespace detail {

/// Letters: x in [0,N) is a_x, x + N is a_x^{-1}.
class WordRewriter {
 public:
  explicit WordRewriter(const TrianglePresentation& tp) : n_(tp.generators()) {
    pos_pos_.assign(n_, std::vector<int>(n_, -1));
    neg_neg_.assign(n_, std::vector<int>(n_, -1));
    mixed_p_.assign(n_, std::vector<int>(n_, -1));
    mixed_w_.assign(n_, std::vector<int>(n_, -1));
    for (const auto& t : tp.triples) {
      pos_pos_[t[0]][t[1]] = t[2];   // a_x a_y = a_z^{-1}
      neg_neg_[t[1]][t[0]] = t[2];   // a_y^{-1} a_x^{-1} = a_z  (inverse of a_x a_y)
    }
    // a_x^{-1} a_y = a_p a_w^{-1}: from (x,p,q) in T, a_p a_q = a_x^{-1};
    // then a_q a_y = a_w^{-1} whenever (q,y,w) in T. The pair (p,w) must be
    // unique, which holds for triangle presentations of buildings; asserted.
    for (int x = 0; x < n_; ++x)
      for (int y = 0; y < n_; ++y) {
        if (x == y) continue;
        int hits = 0;
        for (int p = 0; p < n_; ++p) {
          int qq = pos_pos_[x][p];
          if (qq < 0) continue;
          int w = pos_pos_[qq][y];
          if (w < 0) continue;
          ++hits;
          mixed_p_[x][y] = p;
          mixed_w_[x][y] = w;
        }
        if (hits != 1)
          throw StructureError("mixed rewrite a_x^{-1} a_y not uniquely resolvable (x=" +
                               std::to_string(x) + ", y=" + std::to_string(y) + ")");
      }
  }

  int letters() const { return 2 * n_; }
  int inverse(int g) const { return g < n_ ? g + n_ : g - n_; }
  bool positive(int g) const { return g < n_; }

  /// Leftmost-rule rewriting to the normal shape: positive block then
  /// negative block, no reducible adjacent pair.
  std::vector<int> normalize(std::vector<int> w) const {
    bool changed = true;
    while (changed) {
      changed = false;
      for (std::size_t i = 0; i + 1 < w.size(); ++i) {
        int a = w[i], b = w[i + 1];
        if (a == inverse(b)) {
          w.erase(w.begin() + i, w.begin() + i + 2);
          changed = true;
          break;
        }
        if (positive(a) && positive(b) && pos_pos_[a][b] >= 0) {
          w[i] = pos_pos_[a][b] + n_;
          w.erase(w.begin() + i + 1);
          changed = true;
          break;
        }
        if (!positive(a) && !positive(b) && neg_neg_[a - n_][b - n_] >= 0) {
          w[i] = neg_neg_[a - n_][b - n_];
          w.erase(w.begin() + i + 1);
          changed = true;
          break;
        }
        if (!positive(a) && positive(b)) {
          int x = a - n_, y = b;
          // x == y was the cancellation case above
          w[i] = mixed_p_[x][y];
          w[i + 1] = mixed_w_[x][y] + n_;
          changed = true;
          break;
        }
      }
    }
    return w;
  }

 private:
  int n_;
  std::vector<std::vector<int>> pos_pos_, neg_neg_, mixed_p_, mixed_w_;
};

}  // namespace detail

/// Radius-r ball of the vertex-transitive building presented by tp.
/// Vertices are shortlex-BFS discovery ids of normal-form words; vertex 0 is
/// the identity (the center).
struct BuildingBall {
  int q = 0;
  int radius = 0;
  Vertex center = 0;
  TypedComplex complex;
  std::vector<int> dist_from_center;
  std::string presentation_sha256;

  int depth(Vertex v) const { return radius - dist_from_center.at(v); }
  bool interior(Vertex v, int margin = 1) const { return depth(v) >= margin; }

  nlohmann::json meta_json() const {
    return nlohmann::json{{"radius", radius}, {"presentation_sha256", presentation_sha256},
                          {"q", q},           {"center", center}};
  }
};

inline BuildingBall build_ball(const TrianglePresentation& tp, int radius) {
  std::string diag = tp.validate_diagnostic();
  if (!diag.empty()) throw InputError("build_ball: presentation invalid: " + diag);

  detail::WordRewriter rw(tp);
  const int n = tp.generators();

  std::map<std::vector<int>, int> ids;
  std::vector<std::vector<int>> words;
  std::vector<int> dist;
  auto intern = [&](const std::vector<int>& w) {
    auto it = ids.find(w);
    if (it != ids.end()) return it->second;
    int id = static_cast<int>(words.size());
    ids[w] = id;
    words.push_back(w);
    dist.push_back(-1);
    return id;
  };

  int root = intern({});
  dist[root] = 0;
  std::queue<int> frontier;
  frontier.push(root);
  while (!frontier.empty()) {
    int v = frontier.front();
    frontier.pop();
    if (dist[v] == radius) continue;  // boundary vertices are not expanded
    for (int g = 0; g < rw.letters(); ++g) {
      std::vector<int> w = words[v];
      w.push_back(g);
      w = rw.normalize(w);
      int u = intern(w);
      if (dist[u] < 0) {
        dist[u] = dist[v] + 1;
        frontier.push(u);
      }
    }
  }

  // induced edges: generator steps between any two ball members, including
  // pairs of boundary vertices
  std::vector<Edge> edges;
  std::set<Edge> edge_set;
  for (int v = 0; v < static_cast<int>(words.size()); ++v) {
    for (int g = 0; g < rw.letters(); ++g) {
      std::vector<int> w = words[v];
      w.push_back(g);
      w = rw.normalize(w);
      auto it = ids.find(w);
      if (it == ids.end() || it->second == v) continue;
      Edge e = make_edge(v, it->second);
      if (edge_set.insert(e).second) edges.push_back(e);
    }
  }

  // consistency: stepping by g then g^{-1} returns home (a failed round trip
  // would witness non-confluent rewriting)
  for (int v = 0; v < static_cast<int>(words.size()); ++v) {
    if (dist[v] > radius - 2) continue;
    for (int g = 0; g < rw.letters(); ++g) {
      std::vector<int> w1 = rw.normalize([&] {
        auto w = words[v];
        w.push_back(g);
        return w;
      }());
      std::vector<int> w2 = rw.normalize([&] {
        auto w = w1;
        w.push_back(rw.inverse(g));
        return w;
      }());
      if (w2 != words[v])
        throw StructureError("build_ball: rewriting round trip failed at vertex " +
                             std::to_string(v) + " letter " + std::to_string(g));
    }
  }

  // types: each a_x raises the type by 1, each a_x^{-1} by 2
  std::vector<int> types;
  for (const auto& w : words) {
    int t = 0;
    for (int g : w) t += (g < n ? 1 : 2);
    types.push_back(t % 3);
  }

  // triangles {g, g a_x, g a_x a_y} for (x,y,z) in T
  std::vector<Triangle> triangles;
  std::set<Triangle> triangle_set;
  for (int v = 0; v < static_cast<int>(words.size()); ++v) {
    for (const auto& t : tp.triples) {
      std::vector<int> w1 = rw.normalize([&] {
        auto w = words[v];
        w.push_back(t[0]);
        return w;
      }());
      auto it1 = ids.find(w1);
      if (it1 == ids.end()) continue;
      std::vector<int> w2 = rw.normalize([&] {
        auto w = w1;
        w.push_back(t[1]);
        return w;
      }());
      auto it2 = ids.find(w2);
      if (it2 == ids.end()) continue;
      Triangle tri = make_triangle(v, it1->second, it2->second);
      if (tri[0] != tri[1] && tri[1] != tri[2] && triangle_set.insert(tri).second)
        triangles.push_back(tri);
    }
  }

  BuildingBall ball;
  ball.q = tp.q();
  ball.radius = radius;
  ball.center = root;
  ball.dist_from_center = dist;
  ball.presentation_sha256 = sha256_hex(tp.to_json().dump());
  ball.complex = TypedComplex(std::move(types), std::move(edges), std::move(triangles));

  std::string cd = ball.complex.validate();
  if (!cd.empty()) throw StructureError("build_ball: complex invalid: " + cd);
  return ball;
}

/// Link of an interior vertex as a projective plane: points are the
/// neighbors of type tau+1, lines the neighbors of type tau+2, incidence
/// from the triangles on v. Validates all plane axioms and girth 6.
struct LinkPlane {
  ProjectivePlane plane;
  std::vector<Vertex> point_vertex;  // plane point -> ball vertex
  std::vector<Vertex> line_vertex;   // plane line  -> ball vertex

  int point_of(Vertex v) const {
    for (int i = 0; i < static_cast<int>(point_vertex.size()); ++i)
      if (point_vertex[i] == v) return i;
    throw InputError("vertex is not a point of this link");
  }
  int line_of(Vertex v) const {
    for (int i = 0; i < static_cast<int>(line_vertex.size()); ++i)
      if (line_vertex[i] == v) return i;
    throw InputError("vertex is not a line of this link");
  }
};

inline LinkPlane extract_and_validate_link(const BuildingBall& ball, Vertex v) {
  if (!ball.interior(v, 1))
    throw InputError("extract_and_validate_link: vertex is not interior");
  const TypedComplex& X = ball.complex;
  const int tau = X.type_of(v);
  LinkPlane out;
  for (Vertex w : X.neighbors(v)) {
    if (X.type_of(w) == (tau + 1) % 3) out.point_vertex.push_back(w);
    if (X.type_of(w) == (tau + 2) % 3) out.line_vertex.push_back(w);
  }
  out.plane.q = ball.q;
  out.plane.point_lines.assign(out.point_vertex.size(), {});
  out.plane.line_points.assign(out.line_vertex.size(), {});
  for (int p = 0; p < static_cast<int>(out.point_vertex.size()); ++p)
    for (int l = 0; l < static_cast<int>(out.line_vertex.size()); ++l)
      if (X.has_triangle(v, out.point_vertex[p], out.line_vertex[l])) {
        out.plane.point_lines[p].push_back(l);
        out.plane.line_points[l].push_back(p);
      }
  std::string diag = out.plane.validate();
  if (!diag.empty())
    throw StructureError("link of vertex " + std::to_string(v) + " invalid: " + diag);
  return out;
}

inline void save_ball(const BuildingBall& ball, const std::string& complex_path,
                      const std::string& meta_path) {
  std::ofstream c(complex_path);
  if (!c) throw InputError("cannot write " + complex_path);
  c << ball.complex.to_json().dump(1) << "\n";
  std::ofstream m(meta_path);
  if (!m) throw InputError("cannot write " + meta_path);
  nlohmann::json meta = ball.meta_json();
  meta["dist_from_center"] = ball.dist_from_center;
  m << meta.dump(1) << "\n";
}

inline BuildingBall load_ball(const std::string& complex_path, const std::string& meta_path) {
  std::ifstream c(complex_path);
  if (!c) throw InputError("cannot read " + complex_path);
  nlohmann::json jc;
  c >> jc;
  std::ifstream m(meta_path);
  if (!m) throw InputError("cannot read " + meta_path);
  nlohmann::json jm;
  m >> jm;
  BuildingBall ball;
  ball.complex = TypedComplex::from_json(jc);
  ball.q = jm.at("q");
  ball.radius = jm.at("radius");
  ball.center = jm.at("center");
  ball.presentation_sha256 = jm.at("presentation_sha256");
  ball.dist_from_center = jm.at("dist_from_center").get<std::vector<int>>();
  return ball;
}

}  // namespace a2lab
