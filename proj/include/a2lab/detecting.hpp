#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "a2lab/boundary.hpp"
#include "a2lab/building.hpp"
#include "a2lab/combinatorial_distance.hpp"
#include "a2lab/convexity.hpp"
#include "a2lab/diamond.hpp"
#include "a2lab/embedding_search.hpp"
#include "a2lab/errors.hpp"
#include "a2lab/rational.hpp"
#include "a2lab/report.hpp"

namespace a2lab {

// ---------------------------------------------------------------------------
// singular lines through a base vertex

/// Model of the singular segment [-back..+fwd] along the + wall: vertex k at
/// (k, 0). Embeddings pinned 0 -> o are the (u,v)-germ pairs at o.
inline ModelComplex line_segment_model(int back, int fwd) {
  std::vector<ACoord> pts;
  for (int k = -back; k <= fwd; ++k) pts.push_back({k, 0});
  return model_from_points(std::move(pts));
}

/// All singular line germs through o: images of the segment model, pinned
/// 0 -> o, in deterministic order.
inline std::vector<std::vector<Vertex>> singular_lines_through(const BuildingBall& ball,
                                                               Vertex o, int back, int fwd) {
  ModelComplex model = line_segment_model(back, fwd);
  return enumerate_pinned(model.complex, ball.complex, {{model.vertex_at({0, 0}), o}});
}

// ---------------------------------------------------------------------------
// the comb (detecting flow model) in wall-tree coordinates

/// Comb tree: spine vertices for k in [spine_lo, spine_hi], an antenna path
/// of length `antenna_len` at each spine position listed in `antennas`.
struct CombTree {
  FiniteTree tree;
  std::map<int, int> spine;                    // k -> tree vertex
  std::map<std::pair<int, int>, int> antenna;  // (k, j>=1) -> tree vertex
  int spine_lo = 0, spine_hi = 0;
};

inline CombTree make_comb_tree(int spine_lo, int spine_hi, const std::vector<int>& antennas,
                               int antenna_len) {
  CombTree comb;
  comb.spine_lo = spine_lo;
  comb.spine_hi = spine_hi;
  int next = 0;
  FiniteTree t(0);
  auto new_vertex = [&]() {
    t.adj.push_back({});
    return next++;
  };
  for (int k = spine_lo; k <= spine_hi; ++k) {
    comb.spine[k] = new_vertex();
    if (k > spine_lo) t.add_edge(comb.spine[k - 1], comb.spine[k]);
  }
  for (int k : antennas) {
    int prev = comb.spine.at(k);
    for (int j = 1; j <= antenna_len; ++j) {
      comb.antenna[{k, j}] = new_vertex();
      t.add_edge(prev, comb.antenna[{k, j}]);
      prev = comb.antenna[{k, j}];
    }
  }
  comb.tree = t;
  return comb;
}

/// The comb Y = pi^{-1}(comb tree) clipped to a tall height band, as an
/// explicit complex over (tree vertex, u) coordinates. The line ell sits at
/// u = -k over spine position k, so the +-type direction points toward
/// increasing k. Antenna point (k,j) carries u in a band around -k.
struct CombComplex {
  CombTree comb;
  TypedComplex complex;
  std::vector<std::pair<int, int>> coords;  // vertex -> (tree vertex, u)
  std::map<std::pair<int, int>, Vertex> index;

  Vertex at(int tree_vertex, int u) const {
    auto it = index.find({tree_vertex, u});
    if (it == index.end()) throw InputError("comb complex: no vertex at (node,u)");
    return it->second;
  }
  Vertex line_vertex(int k) const { return at(comb.spine.at(k), -k); }
  Vertex antenna_vertex(int k, int a, int b) const {
    // sector slot (a,b) of the antenna chamber at spine position k
    if (a + b == 0) return line_vertex(k);
    return at(comb.antenna.at({k, a + b}), -k - a + b);
  }
};

inline CombComplex make_comb_complex(int spine_lo, int spine_hi,
                                     const std::vector<int>& antennas, int antenna_len,
                                     int band) {
  CombComplex out;
  out.comb = make_comb_tree(spine_lo, spine_hi, antennas, antenna_len);
  // parities: spine k has parity of |k|; antenna (k,j) parity |k|+j
  std::map<int, int> center_u;  // tree vertex -> reference height (the line)
  std::map<int, int> parity;
  for (auto& [k, v] : out.comb.spine) {
    center_u[v] = -k;
    parity[v] = ((k % 2) + 2) % 2;
  }
  for (auto& [kj, v] : out.comb.antenna) {
    center_u[v] = -kj.first;  // antenna climbs from the line vertex
    parity[v] = ((kj.first + kj.second) % 2 + 2) % 2;
  }
  for (int v = 0; v < out.comb.tree.size(); ++v) {
    for (int u = center_u[v] - band; u <= center_u[v] + band; ++u) {
      if (((u % 2) + 2) % 2 != parity[v]) continue;
      out.coords.push_back({v, u});
    }
  }
  std::sort(out.coords.begin(), out.coords.end());
  for (int i = 0; i < static_cast<int>(out.coords.size()); ++i) out.index[out.coords[i]] = i;

  std::vector<int> types;
  for (auto& [v, u] : out.coords) types.push_back(((2 * u) % 3 + 3) % 3);
  std::vector<Edge> edges;
  std::vector<Triangle> triangles;
  for (int i = 0; i < static_cast<int>(out.coords.size()); ++i) {
    auto [z, u] = out.coords[i];
    auto vert = out.index.find({z, u + 2});
    if (vert != out.index.end()) edges.push_back(make_edge(i, vert->second));
    for (int w : out.comb.tree.adj[z]) {
      for (int du : {-1, +1}) {
        auto diag = out.index.find({w, u + du});
        if (diag != out.index.end() && diag->second > i)
          edges.push_back(make_edge(i, diag->second));
      }
      if (vert != out.index.end()) {
        auto mid = out.index.find({w, u + 1});
        if (mid != out.index.end())
          triangles.push_back(make_triangle(i, vert->second, mid->second));
      }
    }
  }
  out.complex = TypedComplex(std::move(types), std::move(edges), std::move(triangles));
  return out;
}

// ---------------------------------------------------------------------------
// detecting truncation: embedding set of a comb hull with the line pinned

/// Finite model of the detecting flow at antenna n: the convex hull (inside
/// the comb) of the line segment and the antenna-n sector piece of depth
/// `antenna_depth`, realized as a standalone complex plus the data needed to
/// pin the line and read off the antenna germ.
struct DetectingTruncation {
  CombComplex host;              // generous ambient comb
  std::vector<Vertex> hull;      // hull vertices inside host
  TypedComplex model;            // induced complex on the hull, dense ids
  std::vector<Vertex> host_of;   // model vertex -> host vertex
  std::map<Vertex, Vertex> model_of;
  int spine_lo, spine_hi;
  int n = 0;             // antenna position of interest
  int antenna_depth = 0;

  Vertex model_line_vertex(int k) const { return model_of.at(host.line_vertex(k)); }
  Vertex model_antenna_vertex(int k, int a, int b) const {
    return model_of.at(host.antenna_vertex(k, a, b));
  }
};

inline DetectingTruncation make_detecting_truncation(int spine_lo, int spine_hi, int n,
                                                     int antenna_depth) {
  DetectingTruncation out;
  out.spine_lo = spine_lo;
  out.spine_hi = spine_hi;
  out.n = n;
  out.antenna_depth = antenna_depth;
  out.host = make_comb_complex(spine_lo, spine_hi, {n}, antenna_depth * 2,
                               2 * antenna_depth + 4);
  std::vector<Vertex> seed;
  for (int k = spine_lo; k <= spine_hi; ++k) seed.push_back(out.host.line_vertex(k));
  for (int a = 0; a <= antenna_depth; ++a)
    for (int b = 0; a + b <= antenna_depth; ++b)
      seed.push_back(out.host.antenna_vertex(n, a, b));
  out.hull = convex_hull(out.host.complex, seed);
  out.model = induced_complex(out.host.complex, out.hull);
  std::vector<Vertex> sorted = out.hull;
  std::sort(sorted.begin(), sorted.end());
  out.host_of = sorted;
  for (int i = 0; i < static_cast<int>(sorted.size()); ++i) out.model_of[sorted[i]] = i;
  return out;
}

/// Embedding set of the truncation with the model line pinned to `line`
/// (line[i] is the image of spine position spine_lo + i).
inline EmbeddingSet detecting_embeddings(const DetectingTruncation& trunc,
                                         const BuildingBall& ball,
                                         const std::vector<Vertex>& line) {
  if (static_cast<int>(line.size()) != trunc.spine_hi - trunc.spine_lo + 1)
    throw InputError("detecting_embeddings: line length mismatch");
  std::vector<std::pair<Vertex, Vertex>> pins;
  for (int k = trunc.spine_lo; k <= trunc.spine_hi; ++k)
    pins.push_back({trunc.model_line_vertex(k), line[k - trunc.spine_lo]});
  return make_embedding_set(trunc.model, ball.complex, pins);
}

// ---------------------------------------------------------------------------
// genericity

/// The alcove of Q(o,C) at o as a flag of lk(o): p = image of slot (1,0)
/// (type tau+1), l = image of slot (0,1) (type tau+2).
/// (u,v)-genericity at o: p is opposite (non-incident to) x1, the first
/// vertex of [o u), and l is opposite y1, the first vertex of [o v).
inline bool genericity_test(const BuildingBall& ball, Vertex o, Vertex p, Vertex l, Vertex x1,
                            Vertex y1) {
  LinkPlane link = extract_and_validate_link(ball, o);
  int pp = link.point_of(p);
  int ll = link.line_of(l);
  int lx = link.line_of(x1);   // x1 lies one step toward u: type tau+2 side
  int py = link.point_of(y1);  // y1 one step toward v: type tau+1 side
  return link.plane.vertices_opposite(pp, lx) && link.plane.vertices_opposite(py, ll);
}

// ---------------------------------------------------------------------------
// antenna pushforward (Prop. pinac at finite depth)

/// Reads off the box(n+1, 1) germ at o of the chamber carried by antenna n
/// of a detecting embedding, using the antenna's (1,1) corner as the deep
/// sigma-additivity witness.
inline std::vector<Vertex> antenna_germ(const DetectingTruncation& trunc,
                                        const BuildingBall& ball,
                                        const std::vector<Vertex>& beta,
                                        const ModelComplex& box_shape) {
  const TypedComplex& X = ball.complex;
  Vertex o = beta[trunc.model_line_vertex(0)];
  Vertex witness = beta[trunc.model_antenna_vertex(trunc.n, 1, 1)];
  std::vector<Vertex> image(box_shape.complex.vertex_count(), -1);
  const auto& orow = X.distance_row(o);
  for (int v = 0; v < box_shape.complex.vertex_count(); ++v) {
    ACoord slot = box_shape.coords[v];
    if (slot == ACoord{0, 0}) {
      image[v] = o;
      continue;
    }
    Vertex found = -1;
    for (Vertex w = 0; w < X.vertex_count(); ++w) {
      if (orow[w] != slot.a + slot.b) continue;
      if (orow[witness] != orow[w] + X.distance(w, witness)) continue;
      if (!(sigma_vertices(X, o, w) == slot)) continue;
      if (!sigma_additive(X, o, w, witness)) continue;
      if (found >= 0 && found != w)
        throw StructureError("antenna_germ: ambiguous slot");
      found = w;
    }
    if (found < 0) throw StructureError("antenna_germ: unresolved slot");
    image[v] = found;
  }
  return image;
}

struct PushforwardReport {
  VerificationReport report{"detecting"};            // the literal E_n clause
  VerificationReport corrected{"detecting-generic"};  // restriction to the generic set
  Rat total_mass = 0;
  int support_size = 0;
};

/// Prop. pinac, n > 0 clause: the pi_n pushforward of the uniform measure on
/// the pinned detecting truncation equals the normalized restriction of
/// harmonic measure to E_n(v), at box(n+1,1) germ resolution.
inline PushforwardReport detecting_pushforward_check(const BuildingBall& ball,
                                                     const std::vector<Vertex>& line,
                                                     int spine_lo, int n, int antenna_depth) {
  PushforwardReport out;
  DetectingTruncation trunc = make_detecting_truncation(
      spine_lo, spine_lo + static_cast<int>(line.size()) - 1, n, antenna_depth);
  EmbeddingSet set = detecting_embeddings(trunc, ball, line);
  if (set.cardinality() == 0) throw DepthError("detecting: empty embedding set");

  Vertex o = line[-spine_lo];
  ModelComplex box_shape = box_model(n + 1, 1);
  GermSpace germs = box_germs(ball, o, n + 1, 1);

  std::map<std::vector<Vertex>, int> germ_index;
  for (std::size_t i = 0; i < germs.size(); ++i) germ_index[germs.germs[i]] = static_cast<int>(i);

  std::vector<long long> pushed(germs.size(), 0);
  for (const auto& beta : set.members) {
    auto img = antenna_germ(trunc, ball, beta, box_shape);
    auto it = germ_index.find(img);
    if (it == germ_index.end())
      throw StructureError("detecting: pushforward image is not a germ at o");
    ++pushed[it->second];
  }

  // E_n(v) at this resolution: germs through line[n] but not line[n+1].
  // The literal source statement restricts harmonic measure to E_n(v); the
  // true support is the subset of germs (u,v)-generic at line[n] (the
  // - direction constraint at x_n is not implied by E_n membership), so the
  // literal clause is expected to fail and is reported as stated, while the
  // corrected restriction is asserted in `corrected`.
  Vertex lam_n = line[n - spine_lo];
  Vertex lam_n1 = line[n + 1 - spine_lo];
  Vertex x_back = line[n - 1 - spine_lo];
  std::vector<char> in_En(germs.size(), 0), in_generic(germs.size(), 0);
  long long en_size = 0, generic_size = 0;
  for (std::size_t i = 0; i < germs.size(); ++i) {
    bool through_n = germs.image(i, ACoord{n, 0}) == lam_n;
    bool through_n1 = germs.image(i, ACoord{n + 1, 0}) == lam_n1;
    if (through_n && !through_n1) {
      in_En[i] = 1;
      ++en_size;
      // generic at x_n: the + continuation (slot (n+1,0)) opposite the
      // backward line vertex, and the - first step (slot (n,1)) opposite the
      // forward line vertex, in lk(line[n])
      if (genericity_test(ball, lam_n, germs.image(i, ACoord{n + 1, 0}),
                          germs.image(i, ACoord{n, 1}), x_back, lam_n1)) {
        in_generic[i] = 1;
        ++generic_size;
      }
    }
  }

  for (std::size_t i = 0; i < germs.size(); ++i) {
    Rat lhs(pushed[i], static_cast<long>(set.cardinality()));
    Rat rhs_literal = in_En[i] ? Rat(1, static_cast<long>(en_size)) : Rat(0);
    Rat rhs_generic = in_generic[i] ? Rat(1, static_cast<long>(generic_size)) : Rat(0);
    out.report.check(lhs == rhs_literal,
                     nlohmann::json{{"germ", i},
                                    {"pushforward", rat_to_string(lhs)},
                                    {"restricted", rat_to_string(rhs_literal)}});
    out.corrected.check(lhs == rhs_generic,
                        nlohmann::json{{"germ", i},
                                       {"pushforward", rat_to_string(lhs)},
                                       {"generic_restricted", rat_to_string(rhs_generic)}});
    out.total_mass += lhs;
    if (pushed[i] > 0) ++out.support_size;
  }
  out.report.check(out.total_mass == Rat(1), nlohmann::json{{"total", rat_to_string(out.total_mass)}});
  out.corrected.check(out.total_mass == Rat(1),
                      nlohmann::json{{"total", rat_to_string(out.total_mass)}});
  return out;
}

/// Prop. pinac, n = 0 clause: the pi_0 pushforward is supported on the
/// (u,v)-generic-at-o germs with constant density, and the support matches
/// genericity_test exactly (Lemma sectorpi0 as an equivalence).
inline PushforwardReport detecting_pi0_check(const BuildingBall& ball,
                                             const std::vector<Vertex>& line, int spine_lo,
                                             int antenna_depth) {
  PushforwardReport out;
  out.report.suite = "detecting-pi0";
  DetectingTruncation trunc = make_detecting_truncation(
      spine_lo, spine_lo + static_cast<int>(line.size()) - 1, 0, antenna_depth);
  EmbeddingSet set = detecting_embeddings(trunc, ball, line);
  if (set.cardinality() == 0) throw DepthError("detecting pi0: empty embedding set");

  Vertex o = line[-spine_lo];
  Vertex x1 = line[-spine_lo - 1];
  Vertex y1 = line[-spine_lo + 1];
  ModelComplex box_shape = box_model(1, 1);
  GermSpace germs = box_germs(ball, o, 1, 1);
  std::map<std::vector<Vertex>, int> germ_index;
  for (std::size_t i = 0; i < germs.size(); ++i) germ_index[germs.germs[i]] = static_cast<int>(i);

  std::vector<long long> pushed(germs.size(), 0);
  for (const auto& beta : set.members) {
    auto img = antenna_germ(trunc, ball, beta, box_shape);
    auto it = germ_index.find(img);
    if (it == germ_index.end()) throw StructureError("pi0: image is not a germ");
    ++pushed[it->second];
  }

  // constant density on the support
  long long constant = 0;
  for (std::size_t i = 0; i < germs.size(); ++i)
    if (pushed[i] > 0) {
      if (constant == 0) constant = pushed[i];
      out.report.check(pushed[i] == constant,
                       nlohmann::json{{"germ", i}, {"count", pushed[i]}, {"expected", constant}});
      ++out.support_size;
    }

  // support == genericity (sweep of every depth-(1,1) germ at o)
  for (std::size_t i = 0; i < germs.size(); ++i) {
    bool generic = genericity_test(ball, o, germs.image(i, ACoord{1, 0}),
                                   germs.image(i, ACoord{0, 1}), x1, y1);
    bool in_support = pushed[i] > 0;
    out.report.check(generic == in_support,
                     nlohmann::json{{"germ", i}, {"generic", generic}, {"support", in_support}});
  }
  return out;
}

// ---------------------------------------------------------------------------
// shift compatibility

/// The shift S_Y on truncations: precomposing an embedding of the antenna-n
/// truncation with the index shift yields an embedding of the antenna-(n+1)
/// truncation over the same line; antenna germs shift accordingly.
inline VerificationReport detecting_shift_check(const BuildingBall& ball,
                                                const std::vector<Vertex>& line, int spine_lo,
                                                int n, int antenna_depth) {
  VerificationReport report("detecting-shift");
  // the truncations use one spine vertex fewer than the pinned line, so the
  // antenna-(n+1) copy can be pinned to the line shifted one step toward v
  const int spine_hi = spine_lo + static_cast<int>(line.size()) - 2;
  DetectingTruncation tn = make_detecting_truncation(spine_lo, spine_hi, n, antenna_depth);
  DetectingTruncation tn1 = make_detecting_truncation(spine_lo, spine_hi, n + 1, antenna_depth);

  std::vector<Vertex> unshifted(line.begin(), line.end() - 1);
  EmbeddingSet sn = detecting_embeddings(tn, ball, unshifted);
  std::vector<std::pair<Vertex, Vertex>> pins;
  for (int k = tn1.spine_lo; k <= tn1.spine_hi; ++k)
    pins.push_back({tn1.model_line_vertex(k), line[k - tn1.spine_lo + 1]});
  EmbeddingSet sn1 = make_embedding_set(tn1.model, ball.complex, pins);

  report.check(sn.cardinality() == sn1.cardinality(),
               nlohmann::json{{"n", sn.cardinality()}, {"n1", sn1.cardinality()}});
  // antenna-germ multisets agree: pi_n of the unshifted equals pi_{n+1} of
  // the shifted family, both read at the same base o' = line[n+1... they are
  // literally the same set of embeddings of isomorphic models
  std::multiset<std::vector<Vertex>> a, b;
  for (const auto& beta : sn.members) {
    std::vector<Vertex> key;
    for (int aa = 0; aa <= 1; ++aa)
      for (int bb = 0; aa + bb <= 1; ++bb)
        key.push_back(beta[tn.model_antenna_vertex(tn.n, aa, bb)]);
    a.insert(key);
  }
  for (const auto& beta : sn1.members) {
    std::vector<Vertex> key;
    for (int aa = 0; aa <= 1; ++aa)
      for (int bb = 0; aa + bb <= 1; ++bb)
        key.push_back(beta[tn1.model_antenna_vertex(tn1.n, aa, bb)]);
    b.insert(key);
  }
  report.check(a == b, nlohmann::json{{"id", "antenna multiset"}});
  return report;
}

// ---------------------------------------------------------------------------
// shadow factorization (§5.1 join lemma ingredient)

/// Omega_o(z) = Omega_o(z_+) ∩ Omega_{z_+}(z) as germ sets, plus
/// pr_+-saturation: the walls seen in Omega_o(z) are exactly those of
/// Omega_o(z_+).
inline VerificationReport shadow_factorization_check(const BuildingBall& ball, Vertex o,
                                                     Vertex z, int depth) {
  VerificationReport report("shadow-factorization");
  ACoord sig = sigma_vertices(ball.complex, o, z);
  if (graph_length(sig) > depth) throw DepthError("shadow factorization: z too deep");
  GermSpace germs = sector_germs(ball, o, depth);

  // z_+ = the (m,0) corner of Conv(o,z): unique vertex with sigma(o,.) =
  // (m,0) additive toward z
  Vertex zplus = -1;
  if (sig.b == 0) {
    zplus = z;
  } else {
    for (Vertex w = 0; w < ball.complex.vertex_count(); ++w) {
      if (ball.complex.distance_row(o)[w] != sig.a) continue;
      if (sigma_vertices(ball.complex, o, w) == ACoord{sig.a, 0} &&
          sigma_additive(ball.complex, o, w, z)) {
        if (zplus >= 0) throw StructureError("z_+ not unique");
        zplus = w;
      }
    }
  }
  if (zplus < 0) throw StructureError("z_+ not found");
  ACoord zp_slot{sig.a, 0};
  ACoord rel = sigma_vertices(ball.complex, zplus, z);

  std::set<std::vector<Vertex>> walls_z, walls_zplus;
  for (std::size_t i = 0; i < germs.size(); ++i) {
    bool in_z = germs.germ_contains(i, z);
    bool in_zplus = germs.germ_contains(i, zplus);
    // membership of z in Q(z_+, C) given z_+ in the germ: the slot of z must
    // sit at slot(z_+) + sigma(z_+, z)
    bool in_mixed = false;
    if (in_zplus) {
      ACoord want = zp_slot + rel;
      if (want.a + want.b <= depth && germs.image(i, want) == z) in_mixed = true;
    }
    report.check(in_z == (in_zplus && in_mixed),
                 nlohmann::json{{"germ", i},
                                {"in_z", in_z},
                                {"in_zplus", in_zplus},
                                {"in_mixed", in_mixed}});
    // walls for the pr_+ saturation claim
    std::vector<Vertex> wall;
    for (int k = 0; k <= depth; ++k) wall.push_back(germs.image(i, ACoord{k, 0}));
    if (in_z) walls_z.insert(wall);
    if (in_zplus) walls_zplus.insert(wall);
  }
  report.check(walls_z == walls_zplus, nlohmann::json{{"id", "pr+ saturation"}});
  return report;
}

}  // namespace a2lab
