#pragma once

#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "a2lab/diamond.hpp"
#include "a2lab/measures.hpp"
#include "a2lab/report.hpp"

namespace a2lab {

struct CatalogEntry {
  std::string name;
  DiamondInclusion inc;
  long long expected = -1;  // -1: record only
};

namespace detail {

inline DecoratedTree dt(FiniteTree tree, int x, int y, int s, int t) {
  DecoratedTree d;
  d.tree = std::move(tree);
  d.x = x;
  d.y = y;
  d.s = s;
  d.t = t;
  if (!d.valid()) throw InputError("catalog: invalid decorated tree " + d.to_json().dump());
  return d;
}

inline CatalogEntry entry(std::string name, DecoratedTree small, DecoratedTree big,
                          std::vector<int> embed, long long expected) {
  CatalogEntry e;
  e.name = std::move(name);
  e.inc.small = std::move(small);
  e.inc.big = std::move(big);
  e.inc.embed = std::move(embed);
  e.expected = expected;
  std::string diag = e.inc.diagnostic();
  if (!diag.empty()) throw InputError("catalog entry '" + e.name + "': " + diag);
  return e;
}

}  // namespace detail

/// The shipped q=2 verification catalog: every elementary-extension type with
/// its Lemma count, the point->edge direction classes, and composite
/// inclusions for the product oracle. Counts are for q = 2.
inline std::vector<CatalogEntry> default_catalog_q2() {
  using detail::dt;
  using detail::entry;
  const int q = 2;
  std::vector<CatalogEntry> out;

  DecoratedTree point00 = dt(FiniteTree(1), 0, 0, 0, 0);
  DecoratedTree point22 = dt(FiniteTree(1), 0, 0, 2, 2);
  DecoratedTree point11 = dt(FiniteTree(1), 0, 0, 1, 1);
  DecoratedTree vert20 = dt(FiniteTree(1), 0, 0, 2, 0);
  DecoratedTree vert40 = dt(FiniteTree(1), 0, 0, 4, 0);
  DecoratedTree vert42 = dt(FiniteTree(1), 0, 0, 4, 2);
  DecoratedTree horiz1 = dt(path_tree(2), 0, 1, 1, 0);
  DecoratedTree horiz2 = dt(path_tree(3), 0, 2, 2, 0);
  DecoratedTree alcove = dt(path_tree(2), 0, 0, 2, 0);
  DecoratedTree alcoveF = dt(path_tree(2), 0, 1, 2, -1);
  DecoratedTree rhombus = dt(path_tree(2), 1, 0, 3, 0);
  DecoratedTree bowtie = dt(path_tree(3), 1, 1, 2, 0);
  DecoratedTree tripod = dt(star_tree(3), 0, 0, 2, 0);
  DecoratedTree box21 = dt(path_tree(2), 1, 0, 5, 0);
  DecoratedTree box22 = dt(path_tree(3), 2, 0, 6, 0);
  DecoratedTree alcove_mid = dt(path_tree(2), 0, 0, 5, 3);

  // point -> edge, once per direction class (Lemma extdegenerate: q^2+q+1)
  out.push_back(entry("point->vertical edge, bottom (direction class +1)", point00, vert20, {0},
                      q * q + q + 1));
  out.push_back(entry("point->vertical edge, top (direction class +1)", point22, vert20, {0},
                      q * q + q + 1));
  out.push_back(entry("point->horizontal edge, x end (direction class +2)",
                      dt(FiniteTree(1), 0, 0, 1, 1), horiz1, {0}, q * q + q + 1));
  out.push_back(
      entry("point->horizontal edge, y end (direction class +2)", point00, horiz1, {1}, q * q + q + 1));

  // C_v / F_v from a non-point vertical diamond (Lemma extdegenerate: q^2)
  out.push_back(entry("vertical edge ->C_v-> vertical column", vert20, vert40, {0}, q * q));
  out.push_back(entry("vertical edge ->F_v-> vertical column", vert42, vert40, {0}, q * q));

  // B^c / B^f from a non-point horizontal diamond (q^2); the B^f copy sits
  // one height step up so its u-values match big's z0, z1 slots
  out.push_back(entry("horizontal edge ->B^c-> horizontal path", horiz1, horiz2, {1, 2}, q * q));
  out.push_back(entry("horizontal edge ->B^f-> horizontal path", dt(path_tree(2), 0, 1, 2, 1),
                      horiz2, {0, 1}, q * q));

  // B_z with valency 0 / 1 / 2 (Lemma extBz: q - v + 1)
  out.push_back(entry("vertical edge ->B_z(v=0)-> alcove", vert20, alcove, {0}, q + 1));
  out.push_back(entry("alcove ->B_z(v=1)-> bowtie", alcove, bowtie, {1, 0}, q - 1 + 1));
  out.push_back(entry("bowtie ->B_z(v=2)-> tripod", bowtie, tripod, {1, 0, 2}, q - 2 + 1));

  // C / F from a non-degenerate diamond (Lemma extFC: q)
  out.push_back(entry("alcove ->C-> rhombus", alcove, rhombus, {0, 1}, q));
  out.push_back(entry("alcove ->F-> rhombus", alcove, alcoveF, {0, 1}, q));

  // C / F from a horizontal (degenerate) diamond (Lemma extFC: q+1)
  out.push_back(
      entry("horizontal edge ->C-> alcove", horiz1, dt(path_tree(2), 1, 1, 2, 0), {0, 1}, q + 1));
  out.push_back(
      entry("horizontal edge ->F-> alcove", horiz1, dt(path_tree(2), 0, 0, 1, -1), {0, 1}, q + 1));

  // composite inclusions: constants recorded and cross-checked against the
  // decomposition product oracle; the first two also have closed forms
  // (flags at a vertex, |V_(1,1)|)
  out.push_back(entry("point->alcove (composite)", point00, alcove, {0}, 21));
  out.push_back(entry("point->rhombus (composite)", point00, rhombus, {0}, 42));
  out.push_back(entry("vertical edge->rhombus (composite)", vert20, rhombus, {0}, 6));
  out.push_back(entry("rhombus->box(2,1) (composite)", rhombus, box21, {0, 1}, 4));
  out.push_back(entry("vertical edge->box(2,1) (composite)", vert20, box21, {0}, -1));
  out.push_back(entry("rhombus->box(2,2) (composite)", rhombus, box22, {0, 1}, -1));
  out.push_back(entry("alcove->box(2,2) (composite)", alcove_mid, box22, {1, 2}, -1));
  out.push_back(entry("horizontal path->box(2,2) boundary", horiz2, box22, {2, 1, 0}, -1));
  out.push_back(entry("point->box(2,2) center (Cartan-flow cylinder)",
                      dt(FiniteTree(1), 0, 0, 3, 3), box22, {1}, -1));

  return out;
}

inline nlohmann::json catalog_to_json(const std::vector<CatalogEntry>& entries) {
  nlohmann::json j;
  j["pairs"] = nlohmann::json::array();
  for (const auto& e : entries) {
    nlohmann::json p;
    p["name"] = e.name;
    p["small"] = e.inc.small.to_json();
    p["big"] = e.inc.big.to_json();
    p["embed"] = e.inc.embed;
    if (e.expected >= 0)
      p["expected"] = e.expected;
    else
      p["expected"] = nullptr;
    j["pairs"].push_back(p);
  }
  return j;
}

inline std::vector<CatalogEntry> catalog_from_json(const nlohmann::json& j) {
  std::vector<CatalogEntry> out;
  for (const auto& p : j.at("pairs")) {
    CatalogEntry e;
    e.name = p.at("name");
    e.inc.small = DecoratedTree::from_json(p.at("small"));
    e.inc.big = DecoratedTree::from_json(p.at("big"));
    e.inc.embed = p.at("embed").get<std::vector<int>>();
    e.expected = p.at("expected").is_null() ? -1 : p.at("expected").get<long long>();
    std::string diag = e.inc.diagnostic();
    if (!diag.empty()) throw InputError("catalog entry '" + e.name + "': " + diag);
    out.push_back(std::move(e));
  }
  return out;
}

inline std::vector<CatalogEntry> load_catalog(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read catalog " + path);
  nlohmann::json j;
  in >> j;
  return catalog_from_json(j);
}

/// Expected extension count of one elementary step for thickness q+1,
/// given the shape of the diamond the step starts from.
inline long long expected_step_count(const ElementaryExtension& e, DiamondKind from, int q) {
  switch (e.kind) {
    case ExtKind::C:
    case ExtKind::F:
      return from == DiamondKind::Horizontal ? q + 1 : q;
    case ExtKind::B_z:
      return q - e.valency + 1;
    case ExtKind::C_v:
    case ExtKind::F_v:
    case ExtKind::B_c:
    case ExtKind::B_f:
      return from == DiamondKind::Point ? q * q + q + 1 : q * q;
  }
  return -1;
}

/// Double-count oracle: walk a decomposition chain from a fixed base
/// embedding, multiply per-step extension counts, compare with the direct
/// count, and check each step against its Lemma value.
struct ChainOracleResult {
  long long direct = 0;
  long long product = 1;
  bool steps_match_lemmas = true;
  std::vector<std::pair<std::string, long long>> steps;
};

inline ChainOracleResult chain_product_oracle(const DiamondInclusion& inc,
                                              const BuildingBall& ball,
                                              const std::vector<Vertex>& alpha_small) {
  CrazyDiamond small = realize_crazy_diamond(inc.small);
  CrazyDiamond big = realize_crazy_diamond(inc.big);
  auto incl = realization_inclusion(small, big, inc.embed);

  ChainOracleResult res;
  {
    std::vector<std::pair<Vertex, Vertex>> pins;
    for (auto& [sv, bv] : incl) pins.push_back({bv, alpha_small[sv]});
    res.direct = static_cast<long long>(
        enumerate_pinned(big.realization, ball.complex, pins).size());
  }

  auto chain = decompose_inclusion(inc);
  DecoratedTree current = inc.small;
  std::vector<int> embed = inc.embed;
  std::vector<Vertex> beta = alpha_small;  // embedding of the current realization

  for (const auto& step : chain) {
    DiamondKind from = diamond_kind(current);
    DecoratedTree next = apply_extension(current, step);
    std::vector<int> next_embed = embed;
    if (next.tree.size() > current.tree.size()) {
      // recover which big vertex the new leaf occupies: the unique neighbor
      // of the attachment point consistent with staying inside big
      int attach = (step.kind == ExtKind::B_z)   ? step.vertex
                   : (step.kind == ExtKind::B_c) ? current.x
                                                 : current.y;
      int big_vertex = -1;
      std::set<int> occupied(embed.begin(), embed.end());
      auto dbx = inc.big.tree.distances_from(inc.big.x);
      auto dby = inc.big.tree.distances_from(inc.big.y);
      auto dnx = next.tree.distances_from(next.x);
      auto dny = next.tree.distances_from(next.y);
      int leaf = next.tree.size() - 1;
      for (int w : inc.big.tree.adj[embed[attach]]) {
        if (occupied.count(w)) continue;
        if (next.s - dnx[leaf] > inc.big.s - dbx[w]) continue;
        if (next.t + dny[leaf] < inc.big.t + dby[w]) continue;
        big_vertex = w;
        break;
      }
      if (big_vertex < 0) throw StructureError("chain oracle: cannot place attached leaf");
      next_embed.push_back(big_vertex);
    }

    CrazyDiamond cur_real = realize_crazy_diamond(current);
    CrazyDiamond next_real = realize_crazy_diamond(next);
    // inclusion of cur into next at realization level: tree ids are shared
    std::vector<std::pair<Vertex, Vertex>> pins;
    for (Vertex v = 0; v < cur_real.realization.vertex_count(); ++v) {
      auto [z, u] = cur_real.coords[v];
      pins.push_back({next_real.vertex_at(z, u), beta[v]});
    }
    auto exts = enumerate_pinned(next_real.realization, ball.complex, pins);
    long long count = static_cast<long long>(exts.size());
    res.product *= count;
    res.steps.push_back({ext_kind_name(step.kind), count});
    if (expected_step_count(step, from, ball.q) != count) res.steps_match_lemmas = false;
    if (exts.empty()) throw DepthError("chain oracle: no extension at a step");
    beta = exts.front();
    current = next;
    embed = next_embed;
  }
  return res;
}

/// The P_Upsilon-symmetry suite: constancy over every admissible interior
/// alpha, recorded constants vs the Lemma values, and the decomposition
/// product oracle per catalog entry.
inline VerificationReport symmetry_suite(const BuildingBall& ball,
                                         const std::vector<CatalogEntry>& entries,
                                         int margin = -1) {
  VerificationReport report("symmetry");
  for (const auto& e : entries) {
    SymmetryCheck check = extension_count_verify(e.inc, ball, margin, e.name);
    report.check(check.constant,
                 nlohmann::json{{"entry", e.name}, {"violation", check.witness}});
    if (e.expected >= 0)
      report.check(check.index.value == e.expected,
                   nlohmann::json{{"entry", e.name},
                                  {"count", check.index.value},
                                  {"expected", e.expected}});
    // product oracle at the first admissible alpha
    CrazyDiamond small = realize_crazy_diamond(e.inc.small);
    CrazyDiamond big = realize_crazy_diamond(e.inc.big);
    int m = margin < 0 ? inclusion_reach(e.inc) : margin;
    EnumOptions interior;
    interior.image_filter = [&ball, m](Vertex v) { return ball.depth(v) >= m; };
    EnumOptions one = interior;
    one.max_results = 1;
    auto alphas = enumerate_pinned(small.realization, ball.complex, {}, one);
    if (alphas.empty()) throw DepthError("symmetry suite: no admissible alpha");
    ChainOracleResult oracle = chain_product_oracle(e.inc, ball, alphas.front());
    report.check(oracle.direct == oracle.product,
                 nlohmann::json{{"entry", e.name},
                                {"direct", oracle.direct},
                                {"product", oracle.product}});
    report.check(oracle.steps_match_lemmas,
                 nlohmann::json{{"entry", e.name}, {"steps", [&] {
                                   nlohmann::json s = nlohmann::json::array();
                                   for (auto& [k, c] : oracle.steps) s.push_back({k, c});
                                   return s;
                                 }()}});
  }
  return report;
}

}  // namespace a2lab
