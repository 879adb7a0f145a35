#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "a2lab/building.hpp"
#include "a2lab/diamond.hpp"
#include "a2lab/embedding_search.hpp"
#include "a2lab/errors.hpp"
#include "a2lab/parallel.hpp"
#include "a2lab/rational.hpp"
#include "a2lab/report.hpp"

namespace a2lab {

/// A finite restricted embedding space Isom(Y,X)^alpha with its members
/// enumerated and frozen.
struct EmbeddingSet {
  const TypedComplex* domain = nullptr;
  const TypedComplex* codomain = nullptr;
  EmbeddingConstraint constraint;
  std::vector<std::vector<Vertex>> members;

  std::size_t cardinality() const { return members.size(); }
};

inline EmbeddingSet make_embedding_set(const TypedComplex& domain, const TypedComplex& codomain,
                                       const std::vector<std::pair<Vertex, Vertex>>& pins,
                                       const EnumOptions& opts = {}) {
  EmbeddingSet set;
  set.domain = &domain;
  set.codomain = &codomain;
  set.constraint.pins = pins;
  set.members = enumerate_pinned(domain, codomain, pins, opts);
  return set;
}

/// Exact rational measure on an EmbeddingSet. The uniform probability is the
/// restricted prouniform measure at this truncation.
struct CylinderMeasure {
  const EmbeddingSet* base = nullptr;
  std::vector<Rat> weights;

  static CylinderMeasure uniform(const EmbeddingSet& set) {
    CylinderMeasure m;
    m.base = &set;
    if (set.cardinality() == 0) throw InputError("uniform measure on empty embedding set");
    m.weights.assign(set.cardinality(), Rat(1, static_cast<long>(set.cardinality())));
    return m;
  }

  Rat total() const {
    Rat sum = 0;
    for (const Rat& w : weights) sum += w;
    return sum;
  }
};

/// mu^alpha of the cylinder {beta : beta extends the given partial map}.
/// Empty cylinders have measure 0 (not an error).
inline Rat cylinder_measure(const CylinderMeasure& mu,
                            const std::vector<std::pair<Vertex, Vertex>>& cylinder_pins) {
  Rat mass = 0;
  for (std::size_t i = 0; i < mu.base->members.size(); ++i) {
    const auto& beta = mu.base->members[i];
    bool inside = true;
    for (auto& [dv, xv] : cylinder_pins)
      if (beta.at(dv) != xv) {
        inside = false;
        break;
      }
    if (inside) mass += mu.weights[i];
  }
  return mass;
}

// ---------------------------------------------------------------------------
// relative indices and P-symmetry verification

struct RelativeIndex {
  long long value = 0;
  bool verified_constant = false;
  std::size_t alphas_swept = 0;
};

/// Vertex-level inclusion of realized diamonds induced by a DiamondInclusion:
/// small realization vertex (z,u) -> big realization vertex (embed[z], u).
inline std::vector<std::pair<Vertex, Vertex>> realization_inclusion(const CrazyDiamond& small,
                                                                    const CrazyDiamond& big,
                                                                    const std::vector<int>& embed) {
  std::vector<std::pair<Vertex, Vertex>> map;
  for (Vertex v = 0; v < small.realization.vertex_count(); ++v) {
    auto [z, u] = small.coords[v];
    map.push_back({v, big.vertex_at(embed[z], u)});
  }
  return map;
}

/// Search reach of an inclusion: how far the big realization extends away
/// from the image of the small one. Admissible base embeddings must sit at
/// least this deep in the ball for extension counts to be building-true.
inline int inclusion_reach(const DiamondInclusion& inc) {
  CrazyDiamond small = realize_crazy_diamond(inc.small);
  CrazyDiamond big = realize_crazy_diamond(inc.big);
  auto incl = realization_inclusion(small, big, inc.embed);
  std::vector<char> in_image(big.realization.vertex_count(), 0);
  for (auto& [sv, bv] : incl) in_image[bv] = 1;
  int reach = 1;
  for (Vertex w = 0; w < big.realization.vertex_count(); ++w) {
    const auto& row = big.realization.distance_row(w);
    int best = 1 << 30;
    for (Vertex v = 0; v < big.realization.vertex_count(); ++v)
      if (in_image[v]) best = std::min(best, static_cast<int>(row[v]));
    reach = std::max(reach, best);
  }
  return reach;
}

struct SymmetryCheck {
  std::string name;
  RelativeIndex index;
  bool constant = true;
  long long first_count = -1;
  nlohmann::json witness;  // populated on violation
};

/// Enumerates extensions over every admissible alpha in the ball interior
/// and asserts the counts agree (Theorem: the building is P_Upsilon-symmetric).
/// margin < 0 selects the default: the diameter of the big realization.
inline SymmetryCheck extension_count_verify(const DiamondInclusion& inc, const BuildingBall& ball,
                                            int margin = -1, const std::string& name = "") {
  std::string diag = inc.diagnostic();
  if (!diag.empty()) throw InputError("extension_count_verify: " + diag);
  CrazyDiamond small = realize_crazy_diamond(inc.small);
  CrazyDiamond big = realize_crazy_diamond(inc.big);
  auto incl = realization_inclusion(small, big, inc.embed);

  if (margin < 0) margin = inclusion_reach(inc);

  EnumOptions interior;
  interior.image_filter = [&ball, margin](Vertex v) { return ball.depth(v) >= margin; };
  auto alphas = enumerate_pinned(small.realization, ball.complex, {}, interior);

  SymmetryCheck out;
  out.name = name;
  out.index.alphas_swept = alphas.size();
  if (alphas.empty())
    throw DepthError("extension_count_verify: no admissible alpha at margin " +
                     std::to_string(margin));

  std::vector<long long> counts = parallel_map<long long>(
      static_cast<int>(alphas.size()), [&](int i) -> long long {
        std::vector<std::pair<Vertex, Vertex>> pins;
        for (auto& [sv, bv] : incl) pins.push_back({bv, alphas[i][sv]});
        return static_cast<long long>(
            enumerate_pinned(big.realization, ball.complex, pins).size());
      });

  out.first_count = counts[0];
  for (std::size_t i = 0; i < counts.size(); ++i)
    if (counts[i] != counts[0]) {
      out.constant = false;
      out.witness = nlohmann::json{{"alpha_index", i},
                                   {"count", counts[i]},
                                   {"first_count", counts[0]},
                                   {"alpha", alphas[i]},
                                   {"alpha0", alphas[0]}};
      break;
    }
  out.index.value = counts[0];
  out.index.verified_constant = out.constant;
  return out;
}

/// Product of verified per-step indices along a chain; equals the direct
/// end-to-end count by the double-counting lemma (asserted by callers).
inline long long relative_index_product(const std::vector<RelativeIndex>& chain) {
  long long product = 1;
  for (const auto& step : chain) {
    if (!step.verified_constant) throw InputError("relative_index_product: unverified step");
    product *= step.value;
  }
  return product;
}

// ---------------------------------------------------------------------------
// truncation chains: restriction pushforward, disintegration, duality

/// A chain Y0 ⊆ Y1 ⊆ ... ⊆ Yk of complexes with vertex injections, all
/// embedded in the ball by extending a pinned alpha0 on Y0.
struct TruncationChain {
  std::vector<const TypedComplex*> complexes;            // Y0..Yk
  std::vector<std::vector<Vertex>> up;                   // up[j]: Yj vertex -> Yj+1 vertex
  std::vector<std::pair<Vertex, Vertex>> alpha0;         // pins on Y0

  /// Composite injection Yj -> Yl for j <= l.
  Vertex lift(int j, int l, Vertex v) const {
    for (int i = j; i < l; ++i) v = up[i].at(v);
    return v;
  }
};

inline EmbeddingSet chain_embedding_set(const TruncationChain& chain, int level,
                                        const TypedComplex& ball) {
  std::vector<std::pair<Vertex, Vertex>> pins;
  for (auto& [v0, xv] : chain.alpha0) pins.push_back({chain.lift(0, level, v0), xv});
  return make_embedding_set(*chain.complexes.at(level), ball, pins);
}

/// Corollary: restriction is measure preserving, (i*)_* mu_{Y2,Y0}^a = mu_{Y1,Y0}^a.
/// Verified memberwise: every fiber of the restriction has the same mass.
inline VerificationReport verify_restriction_pushforward(const TruncationChain& chain,
                                                         const TypedComplex& ball,
                                                         int low, int high) {
  VerificationReport report("restriction-pushforward");
  EmbeddingSet S_high = chain_embedding_set(chain, high, ball);
  EmbeddingSet S_low = chain_embedding_set(chain, low, ball);
  if (S_high.cardinality() == 0 || S_low.cardinality() == 0)
    throw DepthError("restriction pushforward: empty embedding set");

  std::map<std::vector<Vertex>, long long> fiber_sizes;
  for (const auto& beta : S_high.members) {
    std::vector<Vertex> restricted(S_low.domain->vertex_count());
    for (Vertex v = 0; v < S_low.domain->vertex_count(); ++v)
      restricted[v] = beta[chain.lift(low, high, v)];
    ++fiber_sizes[restricted];
  }
  // support match and exact fiber masses
  for (const auto& beta1 : S_low.members) {
    auto it = fiber_sizes.find(beta1);
    bool present = it != fiber_sizes.end();
    report.check(present, nlohmann::json{{"missing_fiber_over", beta1}});
    if (!present) continue;
    Rat fiber_mass(it->second, static_cast<long>(S_high.cardinality()));
    Rat expected(1, static_cast<long>(S_low.cardinality()));
    report.check(fiber_mass == expected,
                 nlohmann::json{{"fiber_over", beta1},
                                {"mass", rat_to_string(fiber_mass)},
                                {"expected", rat_to_string(expected)}});
  }
  report.check(fiber_sizes.size() == S_low.cardinality(),
               nlohmann::json{{"extra_fibers", fiber_sizes.size()},
                              {"low_cardinality", S_low.cardinality()}});
  return report;
}

/// Lemma (double counting): mu^{a0}_{Y2,Y0} = sum_{a1} mu^{a0}_{Y1,Y0}(a1) mu^{a1}_{Y2,Y1},
/// asserted exactly on every singleton cylinder (hence on all cylinders).
inline VerificationReport verify_disintegration(const TruncationChain& chain,
                                                const TypedComplex& ball, int mid, int high) {
  VerificationReport report("disintegration");
  EmbeddingSet S2 = chain_embedding_set(chain, high, ball);
  EmbeddingSet S1 = chain_embedding_set(chain, mid, ball);
  if (S2.cardinality() == 0) throw DepthError("disintegration: empty embedding set");

  for (const auto& beta2 : S2.members) {
    std::vector<Vertex> beta1(S1.domain->vertex_count());
    for (Vertex v = 0; v < S1.domain->vertex_count(); ++v)
      beta1[v] = beta2[chain.lift(mid, high, v)];
    // relative set Isom(Y2, X)^{beta1}
    std::vector<std::pair<Vertex, Vertex>> pins;
    for (Vertex v = 0; v < S1.domain->vertex_count(); ++v)
      pins.push_back({chain.lift(mid, high, v), beta1[v]});
    auto rel = enumerate_pinned(*S2.domain, ball, pins);
    Rat lhs(1, static_cast<long>(S2.cardinality()));
    Rat rhs = Rat(1, static_cast<long>(S1.cardinality())) *
              Rat(1, static_cast<long>(rel.size()));
    report.check(lhs == rhs, nlohmann::json{{"lhs", rat_to_string(lhs)},
                                            {"rhs", rat_to_string(rhs)},
                                            {"fiber", rel.size()}});
  }
  return report;
}

/// Lemma: <phi, r^* f> = <r_* phi, f> where r_* is the fiber average.
/// Checked exhaustively over the singleton-indicator bases of both sides.
inline VerificationReport verify_duality(const TruncationChain& chain, const TypedComplex& ball,
                                         int low, int high) {
  VerificationReport report("duality");
  EmbeddingSet S2 = chain_embedding_set(chain, high, ball);
  EmbeddingSet S1 = chain_embedding_set(chain, low, ball);
  if (S2.cardinality() == 0) throw DepthError("duality: empty embedding set");

  // restriction index of each member of S2 into S1
  std::map<std::vector<Vertex>, int> index_of;
  for (std::size_t i = 0; i < S1.members.size(); ++i) index_of[S1.members[i]] = static_cast<int>(i);
  std::vector<int> r(S2.cardinality());
  for (std::size_t i = 0; i < S2.members.size(); ++i) {
    std::vector<Vertex> restricted(S1.domain->vertex_count());
    for (Vertex v = 0; v < S1.domain->vertex_count(); ++v)
      restricted[v] = S2.members[i][chain.lift(low, high, v)];
    auto it = index_of.find(restricted);
    if (it == index_of.end()) throw StructureError("duality: restriction leaves S1");
    r[i] = it->second;
  }

  const Rat mu2(1, static_cast<long>(S2.cardinality()));
  const Rat mu1(1, static_cast<long>(S1.cardinality()));

  // phi = indicator of member a in S2, f = indicator of member b in S1
  for (std::size_t a = 0; a < S2.cardinality(); ++a) {
    for (std::size_t b = 0; b < S1.cardinality(); ++b) {
      // <phi, r^* f> = phi(a) f(r(a)) mu2
      Rat lhs = (r[a] == static_cast<int>(b)) ? mu2 : Rat(0);
      // r_* phi (beta1) = (1/mu1(beta1)) sum_{fiber} phi mu2 ; <r_* phi, f>_mu1
      Rat density = (r[a] == static_cast<int>(b)) ? mu2 / mu1 : Rat(0);
      Rat rhs = density * mu1;
      report.check(lhs == rhs, nlohmann::json{{"a", a}, {"b", b}});
    }
  }
  // and against a non-indicator pair: phi = restriction index, f = parity
  {
    Rat lhs = 0, rhs = 0;
    std::vector<Rat> pushed(S1.cardinality(), Rat(0));
    for (std::size_t a = 0; a < S2.cardinality(); ++a) {
      Rat phi(static_cast<long>(a + 1));
      Rat f((r[a] % 2 == 0) ? 1 : -1);
      lhs += phi * f * mu2;
      pushed[r[a]] += phi * mu2;
    }
    for (std::size_t b = 0; b < S1.cardinality(); ++b) {
      Rat f((b % 2 == 0) ? 1 : -1);
      rhs += pushed[b] * f;  // pushed already carries the mu1-mass
    }
    report.check(lhs == rhs,
                 nlohmann::json{{"lhs", rat_to_string(lhs)}, {"rhs", rat_to_string(rhs)}});
  }
  return report;
}

}  // namespace a2lab
