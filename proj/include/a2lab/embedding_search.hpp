#pragma once

#include <algorithm>
#include <functional>
#include <queue>
#include <vector>

#include "a2lab/errors.hpp"
#include "a2lab/simplicial_map.hpp"
#include "a2lab/typed_complex.hpp"

namespace a2lab {

struct EnumOptions {
  /// Restrict image vertices to this predicate (interior margins etc).
  std::function<bool(Vertex)> image_filter;
  /// Abort once this many embeddings were found (0 = unlimited).
  std::size_t max_results = 0;
};

namespace detail {

/// Placement order: frontier vertices by distance from the pinned set,
/// ties broken by smallest id. Pinned vertices come first.
inline std::vector<Vertex> placement_order(const TypedComplex& big,
                                           const std::vector<std::pair<Vertex, Vertex>>& pins) {
  std::vector<int> dist(big.vertex_count(), -1);
  std::queue<Vertex> q;
  for (auto& [bv, xv] : pins)
    if (dist[bv] < 0) {
      dist[bv] = 0;
      q.push(bv);
    }
  if (pins.empty()) {
    dist[0] = 0;
    q.push(0);
  }
  while (!q.empty()) {
    Vertex u = q.front();
    q.pop();
    for (Vertex w : big.neighbors(u))
      if (dist[w] < 0) {
        dist[w] = dist[u] + 1;
        q.push(w);
      }
  }
  for (int v = 0; v < big.vertex_count(); ++v)
    if (dist[v] < 0) throw InputError("enumerate_extensions: Y_big is not connected");
  std::vector<Vertex> order(big.vertex_count());
  for (int v = 0; v < big.vertex_count(); ++v) order[v] = v;
  std::stable_sort(order.begin(), order.end(),
                   [&](Vertex a, Vertex b) { return dist[a] != dist[b] ? dist[a] < dist[b] : a < b; });
  return order;
}

class ExtensionSearch {
 public:
  ExtensionSearch(const TypedComplex& big, const TypedComplex& target,
                  const std::vector<std::pair<Vertex, Vertex>>& pins, const EnumOptions& opts)
      : big_(big), target_(target), opts_(opts), pins_(pins) {
    order_ = placement_order(big, pins);
    assignment_.assign(big.vertex_count(), -1);
    used_.assign(target.vertex_count(), 0);
    preimage_.assign(target.vertex_count(), -1);
  }

  std::vector<std::vector<Vertex>> run() {
    // consistency of the pins with a single color rotation
    rotation_ = -1;
    for (auto& [bv, xv] : pins_) {
      if (!big_.has_vertex(bv) || !target_.has_vertex(xv))
        throw InputError("enumerate_extensions: pin out of range");
      int g = ((target_.type_of(xv) - big_.type_of(bv)) % 3 + 3) % 3;
      if (rotation_ == -1)
        rotation_ = g;
      else if (rotation_ != g)
        return {};
    }
    for (auto& [bv, xv] : pins_) {
      if (assignment_[bv] >= 0 && assignment_[bv] != xv) return {};
      if (assignment_[bv] < 0) {
        if (used_[xv]) return {};
        assignment_[bv] = xv;
        used_[xv] = 1;
        preimage_[xv] = bv;
      }
    }
    // pins must already be mutually isometric
    for (auto& [bv, xv] : pins_)
      for (auto& [bw, xw] : pins_)
        if (bv != bw && big_.distance_row(bv)[bw] != target_.distance_row(xv)[xw])
          return {};
    place(0);
    return std::move(results_);
  }

 private:
  bool admissible(Vertex x) const { return !opts_.image_filter || opts_.image_filter(x); }

  void place(std::size_t k) {
    if (opts_.max_results && results_.size() >= opts_.max_results) return;
    while (k < order_.size() && assignment_[order_[k]] >= 0) ++k;
    if (k == order_.size()) {
      if (saturated()) results_.push_back(assignment_);
      return;
    }
    const Vertex v = order_[k];
    std::vector<Vertex> candidates = candidate_images(v);
    const bool fixes_rotation = rotation_ < 0;
    for (Vertex x : candidates) {
      if (fixes_rotation)
        rotation_ = ((target_.type_of(x) - big_.type_of(v)) % 3 + 3) % 3;
      assignment_[v] = x;
      used_[x] = 1;
      preimage_[x] = v;
      place(k + 1);
      assignment_[v] = -1;
      used_[x] = 0;
      preimage_[x] = -1;
      if (fixes_rotation) rotation_ = -1;
      if (opts_.max_results && results_.size() >= opts_.max_results) return;
    }
  }

  std::vector<Vertex> candidate_images(Vertex v) const {
    std::vector<Vertex> placed_neighbors;
    for (Vertex u : big_.neighbors(v))
      if (assignment_[u] >= 0) placed_neighbors.push_back(u);

    std::vector<Vertex> candidates;
    if (placed_neighbors.empty()) {
      // only possible for an unpinned root; sweep the whole target
      for (Vertex x = 0; x < target_.vertex_count(); ++x) candidates.push_back(x);
    } else {
      candidates = target_.neighbors(assignment_[placed_neighbors[0]]);
      for (std::size_t i = 1; i < placed_neighbors.size(); ++i) {
        std::vector<Vertex> next;
        const auto& nb = target_.neighbors(assignment_[placed_neighbors[i]]);
        std::set_intersection(candidates.begin(), candidates.end(), nb.begin(), nb.end(),
                              std::back_inserter(next));
        candidates.swap(next);
      }
    }

    const auto& vrow = big_.distance_row(v);
    std::vector<Vertex> out;
    for (Vertex x : candidates) {
      if (used_[x] || !admissible(x)) continue;
      if (rotation_ >= 0 &&
          target_.type_of(x) != (big_.type_of(v) + rotation_) % 3)
        continue;
      bool ok = true;
      // exact distance preservation against everything already placed
      const auto& xrow = target_.distance_row(x);
      for (int u = 0; u < big_.vertex_count() && ok; ++u) {
        if (assignment_[u] < 0 || u == v) continue;
        if (vrow[u] != xrow[assignment_[u]]) ok = false;
      }
      if (!ok) continue;
      // local simplex conditions against placed neighbors
      for (std::size_t i = 0; i < placed_neighbors.size() && ok; ++i)
        for (std::size_t j = i + 1; j < placed_neighbors.size() && ok; ++j) {
          Vertex u = placed_neighbors[i], w = placed_neighbors[j];
          bool dom_tri = big_.has_triangle(v, u, w);
          bool img_tri = target_.has_triangle(x, assignment_[u], assignment_[w]);
          if (dom_tri != img_tri) ok = false;
        }
      if (ok) out.push_back(x);
    }
    return out;
  }

  /// Saturation of the completed image (the triangle half; the edge half is
  /// forced by distance preservation, checked here anyway).
  bool saturated() const {
    for (int v = 0; v < big_.vertex_count(); ++v) {
      Vertex x = assignment_[v];
      for (Vertex y : target_.neighbors(x)) {
        Vertex w = preimage_of(y);
        if (w < 0 || y < x) continue;
        if (!big_.has_edge(v, w)) return false;
        for (Vertex z : target_.common_neighbors(x, y)) {
          Vertex u = preimage_of(z);
          if (u < 0 || !target_.has_triangle(x, y, z)) continue;
          if (!big_.has_triangle(v, w, u)) return false;
        }
      }
    }
    return true;
  }

  Vertex preimage_of(Vertex x) const { return preimage_[x]; }

  const TypedComplex& big_;
  const TypedComplex& target_;
  const EnumOptions& opts_;
  std::vector<std::pair<Vertex, Vertex>> pins_;
  std::vector<Vertex> order_;
  std::vector<Vertex> assignment_;
  std::vector<Vertex> preimage_;
  std::vector<char> used_;
  int rotation_ = -1;
  std::vector<std::vector<Vertex>> results_;
};

}  // namespace detail

/// All isometric embeddings beta: Y_big -> X with the given pins
/// (pairs of (Y_big vertex, X vertex)), in deterministic order.
inline std::vector<std::vector<Vertex>> enumerate_pinned(
    const TypedComplex& big, const TypedComplex& target,
    const std::vector<std::pair<Vertex, Vertex>>& pins, const EnumOptions& opts = {}) {
  detail::ExtensionSearch search(big, target, pins, opts);
  return search.run();
}

/// Spec-shaped entry point: all beta with beta∘i = alpha.
inline std::vector<std::vector<Vertex>> enumerate_extensions(
    const TypedComplex& /*Y_small*/, const TypedComplex& Y_big, const SimplicialMap& i,
    const SimplicialMap& alpha, const EnumOptions& opts = {}) {
  if (!check_isometric_embedding(i))
    throw InputError("enumerate_extensions: i is not an isometric embedding");
  if (!check_isometric_embedding(alpha))
    throw InputError("enumerate_extensions: alpha is not an isometric embedding");
  std::vector<std::pair<Vertex, Vertex>> pins;
  for (int v = 0; v < static_cast<int>(i.vertex_map.size()); ++v)
    pins.push_back({i(v), alpha(v)});
  return enumerate_pinned(Y_big, *alpha.codomain, pins, opts);
}

}  // namespace a2lab
