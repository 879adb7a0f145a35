#pragma once

#include <algorithm>
#include <map>
#include <queue>
#include <set>
#include <vector>

#include "a2lab/errors.hpp"
#include "a2lab/rational.hpp"
#include "a2lab/report.hpp"

namespace a2lab {

/// Rooted ball of the d-regular tree out to `radius`.
struct RegularTree {
  int degree = 3;
  int radius = 0;
  std::vector<std::vector<int>> adj;
  std::vector<int> dist;  // from the root 0

  int size() const { return static_cast<int>(adj.size()); }
};

inline RegularTree build_regular_tree(int degree, int radius) {
  if (degree < 3) throw InputError("regular tree: degree must be >= 3");
  RegularTree t;
  t.degree = degree;
  t.radius = radius;
  t.adj.push_back({});
  t.dist.push_back(0);
  std::queue<int> frontier;
  frontier.push(0);
  while (!frontier.empty()) {
    int v = frontier.front();
    frontier.pop();
    if (t.dist[v] == radius) continue;
    int need = degree - static_cast<int>(t.adj[v].size());
    for (int i = 0; i < need; ++i) {
      int w = t.size();
      t.adj.push_back({v});
      t.dist.push_back(t.dist[v] + 1);
      t.adj[v].push_back(w);
      frontier.push(w);
    }
  }
  return t;
}

/// A geodesic through the root: spine[k] for k in [-1, N+1], deterministic.
inline std::map<int, int> tree_spine(const RegularTree& t, int lo, int hi) {
  std::map<int, int> spine;
  spine[0] = 0;
  spine[-1] = t.adj[0].at(0);
  if (hi >= 1) spine[1] = t.adj[0].at(1);
  for (int k = 1; k < hi; ++k) {
    // extend away from the root: any child of spine[k]
    int prev = spine[k - 1];
    for (int w : t.adj[spine[k]])
      if (w != prev) {
        spine[k + 1] = w;
        break;
      }
  }
  for (int k = -1; k > lo; --k) {
    int prev = spine[k + 1];
    for (int w : t.adj[spine[k]])
      if (w != prev) {
        spine[k - 1] = w;
        break;
      }
  }
  return spine;
}

/// All antenna images at one spine vertex: non-backtracking paths of length
/// `depth` whose first step avoids both spine directions.
inline std::vector<std::vector<int>> antenna_paths(const RegularTree& t, int at, int avoid1,
                                                   int avoid2, int depth) {
  std::vector<std::vector<int>> out;
  std::vector<std::vector<int>> frontier = {{at}};
  for (int step = 0; step < depth; ++step) {
    std::vector<std::vector<int>> next;
    for (const auto& path : frontier) {
      int tip = path.back();
      for (int w : t.adj[tip]) {
        if (path.size() >= 2 && w == path[path.size() - 2]) continue;
        if (path.size() == 1 && (w == avoid1 || w == avoid2)) continue;
        auto longer = path;
        longer.push_back(w);
        next.push_back(std::move(longer));
      }
    }
    frontier = std::move(next);
  }
  return frontier;
}

/// §4.1 warm-up: the pi_n pushforward of the uniform measure on comb
/// embeddings with pinned spine equals the normalized restriction of the
/// boundary measure to E_n(xi), at endpoint resolution n + antenna_depth.
inline VerificationReport tree_detecting_check(int degree, int spine_len, int antenna_depth,
                                               int n) {
  if (n < 1 || n > spine_len) throw InputError("tree_detecting_check: need 1 <= n <= spine_len");
  VerificationReport report("tree-detecting");
  RegularTree t = build_regular_tree(degree, spine_len + antenna_depth + 2);
  std::map<int, int> spine = tree_spine(t, -1, spine_len + 1);

  // independent antenna choices per spine position 0..spine_len
  std::vector<std::vector<std::vector<int>>> choices;
  for (int k = 0; k <= spine_len; ++k)
    choices.push_back(
        antenna_paths(t, spine[k], spine.at(k - 1), spine.at(k + 1), antenna_depth));
  long long total = 1;
  for (auto& c : choices) total *= static_cast<long long>(c.size());
  report.check(total > 0, {{"id", "nonempty"}});

  // pi_n pushforward: counts per antenna-n endpoint; the other antennas are
  // independent, contributing a constant factor
  std::map<int, long long> pushed;
  long long other = total / static_cast<long long>(choices[n].size());
  for (const auto& path : choices[n]) pushed[path.back()] += other;

  // E_n(xi) at endpoint resolution L = n + antenna_depth
  const int L = n + antenna_depth;
  std::vector<int> parent(t.size(), -1);
  {
    std::queue<int> bfs;
    bfs.push(0);
    std::vector<char> seen(t.size(), 0);
    seen[0] = 1;
    while (!bfs.empty()) {
      int v = bfs.front();
      bfs.pop();
      for (int w : t.adj[v])
        if (!seen[w]) {
          seen[w] = 1;
          parent[w] = v;
          bfs.push(w);
        }
    }
  }
  auto passes_through = [&](int w, int target) {
    for (int v = w; v >= 0; v = parent[v])
      if (v == target) return true;
    return false;
  };
  std::vector<int> En;
  long long omega_n = 0, omega_n1 = 0;
  for (int w = 0; w < t.size(); ++w) {
    if (t.dist[w] != L) continue;
    bool thr_n = passes_through(w, spine[n]);
    bool thr_n1 = passes_through(w, spine[n + 1]);
    if (thr_n) ++omega_n;
    if (thr_n1) ++omega_n1;
    if (thr_n && !thr_n1) En.push_back(w);
  }

  // exact equality with the normalized restriction
  Rat mass = 0;
  for (int w : En) {
    auto it = pushed.find(w);
    Rat lhs = it == pushed.end() ? Rat(0) : Rat(it->second, static_cast<long>(total));
    Rat rhs(1, static_cast<long>(En.size()));
    report.check(lhs == rhs,
                 nlohmann::json{{"endpoint", w},
                                {"pushforward", rat_to_string(lhs)},
                                {"restricted", rat_to_string(rhs)}});
    mass += lhs;
  }
  for (auto& [w, c] : pushed)
    report.check(std::find(En.begin(), En.end(), w) != En.end(),
                 nlohmann::json{{"id", "support"}, {"endpoint", w}});
  report.check(mass == Rat(1), nlohmann::json{{"id", "mass"}, {"mass", rat_to_string(mass)}});

  // shadow ratio per step: mu(Omega_{n+1}) / mu(Omega_n) = 1/(degree-1)
  report.check(Rat(omega_n1) == Rat(omega_n) * Rat(1, degree - 1),
               nlohmann::json{{"id", "ratio"}, {"omega_n", omega_n}, {"omega_n1", omega_n1}});
  return report;
}

}  // namespace a2lab
