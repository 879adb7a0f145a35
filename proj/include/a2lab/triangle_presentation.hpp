#pragma once

#include <array>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "a2lab/errors.hpp"
#include "a2lab/projective_plane.hpp"

namespace a2lab {

/// Triangle presentation (plane, point->line bijection lambda, compatible
/// triples). Presents a group acting simply transitively on the vertices of
/// an A~2 building of thickness q+1.
struct TrianglePresentation {
  ProjectivePlane plane;
  std::vector<int> lambda;                 // point -> line, bijective
  std::set<std::array<int, 3>> triples;    // ordered triples of points

  int q() const { return plane.q; }
  int generators() const { return plane.point_count(); }

  bool has_triple(int x, int y, int z) const { return triples.count({x, y, z}) > 0; }

  /// The unique z completing (x,y,.) or -1.
  int complete(int x, int y) const {
    int found = -1;
    for (const auto& t : triples)
      if (t[0] == x && t[1] == y) {
        if (found >= 0) return -2;  // non-unique, caught by validate
        found = t[2];
      }
    return found;
  }

  std::string validate_diagnostic() const {
    std::string pd = plane.validate();
    if (!pd.empty()) return "plane: " + pd;
    if (static_cast<int>(lambda.size()) != plane.point_count()) return "lambda size mismatch";
    std::set<int> seen(lambda.begin(), lambda.end());
    if (static_cast<int>(seen.size()) != plane.line_count()) return "lambda is not a bijection";
    for (const auto& t : triples)
      if (!triples.count({t[1], t[2], t[0]})) return "triples not closed under cyclic rotation";
    // (x,y,.) exists iff y incident to lambda(x); completion unique
    std::map<std::pair<int, int>, int> count;
    for (const auto& t : triples) ++count[{t[0], t[1]}];
    for (int x = 0; x < plane.point_count(); ++x)
      for (int y = 0; y < plane.point_count(); ++y) {
        auto it = count.find({x, y});
        bool expected = plane.incident(y, lambda[x]);
        if (expected && (it == count.end() || it->second != 1))
          return "pair (x,y) with y on lambda(x) not completed exactly once";
        if (!expected && it != count.end())
          return "pair (x,y) with y not on lambda(x) appears in a triple";
      }
    return "";
  }

  bool validate() const { return validate_diagnostic().empty(); }

  nlohmann::json to_json() const {
    nlohmann::json j;
    j["q"] = plane.q;
    j["points"] = nlohmann::json::array();
    for (int p = 0; p < plane.point_count(); ++p) j["points"].push_back(p);
    j["lines"] = nlohmann::json::array();
    for (int l = 0; l < plane.line_count(); ++l) j["lines"].push_back(l);
    j["incidence"] = nlohmann::json::array();
    for (int p = 0; p < plane.point_count(); ++p)
      for (int l : plane.point_lines[p]) j["incidence"].push_back({p, l});
    j["lambda"] = nlohmann::json::object();
    for (int p = 0; p < plane.point_count(); ++p) j["lambda"][std::to_string(p)] = lambda[p];
    j["triples"] = nlohmann::json::array();
    for (const auto& t : triples) j["triples"].push_back({t[0], t[1], t[2]});
    return j;
  }

  /// Loader refuses presentations that do not validate.
  static TrianglePresentation from_json(const nlohmann::json& j) {
    TrianglePresentation tp;
    tp.plane.q = j.at("q");
    int npoints = static_cast<int>(j.at("points").size());
    int nlines = static_cast<int>(j.at("lines").size());
    tp.plane.point_lines.assign(npoints, {});
    tp.plane.line_points.assign(nlines, {});
    for (const auto& inc : j.at("incidence")) {
      int p = inc.at(0), l = inc.at(1);
      tp.plane.point_lines.at(p).push_back(l);
      tp.plane.line_points.at(l).push_back(p);
    }
    for (auto& v : tp.plane.point_lines) std::sort(v.begin(), v.end());
    for (auto& v : tp.plane.line_points) std::sort(v.begin(), v.end());
    tp.lambda.assign(npoints, -1);
    for (auto& [key, value] : j.at("lambda").items()) tp.lambda.at(std::stoi(key)) = value;
    for (const auto& t : j.at("triples"))
      tp.triples.insert({t.at(0).get<int>(), t.at(1).get<int>(), t.at(2).get<int>()});
    std::string diag = tp.validate_diagnostic();
    if (!diag.empty()) throw InputError("triangle presentation rejected: " + diag);
    return tp;
  }
};

/// The classical cyclic q=2 presentation: Fano plane in Singer form with
/// lambda(i) = line i = {i+1, i+2, i+4} and triples (i, i+1, i+3) mod 7.
inline TrianglePresentation cmsz_q2_presentation() {
  TrianglePresentation tp;
  tp.plane = fano_plane();
  tp.lambda.resize(7);
  for (int i = 0; i < 7; ++i) tp.lambda[i] = i;
  for (int i = 0; i < 7; ++i) {
    int a = i, b = (i + 1) % 7, c = (i + 3) % 7;
    tp.triples.insert({a, b, c});
    tp.triples.insert({b, c, a});
    tp.triples.insert({c, a, b});
  }
  std::string diag = tp.validate_diagnostic();
  if (!diag.empty()) throw StructureError("built-in q=2 presentation invalid: " + diag);
  return tp;
}

inline bool validate_triangle_presentation(const TrianglePresentation& tp) {
  return tp.validate();
}

}  // namespace a2lab
