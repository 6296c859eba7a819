#pragma once

#include <random>
#include <utility>
#include <vector>

#include "support.hpp"
#include "whp/gog.hpp"

namespace whp::testing {

using gog::Edge;
using gog::Element;
using gog::GraphOfGroups;
using gog::Splitting;
using gog::TreeFlag;

inline Element fw(const Alphabet& a, const char* text) { return Element{parse_word(text, a), {}}; }
inline Element av(std::vector<lattice::Int> v) { return Element{{}, std::move(v)}; }

/// F(a,b) *_{a=x} F(x,y)
inline GraphOfGroups amalgam_graph() {
  GraphOfGroups g;
  g.add_free("left", {"a", "b"});
  g.add_free("right", {"x", "y"});
  g.add_edge(Edge{"e", 0, 1, fw(g.vertices[0].alphabet, "a"), fw(g.vertices[1].alphabet, "x"), TreeFlag::T, 0, ""});
  return g;
}

/// <a,b,t | t^-1 a t = b>
inline GraphOfGroups hnn_graph() {
  GraphOfGroups g;
  g.add_free("base", {"a", "b"});
  const auto& ab = g.vertices[0].alphabet;
  g.add_edge(Edge{"h", 0, 0, fw(ab, "a"), fw(ab, "b"), TreeFlag::None, 0, "t"});
  return g;
}

/// F(a,b) *_{a b = (1,0)} Z^2
inline GraphOfGroups abelian_graph() {
  GraphOfGroups g;
  g.add_free("F", {"a", "b"});
  g.add_abelian("A", 2);
  g.add_edge(Edge{"e", 0, 1, fw(g.vertices[0].alphabet, "a b"), av({1, 0}), TreeFlag::T, 0, ""});
  return g;
}

/// Free vertex F(a,b) with a rank-2 abelian vertex on a^2 b, a punctured
/// torus glued along its boundary to b, and an HNN loop t^-1 a t = b a b^-1.
inline GraphOfGroups mixed_graph() {
  GraphOfGroups g;
  g.add_free("F", {"a", "b"});
  g.add_abelian("A", 2);
  g.add_surface("S", SurfaceSpec::standard(1, 1, {"p", "q"}));
  const auto& ab = g.vertices[0].alphabet;
  g.add_edge(Edge{"ea", 0, 1, fw(ab, "a^2 b"), av({0, 1}), TreeFlag::T, 0, ""});
  g.add_edge(Edge{"es", 0, 2, fw(ab, "b"), fw(g.vertices[2].alphabet, "p q p^-1 q^-1"), TreeFlag::T1, 1, ""});
  g.add_edge(Edge{"h", 0, 0, fw(ab, "a"), fw(ab, "b a b^-1"), TreeFlag::None, 2, "t"});
  return g;
}

/// One free vertex, one rank-2 abelian vertex and one punctured torus.
inline GraphOfGroups pipeline_graph() {
  GraphOfGroups g = mixed_graph();
  g.edges.pop_back();
  return g;
}

/// Generator letters (generator, +-1) of a vertex element.
inline std::vector<std::pair<int, int>> letters_of(const Splitting& s, int v, const Element& e) {
  std::vector<std::pair<int, int>> out;
  const int off = s.generator_offset(v);
  if (s.vertex(v).kind == gog::VertexKind::Abelian) {
    for (std::size_t i = 0; i < e.vec.size(); ++i)
      for (lattice::Int c = 0; c < (e.vec[i] < 0 ? -e.vec[i] : e.vec[i]); ++c)
        out.emplace_back(off + static_cast<int>(i), e.vec[i] < 0 ? -1 : 1);
  } else {
    for (Letter l : e.word.letters()) out.emplace_back(off + l.gen(), l.sign());
  }
  return out;
}

inline std::vector<std::pair<int, int>> invert(std::vector<std::pair<int, int>> w) {
  std::reverse(w.begin(), w.end());
  for (auto& [g, e] : w) e = -e;
  return w;
}

/// Defining relators of the fundamental group in generator letters.
inline std::vector<std::vector<std::pair<int, int>>> relators(const Splitting& s) {
  std::vector<std::vector<std::pair<int, int>>> out;
  for (int e = 0; e < s.num_edges(); ++e) {
    const Edge& ed = s.edge(e);
    auto a = letters_of(s, ed.from, ed.image_from);
    auto w = invert(letters_of(s, ed.to, ed.image_to));
    std::vector<std::pair<int, int>> r;
    if (auto t = s.stable_generator(e)) {
      r.emplace_back(*t, -1);
      r.insert(r.end(), a.begin(), a.end());
      r.emplace_back(*t, 1);
    } else {
      r = a;
    }
    r.insert(r.end(), w.begin(), w.end());
    out.push_back(r);
  }
  for (int v = 0; v < s.num_vertices(); ++v) {
    if (s.vertex(v).kind != gog::VertexKind::Abelian) continue;
    const int off = s.generator_offset(v);
    for (int i = 0; i < s.vertex(v).rank(); ++i)
      for (int j = i + 1; j < s.vertex(v).rank(); ++j)
        out.push_back({{off + i, 1}, {off + j, 1}, {off + i, -1}, {off + j, -1}});
  }
  return out;
}

inline std::vector<std::pair<int, int>> random_gen_word(const Splitting& s, std::size_t len,
                                                        std::mt19937_64& gen = rng()) {
  std::uniform_int_distribution<int> pick(0, static_cast<int>(s.generators().size()) - 1);
  std::vector<std::pair<int, int>> out;
  for (std::size_t i = 0; i < len; ++i) out.emplace_back(pick(gen), gen() % 2 ? 1 : -1);
  return out;
}

inline gog::NormalForm evaluate(const Splitting& s, const std::vector<std::pair<int, int>>& w) {
  gog::NormalForm out = s.identity();
  for (auto [g, e] : w) out = s.multiply(out, s.generator(g, e));
  return out;
}

inline gog::NormalForm random_element(const Splitting& s, std::size_t len, std::mt19937_64& gen = rng()) {
  return evaluate(s, random_gen_word(s, len, gen));
}

}  // namespace whp::testing
