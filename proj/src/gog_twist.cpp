// Dehn twists and extension of vertex automorphisms.

#include <functional>

#include "whp/gog.hpp"

namespace whp::gog {

namespace {

// Forward images of the twist with exponents k (one per edge).
std::vector<NormalForm> twist_images(const Splitting& s, const std::vector<long>& k) {
  const int nv = s.num_vertices();
  // P[w]: accumulated conjugator of vertex w, computed along the tree.
  std::vector<NormalForm> P(nv, s.identity());
  std::vector<bool> done(nv, false);
  done[0] = true;
  for (int pass = 0; pass < nv; ++pass)
    for (int w = 1; w < nv; ++w) {
      if (done[w]) continue;
      const int e = s.parent_edge(w);
      const Edge& ed = s.edge(e);
      const int u = ed.from == w ? ed.to : ed.from;
      if (!done[u]) continue;
      const Element& c = ed.from == u ? ed.image_from : ed.image_to;
      P[w] = s.multiply(s.power(s.vertex_element(u, c), k[e]), P[u]);
      done[w] = true;
    }
  std::vector<NormalForm> out;
  for (const auto& g : s.generators()) {
    const int gi = static_cast<int>(out.size());
    if (!g.stable) {
      const NormalForm x = s.generator(gi);
      out.push_back(s.multiply(s.multiply(s.inverse(P[g.index]), x), P[g.index]));
    } else {
      const Edge& ed = s.edge(g.index);
      const NormalForm alpha = s.power(s.vertex_element(ed.from, ed.image_from), k[g.index]);
      out.push_back(s.multiply(s.multiply(s.multiply(s.inverse(P[ed.from]), alpha), s.generator(gi)), P[ed.to]));
    }
  }
  return out;
}

}  // namespace

GAutomorphism dehn_twists(const Splitting& s, const std::vector<long>& k) {
  if (static_cast<int>(k.size()) != s.num_edges()) throw Error("one twist exponent per edge expected");
  std::vector<long> neg(k.size());
  for (std::size_t i = 0; i < k.size(); ++i) neg[i] = -k[i];
  return {twist_images(s, k), twist_images(s, neg)};
}

GAutomorphism dehn_twist(const Splitting& s, int edge, long k) {
  if (edge < 0 || edge >= s.num_edges()) throw Error("edge not found");
  std::vector<long> ks(s.num_edges(), 0);
  ks[edge] = k;
  return dehn_twists(s, ks);
}

GAutomorphism dehn_twist(const Splitting& s, int edge, int at, const Element& c) {
  if (edge < 0 || edge >= s.num_edges()) throw Error("edge not found");
  const Edge& ed = s.edge(edge);
  if (at != ed.from && at != ed.to) throw Error("vertex is not an endpoint of edge " + ed.label);
  const Element& gen = at == ed.from ? ed.image_from : ed.image_to;
  auto k = s.local_edge_power(at, c, gen);
  if (!k) throw Error("element " + s.format_local(at, c) + " is not in the group of edge " + ed.label);
  return dehn_twist(s, edge, *k);
}

namespace {

void check_incident(const Splitting& s, int v, const std::function<Element(const Element&)>& f) {
  for (int e = 0; e < s.num_edges(); ++e) {
    const Edge& ed = s.edge(e);
    for (int side = 0; side < 2; ++side) {
      if ((side == 0 ? ed.from : ed.to) != v) continue;
      const Element& c = side == 0 ? ed.image_from : ed.image_to;
      if (!(f(c) == c))
        throw Error("vertex automorphism moves " + s.format_local(v, c) + " of edge " + ed.label);
    }
  }
}

GAutomorphism extend(const Splitting& s, int v, const std::vector<Element>& fwd, const std::vector<Element>& bwd) {
  GAutomorphism out = s.identity_automorphism();
  const int off = s.generator_offset(v);
  for (std::size_t i = 0; i < fwd.size(); ++i) {
    out.forward[off + i] = s.vertex_element(v, fwd[i]);
    out.backward[off + i] = s.vertex_element(v, bwd[i]);
  }
  return out;
}

}  // namespace

GAutomorphism extend_vertex_automorphism(const Splitting& s, int v, const Automorphism& local) {
  if (v < 0 || v >= s.num_vertices()) throw Error("vertex not found");
  const Vertex& vx = s.vertex(v);
  if (vx.kind == VertexKind::Abelian) throw Error("abelian vertex " + vx.label + " needs a matrix");
  if (local.alphabet().rank() != vx.rank()) throw Error("automorphism rank does not match vertex " + vx.label);
  check_incident(s, v, [&](const Element& c) { return Element{local.apply(c.word), {}}; });
  std::vector<Element> fwd, bwd;
  for (int i = 0; i < vx.rank(); ++i) {
    fwd.push_back({local.forward().image(i), {}});
    bwd.push_back({local.backward().image(i), {}});
  }
  return extend(s, v, fwd, bwd);
}

GAutomorphism extend_vertex_automorphism(const Splitting& s, int v, const lattice::Matrix& m) {
  if (v < 0 || v >= s.num_vertices()) throw Error("vertex not found");
  const Vertex& vx = s.vertex(v);
  const int n = vx.rank();
  if (vx.kind != VertexKind::Abelian) throw Error("vertex " + vx.label + " is not abelian");
  if (m.rows() != n || m.cols() != n) throw Error("matrix size does not match vertex " + vx.label);
  const Int det = lattice::determinant(m);
  if (det != 1 && det != -1) throw Error("matrix is not invertible over the integers");
  check_incident(s, v, [&](const Element& c) { return Element{{}, m * c.vec}; });
  std::vector<Element> fwd, bwd;
  for (int i = 0; i < n; ++i) {
    Vec e(n, 0);
    e[i] = 1;
    fwd.push_back({{}, m * e});
    auto sol = lattice::solve(m, e);
    bwd.push_back({{}, sol->particular});
  }
  return extend(s, v, fwd, bwd);
}

}  // namespace whp::gog
