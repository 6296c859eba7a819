#include "whp/gog.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

namespace whp::gog {

const char* kind_name(VertexKind k) {
  switch (k) {
    case VertexKind::Free: return "free";
    case VertexKind::Abelian: return "abelian";
    case VertexKind::Surface: return "surface";
  }
  return "?";
}

std::vector<Word> Vertex::peripheral() const { return surface ? surface->boundary_words : std::vector<Word>{}; }

int GraphOfGroups::add_free(std::string label, std::vector<std::string> names) {
  vertices.push_back(Vertex{std::move(label), VertexKind::Free, Alphabet(std::move(names)), std::nullopt, {}});
  return static_cast<int>(vertices.size()) - 1;
}

int GraphOfGroups::add_abelian(std::string label, int rank, std::vector<std::string> names) {
  if (names.empty())
    for (int i = 1; i <= rank; ++i) names.push_back(label + "_" + std::to_string(i));
  if (static_cast<int>(names.size()) != rank) throw Error("abelian vertex " + label + ": wrong number of names");
  vertices.push_back(Vertex{std::move(label), VertexKind::Abelian, Alphabet(std::move(names)), std::nullopt, {}});
  return static_cast<int>(vertices.size()) - 1;
}

int GraphOfGroups::add_surface(std::string label, SurfaceSpec s) {
  Alphabet a = s.alphabet;
  vertices.push_back(Vertex{std::move(label), VertexKind::Surface, std::move(a), std::move(s), {}});
  return static_cast<int>(vertices.size()) - 1;
}

int GraphOfGroups::add_edge(Edge e) {
  edges.push_back(std::move(e));
  return static_cast<int>(edges.size()) - 1;
}

std::optional<int> GraphOfGroups::vertex_index(std::string_view label) const {
  for (std::size_t i = 0; i < vertices.size(); ++i)
    if (vertices[i].label == label) return static_cast<int>(i);
  return std::nullopt;
}

std::optional<int> GraphOfGroups::edge_index(std::string_view label) const {
  for (std::size_t i = 0; i < edges.size(); ++i)
    if (edges[i].label == label) return static_cast<int>(i);
  return std::nullopt;
}

namespace {

std::optional<std::string> check_image(const Vertex& v, const Element& x, const std::string& edge) {
  const std::string where = "edge " + edge + " at vertex " + v.label + ": ";
  if (v.kind == VertexKind::Abelian) {
    if (static_cast<int>(x.vec.size()) != v.rank()) return where + "image vector has wrong length";
    if (std::all_of(x.vec.begin(), x.vec.end(), [](Int c) { return c == 0; })) return where + "trivial image";
    return std::nullopt;
  }
  if (!x.vec.empty()) return where + "vector image in a non-abelian vertex";
  if (x.word.empty()) return where + "trivial image";
  if (x.word.max_generator() >= v.rank()) return where + "image uses an unknown generator";
  if (v.kind == VertexKind::Surface) {
    bool ok = false;
    for (const auto& b : v.surface->boundary_words) ok = ok || x.word == b || x.word == b.inverse();
    if (!ok) return where + "image is not a boundary word of the surface";
  }
  return std::nullopt;
}

}  // namespace

std::optional<std::string> validate_normalized(const GraphOfGroups& g) {
  const int nv = static_cast<int>(g.vertices.size());
  if (nv == 0) return "graph has no vertices";
  std::set<std::string> labels, names;
  for (const auto& v : g.vertices) {
    if (v.label.empty()) return std::string("vertex with empty label");
    if (!labels.insert(v.label).second) return "duplicate vertex label " + v.label;
    if (v.rank() < 1) return "vertex " + v.label + " has no generators";
    if (v.kind == VertexKind::Surface) {
      if (!v.surface) return "surface vertex " + v.label + " lacks its surface";
      if (!(v.surface->alphabet == v.alphabet)) return "surface vertex " + v.label + ": alphabet mismatch";
      for (const auto& tw : v.qh_twists) {
        if (!(tw.alphabet() == v.alphabet)) return "vertex " + v.label + ": twist over the wrong alphabet";
        for (const auto& b : v.surface->boundary_words)
          if (!(tw.apply(b) == b)) return "vertex " + v.label + ": supplied twist moves a boundary word";
      }
    } else if (!v.qh_twists.empty()) {
      return "vertex " + v.label + ": twists are only allowed on surface vertices";
    }
    for (const auto& n : v.alphabet.names())
      if (!names.insert(n).second) return "generator name " + n + " used twice";
  }
  std::set<std::string> edge_labels;
  int tree_edges = 0;
  std::vector<int> parent(nv);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& e : g.edges) {
    if (!edge_labels.insert(e.label).second) return "duplicate edge label " + e.label;
    if (e.from < 0 || e.from >= nv || e.to < 0 || e.to >= nv) return "edge " + e.label + " references an unknown vertex";
    if (auto err = check_image(g.vertices[e.from], e.image_from, e.label)) return err;
    if (auto err = check_image(g.vertices[e.to], e.image_to, e.label)) return err;
    if (e.in_tree()) {
      if (!e.letter.empty()) return "tree edge " + e.label + " has a stable letter";
      int a = find(e.from), b = find(e.to);
      if (a == b) return "tree edges contain a cycle at edge " + e.label;
      parent[a] = b;
      ++tree_edges;
      if (e.tree == TreeFlag::T1 &&
          (g.vertices[e.from].kind == VertexKind::Abelian || g.vertices[e.to].kind == VertexKind::Abelian))
        return "edge " + e.label + " is in T1 but has an abelian endpoint";
    } else {
      if (e.letter.empty()) return "non-tree edge " + e.label + " has no stable letter";
      if (!names.insert(e.letter).second) return "generator name " + e.letter + " used twice";
    }
  }
  if (tree_edges != nv - 1) return std::string("tree edges do not span the graph");
  for (const auto& e : g.edges)
    if (g.vertices[e.from].kind == VertexKind::Abelian && g.vertices[e.to].kind == VertexKind::Abelian)
      return "adjacent abelian vertices " + g.vertices[e.from].label + " and " + g.vertices[e.to].label + " (edge " +
             e.label + ")";
  for (int v = 0; v < nv; ++v) {
    const auto& vx = g.vertices[v];
    if (vx.kind != VertexKind::Abelian || vx.rank() < 2) continue;
    std::set<int> nbrs;
    for (const auto& e : g.edges) {
      if (e.from == v) nbrs.insert(e.to);
      if (e.to == v) nbrs.insert(e.from);
    }
    if (nv > 1 && nbrs.size() != 1)
      return "abelian vertex " + vx.label + " of rank " + std::to_string(vx.rank()) + " attaches to " +
             std::to_string(nbrs.size()) + " vertices";
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Free-group double cosets.

namespace {

// w = root^k with root primitive (as an element, not up to conjugacy).
std::pair<Word, long> element_root(const Word& w) {
  auto [p, m] = strip_conjugation(w);
  auto [r, k] = cyclic_root(m);
  return {p * r * p.inverse(), k};
}

}  // namespace

DoubleCosetSolutions double_coset_solve(const Word& h, const Word& t, const Word& x, const Word& s) {
  using K = DoubleCosetSolutions::Kind;
  DoubleCosetSolutions out;
  if (t.empty() && s.empty()) {
    if (h == x) out.kind = K::Unique;
    return out;
  }
  if (t.empty()) {
    if (auto b = power_of(x.inverse() * h, s)) out = {K::Unique, 0, *b};
    return out;
  }
  if (s.empty()) {
    if (auto a = power_of(h * x.inverse(), t)) out = {K::Unique, *a, 0};
    return out;
  }
  // t^A y^B = z with y = x s x^-1.
  const Word z = h * x.inverse();
  const Word y = x * s * x.inverse();
  auto [rt, et] = element_root(t);
  auto [ry, ey] = element_root(y);
  if (ry == rt || ry == rt.inverse()) {
    auto n = power_of(z, rt);
    if (!n) return out;
    out.kind = K::Line;
    out.p = et;
    out.q = ry == rt ? ey : -ey;
    out.n = *n;
    return out;
  }
  // Distinct axes overlap in less than the sum of translation lengths, which
  // bounds B linearly in |z|.
  const long bound = static_cast<long>(z.size() + 2 * (t.size() + y.size())) + 2;
  const Word yinv = y.inverse();
  Word up = z, down = z;  // z y^-B for B = +j and B = -j
  for (long j = 0; j <= bound; ++j) {
    if (auto a = power_of(up, t)) {
      if (out.kind == K::Unique) throw Error("double coset solution is not unique");
      out = {K::Unique, *a, j};
    }
    if (j > 0) {
      if (auto a = power_of(down, t)) {
        if (out.kind == K::Unique) throw Error("double coset solution is not unique");
        out = {K::Unique, *a, -j};
      }
    }
    up = up * yinv;
    down = down * y;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Splitting: tables and vertex-local arithmetic.

Splitting::Splitting(GraphOfGroups g) : g_(std::move(g)) {
  if (auto err = validate_normalized(g_)) throw Error("invalid graph of groups: " + *err);
  const int nv = num_vertices();
  for (int v = 0; v < nv; ++v) {
    offset_.push_back(static_cast<int>(gens_.size()));
    for (int j = 0; j < vertex(v).rank(); ++j) gens_.push_back({false, v, j, vertex(v).alphabet.name(j)});
  }
  stable_of_edge_.assign(num_edges(), -1);
  for (int e = 0; e < num_edges(); ++e) {
    if (edge(e).in_tree()) continue;
    stable_of_edge_[e] = static_cast<int>(gens_.size());
    gens_.push_back({true, e, 0, edge(e).letter});
  }
  parent_.assign(nv, -2);
  tree_path_.assign(nv, {});
  parent_[0] = -1;
  std::vector<int> queue{0};
  for (std::size_t qi = 0; qi < queue.size(); ++qi) {
    const int v = queue[qi];
    for (int e = 0; e < num_edges(); ++e) {
      const Edge& ed = edge(e);
      if (!ed.in_tree()) continue;
      for (bool fwd : {true, false}) {
        const int a = fwd ? ed.from : ed.to, b = fwd ? ed.to : ed.from;
        if (a != v || parent_[b] != -2) continue;
        parent_[b] = e;
        tree_path_[b] = tree_path_[v];
        tree_path_[b].push_back({e, fwd});
        queue.push_back(b);
      }
    }
  }
}

std::optional<int> Splitting::stable_generator(int e) const {
  int g = stable_of_edge_.at(e);
  if (g < 0) return std::nullopt;
  return g;
}

std::optional<int> Splitting::find_generator(std::string_view name) const {
  for (std::size_t i = 0; i < gens_.size(); ++i)
    if (gens_[i].name == name) return static_cast<int>(i);
  return std::nullopt;
}

Element Splitting::local_identity(int v) const {
  Element e;
  if (vertex(v).kind == VertexKind::Abelian) e.vec.assign(vertex(v).rank(), 0);
  return e;
}

Element Splitting::local_multiply(int v, const Element& a, const Element& b) const {
  Element out;
  if (vertex(v).kind == VertexKind::Abelian) {
    out.vec.resize(vertex(v).rank());
    for (int i = 0; i < vertex(v).rank(); ++i) out.vec[i] = lattice::add(a.vec.at(i), b.vec.at(i));
  } else {
    out.word = a.word * b.word;
  }
  return out;
}

Element Splitting::local_inverse(int v, const Element& a) const {
  Element out;
  if (vertex(v).kind == VertexKind::Abelian) {
    out.vec = a.vec;
    for (auto& c : out.vec) c = -c;
  } else {
    out.word = a.word.inverse();
  }
  return out;
}

Element Splitting::local_power(int v, const Element& a, long k) const {
  Element out;
  if (vertex(v).kind == VertexKind::Abelian) {
    out.vec = a.vec;
    for (auto& c : out.vec) c = lattice::mul(c, k);
  } else {
    out.word = a.word.pow(k);
  }
  return out;
}

bool Splitting::local_is_identity(int v, const Element& a) const {
  if (vertex(v).kind == VertexKind::Abelian) return std::all_of(a.vec.begin(), a.vec.end(), [](Int c) { return c == 0; });
  return a.word.empty();
}

std::size_t Splitting::local_length(int v, const Element& a) const {
  if (vertex(v).kind != VertexKind::Abelian) return a.word.size();
  std::size_t n = 0;
  for (Int c : a.vec) n += static_cast<std::size_t>(c < 0 ? -c : c);
  return n;
}

std::optional<long> Splitting::local_edge_power(int v, const Element& a, const Element& c) const {
  if (vertex(v).kind != VertexKind::Abelian) return power_of(a.word, c.word);
  std::optional<long> k;
  for (std::size_t i = 0; i < c.vec.size(); ++i) {
    if (c.vec[i] == 0) continue;
    if (a.vec[i] % c.vec[i] != 0) return std::nullopt;
    k = a.vec[i] / c.vec[i];
    break;
  }
  if (!k) return std::nullopt;
  for (std::size_t i = 0; i < c.vec.size(); ++i)
    if (a.vec[i] != lattice::mul(*k, c.vec[i])) return std::nullopt;
  return k;
}

Element Splitting::coset_rep(int v, const Element& a, const Element& c, long& m) const {
  if (vertex(v).kind == VertexKind::Abelian) {
    const int n = vertex(v).rank();
    auto h = lattice::hermite_basis({c.vec}, n);
    Element r;
    r.vec = lattice::reduce_mod(a.vec, h);
    Element diff = local_multiply(v, a, local_inverse(v, r));
    m = *local_edge_power(v, diff, c);
    return r;
  }
  // |a c^j| > |a| once |j| > 2|a|, so the minimum lies in this window.
  const long window = 2 * static_cast<long>(a.word.size()) + 1;
  Word best = a.word;
  long best_j = 0;
  const Word cinv = c.word.inverse();
  Word up = a.word, down = a.word;
  for (long j = 1; j <= window; ++j) {
    up = up * c.word;
    down = down * cinv;
    if (up < best) best = up, best_j = j;
    if (down < best) best = down, best_j = -j;
  }
  m = -best_j;
  return Element{best, {}};
}

std::string Splitting::format_local(int v, const Element& a) const {
  if (vertex(v).kind != VertexKind::Abelian) return format_word(a.word, vertex(v).alphabet);
  std::string out;
  for (int i = 0; i < vertex(v).rank(); ++i) {
    if (a.vec[i] == 0) continue;
    if (!out.empty()) out += ' ';
    out += vertex(v).alphabet.name(i);
    if (a.vec[i] != 1) out += "^" + std::to_string(a.vec[i]);
  }
  return out.empty() ? "eps" : out;
}

int Splitting::source(const Crossing& x) const { return x.forward ? edge(x.edge).from : edge(x.edge).to; }
int Splitting::target(const Crossing& x) const { return x.forward ? edge(x.edge).to : edge(x.edge).from; }
const Element& Splitting::source_image(const Crossing& x) const {
  return x.forward ? edge(x.edge).image_from : edge(x.edge).image_to;
}
const Element& Splitting::target_image(const Crossing& x) const {
  return x.forward ? edge(x.edge).image_to : edge(x.edge).image_from;
}

}  // namespace whp::gog
