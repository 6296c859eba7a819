// Path normal forms, parsing and automorphism application.

#include <sstream>

#include "whp/gog.hpp"

namespace whp::gog {

int Splitting::end_vertex(const NormalForm& p) const {
  return p.crossings.empty() ? p.start : target(p.crossings.back());
}

NormalForm Splitting::identity(int at) const { return NormalForm{at, {local_identity(at)}, {}}; }

NormalForm Splitting::normalize(int start, std::vector<Element> syl, std::vector<Crossing> cross) const {
  if (syl.size() != cross.size() + 1) throw Error("path needs one more syllable than crossings");
  {
    int at = start;
    for (std::size_t i = 0; i < syl.size(); ++i) {
      if (vertex(at).kind == VertexKind::Abelian && syl[i].vec.empty()) syl[i].vec.assign(vertex(at).rank(), 0);
      if (i < cross.size()) {
        if (source(cross[i]) != at) throw Error("path crossings are not consecutive");
        at = target(cross[i]);
      }
    }
  }
  NormalForm out{start, {syl[0]}, {}};
  for (std::size_t i = 0; i < cross.size(); ++i) {
    const Crossing x = cross[i];
    if (!out.crossings.empty() && out.crossings.back() == x.reversed()) {
      const Crossing prev = out.crossings.back();
      const int v = source(x);
      if (auto m = local_edge_power(v, out.syllables.back(), target_image(prev))) {
        // prev t^m prev^-1 = s^m on the near side.
        out.crossings.pop_back();
        out.syllables.pop_back();
        const int u = source(prev);
        out.syllables.back() =
            local_multiply(u, local_multiply(u, out.syllables.back(), local_power(u, source_image(prev), *m)),
                           syl[i + 1]);
        continue;
      }
    }
    out.crossings.push_back(x);
    out.syllables.push_back(syl[i + 1]);
  }
  for (std::size_t i = 0; i < out.crossings.size(); ++i) {
    const Crossing x = out.crossings[i];
    long m = 0;
    out.syllables[i] = coset_rep(source(x), out.syllables[i], source_image(x), m);
    if (m != 0) {
      const int w = target(x);
      out.syllables[i + 1] = local_multiply(w, local_power(w, target_image(x), m), out.syllables[i + 1]);
    }
  }
  return out;
}

NormalForm Splitting::multiply(const NormalForm& a, const NormalForm& b) const {
  const int mid = end_vertex(a);
  if (mid != b.start) throw Error("paths do not compose");
  std::vector<Element> syl(a.syllables.begin(), a.syllables.end() - 1);
  syl.push_back(local_multiply(mid, a.syllables.back(), b.syllables.front()));
  syl.insert(syl.end(), b.syllables.begin() + 1, b.syllables.end());
  std::vector<Crossing> cross = a.crossings;
  cross.insert(cross.end(), b.crossings.begin(), b.crossings.end());
  return normalize(a.start, std::move(syl), std::move(cross));
}

NormalForm Splitting::inverse(const NormalForm& a) const {
  std::vector<Element> syl;
  std::vector<Crossing> cross;
  int at = end_vertex(a);
  for (std::size_t i = a.syllables.size(); i-- > 0;) {
    syl.push_back(local_inverse(at, a.syllables[i]));
    if (i > 0) {
      cross.push_back(a.crossings[i - 1].reversed());
      at = source(a.crossings[i - 1]);
    }
  }
  return normalize(end_vertex(a), std::move(syl), std::move(cross));
}

NormalForm Splitting::power(const NormalForm& a, long k) const {
  NormalForm base = k < 0 ? inverse(a) : a;
  NormalForm out = identity(a.start);
  for (long i = 0; i < (k < 0 ? -k : k); ++i) out = multiply(out, base);
  return out;
}

NormalForm Splitting::crossing_path(const Crossing& x) const {
  return NormalForm{source(x), {local_identity(source(x)), local_identity(target(x))}, {x}};
}

NormalForm Splitting::local_path(int v, const Element& a) const { return normalize(v, {a}, {}); }

NormalForm Splitting::vertex_element(int v, const Element& a) const {
  const auto& path = tree_path(v);
  std::vector<Element> syl;
  std::vector<Crossing> cross;
  int at = 0;
  for (const auto& x : path) {
    syl.push_back(local_identity(at));
    cross.push_back(x);
    at = target(x);
  }
  syl.push_back(a);
  for (std::size_t i = path.size(); i-- > 0;) {
    cross.push_back(path[i].reversed());
    syl.push_back(local_identity(source(path[i])));
  }
  return normalize(0, std::move(syl), std::move(cross));
}

NormalForm Splitting::generator(int gen, long exponent) const {
  const Generator& g = gens_.at(gen);
  if (!g.stable) {
    Element x;
    if (vertex(g.index).kind == VertexKind::Abelian) {
      x.vec.assign(vertex(g.index).rank(), 0);
      x.vec[g.local] = exponent;
    } else {
      x.word = Word::generator(g.local, static_cast<int>(exponent));
    }
    return vertex_element(g.index, x);
  }
  const Edge& e = edge(g.index);
  // p_from * t * p_to^-1
  std::vector<Element> syl{local_identity(0)};
  std::vector<Crossing> cross;
  for (const auto& x : tree_path(e.from)) {
    cross.push_back(x);
    syl.push_back(local_identity(target(x)));
  }
  cross.push_back({g.index, true});
  syl.push_back(local_identity(e.to));
  const auto& back = tree_path(e.to);
  for (std::size_t i = back.size(); i-- > 0;) {
    cross.push_back(back[i].reversed());
    syl.push_back(local_identity(source(back[i])));
  }
  return power(normalize(0, std::move(syl), std::move(cross)), exponent);
}

NormalForm Splitting::normal_form(const std::vector<RawFactor>& raw) const {
  NormalForm out = identity();
  for (const auto& f : raw) {
    if (f.is_letter) {
      auto g = stable_generator(f.index);
      if (!g) throw Error("edge " + edge(f.index).label + " has no stable letter");
      out = multiply(out, generator(*g, f.exponent));
    } else {
      if (f.index < 0 || f.index >= num_vertices()) throw Error("element of an undeclared vertex");
      out = multiply(out, vertex_element(f.index, f.element));
    }
  }
  return out;
}

NormalForm Splitting::parse(std::string_view text) const {
  std::istringstream in{std::string(text)};
  std::string tok;
  NormalForm out = identity();
  while (in >> tok) {
    if (tok == "eps" || tok == "1") continue;
    std::string name = tok;
    long exponent = 1;
    if (auto caret = tok.find('^'); caret != std::string::npos) {
      name = tok.substr(0, caret);
      try {
        std::size_t used = 0;
        exponent = std::stol(tok.substr(caret + 1), &used);
        if (used != tok.size() - caret - 1 || exponent == 0) throw std::invalid_argument("");
      } catch (const std::exception&) {
        throw ParseError("bad exponent in factor '" + tok + "'");
      }
    }
    auto g = find_generator(name);
    if (!g) throw ParseError("unknown generator '" + name + "'");
    out = multiply(out, generator(*g, exponent));
  }
  return out;
}

std::vector<std::pair<int, int>> Splitting::expand(const NormalForm& a) const {
  if (!is_loop(a)) throw Error("only loops at the base vertex are group elements");
  std::vector<std::pair<int, int>> out;
  int at = a.start;
  for (std::size_t i = 0; i < a.syllables.size(); ++i) {
    const Element& s = a.syllables[i];
    if (vertex(at).kind == VertexKind::Abelian) {
      for (int j = 0; j < vertex(at).rank(); ++j)
        for (Int c = 0; c < (s.vec[j] < 0 ? -s.vec[j] : s.vec[j]); ++c)
          out.emplace_back(offset_[at] + j, s.vec[j] < 0 ? -1 : 1);
    } else {
      for (Letter l : s.word.letters()) out.emplace_back(offset_[at] + l.gen(), l.sign());
    }
    if (i < a.crossings.size()) {
      const Crossing x = a.crossings[i];
      if (!edge(x.edge).in_tree()) out.emplace_back(stable_of_edge_[x.edge], x.forward ? 1 : -1);
      at = target(x);
    }
  }
  return out;
}

std::string Splitting::format(const NormalForm& a) const {
  auto letters = expand(a);
  if (letters.empty()) return "eps";
  std::string out;
  for (std::size_t i = 0; i < letters.size();) {
    std::size_t j = i;
    while (j < letters.size() && letters[j] == letters[i]) ++j;
    const long run = static_cast<long>(j - i) * letters[i].second;
    if (!out.empty()) out += ' ';
    out += gens_[letters[i].first].name;
    if (run != 1) out += "^" + std::to_string(run);
    i = j;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Automorphisms.

namespace {

NormalForm apply_images(const Splitting& s, const std::vector<NormalForm>& images, const NormalForm& a) {
  NormalForm out = s.identity();
  std::vector<std::optional<NormalForm>> inverses(images.size());
  for (auto [g, sign] : s.expand(a)) {
    if (sign > 0) {
      out = s.multiply(out, images.at(g));
    } else {
      if (!inverses[g]) inverses[g] = s.inverse(images.at(g));
      out = s.multiply(out, *inverses[g]);
    }
  }
  return out;
}

}  // namespace

GAutomorphism Splitting::identity_automorphism() const {
  GAutomorphism out;
  for (std::size_t g = 0; g < gens_.size(); ++g) out.forward.push_back(generator(static_cast<int>(g)));
  out.backward = out.forward;
  return out;
}

NormalForm Splitting::apply(const GAutomorphism& phi, const NormalForm& a) const {
  return apply_images(*this, phi.forward, a);
}

NormalForm Splitting::apply_inverse(const GAutomorphism& phi, const NormalForm& a) const {
  return apply_images(*this, phi.backward, a);
}

GAutomorphism Splitting::compose(const GAutomorphism& outer, const GAutomorphism& inner) const {
  GAutomorphism out;
  for (const auto& im : inner.forward) out.forward.push_back(apply(outer, im));
  for (const auto& im : outer.backward) out.backward.push_back(apply_inverse(inner, im));
  return out;
}

bool Splitting::is_identity(const GAutomorphism& phi) const {
  for (std::size_t g = 0; g < gens_.size(); ++g)
    if (!(phi.forward[g] == generator(static_cast<int>(g)))) return false;
  return true;
}

bool Splitting::is_homomorphism(const std::vector<NormalForm>& images) const {
  if (images.size() != gens_.size()) return false;
  for (const auto& im : images)
    if (!is_loop(im)) return false;
  for (int e = 0; e < num_edges(); ++e) {
    const Edge& ed = edge(e);
    NormalForm a = apply_images(*this, images, vertex_element(ed.from, ed.image_from));
    NormalForm b = apply_images(*this, images, vertex_element(ed.to, ed.image_to));
    if (!ed.in_tree()) {
      const NormalForm& t = images[stable_of_edge_[e]];
      a = multiply(multiply(inverse(t), a), t);
    }
    if (!(a == b)) return false;
  }
  for (int v = 0; v < num_vertices(); ++v) {
    if (vertex(v).kind != VertexKind::Abelian) continue;
    for (int i = 0; i < vertex(v).rank(); ++i)
      for (int j = i + 1; j < vertex(v).rank(); ++j) {
        const auto& x = images[offset_[v] + i];
        const auto& y = images[offset_[v] + j];
        if (!(multiply(x, y) == multiply(y, x))) return false;
      }
  }
  return true;
}

bool Splitting::is_automorphism(const GAutomorphism& phi) const {
  if (!is_homomorphism(phi.forward) || !is_homomorphism(phi.backward)) return false;
  for (std::size_t g = 0; g < gens_.size(); ++g) {
    const NormalForm x = generator(static_cast<int>(g));
    if (!(apply(phi, phi.backward[g]) == x) || !(apply_inverse(phi, phi.forward[g]) == x)) return false;
  }
  return true;
}

std::string Splitting::format(const GAutomorphism& phi) const {
  std::string out;
  for (std::size_t g = 0; g < gens_.size(); ++g) out += gens_[g].name + " -> " + format(phi.forward[g]) + "\n";
  return out;
}

}  // namespace whp::gog
