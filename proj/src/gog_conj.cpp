// Cyclic normal forms, conjugacy keys and conjugators.

#include <algorithm>
#include <map>
#include <set>

#include "linear_rows.hpp"
#include "whp/gog.hpp"

namespace whp::gog {

CyclicForm Splitting::cyclic_form(const NormalForm& a) const {
  if (!is_loop(a)) throw Error("cyclic form of a non-loop");
  NormalForm gamma = identity(0);
  NormalForm cur = a;  // a == gamma * cur * gamma^-1, cur a loop at cur.start
  for (;;) {
    const int v = cur.start;
    const std::size_t n = cur.crossings.size();
    if (n == 0) return CyclicForm{v, {cur.syllables[0]}, {}, gamma};
    // Rotate the last syllable to the front: cur = S_n^-1 (S_n cur S_n^-1) S_n.
    const Element last = cur.syllables.back();
    const Element z = local_multiply(v, last, cur.syllables.front());
    gamma = multiply(gamma, local_path(v, local_inverse(v, last)));
    const Crossing x0 = cur.crossings.front();
    if (cur.crossings.back() == x0.reversed()) {
      if (auto m = local_edge_power(v, z, source_image(x0))) {
        // z x0 R x0^-1 = x0 (t^m R) x0^-1 with R the middle loop at w.
        const int w = target(x0);
        std::vector<Element> syl(cur.syllables.begin() + 1, cur.syllables.end() - 1);
        std::vector<Crossing> cross(cur.crossings.begin() + 1, cur.crossings.end() - 1);
        syl.front() = local_multiply(w, local_power(w, target_image(x0), *m), syl.front());
        gamma = multiply(gamma, crossing_path(x0));
        cur = normalize(w, std::move(syl), std::move(cross));
        continue;
      }
    }
    std::vector<Element> syl(cur.syllables.begin(), cur.syllables.end() - 1);
    syl.front() = z;
    return CyclicForm{v, std::move(syl), cur.crossings, gamma};
  }
}

namespace {

void serialize_local(const Splitting& s, int v, const Element& e, std::vector<long>& out) {
  if (s.vertex(v).kind == VertexKind::Abelian) {
    out.insert(out.end(), e.vec.begin(), e.vec.end());
  } else {
    out.push_back(static_cast<long>(e.word.size()));
    for (Letter l : e.word.letters()) out.push_back(l.code);
  }
}

Element canonical_local_conjugate(const Splitting& s, int v, const Element& e) {
  if (s.vertex(v).kind == VertexKind::Abelian) return e;
  return Element{canonical_cyclic(e.word).core(), {}};
}

// e = y c^m y^-1 inside vertex v, if any.
std::optional<std::pair<Element, long>> conjugate_into(const Splitting& s, int v, const Element& e,
                                                       const Element& c) {
  if (s.vertex(v).kind == VertexKind::Abelian) {
    if (auto m = s.local_edge_power(v, e, c)) return std::make_pair(s.local_identity(v), *m);
    return std::nullopt;
  }
  const std::size_t len = canonical_cyclic(e.word).size();
  const std::size_t tau = canonical_cyclic(c.word).size();
  if (len % tau != 0) return std::nullopt;
  const long m = static_cast<long>(len / tau);
  for (long k : {m, -m}) {
    // conjugator_between(w, x) gives g with g^-1 w g = x.
    if (auto y = conjugator_between(e.word, c.word.pow(k))) return std::make_pair(Element{*y, {}}, k);
  }
  return std::nullopt;
}

struct EllipticState {
  int vertex;
  Element element;
  NormalForm path;  // start == path.start; s = path e path^-1
};

// Every (vertex, element) a nontrivial elliptic element is conjugate to,
// each with its connecting path.
std::vector<EllipticState> elliptic_orbit(const Splitting& s, int v, const Element& e) {
  std::vector<EllipticState> states{{v, e, s.identity(v)}};
  std::set<std::vector<long>> seen;
  auto key = [&](int x, const Element& el) {
    std::vector<long> k{x};
    serialize_local(s, x, canonical_local_conjugate(s, x, el), k);
    return k;
  };
  seen.insert(key(v, e));
  for (std::size_t i = 0; i < states.size(); ++i) {
    const EllipticState st = states[i];
    for (int ed = 0; ed < s.num_edges(); ++ed) {
      for (bool fwd : {true, false}) {
        const Crossing x{ed, fwd};
        if (s.source(x) != st.vertex) continue;
        auto hit = conjugate_into(s, st.vertex, st.element, s.source_image(x));
        if (!hit) continue;
        const int w = s.target(x);
        Element next = s.local_power(w, s.target_image(x), hit->second);
        if (!seen.insert(key(w, next)).second) continue;
        NormalForm path = s.multiply(s.multiply(st.path, s.local_path(st.vertex, hit->first)), s.crossing_path(x));
        states.push_back({w, std::move(next), std::move(path)});
      }
    }
  }
  return states;
}

}  // namespace

std::size_t path_length(const Splitting& s, const NormalForm& p) {
  std::size_t n = 0;
  int at = p.start;
  for (std::size_t i = 0; i < p.syllables.size(); ++i) {
    n += s.local_length(at, p.syllables[i]);
    if (i < p.crossings.size()) at = s.target(p.crossings[i]);
  }
  return n;
}

std::vector<std::pair<int, Element>> elliptic_conjugates(const Splitting& s, const NormalForm& a) {
  CyclicForm cf = s.cyclic_form(a);
  std::vector<std::pair<int, Element>> out;
  if (!cf.elliptic() || s.local_is_identity(cf.start, cf.syllables[0])) return out;
  for (auto& st : elliptic_orbit(s, cf.start, cf.syllables[0])) out.emplace_back(st.vertex, std::move(st.element));
  return out;
}

std::vector<int> Splitting::elliptic_vertices(const NormalForm& a) const {
  CyclicForm cf = cyclic_form(a);
  if (!cf.elliptic()) return {};
  if (local_is_identity(cf.start, cf.syllables[0])) {
    std::vector<int> all(num_vertices());
    for (int v = 0; v < num_vertices(); ++v) all[v] = v;
    return all;
  }
  std::set<int> out;
  for (const auto& st : elliptic_orbit(*this, cf.start, cf.syllables[0])) out.insert(st.vertex);
  return {out.begin(), out.end()};
}

std::vector<long> Splitting::exact_key(const NormalForm& a) const {
  std::vector<long> out{a.start, static_cast<long>(a.crossings.size())};
  int at = a.start;
  for (std::size_t i = 0; i < a.syllables.size(); ++i) {
    serialize_local(*this, at, a.syllables[i], out);
    if (i < a.crossings.size()) {
      out.push_back(2L * a.crossings[i].edge + (a.crossings[i].forward ? 1 : 0));
      at = target(a.crossings[i]);
    }
  }
  return out;
}

namespace {

// Rotation r of the cyclic form as a loop, conjugated by t^d where t is the
// image of the edge entering syllable r.
NormalForm shifted_rotation(const Splitting& s, const CyclicForm& cf, std::size_t r, long d) {
  const std::size_t n = cf.crossings.size();
  std::vector<Element> syl;
  std::vector<Crossing> cross;
  for (std::size_t i = 0; i < n; ++i) {
    syl.push_back(cf.syllables[(r + i) % n]);
    cross.push_back(cf.crossings[(r + i) % n]);
  }
  const Crossing in = cf.crossings[(r + n - 1) % n];
  const int v = s.target(in);
  syl.front() = s.local_multiply(v, s.local_power(v, s.target_image(in), -d), syl.front());
  syl.push_back(s.local_power(v, s.target_image(in), d));
  return s.normalize(v, std::move(syl), std::move(cross));
}

}  // namespace

std::vector<long> Splitting::conjugacy_key(const NormalForm& a) const {
  CyclicForm cf = cyclic_form(a);
  if (cf.elliptic()) {
    if (local_is_identity(cf.start, cf.syllables[0])) return {-1};
    std::vector<long> best;
    for (const auto& st : elliptic_orbit(*this, cf.start, cf.syllables[0])) {
      std::vector<long> k{-2, st.vertex};
      serialize_local(*this, st.vertex, canonical_local_conjugate(*this, st.vertex, st.element), k);
      if (best.empty() || k < best) best = k;
    }
    return best;
  }
  const std::size_t n = cf.crossings.size();
  std::size_t len = 0;
  for (std::size_t i = 0; i < n; ++i) len += local_length(source(cf.crossings[i]), cf.syllables[i]);
  std::vector<long> best;
  for (std::size_t r = 0; r < n; ++r) {
    long window = static_cast<long>(len) + 2;
    for (int round = 0; round < 6; ++round) {
      std::vector<long> local_best;
      long arg = 0;
      for (long d = -window; d <= window; ++d) {
        NormalForm f = shifted_rotation(*this, cf, r, d);
        std::vector<long> k{static_cast<long>(path_length(*this, f))};
        auto body = exact_key(f);
        k.insert(k.end(), body.begin(), body.end());
        if (local_best.empty() || k < local_best) local_best = std::move(k), arg = d;
      }
      if (std::abs(arg) < window || round == 5) {
        if (best.empty() || local_best < best) best = std::move(local_best);
        break;
      }
      window *= 2;
    }
  }
  return best;
}

namespace {

struct HyperbolicMatch {
  std::size_t rotation;
  long a0;  // exponent A_0 of the particular solution
};

std::vector<HyperbolicMatch> hyperbolic_matches(const Splitting& s, const CyclicForm& a, const CyclicForm& b) {
  std::vector<HyperbolicMatch> out;
  const std::size_t n = a.crossings.size();
  if (b.crossings.size() != n) return out;
  for (std::size_t r = 0; r < n; ++r) {
    bool same = true;
    for (std::size_t i = 0; i < n && same; ++i) same = a.crossings[(r + i) % n] == b.crossings[i];
    if (!same) continue;
    detail::LinearRows sys;
    std::vector<int> A(n), B(n);
    for (std::size_t i = 0; i < n; ++i) A[i] = sys.add_var(), B[i] = sys.add_var();
    for (std::size_t i = 0; i < n && !sys.infeasible; ++i) {
      const Crossing in = b.crossings[(i + n - 1) % n], outx = b.crossings[i];
      const int v = s.source(outx);
      detail::add_syllable(s, sys, v, b.syllables[i], a.syllables[(r + i) % n], &s.target_image(in), A[i],
                           &s.source_image(outx), B[i]);
    }
    for (std::size_t i = 0; i < n; ++i) sys.add({{B[i], 1}, {A[(i + 1) % n], 1}}, 0);
    if (auto sol = sys.solve()) out.push_back({r, static_cast<long>(sol->particular[A[0]])});
  }
  return out;
}

NormalForm rotation_path(const Splitting& s, const CyclicForm& cf, std::size_t r) {
  std::vector<Element> syl;
  std::vector<Crossing> cross;
  for (std::size_t i = 0; i < r; ++i) {
    syl.push_back(cf.syllables[i]);
    cross.push_back(cf.crossings[i]);
  }
  const int end = r == 0 ? cf.start : s.target(cf.crossings[r - 1]);
  syl.push_back(s.local_identity(end));
  return s.normalize(cf.start, std::move(syl), std::move(cross));
}

}  // namespace

std::vector<NormalForm> Splitting::conjugators(const NormalForm& a, const NormalForm& b) const {
  const CyclicForm ca = cyclic_form(a), cb = cyclic_form(b);
  std::vector<NormalForm> out;
  if (ca.elliptic() != cb.elliptic()) return out;
  if (ca.elliptic()) {
    const bool ta = local_is_identity(ca.start, ca.syllables[0]), tb = local_is_identity(cb.start, cb.syllables[0]);
    if (ta || tb) {
      if (ta && tb) out.push_back(identity());
      return out;
    }
    for (const auto& st : elliptic_orbit(*this, ca.start, ca.syllables[0])) {
      if (st.vertex != cb.start) continue;
      std::optional<Element> z;
      if (vertex(st.vertex).kind == VertexKind::Abelian) {
        if (st.element == cb.syllables[0]) z = local_identity(st.vertex);
      } else if (auto w = conjugator_between(st.element.word, cb.syllables[0].word)) {
        z = Element{*w, {}};
      }
      if (!z) continue;
      NormalForm g = multiply(multiply(multiply(ca.gamma, st.path), local_path(st.vertex, *z)), inverse(cb.gamma));
      out.push_back(std::move(g));
      break;
    }
  } else {
    for (const auto& m : hyperbolic_matches(*this, ca, cb)) {
      const Crossing in = ca.crossings[(m.rotation + ca.crossings.size() - 1) % ca.crossings.size()];
      const int v = target(in);
      NormalForm delta = local_path(v, local_power(v, target_image(in), -m.a0));
      out.push_back(multiply(multiply(multiply(ca.gamma, rotation_path(*this, ca, m.rotation)), delta),
                             inverse(cb.gamma)));
    }
  }
  for (const auto& g : out)
    if (!(multiply(multiply(inverse(g), a), g) == b)) throw Error("internal: conjugator check failed");
  return out;
}

std::optional<NormalForm> Splitting::conjugator(const NormalForm& a, const NormalForm& b) const {
  auto all = conjugators(a, b);
  if (all.empty()) return std::nullopt;
  return all.front();
}

std::vector<std::string> syllable_signature(const Splitting& s, const NormalForm& a) {
  std::vector<std::string> out;
  const std::size_t n = a.crossings.size();
  int at = a.start;
  for (std::size_t i = 0; i <= n; ++i) {
    const bool end = i == 0 || i == n;
    if (!(end && s.local_is_identity(at, a.syllables[i]))) out.push_back(s.vertex(at).label);
    if (i < n) {
      const Crossing x = a.crossings[i];
      const Edge& e = s.edge(x.edge);
      if (!e.in_tree()) out.push_back(x.forward ? e.letter : e.letter + "^-1");
      at = s.target(x);
    }
  }
  return out;
}

std::vector<NormalForm> simultaneous_conjugates_matching(const Splitting& s, const std::vector<NormalForm>& u,
                                                         const std::vector<NormalForm>& v) {
  if (u.size() != v.size()) throw Error("tuple length mismatch");
  if (u.empty()) return {s.identity()};
  std::vector<NormalForm> out;
  std::set<std::vector<long>> seen;
  for (auto g : s.conjugators(u[0], v[0])) {
    // Shortest representative of the coset <u_0> g.
    const long window = static_cast<long>(path_length(s, g)) + 2;
    std::pair<std::size_t, std::vector<long>> best{path_length(s, g), s.exact_key(g)};
    NormalForm up = s.identity(), down = s.identity();
    const NormalForm u0i = s.inverse(u[0]);
    const NormalForm g0 = g;
    for (long j = 1; j <= window; ++j) {
      up = s.multiply(up, u[0]);
      down = s.multiply(down, u0i);
      for (const NormalForm* p : {&up, &down}) {
        NormalForm h = s.multiply(*p, g0);
        std::pair<std::size_t, std::vector<long>> k{path_length(s, h), s.exact_key(h)};
        if (k < best) best = std::move(k), g = std::move(h);
      }
    }
    if (!seen.insert(best.second).second) continue;
    const NormalForm gi = s.inverse(g);
    bool ok = true;
    for (std::size_t i = 1; i < u.size() && ok; ++i)
      ok = syllable_signature(s, s.multiply(s.multiply(gi, u[i]), g)) == syllable_signature(s, v[i]);
    if (ok) out.push_back(std::move(g));
  }
  return out;
}

}  // namespace whp::gog
