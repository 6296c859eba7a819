#include "whp/surface.hpp"

#include <algorithm>

#include "parallel.hpp"

namespace whp {

namespace {

std::vector<std::string> default_names(int genus, int boundary) {
  std::vector<std::string> names;
  if (genus == 1) {
    names = {"a", "b"};
  } else {
    for (int i = 1; i <= genus; ++i) {
      names.push_back("a" + std::to_string(i));
      names.push_back("b" + std::to_string(i));
    }
  }
  for (int j = 1; j < boundary; ++j) names.push_back("c" + std::to_string(j));
  return names;
}

}  // namespace

SurfaceSpec SurfaceSpec::standard(int genus, int boundary) {
  if (genus < 0 || boundary < 1) throw ParseError("surface needs genus >= 0 and boundary >= 1");
  return standard(genus, boundary, default_names(genus, boundary));
}

SurfaceSpec SurfaceSpec::standard(int genus, int boundary, std::vector<std::string> names) {
  if (genus < 0 || boundary < 1) throw ParseError("surface needs genus >= 0 and boundary >= 1");
  if (2 * genus + boundary - 1 < 1) throw ParseError("the disk has trivial fundamental group");
  if (static_cast<int>(names.size()) != 2 * genus + boundary - 1)
    throw ParseError("surface generator list has the wrong length");
  SurfaceSpec s;
  s.genus = genus;
  s.boundary = boundary;
  s.alphabet = Alphabet(std::move(names));
  Word outer;
  for (int i = 0; i < genus; ++i) {
    Word a = Word::generator(2 * i), b = Word::generator(2 * i + 1);
    outer = outer * a * b * a.inverse() * b.inverse();
  }
  for (int j = 0; j + 1 < boundary; ++j) outer = outer * Word::generator(2 * genus + j);
  s.boundary_words.push_back(outer);
  for (int j = 0; j + 1 < boundary; ++j) s.boundary_words.push_back(Word::generator(2 * genus + j, -1));
  return s;
}

std::vector<int> ribbon_order(const SurfaceSpec& s) {
  const int letters = 2 * s.rank();
  std::vector<int> next(letters, -1);
  for (const Word& w : s.boundary_words) {
    for (std::size_t i = 0; i < w.size(); ++i) {
      Letter x = w[i], y = w[(i + 1) % w.size()];
      int& slot = next[x.inv().code];
      if (slot != -1) throw Error("boundary words use a letter twice");
      slot = y.code;
    }
  }
  std::vector<int> order{0};
  for (int cur = next[0]; cur != 0; cur = next[cur]) {
    if (cur < 0 || static_cast<int>(order.size()) >= letters) throw Error("boundary words do not give a one-vertex fat graph");
    order.push_back(cur);
  }
  if (static_cast<int>(order.size()) != letters) throw Error("boundary words do not give a one-vertex fat graph");
  return order;
}

void SurfaceSpec::validate() const {
  if (genus < 0 || boundary < 1) throw Error("surface needs genus >= 0 and boundary >= 1");
  if (alphabet.rank() != rank()) throw Error("surface alphabet has the wrong rank");
  if (static_cast<int>(boundary_words.size()) != boundary) throw Error("wrong number of boundary words");
  SurfaceSpec ref = standard(genus, boundary, alphabet.names());
  if (ref.boundary_words != boundary_words) throw Error("boundary words are not the standard presentation");
  ribbon_order(*this);
}

namespace {

struct Ribbon {
  std::vector<int> pos;  // letter code -> place in the cyclic order
  int size;

  explicit Ribbon(const SurfaceSpec& s) {
    auto order = ribbon_order(s);
    size = static_cast<int>(order.size());
    pos.assign(size, 0);
    for (int i = 0; i < size; ++i) pos[order[i]] = i;
  }
  // Starting from s and turning in the ribbon direction, x comes before y.
  bool before(Letter s, Letter x, Letter y) const {
    int dx = (pos[x.code] - pos[s.code] + size) % size;
    int dy = (pos[y.code] - pos[s.code] + size) % size;
    return dx < dy;
  }
  // The chord {c, d} crosses the chord {a, b}.
  bool separates(Letter a, Letter b, Letter c, Letter d) const { return before(a, c, b) != before(a, d, b); }
};

long primitive_intersections(const Ribbon& rib, const Word& r) {
  const long L = static_cast<long>(r.size());
  auto at = [&](long t) { return r[static_cast<std::size_t>(((t % L) + L) % L)]; };
  long count = 0;
  for (long i = 0; i < L; ++i) {
    for (long j = 0; j < L; ++j) {
      if (i == j) continue;
      const Letter in_p = at(i - 1).inv(), out_p = at(i);
      const Letter in_q = at(j - 1).inv(), out_q = at(j);
      // Count each pair of lifts where their common segment starts.
      if (in_p == in_q || in_p == out_q) continue;
      if (out_p != in_q && out_p != out_q) {
        count += rib.separates(in_p, out_p, in_q, out_q) ? 1 : 0;
        continue;
      }
      const bool same = out_p == out_q;
      const Letter in_r = same ? in_q : out_q;
      auto p = [&](long t) { return at(i + t); };
      auto q = [&](long t) { return same ? at(j + t) : at(j - 1 - t).inv(); };
      long m = 0;
      while (p(m) == q(m))
        if (++m > 2 * L + 2) throw Error("internal: distinct lifts share an infinite segment");
      const bool start = rib.before(out_p, in_p, in_r);
      const bool end = rib.before(p(m - 1).inv(), p(m), q(m));
      count += start == end ? 1 : 0;
    }
  }
  return count / 2;
}

}  // namespace

long self_intersection(const SurfaceSpec& s, const Word& w) {
  if (w.empty()) throw Error("self-intersection of the trivial word");
  if (w.max_generator() >= s.rank()) throw Error("word uses a letter outside the surface alphabet");
  const Word core = canonical_cyclic(w).core();
  auto [root, k] = cyclic_root(core);
  const long si = primitive_intersections(Ribbon(s), root);
  // A k-fold curve picks up k^2 copies of each crossing plus k - 1 new ones.
  return k * k * si + k - 1;
}

std::optional<int> peripheral_index(const SurfaceSpec& s, const Word& w) {
  if (w.empty()) return std::nullopt;
  const CyclicWord root = canonical_cyclic(cyclic_root(canonical_cyclic(w).core()).first);
  const CyclicWord root_inv = canonical_cyclic(root.core().inverse());
  for (int k = 0; k < static_cast<int>(s.boundary_words.size()); ++k) {
    const CyclicWord b = canonical_cyclic(s.boundary_words[k]);
    if (b == root || b == root_inv) return k;
  }
  return std::nullopt;
}

std::vector<Automorphism> builtin_twists(const SurfaceSpec& s) {
  std::vector<Automorphism> out;
  if (s.genus != 1) return out;
  const int n = s.rank();
  auto twist = [&](Word a_img, Word b_img, Word a_inv, Word b_inv) {
    std::vector<Word> f, b;
    for (int i = 0; i < n; ++i) f.push_back(Word::generator(i)), b.push_back(Word::generator(i));
    f[0] = std::move(a_img), f[1] = std::move(b_img);
    b[0] = std::move(a_inv), b[1] = std::move(b_inv);
    return Automorphism(Endomorphism(s.alphabet, f), Endomorphism(s.alphabet, b));
  };
  const Word a = Word::generator(0), b = Word::generator(1);
  out.push_back(twist(a, b * a, a, b * a.inverse()));
  out.push_back(twist(a * b, b, a * b.inverse(), b));
  for (const auto& t : out)
    if (!preserves_boundary(s, t)) throw Error("internal: built-in twist moves a boundary word");
  return out;
}

bool preserves_boundary(const SurfaceSpec& s, const Automorphism& phi) {
  for (const Word& b : s.boundary_words)
    if (!conjugator_between(phi.apply(b), b)) return false;
  return true;
}

namespace {

void check_peripheral_pair(const SurfaceSpec& s, const Word& c, const Word& d) {
  s.validate();
  auto ic = peripheral_index(s, c), id = peripheral_index(s, d);
  if (!ic || !id) throw Error("c and d must be conjugates of powers of boundary words");
  if (*ic == *id) throw Error("the subgroups generated by c and d are conjugate");
}

}  // namespace

bool verify_candidate(const SurfaceSpec& s, const std::vector<Word>& u, const std::vector<Word>& v, const Word& c,
                      const Word& d, const QHCandidate& cand) {
  const Automorphism& a = cand.witness;
  if (!compose(a.forward(), a.backward()).is_identity() || !compose(a.backward(), a.forward()).is_identity())
    return false;
  if (!(a.apply(c) == c.conj(cand.gamma)) || !(a.apply(d) == d.conj(cand.delta))) return false;
  if (!preserves_boundary(s, a)) return false;
  if (cand.m.size() != u.size() || cand.n.size() != u.size() || v.size() != u.size()) return false;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const Word rhs = d.pow(cand.m[i]).conj(cand.delta) * v[i] * c.pow(cand.n[i]).conj(cand.gamma);
    if (!(a.apply(u[i]) == rhs)) return false;
  }
  return true;
}

QHResult qh_exponent_candidates_multi(const SurfaceSpec& s, const std::vector<Word>& u, const std::vector<Word>& v,
                                      const Word& c, const Word& d, const QHSearchOptions& opt) {
  check_peripheral_pair(s, c, d);
  if (u.size() != v.size() || u.empty()) throw Error("u and v tuples must have equal positive length");
  for (const auto& w : u)
    if (w.max_generator() >= s.rank()) throw Error("word uses a letter outside the surface alphabet");
  for (const auto& w : v)
    if (w.max_generator() >= s.rank()) throw Error("word uses a letter outside the surface alphabet");

  QHResult res;
  if (opt.bound) {
    res.bound = *opt.bound;
  } else {
    for (std::size_t i = 0; i < u.size(); ++i) {
      long si = v[i].empty() ? 0 : self_intersection(s, v[i]);
      res.bound = std::max(res.bound, si + static_cast<long>(u[i].size() + v[i].size()) + 2);
    }
  }
  const long B = res.bound;

  // Per-coordinate exponent pairs passing the intersection-number filter.
  std::vector<std::vector<std::pair<long, long>>> allowed(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    const long target = v[i].empty() ? -1 : self_intersection(s, v[i]);
    for (long m = -B; m <= B; ++m)
      for (long n = -B; n <= B; ++n) {
        const Word shifted = d.pow(-m) * u[i] * c.pow(-n);
        const long si = shifted.empty() ? -1 : self_intersection(s, shifted);
        if (si == target) allowed[i].emplace_back(m, n);
      }
  }

  // alpha may be followed by any inner automorphism, so the u coordinates
  // only need to match up to one shared conjugator. With a single coordinate
  // this is a plain cyclic instance, for which the free search is decisive.
  const std::size_t k = u.size();
  auto instance = [&](const std::vector<Word>& first) {
    TupleInstance t{s.alphabet, {}};
    for (const auto& x : first) t.coords.push_back({CoordKind::Cyclic, x, k > 1 ? 0 : -1});
    t.coords.push_back({CoordKind::Cyclic, c, -1});
    t.coords.push_back({CoordKind::Cyclic, d, -1});
    for (const auto& b : s.boundary_words) t.coords.push_back({CoordKind::Cyclic, b, -1});
    return t;
  };
  FreeSearchOptions inner = opt.free;
  inner.threads = 1;

  // Decisive per-coordinate filter before forming the product.
  if (k > 1) {
    for (std::size_t i = 0; i < k; ++i) {
      std::vector<char> keep(allowed[i].size(), 0);
      detail::parallel_for(allowed[i].size(), opt.free.threads, [&](std::size_t idx) {
        auto [m, n] = allowed[i][idx];
        TupleInstance a{s.alphabet, {}}, b{s.alphabet, {}};
        for (const auto& x : {d.pow(-m) * u[i] * c.pow(-n), c, d}) a.coords.push_back({CoordKind::Cyclic, x, -1});
        for (const auto& x : {v[i], c, d}) b.coords.push_back({CoordKind::Cyclic, x, -1});
        for (const auto& bw : s.boundary_words) {
          a.coords.push_back({CoordKind::Cyclic, bw, -1});
          b.coords.push_back({CoordKind::Cyclic, bw, -1});
        }
        keep[idx] = equivalent(a, b, inner).verdict != Verdict::Inequivalent;
      });
      std::vector<std::pair<long, long>> kept;
      for (std::size_t idx = 0; idx < keep.size(); ++idx)
        if (keep[idx]) kept.push_back(allowed[i][idx]);
      allowed[i] = std::move(kept);
    }
  }

  std::vector<std::vector<std::pair<long, long>>> points{{}};
  for (const auto& opts : allowed) {
    std::vector<std::vector<std::pair<long, long>>> next;
    for (const auto& p : points)
      for (const auto& mn : opts) {
        next.push_back(p);
        next.back().push_back(mn);
      }
    points = std::move(next);
  }
  res.points_checked = points.size();

  const TupleInstance target = instance(v);
  std::vector<std::optional<QHCandidate>> found(points.size());
  std::vector<char> gave_up(points.size(), 0);
  detail::parallel_for(points.size(), opt.free.threads, [&](std::size_t idx) {
    QHCandidate cand;
    std::vector<Word> shifted;
    for (std::size_t i = 0; i < k; ++i) {
      auto [m, n] = points[idx][i];
      cand.m.push_back(m);
      cand.n.push_back(n);
      shifted.push_back(d.pow(-m) * u[i] * c.pow(-n));
    }
    OrbitResult r = equivalent(instance(shifted), target, inner);
    if (r.verdict == Verdict::Inconclusive) gave_up[idx] = 1;
    if (r.verdict != Verdict::Equivalent) return;
    // phi(x_i) = g x_i' g^-1 for the u group; alpha = phi followed by conjugation by g.
    const OrbitWitness& wit = *r.witness;
    const Word g = wit.conjugators[0];
    cand.witness = compose(Automorphism::inner(s.alphabet, g), wit.composed);
    const std::size_t ci = 1, di = 2;  // groups: u, c, d, boundary words
    cand.gamma = wit.conjugators[ci].inverse() * g;
    cand.delta = wit.conjugators[di].inverse() * g;
    if (!verify_candidate(s, u, v, c, d, cand)) throw Error("internal: QH candidate failed verification");
    found[idx] = std::move(cand);
  });
  for (std::size_t idx = 0; idx < points.size(); ++idx) {
    res.inconclusive += gave_up[idx];
    if (found[idx]) res.candidates.push_back(std::move(*found[idx]));
  }
  return res;
}

QHResult qh_exponent_candidates(const QHExponentQuery& q, const QHSearchOptions& opt) {
  return qh_exponent_candidates_multi(q.surface, {q.u}, {q.v}, q.c, q.d, opt);
}

}  // namespace whp
