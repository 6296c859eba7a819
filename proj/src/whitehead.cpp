#include "whp/whitehead.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "parallel.hpp"

namespace whp {

WhiteheadAuto WhiteheadAuto::type_one(std::vector<int> perm, std::vector<int> signs) {
  if (perm.size() != signs.size() || perm.empty()) throw Error("signed permutation size mismatch");
  std::vector<int> sorted = perm;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < sorted.size(); ++i)
    if (sorted[i] != static_cast<int>(i)) throw Error("type I data is not a permutation");
  for (int s : signs)
    if (s != 1 && s != -1) throw Error("type I signs must be +1 or -1");
  WhiteheadAuto w;
  w.kind = Kind::TypeI;
  w.perm = std::move(perm);
  w.signs = std::move(signs);
  return w;
}

WhiteheadAuto WhiteheadAuto::type_two(Letter a, std::vector<bool> cut) {
  if (cut.size() % 2 != 0 || cut.empty() || a.code >= static_cast<int>(cut.size()))
    throw Error("cut set does not match the alphabet");
  if (!cut[a.code] || cut[a.inv().code]) throw Error("cut set must contain the multiplier but not its inverse");
  WhiteheadAuto w;
  w.kind = Kind::TypeII;
  w.multiplier = a;
  w.cut = std::move(cut);
  return w;
}

int WhiteheadAuto::rank() const {
  return kind == Kind::TypeI ? static_cast<int>(perm.size()) : static_cast<int>(cut.size() / 2);
}

Word WhiteheadAuto::image(int gen) const {
  if (kind == Kind::TypeI) return Word::generator(perm.at(gen), signs.at(gen));
  const Letter x = Letter::make(gen, 1);
  if (gen == multiplier.gen()) return Word::letter(x);
  const Word a = Word::letter(multiplier);
  Word out = Word::letter(x);
  if (cut[x.code]) out = out * a;
  if (cut[x.inv().code]) out = a.inverse() * out;
  return out;
}

WhiteheadAuto WhiteheadAuto::inverse() const {
  if (kind == Kind::TypeI) {
    std::vector<int> p(perm.size()), s(perm.size());
    for (std::size_t i = 0; i < perm.size(); ++i) {
      p[perm[i]] = static_cast<int>(i);
      s[perm[i]] = signs[i];
    }
    return type_one(std::move(p), std::move(s));
  }
  std::vector<bool> c = cut;
  c[multiplier.code] = false;
  c[multiplier.inv().code] = true;
  return type_two(multiplier.inv(), std::move(c));
}

Automorphism WhiteheadAuto::to_automorphism(const Alphabet& alphabet) const {
  if (rank() != alphabet.rank()) throw Error("Whitehead automorphism rank does not match the alphabet");
  const WhiteheadAuto inv = inverse();
  std::vector<Word> f, b;
  for (int i = 0; i < rank(); ++i) {
    f.push_back(image(i));
    b.push_back(inv.image(i));
  }
  return Automorphism(Endomorphism(alphabet, std::move(f)), Endomorphism(alphabet, std::move(b)));
}

std::string WhiteheadAuto::describe(const Alphabet& alphabet) const {
  std::string out;
  if (kind == Kind::TypeI) {
    out = "I[";
    for (int i = 0; i < rank(); ++i) {
      if (i) out += ", ";
      out += alphabet.name(i) + "->" + format_word(image(i), alphabet);
    }
    return out + "]";
  }
  out = "II[" + format_word(Word::letter(multiplier), alphabet) + " |";
  for (int code = 0; code < static_cast<int>(cut.size()); ++code)
    if (cut[code]) out += " " + format_word(Word::letter(Letter{code}), alphabet);
  return out + "]";
}

std::vector<WhiteheadAuto> enumerate_whitehead_autos(const Alphabet& alphabet) {
  const int n = alphabet.rank();
  std::vector<WhiteheadAuto> out;
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  do {
    for (int mask = 0; mask < (1 << n); ++mask) {
      std::vector<int> signs(n);
      for (int i = 0; i < n; ++i) signs[i] = (mask >> i & 1) ? -1 : 1;
      out.push_back(WhiteheadAuto::type_one(perm, std::move(signs)));
    }
  } while (std::next_permutation(perm.begin(), perm.end()));

  const int letters = 2 * n;
  for (int a = 0; a < letters; ++a) {
    const Letter m{a};
    std::vector<int> free;
    for (int c = 0; c < letters; ++c)
      if (c != a && c != m.inv().code) free.push_back(c);
    for (long mask = 0; mask < (1L << free.size()); ++mask) {
      std::vector<bool> cut(letters, false);
      cut[a] = true;
      for (std::size_t i = 0; i < free.size(); ++i)
        if (mask >> i & 1) cut[free[i]] = true;
      out.push_back(WhiteheadAuto::type_two(m, std::move(cut)));
    }
  }
  return out;
}

std::vector<std::vector<int>> TupleInstance::groups() const {
  std::vector<std::vector<int>> out;
  std::map<int, std::size_t> by_label;
  for (int i = 0; i < static_cast<int>(coords.size()); ++i) {
    const Coordinate& c = coords[i];
    if (c.kind == CoordKind::Exact || c.group < 0) {
      out.push_back({i});
      continue;
    }
    auto [it, fresh] = by_label.emplace(c.group, out.size());
    if (fresh) out.emplace_back();
    out[it->second].push_back(i);
  }
  return out;
}

bool TupleInstance::group_is_exact(const std::vector<int>& group) const {
  return group.size() == 1 && coords[group[0]].kind == CoordKind::Exact;
}

void TupleInstance::validate() const {
  for (const auto& c : coords) {
    if (c.word.max_generator() >= alphabet.rank()) throw Error("coordinate uses a letter outside the alphabet");
    if (c.kind == CoordKind::Exact && c.group >= 0) throw Error("exact coordinates cannot belong to a conjugacy group");
  }
}

std::size_t total_length(const TupleInstance& t) {
  std::size_t n = 0;
  for (const auto& c : t.coords) n += c.kind == CoordKind::Exact ? c.word.size() : canonical_cyclic(c.word).size();
  return n;
}

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Equivalent: return "equivalent";
    case Verdict::Inequivalent: return "inequivalent";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "?";
}

namespace {

std::size_t sum_lengths(const std::vector<Word>& ws) {
  std::size_t n = 0;
  for (const auto& w : ws) n += w.size();
  return n;
}

std::vector<Word> conjugate_all(const std::vector<Word>& ws, const Word& g) {
  std::vector<Word> out;
  out.reserve(ws.size());
  for (const auto& w : ws) out.push_back(w.conj(g));
  return out;
}

}  // namespace

GroupCanonical canonical_simultaneous(const std::vector<Word>& words) {
  auto first = std::find_if(words.begin(), words.end(), [](const Word& w) { return !w.empty(); });
  if (first == words.end()) return {words, Word{}};

  // Commuting family: all words are powers of one root.
  auto [p, m] = strip_conjugation(*first);
  Word root = p * cyclic_root(m).first * p.inverse();
  if (std::all_of(words.begin(), words.end(), [&](const Word& w) { return power_of(w, root).has_value(); })) {
    Word c = cyclic_reduce(root).conjugator;
    return {conjugate_all(words, c), c};
  }

  // Otherwise the total length is a convex proper function on the Cayley
  // tree: walk downhill, then scan the (finite) plateau of minimizers.
  const int rank = [&] {
    int r = 0;
    for (const auto& w : words) r = std::max(r, w.max_generator() + 1);
    return r;
  }();
  auto cost = [&](const Word& g) {
    std::size_t n = 0;
    for (const auto& w : words) n += w.conj(g).size();
    return n;
  };
  Word g;
  std::size_t best = cost(g);
  for (bool moved = true; moved;) {
    moved = false;
    for (int code = 0; code < 2 * rank && !moved; ++code) {
      Word h = g * Word::letter(Letter{code});
      if (std::size_t c = cost(h); c < best) best = c, g = h, moved = true;
    }
  }
  std::vector<Word> seen{g}, queue{g};
  GroupCanonical result{conjugate_all(words, g), g};
  while (!queue.empty()) {
    Word cur = queue.back();
    queue.pop_back();
    for (int code = 0; code < 2 * rank; ++code) {
      Word h = cur * Word::letter(Letter{code});
      if (std::find(seen.begin(), seen.end(), h) != seen.end() || cost(h) != best) continue;
      seen.push_back(h);
      queue.push_back(h);
      auto cand = conjugate_all(words, h);
      if (cand < result.words) result = {std::move(cand), h};
    }
  }
  return result;
}

namespace {

using State = std::vector<Word>;

// Group structure shared by the two sides of a query.
struct Shape {
  std::vector<std::vector<int>> groups;
  std::vector<bool> exact;
  std::vector<bool> cyclic_coord;
  bool decisive = false;  // all exact, or all cyclic singletons

  explicit Shape(const TupleInstance& t) : groups(t.groups()) {
    bool all_exact = true, all_cyclic_single = true;
    for (const auto& g : groups) {
      exact.push_back(t.group_is_exact(g));
      all_exact = all_exact && exact.back();
      all_cyclic_single = all_cyclic_single && !exact.back() && g.size() == 1;
    }
    for (const auto& c : t.coords) cyclic_coord.push_back(c.kind == CoordKind::Cyclic);
    decisive = all_exact || all_cyclic_single;
  }
};

struct Canon {
  State state;
  std::vector<Word> conjugators;  // state == conj^-1 * words * conj per group
};

Canon canonicalize(const Shape& shape, const State& words) {
  Canon c{State(words.size()), {}};
  for (std::size_t gi = 0; gi < shape.groups.size(); ++gi) {
    const auto& g = shape.groups[gi];
    if (shape.exact[gi]) {
      c.state[g[0]] = words[g[0]];
      c.conjugators.emplace_back();
      continue;
    }
    std::vector<Word> members;
    for (int i : g) members.push_back(words[i]);
    GroupCanonical gc = canonical_simultaneous(members);
    for (std::size_t k = 0; k < g.size(); ++k) c.state[g[k]] = gc.words[k];
    c.conjugators.push_back(gc.conjugator);
  }
  return c;
}

// Spec-level length first, then the group-minimal length.
using Potential = std::pair<std::size_t, std::size_t>;

Potential potential(const Shape& shape, const State& s) {
  std::size_t a = 0;
  for (std::size_t i = 0; i < s.size(); ++i)
    a += shape.cyclic_coord[i] ? canonical_cyclic(s[i]).size() : s[i].size();
  return {a, sum_lengths(s)};
}

State apply_all(const Endomorphism& e, const State& s) {
  State out;
  out.reserve(s.size());
  for (const auto& w : s) out.push_back(e.apply(w));
  return out;
}

class Searcher {
 public:
  Searcher(const Alphabet& alphabet, Shape shape, const FreeSearchOptions& opt)
      : alphabet_(alphabet), shape_(std::move(shape)), opt_(opt), autos_(enumerate_whitehead_autos(alphabet)) {
    for (const auto& a : autos_) images_.push_back(a.to_automorphism(alphabet).forward());
  }

  const Shape& shape() const { return shape_; }
  const std::vector<WhiteheadAuto>& autos() const { return autos_; }

  // Greedy descent on canonical states; returns the final state and steps.
  std::pair<State, std::vector<WhiteheadAuto>> descend(State s) const {
    std::vector<WhiteheadAuto> steps;
    Potential cur = potential(shape_, s);
    for (bool moved = true; moved;) {
      moved = false;
      for (std::size_t k = 0; k < autos_.size(); ++k) {
        State next = canonicalize(shape_, apply_all(images_[k], s)).state;
        Potential p = potential(shape_, next);
        if (p < cur) {
          s = std::move(next), cur = p, moved = true;
          steps.push_back(autos_[k]);
          break;
        }
      }
    }
    return {std::move(s), std::move(steps)};
  }

  enum class Outcome { Found, Exhausted, Capped };

  // BFS from `start` through canonical states accepted by `admit`.
  template <class Admit>
  Outcome bfs(const State& start, const State& target, Admit admit, std::vector<WhiteheadAuto>& path) const {
    struct Node {
      State state;
      std::size_t parent;
      std::size_t via;
    };
    std::vector<Node> nodes{{start, 0, 0}};
    std::map<State, std::size_t> index{{start, 0}};
    std::vector<std::size_t> frontier{0};
    auto trace = [&](std::size_t i) {
      path.clear();
      for (; i != 0; i = nodes[i].parent) path.push_back(autos_[nodes[i].via]);
      std::reverse(path.begin(), path.end());
    };
    if (start == target) return trace(0), Outcome::Found;
    while (!frontier.empty()) {
      std::vector<std::vector<State>> succ(frontier.size());
      detail::parallel_for(frontier.size(), opt_.threads, [&](std::size_t f) {
        const State& s = nodes[frontier[f]].state;
        succ[f].reserve(autos_.size());
        for (const auto& img : images_) succ[f].push_back(canonicalize(shape_, apply_all(img, s)).state);
      });
      std::vector<std::size_t> next;
      for (std::size_t f = 0; f < frontier.size(); ++f)
        for (std::size_t k = 0; k < autos_.size(); ++k) {
          State& s = succ[f][k];
          if (index.count(s) || !admit(s)) continue;
          nodes.push_back({std::move(s), frontier[f], k});
          index.emplace(nodes.back().state, nodes.size() - 1);
          if (nodes.back().state == target) return trace(nodes.size() - 1), Outcome::Found;
          if (nodes.size() > opt_.max_states) return Outcome::Capped;
          next.push_back(nodes.size() - 1);
        }
      frontier = std::move(next);
    }
    return Outcome::Exhausted;
  }

 private:
  const Alphabet& alphabet_;
  Shape shape_;
  FreeSearchOptions opt_;
  std::vector<WhiteheadAuto> autos_;
  std::vector<Endomorphism> images_;
};

State words_of(const TupleInstance& t) {
  State s;
  for (const auto& c : t.coords) s.push_back(c.word);
  return s;
}

void check_shapes(const TupleInstance& u, const TupleInstance& v) {
  u.validate();
  v.validate();
  if (!(u.alphabet == v.alphabet)) throw Error("tuples use different alphabets");
  if (u.coords.size() != v.coords.size()) throw Error("tuples have different numbers of coordinates");
  for (std::size_t i = 0; i < u.coords.size(); ++i)
    if (u.coords[i].kind != v.coords[i].kind) throw Error("coordinate kinds differ at position " + std::to_string(i));
  if (u.groups() != v.groups()) throw Error("tuples have different conjugacy group shapes");
}

Automorphism compose_steps(const Alphabet& alphabet, const std::vector<WhiteheadAuto>& steps) {
  Automorphism out = Automorphism::identity(alphabet);
  for (const auto& s : steps) out = compose(s.to_automorphism(alphabet), out);
  return out;
}

// Conjugators g with g^-1 phi(u) g = v per group, given matching canonical forms.
std::vector<Word> group_conjugators(const Shape& shape, const State& image, const State& target) {
  Canon a = canonicalize(shape, image), b = canonicalize(shape, target);
  if (a.state != b.state) throw Error("internal: witness does not reach the target orbit");
  std::vector<Word> out;
  for (std::size_t gi = 0; gi < shape.groups.size(); ++gi)
    out.push_back(a.conjugators[gi] * b.conjugators[gi].inverse());
  return out;
}

OrbitWitness make_witness(const TupleInstance& u, const TupleInstance& v, const Shape& shape,
                          std::vector<WhiteheadAuto> steps) {
  OrbitWitness w;
  w.composed = compose_steps(u.alphabet, steps);
  w.steps = std::move(steps);
  w.conjugators = group_conjugators(shape, apply_all(w.composed.forward(), words_of(u)), words_of(v));
  if (!verify_witness(u, v, w)) throw Error("internal: witness failed verification");
  return w;
}

}  // namespace

Minimized minimize(const TupleInstance& t, const FreeSearchOptions& opt) {
  t.validate();
  Shape shape(t);
  Searcher search(t.alphabet, shape, opt);
  auto [state, steps] = search.descend(canonicalize(shape, words_of(t)).state);
  Minimized m{t, {}};
  for (std::size_t i = 0; i < state.size(); ++i) m.minimal.coords[i].word = state[i];
  m.witness.composed = compose_steps(t.alphabet, steps);
  m.witness.steps = std::move(steps);
  m.witness.conjugators = group_conjugators(shape, apply_all(m.witness.composed.forward(), words_of(t)), state);
  return m;
}

OrbitResult equivalent(const TupleInstance& u, const TupleInstance& v, const FreeSearchOptions& opt) {
  check_shapes(u, v);
  Shape shape(u);
  Searcher search(u.alphabet, shape, opt);
  const State cu = canonicalize(shape, words_of(u)).state;
  const State cv = canonicalize(shape, words_of(v)).state;
  if (cu == cv) return {Verdict::Equivalent, make_witness(u, v, shape, {}), "same canonical form"};

  auto [mu, su] = search.descend(cu);
  auto [mv, sv] = search.descend(cv);
  const Potential pu = potential(shape, mu), pv = potential(shape, mv);

  auto finish = [&](const std::vector<WhiteheadAuto>& middle, std::string note) {
    std::vector<WhiteheadAuto> steps = su;
    steps.insert(steps.end(), middle.begin(), middle.end());
    for (auto it = sv.rbegin(); it != sv.rend(); ++it) steps.push_back(it->inverse());
    return OrbitResult{Verdict::Equivalent, make_witness(u, v, shape, std::move(steps)), std::move(note)};
  };

  std::vector<WhiteheadAuto> middle;
  if (shape.decisive) {
    if (pu != pv) return {Verdict::Inequivalent, std::nullopt, "minimal total lengths differ"};
    auto outcome = search.bfs(mu, mv, [&](const State& s) { return potential(shape, s) == pu; }, middle);
    if (outcome == Searcher::Outcome::Found) return finish(middle, "peak reduction");
    if (outcome == Searcher::Outcome::Exhausted)
      return {Verdict::Inequivalent, std::nullopt, "minimal representatives are not connected"};
    return {Verdict::Inconclusive, std::nullopt, "state limit reached among minimal representatives"};
  }

  // Mixed or grouped coordinates: bounded search around the minimum.
  const std::size_t ceiling = pu.second + static_cast<std::size_t>(std::max(opt.slack, 0));
  auto outcome = search.bfs(mu, mv, [&](const State& s) { return potential(shape, s).second <= ceiling; }, middle);
  if (outcome == Searcher::Outcome::Found) return finish(middle, "bounded search");
  return {Verdict::Inconclusive, std::nullopt,
          "no witness within total length " + std::to_string(ceiling) +
              (outcome == Searcher::Outcome::Capped ? " (state limit reached)" : "")};
}

bool verify_witness(const TupleInstance& u, const TupleInstance& v, const OrbitWitness& w) {
  if (u.coords.size() != v.coords.size()) return false;
  if (!w.steps.empty()) {
    Automorphism direct = Automorphism::identity(u.alphabet);
    for (const auto& s : w.steps) direct = compose(s.to_automorphism(u.alphabet), direct);
    if (!(direct.forward() == w.composed.forward())) return false;
  }
  const auto groups = u.groups();
  if (w.conjugators.size() != groups.size()) return false;
  for (std::size_t gi = 0; gi < groups.size(); ++gi) {
    for (int i : groups[gi]) {
      const Word img = w.composed.apply(u.coords[i].word);
      if (u.group_is_exact(groups[gi])) {
        if (!(img == v.coords[i].word)) return false;
      } else if (groups[gi].size() == 1) {
        if (!(canonical_cyclic(img.conj(w.conjugators[gi])) == canonical_cyclic(v.coords[i].word))) return false;
      } else if (!(img.conj(w.conjugators[gi]) == v.coords[i].word)) {
        return false;
      }
    }
  }
  return true;
}

std::optional<Automorphism> verify_basis(const Endomorphism& images, const FreeSearchOptions& opt) {
  TupleInstance basis{images.alphabet(), {}}, target{images.alphabet(), {}};
  for (int i = 0; i < images.alphabet().rank(); ++i) {
    basis.coords.push_back({CoordKind::Exact, Word::generator(i), -1});
    target.coords.push_back({CoordKind::Exact, images.image(i), -1});
  }
  OrbitResult r = equivalent(basis, target, opt);
  if (r.verdict != Verdict::Equivalent) return std::nullopt;
  return Automorphism(images, r.witness->composed.backward());
}

void check_compatible(const TupleInstance& u, const TupleInstance& v) { check_shapes(u, v); }

std::optional<OrbitWitness> witness_from_map(const TupleInstance& u, const TupleInstance& v, const Automorphism& phi) {
  check_shapes(u, v);
  if (!(phi.alphabet() == u.alphabet)) throw Error("automorphism and tuples use different alphabets");
  OrbitWitness w{{}, phi, {}};
  for (const auto& group : u.groups()) {
    if (u.group_is_exact(group)) {
      w.conjugators.emplace_back();
      continue;
    }
    std::vector<Word> images, targets;
    for (int i : group) {
      images.push_back(phi.apply(u.coords[i].word));
      targets.push_back(v.coords[i].word);
    }
    if (group.size() == 1) {
      auto g = conjugator_between(images[0], targets[0]);
      if (!g) return std::nullopt;
      w.conjugators.push_back(*g);
      continue;
    }
    GroupCanonical ci = canonical_simultaneous(images), ct = canonical_simultaneous(targets);
    if (ci.words != ct.words) return std::nullopt;
    w.conjugators.push_back(ci.conjugator * ct.conjugator.inverse());
  }
  if (!verify_witness(u, v, w)) return std::nullopt;
  return w;
}

}  // namespace whp
