#include "whp/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "parallel.hpp"
#include "whp/intmat.hpp"

namespace whp::oracle {

namespace {

using State = std::vector<Word>;

State key_of(const TupleInstance& t) {
  t.validate();
  State s;
  for (const auto& c : t.coords) {
    if (c.kind == CoordKind::Exact) {
      s.push_back(c.word);
    } else {
      if (c.group >= 0) {
        int members = 0;
        for (const auto& o : t.coords) members += o.group == c.group && o.kind == CoordKind::Cyclic;
        if (members > 1) throw Error("brute-force oracle does not support shared-conjugator groups");
      }
      s.push_back(canonical_cyclic(c.word).core());
    }
  }
  return s;
}

State rekey(const std::vector<bool>& cyclic, State s) {
  for (std::size_t i = 0; i < s.size(); ++i)
    if (cyclic[i]) s[i] = canonical_cyclic(s[i]).core();
  return s;
}

}  // namespace

struct OrbitBall::Impl {
  struct Node {
    State state;
    std::size_t parent;
    int move;
  };
  std::vector<Automorphism> generators;
  std::vector<int> moves;  // k >= 0 generator k, k < 0 inverse of generator -k-1
  std::vector<Endomorphism> move_maps;
  std::vector<bool> cyclic;
  std::vector<Node> nodes;
  std::map<State, std::size_t> index;

  std::vector<int> path_to(std::size_t i) const {
    std::vector<int> p;
    for (; i != 0; i = nodes[i].parent) p.push_back(nodes[i].move);
    std::reverse(p.begin(), p.end());
    return p;
  }
};

OrbitBall::OrbitBall(const std::vector<Automorphism>& generators, const TupleInstance& u, int radius,
                     const BruteForceOptions& opt) {
  if (radius < 0) throw Error("radius must be nonnegative");
  auto impl = std::make_shared<Impl>();
  impl->generators = generators;
  for (std::size_t k = 0; k < generators.size(); ++k) {
    if (!(generators[k].alphabet() == u.alphabet)) throw Error("generator alphabet does not match the tuple");
    impl->moves.push_back(static_cast<int>(k));
    impl->move_maps.push_back(generators[k].forward());
  }
  for (std::size_t k = 0; k < generators.size(); ++k) {
    const Endomorphism& inv = generators[k].backward();
    if (std::find(impl->move_maps.begin(), impl->move_maps.end(), inv) != impl->move_maps.end()) continue;
    impl->moves.push_back(-static_cast<int>(k) - 1);
    impl->move_maps.push_back(inv);
  }
  for (const auto& c : u.coords) impl->cyclic.push_back(c.kind == CoordKind::Cyclic);

  State start = key_of(u);
  impl->nodes.push_back({start, 0, 0});
  impl->index.emplace(start, 0);
  std::vector<std::size_t> frontier{0};
  for (int level = 0; level < radius && !frontier.empty(); ++level) {
    std::vector<std::vector<State>> succ(frontier.size());
    detail::parallel_for(frontier.size(), opt.threads, [&](std::size_t f) {
      const State& s = impl->nodes[frontier[f]].state;
      for (const auto& m : impl->move_maps) {
        State next;
        for (const auto& w : s) next.push_back(m.apply(w));
        succ[f].push_back(rekey(impl->cyclic, std::move(next)));
      }
    });
    std::vector<std::size_t> next;
    for (std::size_t f = 0; f < frontier.size(); ++f)
      for (std::size_t k = 0; k < impl->moves.size(); ++k) {
        State& s = succ[f][k];
        if (impl->index.count(s)) continue;
        if (impl->nodes.size() >= opt.max_states) throw Error("brute-force oracle exceeded its state limit");
        impl->nodes.push_back({std::move(s), frontier[f], impl->moves[k]});
        impl->index.emplace(impl->nodes.back().state, impl->nodes.size() - 1);
        next.push_back(impl->nodes.size() - 1);
      }
    frontier = std::move(next);
  }
  impl_ = std::move(impl);
}

bool OrbitBall::contains(const TupleInstance& v) const { return impl_->index.count(key_of(v)) > 0; }

bool OrbitBall::meets(const OrbitBall& other) const {
  const auto& small = size() <= other.size() ? *impl_ : *other.impl_;
  const auto& large = size() <= other.size() ? *other.impl_ : *impl_;
  for (const auto& n : small.nodes)
    if (large.index.count(n.state)) return true;
  return false;
}

std::size_t OrbitBall::size() const { return impl_->nodes.size(); }

std::optional<BruteForceWitness> orbit_bruteforce(const std::vector<Automorphism>& generators, const TupleInstance& u,
                                                  const TupleInstance& v, int radius, const BruteForceOptions& opt) {
  if (u.coords.size() != v.coords.size() || !(u.alphabet == v.alphabet)) throw Error("tuple shapes differ");
  for (std::size_t i = 0; i < u.coords.size(); ++i)
    if (u.coords[i].kind != v.coords[i].kind) throw Error("tuple shapes differ");
  OrbitBall from_u(generators, u, (radius + 1) / 2, opt), from_v(generators, v, radius / 2, opt);
  const auto& a = *from_u.impl_;
  const auto& b = *from_v.impl_;
  for (std::size_t i = 0; i < a.nodes.size(); ++i) {
    auto hit = b.index.find(a.nodes[i].state);
    if (hit == b.index.end()) continue;
    BruteForceWitness w;
    w.path = a.path_to(i);
    auto back = b.path_to(hit->second);
    for (auto it = back.rbegin(); it != back.rend(); ++it) w.path.push_back(-*it - 1);
    w.composed = Automorphism::identity(u.alphabet);
    for (int m : w.path) {
      const Automorphism& g = generators[m >= 0 ? m : -m - 1];
      w.composed = compose(m >= 0 ? g : g.inverse(), w.composed);
    }
    for (const auto& grp : u.groups()) {
      const Word img = w.composed.apply(u.coords[grp[0]].word);
      if (u.group_is_exact(grp)) {
        if (!(img == v.coords[grp[0]].word)) throw Error("internal: oracle path does not reach the target");
        w.conjugators.emplace_back();
      } else {
        auto g = conjugator_between(img, v.coords[grp[0]].word);
        if (!g) throw Error("internal: oracle path does not reach the target");
        w.conjugators.push_back(*g);
      }
    }
    return w;
  }
  return std::nullopt;
}

namespace {

using lattice::Int;

struct Mat2 {
  Int a, b, c, d;
  friend Mat2 operator*(const Mat2& x, const Mat2& y) {
    using lattice::add, lattice::mul;
    return {add(mul(x.a, y.a), mul(x.b, y.c)), add(mul(x.a, y.b), mul(x.b, y.d)),
            add(mul(x.c, y.a), mul(x.d, y.c)), add(mul(x.c, y.b), mul(x.d, y.d))};
  }
  friend bool operator==(const Mat2&, const Mat2&) = default;
  Mat2 inverse() const { return {d, -b, -c, a}; }
};

std::vector<Mat2> fuchsian_generators(const SurfaceSpec& s) {
  s.validate();
  if (s.genus == 1 && s.boundary == 1) return {{1, 1, 1, 2}, {1, -1, -1, 2}};
  if (s.genus == 0 && s.boundary == 3) return {{1, 2, 0, 1}, {1, 0, -2, 1}};
  throw Error("no built-in hyperbolic structure for this surface");
}

Mat2 matrix_of(const std::vector<Mat2>& gens, const Word& w) {
  Mat2 m{1, 0, 0, 1};
  for (Letter l : w.letters()) m = m * (l.sign() > 0 ? gens[l.gen()] : gens[l.gen()].inverse());
  return m;
}

using Real = long double;

}  // namespace

long si_numeric(const SurfaceSpec& s, const Word& w, const NumericOptions& opt) {
  if (w.empty()) throw Error("self-intersection of the trivial word");
  const Word core = canonical_cyclic(w).core();
  if (core.size() > opt.max_length) throw Error("word exceeds the numeric oracle length cap");
  auto [root, k] = cyclic_root(core);
  const auto gens = fuchsian_generators(s);
  const Mat2 W = matrix_of(gens, root);
  const Int trace = W.a + W.d;
  long si = 0;
  if (std::llabs(trace) > 2) {
    if (W.c == 0) throw Error("numeric oracle: axis through infinity");
    // Fixed points p, q = ((A - D) +- sqrt(disc)) / 2C. In the chart
    // z -> (z - p) / (z - q) the axis is the imaginary axis and W scales by mu.
    const Int disc = lattice::add(lattice::mul(trace, trace), -4);
    const Real root_disc = std::sqrt(static_cast<Real>(disc));
    const Real lambda = (std::fabs(static_cast<Real>(trace)) + root_disc) / 2;
    const Real mu = lambda * lambda;
    const Real log_mu = std::log(mu);
    const Real sep = opt.separation;
    // P + alpha * sqrt(disc) without cancellation.
    auto surd = [&](Int P, Int alpha) -> Real {
      if ((P >= 0) == (alpha >= 0) || P == 0 || alpha == 0) return P + alpha * root_disc;
      const __int128 num = static_cast<__int128>(P) * P - static_cast<__int128>(alpha) * alpha * disc;
      return static_cast<Real>(num) / (P - alpha * root_disc);
    };
    const Int AmD = W.a - W.d;
    std::vector<std::pair<Real, Real>> keys;
    const long max_len = 2 * static_cast<long>(root.size()) - 2;
    // Depth-first over reduced words g with |g| <= max_len.
    struct Frame {
      Mat2 m;
      int last;
      long len;
    };
    std::vector<Frame> stack{{{1, 0, 0, 1}, -1, 0}};
    const int letters = 2 * s.rank();
    while (!stack.empty()) {
      Frame f = stack.back();
      stack.pop_back();
      if (f.len < max_len)
        for (int code = 0; code < letters; ++code) {
          if (f.last >= 0 && Letter{code} == Letter{f.last}.inv()) continue;
          Letter l{code};
          stack.push_back({f.m * (l.sign() > 0 ? gens[l.gen()] : gens[l.gen()].inverse()), code, f.len + 1});
        }
      if (f.m * W == W * f.m) continue;  // same axis
      // Chart coordinates of g(p) and g(q) as ratios of linear forms in the fixed point.
      using lattice::add, lattice::mul;
      const Mat2& g = f.m;
      const Int an = add(mul(W.c, g.a - g.d), -mul(g.c, AmD)), bn = add(mul(W.c, g.b), -mul(g.c, W.b));
      const Int ad = mul(W.c, g.a + g.d), bd = add(add(mul(W.c, g.b), mul(g.c, W.b)), -mul(g.d, AmD));
      const Int pn = add(mul(an, AmD), mul(2 * W.c, bn)), pd = add(mul(ad, AmD), mul(2 * W.c, bd));
      const Real x = surd(pn, an) / surd(pd, ad), y = surd(pd, -ad) / surd(pn, -an);
      if (x == 0 || y == 0 || !std::isfinite(x) || !std::isfinite(y))
        throw Error("numeric oracle: translated axis shares an endpoint (degenerate)");
      if (x * y > 0) continue;
      // cos of the crossing angle is (x + y) / |x - y|.
      if (1 - std::fabs(x + y) / std::fabs(x - y) < sep) throw Error("numeric oracle: near-tangent crossing (degenerate)");
      const Real height = std::sqrt(-x * y);
      const Real t = std::log(height) / log_mu - 0.318309886L;
      const Real shift = std::floor(t);
      const Real frac = t - shift;
      if (frac < sep || frac > 1 - sep) throw Error("numeric oracle: crossing on a window edge (degenerate)");
      const Real scale = std::pow(mu, -shift);
      keys.emplace_back(std::min(x, y) * scale, std::max(x, y) * scale);
    }
    std::sort(keys.begin(), keys.end());
    auto close = [](Real u, Real v, Real tol) { return std::fabs(u - v) <= tol * (1 + std::fabs(u) + std::fabs(v)); };
    long distinct = 0;
    for (std::size_t i = 0; i < keys.size(); ++i) {
      bool dup = false;
      for (std::size_t j = i; j-- > 0 && close(keys[j].first, keys[i].first, sep);) {
        const bool same = close(keys[j].first, keys[i].first, 1e-12L) && close(keys[j].second, keys[i].second, 1e-12L);
        if (same) {
          dup = true;
          break;
        }
        if (close(keys[j].second, keys[i].second, sep))
          throw Error("numeric oracle: crossings closer than the separation threshold (" +
                      std::to_string(static_cast<double>(keys[j].first)) + ", " +
                      std::to_string(static_cast<double>(keys[j].second)) + ") vs (" +
                      std::to_string(static_cast<double>(keys[i].first)) + ", " +
                      std::to_string(static_cast<double>(keys[i].second)) + ")");
      }
      distinct += dup ? 0 : 1;
    }
    if (distinct % 2 != 0) throw Error("numeric oracle: odd number of crossing classes");
    si = distinct / 2;
  }
  return k * k * si + k - 1;
}

namespace {

std::vector<long> gog_state_key(const gog::Splitting& s, const canon::GTuple& t) {
  std::vector<long> key;
  for (std::size_t i = 0; i < t.size(); ++i) {
    auto k = t.cyclic[i] ? s.conjugacy_key(t.elements[i]) : s.exact_key(t.elements[i]);
    key.push_back(static_cast<long>(k.size()));
    key.insert(key.end(), k.begin(), k.end());
  }
  return key;
}

struct GogBall {
  struct Node {
    canon::GTuple state;
    int parent = -1;
    int move = 0;
  };
  std::vector<Node> nodes;
  std::map<std::vector<long>, int> index;

  GogBall(const gog::Splitting& s, const std::vector<gog::GAutomorphism>& moves, const canon::GTuple& c, int radius,
          std::size_t cap) {
    nodes.push_back({c, -1, 0});
    index[gog_state_key(s, c)] = 0;
    std::size_t begin = 0;
    for (int r = 0; r < radius; ++r) {
      const std::size_t end = nodes.size();
      for (std::size_t i = begin; i < end; ++i)
        for (std::size_t m = 0; m < moves.size(); ++m) {
          canon::GTuple next{{}, nodes[i].state.cyclic};
          for (const auto& x : nodes[i].state.elements) next.elements.push_back(s.apply(moves[m], x));
          if (!index.emplace(gog_state_key(s, next), static_cast<int>(nodes.size())).second) continue;
          nodes.push_back({std::move(next), static_cast<int>(i), static_cast<int>(m)});
          if (nodes.size() > cap) throw Error("oracle state cap exceeded");
        }
      begin = end;
    }
  }

  std::vector<int> path_to(int i) const {
    std::vector<int> out;
    for (; nodes[i].parent >= 0; i = nodes[i].parent) out.push_back(nodes[i].move);
    std::reverse(out.begin(), out.end());
    return out;
  }
};

}  // namespace

std::optional<GogWitness> gog_orbit_bruteforce(const gog::Splitting& s, const std::vector<gog::GAutomorphism>& generators,
                                               const canon::GTuple& u, const canon::GTuple& v, int radius,
                                               const BruteForceOptions& opt) {
  if (u.size() != v.size() || u.cyclic != v.cyclic) throw Error("tuple shapes differ");
  // moves[2i] = g_i, moves[2i+1] = g_i^-1
  std::vector<gog::GAutomorphism> moves;
  for (const auto& g : generators) moves.push_back(g), moves.push_back(s.inverse(g));
  GogBall a(s, moves, u, (radius + 1) / 2, opt.max_states), b(s, moves, v, radius / 2, opt.max_states);
  for (std::size_t i = 0; i < a.nodes.size(); ++i) {
    auto hit = b.index.find(gog_state_key(s, a.nodes[i].state));
    if (hit == b.index.end()) continue;
    auto encode = [](int m, bool flip) {
      const int g = m / 2;
      const bool inv = (m % 2 == 1) != flip;
      return inv ? -g - 1 : g;
    };
    GogWitness w;
    for (int m : a.path_to(static_cast<int>(i))) w.path.push_back(encode(m, false));
    auto back = b.path_to(hit->second);
    for (auto it = back.rbegin(); it != back.rend(); ++it) w.path.push_back(encode(*it, true));
    w.composed = s.identity_automorphism();
    for (int m : w.path) {
      const auto& g = generators[m >= 0 ? m : -m - 1];
      w.composed = s.compose(m >= 0 ? g : s.inverse(g), w.composed);
    }
    return w;
  }
  return std::nullopt;
}

}  // namespace whp::oracle
