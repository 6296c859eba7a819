// Canonical automorphisms of a graph of groups and the orbit decision.

#include "whp/canonical.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "linear_rows.hpp"
#include "parallel.hpp"

namespace whp::canon {

using gog::Crossing;
using gog::CyclicForm;
using gog::Edge;
using gog::Element;
using gog::VertexKind;
using lattice::Int;
using lattice::Matrix;
using lattice::Vec;

// ---------------------------------------------------------------------------
// Free-group coset equation.

std::optional<std::pair<long, long>> csa_coset_solve(const Word& v, const Word& w, const Word& c) {
  if (c.empty()) throw Error("csa_coset_solve: trivial cyclic subgroup");
  auto [p, m] = strip_conjugation(c);
  const Word root = p * cyclic_root(m).first * p.inverse();
  const bool v_in = power_of(v, root).has_value();
  const bool w_in = power_of(w, root).has_value();
  if (v_in && w_in) throw Error("non-unique regime: both elements lie in the maximal cyclic subgroup of c");
  if (v_in || w_in) return std::nullopt;
  auto sol = gog::double_coset_solve(w, c, v, c);
  using K = gog::DoubleCosetSolutions::Kind;
  if (sol.kind == K::None) return std::nullopt;
  if (sol.kind == K::Line) throw Error("internal: coset equation degenerate outside the cyclic subgroup");
  return std::make_pair(sol.a, sol.b);
}

// ---------------------------------------------------------------------------
// Abelian vertices.

Matrix PeripheralSplit::basis() const {
  std::vector<Vec> cols = a1;
  cols.insert(cols.end(), a2.begin(), a2.end());
  return Matrix::from_columns(cols, rank);
}

PeripheralSplit peripheral_split(int rank, const std::vector<Vec>& images) {
  bool nonzero = false;
  for (const auto& v : images) {
    if (static_cast<int>(v.size()) != rank) throw Error("edge image has the wrong length");
    for (Int x : v) nonzero = nonzero || x != 0;
  }
  if (!nonzero) throw Error("edge-image lattice is zero");
  auto sat = lattice::saturate(images, rank);
  PeripheralSplit out{rank, sat.saturation, sat.complement, 0};
  const int r1 = static_cast<int>(out.a1.size());
  std::vector<Vec> coords;
  for (const auto& v : images) coords.push_back(*lattice::coordinates(out.a1, v, rank));
  auto h = lattice::hermite_basis(coords, r1);
  Matrix hm(r1, r1);
  for (int i = 0; i < r1; ++i)
    for (int j = 0; j < r1; ++j) hm(i, j) = h.at(i)[j];
  const Int d = lattice::determinant(hm);
  out.index = d < 0 ? -d : d;
  return out;
}

namespace {

Matrix unimodular_inverse(const Matrix& m) {
  const int n = m.rows();
  std::vector<Vec> cols;
  for (int i = 0; i < n; ++i) {
    Vec e(n, 0);
    e[i] = 1;
    auto sol = lattice::solve(m, e);
    if (!sol || !sol->kernel.empty()) throw Error("internal: matrix is not unimodular");
    cols.push_back(sol->particular);
  }
  return Matrix::from_columns(cols, n);
}

struct AbelianSplit {
  int r1 = 0, r2 = 0;
  Matrix Q, Qinv;  ///< columns of Q: basis of A1 then A2
};

AbelianSplit abelian_split(const Splitting& s, int v) {
  const int n = s.vertex(v).rank();
  std::vector<Vec> images;
  bool nonzero = false;
  for (int e = 0; e < s.num_edges(); ++e) {
    const Edge& ed = s.edge(e);
    if (ed.from == v) images.push_back(ed.image_from.vec);
    if (ed.to == v) images.push_back(ed.image_to.vec);
  }
  for (const auto& x : images)
    for (Int c : x) nonzero = nonzero || c != 0;
  AbelianSplit out;
  if (!nonzero) {
    out.r2 = n;
    out.Q = out.Qinv = Matrix::identity(n);
    return out;
  }
  auto p = peripheral_split(n, images);
  out.r1 = static_cast<int>(p.a1.size());
  out.r2 = static_cast<int>(p.a2.size());
  out.Q = p.basis();
  out.Qinv = unimodular_inverse(out.Q);
  return out;
}

bool fixes_boundary_exactly(const SurfaceSpec& sp, const Automorphism& a) {
  for (const Word& b : sp.boundary_words)
    if (!(a.apply(b) == b)) return false;
  return true;
}

std::vector<Automorphism> twist_ball(const Alphabet& ab, const std::vector<Automorphism>& gens, int radius) {
  std::vector<Automorphism> moves;
  for (const auto& g : gens) moves.push_back(g), moves.push_back(g.inverse());
  std::vector<Automorphism> ball{Automorphism::identity(ab)};
  std::set<std::vector<Word>> seen{ball[0].forward().images()};
  std::size_t begin = 0;
  for (int r = 0; r < radius; ++r) {
    const std::size_t end = ball.size();
    for (std::size_t i = begin; i < end; ++i)
      for (const auto& m : moves) {
        Automorphism x = compose(m, ball[i]);
        if (seen.insert(x.forward().images()).second) ball.push_back(std::move(x));
      }
    begin = end;
  }
  return ball;
}

}  // namespace

std::vector<Automorphism> surface_twists(const gog::Vertex& v) {
  if (v.kind != VertexKind::Surface || !v.surface) throw Error("vertex " + v.label + " is not a surface vertex");
  if (!v.qh_twists.empty()) return v.qh_twists;
  const SurfaceSpec& sp = *v.surface;
  if (sp.genus > 1 || (sp.genus == 1 && sp.boundary > 2) || (sp.genus == 0 && sp.boundary > 2))
    throw Error("surface vertex " + v.label + " of genus " + std::to_string(sp.genus) + " with " +
                std::to_string(sp.boundary) + " boundary components needs a twist list");
  auto out = builtin_twists(sp);
  for (const auto& t : out)
    if (!fixes_boundary_exactly(sp, t)) throw Error("internal: built-in twist moves a boundary word");
  return out;
}

// ---------------------------------------------------------------------------
// Generators.

std::vector<GAutomorphism> CanonicalGeneratorSet::all() const {
  std::vector<GAutomorphism> out;
  for (const auto* family : {&dehn_twists, &abelian_autos, &qh_twists})
    for (const auto& g : *family) out.push_back(g.map);
  return out;
}

CanonicalGeneratorSet canonical_generators(const Splitting& s) {
  using Kind = CanonicalGenerator::Kind;
  CanonicalGeneratorSet out;
  for (int e = 0; e < s.num_edges(); ++e)
    out.dehn_twists.push_back({Kind::DehnTwist, e, "twist " + s.edge(e).label, gog::dehn_twist(s, e, 1L)});
  for (int v = 0; v < s.num_vertices(); ++v) {
    const gog::Vertex& vx = s.vertex(v);
    if (vx.kind == VertexKind::Abelian) {
      const AbelianSplit sp = abelian_split(s, v);
      const int n = vx.rank();
      auto add = [&](Matrix m, std::string name) {
        Matrix std_basis = sp.Q * m * sp.Qinv;
        out.abelian_autos.push_back({Kind::Abelian, v, vx.label + " " + std::move(name),
                                     gog::extend_vertex_automorphism(s, v, std_basis)});
      };
      for (int i = 0; i < sp.r1; ++i)
        for (int j = 0; j < sp.r2; ++j) {
          Matrix m = Matrix::identity(n);
          m(i, sp.r1 + j) = 1;
          add(m, "transvection " + std::to_string(i) + "," + std::to_string(sp.r1 + j));
        }
      for (int i = 0; i < sp.r2; ++i)
        for (int j = 0; j < sp.r2; ++j) {
          if (i == j) continue;
          Matrix m = Matrix::identity(n);
          m(sp.r1 + i, sp.r1 + j) = 1;
          add(m, "transvection " + std::to_string(sp.r1 + i) + "," + std::to_string(sp.r1 + j));
        }
      if (sp.r2 > 0) {
        Matrix m = Matrix::identity(n);
        m(sp.r1, sp.r1) = -1;
        add(m, "flip " + std::to_string(sp.r1));
      }
    } else if (vx.kind == VertexKind::Surface) {
      const auto twists = surface_twists(vx);
      for (std::size_t i = 0; i < twists.size(); ++i)
        out.qh_twists.push_back({Kind::QH, v, vx.label + " twist " + std::to_string(i + 1),
                                 gog::extend_vertex_automorphism(s, v, twists[i])});
    }
  }
  for (const auto* family : {&out.dehn_twists, &out.abelian_autos, &out.qh_twists})
    for (const auto& g : *family) {
      if (!s.is_automorphism(g.map)) throw Error("internal: generator " + g.name + " is not an automorphism");
      for (std::size_t x = 0; x < s.generators().size(); ++x) {
        const auto& gen = s.generators()[x];
        if (gen.stable) continue;
        auto where = s.elliptic_vertices(s.apply(g.map, s.generator(static_cast<int>(x))));
        if (!std::binary_search(where.begin(), where.end(), gen.index))
          throw Error("internal: generator " + g.name + " moves vertex " + s.vertex(gen.index).label);
      }
    }
  return out;
}

// ---------------------------------------------------------------------------
// Verification.

bool verify_witness(const Splitting& s, const GAutomorphism& phi, const GTuple& u, const GTuple& v) {
  if (u.size() != v.size() || u.cyclic != v.cyclic || u.cyclic.size() != u.size()) return false;
  if (phi.forward.size() != s.generators().size() || !s.is_automorphism(phi)) return false;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const NormalForm im = s.apply(phi, u.elements[i]);
    if (!u.cyclic[i]) {
      if (!(im == v.elements[i])) return false;
    } else if (!s.conjugator(im, v.elements[i])) {
      return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// The decision for one coset representative.

namespace {

constexpr std::size_t kMaxBranches = 1u << 18;

int twist_sign(const Splitting& s, const Crossing& x) {
  const Edge& e = s.edge(x.edge);
  if (!e.in_tree()) return x.forward ? 1 : -1;
  const int child = s.parent_edge(e.to) == x.edge ? e.to : e.from;
  return s.target(x) == child ? -1 : 1;
}

struct Plan {
  bool cyclic = false;
  bool skip = false;
  NormalForm U, V;
  CyclicForm CU, CV;
  std::vector<std::size_t> rotations;  ///< hyperbolic cyclic coordinates
  std::vector<Element> targets;        ///< elliptic at an abelian vertex
  bool surface_elliptic = false;
  std::vector<long> key_v;
  std::size_t choices() const {
    if (!rotations.empty()) return rotations.size();
    if (!targets.empty()) return targets.size();
    return 1;
  }
};

struct Found {
  GAutomorphism phi;
  std::vector<long> twist;
};

class Solver {
 public:
  Solver(const Splitting& s, const GTuple& u, const GTuple& v, const OrbitOptions& opt)
      : s_(s), u_(u), v_(v), opt_(opt) {}

  OrbitResult run() {
    OrbitResult out;
    if (auto obstruction = plan()) {
      out.verdict = Verdict::Inequivalent;
      out.note = *obstruction;
      return out;
    }
    std::size_t total = 1;
    for (const auto& p : plans_) total = mul_capped(total, p.choices());
    for (int q : active_qh_) total = mul_capped(total, balls_.at(q).size());
    bool truncated = truncated_;
    if (total > kMaxBranches) {
      total = kMaxBranches;
      truncated = true;
    }
    const std::size_t block = 32 * static_cast<std::size_t>(std::max(1, opt_.threads));
    for (std::size_t start = 0; start < total; start += block) {
      const std::size_t n = std::min(block, total - start);
      std::vector<std::optional<Found>> found(n);
      std::vector<char> trunc(n, 0);
      detail::parallel_for(n, opt_.threads, [&](std::size_t i) {
        bool t = false;
        found[i] = try_branch(start + i, t);
        trunc[i] = t;
      });
      for (std::size_t i = 0; i < n; ++i) {
        if (found[i]) {
          out.verdict = Verdict::Equivalent;
          out.witness = std::move(found[i]->phi);
          out.twist = std::move(found[i]->twist);
          return out;
        }
        truncated = truncated || trunc[i];
      }
    }
    out.truncated = truncated;
    out.verdict = truncated ? Verdict::Inconclusive : Verdict::Inequivalent;
    out.note = truncated ? "no solution within the search bounds" : "no canonical automorphism solves the syllable system";
    return out;
  }

 private:
  static std::size_t mul_capped(std::size_t a, std::size_t b) {
    if (a == 0 || b == 0) return 0;
    return a > (kMaxBranches + 1) / b ? kMaxBranches + 1 : a * b;
  }

  void note_vertex(int v, const Element& x) {
    const auto& vx = s_.vertex(v);
    if (vx.kind == VertexKind::Abelian && !splits_.count(v)) splits_[v] = abelian_split(s_, v);
    if (s_.local_is_identity(v, x)) return;
    if (vx.kind == VertexKind::Surface && !balls_.count(v)) {
      const auto twists = surface_twists(vx);
      if (!twists.empty()) {
        balls_[v] = twist_ball(vx.alphabet, twists, opt_.qh_radius);
        active_qh_.push_back(v);
        truncated_ = true;
      }
    }
  }

  std::optional<std::string> plan() {
    if (u_.size() != v_.size() || u_.cyclic.size() != u_.size() || v_.cyclic.size() != v_.size())
      throw Error("tuple shapes differ");
    for (std::size_t j = 0; j < u_.size(); ++j) {
      const std::string where = "coordinate " + std::to_string(j + 1) + ": ";
      if (u_.cyclic[j] != v_.cyclic[j]) throw Error(where + "exact and cyclic coordinates mixed");
      Plan p;
      p.cyclic = u_.cyclic[j];
      if (!p.cyclic) {
        p.U = u_.elements[j];
        p.V = v_.elements[j];
        if (p.U.crossings != p.V.crossings) return where + "syllable skeletons differ";
        int at = p.U.start;
        for (std::size_t i = 0; i < p.U.syllables.size(); ++i) {
          note_vertex(at, p.U.syllables[i]);
          if (i < p.U.crossings.size()) at = s_.target(p.U.crossings[i]);
        }
      } else {
        p.CU = s_.cyclic_form(u_.elements[j]);
        p.CV = s_.cyclic_form(v_.elements[j]);
        if (p.CU.elliptic() != p.CV.elliptic()) return where + "elliptic against hyperbolic";
        if (p.CU.elliptic()) {
          const int w = p.CU.start;
          const bool tu = s_.local_is_identity(w, p.CU.syllables[0]);
          const bool tv = s_.local_is_identity(p.CV.start, p.CV.syllables[0]);
          if (tu || tv) {
            if (tu != tv) return where + "trivial against nontrivial";
            p.skip = true;
          } else {
            note_vertex(w, p.CU.syllables[0]);
            const auto kind = s_.vertex(w).kind;
            if (kind == VertexKind::Abelian) {
              for (auto& [x, e] : gog::elliptic_conjugates(s_, v_.elements[j]))
                if (x == w) p.targets.push_back(e);
              if (p.targets.empty()) return where + "target is not conjugate into vertex " + s_.vertex(w).label;
            } else if (kind == VertexKind::Surface && balls_.count(w)) {
              p.surface_elliptic = true;
              p.key_v = s_.conjugacy_key(v_.elements[j]);
            } else {
              if (s_.conjugacy_key(u_.elements[j]) != s_.conjugacy_key(v_.elements[j]))
                return where + "rigid elliptic elements are not conjugate";
              p.skip = true;
            }
          }
        } else {
          const std::size_t n = p.CU.crossings.size();
          if (p.CV.crossings.size() != n) return where + "cyclic skeletons differ in length";
          for (std::size_t r = 0; r < n; ++r) {
            bool same = true;
            for (std::size_t i = 0; i < n && same; ++i) same = p.CU.crossings[(r + i) % n] == p.CV.crossings[i];
            if (same) p.rotations.push_back(r);
          }
          if (p.rotations.empty()) return where + "cyclic skeletons do not align";
          for (std::size_t i = 0; i < n; ++i) note_vertex(s_.source(p.CU.crossings[i]), p.CU.syllables[i]);
        }
      }
      plans_.push_back(std::move(p));
    }
    return std::nullopt;
  }

  struct Syllable {
    int vertex;
    Element x, h;
    const Element* t;
    int a;
    const Element* s;
    int b;
  };

  std::optional<Found> try_branch(std::size_t index, bool& truncated) const {
    std::vector<std::size_t> digit(plans_.size());
    for (std::size_t j = 0; j < plans_.size(); ++j) {
      digit[j] = index % plans_[j].choices();
      index /= plans_[j].choices();
    }
    std::map<int, const Automorphism*> psi;
    for (int q : active_qh_) {
      const auto& ball = balls_.at(q);
      psi[q] = &ball[index % ball.size()];
      index /= ball.size();
    }
    auto image = [&](int v, const Element& x) {
      auto it = psi.find(v);
      return it == psi.end() ? x : Element{it->second->apply(x.word), {}};
    };

    detail::LinearRows sys;
    std::map<int, int> kvar;
    auto kv = [&](int e) {
      auto it = kvar.find(e);
      if (it != kvar.end()) return it->second;
      return kvar[e] = sys.add_var();
    };
    std::vector<Syllable> syl;
    for (std::size_t j = 0; j < plans_.size(); ++j) {
      const Plan& p = plans_[j];
      if (p.skip) continue;
      if (!p.cyclic) {
        const std::size_t n = p.U.crossings.size();
        std::vector<int> A(n + 1, -1), B(n + 1, -1);
        for (std::size_t i = 0; i < n; ++i) B[i] = sys.add_var(), A[i + 1] = sys.add_var();
        int at = p.U.start;
        for (std::size_t i = 0; i <= n; ++i) {
          syl.push_back({at, p.U.syllables[i], p.V.syllables[i], i > 0 ? &s_.target_image(p.U.crossings[i - 1]) : nullptr,
                         A[i], i < n ? &s_.source_image(p.U.crossings[i]) : nullptr, B[i]});
          if (i < n) {
            const Crossing x = p.U.crossings[i];
            sys.add({{B[i], 1}, {A[i + 1], 1}, {kv(x.edge), -twist_sign(s_, x)}}, 0);
            at = s_.target(x);
          }
        }
      } else if (!p.rotations.empty()) {
        const std::size_t n = p.CV.crossings.size(), r = p.rotations[digit[j]];
        std::vector<int> A(n), B(n);
        for (std::size_t i = 0; i < n; ++i) A[i] = sys.add_var(), B[i] = sys.add_var();
        for (std::size_t i = 0; i < n; ++i) {
          const Crossing x = p.CV.crossings[i];
          syl.push_back({s_.source(x), p.CU.syllables[(r + i) % n], p.CV.syllables[i],
                         &s_.target_image(p.CV.crossings[(i + n - 1) % n]), A[i], &s_.source_image(x), B[i]});
          sys.add({{B[i], 1}, {A[(i + 1) % n], 1}, {kv(x.edge), -twist_sign(s_, x)}}, 0);
        }
      } else if (!p.targets.empty()) {
        syl.push_back({p.CU.start, p.CU.syllables[0], p.targets[digit[j]], nullptr, -1, nullptr, -1});
      } else if (p.surface_elliptic) {
        const int w = p.CU.start;
        if (s_.conjugacy_key(s_.vertex_element(w, image(w, p.CU.syllables[0]))) != p.key_v) return std::nullopt;
      }
    }

    // Complement matrices of abelian vertices: any unimodular solution will do.
    std::map<int, Matrix> N;
    for (const auto& [v, sp] : splits_) {
      if (sp.r2 == 0) continue;
      detail::LinearRows nsys;
      for (int i = 0; i < sp.r2 * sp.r2; ++i) nsys.add_var();
      for (const auto& y : syl) {
        if (y.vertex != v) continue;
        const Vec yx = sp.Qinv * y.x.vec, yh = sp.Qinv * y.h.vec;
        for (int i = 0; i < sp.r2; ++i) {
          std::vector<std::pair<int, Int>> row;
          for (int k = 0; k < sp.r2; ++k)
            if (yx[sp.r1 + k] != 0) row.emplace_back(i * sp.r2 + k, yx[sp.r1 + k]);
          if (row.empty()) {
            if (yh[sp.r1 + i] != 0) return std::nullopt;
          } else {
            nsys.add(std::move(row), yh[sp.r1 + i]);
          }
        }
      }
      auto m = find_unimodular(nsys, sp.r2, truncated);
      if (!m) return std::nullopt;
      N[v] = *m;
    }

    std::map<int, std::vector<int>> lvar;
    for (const auto& y : syl) {
      const auto kind = s_.vertex(y.vertex).kind;
      if (kind != VertexKind::Abelian) {
        detail::add_syllable(s_, sys, y.vertex, y.h, image(y.vertex, y.x), y.t, y.a, y.s, y.b);
      } else {
        const AbelianSplit& sp = splits_.at(y.vertex);
        auto& L = lvar[y.vertex];
        if (L.empty())
          for (int i = 0; i < sp.r1 * sp.r2; ++i) L.push_back(sys.add_var());
        const int n = sp.r1 + sp.r2;
        const Vec yx = sp.Qinv * y.x.vec, yh = sp.Qinv * y.h.vec;
        const Vec yt = y.t ? sp.Qinv * y.t->vec : Vec(n, 0), ys = y.s ? sp.Qinv * y.s->vec : Vec(n, 0);
        for (int i = 0; i < sp.r1; ++i) {
          std::vector<std::pair<int, Int>> row;
          if (yt[i] != 0) row.emplace_back(y.a, yt[i]);
          if (ys[i] != 0) row.emplace_back(y.b, ys[i]);
          for (int k = 0; k < sp.r2; ++k)
            if (yx[sp.r1 + k] != 0) row.emplace_back(L[i * sp.r2 + k], yx[sp.r1 + k]);
          const Int rhs = lattice::add(yh[i], -yx[i]);
          if (row.empty()) {
            if (rhs != 0) return std::nullopt;
          } else {
            sys.add(std::move(row), rhs);
          }
        }
        if (sp.r2 > 0) {
          const Matrix& m = N.at(y.vertex);
          for (int i = 0; i < sp.r2; ++i) {
            Int acc = 0;
            for (int k = 0; k < sp.r2; ++k) acc = lattice::add(acc, lattice::mul(m(i, k), yx[sp.r1 + k]));
            if (acc != yh[sp.r1 + i]) return std::nullopt;
          }
        }
      }
      if (sys.infeasible) return std::nullopt;
    }
    auto sol = sys.solve();
    if (!sol) return std::nullopt;

    Found f;
    f.twist.assign(s_.num_edges(), 0);
    for (auto [e, var] : kvar) f.twist[e] = static_cast<long>(sol->particular[var]);
    GAutomorphism local = s_.identity_automorphism();
    for (auto [q, a] : psi)
      if (!a->forward().is_identity()) local = s_.compose(gog::extend_vertex_automorphism(s_, q, *a), local);
    for (const auto& [v, sp] : splits_) {
      const int n = sp.r1 + sp.r2;
      Matrix m = Matrix::identity(n);
      if (auto it = lvar.find(v); it != lvar.end())
        for (int i = 0; i < sp.r1; ++i)
          for (int k = 0; k < sp.r2; ++k) m(i, sp.r1 + k) = sol->particular[it->second[i * sp.r2 + k]];
      if (auto it = N.find(v); it != N.end())
        for (int i = 0; i < sp.r2; ++i)
          for (int k = 0; k < sp.r2; ++k) m(sp.r1 + i, sp.r1 + k) = it->second(i, k);
      const Matrix std_basis = sp.Q * m * sp.Qinv;
      if (!(std_basis == Matrix::identity(n)))
        local = s_.compose(gog::extend_vertex_automorphism(s_, v, std_basis), local);
    }
    f.phi = s_.compose(gog::dehn_twists(s_, f.twist), local);
    if (!verify_witness(s_, f.phi, u_, v_)) throw Error("internal: solved system does not verify");
    return f;
  }

  // Unimodular r x r matrix (row-major variables) solving the rows.
  std::optional<Matrix> find_unimodular(const detail::LinearRows& rows, int r, bool& truncated) const {
    auto sol = rows.solve();
    if (!sol) return std::nullopt;
    auto as_matrix = [&](const Vec& x) {
      Matrix m(r, r);
      for (int i = 0; i < r; ++i)
        for (int k = 0; k < r; ++k) m(i, k) = x[i * r + k];
      return m;
    };
    auto unimodular = [](const Matrix& m) {
      const Int d = lattice::determinant(m);
      return d == 1 || d == -1;
    };
    if (sol->kernel.empty()) {
      Matrix m = as_matrix(sol->particular);
      if (unimodular(m)) return m;
      return std::nullopt;
    }
    // The identity and its sign changes first, then a coefficient box.
    {
      Vec id(r * r, 0);
      for (int i = 0; i < r; ++i) id[i * r + i] = 1;
      bool ok = true;
      for (std::size_t row = 0; row < rows.rows.size() && ok; ++row) {
        Int acc = 0;
        for (auto [var, c] : rows.rows[row]) acc = lattice::add(acc, lattice::mul(c, id[var]));
        ok = acc == rows.rhs[row];
      }
      if (ok) return as_matrix(id);
    }
    if (r == 1) {
      // Kernel nonempty in rank one means no constraint at all.
      return Matrix::identity(1);
    }
    const std::size_t dim = sol->kernel.size();
    const long box = opt_.abelian_box;
    std::vector<long> c(dim, -box);
    for (;;) {
      Vec x = sol->particular;
      for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t k = 0; k < x.size(); ++k) x[k] = lattice::add(x[k], lattice::mul(c[i], sol->kernel[i][k]));
      Matrix m = as_matrix(x);
      if (unimodular(m)) return m;
      std::size_t i = 0;
      while (i < dim && c[i] == box) c[i++] = -box;
      if (i == dim) break;
      ++c[i];
    }
    truncated = true;
    return std::nullopt;
  }

  const Splitting& s_;
  const GTuple& u_;
  const GTuple& v_;
  const OrbitOptions& opt_;
  std::vector<Plan> plans_;
  std::vector<int> active_qh_;
  std::map<int, std::vector<Automorphism>> balls_;
  std::map<int, AbelianSplit> splits_;
  bool truncated_ = false;
};

GTuple apply_tuple(const Splitting& s, const GAutomorphism& phi, const GTuple& u) {
  GTuple out{{}, u.cyclic};
  for (const auto& x : u.elements) out.elements.push_back(s.apply(phi, x));
  return out;
}

void check_tuple(const Splitting& s, const GTuple& t) {
  if (t.cyclic.size() != t.elements.size()) throw Error("tuple kind list has the wrong length");
  for (const auto& x : t.elements)
    if (!s.is_loop(x)) throw Error("tuple entries must be group elements");
}

}  // namespace

OrbitResult canonical_orbit_decide(const Splitting& s, const GTuple& u, const GTuple& v,
                                   const std::vector<GAutomorphism>& coset_reps, const OrbitOptions& opt) {
  check_tuple(s, u);
  check_tuple(s, v);
  if (u.size() != v.size()) throw Error("tuple lengths differ");
  const std::vector<GAutomorphism> reps = coset_reps.empty() ? std::vector{s.identity_automorphism()} : coset_reps;
  OrbitResult last;
  bool decisive = true;
  for (std::size_t i = 0; i < reps.size(); ++i) {
    if (!s.is_automorphism(reps[i])) throw Error("coset representative " + std::to_string(i + 1) + " is not an automorphism");
    OrbitResult r = Solver(s, apply_tuple(s, reps[i], u), v, opt).run();
    if (r.verdict == Verdict::Equivalent) {
      r.witness = s.compose(*r.witness, reps[i]);
      r.coset_index = static_cast<int>(i);
      if (!verify_witness(s, *r.witness, u, v)) throw Error("internal: witness verification failed");
      return r;
    }
    decisive = decisive && r.verdict == Verdict::Inequivalent;
    last.truncated = last.truncated || r.truncated;
    if (last.note.empty() || r.verdict == Verdict::Inconclusive) last.note = r.note;
  }
  last.verdict = decisive ? Verdict::Inequivalent : Verdict::Inconclusive;
  if (decisive && reps.size() > 1) last.note = "inequivalent under all searched cosets: " + last.note;
  return last;
}

OrbitResult orbit_decide_abelian(const Splitting& s, int vertex, const GTuple& u, const GTuple& v,
                                 const OrbitOptions& opt) {
  if (vertex < 0 || vertex >= s.num_vertices()) throw Error("vertex not found");
  if (s.vertex(vertex).kind != VertexKind::Abelian) throw Error("vertex " + s.vertex(vertex).label + " is not abelian");
  return canonical_orbit_decide(s, u, v, {}, opt);
}

// ---------------------------------------------------------------------------
// Special Whitehead problem.

namespace {

std::vector<long> stable_sums(const Splitting& s, const NormalForm& a) {
  std::vector<long> out(s.generators().size(), 0);
  for (auto [g, e] : s.expand(a))
    if (s.generators()[g].stable) out[g] += e;
  return out;
}

SWhPResult swhp_solve(const Splitting& s, const SWhPInstance& in, const OrbitOptions& opt) {
  if (in.u.size() != in.v.size()) throw Error("tuple lengths differ");
  for (int e : {in.k_edge, in.c_edge})
    if (e < 0 || e >= s.num_edges()) throw Error("edge not found");
  SWhPResult out;
  out.bound = opt.swhp_bound;
  for (std::size_t i = 0; i < in.u.size(); ++i)
    if (stable_sums(s, in.u[i]) != stable_sums(s, in.v[i])) {
      out.verdict = Verdict::Inequivalent;
      return out;
    }
  const Edge& ke = s.edge(in.k_edge);
  const Edge& ce = s.edge(in.c_edge);
  const NormalForm K = s.vertex_element(ke.from, ke.image_from);
  const NormalForm C = s.vertex_element(ce.from, ce.image_from);
  const std::size_t n = in.u.size();
  const long B = opt.swhp_bound;
  double points = 1;
  for (std::size_t i = 0; i < 2 * n; ++i) points *= static_cast<double>(2 * B + 1);
  if (points > 1e5) throw Error("SWhP exponent box too large");
  GTuple u{in.u, std::vector<bool>(n, false)};
  std::vector<long> e(2 * n, -B);
  for (;;) {
    GTuple target{{}, std::vector<bool>(n, false)};
    for (std::size_t i = 0; i < n; ++i)
      target.elements.push_back(s.multiply(s.multiply(s.power(K, e[2 * i]), in.v[i]), s.power(C, e[2 * i + 1])));
    OrbitResult r = canonical_orbit_decide(s, u, target, {}, opt);
    if (r.verdict == Verdict::Equivalent) {
      SWhPSolution sol;
      for (std::size_t i = 0; i < n; ++i) sol.m.push_back(e[2 * i]), sol.n.push_back(e[2 * i + 1]);
      sol.twist = r.twist;
      sol.witness = std::move(*r.witness);
      out.solutions.push_back(std::move(sol));
    }
    std::size_t i = 0;
    while (i < e.size() && e[i] == B) e[i++] = -B;
    if (i == e.size()) break;
    ++e[i];
  }
  out.verdict = out.solutions.empty() ? Verdict::Inconclusive : Verdict::Equivalent;
  return out;
}

}  // namespace

SWhPResult swhp_base(const Splitting& s, const SWhPInstance& in, const OrbitOptions& opt) {
  for (int v = 0; v < s.num_vertices(); ++v)
    if (s.vertex(v).kind == VertexKind::Abelian)
      throw Error("base instance contains abelian vertex " + s.vertex(v).label);
  return swhp_solve(s, in, opt);
}

SWhPResult swhp_extend_amalgam(const Splitting& s, const SWhPInstance& in, int vertex, int edge,
                               const OrbitOptions& opt) {
  if (edge < 0 || edge >= s.num_edges()) throw Error("edge not found");
  const Edge& e = s.edge(edge);
  if (!e.in_tree()) throw Error("edge " + e.label + " carries a stable letter");
  if (vertex != e.from && vertex != e.to) throw Error("vertex is not an endpoint of edge " + e.label);
  if (s.vertex(vertex).kind == VertexKind::Abelian) throw Error("new vertex must be free or a surface");
  return swhp_solve(s, in, opt);
}

SWhPResult swhp_extend_hnn(const Splitting& s, const SWhPInstance& in, int edge, const OrbitOptions& opt) {
  if (edge < 0 || edge >= s.num_edges()) throw Error("edge not found");
  if (s.edge(edge).in_tree()) throw Error("edge " + s.edge(edge).label + " has no stable letter");
  return swhp_solve(s, in, opt);
}

}  // namespace whp::canon
