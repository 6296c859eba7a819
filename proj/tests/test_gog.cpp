#include <doctest.h>

#include "gog_fixtures.hpp"

using namespace whp;
using namespace whp::gog;
using namespace whp::testing;

namespace {

std::vector<Splitting> fixtures() {
  return {Splitting(amalgam_graph()), Splitting(hnn_graph()), Splitting(abelian_graph()), Splitting(mixed_graph())};
}

bool same_images(const Splitting& s, const GAutomorphism& f, const GAutomorphism& g) {
  for (std::size_t i = 0; i < s.generators().size(); ++i)
    if (!(f.forward[i] == g.forward[i])) return false;
  return true;
}

}  // namespace

TEST_CASE("validation") {
  GraphOfGroups single;
  single.add_free("v", {"a", "b"});
  CHECK_FALSE(validate_normalized(single));

  GraphOfGroups two_abelian;
  two_abelian.add_abelian("A", 1);
  two_abelian.add_abelian("B", 1);
  two_abelian.add_edge(Edge{"e", 0, 1, av({1}), av({1}), TreeFlag::T, 0, ""});
  auto err = validate_normalized(two_abelian);
  REQUIRE(err);
  CHECK(err->find("adjacent abelian vertices") != std::string::npos);

  GraphOfGroups wide;
  wide.add_free("F", {"a", "b"});
  wide.add_free("G", {"x", "y"});
  wide.add_abelian("A", 2);
  wide.add_edge(Edge{"e1", 0, 2, fw(wide.vertices[0].alphabet, "a"), av({1, 0}), TreeFlag::T, 0, ""});
  wide.add_edge(Edge{"e2", 1, 2, fw(wide.vertices[1].alphabet, "x"), av({0, 1}), TreeFlag::T, 1, ""});
  err = validate_normalized(wide);
  REQUIRE(err);
  CHECK(err->find("attaches to 2 vertices") != std::string::npos);

  GraphOfGroups bad_boundary = mixed_graph();
  bad_boundary.edges[1].image_to = fw(bad_boundary.vertices[2].alphabet, "p q");
  CHECK(validate_normalized(bad_boundary));
  CHECK_THROWS_AS(Splitting{bad_boundary}, Error);

  for (auto g : {amalgam_graph(), hnn_graph(), abelian_graph(), mixed_graph()}) CHECK_FALSE(validate_normalized(g));
}

TEST_CASE("normal form examples") {
  Splitting hnn(hnn_graph());
  CHECK(hnn.parse("t b t^-1") == hnn.parse("a"));
  CHECK(hnn.format(hnn.parse("t b t^-1")) == "a");
  CHECK(hnn.parse("t b t^-1").crossings.empty());

  Splitting am(amalgam_graph());
  NormalForm bx = am.parse("b x");
  CHECK(bx.crossings.empty());
  CHECK(bx.syllables[0].word == parse_word("b a", am.vertex(0).alphabet));
  CHECK(am.parse("") == am.identity());
  CHECK(am.normal_form({}) == am.identity());

  std::vector<RawFactor> raw{{false, 0, fw(am.vertex(0).alphabet, "b"), 1},
                             {false, 1, fw(am.vertex(1).alphabet, "x y"), 1}};
  CHECK(am.normal_form(raw) == am.parse("b a y"));
  CHECK_THROWS_AS(am.normal_form({{false, 7, {}, 1}}), Error);
  CHECK_THROWS_AS(am.parse("z"), ParseError);
  CHECK_THROWS_AS(am.parse("a^x"), ParseError);
}

TEST_CASE("syllable signatures") {
  Splitting am(amalgam_graph());
  CHECK(syllable_signature(am, am.parse("a")) == std::vector<std::string>{"left"});
  CHECK(syllable_signature(am, am.parse("b y")) == std::vector<std::string>{"left", "right"});
  Splitting hnn(hnn_graph());
  CHECK(syllable_signature(hnn, hnn.parse("t b t^-1")) == std::vector<std::string>{"base"});
  CHECK(syllable_signature(hnn, hnn.parse("a t^-1 b")) == std::vector<std::string>{"base", "t^-1", "base"});
}

TEST_CASE("simultaneous conjugates") {
  Splitting am(amalgam_graph());
  std::vector<NormalForm> u{am.parse("b y"), am.parse("y b^2")};
  auto id = simultaneous_conjugates_matching(am, u, u);
  CHECK(std::find(id.begin(), id.end(), am.identity()) != id.end());

  const NormalForm g = am.parse("y");
  std::vector<NormalForm> v;
  for (const auto& x : u) v.push_back(am.multiply(am.multiply(am.inverse(g), x), g));
  auto found = simultaneous_conjugates_matching(am, u, v);
  bool has_g = false;
  for (const auto& h : found) {
    for (std::size_t i = 0; i < u.size(); ++i)
      CHECK(syllable_signature(am, am.multiply(am.multiply(am.inverse(h), u[i]), h)) == syllable_signature(am, v[i]));
    has_g = has_g || h == g;
  }
  CHECK(has_g);

  CHECK(simultaneous_conjugates_matching(am, {am.parse("b y")}, {am.parse("b y b y")}).empty());
  CHECK_THROWS_AS(simultaneous_conjugates_matching(am, u, {u[0]}), Error);
  CHECK(simultaneous_conjugates_matching(am, {}, {}) == std::vector<NormalForm>{am.identity()});
}

TEST_CASE("dehn twist examples") {
  Splitting am(amalgam_graph());
  auto phi = dehn_twist(am, 0, 0, fw(am.vertex(0).alphabet, "a"));
  CHECK(am.apply(phi, am.parse("a")) == am.parse("a"));
  CHECK(am.apply(phi, am.parse("b")) == am.parse("b"));
  CHECK(am.apply(phi, am.parse("y")) == am.parse("a^-1 y a"));
  CHECK(am.is_automorphism(phi));

  Splitting hnn(hnn_graph());
  auto psi = dehn_twist(hnn, 0, 0, fw(hnn.vertex(0).alphabet, "a"));
  CHECK(hnn.apply(psi, hnn.parse("t")) == hnn.parse("a t"));
  CHECK(hnn.apply(psi, hnn.parse("b")) == hnn.parse("b"));
  CHECK(hnn.is_automorphism(psi));

  CHECK(am.is_identity(dehn_twist(am, 0, 0, Element{})));
  CHECK_THROWS_AS(dehn_twist(am, 0, 0, fw(am.vertex(0).alphabet, "b")), Error);
  CHECK_THROWS_AS(dehn_twist(am, 3, 0L), Error);
}

TEST_CASE("dehn twist algebra on random edge elements") {
  // 100 random c: phi_c phi_c^-1 = id and phi_c phi_c' = phi_cc'.
  std::uniform_int_distribution<long> exp(-4, 4);
  int checked = 0;
  for (const auto& s : fixtures()) {
    for (int round = 0; round < 25; ++round) {
      const int e = static_cast<int>(rng()() % s.num_edges());
      const Edge& ed = s.edge(e);
      const int at = rng()() % 2 ? ed.from : ed.to;
      const Element& gen = at == ed.from ? ed.image_from : ed.image_to;
      const long k1 = exp(rng()), k2 = exp(rng());
      const Element c = s.local_power(at, gen, k1), c2 = s.local_power(at, gen, k2);
      auto phi = dehn_twist(s, e, at, c);
      auto phi_inv = dehn_twist(s, e, at, s.local_inverse(at, c));
      CHECK(s.is_identity(s.compose(phi, phi_inv)));
      CHECK(s.is_identity(s.compose(phi_inv, phi)));
      CHECK(same_images(s, s.compose(phi, dehn_twist(s, e, at, c2)),
                        dehn_twist(s, e, at, s.local_multiply(at, c, c2))));
      CHECK(s.is_automorphism(phi));
      ++checked;
    }
  }
  CHECK(checked == 100);
}

TEST_CASE("vertex automorphism extension") {
  Splitting am(amalgam_graph());
  const Alphabet& right = am.vertex(1).alphabet;
  CHECK(am.is_identity(extend_vertex_automorphism(am, 1, Automorphism::identity(right))));

  Automorphism local(Endomorphism(right, {parse_word("x", right), parse_word("x y", right)}),
                     Endomorphism(right, {parse_word("x", right), parse_word("x^-1 y", right)}));
  auto phi = extend_vertex_automorphism(am, 1, local);
  CHECK(am.apply(phi, am.parse("y")) == am.parse("x y"));
  CHECK(am.apply(phi, am.parse("b")) == am.parse("b"));
  CHECK(am.is_automorphism(phi));
  CHECK(am.is_identity(am.compose(phi, extend_vertex_automorphism(am, 1, local.inverse()))));

  Automorphism swap(Endomorphism(right, {parse_word("y", right), parse_word("x", right)}),
                    Endomorphism(right, {parse_word("y", right), parse_word("x", right)}));
  CHECK_THROWS_WITH_AS(extend_vertex_automorphism(am, 1, swap), doctest::Contains("edge e"), Error);

  Splitting ab(abelian_graph());
  lattice::Matrix m = lattice::Matrix::identity(2);
  m(0, 1) = 3;  // fixes (1,0), sends (0,1) to (3,1)
  auto chi = extend_vertex_automorphism(ab, 1, m);
  CHECK(ab.is_automorphism(chi));
  CHECK(ab.apply(chi, ab.parse("A_2")) == ab.parse("A_1^3 A_2"));
  lattice::Matrix bad = lattice::Matrix::identity(2);
  bad(1, 0) = 1;
  CHECK_THROWS_AS(extend_vertex_automorphism(ab, 1, bad), Error);
}

TEST_CASE("normal forms: pinch-free, canonical and invariant under rewriting") {
  // 1000 random raw sequences per fixture.
  auto& gen = rng();
  for (const auto& s : fixtures()) {
    const auto rels = relators(s);
    for (int round = 0; round < 1000; ++round) {
      auto w = random_gen_word(s, 1 + gen() % 10, gen);
      const NormalForm nf = evaluate(s, w);
      REQUIRE(s.is_loop(nf));
      for (std::size_t i = 0; i < nf.crossings.size(); ++i) {
        const Crossing x = nf.crossings[i];
        long m = 0;
        CHECK(s.coset_rep(s.source(x), nf.syllables[i], s.source_image(x), m) == nf.syllables[i]);
        CHECK(m == 0);
        if (i + 1 < nf.crossings.size() && nf.crossings[i + 1] == x.reversed())
          CHECK_FALSE(s.local_edge_power(s.target(x), nf.syllables[i + 1], s.target_image(x)));
      }
      // Re-expansion is a fixed point.
      CHECK(evaluate(s, s.expand(nf)) == nf);
      CHECK(s.parse(s.format(nf)) == nf);
      // Two random rewritings by relators and free cancellations.
      for (int k = 0; k < 2; ++k) {
        auto v = w;
        for (int j = 0; j < 3; ++j) {
          const std::size_t pos = gen() % (v.size() + 1);
          std::vector<std::pair<int, int>> ins;
          if (gen() % 2) {
            ins = rels[gen() % rels.size()];
            if (gen() % 2) ins = invert(ins);
          } else {
            auto g = random_gen_word(s, 2, gen);
            ins = g;
            auto gi = invert(g);
            ins.insert(ins.end(), gi.begin(), gi.end());
          }
          v.insert(v.begin() + static_cast<long>(pos), ins.begin(), ins.end());
        }
        CHECK(evaluate(s, v) == nf);
      }
    }
  }
}

TEST_CASE("conjugacy keys and conjugators") {
  auto& gen = rng();
  for (const auto& s : fixtures()) {
    for (int round = 0; round < 150; ++round) {
      const NormalForm a = random_element(s, 1 + gen() % 7, gen);
      const NormalForm g = random_element(s, gen() % 6, gen);
      const NormalForm b = s.multiply(s.multiply(s.inverse(g), a), g);
      CHECK(s.conjugacy_key(a) == s.conjugacy_key(b));
      auto h = s.conjugator(a, b);
      REQUIRE(h);
      CHECK(s.multiply(s.multiply(s.inverse(*h), a), *h) == b);
      CHECK(s.elliptic_vertices(a) == s.elliptic_vertices(b));

      const NormalForm c = random_element(s, 1 + gen() % 7, gen);
      const bool same = s.conjugacy_key(a) == s.conjugacy_key(c);
      CHECK(same == s.conjugator(a, c).has_value());
    }
  }
  Splitting am(amalgam_graph());
  CHECK(am.conjugacy_key(am.parse("a")) != am.conjugacy_key(am.parse("a^2")));
  CHECK(am.conjugacy_key(am.parse("a")) == am.conjugacy_key(am.parse("y x y^-1")));
  CHECK(am.elliptic_vertices(am.parse("a")) == std::vector<int>{0, 1});
  CHECK(am.elliptic_vertices(am.parse("b")) == std::vector<int>{0});
  CHECK(am.elliptic_vertices(am.parse("b y")).empty());
}
