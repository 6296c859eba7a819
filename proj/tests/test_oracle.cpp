#include <doctest.h>

#include <map>

#include "support.hpp"
#include "whp/oracle.hpp"

using namespace whp;

namespace {
const Alphabet ab = Alphabet::standard(2);
Word w(const char* s) { return parse_word(s, ab); }

TupleInstance single(CoordKind kind, const Word& word) { return TupleInstance{ab, {{kind, word, -1}}}; }

std::vector<Automorphism> whitehead_generators(const Alphabet& alpha) {
  std::vector<Automorphism> out;
  for (const auto& a : enumerate_whitehead_autos(alpha)) out.push_back(a.to_automorphism(alpha));
  return out;
}
}  // namespace

TEST_CASE("brute force: radius zero and one") {
  const auto gens = whitehead_generators(ab);
  auto same = oracle::orbit_bruteforce(gens, single(CoordKind::Exact, w("a b")), single(CoordKind::Exact, w("a b")), 0);
  REQUIRE(same);
  CHECK(same->path.empty());
  CHECK_FALSE(oracle::orbit_bruteforce(gens, single(CoordKind::Exact, w("a")), single(CoordKind::Exact, w("a b")), 0));
  auto one = oracle::orbit_bruteforce(gens, single(CoordKind::Exact, w("a")), single(CoordKind::Exact, w("a b")), 1);
  REQUIRE(one);
  CHECK(one->path.size() == 1);
  CHECK(one->composed.apply(w("a")) == w("a b"));
}

TEST_CASE("brute force: cyclic witness conjugates correctly, and symmetry") {
  const auto gens = whitehead_generators(ab);
  const auto u = single(CoordKind::Cyclic, w("a b a^-1 b^-1"));
  const auto v = single(CoordKind::Cyclic, w("b a^-1 b^-1 a"));
  auto fwd = oracle::orbit_bruteforce(gens, u, v, 2);
  auto back = oracle::orbit_bruteforce(gens, v, u, 2);
  REQUIRE(fwd);
  REQUIRE(back);
  const Word& g = fwd->conjugators.at(0);
  CHECK(g.inverse() * fwd->composed.apply(u.coords[0].word) * g == v.coords[0].word);
  CHECK_FALSE(oracle::orbit_bruteforce(gens, single(CoordKind::Cyclic, w("a")), single(CoordKind::Cyclic, w("a^2")), 4));
}

TEST_CASE("brute force: shared conjugacy groups are rejected") {
  TupleInstance t{ab, {{CoordKind::Cyclic, w("a"), 0}, {CoordKind::Cyclic, w("b"), 0}}};
  CHECK_THROWS(oracle::orbit_bruteforce(whitehead_generators(ab), t, t, 1));
}

TEST_CASE("free decisions agree with radius-6 balls on short rank-2 classes") {
  const auto gens = whitehead_generators(ab);
  const auto words = whp::testing::all_cyclic_words(2, 4);
  std::vector<oracle::OrbitBall> balls;
  for (const auto& x : words) balls.emplace_back(gens, single(CoordKind::Cyclic, x), 3);
  std::size_t mismatches = 0, positives = 0;
  for (std::size_t i = 0; i < words.size(); ++i) {
    for (std::size_t j = 0; j < words.size(); ++j) {
      const auto u = single(CoordKind::Cyclic, words[i]), v = single(CoordKind::Cyclic, words[j]);
      const bool brute = balls[i].meets(balls[j]);
      const auto r = equivalent(u, v);
      REQUIRE(r.verdict != Verdict::Inconclusive);
      const bool fast = r.verdict == Verdict::Equivalent;
      if (fast) {
        REQUIRE(r.witness);
        CHECK(verify_witness(u, v, *r.witness));
      }
      positives += brute;
      if (brute != fast) {
        ++mismatches;
        INFO(format_word(words[i], ab) << " vs " << format_word(words[j], ab));
        CHECK(brute == fast);
      }
    }
  }
  CHECK(mismatches == 0);
  CHECK(positives > words.size());
}

TEST_CASE("numeric intersection is invariant under rotation and inversion") {
  const auto torus = SurfaceSpec::standard(1, 1);
  for (const char* text : {"a b^-1 a^2 b", "a^3 b^-2", "a b a^-1 b^-1 a"}) {
    const Word x = parse_word(text, torus.alphabet);
    const long base = oracle::si_numeric(torus, x);
    CHECK(oracle::si_numeric(torus, x.inverse()) == base);
    for (std::size_t k = 1; k < x.size(); ++k) CHECK(oracle::si_numeric(torus, x.suffix_from(k) * x.prefix(k)) == base);
  }
}
