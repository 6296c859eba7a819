// Acceptance run: one PASS/FAIL line per criterion. Exit status 0 iff all pass.
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>

#include "cli_suite.hpp"
#include "gog_fixtures.hpp"
#include "whp/canonical.hpp"
#include "whp/oracle.hpp"

using namespace whp;
using namespace whp::testing;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

/// Collects failure descriptions; the first few are reported.
struct Tally {
  std::size_t checks = 0;
  std::vector<std::string> failures;
  void expect(bool ok, const std::string& what) {
    ++checks;
    if (!ok) failures.push_back(what);
  }
  Outcome outcome(const std::string& summary) const {
    std::string d = summary;
    if (!failures.empty()) d += "; " + std::to_string(failures.size()) + " failed, first: " + failures.front();
    return {failures.empty(), d};
  }
};

std::vector<Automorphism> whitehead_generators(const Alphabet& a) {
  std::vector<Automorphism> out;
  for (const auto& w : enumerate_whitehead_autos(a)) out.push_back(w.to_automorphism(a));
  return out;
}

TupleInstance single(const Alphabet& a, const Word& w) { return TupleInstance{a, {{CoordKind::Cyclic, w, -1}}}; }

gog::GAutomorphism random_product(const gog::Splitting& s, const std::vector<gog::GAutomorphism>& gens,
                                  std::size_t len, std::mt19937_64& gen) {
  gog::GAutomorphism out = s.identity_automorphism();
  for (std::size_t i = 0; i < len; ++i) {
    const auto& g = gens[gen() % gens.size()];
    out = s.compose(gen() % 2 ? g : s.inverse(g), out);
  }
  return out;
}

canon::GTuple image(const gog::Splitting& s, const gog::GAutomorphism& phi, const canon::GTuple& u) {
  canon::GTuple t{{}, u.cyclic};
  for (const auto& x : u.elements) t.elements.push_back(s.apply(phi, x));
  return t;
}

/// Shortest element of <c> g (shortlex), a canonical coset label.
Word coset_label(const Word& c, const Word& g) {
  Word best = g;
  const long span = static_cast<long>(g.size()) + 2;
  for (long k = -span; k <= span; ++k) best = std::min(best, c.pow(k) * g);
  return best;
}

// 1. Free Whitehead completeness against radius-6 brute force.
Outcome criterion_1() {
  const Alphabet ab = Alphabet::standard(2);
  const auto gens = whitehead_generators(ab);
  const auto words = all_cyclic_words(2, 4);
  std::vector<oracle::OrbitBall> balls;
  for (const auto& x : words) balls.emplace_back(gens, single(ab, x), 3);
  Tally t;
  std::size_t positives = 0;
  for (std::size_t i = 0; i < words.size(); ++i)
    for (std::size_t j = 0; j < words.size(); ++j) {
      const auto u = single(ab, words[i]), v = single(ab, words[j]);
      const bool brute = balls[i].meets(balls[j]);
      const auto r = equivalent(u, v);
      const std::string pair = format_word(words[i], ab) + " vs " + format_word(words[j], ab);
      t.expect(r.verdict != Verdict::Inconclusive, "inconclusive on " + pair);
      const bool fast = r.verdict == Verdict::Equivalent;
      if (fast) t.expect(r.witness && verify_witness(u, v, *r.witness), "witness fails on " + pair);
      t.expect(brute == fast, "disagreement on " + pair);
      positives += brute;
    }
  return t.outcome(std::to_string(words.size()) + " classes, " + std::to_string(words.size() * words.size()) +
                   " pairs, " + std::to_string(positives) + " equivalent");
}

// 2. Every positive answer over a randomized suite verifies.
Outcome criterion_2() {
  std::mt19937_64 gen(20260215);
  std::size_t instances = 0, positives = 0, constructed = 0, constructed_found = 0;
  std::map<std::string, std::size_t> per_family;
  auto abort_with = [&](const std::string& what) {
    return Outcome{false, "aborted after " + std::to_string(instances) + " instances: " + what};
  };

  // Free groups of rank 2 and 3.
  for (int round = 0; round < 300; ++round) {
    const int rank = 2 + round % 2;
    const Alphabet a = Alphabet::standard(rank);
    const auto gens = whitehead_generators(a);
    TupleInstance u{a, {}};
    const int shape = static_cast<int>(gen() % 3);  // cyclic, exact, mixed
    const int n = 1 + static_cast<int>(gen() % (shape == 1 ? 2 : 3));
    for (int i = 0; i < n; ++i) {
      const CoordKind kind = shape == 0 ? CoordKind::Cyclic : shape == 1 ? CoordKind::Exact
                                                             : (i == 0 ? CoordKind::Exact : CoordKind::Cyclic);
      Word w = random_reduced_word(rank, 1 + gen() % 5, gen);
      if (kind == CoordKind::Cyclic) w = canonical_cyclic(w).core();
      u.coords.push_back({kind, w, -1});
    }
    const bool related = gen() % 5 != 0;
    Automorphism phi = Automorphism::identity(a);
    for (std::size_t k = 0, len = 1 + gen() % 4; k < len; ++k) phi = compose(gens[gen() % gens.size()], phi);
    TupleInstance v = u;
    for (auto& c : v.coords) {
      c.word = related ? phi.apply(c.word) : random_reduced_word(rank, 1 + gen() % 5, gen);
      if (c.kind == CoordKind::Cyclic) c.word = c.word.conj(random_reduced_word(rank, gen() % 3, gen));
    }
    auto r = equivalent(u, v);
    ++instances, ++per_family["free"];
    constructed += related;
    if (r.verdict == Verdict::Equivalent) {
      ++positives;
      constructed_found += related;
      if (!r.witness || !verify_witness(u, v, *r.witness)) return abort_with("free witness failed verification");
    }
  }

  // Amalgam, HNN and abelian-vertex splittings.
  const std::vector<std::pair<std::string, gog::Splitting>> graphs{{"amalgam", gog::Splitting(amalgam_graph())},
                                                                   {"hnn", gog::Splitting(hnn_graph())},
                                                                   {"abelian", gog::Splitting(abelian_graph())}};
  for (const auto& [name, s] : graphs) {
    const auto gens = canon::canonical_generators(s).all();
    for (int round = 0; round < 250; ++round) {
      canon::GTuple u;
      for (std::size_t k = 0, n = 1 + gen() % 2; k < n; ++k) {
        u.elements.push_back(random_element(s, 1 + gen() % 6, gen));
        u.cyclic.push_back(gen() % 2 == 0);
      }
      const bool related = gen() % 5 != 0;
      canon::GTuple v = related ? image(s, random_product(s, gens, 1 + gen() % 4, gen), u) : u;
      for (std::size_t k = 0; k < v.size(); ++k) {
        if (!related) v.elements[k] = random_element(s, 1 + gen() % 6, gen);
        if (v.cyclic[k]) {
          const auto g = random_element(s, gen() % 3, gen);
          v.elements[k] = s.multiply(s.inverse(g), s.multiply(v.elements[k], g));
        }
      }
      auto r = canon::canonical_orbit_decide(s, u, v);
      ++instances, ++per_family[name];
      constructed += related;
      if (r.verdict == Verdict::Equivalent) {
        ++positives;
        constructed_found += related;
        if (!r.witness || !canon::verify_witness(s, *r.witness, u, v))
          return abort_with(name + " witness failed verification");
      }
    }
  }
  std::string fam;
  for (const auto& [k, n] : per_family) fam += (fam.empty() ? "" : ", ") + k + " " + std::to_string(n);
  return {instances >= 1000, std::to_string(instances) + " instances (" + fam + "), " + std::to_string(positives) +
                                 " positives all verified, " + std::to_string(constructed_found) + "/" +
                                 std::to_string(constructed) + " constructed pairs found"};
}

std::vector<gog::Splitting> fixture_splittings() {
  return {gog::Splitting(amalgam_graph()), gog::Splitting(hnn_graph()), gog::Splitting(abelian_graph()),
          gog::Splitting(mixed_graph())};
}

// 3. Dehn twist algebra.
Outcome criterion_3() {
  std::mt19937_64 gen(3);
  std::uniform_int_distribution<long> exp(-4, 4);
  Tally t;
  int checked = 0;
  for (const auto& s : fixture_splittings()) {
    for (int round = 0; round < 25; ++round, ++checked) {
      const int e = static_cast<int>(gen() % s.num_edges());
      const gog::Edge& ed = s.edge(e);
      const int at = gen() % 2 ? ed.from : ed.to;
      const gog::Element& g = at == ed.from ? ed.image_from : ed.image_to;
      const gog::Element c = s.local_power(at, g, exp(gen)), c2 = s.local_power(at, g, exp(gen));
      const auto phi = gog::dehn_twist(s, e, at, c);
      const auto phi_inv = gog::dehn_twist(s, e, at, s.local_inverse(at, c));
      const auto lhs = s.compose(phi, gog::dehn_twist(s, e, at, c2));
      const auto rhs = gog::dehn_twist(s, e, at, s.local_multiply(at, c, c2));
      const std::string where = "edge " + ed.label;
      t.expect(s.is_identity(s.compose(phi, phi_inv)), where + ": phi_c phi_c^-1 is not the identity");
      t.expect(s.is_identity(s.compose(phi_inv, phi)), where + ": phi_c^-1 phi_c is not the identity");
      t.expect(lhs.forward == rhs.forward, where + ": phi_c phi_c' differs from phi_cc'");
    }
  }
  return t.outcome(std::to_string(checked) + " random edge elements");
}

// 4. Normal-form uniqueness.
Outcome criterion_4() {
  std::mt19937_64 gen(4);
  Tally t;
  std::size_t total = 0;
  for (const auto& s : fixture_splittings()) {
    const auto rels = relators(s);
    for (int round = 0; round < 1000; ++round, ++total) {
      auto w = random_gen_word(s, 1 + gen() % 10, gen);
      const gog::NormalForm nf = evaluate(s, w);
      t.expect(evaluate(s, s.expand(nf)) == nf, "re-expansion is not a fixed point");
      t.expect(s.parse(s.format(nf)) == nf, "text round trip changes the normal form");
      auto v = w;
      for (int j = 0; j < 3; ++j) {
        const std::size_t pos = gen() % (v.size() + 1);
        std::vector<std::pair<int, int>> ins;
        if (gen() % 2) {
          ins = rels[gen() % rels.size()];
          if (gen() % 2) ins = invert(ins);
        } else {
          ins = random_gen_word(s, 2, gen);
          auto back = invert(ins);
          ins.insert(ins.end(), back.begin(), back.end());
        }
        v.insert(v.begin() + static_cast<long>(pos), ins.begin(), ins.end());
      }
      t.expect(evaluate(s, v) == nf, "rewritten input normalizes differently");
    }
  }
  return t.outcome(std::to_string(total) + " sequences over 4 splittings");
}

// 5. Coset solver uniqueness.
Outcome criterion_5() {
  std::mt19937_64 gen(5);
  Tally t;
  int instances = 0, solvable = 0;
  for (int rank : {2, 3}) {
    while (instances < (rank == 2 ? 250 : 500)) {
      const Word c = random_reduced_word(rank, 1 + gen() % 3, gen);
      const Word v = random_reduced_word(rank, 1 + gen() % 5, gen);
      auto [p, m] = strip_conjugation(c);
      if (power_of(v, p * cyclic_root(m).first * p.inverse())) continue;
      const long x0 = static_cast<long>(gen() % 7) - 3, y0 = static_cast<long>(gen() % 7) - 3;
      const Word w = gen() % 2 ? c.pow(x0) * v * c.pow(y0) : random_reduced_word(rank, 1 + gen() % 6, gen);
      const long bound = 2 * (static_cast<long>(w.size() + v.size()) / static_cast<long>(c.size()) + 1);
      std::vector<std::pair<long, long>> hits;
      for (long x = -bound; x <= bound; ++x)
        for (long y = -bound; y <= bound; ++y)
          if (c.pow(x) * v * c.pow(y) == w) hits.emplace_back(x, y);
      t.expect(hits.size() <= 1, "several solutions in the doubled box");
      const auto got = canon::csa_coset_solve(v, w, c);
      t.expect(hits.empty() ? !got : got == hits[0], "solver disagrees with exhaustive search");
      solvable += !hits.empty();
      ++instances;
    }
  }
  return t.outcome(std::to_string(instances) + " instances, " + std::to_string(solvable) + " solvable");
}

// 6. Self-intersection against the numeric oracle.
Outcome criterion_6() {
  Tally t;
  std::size_t words = 0;
  for (const SurfaceSpec& s : {SurfaceSpec::standard(1, 1), SurfaceSpec::standard(0, 3)}) {
    for (const auto& x : all_cyclic_words(2, 6)) {
      ++words;
      t.expect(self_intersection(s, x) == oracle::si_numeric(s, x), "mismatch on " + format_word(x, s.alphabet));
    }
    for (int g = 0; g < s.rank(); ++g)
      t.expect(self_intersection(s, Word::generator(g)) == 0, "generator is not simple");
    for (const auto& b : s.boundary_words) t.expect(self_intersection(s, b) == 0, "boundary word is not simple");
  }
  return t.outcome(std::to_string(words) + " cyclic words on two surfaces");
}

// 7. Forward-constructed surface exponent fixtures.
Outcome criterion_7() {
  std::mt19937_64 gen(7);
  const SurfaceSpec s = SurfaceSpec::standard(1, 2);
  const Word c = s.boundary_words[1], d = s.boundary_words[0];
  const auto twists = builtin_twists(s);
  QHSearchOptions opt;
  opt.bound = 3;
  Tally t;
  std::size_t lists = 0, candidates = 0;
  auto unique_n = [&](const QHResult& r) {
    std::map<std::tuple<long, Word, Word>, long> seen;
    for (const auto& k : r.candidates) {
      auto [it, fresh] = seen.emplace(std::make_tuple(k.m[0], coset_label(c, k.gamma), coset_label(d, k.delta)),
                                      k.n[0]);
      t.expect(fresh || it->second == k.n[0], "two n for one alignment");
    }
    ++lists;
    candidates += r.candidates.size();
  };
  for (int round = 0; round < 40; ++round) {
    Automorphism alpha = Automorphism::identity(s.alphabet);
    for (std::size_t k = 0, len = gen() % 4; k < len; ++k) {
      const auto& tw = twists[gen() % twists.size()];
      alpha = compose(gen() % 2 ? tw : tw.inverse(), alpha);
    }
    Word g;
    if (gen() % 2) g = random_reduced_word(s.rank(), 1 + gen() % 2, gen);
    alpha = compose(Automorphism::inner(s.alphabet, g), alpha);
    const Word u = random_reduced_word(s.rank(), 1 + gen() % 4, gen);
    const long m = static_cast<long>(gen() % 7) - 3, n = static_cast<long>(gen() % 7) - 3;
    QHExponentQuery q{s, u, {}, c, d};
    q.v = d.pow(m).conj(g).inverse() * alpha.apply(u) * c.pow(n).conj(g).inverse();
    const auto r = qh_exponent_candidates(q, opt);
    bool found = false;
    for (const auto& k : r.candidates) {
      t.expect(verify_candidate(s, {q.u}, {q.v}, c, d, k), "candidate does not verify");
      found = found || (k.m[0] == m && k.n[0] == n);
    }
    t.expect(found, "constructing exponents " + std::to_string(m) + ", " + std::to_string(n) + " missed for u = " +
                        format_word(u, s.alphabet));
    unique_n(r);

    QHExponentQuery id{s, u, u, c, d};
    const auto ri = qh_exponent_candidates(id, opt);
    bool zero = false;
    for (const auto& k : ri.candidates) zero = zero || (k.m[0] == 0 && k.n[0] == 0);
    t.expect(zero, "identity instance lacks (0, 0)");
    unique_n(ri);
  }
  return t.outcome(std::to_string(lists) + " candidate lists, " + std::to_string(candidates) + " candidates");
}

// 8. End-to-end pipeline on the free + abelian + punctured torus fixture.
Outcome criterion_8() {
  std::mt19937_64 gen(8);
  gog::Splitting s(pipeline_graph());
  const auto gens = canon::canonical_generators(s).all();
  Tally t;
  int rounds = 0;
  for (; rounds < 60; ++rounds) {
    canon::GTuple u;
    for (int k = 0; k < 2; ++k) {
      u.elements.push_back(random_element(s, 2 + gen() % 5, gen));
      u.cyclic.push_back(gen() % 2 == 0);
    }
    const auto v = image(s, random_product(s, gens, 1 + gen() % 4, gen), u);
    const auto r = canon::canonical_orbit_decide(s, u, v);
    t.expect(r.verdict == Verdict::Equivalent, "related tuples not detected");
    t.expect(r.witness && canon::verify_witness(s, *r.witness, u, v), "witness does not verify");
  }
  auto exact = [&](const char* x) { return canon::GTuple{{s.parse(x)}, {false}}; };
  auto cyclic = [&](const char* x) { return canon::GTuple{{s.parse(x)}, {true}}; };
  int rejections = 0;
  for (auto [a, b] : std::vector<std::pair<canon::GTuple, canon::GTuple>>{{exact("a p"), exact("a b")},
                                                                          {cyclic("a p q"), cyclic("a A_1 b")},
                                                                          {exact("p"), exact("a")}}) {
    t.expect(canon::canonical_orbit_decide(s, a, b).verdict == Verdict::Inequivalent, "non-alignable pair accepted");
    ++rejections;
  }
  std::vector<lattice::Vec> images;
  for (const auto& e : s.graph().edges)
    if (e.to == 1) images.push_back(e.image_to.vec);
  const auto split = canon::peripheral_split(2, images);
  t.expect(std::abs(lattice::determinant(split.basis())) == 1, "peripheral split is not unimodular");
  return t.outcome(std::to_string(rounds) + " related pairs, " + std::to_string(rejections) +
                   " rejections, split index " + std::to_string(split.index));
}

// 9. Two runs of the command-line suite agree byte for byte (timing removed).
Outcome criterion_9() {
  std::vector<std::string> f1, f2;
  const std::string a = run_cli_suite(WHP_CLI, WHP_TEST_DATA, WHP_TEST_OUT, f1);
  const std::string b = run_cli_suite(WHP_CLI, WHP_TEST_DATA, WHP_TEST_OUT, f2);
  std::string detail = std::to_string(cli_cases(WHP_TEST_DATA, WHP_TEST_OUT).size()) + " commands, " +
                       std::to_string(a.size()) + " bytes per transcript";
  if (!f1.empty()) detail += "; expectation failed: " + f1.front();
  if (a != b) detail += "; transcripts differ";
  return {a == b && f1.empty() && f2.empty(), detail};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"free Whitehead completeness vs radius-6 oracle", criterion_1},
      {"witness soundness on the randomized suite", criterion_2},
      {"Dehn twist algebra", criterion_3},
      {"normal-form uniqueness", criterion_4},
      {"coset solver uniqueness", criterion_5},
      {"self-intersection vs numeric oracle", criterion_6},
      {"surface exponent fixtures", criterion_7},
      {"end-to-end pipeline", criterion_8},
      {"CLI determinism", criterion_9},
  };
  bool all = true;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    char timing[32];
    std::snprintf(timing, sizeof timing, "%.1fs", secs);
    std::cout << "criterion " << i + 1 << " " << (o.pass ? "PASS" : "FAIL") << ": " << criteria[i].first << " ("
              << o.detail << ", " << timing << ")" << std::endl;
    all = all && o.pass;
  }
  return all ? 0 : 1;
}
