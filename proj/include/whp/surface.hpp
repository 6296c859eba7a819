#pragma once

#include <optional>
#include <vector>

#include "whp/whitehead.hpp"
#include "whp/word.hpp"

namespace whp {

/// Compact orientable surface of genus g with b >= 1 boundary components.
/// Free generators a_1, b_1, ..., a_g, b_g, c_1, ..., c_{b-1} (plain a, b for
/// genus one); boundary words are [a_1,b_1]...[a_g,b_g] c_1 ... c_{b-1}
/// followed by c_1^-1, ..., c_{b-1}^-1.
struct SurfaceSpec {
  int genus = 0;
  int boundary = 1;
  Alphabet alphabet;
  std::vector<Word> boundary_words;

  static SurfaceSpec standard(int genus, int boundary);
  /// Same presentation with caller-chosen generator names.
  static SurfaceSpec standard(int genus, int boundary, std::vector<std::string> names);
  int rank() const { return 2 * genus + boundary - 1; }
  void validate() const;
};

/// Cyclic order of half-edges at the single vertex of the standard fat graph,
/// listed as letter codes. Derived from the boundary words.
std::vector<int> ribbon_order(const SurfaceSpec& s);

/// Minimal number of transverse self-intersections in the free homotopy
/// class of w. Throws on the trivial word.
long self_intersection(const SurfaceSpec& s, const Word& w);

/// Index of the boundary word whose class contains a power of w (or its
/// inverse), if any.
std::optional<int> peripheral_index(const SurfaceSpec& s, const Word& w);

/// Boundary-preserving twists built in for genus one: a -> a, b -> b a and
/// a -> a b, b -> b. Empty for other genera.
std::vector<Automorphism> builtin_twists(const SurfaceSpec& s);

/// True if phi maps every boundary word to a conjugate of itself.
bool preserves_boundary(const SurfaceSpec& s, const Automorphism& phi);

struct QHExponentQuery {
  SurfaceSpec surface;
  Word u, v, c, d;
};

struct QHCandidate {
  std::vector<long> m, n;  ///< one entry per tuple coordinate
  Automorphism witness;
  Word gamma, delta;       ///< witness(c) = gamma^-1 c gamma, witness(d) = delta^-1 d delta
};

struct QHSearchOptions {
  /// Exponent box half-width; default self_intersection(v) + |u| + |v| + 2
  /// (maximum over coordinates).
  std::optional<long> bound;
  FreeSearchOptions free;
};

struct QHResult {
  std::vector<QHCandidate> candidates;
  long bound = 0;
  std::size_t points_checked = 0;  ///< exponent points surviving the intersection filter
  std::size_t inconclusive = 0;    ///< of those, points where the free search gave up
};

/// Every (m, n) in the box for which a boundary-preserving automorphism alpha
/// has alpha(u) = d^{m delta} v c^{n gamma}, alpha(c) = c^gamma, alpha(d) = d^delta.
QHResult qh_exponent_candidates(const QHExponentQuery& q, const QHSearchOptions& opt = {});

/// Simultaneous version for tuples u_i, v_i sharing one alpha.
QHResult qh_exponent_candidates_multi(const SurfaceSpec& s, const std::vector<Word>& u, const std::vector<Word>& v,
                                      const Word& c, const Word& d, const QHSearchOptions& opt = {});

/// Independent check of one candidate.
bool verify_candidate(const SurfaceSpec& s, const std::vector<Word>& u, const std::vector<Word>& v, const Word& c,
                      const Word& d, const QHCandidate& cand);

}  // namespace whp
