#pragma once

#include <optional>
#include <string>
#include <vector>

#include "whp/word.hpp"

namespace whp {

/// Elementary Whitehead automorphism.
///
/// Type I: x_i -> x_{perm[i]}^{signs[i]}.
/// Type II (a, A): for x not in {a, a^-1}, x -> x a if x in A and x^-1 not in A,
/// x -> a^-1 x if x^-1 in A and x not in A, x -> a^-1 x a if both are in A,
/// otherwise x is fixed. a -> a.
struct WhiteheadAuto {
  enum class Kind { TypeI, TypeII };
  Kind kind = Kind::TypeI;
  std::vector<int> perm;   // type I
  std::vector<int> signs;  // type I, entries +1 / -1
  Letter multiplier;       // type II
  std::vector<bool> cut;   // type II, indexed by Letter::code

  static WhiteheadAuto type_one(std::vector<int> perm, std::vector<int> signs);
  /// Throws if a is not in A or a^-1 is in A.
  static WhiteheadAuto type_two(Letter a, std::vector<bool> cut);

  int rank() const;
  Word image(int gen) const;
  WhiteheadAuto inverse() const;
  Automorphism to_automorphism(const Alphabet& alphabet) const;
  std::string describe(const Alphabet& alphabet) const;
  friend bool operator==(const WhiteheadAuto&, const WhiteheadAuto&) = default;
};

/// Type I entries first (signed permutations in lexicographic order), then
/// type II ordered by multiplier code and cut-set bitmask.
std::vector<WhiteheadAuto> enumerate_whitehead_autos(const Alphabet& alphabet);

enum class CoordKind { Exact, Cyclic };

struct Coordinate {
  CoordKind kind = CoordKind::Cyclic;
  Word word;
  int group = -1;  ///< shared-conjugator group label; -1 for a singleton
};

/// A tuple of words. Exact coordinates must match on the nose; each cyclic
/// coordinate without a group label has its own conjugator; cyclic
/// coordinates with the same label share one.
struct TupleInstance {
  Alphabet alphabet;
  std::vector<Coordinate> coords;

  /// Conjugacy groups in order of first appearance. Every exact coordinate
  /// is a singleton group with trivial conjugator.
  std::vector<std::vector<int>> groups() const;
  bool group_is_exact(const std::vector<int>& group) const;
  void validate() const;
};

/// Sum of word lengths, cyclic length for cyclic coordinates.
std::size_t total_length(const TupleInstance& t);

struct OrbitWitness {
  std::vector<WhiteheadAuto> steps;  ///< applied first to last
  Automorphism composed;
  std::vector<Word> conjugators;     ///< one per group of the source tuple
};

enum class Verdict { Equivalent, Inequivalent, Inconclusive };
const char* verdict_name(Verdict v);

struct OrbitResult {
  Verdict verdict = Verdict::Inconclusive;
  std::optional<OrbitWitness> witness;
  std::string note;
};

struct FreeSearchOptions {
  /// Extra total length allowed above the minimum when searching instances
  /// that peak reduction does not cover (mixed or grouped coordinates).
  int slack = 2;
  std::size_t max_states = 2'000'000;
  int threads = 1;
};

struct Minimized {
  TupleInstance minimal;
  OrbitWitness witness;
};
Minimized minimize(const TupleInstance& t, const FreeSearchOptions& opt = {});

/// Decides whether some automorphism phi and per-group conjugators g take u
/// to v: for exact coordinates phi(u_j) = v_j, otherwise g^-1 phi(u_j) g = v_j
/// (cyclic singletons only up to conjugacy). Complete for instances made only
/// of cyclic singletons or only of exact coordinates.
OrbitResult equivalent(const TupleInstance& u, const TupleInstance& v, const FreeSearchOptions& opt = {});

/// Independent check of a witness by applying it to u.
bool verify_witness(const TupleInstance& u, const TupleInstance& v, const OrbitWitness& w);

/// Throws Error unless u and v share alphabet, length, coordinate kinds and
/// conjugacy groups.
void check_compatible(const TupleInstance& u, const TupleInstance& v);

/// Conjugators completing phi to a verified witness for u -> v, if phi maps
/// u to v at all.
std::optional<OrbitWitness> witness_from_map(const TupleInstance& u, const TupleInstance& v, const Automorphism& phi);

/// The automorphism with these generator images, if they form a basis.
std::optional<Automorphism> verify_basis(const Endomorphism& images, const FreeSearchOptions& opt = {});

/// Least simultaneous conjugate h^-1 w_j h of minimal total length.
struct GroupCanonical {
  std::vector<Word> words;
  Word conjugator;  ///< words[j] == conjugator^-1 * input[j] * conjugator
};
GroupCanonical canonical_simultaneous(const std::vector<Word>& words);

}  // namespace whp
