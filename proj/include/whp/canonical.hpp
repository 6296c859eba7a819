#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "whp/gog.hpp"
#include "whp/intmat.hpp"
#include "whp/whitehead.hpp"

namespace whp::canon {

using gog::GAutomorphism;
using gog::NormalForm;
using gog::Splitting;

/// The unique (x, y) with w = c^x v c^y in a free group, if any. Throws Error
/// ("non-unique regime") when v lies in the maximal cyclic subgroup of c.
std::optional<std::pair<long, long>> csa_coset_solve(const Word& v, const Word& w, const Word& c);

/// A = A1 + A2 with A1 the saturation of the edge-image lattice.
struct PeripheralSplit {
  int rank = 0;
  std::vector<lattice::Vec> a1, a2;  ///< bases, in standard coordinates
  lattice::Int index = 0;            ///< index of the edge lattice in A1
  /// Columns a1 then a2; unimodular.
  lattice::Matrix basis() const;
};
/// Throws Error on an empty or zero lattice.
PeripheralSplit peripheral_split(int rank, const std::vector<lattice::Vec>& images);

struct CanonicalGenerator {
  enum class Kind { DehnTwist, Abelian, QH };
  Kind kind = Kind::DehnTwist;
  int index = 0;  ///< edge for twists, vertex otherwise
  std::string name;
  GAutomorphism map;
};

struct CanonicalGeneratorSet {
  std::vector<CanonicalGenerator> dehn_twists, abelian_autos, qh_twists;
  std::vector<GAutomorphism> all() const;
  std::size_t size() const { return dehn_twists.size() + abelian_autos.size() + qh_twists.size(); }
};

/// Verified generators of the canonical automorphism group. Throws Error for
/// a surface vertex of unsupported complexity without user twists.
CanonicalGeneratorSet canonical_generators(const Splitting& s);

/// Boundary-fixing automorphisms used for a surface vertex: the user list if
/// given, else the built-in twists.
std::vector<Automorphism> surface_twists(const gog::Vertex& v);

/// Tuple of elements, each compared exactly or up to conjugacy.
struct GTuple {
  std::vector<NormalForm> elements;
  std::vector<bool> cyclic;
  std::size_t size() const { return elements.size(); }
};

struct OrbitOptions {
  int qh_radius = 5;         ///< word radius of the surface twist ball
  long abelian_box = 3;      ///< coefficient box for abelian complement matrices
  long swhp_bound = 3;       ///< end exponent box for SWhP instances
  int threads = 1;
};

struct OrbitResult {
  Verdict verdict = Verdict::Inconclusive;
  std::optional<GAutomorphism> witness;
  int coset_index = -1;
  std::string note;
  bool truncated = false;  ///< some bounded search hit its bound
  std::vector<long> twist; ///< edge twist exponents of the canonical part
};

/// phi(u_i) == v_i for exact coordinates, conjugate for cyclic ones.
bool verify_witness(const Splitting& s, const GAutomorphism& phi, const GTuple& u, const GTuple& v);

/// Decides whether tau_i(u) and v lie in one orbit of the canonical group for
/// some supplied tau_i (default: identity only). Inequivalent means every
/// tau_i failed decisively.
OrbitResult canonical_orbit_decide(const Splitting& s, const GTuple& u, const GTuple& v,
                                   const std::vector<GAutomorphism>& coset_reps = {}, const OrbitOptions& opt = {});

/// The same decision with the abelian vertex named; rejects non-abelian vertices.
OrbitResult orbit_decide_abelian(const Splitting& s, int vertex, const GTuple& u, const GTuple& v,
                                 const OrbitOptions& opt = {});

/// phi(u_i) = k^{m_i} v_i c^{n_i} with k, c generators of the groups of edges
/// k_edge and c_edge, embedded at the `from` endpoint.
struct SWhPInstance {
  int k_edge = 0, c_edge = 0;
  std::vector<NormalForm> u, v;
};

struct SWhPSolution {
  std::vector<long> m, n;
  std::vector<long> twist;
  GAutomorphism witness;
};

struct SWhPResult {
  Verdict verdict = Verdict::Inconclusive;
  std::vector<SWhPSolution> solutions;
  long bound = 0;
};

/// Graph without abelian vertices.
SWhPResult swhp_base(const Splitting& s, const SWhPInstance& in, const OrbitOptions& opt = {});
/// `edge` is a tree edge joining a free or surface vertex `vertex`.
SWhPResult swhp_extend_amalgam(const Splitting& s, const SWhPInstance& in, int vertex, int edge,
                               const OrbitOptions& opt = {});
/// `edge` carries a stable letter.
SWhPResult swhp_extend_hnn(const Splitting& s, const SWhPInstance& in, int edge, const OrbitOptions& opt = {});

}  // namespace whp::canon
