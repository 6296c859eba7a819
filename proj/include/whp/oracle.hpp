#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <vector>

#include "whp/canonical.hpp"
#include "whp/surface.hpp"
#include "whp/whitehead.hpp"

namespace whp::oracle {

struct BruteForceOptions {
  std::size_t max_states = 5'000'000;  ///< exceeding it throws
  int threads = 1;
};

struct BruteForceWitness {
  std::vector<int> path;  ///< generator indices, applied first to last; negative k means inverse of generator -k-1
  Automorphism composed;
  std::vector<Word> conjugators;  ///< per group of the source tuple, as in OrbitWitness
};

/// Products of at most `radius` generators (inverses included) taking u to v.
/// Exact coordinates are compared exactly, cyclic singletons as conjugacy
/// classes; conjugacy groups with several members are not supported.
std::optional<BruteForceWitness> orbit_bruteforce(const std::vector<Automorphism>& generators, const TupleInstance& u,
                                                  const TupleInstance& v, int radius,
                                                  const BruteForceOptions& opt = {});

/// Radius-r ball of canonical states around u (for batch comparisons).
class OrbitBall {
 public:
  OrbitBall(const std::vector<Automorphism>& generators, const TupleInstance& u, int radius,
            const BruteForceOptions& opt = {});
  bool contains(const TupleInstance& v) const;
  /// True if the balls meet, i.e. some product of at most r1 + r2 generators links the centres.
  bool meets(const OrbitBall& other) const;
  std::size_t size() const;

 private:
  friend std::optional<BruteForceWitness> orbit_bruteforce(const std::vector<Automorphism>&, const TupleInstance&,
                                                           const TupleInstance&, int, const BruteForceOptions&);
  struct Impl;
  std::shared_ptr<const Impl> impl_;
};

struct GogWitness {
  std::vector<int> path;  ///< same encoding as BruteForceWitness::path
  gog::GAutomorphism composed;
};

/// Graph-of-groups version: products of at most `radius` of the given
/// automorphisms (inverses included) taking u to v, exact coordinates
/// compared exactly and cyclic ones up to conjugacy.
std::optional<GogWitness> gog_orbit_bruteforce(const gog::Splitting& s, const std::vector<gog::GAutomorphism>& generators,
                                               const canon::GTuple& u, const canon::GTuple& v, int radius,
                                               const BruteForceOptions& opt = {});

struct NumericOptions {
  std::size_t max_length = 8;
  long double separation = 1e-9L;
};

/// Self-intersection of the geodesic in the class of w, computed in a fixed
/// integral Fuchsian representation. Supported surfaces: the punctured torus
/// (a = [[1,1],[1,2]], b = [[1,-1],[-1,2]]) and the thrice-punctured sphere
/// (c1 = [[1,2],[0,1]], c2 = [[1,0],[-2,1]]). Throws on degeneracy.
long si_numeric(const SurfaceSpec& s, const Word& w, const NumericOptions& opt = {});

}  // namespace whp::oracle
