#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "whp/intmat.hpp"
#include "whp/surface.hpp"
#include "whp/word.hpp"

namespace whp::gog {

using lattice::Int;
using lattice::Vec;

enum class VertexKind { Free, Abelian, Surface };
const char* kind_name(VertexKind k);

/// Vertex group element: a word for free and surface vertices, an integer
/// vector for abelian ones. The unused field stays empty.
struct Element {
  Word word;
  Vec vec;
  friend bool operator==(const Element&, const Element&) = default;
};

struct Vertex {
  std::string label;
  VertexKind kind = VertexKind::Free;
  Alphabet alphabet;                    ///< generator names; abelian: basis names
  std::optional<SurfaceSpec> surface;   ///< surface vertices only
  std::vector<Automorphism> qh_twists;  ///< user-supplied surface automorphisms

  int rank() const { return alphabet.rank(); }
  /// Boundary words of a surface vertex; empty otherwise.
  std::vector<Word> peripheral() const;
};

enum class TreeFlag { None, T, T1 };

/// Edge with infinite cyclic edge group, given by the images of its
/// generator at both endpoints.
struct Edge {
  std::string label;
  int from = 0, to = 0;
  Element image_from, image_to;
  TreeFlag tree = TreeFlag::T;
  int order = 0;
  std::string letter;  ///< stable letter; non-tree edges only

  bool in_tree() const { return tree != TreeFlag::None; }
};

struct GraphOfGroups {
  std::vector<Vertex> vertices;
  std::vector<Edge> edges;

  int add_free(std::string label, std::vector<std::string> names);
  int add_abelian(std::string label, int rank, std::vector<std::string> names = {});
  int add_surface(std::string label, SurfaceSpec s);
  int add_edge(Edge e);
  std::optional<int> vertex_index(std::string_view label) const;
  std::optional<int> edge_index(std::string_view label) const;
};

/// First violated invariant of the normalized form, or nullopt.
std::optional<std::string> validate_normalized(const GraphOfGroups& g);

/// Traversal of an edge: forward runs from `from` to `to`.
struct Crossing {
  int edge = 0;
  bool forward = true;
  Crossing reversed() const { return {edge, !forward}; }
  friend bool operator==(const Crossing&, const Crossing&) = default;
};

/// Reduced path s_0 x_0 s_1 ... x_{n-1} s_n starting at vertex `start`;
/// s_i lies in the vertex group where x_{i-1} ends. Every syllable except the
/// last is the least representative of its left coset modulo the edge group
/// of the following crossing. Group elements are loops at the base vertex 0.
struct NormalForm {
  int start = 0;
  std::vector<Element> syllables{Element{}};
  std::vector<Crossing> crossings;
  friend bool operator==(const NormalForm&, const NormalForm&) = default;
};

/// Input factor: a vertex element or a power of a stable letter.
struct RawFactor {
  bool is_letter = false;
  int index = 0;  ///< vertex or edge
  Element element;
  long exponent = 1;
};

/// Cyclic word s_0 x_0 ... s_{n-1} x_{n-1} (indices mod n) with s_0 at
/// `start`, or a single elliptic syllable when n = 0. The input element
/// equals gamma * loop * gamma^-1 where loop is the word read from s_0.
struct CyclicForm {
  int start = 0;
  std::vector<Element> syllables;
  std::vector<Crossing> crossings;
  NormalForm gamma;  ///< path from the base vertex to `start`
  bool elliptic() const { return crossings.empty(); }
};

/// Automorphism of the fundamental group as images of all generators
/// (vertex generators in vertex order, then stable letters), with inverse.
struct GAutomorphism {
  std::vector<NormalForm> forward, backward;
};

/// Solutions (A, B) of h = t^A x s^B in a free group. An empty t or s means
/// that side is absent and its exponent is reported as 0.
struct DoubleCosetSolutions {
  enum class Kind { None, Unique, Line };
  Kind kind = Kind::None;
  long a = 0, b = 0;         ///< Unique
  long p = 0, q = 0, n = 0;  ///< Line: p A + q B = n
};
DoubleCosetSolutions double_coset_solve(const Word& h, const Word& t, const Word& x, const Word& s);

/// Validated graph of groups with derived tables.
class Splitting {
 public:
  /// Throws Error with the first violated invariant.
  explicit Splitting(GraphOfGroups g);

  const GraphOfGroups& graph() const { return g_; }
  const Vertex& vertex(int v) const { return g_.vertices.at(v); }
  const Edge& edge(int e) const { return g_.edges.at(e); }
  int num_vertices() const { return static_cast<int>(g_.vertices.size()); }
  int num_edges() const { return static_cast<int>(g_.edges.size()); }

  // Generators.
  struct Generator {
    bool stable = false;
    int index = 0;  ///< vertex, or edge for stable letters
    int local = 0;  ///< generator index inside the vertex
    std::string name;
  };
  const std::vector<Generator>& generators() const { return gens_; }
  int generator_offset(int v) const { return offset_.at(v); }
  std::optional<int> stable_generator(int edge) const;
  std::optional<int> find_generator(std::string_view name) const;

  // Vertex-local arithmetic.
  Element local_identity(int v) const;
  Element local_multiply(int v, const Element& a, const Element& b) const;
  Element local_inverse(int v, const Element& a) const;
  Element local_power(int v, const Element& a, long k) const;
  bool local_is_identity(int v, const Element& a) const;
  std::size_t local_length(int v, const Element& a) const;
  /// k with a = c^k, if any.
  std::optional<long> local_edge_power(int v, const Element& a, const Element& c) const;
  /// Least representative r of a<c> with a = r c^m; sets m.
  Element coset_rep(int v, const Element& a, const Element& c, long& m) const;
  std::string format_local(int v, const Element& a) const;

  // Crossings.
  int source(const Crossing& x) const;
  int target(const Crossing& x) const;
  const Element& source_image(const Crossing& x) const;
  const Element& target_image(const Crossing& x) const;
  const std::vector<Crossing>& tree_path(int v) const { return tree_path_.at(v); }
  /// Parent edge in the tree rooted at the base vertex (-1 for the base).
  int parent_edge(int v) const { return parent_.at(v); }

  // Paths and elements.
  int end_vertex(const NormalForm& p) const;
  NormalForm identity(int at = 0) const;
  NormalForm normalize(int start, std::vector<Element> syllables, std::vector<Crossing> crossings) const;
  NormalForm multiply(const NormalForm& a, const NormalForm& b) const;
  NormalForm inverse(const NormalForm& a) const;
  NormalForm power(const NormalForm& a, long k) const;
  /// Path consisting of one crossing with trivial syllables.
  NormalForm crossing_path(const Crossing& x) const;
  /// Syllable-only path at v.
  NormalForm local_path(int v, const Element& a) const;
  /// The element of vertex v as a loop at the base vertex.
  NormalForm vertex_element(int v, const Element& a) const;
  NormalForm generator(int gen, long exponent = 1) const;
  NormalForm normal_form(const std::vector<RawFactor>& raw) const;
  NormalForm parse(std::string_view text) const;
  std::string format(const NormalForm& a) const;
  /// The loop as a word in the generators, as (generator, +-1) letters.
  std::vector<std::pair<int, int>> expand(const NormalForm& a) const;
  bool is_loop(const NormalForm& a) const { return a.start == 0 && end_vertex(a) == 0; }

  // Conjugacy.
  CyclicForm cyclic_form(const NormalForm& a) const;
  /// Equal exactly for conjugate elements.
  std::vector<long> conjugacy_key(const NormalForm& a) const;
  std::vector<long> exact_key(const NormalForm& a) const;
  /// g with g^-1 a g == b, if a and b are conjugate.
  std::optional<NormalForm> conjugator(const NormalForm& a, const NormalForm& b) const;
  /// One conjugator per cyclic alignment of b against a.
  std::vector<NormalForm> conjugators(const NormalForm& a, const NormalForm& b) const;
  /// Vertices whose group contains a conjugate of a (elliptic a), else empty.
  std::vector<int> elliptic_vertices(const NormalForm& a) const;

  // Automorphisms.
  GAutomorphism identity_automorphism() const;
  NormalForm apply(const GAutomorphism& phi, const NormalForm& a) const;
  NormalForm apply_inverse(const GAutomorphism& phi, const NormalForm& a) const;
  /// outer after inner.
  GAutomorphism compose(const GAutomorphism& outer, const GAutomorphism& inner) const;
  GAutomorphism inverse(const GAutomorphism& phi) const { return {phi.backward, phi.forward}; }
  bool is_identity(const GAutomorphism& phi) const;
  /// Images respect every defining relation.
  bool is_homomorphism(const std::vector<NormalForm>& images) const;
  /// Homomorphism in both directions and mutually inverse on generators.
  bool is_automorphism(const GAutomorphism& phi) const;
  std::string format(const GAutomorphism& phi) const;

 private:
  struct Pending;
  GraphOfGroups g_;
  std::vector<Generator> gens_;
  std::vector<int> offset_;
  std::vector<int> stable_of_edge_;
  std::vector<int> parent_;
  std::vector<std::vector<Crossing>> tree_path_;
};

/// Every (vertex, element) pair conjugate to the nontrivial elliptic
/// element a, found by walking through edge groups. Empty for hyperbolic a.
std::vector<std::pair<int, Element>> elliptic_conjugates(const Splitting& s, const NormalForm& a);

/// Total syllable length of a path.
std::size_t path_length(const Splitting& s, const NormalForm& p);

/// Label-and-letter skeleton: vertex labels of the syllables (trivial
/// syllables at either end dropped) interleaved with stable-letter tokens.
std::vector<std::string> syllable_signature(const Splitting& s, const NormalForm& a);

/// Conjugators g with g^-1 u_0 g == v_0 (one per cyclic alignment) whose
/// simultaneous action also matches the signatures of the other coordinates.
std::vector<NormalForm> simultaneous_conjugates_matching(const Splitting& s, const std::vector<NormalForm>& u,
                                                         const std::vector<NormalForm>& v);

/// Twist by the k-th power of the edge generator. Tree edges: identity on
/// the side containing the base vertex, conjugation by c^k on the other side.
/// Non-tree edges: t -> c^k t with c taken at the `from` endpoint.
GAutomorphism dehn_twist(const Splitting& s, int edge, long k);
/// Same, with c given as an element at vertex `at` (an endpoint of the edge).
GAutomorphism dehn_twist(const Splitting& s, int edge, int at, const Element& c);
/// Product of twists, k[e] along edge e.
GAutomorphism dehn_twists(const Splitting& s, const std::vector<long>& k);

/// Extends an automorphism of a free or surface vertex that fixes every
/// incident edge image. Throws Error naming the edge otherwise.
GAutomorphism extend_vertex_automorphism(const Splitting& s, int vertex, const Automorphism& local);
/// Abelian version; m is the matrix in the standard basis (columns are images).
GAutomorphism extend_vertex_automorphism(const Splitting& s, int vertex, const lattice::Matrix& m);

}  // namespace whp::gog
