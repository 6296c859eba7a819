#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace whp {

/// Base class for every error the library reports.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input could not be parsed or violates a precondition.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// A signed generator. Encoded as 2*index + (sign < 0) so that the natural
/// integer order is "generator index, then +1 before -1".
struct Letter {
  int code = 0;

  static constexpr Letter make(int gen, int sign) { return Letter{2 * gen + (sign < 0 ? 1 : 0)}; }
  constexpr int gen() const { return code >> 1; }
  constexpr int sign() const { return (code & 1) ? -1 : 1; }
  constexpr Letter inv() const { return Letter{code ^ 1}; }

  friend constexpr auto operator<=>(Letter, Letter) = default;
};

class Alphabet {
 public:
  Alphabet() = default;
  explicit Alphabet(std::vector<std::string> names);

  /// Generators a, b, c, ... (x1..xn beyond 26).
  static Alphabet standard(int rank);

  int rank() const { return static_cast<int>(names_.size()); }
  const std::vector<std::string>& names() const { return names_; }
  const std::string& name(int gen) const { return names_.at(gen); }
  std::optional<int> find(std::string_view name) const;

  friend bool operator==(const Alphabet&, const Alphabet&) = default;

 private:
  std::vector<std::string> names_;
};

/// Freely reduced word. Immutable value; every operation returns a new word.
class Word {
 public:
  Word() = default;

  /// Free reduction of an arbitrary letter sequence.
  static Word reduce(std::span<const Letter> raw);
  static Word letter(Letter l) { return reduce(std::span<const Letter>(&l, 1)); }
  static Word generator(int gen, int exponent = 1);

  const std::vector<Letter>& letters() const { return letters_; }
  std::size_t size() const { return letters_.size(); }
  bool empty() const { return letters_.empty(); }
  Letter operator[](std::size_t i) const { return letters_[i]; }
  Letter front() const { return letters_.front(); }
  Letter back() const { return letters_.back(); }

  Word inverse() const;
  Word pow(long k) const;
  Word conj(const Word& g) const;  ///< g^-1 * this * g
  Word prefix(std::size_t n) const;
  Word suffix_from(std::size_t n) const;

  bool cyclically_reduced() const { return size() < 2 || front() != back().inv(); }
  int max_generator() const;

  friend Word operator*(const Word& a, const Word& b);
  friend bool operator==(const Word&, const Word&) = default;
  /// Shortlex: length first, then lexicographic on letter codes.
  friend std::strong_ordering operator<=>(const Word& a, const Word& b);

 private:
  explicit Word(std::vector<Letter> reduced) : letters_(std::move(reduced)) {}
  std::vector<Letter> letters_;
};

/// Conjugacy-class representative: cyclically reduced and rotated to the
/// lexicographically least rotation.
class CyclicWord {
 public:
  CyclicWord() = default;
  /// Same as canonical_cyclic(w).
  static CyclicWord of(const Word& w);
  const Word& core() const { return core_; }
  std::size_t size() const { return core_.size(); }
  bool empty() const { return core_.empty(); }
  friend bool operator==(const CyclicWord&, const CyclicWord&) = default;
  friend auto operator<=>(const CyclicWord& a, const CyclicWord& b) { return a.core_ <=> b.core_; }

 private:
  friend struct CyclicReduction cyclic_reduce(const Word& w);
  explicit CyclicWord(Word core) : core_(std::move(core)) {}
  Word core_;
};

struct CyclicReduction {
  CyclicWord core;
  Word conjugator;  ///< input == conjugator * core * conjugator^-1
};

CyclicReduction cyclic_reduce(const Word& w);
inline CyclicWord canonical_cyclic(const Word& w) { return cyclic_reduce(w).core; }
inline CyclicWord CyclicWord::of(const Word& w) { return canonical_cyclic(w); }

/// Splits w as p * m * p^-1 with m cyclically reduced.
std::pair<Word, Word> strip_conjugation(const Word& w);

/// Primitive root r and exponent k >= 1 with w = r^k (w must be cyclically
/// reduced and nontrivial).
std::pair<Word, long> cyclic_root(const Word& w);

/// If w is conjugate to x, returns g with g^-1 * w * g == x.
std::optional<Word> conjugator_between(const Word& w, const Word& x);

/// If x lies in the cyclic subgroup <c>, returns the exponent k with x = c^k.
std::optional<long> power_of(const Word& x, const Word& c);

class Endomorphism {
 public:
  Endomorphism() = default;
  Endomorphism(Alphabet alphabet, std::vector<Word> images);
  static Endomorphism identity(const Alphabet& alphabet);

  const Alphabet& alphabet() const { return alphabet_; }
  const std::vector<Word>& images() const { return images_; }
  const Word& image(int gen) const { return images_.at(gen); }

  Word apply(const Word& w) const;

  bool is_identity() const;
  friend bool operator==(const Endomorphism&, const Endomorphism&) = default;

 private:
  Alphabet alphabet_;
  std::vector<Word> images_;
};

/// Result applies as `outer` after `inner`.
Endomorphism compose(const Endomorphism& outer, const Endomorphism& inner);

class Automorphism {
 public:
  Automorphism() = default;
  /// Throws if forward and inverse do not compose to the identity.
  Automorphism(Endomorphism forward, Endomorphism inverse);
  static Automorphism identity(const Alphabet& alphabet);
  /// x -> g^-1 x g.
  static Automorphism inner(const Alphabet& alphabet, const Word& g);

  const Endomorphism& forward() const { return forward_; }
  const Endomorphism& backward() const { return inverse_; }
  const Alphabet& alphabet() const { return forward_.alphabet(); }

  Word apply(const Word& w) const { return forward_.apply(w); }
  Automorphism inverse() const;
  friend bool operator==(const Automorphism&, const Automorphism&) = default;

 private:
  struct Unchecked {};
  Automorphism(Endomorphism f, Endomorphism i, Unchecked) : forward_(std::move(f)), inverse_(std::move(i)) {}
  friend Automorphism compose(const Automorphism&, const Automorphism&);
  Endomorphism forward_;
  Endomorphism inverse_;
};

Automorphism compose(const Automorphism& outer, const Automorphism& inner);

/// Free reduction with an alphabet bounds check.
Word free_reduce(std::span<const Letter> raw, const Alphabet& alphabet);

// Text syntax: whitespace-separated factors `name` or `name^k`; `eps` is the
// empty word.
Word parse_word(std::string_view text, const Alphabet& alphabet);
std::string format_word(const Word& w, const Alphabet& alphabet);

}  // namespace whp
