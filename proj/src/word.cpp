#include "whp/word.hpp"

#include <algorithm>
#include <charconv>
#include <set>
#include <sstream>

namespace whp {

Alphabet::Alphabet(std::vector<std::string> names) : names_(std::move(names)) {
  if (names_.empty()) throw ParseError("alphabet must have rank >= 1");
  std::set<std::string> seen;
  for (const auto& n : names_) {
    if (n.empty()) throw ParseError("empty generator name");
    if (n == "eps" || n.find('^') != std::string::npos || n.find_first_of(" \t,()=") != std::string::npos)
      throw ParseError("invalid generator name '" + n + "'");
    if (!seen.insert(n).second) throw ParseError("duplicate generator name '" + n + "'");
  }
}

Alphabet Alphabet::standard(int rank) {
  if (rank < 1) throw ParseError("alphabet must have rank >= 1");
  std::vector<std::string> names;
  // Small ranks get the customary a, b, c, ... names.
  if (rank <= 26) {
    for (int i = 0; i < rank; ++i) names.emplace_back(1, static_cast<char>('a' + i));
  } else {
    for (int i = 0; i < rank; ++i) names.push_back("x" + std::to_string(i + 1));
  }
  return Alphabet(std::move(names));
}

std::optional<int> Alphabet::find(std::string_view name) const {
  for (int i = 0; i < rank(); ++i)
    if (names_[i] == name) return i;
  return std::nullopt;
}

Word Word::reduce(std::span<const Letter> raw) {
  std::vector<Letter> out;
  out.reserve(raw.size());
  for (Letter l : raw) {
    if (l.code < 0) throw Error("negative letter code");
    if (!out.empty() && out.back() == l.inv())
      out.pop_back();
    else
      out.push_back(l);
  }
  return Word(std::move(out));
}

Word Word::generator(int gen, int exponent) {
  std::vector<Letter> out(static_cast<std::size_t>(std::abs(exponent)), Letter::make(gen, exponent));
  return Word(std::move(out));
}

Word Word::inverse() const {
  std::vector<Letter> out(letters_.rbegin(), letters_.rend());
  for (auto& l : out) l = l.inv();
  return Word(std::move(out));
}

Word Word::pow(long k) const {
  if (k == 0 || empty()) return {};
  const Word base = k > 0 ? *this : inverse();
  const long n = k > 0 ? k : -k;
  // Conjugate part cancels between copies; build p m^n p^-1 directly.
  auto [p, m] = strip_conjugation(base);
  std::vector<Letter> out;
  out.reserve(p.size() * 2 + m.size() * static_cast<std::size_t>(n));
  out.insert(out.end(), p.letters_.begin(), p.letters_.end());
  for (long i = 0; i < n; ++i) out.insert(out.end(), m.letters_.begin(), m.letters_.end());
  const Word pinv = p.inverse();
  out.insert(out.end(), pinv.letters_.begin(), pinv.letters_.end());
  return reduce(out);
}

Word Word::conj(const Word& g) const { return g.inverse() * *this * g; }

Word Word::prefix(std::size_t n) const {
  n = std::min(n, size());
  return Word(std::vector<Letter>(letters_.begin(), letters_.begin() + static_cast<long>(n)));
}

Word Word::suffix_from(std::size_t n) const {
  n = std::min(n, size());
  return Word(std::vector<Letter>(letters_.begin() + static_cast<long>(n), letters_.end()));
}

int Word::max_generator() const {
  int m = -1;
  for (Letter l : letters_) m = std::max(m, l.gen());
  return m;
}

Word operator*(const Word& a, const Word& b) {
  std::size_t cancel = 0;
  const std::size_t na = a.size(), nb = b.size();
  while (cancel < na && cancel < nb && a.letters_[na - 1 - cancel] == b.letters_[cancel].inv()) ++cancel;
  std::vector<Letter> out;
  out.reserve(na + nb - 2 * cancel);
  out.insert(out.end(), a.letters_.begin(), a.letters_.end() - static_cast<long>(cancel));
  out.insert(out.end(), b.letters_.begin() + static_cast<long>(cancel), b.letters_.end());
  return Word(std::move(out));
}

std::strong_ordering operator<=>(const Word& a, const Word& b) {
  if (auto c = a.size() <=> b.size(); c != 0) return c;
  return std::lexicographical_compare_three_way(a.letters_.begin(), a.letters_.end(), b.letters_.begin(),
                                                b.letters_.end());
}

std::pair<Word, Word> strip_conjugation(const Word& w) {
  const auto& L = w.letters();
  const std::size_t n = L.size();
  if (n == 0) return {Word{}, Word{}};
  std::size_t i = 0;
  while (i + 1 < n - i && L[i] == L[n - 1 - i].inv()) ++i;
  return {w.prefix(i), Word::reduce(std::span<const Letter>(L.data() + i, n - 2 * i))};
}

namespace {

// Index of the least rotation; words here are short, quadratic is fine.
std::size_t least_rotation(const std::vector<Letter>& s) {
  const std::size_t n = s.size();
  std::size_t best = 0;
  for (std::size_t r = 1; r < n; ++r) {
    for (std::size_t i = 0; i < n; ++i) {
      Letter x = s[(r + i) % n], y = s[(best + i) % n];
      if (x < y) { best = r; break; }
      if (y < x) break;
    }
  }
  return best;
}

}  // namespace

CyclicReduction cyclic_reduce(const Word& w) {
  auto [p, m] = strip_conjugation(w);
  const std::size_t r = least_rotation(m.letters());
  // m = x y with |x| = r; y x = x^-1 m x.
  Word x = m.prefix(r);
  Word rotated = m.suffix_from(r) * x;
  return CyclicReduction{CyclicWord(std::move(rotated)), p * x};
}

std::pair<Word, long> cyclic_root(const Word& w) {
  const std::size_t n = w.size();
  if (n == 0) throw Error("root of the trivial word");
  for (std::size_t period = 1; period <= n / 2; ++period) {
    if (n % period) continue;
    bool ok = true;
    for (std::size_t i = period; i < n && ok; ++i) ok = w[i] == w[i - period];
    if (ok) return {w.prefix(period), static_cast<long>(n / period)};
  }
  return {w, 1};
}

std::optional<Word> conjugator_between(const Word& w, const Word& x) {
  auto cw = cyclic_reduce(w);
  auto cx = cyclic_reduce(x);
  if (!(cw.core == cx.core)) return std::nullopt;
  // w = a K a^-1, x = b K b^-1  =>  x = (a^-1 ... ) ; g = a b^-1 gives g^-1 w g = x.
  return cw.conjugator * cx.conjugator.inverse();
}

std::optional<long> power_of(const Word& x, const Word& c) {
  if (x.empty()) return 0;
  if (c.empty()) return std::nullopt;
  auto [p, m] = strip_conjugation(c);
  // x must be p m^k p^-1.
  Word inner = p.inverse() * x * p;
  if (inner.size() % m.size() != 0) return std::nullopt;
  long k = static_cast<long>(inner.size() / m.size());
  if (inner == m.pow(k)) return k;
  if (inner == m.pow(-k)) return -k;
  return std::nullopt;
}

Endomorphism::Endomorphism(Alphabet alphabet, std::vector<Word> images)
    : alphabet_(std::move(alphabet)), images_(std::move(images)) {
  if (static_cast<int>(images_.size()) != alphabet_.rank()) throw Error("endomorphism needs one image per generator");
  for (const auto& im : images_)
    if (im.max_generator() >= alphabet_.rank()) throw Error("image uses a letter outside the alphabet");
}

Endomorphism Endomorphism::identity(const Alphabet& alphabet) {
  std::vector<Word> images;
  for (int i = 0; i < alphabet.rank(); ++i) images.push_back(Word::generator(i));
  return Endomorphism(alphabet, std::move(images));
}

Word Endomorphism::apply(const Word& w) const {
  if (w.max_generator() >= alphabet_.rank()) throw Error("letter index out of alphabet bounds");
  std::vector<Letter> raw;
  for (Letter l : w.letters()) {
    const Word& im = images_[l.gen()];
    if (l.sign() > 0) {
      raw.insert(raw.end(), im.letters().begin(), im.letters().end());
    } else {
      for (auto it = im.letters().rbegin(); it != im.letters().rend(); ++it) raw.push_back(it->inv());
    }
  }
  return Word::reduce(raw);
}

bool Endomorphism::is_identity() const {
  for (int i = 0; i < alphabet_.rank(); ++i)
    if (!(images_[i] == Word::generator(i))) return false;
  return true;
}

Endomorphism compose(const Endomorphism& outer, const Endomorphism& inner) {
  if (!(outer.alphabet() == inner.alphabet())) throw Error("alphabet mismatch in compose");
  std::vector<Word> images;
  images.reserve(inner.images().size());
  for (const auto& im : inner.images()) images.push_back(outer.apply(im));
  return Endomorphism(inner.alphabet(), std::move(images));
}

Automorphism::Automorphism(Endomorphism forward, Endomorphism inverse)
    : forward_(std::move(forward)), inverse_(std::move(inverse)) {
  if (!(forward_.alphabet() == inverse_.alphabet())) throw Error("alphabet mismatch in automorphism");
  if (!compose(forward_, inverse_).is_identity() || !compose(inverse_, forward_).is_identity())
    throw Error("supplied inverse does not invert the automorphism");
}

Automorphism Automorphism::identity(const Alphabet& alphabet) {
  auto id = Endomorphism::identity(alphabet);
  return Automorphism(id, id, Unchecked{});
}

Automorphism Automorphism::inner(const Alphabet& alphabet, const Word& g) {
  std::vector<Word> f, b;
  for (int i = 0; i < alphabet.rank(); ++i) {
    f.push_back(Word::generator(i).conj(g));
    b.push_back(Word::generator(i).conj(g.inverse()));
  }
  return Automorphism(Endomorphism(alphabet, std::move(f)), Endomorphism(alphabet, std::move(b)), Unchecked{});
}

Automorphism Automorphism::inverse() const { return Automorphism(inverse_, forward_, Unchecked{}); }

Automorphism compose(const Automorphism& outer, const Automorphism& inner) {
  return Automorphism(compose(outer.forward_, inner.forward_), compose(inner.inverse_, outer.inverse_),
                      Automorphism::Unchecked{});
}

Word free_reduce(std::span<const Letter> raw, const Alphabet& alphabet) {
  for (Letter l : raw)
    if (l.code < 0 || l.gen() >= alphabet.rank()) throw Error("letter index out of alphabet bounds");
  return Word::reduce(raw);
}

Word parse_word(std::string_view text, const Alphabet& alphabet) {
  std::istringstream in{std::string(text)};
  std::string tok;
  std::vector<Letter> raw;
  while (in >> tok) {
    if (tok == "eps" || tok == "1") continue;
    std::string name = tok;
    long exponent = 1;
    if (auto caret = tok.find('^'); caret != std::string::npos) {
      name = tok.substr(0, caret);
      std::string_view e = std::string_view(tok).substr(caret + 1);
      auto [ptr, ec] = std::from_chars(e.data(), e.data() + e.size(), exponent);
      if (ec != std::errc{} || ptr != e.data() + e.size() || exponent == 0)
        throw ParseError("bad exponent in factor '" + tok + "'");
    }
    auto gen = alphabet.find(name);
    if (!gen) throw ParseError("unknown generator '" + name + "'");
    for (long i = 0; i < std::abs(exponent); ++i) raw.push_back(Letter::make(*gen, exponent > 0 ? 1 : -1));
  }
  return Word::reduce(raw);
}

std::string format_word(const Word& w, const Alphabet& alphabet) {
  if (w.empty()) return "eps";
  std::string out;
  const auto& L = w.letters();
  for (std::size_t i = 0; i < L.size();) {
    std::size_t j = i;
    while (j < L.size() && L[j] == L[i]) ++j;
    long run = static_cast<long>(j - i) * L[i].sign();
    if (!out.empty()) out += ' ';
    out += alphabet.name(L[i].gen());
    if (run != 1) out += "^" + std::to_string(run);
    i = j;
  }
  return out;
}

}  // namespace whp
