#pragma once

#include <functional>
#include <random>
#include <set>

#include "whp/word.hpp"

namespace whp::testing {

inline std::mt19937_64& rng() {
  static std::mt19937_64 gen(0x5eed1234u);
  return gen;
}

/// Uniform freely reduced word of exactly `length` letters over `rank` generators.
inline Word random_reduced_word(int rank, std::size_t length, std::mt19937_64& gen = rng()) {
  std::vector<Letter> raw;
  std::uniform_int_distribution<int> pick(0, 2 * rank - 1);
  while (raw.size() < length) {
    Letter l{pick(gen)};
    if (!raw.empty() && raw.back() == l.inv()) continue;
    raw.push_back(l);
  }
  return Word::reduce(raw);
}

/// Arbitrary (unreduced) letter sequence.
inline std::vector<Letter> random_letters(int rank, std::size_t length, std::mt19937_64& gen = rng()) {
  std::vector<Letter> raw;
  std::uniform_int_distribution<int> pick(0, 2 * rank - 1);
  for (std::size_t i = 0; i < length; ++i) raw.push_back(Letter{pick(gen)});
  return raw;
}

/// Canonical cyclic words of length 1..max_length, each conjugacy class once.
inline std::vector<Word> all_cyclic_words(int rank, std::size_t max_length) {
  std::set<CyclicWord> seen;
  std::vector<Word> out;
  std::vector<Letter> cur;
  std::function<void()> rec = [&] {
    if (!cur.empty()) {
      Word w = Word::reduce(cur);
      if (w.size() == cur.size() && w.cyclically_reduced() && seen.insert(canonical_cyclic(w)).second)
        out.push_back(canonical_cyclic(w).core());
    }
    if (cur.size() == max_length) return;
    for (int code = 0; code < 2 * rank; ++code) {
      if (!cur.empty() && cur.back() == Letter{code}.inv()) continue;
      cur.push_back(Letter{code});
      rec();
      cur.pop_back();
    }
  };
  rec();
  return out;
}

}  // namespace whp::testing
