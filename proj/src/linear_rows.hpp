#pragma once

// Sparse integer equation collector shared by the conjugacy and orbit solvers.

#include <optional>
#include <utility>
#include <vector>

#include "whp/gog.hpp"
#include "whp/intmat.hpp"

namespace whp::detail {

using lattice::Int;

struct LinearRows {
  int vars = 0;
  std::vector<std::vector<std::pair<int, Int>>> rows;
  std::vector<Int> rhs;
  bool infeasible = false;

  int add_var() { return vars++; }
  void add(std::vector<std::pair<int, Int>> row, Int r) {
    rows.push_back(std::move(row));
    rhs.push_back(r);
  }
  void fix(int var, Int value) { add({{var, 1}}, value); }

  std::optional<lattice::IntegerSolution> solve() const {
    if (infeasible) return std::nullopt;
    if (vars == 0) {
      for (Int r : rhs)
        if (r != 0) return std::nullopt;
      return lattice::IntegerSolution{};
    }
    if (rows.empty()) {
      lattice::IntegerSolution s{lattice::Vec(vars, 0), {}};
      for (int i = 0; i < vars; ++i) {
        lattice::Vec e(vars, 0);
        e[i] = 1;
        s.kernel.push_back(e);
      }
      return s;
    }
    lattice::Matrix A(static_cast<int>(rows.size()), vars);
    for (std::size_t r = 0; r < rows.size(); ++r)
      for (auto [v, c] : rows[r]) A(static_cast<int>(r), v) = lattice::add(A(static_cast<int>(r), v), c);
    return lattice::solve(A, lattice::Vec(rhs.begin(), rhs.end()));
  }
};

/// Adds h = t^A x s^B at vertex v, where a missing side is passed as
/// nullptr with variable -1. Abelian vertices use additive notation.
inline void add_syllable(const gog::Splitting& sp, LinearRows& sys, int v, const gog::Element& h,
                         const gog::Element& x, const gog::Element* t, int a_var, const gog::Element* s,
                         int b_var) {
  if (sp.vertex(v).kind == gog::VertexKind::Abelian) {
    for (int i = 0; i < sp.vertex(v).rank(); ++i) {
      std::vector<std::pair<int, Int>> row;
      if (t && t->vec[i] != 0) row.emplace_back(a_var, t->vec[i]);
      if (s && s->vec[i] != 0) row.emplace_back(b_var, s->vec[i]);
      const Int r = lattice::add(h.vec[i], -x.vec[i]);
      if (row.empty()) {
        if (r != 0) sys.infeasible = true;
      } else {
        sys.add(std::move(row), r);
      }
    }
    return;
  }
  using K = gog::DoubleCosetSolutions::Kind;
  auto sol = gog::double_coset_solve(h.word, t ? t->word : Word{}, x.word, s ? s->word : Word{});
  switch (sol.kind) {
    case K::None: sys.infeasible = true; break;
    case K::Unique:
      if (a_var >= 0) sys.fix(a_var, sol.a);
      if (b_var >= 0) sys.fix(b_var, sol.b);
      break;
    case K::Line: sys.add({{a_var, sol.p}, {b_var, sol.q}}, sol.n); break;
  }
}

}  // namespace whp::detail
