#pragma once

#include "bsqh/moment_graph.hpp"

#include <map>
#include <utility>
#include <vector>

namespace bsqh {

/*
  Integral cohomology of a Bott-Samelson variety in the sigma_eps basis dual
  to the subvariety classes [Z_eps].  Products are computed generator by
  generator and reduced to square-free normal form with the quadratic
  relation on sigma_(j)^2.
*/

struct CohClass {
  std::map<std::uint32_t, Int> terms;  // eps bits -> coefficient, zeros dropped

  static CohClass zero() { return {}; }
  static CohClass basis(const SubwordIndex& eps);
  static CohClass constant(Int c, int n);
  CohClass& add_term(std::uint32_t bits, Int c);
  bool operator==(const CohClass&) const = default;
  std::string str(int n) const;
};

CohClass coh_add(const CohClass& a, const CohClass& b);
CohClass coh_scale(const CohClass& a, Int s);

CohClass multiply(const Word& w, const CohClass& a, const CohClass& b);
Int integrate(const Word& w, const CohClass& a);
Int pair_subvariety(const Word& w, const CohClass& a, const SubwordIndex& eps);
Int pair_curve(const Word& w, int j, const CurveClass& beta);

// c_1(T_Z) = sum_i (2 + sum_{j>i} (alpha_{a_j}, alpha_{a_i}^vee)) sigma_(i)
std::vector<Int> first_chern_coefficients(const Word& w);
CohClass first_chern(const Word& w);
Int deg_q(const Word& w, const CurveClass& beta);

// sigma_(i)-coefficients of the pullback line bundle classes c_1(O_k(1)),
// k = 1..n: the class of O_k(1) is sum of sigma_(i) over i <= k with
// a_i = a_k.  These span the nef cone.
std::vector<std::vector<Int>> nef_basis_coefficients(const Word& w);
// Pairing of a curve class with the sum of all nef basis classes; positive
// on classes of irreducible curves, which bounds effective decompositions.
Int nef_degree(const Word& w, const CurveClass& beta);

namespace detail {
// One rewriting step on a generator-exponent monomial: expands the square at
// the largest index with exponent >= 2.  Exposed for the termination tests.
std::vector<std::pair<Int, std::vector<int>>> rewrite_square(
    const Word& w, const std::vector<int>& expo);
bool right_to_left_lex_less(const std::vector<int>& a, const std::vector<int>& b);
}  // namespace detail

}  // namespace bsqh
