#include "bsqh/eff_cone.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>

namespace bsqh {

namespace {

Int coord_sum(const CurveClass& c) {
  return std::accumulate(c.begin(), c.end(), Int{0});
}

// Canonical generator order: coordinate sum descending, then lexicographic
// descending.  This pins the quantum-parameter indexing.
bool canonical_less(const CurveClass& a, const CurveClass& b) {
  Int sa = coord_sum(a), sb = coord_sum(b);
  if (sa != sb) return sa > sb;
  return a > b;
}

bool is_zero(const CurveClass& c) {
  return std::all_of(c.begin(), c.end(), [](Int x) { return x == 0; });
}

CurveClass minus(const CurveClass& a, const CurveClass& b, Int mult) {
  CurveClass r = a;
  for (size_t i = 0; i < r.size(); ++i) r[i] -= mult * b[i];
  return r;
}

// Exact search for nonnegative integer coefficients writing target as a
// combination of gens[from..].  The nef degree strictly decreases along any
// effective decomposition, which bounds the search.
bool combination_search(const Word& w, const std::vector<CurveClass>& gens,
                        size_t from, const CurveClass& target,
                        std::vector<Int>& coeffs) {
  Int budget = nef_degree(w, target);
  if (budget < 0) return false;
  if (from == gens.size()) return is_zero(target);
  Int unit = nef_degree(w, gens[from]);
  Int cap = unit > 0 ? budget / unit : 0;
  for (Int x = 0; x <= cap; ++x) {
    coeffs[from] = x;
    if (combination_search(w, gens, from + 1, minus(target, gens[from], x), coeffs))
      return true;
  }
  coeffs[from] = 0;
  return false;
}

}  // namespace

EffectiveCone effective_cone(const MomentGraph& g) {
  std::set<CurveClass> distinct;
  for (const Edge& e : g.edges) {
    if (nef_degree(g.word, e.cls) <= 0)
      throw std::domain_error("edge class has nonpositive nef degree");
    distinct.insert(e.cls);
  }
  std::vector<CurveClass> classes(distinct.begin(), distinct.end());
  std::sort(classes.begin(), classes.end(), canonical_less);

  // Delete every class expressible from the remaining ones.
  bool removed = true;
  while (removed) {
    removed = false;
    for (size_t i = 0; i < classes.size(); ++i) {
      std::vector<CurveClass> rest;
      for (size_t k = 0; k < classes.size(); ++k)
        if (k != i) rest.push_back(classes[k]);
      std::vector<Int> coeffs(rest.size(), 0);
      if (combination_search(g.word, rest, 0, classes[i], coeffs)) {
        classes.erase(classes.begin() + static_cast<std::ptrdiff_t>(i));
        removed = true;
        break;
      }
    }
  }
  return EffectiveCone{g.word, classes};
}

EffectiveCone effective_cone(const Word& w) {
  return effective_cone(build_moment_graph(w));
}

EffectivityWitness is_effective(const EffectiveCone& cone, const CurveClass& beta) {
  if (beta.size() != static_cast<size_t>(cone.word.size()))
    throw std::invalid_argument("curve class length does not match the word");
  std::vector<Int> coeffs(cone.generators.size(), 0);
  if (combination_search(cone.word, cone.generators, 0, beta, coeffs))
    return EffectivityWitness{true, coeffs};
  return EffectivityWitness{false, {}};
}

std::vector<CurveClass> indecomposables(const EffectiveCone& cone) {
  std::vector<CurveClass> out;
  for (const CurveClass& g : cone.generators) {
    // g decomposes iff g = x + y with x, y effective and nonzero; equivalently
    // some generator combination with total coefficient >= 2 hits g.
    bool decomposable = false;
    std::vector<Int> coeffs(cone.generators.size(), 0);
    std::vector<std::vector<Int>> witnesses;
    // Enumerate all representations and look for one with coefficient sum >= 2.
    std::function<void(size_t, CurveClass)> walk = [&](size_t from, CurveClass rest) {
      if (decomposable) return;
      Int budget = nef_degree(cone.word, rest);
      if (budget < 0) return;
      if (from == cone.generators.size()) {
        if (is_zero(rest)) {
          Int total = std::accumulate(coeffs.begin(), coeffs.end(), Int{0});
          if (total >= 2) decomposable = true;
        }
        return;
      }
      Int unit = nef_degree(cone.word, cone.generators[from]);
      Int cap = unit > 0 ? budget / unit : 0;
      for (Int x = 0; x <= cap && !decomposable; ++x) {
        coeffs[from] = x;
        walk(from + 1, minus(rest, cone.generators[from], x));
      }
      coeffs[from] = 0;
    };
    walk(0, g);
    if (!decomposable) out.push_back(g);
  }
  return out;
}

std::optional<std::vector<Int>> generator_coordinates(const EffectiveCone& cone,
                                                      const CurveClass& beta) {
  auto w = is_effective(cone, beta);
  if (!w.effective) return std::nullopt;
  return w.coefficients;
}

CurveClass from_generator_coordinates(const EffectiveCone& cone,
                                      const std::vector<Int>& coeffs) {
  if (coeffs.size() != cone.generators.size())
    throw std::invalid_argument("generator coefficient count mismatch");
  CurveClass out(static_cast<size_t>(cone.word.size()), 0);
  for (size_t g = 0; g < coeffs.size(); ++g)
    for (size_t i = 0; i < out.size(); ++i) out[i] += coeffs[g] * cone.generators[g][i];
  return out;
}

std::vector<SubwordIndex> subvariety_fixed_points(const Word& w,
                                                  const SubwordIndex& eps) {
  if (eps.n != w.size()) throw std::invalid_argument("subword length mismatch");
  std::vector<SubwordIndex> out;
  // Subsets of the support of eps.
  std::uint32_t sub = 0;
  do {
    out.push_back(SubwordIndex{sub, eps.n});
    sub = (sub - eps.bits) & eps.bits;
  } while (sub != 0);
  std::sort(out.begin(), out.end());
  return out;
}

NeighborhoodResult curve_neighborhood(const MomentGraph& g,
                                      const std::vector<SubwordIndex>& from,
                                      const CurveClass& beta) {
  const Word& w = g.word;
  EffectiveCone cone = effective_cone(g);
  if (!is_effective(cone, beta).effective)
    throw std::domain_error("curve class is not effective");

  std::set<std::uint32_t> covered;
  if (is_zero(beta)) {
    for (const auto& s : from) covered.insert(s.bits);
  } else {
    std::set<std::pair<std::uint64_t, CurveClass>> seen;
    // Grow connected edge multisets from each start vertex; the nef degree
    // of the remaining class drops by at least one per edge.
    std::function<void(std::uint64_t, const CurveClass&)> grow =
        [&](std::uint64_t mask, const CurveClass& rest) {
          if (!seen.insert({mask, rest}).second) return;
          if (is_zero(rest)) {
            for (int b = 0; b < 64; ++b)
              if (mask & (1ull << b)) covered.insert(static_cast<std::uint32_t>(b));
            return;
          }
          if (nef_degree(w, rest) <= 0) return;
          for (const Edge& e : g.edges) {
            bool touches = ((mask >> e.u.bits) & 1ull) || ((mask >> e.v.bits) & 1ull);
            if (!touches) continue;
            CurveClass next = rest;
            for (size_t i = 0; i < next.size(); ++i) next[i] -= e.cls[i];
            if (nef_degree(w, next) < 0) continue;
            grow(mask | (1ull << e.u.bits) | (1ull << e.v.bits), next);
          }
        };
    for (const auto& s : from) {
      if (s.n != w.size()) throw std::invalid_argument("fixed point length mismatch");
      grow(1ull << s.bits, beta);
    }
  }

  NeighborhoodResult res;
  std::uint32_t all = 0;
  for (std::uint32_t b : covered) {
    res.fixed_points.push_back(SubwordIndex{b, w.size()});
    all |= b;
  }
  std::sort(res.fixed_points.begin(), res.fixed_points.end());
  if (!covered.empty()) {
    SubwordIndex candidate{all, w.size()};
    auto expect = subvariety_fixed_points(w, candidate);
    if (expect.size() == res.fixed_points.size() &&
        std::equal(expect.begin(), expect.end(), res.fixed_points.begin()))
      res.matched_subvariety = candidate;
  }
  return res;
}

bool gw_vanishes(const Word& w, const SubwordIndex& gamma, const SubwordIndex& omega,
                 const CurveClass& beta,
                 const std::vector<NeighborhoodComponent>& components) {
  if (gamma.n != w.size() || omega.n != w.size())
    throw std::invalid_argument("subword length mismatch");
  Int lhs = gamma.length();
  Int rhs = omega.length() + deg_q(w, beta) - 1;
  if (lhs != rhs)
    throw std::invalid_argument("codimension condition fails for the pair");
  if (components.empty())
    throw std::invalid_argument("component list must not be empty");
  int maxdim = 0;
  for (const auto& c : components) {
    if (c.dim < 0 || c.dim > w.size() || c.subvariety.n != w.size())
      throw std::invalid_argument("malformed neighborhood component");
    maxdim = std::max(maxdim, c.dim);
  }
  if (maxdim < gamma.length()) return true;
  if (maxdim > gamma.length()) return false;
  for (const auto& c : components)
    if (pair_subvariety(w, CohClass::basis(gamma), c.subvariety) != 0) return false;
  return true;
}

std::optional<std::vector<NeighborhoodComponent>> known_neighborhood_components(
    const Word& w, const SubwordIndex& omega, const CurveClass& beta) {
  // Certified rows for the threefold over A2 with word (1,2,1): the
  // neighborhoods of the three codimension-one subvarieties for the class
  // (1,0,-1) all equal Z_101.
  Word certified{CartanMatrix::preset("A2"), {1, 2, 1}};
  if (!(w == certified) || beta != CurveClass{1, 0, -1}) return std::nullopt;
  std::uint32_t ob = omega.bits;
  if (omega.n != 3 ||
      (ob != SubwordIndex::from_string("110").bits &&
       ob != SubwordIndex::from_string("101").bits &&
       ob != SubwordIndex::from_string("011").bits))
    return std::nullopt;
  std::vector<NeighborhoodComponent> comps{
      {SubwordIndex::from_string("101"), 2}};
  // Cross-check against the combinatorial fixed-point computation.
  auto nbhd = curve_neighborhood(build_moment_graph(w),
                                 subvariety_fixed_points(w, omega), beta);
  std::set<SubwordIndex> expect;
  for (const auto& c : comps)
    for (const auto& p : subvariety_fixed_points(w, c.subvariety)) expect.insert(p);
  std::set<SubwordIndex> got(nbhd.fixed_points.begin(), nbhd.fixed_points.end());
  if (expect != got)
    throw std::domain_error("neighborhood component table fails its cross-check");
  return comps;
}

}  // namespace bsqh
