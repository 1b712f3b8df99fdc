#pragma once

#include "bsqh/cohomology.hpp"

#include <optional>
#include <vector>

namespace bsqh {

/*
  Effective cone generated by the moment-graph edge classes, exact
  effectivity tests, and combinatorial curve neighborhoods with the
  Gromov-Witten vanishing filter.
*/

struct EffectiveCone {
  Word word;
  std::vector<CurveClass> generators;  // minimal, canonical order
};

EffectiveCone effective_cone(const MomentGraph& g);
EffectiveCone effective_cone(const Word& w);

struct EffectivityWitness {
  bool effective = false;
  std::vector<Int> coefficients;  // one per generator when effective
};
EffectivityWitness is_effective(const EffectiveCone& cone, const CurveClass& beta);
std::vector<CurveClass> indecomposables(const EffectiveCone& cone);

// beta written in generator coordinates, when effective.
std::optional<std::vector<Int>> generator_coordinates(const EffectiveCone& cone,
                                                      const CurveClass& beta);
CurveClass from_generator_coordinates(const EffectiveCone& cone,
                                      const std::vector<Int>& coeffs);

struct NeighborhoodResult {
  std::vector<SubwordIndex> fixed_points;  // sorted
  std::optional<SubwordIndex> matched_subvariety;
};

// Vertices covered by connected edge multisets of total class exactly beta
// that touch the given fixed-point set.
NeighborhoodResult curve_neighborhood(const MomentGraph& g,
                                      const std::vector<SubwordIndex>& from,
                                      const CurveClass& beta);

// Fixed points of the subvariety Z_eps: all indices supported inside eps.
std::vector<SubwordIndex> subvariety_fixed_points(const Word& w,
                                                  const SubwordIndex& eps);

struct NeighborhoodComponent {
  SubwordIndex subvariety;
  int dim = 0;
};

// Vanishing filter for a two-point invariant <sigma_gamma, [Z_omega]>_beta
// given the irreducible components of the curve neighborhood of Z_omega.
// True certifies vanishing; false means the filter is inconclusive.
bool gw_vanishes(const Word& w, const SubwordIndex& gamma, const SubwordIndex& omega,
                 const CurveClass& beta,
                 const std::vector<NeighborhoodComponent>& components);

// Component table for curve neighborhoods that are certified for the
// quantum pipeline; cross-checked against curve_neighborhood on load.
std::optional<std::vector<NeighborhoodComponent>> known_neighborhood_components(
    const Word& w, const SubwordIndex& omega, const CurveClass& beta);

}  // namespace bsqh
