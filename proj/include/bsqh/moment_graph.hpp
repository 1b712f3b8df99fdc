#pragma once

#include "bsqh/rootsys.hpp"

#include <string>
#include <vector>

namespace bsqh {

/*
  Moment graph of a Bott-Samelson variety, built level by level.  Vertices
  are the 2^n subword indices; edges carry the homology class of the
  connecting T-stable curve in the basis [Z_(1)],...,[Z_(n)] of single-letter
  subword classes, plus a flag marking one-dimensional families of curves.
*/

using CurveClass = std::vector<Int>;

CurveClass unit_class(int n, int k);            // e_k
CurveClass extended(const CurveClass& c);       // append a zero
CurveClass truncated(const CurveClass& c);      // drop the last coordinate

struct Edge {
  SubwordIndex u, v;  // normalized so that u < v
  CurveClass cls;
  bool family = false;

  Edge() = default;
  Edge(SubwordIndex a, SubwordIndex b, CurveClass c, bool fam = false);
  bool operator==(const Edge&) const = default;
  bool operator<(const Edge& o) const;
};

struct MomentGraph {
  Word word;
  std::vector<Edge> edges;  // canonical order

  std::vector<SubwordIndex> vertices() const;  // all indices, lexicographic
  bool operator==(const MomentGraph& o) const {
    return word == o.word && edges == o.edges;
  }
};

enum class LiftCase { I = 1, II = 2, III = 3, IV = 4 };

struct LiftClassification {
  LiftCase tag;
  int k;             // first index where the endpoint indices differ
  WeylElement wx0;   // w(eps_x^0)
  WeylElement wy0;   // w(eps_y^0)
};

// Classify how a prefix-graph edge lifts; `parent` joins vertices of the
// (n-1)-prefix graph.
LiftClassification classify_lift(const Word& w, const Edge& parent);

// The lifted edges among {eps_x^0, eps_x^infty, eps_y^0, eps_y^infty}.
// Vertical fiber edges are not included; build emits those separately.
std::vector<Edge> lift_edge(const Word& w, const Edge& parent,
                            const LiftClassification& c);

MomentGraph build_moment_graph(const Word& w);

// theta-pushforward of a curve class: component j sums the coordinates of
// the letters equal to j.
std::vector<Int> push_theta(const Word& w, const CurveClass& cls);

std::string export_dot(const MomentGraph& g);
std::string export_json(const MomentGraph& g);
MomentGraph parse_moment_graph_json(const std::string& text);

}  // namespace bsqh
