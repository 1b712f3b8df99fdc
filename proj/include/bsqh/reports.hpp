#pragma once

#include "bsqh/conjecture_o.hpp"

#include "json.hpp"

#include <string>

namespace bsqh {

/*
  Machine-readable reports shared by the command-line tool and the python
  bindings.  All integer data is exact; eigenvalues are decimal strings with
  explicit enclosure radii.  Key order is fixed so identical inputs yield
  byte-identical output.
*/

using Json = nlohmann::ordered_json;

Json cohomology_report(const Word& w);
std::string cohomology_text(const Word& w);

Json eff_cone_report(const Word& w);
std::string eff_cone_text(const Word& w);

Json curve_nbhd_report(const MomentGraph& g, const std::vector<SubwordIndex>& from,
                       const CurveClass& beta);
std::string curve_nbhd_text(const MomentGraph& g, const std::vector<SubwordIndex>& from,
                            const CurveClass& beta);

// Runs the full constraint pipeline and finalizes at the given parameter.
struct QhPipeline {
  MomentGraph graph;
  EffectiveCone cone;
  UnknownTable table;
  std::vector<ChevalleyMatrix> symbolic;
  SolveResult solution;
  std::vector<IntMatrix> matrices;
  QhRing ring;
  RingVerification verification;
};
QhPipeline run_qh_pipeline(const Word& w, Int y3 = 1);

Json qh_report(const Word& w, Int y3 = 1);
std::string qh_text(const Word& w, Int y3 = 1);

Json conjecture_o_report(const Word& w, double tolerance = 1e-10);
std::string conjecture_o_text(const Word& w, double tolerance = 1e-10);

std::string moment_graph_text(const MomentGraph& g);

// Renders an element of Z[q^eff] using generator coordinates when available.
std::string qpoly_str(const EffectiveCone& cone, const IntQPoly& p);

}  // namespace bsqh
