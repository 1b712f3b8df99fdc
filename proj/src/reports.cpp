#include "bsqh/reports.hpp"

#include <algorithm>
#include <cinttypes>
#include <cstdio>
#include <sstream>

namespace bsqh {

namespace {

std::string fmt_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string fmt_radius(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.3e", x);
  return buf;
}

Json cartan_json(const CartanMatrix& c) {
  Json rows = Json::array();
  for (int i = 1; i <= c.rank; ++i) {
    Json row = Json::array();
    for (int j = 1; j <= c.rank; ++j) row.push_back(c.entry(i, j));
    rows.push_back(row);
  }
  return rows;
}

Json coh_class_json(const Word& w, const CohClass& a) {
  Json out = Json::array();
  for (const auto& [bits, coeff] : a.terms) {
    Json term;
    term["epsilon"] = SubwordIndex{bits, w.size()}.str();
    term["coeff"] = coeff;
    out.push_back(term);
  }
  return out;
}

std::string q_monomial_str(const EffectiveCone& cone, const CurveClass& cls) {
  bool zero = std::all_of(cls.begin(), cls.end(), [](Int x) { return x == 0; });
  if (zero) return "";
  auto coords = generator_coordinates(cone, cls);
  std::ostringstream out;
  if (coords) {
    bool first = true;
    for (size_t g = 0; g < coords->size(); ++g) {
      if ((*coords)[g] == 0) continue;
      if (!first) out << "*";
      out << "q" << (g + 1);
      if ((*coords)[g] > 1) out << "^" << (*coords)[g];
      first = false;
    }
  } else {
    out << "q^(";
    for (size_t i = 0; i < cls.size(); ++i) out << (i ? "," : "") << cls[i];
    out << ")";
  }
  return out.str();
}

}  // namespace

std::string qpoly_str(const EffectiveCone& cone, const IntQPoly& p) {
  if (p.empty()) return "0";
  std::ostringstream out;
  bool first = true;
  for (const auto& [cls, c] : p) {
    Int a = c;
    if (first) {
      if (a < 0) { out << "-"; a = -a; }
    } else {
      out << (a < 0 ? " - " : " + ");
      if (a < 0) a = -a;
    }
    std::string q = q_monomial_str(cone, cls);
    if (a != 1 || q.empty()) {
      out << a;
      if (!q.empty()) out << "*";
    }
    out << q;
    first = false;
  }
  return out.str();
}

// ------------------------------------------------------------------ cohomology

Json cohomology_report(const Word& w) {
  Json j;
  j["word"] = w.letters;
  j["cartan"] = cartan_json(w.cartan);
  Json products = Json::array();
  auto basis = sigma_basis(w);
  for (int g = 1; g <= w.size(); ++g) {
    SubwordIndex gen = SubwordIndex::zero(w.size()).with_bit(g);
    for (const SubwordIndex& eps : basis) {
      Json item;
      item["a"] = gen.str();
      item["b"] = eps.str();
      item["product"] =
          coh_class_json(w, multiply(w, CohClass::basis(gen), CohClass::basis(eps)));
      products.push_back(item);
    }
  }
  j["products"] = products;
  j["c1"] = coh_class_json(w, first_chern(w));
  return j;
}

std::string cohomology_text(const Word& w) {
  std::ostringstream out;
  auto basis = sigma_basis(w);
  for (int g = 1; g <= w.size(); ++g) {
    SubwordIndex gen = SubwordIndex::zero(w.size()).with_bit(g);
    for (const SubwordIndex& eps : basis) {
      CohClass p = multiply(w, CohClass::basis(gen), CohClass::basis(eps));
      out << "s" << gen.str() << " * s" << eps.str() << " = " << p.str(w.size())
          << "\n";
    }
  }
  out << "c1 = " << first_chern(w).str(w.size()) << "\n";
  return out.str();
}

// -------------------------------------------------------------- effective cone

Json eff_cone_report(const Word& w) {
  EffectiveCone cone = effective_cone(w);
  auto indec = indecomposables(cone);
  Json j;
  j["word"] = w.letters;
  j["generators"] = cone.generators;
  Json flags = Json::array();
  for (const auto& g : cone.generators)
    flags.push_back(std::find(indec.begin(), indec.end(), g) != indec.end());
  j["indecomposable"] = flags;
  Json degs = Json::array();
  for (const auto& g : cone.generators) degs.push_back(deg_q(w, g));
  j["deg_q"] = degs;
  return j;
}

std::string eff_cone_text(const Word& w) {
  EffectiveCone cone = effective_cone(w);
  auto indec = indecomposables(cone);
  std::ostringstream out;
  for (size_t i = 0; i < cone.generators.size(); ++i) {
    out << "beta" << (i + 1) << " = (";
    for (size_t k = 0; k < cone.generators[i].size(); ++k)
      out << (k ? "," : "") << cone.generators[i][k];
    out << ")  deg_q=" << deg_q(w, cone.generators[i]);
    bool ind = std::find(indec.begin(), indec.end(), cone.generators[i]) != indec.end();
    out << (ind ? "  indecomposable" : "  decomposable") << "\n";
  }
  return out.str();
}

// ---------------------------------------------------------- curve neighborhood

Json curve_nbhd_report(const MomentGraph& g, const std::vector<SubwordIndex>& from,
                       const CurveClass& beta) {
  NeighborhoodResult r = curve_neighborhood(g, from, beta);
  Json j;
  j["word"] = g.word.letters;
  j["class"] = beta;
  Json f = Json::array();
  for (const auto& s : from) f.push_back(s.str());
  j["from"] = f;
  Json pts = Json::array();
  for (const auto& p : r.fixed_points) pts.push_back(p.str());
  j["fixed_points"] = pts;
  if (r.matched_subvariety)
    j["matched_subvariety"] = r.matched_subvariety->str();
  else
    j["matched_subvariety"] = nullptr;
  return j;
}

std::string curve_nbhd_text(const MomentGraph& g, const std::vector<SubwordIndex>& from,
                            const CurveClass& beta) {
  NeighborhoodResult r = curve_neighborhood(g, from, beta);
  std::ostringstream out;
  out << "fixed points:";
  for (const auto& p : r.fixed_points) out << " " << p.str();
  out << "\n";
  if (r.matched_subvariety)
    out << "matches Z_" << r.matched_subvariety->str() << "\n";
  else
    out << "matches no subvariety\n";
  return out.str();
}

// ------------------------------------------------------------------ moment text

std::string moment_graph_text(const MomentGraph& g) {
  std::ostringstream out;
  out << "vertices: " << g.vertices().size() << ", edges: " << g.edges.size() << "\n";
  for (const Edge& e : g.edges) {
    out << e.u.str() << " -- " << e.v.str() << "  class=(";
    for (size_t i = 0; i < e.cls.size(); ++i) out << (i ? "," : "") << e.cls[i];
    out << ")";
    if (e.family) out << "  family";
    out << "\n";
  }
  return out.str();
}

// -------------------------------------------------------------------- quantum

QhPipeline run_qh_pipeline(const Word& w, Int y3) {
  QhPipeline p;
  p.graph = build_moment_graph(w);
  p.cone = effective_cone(p.graph);
  p.table = enumerate_unknowns(w, p.cone);
  for (int j = 1; j <= w.size(); ++j)
    p.symbolic.push_back(build_chevalley(w, p.table, j));
  p.solution = solve_commutators(p.symbolic, p.table);
  p.matrices = finalize_matrices(p.symbolic, p.table, p.solution, y3);
  p.ring = make_qh_ring(w, p.cone, p.matrices);
  p.verification = verify_ring(p.ring);
  return p;
}

Json qh_report(const Word& w, Int y3) {
  QhPipeline p = run_qh_pipeline(w, y3);
  Json j;
  j["word"] = w.letters;
  j["cartan"] = cartan_json(w.cartan);
  j["generators"] = p.cone.generators;
  j["unknowns"] = p.table.unknown_count();
  j["commutator_entries"] = p.solution.commutator_entries;
  j["coefficient_equations"] = p.solution.coefficient_equations;
  Json freep = Json::array();
  for (int s : p.solution.free_symbols)
    freep.push_back(p.table.symbol_names[static_cast<size_t>(s)]);
  j["free_parameters"] = freep;
  j["branched_equations"] = p.solution.branched_equations;
  j["parameter_value"] = y3;

  Json table = Json::array();
  for (const auto& e : p.table.entries) {
    Json item;
    item["key"] = e.key.str();
    if (e.known) {
      item["name"] = nullptr;
      item["status"] = "seeded";
      item["value"] = *e.known;
      item["provenance"] = e.provenance;
    } else {
      item["name"] = e.name;
      auto it = p.solution.assignment.find(e.symbol);
      if (it == p.solution.assignment.end()) {
        item["status"] = "free";
        item["value"] = e.name;
      } else {
        item["status"] = "solved";
        item["value"] = it->second.str(p.table.symbol_names);
      }
    }
    table.push_back(item);
  }
  j["invariants"] = table;

  Json mats;
  for (int g = 1; g <= w.size(); ++g) {
    SubwordIndex gen = SubwordIndex::zero(w.size()).with_bit(g);
    const IntMatrix& m = p.matrices[static_cast<size_t>(g - 1)];
    Json rows = Json::array();
    for (const auto& row : m.entry) {
      Json r = Json::array();
      for (const auto& cell : row) r.push_back(qpoly_str(p.cone, cell));
      rows.push_back(r);
    }
    mats["s" + gen.str()] = rows;
  }
  j["matrices"] = mats;
  Json basis = Json::array();
  for (const auto& b : p.ring.basis) basis.push_back(b.str());
  j["basis"] = basis;
  j["presentation"] = presentation_relations(p.ring);
  j["giambelli"] = giambelli_formulas(p.ring);
  Json ver;
  ver["commutative"] = p.verification.commutative;
  ver["associative"] = p.verification.associative;
  ver["giambelli"] = p.verification.giambelli;
  ver["presentation"] = p.verification.presentation;
  ver["classical_limit"] = p.verification.classical_limit;
  ver["pairs_checked"] = p.verification.pairs_checked;
  ver["triples_checked"] = p.verification.triples_checked;
  j["verified"] = ver;
  return j;
}

std::string qh_text(const Word& w, Int y3) {
  QhPipeline p = run_qh_pipeline(w, y3);
  std::ostringstream out;
  out << "unknowns: " << p.table.unknown_count()
      << ", commutator entries: " << p.solution.commutator_entries
      << ", coefficient equations: " << p.solution.coefficient_equations << "\n";
  out << "free parameters:";
  for (int s : p.solution.free_symbols)
    out << " " << p.table.symbol_names[static_cast<size_t>(s)];
  out << " (set to " << y3 << ")\n";
  if (!p.solution.branched_equations.empty())
    out << "branched equations: " << p.solution.branched_equations.size() << "\n";
  out << "\npresentation:\n";
  for (const auto& rel : presentation_relations(p.ring)) out << "  " << rel << "\n";
  out << "\ngiambelli:\n";
  for (const auto& rel : giambelli_formulas(p.ring)) out << "  " << rel << "\n";
  for (int g = 1; g <= w.size(); ++g) {
    SubwordIndex gen = SubwordIndex::zero(w.size()).with_bit(g);
    out << "\nmatrix of s" << gen.str() << ":\n";
    const IntMatrix& m = p.matrices[static_cast<size_t>(g - 1)];
    for (const auto& row : m.entry) {
      out << "  [";
      for (size_t c = 0; c < row.size(); ++c)
        out << (c ? ", " : "") << qpoly_str(p.cone, row[c]);
      out << "]\n";
    }
  }
  out << "\nverified: commutative, associative, giambelli, presentation, "
         "classical limit\n";
  return out.str();
}

// -------------------------------------------------------------- conjecture O

Json conjecture_o_report(const Word& w, double tolerance) {
  QhPipeline p = run_qh_pipeline(w, 1);
  auto m = c1_hat(p.ring);
  int fano = fano_index(w);
  SpectralReport rep = check_conjecture_o(m, fano, tolerance);
  Json j;
  j["word"] = w.letters;
  j["cartan"] = cartan_json(w.cartan);
  j["c1_hat"] = m;
  Json cp = Json::array();
  for (const auto& c : rep.char_poly) cp.push_back(static_cast<Int>(c));
  j["char_poly"] = cp;
  j["square_free"] = rep.distinct;
  j["fano_index"] = rep.fano_index;
  Json evs = Json::array();
  for (const auto& e : rep.eigenvalues) {
    Json ev;
    ev["re"] = fmt_double(e.re);
    ev["im"] = fmt_double(e.im);
    ev["radius"] = fmt_radius(e.radius);
    evs.push_back(ev);
  }
  j["eigenvalues"] = evs;
  j["dominant"] = rep.dominant;
  Json clauses;
  clauses["dominant_real"] = rep.dominant_real;
  clauses["dominant_simple"] = rep.dominant_simple;
  clauses["strictly_dominant"] = rep.strictly_dominant;
  clauses["root_of_unity"] = rep.clause2;
  j["clauses"] = clauses;
  j["conjecture_o"] = rep.conjecture_o;
  j["tolerance"] = rep.tolerance;
  return j;
}

std::string conjecture_o_text(const Word& w, double tolerance) {
  Json j = conjecture_o_report(w, tolerance);
  std::ostringstream out;
  out << "char poly:";
  for (const auto& c : j["char_poly"]) out << " " << c;
  out << "\nsquare free: " << (j["square_free"].get<bool>() ? "yes" : "no");
  out << "\nfano index: " << j["fano_index"];
  out << "\neigenvalues (modulus order):\n";
  for (const auto& ev : j["eigenvalues"])
    out << "  " << ev["re"].get<std::string>() << " + "
        << ev["im"].get<std::string>() << "i  (radius "
        << ev["radius"].get<std::string>() << ")\n";
  out << "conjecture O: " << (j["conjecture_o"].get<bool>() ? "holds" : "fails")
      << "\n";
  return out.str();
}

}  // namespace bsqh
