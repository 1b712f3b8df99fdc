#include "bsqh/moment_graph.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace bsqh {

CurveClass unit_class(int n, int k) {
  if (k < 1 || k > n) throw std::invalid_argument("unit class index out of range");
  CurveClass c(static_cast<size_t>(n), 0);
  c[static_cast<size_t>(k - 1)] = 1;
  return c;
}

CurveClass extended(const CurveClass& c) {
  CurveClass r = c;
  r.push_back(0);
  return r;
}

CurveClass truncated(const CurveClass& c) {
  if (c.empty()) throw std::invalid_argument("cannot truncate an empty class");
  return CurveClass(c.begin(), c.end() - 1);
}

namespace {

CurveClass add(const CurveClass& a, const CurveClass& b, Int s) {
  CurveClass r = a;
  for (size_t i = 0; i < r.size(); ++i) r[i] += s * b[i];
  return r;
}

}  // namespace

Edge::Edge(SubwordIndex a, SubwordIndex b, CurveClass c, bool fam)
    : u(a), v(b), cls(std::move(c)), family(fam) {
  if (u == v) throw std::invalid_argument("edge endpoints must be distinct");
  if (v < u) std::swap(u, v);
}

bool Edge::operator<(const Edge& o) const {
  if (u != o.u) return u < o.u;
  if (v != o.v) return v < o.v;
  if (cls != o.cls) return cls < o.cls;
  return family < o.family;
}

std::vector<SubwordIndex> MomentGraph::vertices() const {
  int n = word.size();
  std::vector<SubwordIndex> vs;
  vs.reserve(1u << n);
  for (std::uint32_t b = 0; b < (1u << n); ++b) vs.push_back(SubwordIndex{b, n});
  std::sort(vs.begin(), vs.end());
  return vs;
}

LiftClassification classify_lift(const Word& w, const Edge& parent) {
  int n = w.size();
  if (parent.u.n != n - 1 || parent.v.n != n - 1)
    throw std::invalid_argument("parent edge does not belong to the prefix graph");
  Word prefix{w.cartan, std::vector<int>(w.letters.begin(), w.letters.end() - 1)};
  int k = 0;
  for (int i = 1; i < n; ++i)
    if (parent.u.bit(i) != parent.v.bit(i)) { k = i; break; }
  if (k == 0) throw std::invalid_argument("parent edge endpoints coincide");

  SubwordIndex x0 = parent.u.appended(false);
  SubwordIndex y0 = parent.v.appended(false);
  bool x_eq = root_at(w, x0, k) == root_at(w, x0, n);
  bool y_eq = root_at(w, y0, k) == root_at(w, y0, n);
  LiftCase tag = x_eq ? (y_eq ? LiftCase::II : LiftCase::III)
                      : (y_eq ? LiftCase::IV : LiftCase::I);
  return LiftClassification{tag, k, weyl_element(prefix, parent.u),
                            weyl_element(prefix, parent.v)};
}

std::vector<Edge> lift_edge(const Word& w, const Edge& parent,
                            const LiftClassification& c) {
  int n = w.size();
  SubwordIndex x0 = parent.u.appended(false);
  SubwordIndex x1 = parent.u.appended(true);
  SubwordIndex y0 = parent.v.appended(false);
  SubwordIndex y1 = parent.v.appended(true);
  CurveClass sC = extended(parent.cls);
  CurveClass h = unit_class(n, n);

  std::vector<Edge> out;
  switch (c.tag) {
    case LiftCase::I: {
      out.emplace_back(x0, y0, sC);
      CurveClass top = sC;
      if (!(c.wx0 == c.wy0)) {
        WeylElement q = c.wx0.inverse() * c.wy0;
        auto gamma = reflection_root(w, q);
        if (!gamma)
          throw std::domain_error(
              "case I with distinct prefix Weyl elements whose quotient is not "
              "a reflection");
        top = add(sC, h, -root_pairing(w, *gamma, w.letter(n)));
      }
      out.emplace_back(x1, y1, top);
      break;
    }
    case LiftCase::II:
      out.emplace_back(x0, y0, sC, /*family=*/true);
      out.emplace_back(x0, y1, add(sC, h, -1));
      out.emplace_back(x1, y0, add(sC, h, -1));
      break;
    case LiftCase::III:
      out.emplace_back(x0, y0, sC);
      out.emplace_back(x1, y1, sC);
      out.emplace_back(x0, y1, add(sC, h, +1), /*family=*/true);
      break;
    case LiftCase::IV:
      out.emplace_back(x0, y0, sC);
      out.emplace_back(x1, y1, sC);
      out.emplace_back(x1, y0, add(sC, h, +1), /*family=*/true);
      break;
  }
  return out;
}

MomentGraph build_moment_graph(const Word& w) {
  w.validate();
  int n = w.size();
  MomentGraph g{w, {}};
  if (n == 0) return g;

  Word prefix{w.cartan, std::vector<int>(w.letters.begin(), w.letters.end() - 1)};
  MomentGraph parent = build_moment_graph(prefix);

  // Fiber edges: one per prefix vertex, class h = e_n.
  for (const SubwordIndex& p : parent.vertices())
    g.edges.emplace_back(p.appended(false), p.appended(true), unit_class(n, n));

  for (const Edge& e : parent.edges) {
    auto lifted = lift_edge(w, e, classify_lift(w, e));
    g.edges.insert(g.edges.end(), lifted.begin(), lifted.end());
  }
  std::sort(g.edges.begin(), g.edges.end());
  return g;
}

std::vector<Int> push_theta(const Word& w, const CurveClass& cls) {
  if (static_cast<int>(cls.size()) != w.size())
    throw std::invalid_argument("curve class length does not match the word");
  std::vector<Int> out(static_cast<size_t>(w.cartan.rank), 0);
  for (int i = 1; i <= w.size(); ++i)
    out[static_cast<size_t>(w.letter(i) - 1)] += cls[static_cast<size_t>(i - 1)];
  return out;
}

std::string export_dot(const MomentGraph& g) {
  std::ostringstream out;
  out << "graph moment_graph {\n";
  out << "  node [shape=circle];\n";
  for (const SubwordIndex& v : g.vertices()) out << "  \"" << v.str() << "\";\n";
  for (const Edge& e : g.edges) {
    out << "  \"" << e.u.str() << "\" -- \"" << e.v.str() << "\" [label=\"";
    for (size_t i = 0; i < e.cls.size(); ++i) out << (i ? "," : "") << e.cls[i];
    out << "\"";
    if (e.family) out << ", penwidth=3";
    out << "];\n";
  }
  out << "}\n";
  return out.str();
}

std::string export_json(const MomentGraph& g) {
  nlohmann::ordered_json j;
  j["word"] = g.word.letters;
  std::vector<std::vector<Int>> cartan_rows;
  for (int i = 1; i <= g.word.cartan.rank; ++i) {
    std::vector<Int> row;
    for (int k = 1; k <= g.word.cartan.rank; ++k) row.push_back(g.word.cartan.entry(i, k));
    cartan_rows.push_back(std::move(row));
  }
  j["cartan"] = cartan_rows;
  std::vector<std::string> vs;
  for (const SubwordIndex& v : g.vertices()) vs.push_back(v.str());
  j["vertices"] = vs;
  j["edges"] = nlohmann::ordered_json::array();
  for (const Edge& e : g.edges) {
    nlohmann::ordered_json je;
    je["u"] = e.u.str();
    je["v"] = e.v.str();
    je["class"] = e.cls;
    je["family"] = e.family;
    j["edges"].push_back(je);
  }
  return j.dump(2) + "\n";
}

MomentGraph parse_moment_graph_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  MomentGraph g;
  g.word.letters = j.at("word").get<std::vector<int>>();
  auto rows = j.at("cartan").get<std::vector<std::vector<Int>>>();
  g.word.cartan.rank = static_cast<int>(rows.size());
  for (const auto& row : rows) {
    if (row.size() != rows.size())
      throw std::invalid_argument("moment graph json: cartan matrix is not square");
    g.word.cartan.entries.insert(g.word.cartan.entries.end(), row.begin(), row.end());
  }
  g.word.validate();
  for (const auto& je : j.at("edges")) {
    Edge e(SubwordIndex::from_string(je.at("u").get<std::string>()),
           SubwordIndex::from_string(je.at("v").get<std::string>()),
           je.at("class").get<CurveClass>(), je.at("family").get<bool>());
    if (e.u.n != g.word.size() || static_cast<int>(e.cls.size()) != g.word.size())
      throw std::invalid_argument("moment graph json: edge does not match the word");
    g.edges.push_back(std::move(e));
  }
  std::sort(g.edges.begin(), g.edges.end());
  return g;
}

}  // namespace bsqh
