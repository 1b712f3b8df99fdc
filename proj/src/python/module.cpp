#include "bsqh/reports.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <filesystem>

namespace py = pybind11;
using namespace bsqh;

namespace {

// Preset name, or a path to a Cartan matrix file.
CartanMatrix resolve_cartan(const std::string& spec) {
  if (std::filesystem::exists(spec)) return CartanMatrix::load(spec);
  return CartanMatrix::preset(spec);
}

Word make_word(const std::string& cartan, const std::vector<int>& letters) {
  Word w{resolve_cartan(cartan), letters};
  w.validate();
  return w;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Moment graphs and quantum cohomology of Bott-Samelson varieties";

  m.def("moment_graph_json",
        [](const std::string& cartan, const std::vector<int>& letters) {
          return export_json(build_moment_graph(make_word(cartan, letters)));
        },
        py::arg("cartan"), py::arg("word"));

  m.def("moment_graph_dot",
        [](const std::string& cartan, const std::vector<int>& letters) {
          return export_dot(build_moment_graph(make_word(cartan, letters)));
        },
        py::arg("cartan"), py::arg("word"));

  m.def("cohomology_json",
        [](const std::string& cartan, const std::vector<int>& letters) {
          return cohomology_report(make_word(cartan, letters)).dump();
        },
        py::arg("cartan"), py::arg("word"));

  m.def("multiply_json",
        [](const std::string& cartan, const std::vector<int>& letters,
           const std::string& a, const std::string& b) {
          Word w = make_word(cartan, letters);
          CohClass p = multiply(w, CohClass::basis(SubwordIndex::from_string(a)),
                                CohClass::basis(SubwordIndex::from_string(b)));
          nlohmann::ordered_json out = nlohmann::ordered_json::object();
          for (const auto& [bits, c] : p.terms)
            out[SubwordIndex{bits, w.size()}.str()] = c;
          return out.dump();
        },
        py::arg("cartan"), py::arg("word"), py::arg("a"), py::arg("b"));

  m.def("eff_cone_json",
        [](const std::string& cartan, const std::vector<int>& letters) {
          return eff_cone_report(make_word(cartan, letters)).dump();
        },
        py::arg("cartan"), py::arg("word"));

  m.def("curve_neighborhood_json",
        [](const std::string& cartan, const std::vector<int>& letters,
           const std::vector<long long>& cls, const std::vector<std::string>& from) {
          Word w = make_word(cartan, letters);
          std::vector<SubwordIndex> pts;
          for (const auto& s : from) pts.push_back(SubwordIndex::from_string(s));
          return curve_nbhd_report(build_moment_graph(w), pts, cls).dump();
        },
        py::arg("cartan"), py::arg("word"), py::arg("cls"), py::arg("from_points"));

  m.def("qh_json",
        [](const std::string& cartan, const std::vector<int>& letters, long long y3) {
          return qh_report(make_word(cartan, letters), y3).dump();
        },
        py::arg("cartan"), py::arg("word"), py::arg("y3") = 1);

  m.def("conjecture_o_json",
        [](const std::string& cartan, const std::vector<int>& letters,
           double tolerance) {
          return conjecture_o_report(make_word(cartan, letters), tolerance).dump();
        },
        py::arg("cartan"), py::arg("word"), py::arg("tolerance") = 1e-10);
}
