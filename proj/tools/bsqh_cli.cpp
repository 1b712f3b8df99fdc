#include "bsqh/reports.hpp"

#include "CLI11.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

using namespace bsqh;

struct CommonOpts {
  std::string type;
  std::string cartan_file;
  std::string word_arg;
  std::string format = "text";
  std::string out_path;
};

void add_common(CLI::App* cmd, CommonOpts& o, bool with_dot = false) {
  cmd->add_option("--type", o.type, "Cartan preset (A2, B3, D4, E6, F4, G2, ...)");
  cmd->add_option("--cartan-file", o.cartan_file,
                  "Cartan matrix file (rank line, then rank rows)");
  cmd->add_option("--word", o.word_arg, "comma separated letters, e.g. 1,2,1")
      ->required();
  cmd->add_option("--format", o.format, "output format")
      ->check(CLI::IsMember(with_dot
                                ? std::vector<std::string>{"text", "json", "dot"}
                                : std::vector<std::string>{"text", "json"}));
  cmd->add_option("--out", o.out_path, "write output to a file instead of stdout");
}

std::vector<int> parse_int_list(const std::string& s) {
  std::vector<int> out;
  std::string cur;
  for (char ch : s + ",") {
    if (ch == ',') {
      if (cur.empty()) throw std::invalid_argument("empty entry in list: " + s);
      out.push_back(std::stoi(cur));
      cur.clear();
    } else {
      cur += ch;
    }
  }
  return out;
}

CartanMatrix resolve_cartan(const CommonOpts& o) {
  if (!o.type.empty() && !o.cartan_file.empty())
    throw std::invalid_argument("--type and --cartan-file are mutually exclusive");
  if (!o.cartan_file.empty()) {
    std::string path = o.cartan_file;
    if (!std::filesystem::exists(path)) {
      const char* dir = std::getenv("BSQH_CARTAN_DIR");
      if (dir && std::filesystem::exists(std::filesystem::path(dir) / path))
        path = (std::filesystem::path(dir) / path).string();
    }
    return CartanMatrix::load(path);
  }
  return CartanMatrix::preset(o.type.empty() ? "A2" : o.type);
}

Word resolve_word(const CommonOpts& o) {
  Word w{resolve_cartan(o), parse_int_list(o.word_arg)};
  w.validate();
  return w;
}

void emit(const CommonOpts& o, const std::string& body) {
  if (o.out_path.empty()) {
    std::cout << body;
  } else {
    std::ofstream out(o.out_path);
    if (!out) throw std::runtime_error("cannot open output file: " + o.out_path);
    out << body;
  }
}

int dispatch(int argc, char** argv) {
  CLI::App app{"Exact moment-graph and quantum-cohomology toolkit for "
               "Bott-Samelson varieties"};
  app.require_subcommand(1);

  CommonOpts mg_opts;
  CLI::App* mg = app.add_subcommand("moment-graph", "build the moment graph");
  add_common(mg, mg_opts, /*with_dot=*/true);

  CommonOpts coh_opts;
  CLI::App* coh = app.add_subcommand("cohomology", "classical product tables");
  add_common(coh, coh_opts);

  CommonOpts cone_opts;
  CLI::App* cone = app.add_subcommand("eff-cone", "effective cone generators");
  add_common(cone, cone_opts);

  CommonOpts nbhd_opts;
  std::string nbhd_class, nbhd_from;
  CLI::App* nbhd = app.add_subcommand("curve-nbhd", "combinatorial curve neighborhood");
  add_common(nbhd, nbhd_opts);
  nbhd->add_option("--class", nbhd_class, "curve class, e.g. 1,0,-1")->required();
  nbhd->add_option("--from", nbhd_from, "comma separated fixed points, e.g. 000,100")
      ->required();

  CommonOpts qh_opts;
  long long y3 = 1;
  CLI::App* qh = app.add_subcommand("qh", "quantum cohomology constraint pipeline");
  add_common(qh, qh_opts);
  qh->add_flag("--solve", "run the constraint solver (always on; kept for scripts)");
  qh->add_option("--y3", y3, "value of the free parameter (default 1)");
  qh->add_option("--report", qh_opts.format, "alias of --format")
      ->check(CLI::IsMember(std::vector<std::string>{"text", "json"}));

  CommonOpts co_opts;
  double tolerance = 1e-10;
  CLI::App* co = app.add_subcommand("conjecture-o", "spectral check of c1_hat");
  add_common(co, co_opts);
  co->add_option("--tolerance", tolerance, "root-finding tolerance (default 1e-10)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (mg->parsed()) {
      Word w = resolve_word(mg_opts);
      MomentGraph g = build_moment_graph(w);
      if (mg_opts.format == "json")
        emit(mg_opts, export_json(g));
      else if (mg_opts.format == "dot")
        emit(mg_opts, export_dot(g));
      else
        emit(mg_opts, moment_graph_text(g));
    } else if (coh->parsed()) {
      Word w = resolve_word(coh_opts);
      emit(coh_opts, coh_opts.format == "json" ? cohomology_report(w).dump(2) + "\n"
                                               : cohomology_text(w));
    } else if (cone->parsed()) {
      Word w = resolve_word(cone_opts);
      emit(cone_opts, cone_opts.format == "json" ? eff_cone_report(w).dump(2) + "\n"
                                                 : eff_cone_text(w));
    } else if (nbhd->parsed()) {
      Word w = resolve_word(nbhd_opts);
      std::vector<Int> cls64;
      for (int v : parse_int_list(nbhd_class)) cls64.push_back(v);
      if (cls64.size() != static_cast<size_t>(w.size()))
        throw std::invalid_argument("--class length must equal the word length");
      std::vector<SubwordIndex> from;
      std::string cur;
      for (char ch : nbhd_from + ",") {
        if (ch == ',') {
          if (!cur.empty()) from.push_back(SubwordIndex::from_string(cur));
          cur.clear();
        } else {
          cur += ch;
        }
      }
      for (const auto& s : from)
        if (s.n != w.size())
          throw std::invalid_argument("--from entries must match the word length");
      MomentGraph g = build_moment_graph(w);
      emit(nbhd_opts, nbhd_opts.format == "json"
                          ? curve_nbhd_report(g, from, cls64).dump(2) + "\n"
                          : curve_nbhd_text(g, from, cls64));
    } else if (qh->parsed()) {
      Word w = resolve_word(qh_opts);
      emit(qh_opts, qh_opts.format == "json" ? qh_report(w, y3).dump(2) + "\n"
                                             : qh_text(w, y3));
    } else if (co->parsed()) {
      Word w = resolve_word(co_opts);
      emit(co_opts, co_opts.format == "json"
                        ? conjecture_o_report(w, tolerance).dump(2) + "\n"
                        : conjecture_o_text(w, tolerance));
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) { return dispatch(argc, argv); }
