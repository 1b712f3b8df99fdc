#pragma once

#include "bsqh/eff_cone.hpp"

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace bsqh {

/*
  Quantum cohomology pipeline for Bott-Samelson words: symbolic Chevalley
  matrices over the unknown Gromov-Witten invariants, the commutativity
  constraint solver, and the finalized multiplication ring.

  The path is certified for the word (1,2,1) over A2, where the unknown
  bookkeeping matches the canonical x/y/z symbol tables; other Fano words
  are accepted but run uncertified.
*/

// ----------------------------------------------------------------- symbolic

// Monomial in unknown symbols: sorted (symbol, exponent) pairs, exponents >= 1.
using Mono = std::vector<std::pair<int, int>>;

struct UPoly {
  std::map<Mono, Int> terms;

  static UPoly zero() { return {}; }
  static UPoly constant(Int c);
  static UPoly var(int symbol);
  bool is_zero() const { return terms.empty(); }
  bool is_constant() const;
  Int constant_value() const;  // requires is_constant
  UPoly operator+(const UPoly& o) const;
  UPoly operator-(const UPoly& o) const;
  UPoly operator*(const UPoly& o) const;
  UPoly scaled(Int s) const;
  UPoly substituted(int symbol, const UPoly& value) const;
  std::set<int> symbols() const;
  int degree_in(int symbol) const;
  bool operator==(const UPoly&) const = default;
  bool operator<(const UPoly& o) const { return terms < o.terms; }
  std::string str(const std::vector<std::string>& names) const;
};

// Element of Z[unknowns][q^eff]: q-monomials are keyed by the curve class
// itself, which is canonical even when cone generators are dependent.
struct QPoly {
  std::map<CurveClass, UPoly> terms;

  QPoly& add(const CurveClass& cls, const UPoly& u);
  QPoly operator+(const QPoly& o) const;
  QPoly operator-(const QPoly& o) const;
  QPoly operator*(const QPoly& o) const;
  bool is_zero() const;
  bool operator==(const QPoly&) const = default;
};

// ------------------------------------------------------------ unknown table

// Key of a reduced Gromov-Witten invariant: a one-point <[Z_z]>_beta or a
// two-point <sigma_s, [Z_z]>_beta.
struct GWKey {
  bool two_point = false;
  SubwordIndex sigma;  // meaningful when two_point
  SubwordIndex zvar;
  CurveClass beta;

  bool operator==(const GWKey&) const = default;
  bool operator<(const GWKey& o) const;
  std::string str() const;
};

struct UnknownTable {
  struct Entry {
    GWKey key;
    std::optional<Int> known;  // seeded value when set, otherwise a symbol
    int symbol = -1;           // valid when !known
    std::string name;
    std::string provenance;
  };

  Word word;
  EffectiveCone cone;
  std::vector<Entry> entries;        // allocation order; symbols then seeds mix
  std::map<GWKey, int> index;        // key -> position in entries
  std::vector<std::string> symbol_names;  // by symbol id

  const Entry* find(const GWKey& k) const;
  int unknown_count() const;
};

// n + deg q^beta - 2
Int expected_dim(const Word& w, const CurveClass& beta);

// Nonzero effective classes beta with deg q^beta <= ell + 1 and nonzero
// pairing with sigma_(j), fundamental-class exclusions applied.  For the
// certified word the result follows the canonical bookkeeping order.
std::vector<CurveClass> admissible_classes(const Word& w, const EffectiveCone& cone,
                                           int j, int ell);

bool is_certified_threefold(const Word& w);

// Seeded invariants for the certified word: the three one-point values of
// the theta-fiber class, the fiber-class point count, and the two-point
// vanishings certified by the curve-neighborhood filter.
UnknownTable seed_known_invariants(const Word& w, const EffectiveCone& cone);

// Seeds plus one symbol per remaining reduced invariant across the divisor
// products; exactly 111 symbols for the certified word.
UnknownTable enumerate_unknowns(const Word& w, const EffectiveCone& cone);

// --------------------------------------------------------- Chevalley matrices

std::vector<SubwordIndex> sigma_basis(const Word& w);  // graded, support-lex

struct ChevalleyMatrix {
  int j = 0;                          // divisor index
  std::vector<SubwordIndex> basis;
  std::vector<std::vector<QPoly>> entry;  // entry[row][col]
};

ChevalleyMatrix build_chevalley(const Word& w, const UnknownTable& table, int j);

// ------------------------------------------------------------------- solver

struct SolveResult {
  std::map<int, UPoly> assignment;      // symbol -> value over free symbols
  std::vector<int> free_symbols;
  std::vector<std::string> branched_equations;
  std::size_t commutator_entries = 0;   // 3 * dim^2
  std::size_t coefficient_equations = 0;
};

// Imposes pairwise commutativity of the given matrices and propagates.
SolveResult solve_commutators(const std::vector<ChevalleyMatrix>& ms,
                              const UnknownTable& table);

// Exposed for direct testing of the propagation/branching machinery.
SolveResult solve_system(std::vector<UPoly> equations,
                         const std::vector<std::string>& names);

// ------------------------------------------------------------ finalized ring

using IntQPoly = std::map<CurveClass, Int>;

struct IntMatrix {
  std::vector<SubwordIndex> basis;
  std::vector<std::vector<IntQPoly>> entry;
  bool operator==(const IntMatrix&) const = default;
};

// Specialize the solved family at the given value of the free parameter.
// For the certified word the result is checked against the reference
// structure constants and a mismatch is an error.
std::vector<IntMatrix> finalize_matrices(const std::vector<ChevalleyMatrix>& ms,
                                         const UnknownTable& table,
                                         const SolveResult& sol, Int y3 = 1);

// Reference structure constants for the certified threefold (divisor j at
// the given free-parameter value).
IntMatrix reference_chevalley(const Word& w, int j, Int y3);

struct QhRing {
  Word word;
  EffectiveCone cone;
  std::vector<SubwordIndex> basis;
  std::vector<IntMatrix> divisor;          // multiplication by sigma_(j)
  std::vector<IntMatrix> basis_operator;   // multiplication by sigma_eps
};

QhRing make_qh_ring(const Word& w, const EffectiveCone& cone,
                    std::vector<IntMatrix> divisor_matrices);

using QhElement = std::vector<IntQPoly>;  // coordinates over the sigma basis

QhElement qh_basis_element(const QhRing& ring, const SubwordIndex& eps);
QhElement quantum_product(const QhRing& ring, const QhElement& a, const QhElement& b);
std::string qh_element_str(const QhRing& ring, const QhElement& x);

struct RingVerification {
  bool commutative = false;
  bool associative = false;
  bool giambelli = false;
  bool presentation = false;
  bool classical_limit = false;
  std::size_t pairs_checked = 0;
  std::size_t triples_checked = 0;
};

// Exhaustive checks over the basis; throws on the first failed identity.
RingVerification verify_ring(const QhRing& ring);

// Giambelli expansion of each basis class in the divisor generators, as a
// printable formula list.
std::vector<std::string> giambelli_formulas(const QhRing& ring);
// The quantized square relations sigma_(j)*sigma_(j) = ... as formulas.
std::vector<std::string> presentation_relations(const QhRing& ring);

}  // namespace bsqh
