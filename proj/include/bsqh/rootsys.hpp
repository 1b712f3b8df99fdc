#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace bsqh {

using Int = long long;

/*
  Exact root-system and Weyl-group arithmetic in the simple-root basis.

  All indices into words and simple roots are 1-based, matching the usual
  combinatorial conventions.  The Cartan matrix is stored with
  entry(i,j) = (alpha_j, alpha_i^vee); the pairing helpers below hide the
  orientation.
*/

struct CartanMatrix {
  int rank = 0;
  std::vector<Int> entries;  // row-major rank x rank

  Int entry(int i, int j) const;  // 1-based
  void validate() const;
  bool operator==(const CartanMatrix&) const = default;

  // Presets: A<n>, B<n>, C<n>, D<n>, E6, E7, E8, F4, G2.
  static CartanMatrix preset(const std::string& name);
  // Plain-text format: a rank line, then rank rows of integers.
  static CartanMatrix read(std::istream& in);
  static CartanMatrix load(const std::string& path);
  std::string to_text() const;
};

struct RootVector {
  std::vector<Int> coords;  // coefficients in the simple-root basis

  bool operator==(const RootVector&) const = default;
  bool operator<(const RootVector& o) const { return coords < o.coords; }
  bool is_zero() const;
  // Roots have uniform coordinate sign, so the first nonzero coordinate
  // decides positivity.
  bool is_positive() const;
  RootVector negated() const;
  RootVector normalized_positive() const;
  std::string str() const;
};

struct WeylElement {
  int rank = 0;
  std::vector<Int> m;  // row-major matrix acting on the root lattice

  static WeylElement identity(int rank);
  Int at(int r, int c) const { return m[static_cast<size_t>(r) * rank + c]; }
  Int& at(int r, int c) { return m[static_cast<size_t>(r) * rank + c]; }
  WeylElement operator*(const WeylElement& o) const;
  RootVector apply(const RootVector& v) const;
  WeylElement inverse() const;
  bool is_identity() const;
  bool operator==(const WeylElement&) const = default;
  bool operator<(const WeylElement& o) const { return m < o.m; }
};

struct Word {
  CartanMatrix cartan;
  std::vector<int> letters;  // values in 1..rank

  int size() const { return static_cast<int>(letters.size()); }
  int letter(int k) const;  // 1-based
  void validate() const;
  bool operator==(const Word&) const = default;
};

/*
  Binary index of a subword (equivalently of a T-fixed point).  Bit k of the
  index, 1-based, is stored at position k-1; the printed form lists bit 1
  first, so "110" has ones at positions 1 and 2.
*/
struct SubwordIndex {
  std::uint32_t bits = 0;
  int n = 0;

  static SubwordIndex zero(int n);
  static SubwordIndex from_string(const std::string& s);
  std::string str() const;
  bool bit(int k) const;              // 1-based
  SubwordIndex with_bit(int k) const;
  SubwordIndex appended(bool b) const;
  SubwordIndex prefix() const;        // drop the last position
  int length() const;                 // number of ones
  std::vector<int> support() const;   // 1-based positions of ones
  bool transverse(const SubwordIndex& o) const;
  bool operator==(const SubwordIndex&) const = default;
  bool operator<(const SubwordIndex& o) const;  // bitstring-lexicographic
};

Int cartan_pairing(const Word& w, int i, int j);  // (alpha_i, alpha_j^vee)
Int root_pairing(const Word& w, const RootVector& gamma, int j);
RootVector simple_root(const Word& w, int j);
RootVector reflect(const Word& w, int j, const RootVector& v);
WeylElement simple_reflection(const Word& w, int j);

// w_k(eps): ordered product of the reflections s_{a_i} over i <= k with
// eps_i = 1; the empty product is the identity.
WeylElement weyl_prefix(const Word& w, const SubwordIndex& eps, int k);
WeylElement weyl_element(const Word& w, const SubwordIndex& eps);
// eps(alpha_k) = w_k(eps) . alpha_{a_k}
RootVector root_at(const Word& w, const SubwordIndex& eps, int k);

// Closure of the simple roots under all simple reflections, positive
// representatives only, together with the reflection each root induces.
struct RootSystem {
  std::vector<RootVector> positive;
  std::vector<WeylElement> reflections;  // reflections[i] = s_{positive[i]}
};
RootSystem root_system(const CartanMatrix& cartan, std::size_t bound = 4096);
std::vector<RootVector> positive_roots(const Word& w);

// The unique positive root gamma with s_gamma = u, when u is a reflection.
std::optional<RootVector> reflection_root(const Word& w, const WeylElement& u);
std::optional<RootVector> reflection_root(const RootSystem& rs, const WeylElement& u);

}  // namespace bsqh
