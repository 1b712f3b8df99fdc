#include "bsqh/rootsys.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace bsqh {

// ---------------------------------------------------------------- CartanMatrix

Int CartanMatrix::entry(int i, int j) const {
  if (i < 1 || i > rank || j < 1 || j > rank)
    throw std::invalid_argument("Cartan index out of range");
  return entries[static_cast<size_t>(i - 1) * rank + (j - 1)];
}

void CartanMatrix::validate() const {
  if (rank <= 0) throw std::invalid_argument("Cartan rank must be positive");
  if (entries.size() != static_cast<size_t>(rank) * rank)
    throw std::invalid_argument("Cartan entry count does not match rank");
  for (int i = 1; i <= rank; ++i) {
    for (int j = 1; j <= rank; ++j) {
      Int a = entry(i, j);
      if (i == j && a != 2)
        throw std::invalid_argument("Cartan diagonal entry is not 2");
      if (i != j && a > 0)
        throw std::invalid_argument("Cartan off-diagonal entry is positive");
      if (i != j && ((a == 0) != (entry(j, i) == 0)))
        throw std::invalid_argument("Cartan zero pattern is not symmetric");
    }
  }
}

namespace {

CartanMatrix make_cartan(int rank) {
  CartanMatrix c;
  c.rank = rank;
  c.entries.assign(static_cast<size_t>(rank) * rank, 0);
  for (int i = 0; i < rank; ++i) c.entries[static_cast<size_t>(i) * rank + i] = 2;
  return c;
}

void set_pair(CartanMatrix& c, int i, int j, Int a_ij, Int a_ji) {
  // a_ij = (alpha_j, alpha_i^vee) stored at entry(i,j)
  c.entries[static_cast<size_t>(i - 1) * c.rank + (j - 1)] = a_ij;
  c.entries[static_cast<size_t>(j - 1) * c.rank + (i - 1)] = a_ji;
}

void chain(CartanMatrix& c, int i, int j) { set_pair(c, i, j, -1, -1); }

}  // namespace

CartanMatrix CartanMatrix::preset(const std::string& name) {
  if (name.size() < 2) throw std::invalid_argument("unknown Cartan preset: " + name);
  char family = static_cast<char>(std::toupper(name[0]));
  int rank = 0;
  try {
    rank = std::stoi(name.substr(1));
  } catch (...) {
    throw std::invalid_argument("unknown Cartan preset: " + name);
  }
  auto need = [&](bool ok) {
    if (!ok) throw std::invalid_argument("unknown Cartan preset: " + name);
  };
  CartanMatrix c;
  switch (family) {
    case 'A':
      need(rank >= 1);
      c = make_cartan(rank);
      for (int i = 1; i < rank; ++i) chain(c, i, i + 1);
      break;
    case 'B':  // alpha_rank is the short root
      need(rank >= 2);
      c = make_cartan(rank);
      for (int i = 1; i + 1 < rank; ++i) chain(c, i, i + 1);
      set_pair(c, rank - 1, rank, -1, -2);
      break;
    case 'C':  // alpha_rank is the long root
      need(rank >= 2);
      c = make_cartan(rank);
      for (int i = 1; i + 1 < rank; ++i) chain(c, i, i + 1);
      set_pair(c, rank - 1, rank, -2, -1);
      break;
    case 'D':
      need(rank >= 3);
      c = make_cartan(rank);
      for (int i = 1; i + 2 < rank; ++i) chain(c, i, i + 1);
      chain(c, rank - 2, rank - 1);
      chain(c, rank - 2, rank);
      break;
    case 'E':
      need(rank >= 6 && rank <= 8);
      c = make_cartan(rank);
      // Bourbaki numbering: node 2 hangs off node 4 of the chain 1-3-4-5-...
      chain(c, 1, 3);
      chain(c, 3, 4);
      chain(c, 2, 4);
      for (int i = 4; i < rank; ++i) chain(c, i, i + 1);
      break;
    case 'F':
      need(rank == 4);
      c = make_cartan(4);
      chain(c, 1, 2);
      set_pair(c, 2, 3, -1, -2);
      chain(c, 3, 4);
      break;
    case 'G':
      need(rank == 2);
      c = make_cartan(2);
      // alpha_1 short, alpha_2 long: (alpha_1,alpha_2^vee) = -1,
      // (alpha_2,alpha_1^vee) = -3.
      set_pair(c, 1, 2, -3, -1);
      break;
    default:
      need(false);
  }
  c.validate();
  return c;
}

CartanMatrix CartanMatrix::read(std::istream& in) {
  CartanMatrix c;
  if (!(in >> c.rank)) throw std::invalid_argument("Cartan file: missing rank line");
  if (c.rank <= 0 || c.rank > 32)
    throw std::invalid_argument("Cartan file: rank out of range");
  c.entries.resize(static_cast<size_t>(c.rank) * c.rank);
  for (auto& e : c.entries)
    if (!(in >> e)) throw std::invalid_argument("Cartan file: too few entries");
  c.validate();
  return c;
}

CartanMatrix CartanMatrix::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open Cartan file: " + path);
  return read(in);
}

std::string CartanMatrix::to_text() const {
  std::ostringstream out;
  out << rank << "\n";
  for (int i = 1; i <= rank; ++i) {
    for (int j = 1; j <= rank; ++j) out << (j > 1 ? " " : "") << entry(i, j);
    out << "\n";
  }
  return out.str();
}

// ------------------------------------------------------------------ RootVector

bool RootVector::is_zero() const {
  return std::all_of(coords.begin(), coords.end(), [](Int c) { return c == 0; });
}

bool RootVector::is_positive() const {
  for (Int c : coords)
    if (c != 0) return c > 0;
  return false;
}

RootVector RootVector::negated() const {
  RootVector r = *this;
  for (Int& c : r.coords) c = -c;
  return r;
}

RootVector RootVector::normalized_positive() const {
  return is_positive() ? *this : negated();
}

std::string RootVector::str() const {
  std::ostringstream out;
  out << "(";
  for (size_t i = 0; i < coords.size(); ++i) out << (i ? "," : "") << coords[i];
  out << ")";
  return out.str();
}

// ----------------------------------------------------------------- WeylElement

WeylElement WeylElement::identity(int rank) {
  WeylElement w;
  w.rank = rank;
  w.m.assign(static_cast<size_t>(rank) * rank, 0);
  for (int i = 0; i < rank; ++i) w.at(i, i) = 1;
  return w;
}

WeylElement WeylElement::operator*(const WeylElement& o) const {
  if (rank != o.rank) throw std::invalid_argument("Weyl element rank mismatch");
  WeylElement r;
  r.rank = rank;
  r.m.assign(m.size(), 0);
  for (int i = 0; i < rank; ++i)
    for (int k = 0; k < rank; ++k) {
      Int a = at(i, k);
      if (a == 0) continue;
      for (int j = 0; j < rank; ++j) r.at(i, j) += a * o.at(k, j);
    }
  return r;
}

RootVector WeylElement::apply(const RootVector& v) const {
  if (static_cast<int>(v.coords.size()) != rank)
    throw std::invalid_argument("root vector rank mismatch");
  RootVector r;
  r.coords.assign(rank, 0);
  for (int i = 0; i < rank; ++i)
    for (int j = 0; j < rank; ++j) r.coords[i] += at(i, j) * v.coords[j];
  return r;
}

namespace {

// Determinant by fraction-free elimination; matrices here are tiny.
Int int_det(std::vector<Int> a, int n) {
  Int prev = 1;
  Int sign = 1;
  for (int k = 0; k < n - 1; ++k) {
    if (a[static_cast<size_t>(k) * n + k] == 0) {
      int p = -1;
      for (int r = k + 1; r < n; ++r)
        if (a[static_cast<size_t>(r) * n + k] != 0) { p = r; break; }
      if (p < 0) return 0;
      for (int j = 0; j < n; ++j)
        std::swap(a[static_cast<size_t>(k) * n + j], a[static_cast<size_t>(p) * n + j]);
      sign = -sign;
    }
    for (int i = k + 1; i < n; ++i)
      for (int j = k + 1; j < n; ++j) {
        Int num = a[static_cast<size_t>(i) * n + j] * a[static_cast<size_t>(k) * n + k] -
                  a[static_cast<size_t>(i) * n + k] * a[static_cast<size_t>(k) * n + j];
        a[static_cast<size_t>(i) * n + j] = num / prev;
      }
    prev = a[static_cast<size_t>(k) * n + k];
  }
  return sign * a[static_cast<size_t>(n - 1) * n + (n - 1)];
}

}  // namespace

WeylElement WeylElement::inverse() const {
  Int d = int_det(m, rank);
  if (d != 1 && d != -1)
    throw std::domain_error("matrix is not invertible over the integers");
  WeylElement inv;
  inv.rank = rank;
  inv.m.assign(m.size(), 0);
  // Adjugate via minors; rank is at most a Lie-type rank, so this is cheap.
  for (int i = 0; i < rank; ++i)
    for (int j = 0; j < rank; ++j) {
      std::vector<Int> minor;
      minor.reserve(static_cast<size_t>(rank - 1) * (rank - 1));
      for (int r = 0; r < rank; ++r) {
        if (r == j) continue;
        for (int c = 0; c < rank; ++c) {
          if (c == i) continue;
          minor.push_back(at(r, c));
        }
      }
      Int cof = (rank == 1) ? 1 : int_det(minor, rank - 1);
      if ((i + j) % 2 != 0) cof = -cof;
      inv.at(i, j) = cof * d;  // d = 1/det since det = +-1
    }
  return inv;
}

bool WeylElement::is_identity() const { return *this == identity(rank); }

// ------------------------------------------------------------------------ Word

int Word::letter(int k) const {
  if (k < 1 || k > size()) throw std::invalid_argument("word index out of range");
  return letters[static_cast<size_t>(k - 1)];
}

void Word::validate() const {
  cartan.validate();
  for (int a : letters)
    if (a < 1 || a > cartan.rank)
      throw std::invalid_argument("word letter out of range for the Cartan rank");
}

// ---------------------------------------------------------------- SubwordIndex

SubwordIndex SubwordIndex::zero(int n) {
  if (n < 0 || n > 31) throw std::invalid_argument("subword length out of range");
  return SubwordIndex{0, n};
}

SubwordIndex SubwordIndex::from_string(const std::string& s) {
  SubwordIndex e = zero(static_cast<int>(s.size()));
  for (int k = 1; k <= e.n; ++k) {
    char c = s[static_cast<size_t>(k - 1)];
    if (c == '1')
      e.bits |= (1u << (k - 1));
    else if (c != '0')
      throw std::invalid_argument("subword index must consist of 0s and 1s");
  }
  return e;
}

std::string SubwordIndex::str() const {
  std::string s(static_cast<size_t>(n), '0');
  for (int k = 1; k <= n; ++k)
    if (bit(k)) s[static_cast<size_t>(k - 1)] = '1';
  return s;
}

bool SubwordIndex::bit(int k) const {
  if (k < 1 || k > n) throw std::invalid_argument("subword bit index out of range");
  return (bits >> (k - 1)) & 1u;
}

SubwordIndex SubwordIndex::with_bit(int k) const {
  if (k < 1 || k > n) throw std::invalid_argument("subword bit index out of range");
  return SubwordIndex{bits | (1u << (k - 1)), n};
}

SubwordIndex SubwordIndex::appended(bool b) const {
  if (n >= 31) throw std::invalid_argument("subword too long");
  return SubwordIndex{bits | (b ? (1u << n) : 0u), n + 1};
}

SubwordIndex SubwordIndex::prefix() const {
  if (n == 0) throw std::invalid_argument("empty subword has no prefix");
  return SubwordIndex{bits & ~(1u << (n - 1)), n - 1};
}

int SubwordIndex::length() const { return __builtin_popcount(bits); }

std::vector<int> SubwordIndex::support() const {
  std::vector<int> s;
  for (int k = 1; k <= n; ++k)
    if (bit(k)) s.push_back(k);
  return s;
}

bool SubwordIndex::transverse(const SubwordIndex& o) const {
  return (bits & o.bits) == 0;
}

bool SubwordIndex::operator<(const SubwordIndex& o) const {
  int common = std::min(n, o.n);
  for (int k = 1; k <= common; ++k) {
    bool a = bit(k), b = o.bit(k);
    if (a != b) return b;  // '0' < '1'
  }
  return n < o.n;
}

// ------------------------------------------------------------------ operations

Int cartan_pairing(const Word& w, int i, int j) {
  // entry(i,j) stores (alpha_j, alpha_i^vee), so the pairing flips indices.
  return w.cartan.entry(j, i);
}

Int root_pairing(const Word& w, const RootVector& gamma, int j) {
  Int p = 0;
  for (int i = 1; i <= w.cartan.rank; ++i)
    p += gamma.coords[static_cast<size_t>(i - 1)] * cartan_pairing(w, i, j);
  return p;
}

RootVector simple_root(const Word& w, int j) {
  if (j < 1 || j > w.cartan.rank)
    throw std::invalid_argument("simple root index out of range");
  RootVector r;
  r.coords.assign(w.cartan.rank, 0);
  r.coords[static_cast<size_t>(j - 1)] = 1;
  return r;
}

RootVector reflect(const Word& w, int j, const RootVector& v) {
  // s_j(v) = v - (v, alpha_j^vee) alpha_j
  Int p = root_pairing(w, v, j);
  RootVector r = v;
  r.coords[static_cast<size_t>(j - 1)] -= p;
  return r;
}

WeylElement simple_reflection(const Word& w, int j) {
  if (j < 1 || j > w.cartan.rank)
    throw std::invalid_argument("simple root index out of range");
  WeylElement s = WeylElement::identity(w.cartan.rank);
  for (int i = 1; i <= w.cartan.rank; ++i)
    s.at(j - 1, i - 1) -= cartan_pairing(w, i, j);
  return s;
}

WeylElement weyl_prefix(const Word& w, const SubwordIndex& eps, int k) {
  if (eps.n != w.size()) throw std::invalid_argument("subword length mismatch");
  if (k < 0 || k > w.size()) throw std::invalid_argument("prefix bound out of range");
  WeylElement prod = WeylElement::identity(w.cartan.rank);
  for (int i = 1; i <= k; ++i)
    if (eps.bit(i)) prod = prod * simple_reflection(w, w.letter(i));
  return prod;
}

WeylElement weyl_element(const Word& w, const SubwordIndex& eps) {
  return weyl_prefix(w, eps, w.size());
}

RootVector root_at(const Word& w, const SubwordIndex& eps, int k) {
  if (k < 1 || k > w.size()) throw std::invalid_argument("letter index out of range");
  return weyl_prefix(w, eps, k).apply(simple_root(w, w.letter(k)));
}

RootSystem root_system(const CartanMatrix& cartan, std::size_t bound) {
  cartan.validate();
  Word ambient{cartan, {}};
  RootSystem rs;
  std::set<RootVector> seen;
  // BFS closure; each discovered root carries the matrix of its reflection.
  std::vector<std::pair<RootVector, WeylElement>> queue;
  for (int j = 1; j <= cartan.rank; ++j) {
    RootVector a = simple_root(ambient, j);
    seen.insert(a);
    queue.emplace_back(a, simple_reflection(ambient, j));
  }
  for (size_t head = 0; head < queue.size(); ++head) {
    auto [root, refl] = queue[head];
    for (int j = 1; j <= cartan.rank; ++j) {
      RootVector img = reflect(ambient, j, root).normalized_positive();
      if (seen.count(img)) continue;
      if (seen.size() >= bound)
        throw std::domain_error(
            "root closure exceeded bound; Cartan matrix is not of finite type");
      seen.insert(img);
      WeylElement s = simple_reflection(ambient, j);
      queue.emplace_back(img, s * refl * s);
    }
  }
  std::sort(queue.begin(), queue.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  for (auto& [root, refl] : queue) {
    rs.positive.push_back(root);
    rs.reflections.push_back(refl);
  }
  return rs;
}

std::vector<RootVector> positive_roots(const Word& w) {
  return root_system(w.cartan).positive;
}

std::optional<RootVector> reflection_root(const RootSystem& rs, const WeylElement& u) {
  for (size_t i = 0; i < rs.positive.size(); ++i)
    if (rs.reflections[i] == u) return rs.positive[i];
  return std::nullopt;
}

std::optional<RootVector> reflection_root(const Word& w, const WeylElement& u) {
  return reflection_root(root_system(w.cartan), u);
}

}  // namespace bsqh
