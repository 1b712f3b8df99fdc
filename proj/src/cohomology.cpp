#include "bsqh/cohomology.hpp"

#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace bsqh {

CohClass CohClass::basis(const SubwordIndex& eps) {
  CohClass c;
  c.terms[eps.bits] = 1;
  return c;
}

CohClass CohClass::constant(Int c, int /*n*/) {
  CohClass r;
  if (c != 0) r.terms[0] = c;
  return r;
}

CohClass& CohClass::add_term(std::uint32_t bits, Int c) {
  if (c == 0) return *this;
  auto it = terms.find(bits);
  if (it == terms.end()) {
    terms[bits] = c;
  } else {
    it->second += c;
    if (it->second == 0) terms.erase(it);
  }
  return *this;
}

std::string CohClass::str(int n) const {
  if (terms.empty()) return "0";
  std::ostringstream out;
  bool first = true;
  for (const auto& [bits, c] : terms) {
    if (!first) out << (c >= 0 ? " + " : " - ");
    else if (c < 0) out << "-";
    Int a = c < 0 ? -c : c;
    if (a != 1 || bits == 0) out << a;
    if (bits != 0) {
      if (a != 1) out << "*";
      out << "s" << SubwordIndex{bits, n}.str();
    }
    first = false;
  }
  return out.str();
}

CohClass coh_add(const CohClass& a, const CohClass& b) {
  CohClass r = a;
  for (const auto& [bits, c] : b.terms) r.add_term(bits, c);
  return r;
}

CohClass coh_scale(const CohClass& a, Int s) {
  CohClass r;
  if (s == 0) return r;
  for (const auto& [bits, c] : a.terms) r.terms[bits] = c * s;
  return r;
}

namespace detail {

std::vector<std::pair<Int, std::vector<int>>> rewrite_square(
    const Word& w, const std::vector<int>& expo) {
  int j = 0;
  for (int i = static_cast<int>(expo.size()); i >= 1; --i)
    if (expo[static_cast<size_t>(i - 1)] >= 2) { j = i; break; }
  if (j == 0) throw std::invalid_argument("monomial is already square-free");
  // sigma_(j)^2 = sum_{i<j} -(alpha_{a_i}, alpha_{a_j}^vee) sigma_(i) sigma_(j)
  std::vector<std::pair<Int, std::vector<int>>> out;
  for (int i = 1; i < j; ++i) {
    Int coeff = -cartan_pairing(w, w.letter(i), w.letter(j));
    if (coeff == 0) continue;
    std::vector<int> e = expo;
    e[static_cast<size_t>(j - 1)] -= 1;
    e[static_cast<size_t>(i - 1)] += 1;
    out.emplace_back(coeff, std::move(e));
  }
  return out;
}

bool right_to_left_lex_less(const std::vector<int>& a, const std::vector<int>& b) {
  for (size_t i = a.size(); i-- > 0;) {
    if (a[i] != b[i]) return a[i] < b[i];
  }
  return false;
}

}  // namespace detail

namespace {

// Reduce an exponent monomial to the square-free sigma basis.
CohClass reduce_monomial(const Word& w, const std::vector<int>& expo, Int coeff) {
  CohClass out;
  std::map<std::vector<int>, Int> pending;
  pending[expo] = coeff;
  while (!pending.empty()) {
    auto it = pending.begin();
    std::vector<int> e = it->first;
    Int c = it->second;
    pending.erase(it);
    if (c == 0) continue;
    bool squarefree = true;
    for (int x : e)
      if (x >= 2) { squarefree = false; break; }
    if (squarefree) {
      std::uint32_t bits = 0;
      for (size_t i = 0; i < e.size(); ++i)
        if (e[i]) bits |= (1u << i);
      out.add_term(bits, c);
      continue;
    }
    for (auto& [rc, re] : detail::rewrite_square(w, e)) pending[re] += c * rc;
  }
  return out;
}

}  // namespace

CohClass multiply(const Word& w, const CohClass& a, const CohClass& b) {
  int n = w.size();
  CohClass out;
  for (const auto& [ba, ca] : a.terms) {
    if (ba >= (1u << n)) throw std::invalid_argument("class does not fit the word");
    for (const auto& [bb, cb] : b.terms) {
      if (bb >= (1u << n)) throw std::invalid_argument("class does not fit the word");
      if ((ba & bb) == 0) {
        out.add_term(ba | bb, ca * cb);  // transverse supports multiply freely
        continue;
      }
      std::vector<int> expo(static_cast<size_t>(n), 0);
      for (int i = 0; i < n; ++i)
        expo[static_cast<size_t>(i)] =
            static_cast<int>((ba >> i) & 1u) + static_cast<int>((bb >> i) & 1u);
      out = coh_add(out, reduce_monomial(w, expo, ca * cb));
    }
  }
  return out;
}

Int integrate(const Word& w, const CohClass& a) {
  std::uint32_t point = (w.size() == 0) ? 0u : ((1u << w.size()) - 1u);
  auto it = a.terms.find(point);
  return it == a.terms.end() ? 0 : it->second;
}

Int pair_subvariety(const Word& w, const CohClass& a, const SubwordIndex& eps) {
  if (eps.n != w.size()) throw std::invalid_argument("subword length mismatch");
  auto it = a.terms.find(eps.bits);
  return it == a.terms.end() ? 0 : it->second;
}

Int pair_curve(const Word& w, int j, const CurveClass& beta) {
  if (j < 1 || j > w.size()) throw std::invalid_argument("generator index out of range");
  if (static_cast<int>(beta.size()) != w.size())
    throw std::invalid_argument("curve class length does not match the word");
  return beta[static_cast<size_t>(j - 1)];
}

std::vector<Int> first_chern_coefficients(const Word& w) {
  w.validate();
  int n = w.size();
  std::vector<Int> d(static_cast<size_t>(n), 0);
  for (int i = 1; i <= n; ++i) {
    Int di = 2;
    for (int j = i + 1; j <= n; ++j) di += cartan_pairing(w, w.letter(j), w.letter(i));
    d[static_cast<size_t>(i - 1)] = di;
  }
  return d;
}

CohClass first_chern(const Word& w) {
  CohClass c;
  auto d = first_chern_coefficients(w);
  for (int i = 1; i <= w.size(); ++i)
    c.add_term(1u << (i - 1), d[static_cast<size_t>(i - 1)]);
  return c;
}

Int deg_q(const Word& w, const CurveClass& beta) {
  if (static_cast<int>(beta.size()) != w.size())
    throw std::invalid_argument("curve class length does not match the word");
  auto d = first_chern_coefficients(w);
  Int s = 0;
  for (size_t i = 0; i < d.size(); ++i) s += d[i] * beta[i];
  return s;
}

std::vector<std::vector<Int>> nef_basis_coefficients(const Word& w) {
  int n = w.size();
  std::vector<std::vector<Int>> out(static_cast<size_t>(n),
                                    std::vector<Int>(static_cast<size_t>(n), 0));
  for (int k = 1; k <= n; ++k)
    for (int i = 1; i <= k; ++i)
      if (w.letter(i) == w.letter(k)) out[static_cast<size_t>(k - 1)][static_cast<size_t>(i - 1)] = 1;
  return out;
}

Int nef_degree(const Word& w, const CurveClass& beta) {
  if (static_cast<int>(beta.size()) != w.size())
    throw std::invalid_argument("curve class length does not match the word");
  Int s = 0;
  for (const auto& row : nef_basis_coefficients(w))
    for (size_t i = 0; i < row.size(); ++i) s += row[i] * beta[i];
  return s;
}

}  // namespace bsqh
