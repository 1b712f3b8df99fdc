#pragma once

#include "bsqh/quantum.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <complex>
#include <string>
#include <vector>

namespace bsqh {

using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

/*
  Spectral verification for the quantum multiplication by c_1 at q = 1.
  Distinctness of eigenvalues is certified algebraically (square-free
  characteristic polynomial over Z); the eigenvalue approximations carry
  radii computed from exact rational evaluation of the polynomial, so the
  dominance verdict is backed by verified enclosures.
*/

// Multiplication by c_1 with all quantum parameters set to one.
std::vector<std::vector<Int>> c1_hat(const QhRing& ring);
// Expected value of c1_hat for the certified threefold.
std::vector<std::vector<Int>> c1_hat_reference();

// Exact characteristic polynomial (monic, leading coefficient first) via the
// Faddeev-LeVerrier recursion over exact integers.
std::vector<BigInt> char_poly_exact(const std::vector<std::vector<BigInt>>& m);
std::vector<BigInt> char_poly_exact_int(const std::vector<std::vector<Int>>& m);

// Fraction-free determinant (Bareiss); used as the independent cross-oracle.
BigInt det_exact(std::vector<std::vector<BigInt>> m);
BigInt char_poly_eval(const std::vector<BigInt>& poly, const BigInt& t);

// gcd(p, p') has degree zero iff p is square-free over Q.
bool square_free(const std::vector<BigInt>& poly);

struct EigenvalueBox {
  double re = 0, im = 0;
  double radius = 0;  // verified enclosure radius
};

struct SpectralReport {
  std::vector<BigInt> char_poly;
  bool distinct = false;
  std::vector<EigenvalueBox> eigenvalues;  // sorted by modulus, descending
  int dominant = -1;
  int fano_index = 1;
  bool dominant_real = false;
  bool dominant_simple = false;
  bool strictly_dominant = false;
  bool clause2 = false;
  bool conjecture_o = false;
  double tolerance = 0;
};

// Runs the exact square-free test, approximates the spectrum, certifies
// enclosure radii, and evaluates both clauses of the conjecture.  Retries at
// a tighter tolerance once before giving up.
SpectralReport check_conjecture_o(const std::vector<std::vector<Int>>& m,
                                  int fano_index, double tolerance = 1e-10);

// gcd of the first-Chern coefficients; requires the ample-cone decomposition
// of c_1 to have positive coefficients.
int fano_index(const Word& w);
std::vector<Int> ample_decomposition(const Word& w);

}  // namespace bsqh
