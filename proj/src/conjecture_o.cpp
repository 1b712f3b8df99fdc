#include "bsqh/conjecture_o.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace bsqh {

// ----------------------------------------------------------------- c1 matrix

std::vector<std::vector<Int>> c1_hat(const QhRing& ring) {
  const Word& w = ring.word;
  std::vector<Int> d = first_chern_coefficients(w);
  size_t dim = ring.basis.size();
  std::vector<std::vector<Int>> out(dim, std::vector<Int>(dim, 0));
  for (int j = 1; j <= w.size(); ++j) {
    const IntMatrix& m = ring.divisor[static_cast<size_t>(j - 1)];
    for (size_t r = 0; r < dim; ++r)
      for (size_t c = 0; c < dim; ++c)
        for (const auto& [cls, v] : m.entry[r][c])
          out[r][c] += d[static_cast<size_t>(j - 1)] * v;  // all q set to one
  }
  if (is_certified_threefold(w) && out != c1_hat_reference())
    throw std::domain_error("c1_hat differs from the expected specialization");
  return out;
}

std::vector<std::vector<Int>> c1_hat_reference() {
  return {
      {0, 2, 2, 0, 0, 0, 3, 4},
      {3, -1, 2, 1, 2, 4, 0, 3},
      {1, 1, -1, -1, 0, 0, 2, 0},
      {2, 0, 1, 0, 2, 2, 0, 0},
      {0, 1, 4, 0, -1, 1, 0, 2},
      {0, 2, 0, -1, 1, -1, 0, 0},
      {0, 0, 2, 3, 0, 1, 0, 2},
      {0, 0, 0, 0, 2, 3, 2, 0},
  };
}

// ------------------------------------------------------------- exact algebra

std::vector<BigInt> char_poly_exact(const std::vector<std::vector<BigInt>>& m) {
  size_t n = m.size();
  for (const auto& row : m)
    if (row.size() != n) throw std::invalid_argument("matrix is not square");
  // Faddeev-LeVerrier: every division below is exact over the integers.
  std::vector<BigInt> coeffs(n + 1);
  coeffs[0] = 1;
  std::vector<std::vector<BigInt>> mk = m;
  for (size_t k = 1; k <= n; ++k) {
    BigInt tr = 0;
    for (size_t i = 0; i < n; ++i) tr += mk[i][i];
    BigInt ck = -tr / static_cast<long long>(k);
    if (ck * static_cast<long long>(k) != -tr)
      throw std::logic_error("Faddeev-LeVerrier division was not exact");
    coeffs[k] = ck;
    if (k == n) break;
    for (size_t i = 0; i < n; ++i) mk[i][i] += ck;
    std::vector<std::vector<BigInt>> next(n, std::vector<BigInt>(n, 0));
    for (size_t i = 0; i < n; ++i)
      for (size_t t = 0; t < n; ++t) {
        if (m[i][t] == 0) continue;
        for (size_t j = 0; j < n; ++j) next[i][j] += m[i][t] * mk[t][j];
      }
    mk = std::move(next);
  }
  return coeffs;
}

std::vector<BigInt> char_poly_exact_int(const std::vector<std::vector<Int>>& m) {
  std::vector<std::vector<BigInt>> big(m.size());
  for (size_t i = 0; i < m.size(); ++i)
    big[i].assign(m[i].begin(), m[i].end());
  return char_poly_exact(big);
}

BigInt det_exact(std::vector<std::vector<BigInt>> a) {
  size_t n = a.size();
  for (const auto& row : a)
    if (row.size() != n) throw std::invalid_argument("matrix is not square");
  if (n == 0) return 1;
  BigInt prev = 1;
  int sign = 1;
  for (size_t k = 0; k + 1 < n; ++k) {
    if (a[k][k] == 0) {
      size_t p = k + 1;
      while (p < n && a[p][k] == 0) ++p;
      if (p == n) return 0;
      std::swap(a[k], a[p]);
      sign = -sign;
    }
    for (size_t i = k + 1; i < n; ++i)
      for (size_t j = k + 1; j < n; ++j)
        a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
    prev = a[k][k];
  }
  return sign > 0 ? a[n - 1][n - 1] : -a[n - 1][n - 1];
}

BigInt char_poly_eval(const std::vector<BigInt>& poly, const BigInt& t) {
  BigInt acc = 0;
  for (const auto& c : poly) acc = acc * t + c;
  return acc;
}

namespace {

using ZPoly = std::vector<BigInt>;  // leading coefficient first

ZPoly trim(ZPoly p) {
  size_t i = 0;
  while (i < p.size() && p[i] == 0) ++i;
  return ZPoly(p.begin() + static_cast<std::ptrdiff_t>(i), p.end());
}

BigInt content(const ZPoly& p) {
  BigInt g = 0;
  for (const auto& c : p) g = boost::multiprecision::gcd(g, c);
  return g;
}

ZPoly primitive(ZPoly p) {
  p = trim(std::move(p));
  if (p.empty()) return p;
  BigInt g = content(p);
  if (g != 0)
    for (auto& c : p) c /= g;
  if (p[0] < 0)
    for (auto& c : p) c = -c;
  return p;
}

// Pseudo-remainder of a by b over Z.
ZPoly prem(ZPoly a, const ZPoly& b) {
  a = trim(std::move(a));
  if (b.empty()) throw std::invalid_argument("division by the zero polynomial");
  while (a.size() >= b.size() && !a.empty()) {
    BigInt lead_a = a[0];
    BigInt lead_b = b[0];
    size_t shift = a.size() - b.size();
    for (auto& c : a) c *= lead_b;
    for (size_t i = 0; i < b.size(); ++i) a[i] -= lead_a * b[i];
    (void)shift;
    a = trim(std::move(a));
  }
  return a;
}

ZPoly z_gcd(ZPoly a, ZPoly b) {
  a = primitive(std::move(a));
  b = primitive(std::move(b));
  while (!b.empty()) {
    ZPoly r = primitive(prem(a, b));
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

ZPoly derivative(const ZPoly& p) {
  if (p.size() <= 1) return {};
  ZPoly d(p.size() - 1);
  size_t deg = p.size() - 1;
  for (size_t i = 0; i + 1 < p.size(); ++i)
    d[i] = p[i] * static_cast<long long>(deg - i);
  return d;
}

}  // namespace

bool square_free(const std::vector<BigInt>& poly) {
  ZPoly p = trim(poly);
  if (p.size() <= 1) return true;
  ZPoly g = z_gcd(p, derivative(p));
  return g.size() == 1;
}

// --------------------------------------------------------- spectrum with radii

namespace {

BigRat rat_of_double(double x) {
  if (x == 0.0) return BigRat(0);
  int e = 0;
  double m = std::frexp(x, &e);
  auto mi = static_cast<long long>(std::ldexp(m, 53));
  int shift = e - 53;
  BigRat r(mi);
  if (shift > 0)
    r *= BigRat(BigInt(1) << shift);
  else if (shift < 0)
    r /= BigRat(BigInt(1) << (-shift));
  return r;
}

struct GaussRat {
  BigRat re, im;
  GaussRat operator-(const GaussRat& o) const { return {re - o.re, im - o.im}; }
  GaussRat operator*(const GaussRat& o) const {
    return {re * o.re - im * o.im, re * o.im + im * o.re};
  }
  BigRat norm2() const { return re * re + im * im; }
};

GaussRat eval_poly(const std::vector<BigInt>& poly, const GaussRat& z) {
  GaussRat acc{BigRat(0), BigRat(0)};
  for (const auto& c : poly) {
    acc = acc * z;
    acc.re += BigRat(c);
  }
  return acc;
}

std::vector<std::complex<double>> durand_kerner(const std::vector<BigInt>& poly,
                                                double tol, int max_iter) {
  size_t n = poly.size() - 1;
  std::vector<double> p(poly.size());
  for (size_t i = 0; i < poly.size(); ++i) p[i] = poly[i].convert_to<double>();
  double bound = 0;
  for (size_t i = 1; i < p.size(); ++i) bound = std::max(bound, std::fabs(p[i]));
  bound = 1.0 + bound;  // Cauchy root bound for a monic polynomial

  std::vector<std::complex<double>> z(n);
  std::complex<double> seed(0.4, 0.9);
  std::complex<double> acc(1.0, 0.0);
  for (size_t i = 0; i < n; ++i) {
    acc *= seed;
    z[i] = acc * bound;
  }
  auto eval = [&](std::complex<double> x) {
    std::complex<double> v(0, 0);
    for (double c : p) v = v * x + c;
    return v;
  };
  for (int it = 0; it < max_iter; ++it) {
    double worst = 0;
    for (size_t i = 0; i < n; ++i) {
      std::complex<double> denom(1, 0);
      for (size_t j = 0; j < n; ++j)
        if (j != i) denom *= (z[i] - z[j]);
      if (std::abs(denom) == 0.0) denom = std::complex<double>(1e-30, 0);
      std::complex<double> step = eval(z[i]) / denom;
      z[i] -= step;
      worst = std::max(worst, std::abs(step));
    }
    if (worst < tol) break;
  }
  return z;
}

enum class Tri { False, True, Unknown };

Tri tri_greater(double lhs, double rhs, double guard) {
  if (lhs > rhs + guard) return Tri::True;
  if (lhs <= rhs - guard) return Tri::False;
  return Tri::Unknown;
}

struct Certified {
  std::vector<EigenvalueBox> boxes;  // sorted by modulus descending
  bool disjoint = false;
};

// Enclosure radii from the Weierstrass correction: the union of the disks
// D(z_i, n |p(z_i)| / prod_{j != i} |z_i - z_j|) contains every root, and
// disjoint disks contain exactly one root each.  |p| and the pairwise
// distances are evaluated in exact rational arithmetic.
Certified certify(const std::vector<BigInt>& poly,
                  const std::vector<std::complex<double>>& z) {
  size_t n = z.size();
  std::vector<GaussRat> zr(n);
  for (size_t i = 0; i < n; ++i)
    zr[i] = GaussRat{rat_of_double(z[i].real()), rat_of_double(z[i].imag())};

  Certified out;
  out.boxes.resize(n);
  for (size_t i = 0; i < n; ++i) {
    BigRat pnorm2 = eval_poly(poly, zr[i]).norm2();
    BigRat denom2(1);
    for (size_t j = 0; j < n; ++j)
      if (j != i) denom2 *= (zr[i] - zr[j]).norm2();
    if (denom2 == 0) {
      out.boxes[i] = {z[i].real(), z[i].imag(), 1e300};
      continue;
    }
    BigRat r2 = pnorm2 / denom2 * BigRat(static_cast<long long>(n) *
                                         static_cast<long long>(n));
    double rd = std::sqrt(r2.convert_to<double>() * (1.0 + 1e-9)) * (1.0 + 1e-9) +
                1e-290;
    out.boxes[i] = {z[i].real(), z[i].imag(), rd};
  }
  std::sort(out.boxes.begin(), out.boxes.end(),
            [](const EigenvalueBox& a, const EigenvalueBox& b) {
              double ma = std::hypot(a.re, a.im), mb = std::hypot(b.re, b.im);
              if (ma != mb) return ma > mb;
              if (a.re != b.re) return a.re > b.re;
              return a.im < b.im;
            });
  out.disjoint = true;
  for (size_t i = 0; i < n && out.disjoint; ++i)
    for (size_t j = i + 1; j < n; ++j) {
      double dist = std::hypot(out.boxes[i].re - out.boxes[j].re,
                               out.boxes[i].im - out.boxes[j].im);
      if (!(dist > out.boxes[i].radius + out.boxes[j].radius)) {
        out.disjoint = false;
        break;
      }
    }
  return out;
}

}  // namespace

SpectralReport check_conjecture_o(const std::vector<std::vector<Int>>& m,
                                  int fano, double tolerance) {
  SpectralReport rep;
  rep.char_poly = char_poly_exact_int(m);
  rep.distinct = square_free(rep.char_poly);
  rep.fano_index = fano;
  size_t n = m.size();
  if (n == 0) throw std::invalid_argument("matrix is empty");

  double tol = tolerance;
  for (int attempt = 0; attempt < 2; ++attempt) {
    rep.tolerance = tol;
    auto roots = durand_kerner(rep.char_poly, tol, attempt == 0 ? 400 : 2000);
    Certified cert = certify(rep.char_poly, roots);
    rep.eigenvalues = cert.boxes;
    rep.dominant = 0;
    if (!cert.disjoint || !rep.distinct) {
      if (!rep.distinct) {
        // A repeated eigenvalue cannot be certified by disjoint disks; the
        // report carries the exact square-free verdict and nothing more.
        rep.dominant_real = rep.dominant_simple = rep.strictly_dominant = false;
        rep.clause2 = false;
        rep.conjecture_o = false;
        return rep;
      }
      tol *= 1e-4;
      continue;
    }

    const EigenvalueBox& dom = cert.boxes[0];
    double dom_mod = std::hypot(dom.re, dom.im);
    double guard = 1e-12 * (1.0 + dom_mod);

    Tri real_t = tri_greater(dom.radius, std::fabs(dom.im), guard) == Tri::True
                     ? Tri::True
                     : (std::fabs(dom.im) > dom.radius + guard ? Tri::False
                                                               : Tri::Unknown);
    // The conjugate of the dominant root is itself a root; if its disk avoids
    // every other disk, the dominant root is real.
    if (real_t == Tri::True) {
      for (size_t j = 1; j < n; ++j) {
        double dist = std::hypot(dom.re - cert.boxes[j].re,
                                 -dom.im - cert.boxes[j].im);
        if (!(dist > dom.radius + cert.boxes[j].radius + guard)) {
          real_t = Tri::Unknown;
          break;
        }
      }
    }

    Tri strict_t = Tri::True;
    for (size_t j = 1; j < n; ++j) {
      double mj = std::hypot(cert.boxes[j].re, cert.boxes[j].im);
      Tri t = tri_greater(dom_mod - dom.radius, mj + cert.boxes[j].radius, guard);
      if (t == Tri::False) { strict_t = Tri::False; break; }
      if (t == Tri::Unknown) strict_t = Tri::Unknown;
    }

    Tri positive_t = tri_greater(dom.re - dom.radius, 0.0, guard);

    // Clause 2: any eigenvalue of maximal modulus equals delta_0 times an
    // r-th root of unity.  Under certified strict dominance only the
    // dominant eigenvalue qualifies, with the trivial root of unity.
    Tri clause2_t = Tri::Unknown;
    if (strict_t == Tri::True && real_t == Tri::True && positive_t == Tri::True)
      clause2_t = Tri::True;
    else if (strict_t == Tri::True && real_t == Tri::True &&
             positive_t == Tri::False)
      clause2_t = (fano % 2 == 0) ? Tri::True : Tri::False;

    rep.dominant_simple = rep.distinct;
    auto decided = [&](Tri t) { return t != Tri::Unknown; };
    if (decided(real_t) && decided(strict_t) &&
        (real_t == Tri::False || strict_t == Tri::False ||
         (decided(positive_t) && decided(clause2_t)))) {
      rep.dominant_real = real_t == Tri::True;
      rep.strictly_dominant = strict_t == Tri::True;
      rep.clause2 = clause2_t == Tri::True;
      bool clause1 = rep.dominant_real && rep.dominant_simple &&
                     rep.strictly_dominant && positive_t == Tri::True;
      rep.conjecture_o = clause1 && rep.clause2;
      return rep;
    }
    tol *= 1e-4;
  }
  std::ostringstream err;
  err << "undecidable at tolerance " << tolerance;
  throw std::runtime_error(err.str());
}

// ------------------------------------------------------------------ Fano data

std::vector<Int> ample_decomposition(const Word& w) {
  int n = w.size();
  std::vector<Int> d = first_chern_coefficients(w);
  std::vector<Int> e(static_cast<size_t>(n), 0);
  for (int k = n; k >= 1; --k) {
    Int v = d[static_cast<size_t>(k - 1)];
    for (int m = k + 1; m <= n; ++m)
      if (w.letter(m) == w.letter(k)) v -= e[static_cast<size_t>(m - 1)];
    e[static_cast<size_t>(k - 1)] = v;
  }
  return e;
}

int fano_index(const Word& w) {
  w.validate();
  if (w.size() == 0) throw std::invalid_argument("word must be nonempty");
  for (Int ek : ample_decomposition(w))
    if (ek <= 0)
      throw std::domain_error(
          "anticanonical class is not ample; the Fano index is undefined");
  std::vector<Int> d = first_chern_coefficients(w);
  Int g = 0;
  for (Int di : d) g = std::gcd(g, di);
  return static_cast<int>(g);
}

}  // namespace bsqh
