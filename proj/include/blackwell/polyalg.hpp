#pragma once

// Exact univariate polynomial arithmetic over Z and Q, real root isolation
// with rational endpoints, and root-separation bounds.

#include <gmpxx.h>

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "blackwell/error.hpp"

namespace blackwell {

using Integer = mpz_class;
using Rational = mpq_class;

/// Dense polynomial; index k holds the coefficient of x^k. Always trimmed:
/// the highest stored coefficient is nonzero, the zero polynomial is empty.
template <class Coeff>
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<Coeff> coeffs) : c_(std::move(coeffs)) { trim(); }
  Polynomial(std::initializer_list<Coeff> coeffs) : c_(coeffs) { trim(); }

  static Polynomial constant(const Coeff& c) { return Polynomial(std::vector<Coeff>{c}); }
  static Polynomial monomial(const Coeff& c, std::size_t k) {
    std::vector<Coeff> v(k + 1, Coeff(0));
    v[k] = c;
    return Polynomial(std::move(v));
  }

  bool is_zero() const noexcept { return c_.empty(); }
  /// -1 for the zero polynomial.
  int degree() const noexcept { return static_cast<int>(c_.size()) - 1; }
  std::size_t size() const noexcept { return c_.size(); }
  const std::vector<Coeff>& coeffs() const noexcept { return c_; }

  Coeff coeff(std::size_t k) const { return k < c_.size() ? c_[k] : Coeff(0); }
  const Coeff& leading() const { return c_.back(); }

  /// Index of the lowest nonzero coefficient; the polynomial must be nonzero.
  std::size_t lowest_index() const {
    std::size_t k = 0;
    while (c_[k] == 0) ++k;
    return k;
  }

  Polynomial derivative() const {
    if (c_.size() <= 1) return {};
    std::vector<Coeff> d(c_.size() - 1);
    for (std::size_t k = 1; k < c_.size(); ++k) d[k - 1] = c_[k] * static_cast<unsigned long>(k);
    return Polynomial(std::move(d));
  }

  /// Exact evaluation at a rational point.
  Rational eval(const Rational& x) const {
    Rational acc = 0;
    for (std::size_t k = c_.size(); k-- > 0;) acc = acc * x + Rational(c_[k]);
    return acc;
  }

  Polynomial operator-() const {
    Polynomial r = *this;
    for (auto& c : r.c_) c = -c;
    return r;
  }

  Polynomial& operator+=(const Polynomial& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), Coeff(0));
    for (std::size_t k = 0; k < o.c_.size(); ++k) c_[k] += o.c_[k];
    trim();
    return *this;
  }
  Polynomial& operator-=(const Polynomial& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), Coeff(0));
    for (std::size_t k = 0; k < o.c_.size(); ++k) c_[k] -= o.c_[k];
    trim();
    return *this;
  }
  Polynomial& operator*=(const Coeff& s) {
    for (auto& c : c_) c *= s;
    trim();
    return *this;
  }

  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(Polynomial a, const Coeff& s) { return a *= s; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<Coeff> r(a.c_.size() + b.c_.size() - 1, Coeff(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
      if (a.c_[i] == 0) continue;
      for (std::size_t j = 0; j < b.c_.size(); ++j) r[i + j] += a.c_[i] * b.c_[j];
    }
    return Polynomial(std::move(r));
  }
  friend bool operator==(const Polynomial& a, const Polynomial& b) { return a.c_ == b.c_; }

 private:
  void trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
  }
  std::vector<Coeff> c_;
};

using IntPoly = Polynomial<Integer>;
using RatPoly = Polynomial<Rational>;

std::string to_string(const IntPoly& p, char var = 'x');
std::string to_string(const Rational& q);

// --- conversions and division -------------------------------------------

RatPoly to_rational(const IntPoly& p);
/// Positive multiple of p with integer coprime coefficients (sign preserved).
IntPoly clear_denominators(const RatPoly& p);
/// p divided by the (positive) gcd of its coefficients.
IntPoly primitive_part(const IntPoly& p);
Integer content(const IntPoly& p);

/// Quotient and remainder over Q. Throws UndefinedInput on division by zero.
std::pair<RatPoly, RatPoly> divmod(const RatPoly& a, const RatPoly& b);
/// Exact quotient a / b in Z[x]; throws UndefinedInput if b does not divide a.
IntPoly exact_div(const IntPoly& a, const IntPoly& b);
/// Primitive gcd with positive leading coefficient (zero iff both are zero).
IntPoly gcd(const IntPoly& a, const IntPoly& b);
/// Monic gcd over Q.
RatPoly gcd(const RatPoly& a, const RatPoly& b);
/// p / gcd(p, p'), primitive.
IntPoly square_free_part(const IntPoly& p);

// --- coefficient functionals ---------------------------------------------

/// Max absolute coefficient. Throws UndefinedInput for the zero polynomial.
Integer height(const IntPoly& p);
/// C(n, k); zero when k < 0 or k > n.
Integer binom(long n, long k);
/// Q(y) = P(1 - y).
IntPoly reverse_shift(const IntPoly& p);
/// Largest m with (1 - x)^m dividing p. Throws UndefinedInput for zero.
int multiplicity_at_one(const IntPoly& p);

/// Sign of p at x (-1, 0, +1), evaluated without fractions.
int sign_at(const IntPoly& p, const Rational& x);

// --- root isolation --------------------------------------------------------

/// Open interval (lo, hi) with rational endpoints, lo < hi.
class RatInterval {
 public:
  RatInterval(Rational lo, Rational hi);
  const Rational& lo() const noexcept { return lo_; }
  const Rational& hi() const noexcept { return hi_; }
  Rational width() const { return hi_ - lo_; }
  Rational midpoint() const { return (lo_ + hi_) / 2; }
  bool contains(const Rational& x) const { return lo_ < x && x < hi_; }
  friend bool operator==(const RatInterval& a, const RatInterval& b) {
    return a.lo_ == b.lo_ && a.hi_ == b.hi_;
  }

 private:
  Rational lo_;
  Rational hi_;
};

/// Sturm chain of a square-free polynomial.
class SturmSequence {
 public:
  explicit SturmSequence(const IntPoly& square_free);
  int variations(const Rational& x) const;
  /// Distinct roots in (a, b], a not a root.
  int count(const Rational& a, const Rational& b) const { return variations(a) - variations(b); }
  const IntPoly& base() const { return chain_.front(); }

 private:
  std::vector<IntPoly> chain_;
};

/// Number of distinct real roots of p in the open interval.
int count_real_roots(const IntPoly& p, const RatInterval& range);

/// Pairwise-disjoint open subintervals of `range`, sorted ascending, each
/// containing exactly one distinct real root of p; endpoints are never roots.
std::vector<RatInterval> isolate_real_roots(const IntPoly& p, const RatInterval& range);

/// Shrinks an isolating interval to width <= `width`.
/// Throws InvalidIsolation when `iso` does not isolate exactly one root.
RatInterval refine_root(const IntPoly& p, const RatInterval& iso, const Rational& width);

/// A real algebraic number: square-free defining polynomial plus an open
/// isolating interval with non-root endpoints.
class RealRoot {
 public:
  RealRoot(IntPoly square_free, RatInterval iso);
  const IntPoly& poly() const noexcept { return poly_; }
  const RatInterval& interval() const noexcept { return iso_; }
  void refine(const Rational& width);
  /// Halves the isolating interval.
  void bisect();

 private:
  IntPoly poly_;
  RatInterval iso_;
};

/// Distinct real roots of p in the open range, ascending, each carrying a
/// square-free polynomial that does not vanish at the range endpoints.
std::vector<RealRoot> real_roots(const IntPoly& p, const RatInterval& range);

/// Exact comparison of two real algebraic numbers (-1, 0, +1).
int compare(RealRoot a, RealRoot b);
/// Sign of (root - x), exact.
int compare(RealRoot a, const Rational& x);

// --- root separation bounds -----------------------------------------------

/// 2^-64.
Rational default_precision();

/// Lagrange lower bound on the modulus of every nonzero root, rounded down
/// to within `precision`. Throws UndefinedInput for zero or monomial input.
Rational lagrange_root_lower_bound(const IntPoly& p, const Rational& precision = default_precision());

/// Upper bound on sqrt(sum c_k^2) (hence on the Mahler measure), within `precision`.
Rational landau_mahler_bound(const IntPoly& p, const Rational& precision = default_precision());

/// floor(x^(1/k)) for x >= 0.
Integer floor_root(const Integer& x, unsigned long k);

// --- rational functions and Laurent expansions --------------------------

/// num / den in lowest terms: gcd(num, den) constant, integer contents
/// coprime, den with positive leading coefficient; zero is 0 / 1.
class RationalFn {
 public:
  RationalFn(IntPoly num, IntPoly den);
  explicit RationalFn(IntPoly num) : RationalFn(std::move(num), IntPoly{1}) {}

  const IntPoly& num() const noexcept { return num_; }
  const IntPoly& den() const noexcept { return den_; }
  bool is_zero() const noexcept { return num_.is_zero(); }
  Rational eval(const Rational& x) const;

  friend RationalFn operator-(const RationalFn& a, const RationalFn& b);
  friend RationalFn operator+(const RationalFn& a, const RationalFn& b);
  friend bool operator==(const RationalFn& a, const RationalFn& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }

 private:
  IntPoly num_;
  IntPoly den_;
};

/// Coefficients of an expansion in powers of eps = 1 - alpha, exact through eps^trunc.
struct LaurentSeries {
  int start = -1;
  int trunc = -1;
  std::vector<Rational> coeffs;  // coeffs[k] multiplies eps^(start + k)

  /// Coefficient of eps^order; zero below `start`.
  Rational at(int order) const;
};

/// Expansion of f(1 - eps) through eps^order. Throws PoleOrder when f has
/// a pole of order >= 2 at alpha = 1.
LaurentSeries laurent_at_one(const RationalFn& f, int order);

}  // namespace blackwell
