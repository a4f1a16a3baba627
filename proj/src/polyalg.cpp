#include "blackwell/polyalg.hpp"

#include <algorithm>
#include <sstream>

namespace blackwell {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::UndefinedInput: return "undefined-input";
    case ErrorKind::InvalidIsolation: return "invalid-isolation";
    case ErrorKind::PoleOrder: return "pole-order";
    case ErrorKind::Stochasticity: return "stochasticity";
    case ErrorKind::Model: return "model";
    case ErrorKind::Profile: return "profile";
    case ErrorKind::Applicability: return "applicability";
    case ErrorKind::Scale: return "scale";
    case ErrorKind::Parse: return "parse";
    case ErrorKind::Io: return "io";
    case ErrorKind::Usage: return "usage";
  }
  return "unknown";
}

std::string to_string(const Rational& q) { return q.get_str(); }

std::string to_string(const IntPoly& p, char var) {
  if (p.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (std::size_t k = 0; k < p.size(); ++k) {
    const Integer& c = p.coeffs()[k];
    if (c == 0) continue;
    Integer mag = abs(c);
    if (first) {
      if (c < 0) os << "-";
    } else {
      os << (c < 0 ? " - " : " + ");
    }
    first = false;
    if (k == 0 || mag != 1) os << mag.get_str();
    if (k > 0) {
      if (mag != 1) os << "*";
      os << var;
      if (k > 1) os << "^" << k;
    }
  }
  return os.str();
}

RatPoly to_rational(const IntPoly& p) {
  std::vector<Rational> v;
  v.reserve(p.size());
  for (const auto& c : p.coeffs()) v.emplace_back(c);
  return RatPoly(std::move(v));
}

Integer content(const IntPoly& p) {
  Integer g = 0;
  for (const auto& c : p.coeffs()) {
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
    if (g == 1) break;
  }
  return g;
}

IntPoly primitive_part(const IntPoly& p) {
  if (p.is_zero()) return p;
  Integer g = content(p);
  if (g == 1) return p;
  std::vector<Integer> v(p.coeffs());
  for (auto& c : v) mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), g.get_mpz_t());
  return IntPoly(std::move(v));
}

IntPoly clear_denominators(const RatPoly& p) {
  Integer l = 1;
  for (const auto& c : p.coeffs()) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.get_den_mpz_t());
  std::vector<Integer> v;
  v.reserve(p.size());
  for (const auto& c : p.coeffs()) {
    Integer t = l / c.get_den();
    v.emplace_back(t * c.get_num());
  }
  return primitive_part(IntPoly(std::move(v)));
}

std::pair<RatPoly, RatPoly> divmod(const RatPoly& a, const RatPoly& b) {
  if (b.is_zero()) throw Error(ErrorKind::UndefinedInput, "polynomial division by zero");
  if (a.degree() < b.degree()) return {RatPoly{}, a};
  std::vector<Rational> rem(a.coeffs());
  const std::size_t db = static_cast<std::size_t>(b.degree());
  std::vector<Rational> quo(rem.size() - db, Rational(0));
  const Rational& lb = b.leading();
  for (std::size_t k = rem.size(); k-- > db;) {
    if (rem[k] == 0) continue;
    Rational t = rem[k] / lb;
    quo[k - db] = t;
    for (std::size_t i = 0; i <= db; ++i) rem[k - db + i] -= t * b.coeffs()[i];
  }
  return {RatPoly(std::move(quo)), RatPoly(std::move(rem))};
}

IntPoly exact_div(const IntPoly& a, const IntPoly& b) {
  if (b.is_zero()) throw Error(ErrorKind::UndefinedInput, "polynomial division by zero");
  if (a.is_zero()) return {};
  if (a.degree() < b.degree()) throw Error(ErrorKind::UndefinedInput, "inexact polynomial division");
  std::vector<Integer> rem(a.coeffs());
  const std::size_t db = static_cast<std::size_t>(b.degree());
  std::vector<Integer> quo(rem.size() - db, Integer(0));
  const Integer& lb = b.leading();
  Integer t;
  for (std::size_t k = rem.size(); k-- > db;) {
    if (rem[k] == 0) continue;
    if (!mpz_divisible_p(rem[k].get_mpz_t(), lb.get_mpz_t()))
      throw Error(ErrorKind::UndefinedInput, "inexact polynomial division");
    mpz_divexact(t.get_mpz_t(), rem[k].get_mpz_t(), lb.get_mpz_t());
    quo[k - db] = t;
    for (std::size_t i = 0; i <= db; ++i) rem[k - db + i] -= t * b.coeffs()[i];
  }
  for (std::size_t k = 0; k < db; ++k)
    if (rem[k] != 0) throw Error(ErrorKind::UndefinedInput, "inexact polynomial division");
  return IntPoly(std::move(quo));
}

RatPoly gcd(const RatPoly& a, const RatPoly& b) {
  RatPoly x = a, y = b;
  while (!y.is_zero()) {
    RatPoly r = divmod(x, y).second;
    x = std::move(y);
    y = std::move(r);
  }
  if (x.is_zero()) return x;
  Rational inv = 1 / x.leading();
  return x * inv;
}

IntPoly gcd(const IntPoly& a, const IntPoly& b) {
  if (a.is_zero() && b.is_zero()) return {};
  IntPoly g = clear_denominators(gcd(to_rational(a), to_rational(b)));
  if (g.leading() < 0) g = -g;
  return g;
}

IntPoly square_free_part(const IntPoly& p) {
  if (p.is_zero()) throw Error(ErrorKind::UndefinedInput, "square-free part of zero polynomial");
  if (p.degree() == 0) return IntPoly{1};
  IntPoly g = gcd(p, p.derivative());
  return primitive_part(exact_div(p, g));
}

Integer height(const IntPoly& p) {
  if (p.is_zero()) throw Error(ErrorKind::UndefinedInput, "height of zero polynomial");
  Integer h = 0;
  for (const auto& c : p.coeffs()) {
    Integer a = abs(c);
    if (a > h) h = a;
  }
  return h;
}

Integer binom(long n, long k) {
  if (n < 0 || k < 0 || k > n) return 0;
  Integer r;
  mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return r;
}

IntPoly reverse_shift(const IntPoly& p) {
  const std::size_t n = p.size();
  std::vector<Integer> out(n, Integer(0));
  for (std::size_t i = 0; i < n; ++i) {
    Integer s = 0;
    for (std::size_t k = i; k < n; ++k) s += p.coeffs()[k] * binom(static_cast<long>(k), static_cast<long>(i));
    out[i] = (i % 2 == 0) ? s : Integer(-s);
  }
  return IntPoly(std::move(out));
}

int multiplicity_at_one(const IntPoly& p) {
  if (p.is_zero()) throw Error(ErrorKind::UndefinedInput, "multiplicity of zero polynomial");
  std::vector<Integer> c(p.coeffs());
  int m = 0;
  // Synthetic division by (x - 1) while the remainder vanishes.
  while (c.size() > 1) {
    std::vector<Integer> q(c.size() - 1);
    Integer acc = 0;
    for (std::size_t k = c.size(); k-- > 1;) {
      acc += c[k];
      q[k - 1] = acc;
    }
    if (acc + c[0] != 0) break;
    c = std::move(q);
    ++m;
  }
  return m;
}

int sign_at(const IntPoly& p, const Rational& x) {
  if (p.is_zero()) return 0;
  const Integer& a = x.get_num();
  const Integer& b = x.get_den();
  Integer acc = p.leading();
  Integer bpow = 1;
  for (std::size_t k = p.size() - 1; k-- > 0;) {
    bpow *= b;
    acc = acc * a + p.coeffs()[k] * bpow;
  }
  return sgn(acc);
}

RatInterval::RatInterval(Rational lo, Rational hi) : lo_(std::move(lo)), hi_(std::move(hi)) {
  if (!(lo_ < hi_)) throw Error(ErrorKind::UndefinedInput, "interval requires lo < hi");
}

SturmSequence::SturmSequence(const IntPoly& square_free) {
  if (square_free.is_zero()) throw Error(ErrorKind::UndefinedInput, "Sturm sequence of zero polynomial");
  chain_.push_back(square_free);
  if (square_free.degree() == 0) return;
  chain_.push_back(primitive_part(square_free.derivative()));
  while (true) {
    RatPoly r = divmod(to_rational(chain_[chain_.size() - 2]), to_rational(chain_.back())).second;
    if (r.is_zero()) break;
    chain_.push_back(-clear_denominators(r));
  }
}

int SturmSequence::variations(const Rational& x) const {
  int v = 0, prev = 0;
  for (const auto& p : chain_) {
    int s = sign_at(p, x);
    if (s == 0) continue;
    if (prev != 0 && s != prev) ++v;
    prev = s;
  }
  return v;
}

namespace {

// Divide out a root sitting exactly at r (square-free input, so at most once).
IntPoly strip_root(const IntPoly& f, const Rational& r) {
  if (f.degree() < 1 || sign_at(f, r) != 0) return f;
  return exact_div(f, IntPoly{Integer(-r.get_num()), r.get_den()});
}

// A split point strictly inside (a, b) that is not a root of f.
Rational split_point(const IntPoly& f, const Rational& a, const Rational& b) {
  for (long den = 2;; ++den) {
    for (long num = den / 2; num >= 1; --num) {
      for (long k : {num, den - num}) {
        Rational t(k, den);
        t.canonicalize();
        Rational m = a + (b - a) * t;
        if (sign_at(f, m) != 0) return m;
      }
    }
  }
}

void bisect(const SturmSequence& s, const Rational& a, const Rational& b, int va, int vb,
            std::vector<RatInterval>& out) {
  const int n = va - vb;
  if (n <= 0) return;
  if (n == 1) {
    out.emplace_back(a, b);
    return;
  }
  Rational m = split_point(s.base(), a, b);
  int vm = s.variations(m);
  bisect(s, a, m, va, vm, out);
  bisect(s, m, b, vm, vb, out);
}

}  // namespace

int count_real_roots(const IntPoly& p, const RatInterval& range) {
  if (p.is_zero()) throw Error(ErrorKind::UndefinedInput, "root count of zero polynomial");
  IntPoly f = square_free_part(p);
  f = strip_root(strip_root(f, range.lo()), range.hi());
  if (f.degree() < 1) return 0;
  SturmSequence s(f);
  return s.count(range.lo(), range.hi());
}

std::vector<RealRoot> real_roots(const IntPoly& p, const RatInterval& range) {
  if (p.is_zero()) throw Error(ErrorKind::UndefinedInput, "root isolation of zero polynomial");
  IntPoly f = square_free_part(p);
  f = strip_root(strip_root(f, range.lo()), range.hi());
  std::vector<RealRoot> out;
  if (f.degree() < 1) return out;
  SturmSequence s(f);
  std::vector<RatInterval> isos;
  bisect(s, range.lo(), range.hi(), s.variations(range.lo()), s.variations(range.hi()), isos);
  out.reserve(isos.size());
  for (auto& iso : isos) out.emplace_back(f, std::move(iso));
  return out;
}

std::vector<RatInterval> isolate_real_roots(const IntPoly& p, const RatInterval& range) {
  std::vector<RatInterval> out;
  for (auto r : real_roots(p, range)) {
    // Range endpoints may be roots of p that were stripped before isolation.
    while (sign_at(p, r.interval().lo()) == 0 || sign_at(p, r.interval().hi()) == 0) r.bisect();
    out.push_back(r.interval());
  }
  return out;
}

RealRoot::RealRoot(IntPoly square_free, RatInterval iso) : poly_(std::move(square_free)), iso_(std::move(iso)) {}

void RealRoot::bisect() {
  const int slo = sign_at(poly_, iso_.lo());
  Rational m = iso_.midpoint();
  const int sm = sign_at(poly_, m);
  if (sm == 0) {
    Rational q = iso_.width() / 4;
    iso_ = RatInterval(m - q, m + q);
  } else if (sm == slo) {
    iso_ = RatInterval(m, iso_.hi());
  } else {
    iso_ = RatInterval(iso_.lo(), m);
  }
}

void RealRoot::refine(const Rational& width) {
  while (iso_.width() > width) bisect();
}

RatInterval refine_root(const IntPoly& p, const RatInterval& iso, const Rational& width) {
  if (p.is_zero()) throw Error(ErrorKind::InvalidIsolation, "zero polynomial has no isolated roots");
  if (width <= 0) throw Error(ErrorKind::UndefinedInput, "refinement width must be positive");
  IntPoly f = square_free_part(p);
  if (f.degree() < 1 || sign_at(f, iso.lo()) == 0 || sign_at(f, iso.hi()) == 0 ||
      SturmSequence(f).count(iso.lo(), iso.hi()) != 1)
    throw Error(ErrorKind::InvalidIsolation, "interval does not isolate exactly one root");
  RealRoot r(std::move(f), iso);
  r.refine(width);
  return r.interval();
}

int compare(RealRoot a, RealRoot b) {
  std::optional<IntPoly> common;
  while (true) {
    if (a.interval().hi() <= b.interval().lo()) return -1;
    if (b.interval().hi() <= a.interval().lo()) return 1;
    if (!common) common = gcd(a.poly(), b.poly());
    if (common->degree() >= 1) {
      Rational lo = std::max(a.interval().lo(), b.interval().lo());
      Rational hi = std::min(a.interval().hi(), b.interval().hi());
      // A common factor with a root in the overlap pins both roots to it.
      if (count_real_roots(*common, RatInterval(lo, hi)) > 0) return 0;
    }
    a.bisect();
    b.bisect();
  }
}

int compare(RealRoot a, const Rational& x) {
  while (true) {
    if (a.interval().hi() <= x) return -1;
    if (a.interval().lo() >= x) return 1;
    if (sign_at(a.poly(), x) == 0) return 0;
    a.bisect();
  }
}

Rational default_precision() {
  Integer d = 1;
  d <<= 64;
  return Rational(Integer(1), d);
}

Integer floor_root(const Integer& x, unsigned long k) {
  if (x < 0) throw Error(ErrorKind::UndefinedInput, "root of negative integer");
  Integer r;
  mpz_root(r.get_mpz_t(), x.get_mpz_t(), k);
  return r;
}

namespace {

// Smallest power of two S with 1/S <= precision.
Integer scale_for(const Rational& precision) {
  if (precision <= 0) throw Error(ErrorKind::UndefinedInput, "precision must be positive");
  Integer s = 1;
  while (Rational(1, 1) / Rational(s) > precision) s <<= 1;
  return s;
}

}  // namespace

Rational lagrange_root_lower_bound(const IntPoly& p, const Rational& precision) {
  if (p.is_zero()) throw Error(ErrorKind::UndefinedInput, "Lagrange bound of zero polynomial");
  const std::size_t j = p.lowest_index();
  if (static_cast<int>(j) == p.degree())
    throw Error(ErrorKind::UndefinedInput, "monomial has only zero roots; no Lagrange bound");
  const Integer scale = scale_for(precision);
  const Integer cj = abs(p.coeffs()[j]);
  std::optional<Integer> best;
  for (std::size_t i = j + 1; i < p.size(); ++i) {
    if (p.coeffs()[i] == 0) continue;
    const unsigned long k = i - j;
    Integer sk;
    mpz_pow_ui(sk.get_mpz_t(), scale.get_mpz_t(), k);
    Integer ci = abs(p.coeffs()[i]);
    Integer a = (cj * sk) / ci;  // floor, operands nonnegative
    Integer y = floor_root(a, k);
    if (!best || y < *best) best = y;
  }
  Rational r(*best, scale * 2);
  r.canonicalize();
  return r;
}

Rational landau_mahler_bound(const IntPoly& p, const Rational& precision) {
  if (p.is_zero()) return 0;
  const Integer scale = scale_for(precision);
  Integer sum = 0;
  for (const auto& c : p.coeffs()) sum += c * c;
  Integer x = sum * scale * scale;
  Integer r;
  mpz_sqrt(r.get_mpz_t(), x.get_mpz_t());
  if (r * r != x) r += 1;
  Rational u(r, scale);
  u.canonicalize();
  return u;
}

RationalFn::RationalFn(IntPoly num, IntPoly den) : num_(std::move(num)), den_(std::move(den)) {
  if (den_.is_zero()) throw Error(ErrorKind::UndefinedInput, "rational function with zero denominator");
  if (num_.is_zero()) {
    den_ = IntPoly{1};
    return;
  }
  if (den_.degree() > 0 && num_.degree() > 0) {
    IntPoly g = gcd(num_, den_);
    if (g.degree() > 0) {
      num_ = exact_div(num_, g);
      den_ = exact_div(den_, g);
    }
  }
  Integer c = content(num_);
  Integer cd = content(den_);
  mpz_gcd(c.get_mpz_t(), c.get_mpz_t(), cd.get_mpz_t());
  if (c != 1) {
    std::vector<Integer> n(num_.coeffs()), d(den_.coeffs());
    for (auto& x : n) mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), c.get_mpz_t());
    for (auto& x : d) mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), c.get_mpz_t());
    num_ = IntPoly(std::move(n));
    den_ = IntPoly(std::move(d));
  }
  if (den_.leading() < 0) {
    num_ = -num_;
    den_ = -den_;
  }
}

Rational RationalFn::eval(const Rational& x) const {
  Rational d = den_.eval(x);
  if (d == 0) throw Error(ErrorKind::UndefinedInput, "rational function evaluated at a pole");
  return num_.eval(x) / d;
}

RationalFn operator-(const RationalFn& a, const RationalFn& b) {
  if (a.den_ == b.den_) return RationalFn(a.num_ - b.num_, a.den_);
  return RationalFn(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
}

RationalFn operator+(const RationalFn& a, const RationalFn& b) {
  if (a.den_ == b.den_) return RationalFn(a.num_ + b.num_, a.den_);
  return RationalFn(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
}

Rational LaurentSeries::at(int order) const {
  if (order > trunc) throw Error(ErrorKind::UndefinedInput, "Laurent coefficient beyond truncation order");
  if (order < start) return 0;
  return coeffs[static_cast<std::size_t>(order - start)];
}

LaurentSeries laurent_at_one(const RationalFn& f, int order) {
  if (order < -1) throw Error(ErrorKind::UndefinedInput, "Laurent order must be >= -1");
  LaurentSeries out;
  out.start = -1;
  out.trunc = order;
  out.coeffs.assign(static_cast<std::size_t>(order + 2), Rational(0));
  if (f.is_zero()) return out;

  const IntPoly num = reverse_shift(f.num());
  const IntPoly den = reverse_shift(f.den());
  const int k = static_cast<int>(num.lowest_index());
  const int m = static_cast<int>(den.lowest_index());
  const int shift = k - m;
  if (shift < -1) throw Error(ErrorKind::PoleOrder, "pole of order " + std::to_string(-shift) + " at alpha = 1");

  const int terms = order - shift;  // need w/u through eps^terms
  if (terms < 0) return out;
  const auto n = static_cast<std::size_t>(terms) + 1;
  auto at = [](const IntPoly& p, std::size_t off, std::size_t i) { return Rational(p.coeff(off + i)); };

  std::vector<Rational> inv(n);
  const Rational u0 = at(den, static_cast<std::size_t>(m), 0);
  inv[0] = 1 / u0;
  for (std::size_t t = 1; t < n; ++t) {
    Rational s = 0;
    for (std::size_t i = 1; i <= t; ++i) s += at(den, static_cast<std::size_t>(m), i) * inv[t - i];
    inv[t] = -s / u0;
  }
  for (std::size_t t = 0; t < n; ++t) {
    Rational s = 0;
    for (std::size_t i = 0; i <= t; ++i) s += at(num, static_cast<std::size_t>(k), i) * inv[t - i];
    const int e = static_cast<int>(t) + shift;
    if (e >= -1 && e <= order) out.coeffs[static_cast<std::size_t>(e + 1)] = s;
  }
  return out;
}

}  // namespace blackwell
