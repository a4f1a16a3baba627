#include "blackwell/thresholds.hpp"

#include <mpfr.h>

#include <algorithm>
#include <cmath>

namespace blackwell {

const char* to_string(BoundMethod m) noexcept {
  switch (m) {
    case BoundMethod::LagrangeDetD: return "lagrange_det_d";
    case BoundMethod::LagrangeDetBw: return "lagrange_det_bw";
    case BoundMethod::LagrangeStoBw: return "lagrange_sto_bw";
    case BoundMethod::LagrangeStoUnichainD: return "lagrange_sto_unichain_d";
    case BoundMethod::MahlerDet: return "mahler_det";
    case BoundMethod::MahlerSto: return "mahler_sto";
    case BoundMethod::MultiplicityDet: return "multiplicity_det";
    case BoundMethod::Andersson: return "andersson";
    case BoundMethod::InstanceGap: return "instance_gap";
  }
  return "unknown";
}

namespace {

constexpr mpfr_prec_t kPrec = 256;

// RAII wrapper; MPFR has no C++ binding in the toolchain.
class Real {
 public:
  Real() { mpfr_init2(x_, kPrec); }
  ~Real() { mpfr_clear(x_); }
  Real(const Real&) = delete;
  Real& operator=(const Real&) = delete;
  mpfr_ptr get() { return x_; }
  mpfr_srcptr get() const { return x_; }

 private:
  mpfr_t x_;
};

void check_positive(long n, const Integer& W, const char* what) {
  if (n < 1 || W < 1) throw Error(ErrorKind::UndefinedInput, std::string(what) + " needs n >= 1 and W >= 1");
}

Integer ipow(const Integer& base, unsigned long e) {
  Integer r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
  return r;
}

Rational one_minus(const Rational& gap) { return Rational(1) - gap; }

Rational ratio(const Integer& num, const Integer& den) {
  Rational q(num, den);
  q.canonicalize();
  return q;
}

// 2^(j-1) / (n W (2M)^(2n-1) C(2n-1, j+1)), with j - 1 possibly negative.
Rational sto_gap(long n, const Integer& W, const Integer& M, long j) {
  Integer den = n * W * ipow(2 * M, static_cast<unsigned long>(2 * n - 1)) * binom(2 * n - 1, j + 1);
  if (den == 0) return 1;
  Integer num = 1;
  if (j - 1 >= 0)
    num <<= static_cast<mp_bitcnt_t>(j - 1);
  else
    den <<= static_cast<mp_bitcnt_t>(1 - j);
  return std::min(ratio(num, den), Rational(1));
}

BoundReport exact_report(BoundMethod m, Rational alpha, const GameParams& params, std::optional<int> d) {
  BoundReport r;
  r.method = m;
  r.neg_log_one_minus_alpha = neg_log_one_minus(alpha);
  r.alpha = std::move(alpha);
  r.params.n = params.n;
  r.params.W = params.W_bound();
  r.params.M = params.M;
  r.params.d = d;
  return r;
}

bool tighter(const BoundReport& x, const BoundReport& y) {
  if (x.alpha && y.alpha) return *x.alpha < *y.alpha;
  return x.neg_log_one_minus_alpha < y.neg_log_one_minus_alpha;
}

}  // namespace

Rational det_d_bound(long n, const Integer& W, int d) {
  check_positive(n, W, "det_d_bound");
  if (d < -1) throw Error(ErrorKind::UndefinedInput, "det_d_bound needs d >= -1");
  const long k = std::min<long>(static_cast<long>(d) + 4, n);
  return one_minus(ratio(1, 24 * W * binom(2 * n, k)));
}

Rational det_blackwell_bound(long n, const Integer& W) {
  check_positive(n, W, "det_blackwell_bound");
  return one_minus(ratio(1, 24 * W * binom(2 * n, n)));
}

Rational sto_blackwell_bound(long n, const Integer& W, const Integer& M) {
  check_positive(n, W, "sto_blackwell_bound");
  if (M < 1) throw Error(ErrorKind::UndefinedInput, "sto_blackwell_bound needs M >= 1");
  const long j = (2 * n) / 3;
  // 2^(j-2) / (n W (2M)^(2n-1) C(2n-1, j))
  Integer num = 1;
  Integer den = n * W * ipow(2 * M, static_cast<unsigned long>(2 * n - 1)) * binom(2 * n - 1, j);
  if (j >= 2)
    num <<= static_cast<mp_bitcnt_t>(j - 2);
  else
    den <<= static_cast<mp_bitcnt_t>(2 - j);
  return one_minus(ratio(num, den));
}

Rational sto_unichain_d_bound(long n, const Integer& W, const Integer& M, int d) {
  check_positive(n, W, "sto_unichain_d_bound");
  if (M < 1) throw Error(ErrorKind::UndefinedInput, "sto_unichain_d_bound needs M >= 1");
  if (d < -1) throw Error(ErrorKind::UndefinedInput, "sto_unichain_d_bound needs d >= -1");
  // floor((2n - 3) / 3) with floor division; n = 1 gives -1.
  const long top = (2 * n - 3) >= 0 ? (2 * n - 3) / 3 : -1;
  const long j = std::min<long>(static_cast<long>(d) + 2, top);
  return one_minus(sto_gap(n, W, M, j));
}

Rational andersson_bound(long n, const Integer& W, const Integer& M) {
  check_positive(n, W, "andersson_bound");
  if (M < 1) throw Error(ErrorKind::UndefinedInput, "andersson_bound needs M >= 1");
  Integer fact;
  mpz_fac_ui(fact.get_mpz_t(), static_cast<unsigned long>(n));
  const Integer base = std::max(M, W);
  const Integer den = 2 * fact * fact * ipow(4, static_cast<unsigned long>(n)) *
                      ipow(base, static_cast<unsigned long>(2 * n * n));
  return one_minus(ratio(1, den));
}

double neg_log_one_minus(const Rational& alpha) {
  if (alpha >= 1 || alpha < 0) throw Error(ErrorKind::UndefinedInput, "discount factor must lie in [0, 1)");
  Rational gap = Rational(1) - alpha;
  Real x;
  mpfr_set_q(x.get(), gap.get_mpq_t(), MPFR_RNDD);
  mpfr_log(x.get(), x.get(), MPFR_RNDD);
  mpfr_neg(x.get(), x.get(), MPFR_RNDU);
  return mpfr_get_d(x.get(), MPFR_RNDU);
}

BoundReport mahler_bound(const GameParams& params, double epsilon, double a_eps) {
  if (!(epsilon > 0)) throw Error(ErrorKind::UndefinedInput, "epsilon must be positive");
  const long n = static_cast<long>(params.n);
  const Integer W = params.W_bound();

  Real L, t, logL, first, second;
  if (params.deterministic) {
    // 12 sqrt(2) sqrt(n) W
    mpfr_set_ui(L.get(), 2, MPFR_RNDU);
    mpfr_sqrt(L.get(), L.get(), MPFR_RNDU);
    mpfr_set_si(t.get(), n, MPFR_RNDU);
    mpfr_sqrt(t.get(), t.get(), MPFR_RNDU);
    mpfr_mul(L.get(), L.get(), t.get(), MPFR_RNDU);
    Integer c = 12 * W;
    mpfr_mul_z(L.get(), L.get(), c.get_mpz_t(), MPFR_RNDU);
  } else {
    // 2 n W M^(2n-1) sqrt(C(4n-2, 2n-1))
    Integer b = binom(2 * (2 * n - 1), 2 * n - 1);
    mpfr_set_z(L.get(), b.get_mpz_t(), MPFR_RNDU);
    mpfr_sqrt(L.get(), L.get(), MPFR_RNDU);
    Integer c = 2 * n * W * ipow(Integer(params.M), static_cast<unsigned long>(2 * n - 1));
    mpfr_mul_z(L.get(), L.get(), c.get_mpz_t(), MPFR_RNDU);
  }
  mpfr_log(logL.get(), L.get(), MPFR_RNDU);

  if (n == 1) {
    mpfr_set_zero(first.get(), 1);
  } else {
    mpfr_set_si(t.get(), 2 * n - 1, MPFR_RNDU);
    mpfr_log(t.get(), t.get(), MPFR_RNDU);
    mpfr_mul_si(t.get(), t.get(), 2 * n - 1, MPFR_RNDU);
    mpfr_mul(t.get(), t.get(), logL.get(), MPFR_RNDU);
    mpfr_sqrt(t.get(), t.get(), MPFR_RNDU);
    mpfr_const_pi(first.get(), MPFR_RNDU);
    mpfr_div_ui(first.get(), first.get(), 4, MPFR_RNDU);
    mpfr_add_d(first.get(), first.get(), epsilon, MPFR_RNDU);
    mpfr_mul(first.get(), first.get(), t.get(), MPFR_RNDU);
  }
  mpfr_add_d(second.get(), logL.get(), a_eps, MPFR_RNDU);
  mpfr_max(t.get(), first.get(), second.get(), MPFR_RNDU);

  BoundReport r;
  r.method = params.deterministic ? BoundMethod::MahlerDet : BoundMethod::MahlerSto;
  r.neg_log_one_minus_alpha = mpfr_get_d(t.get(), MPFR_RNDU);
  r.applicability.deterministic_only = params.deterministic;
  r.applicability.parametric_constants = true;
  r.params.n = params.n;
  r.params.W = params.W_bound();
  r.params.M = params.M;
  r.params.epsilon = epsilon;
  r.params.a_eps = a_eps;
  return r;
}

double dbar(const GameParams& params, double a) {
  if (!(a > 0)) throw Error(ErrorKind::UndefinedInput, "BEK constant must be positive");
  const long n = static_cast<long>(params.n);
  const Integer W = params.W_bound();
  Real x;
  if (params.deterministic) {
    Integer c = 12 * W;
    mpfr_set_z(x.get(), c.get_mpz_t(), MPFR_RNDN);
  } else {
    Integer c = 2 * n * W * ipow(Integer(params.M), static_cast<unsigned long>(2 * n - 1)) * binom(2 * n - 1, n);
    mpfr_set_z(x.get(), c.get_mpz_t(), MPFR_RNDN);
  }
  mpfr_log(x.get(), x.get(), MPFR_RNDN);
  mpfr_add_ui(x.get(), x.get(), 1, MPFR_RNDN);
  mpfr_mul_si(x.get(), x.get(), 2 * n - 1, MPFR_RNDN);
  mpfr_sqrt(x.get(), x.get(), MPFR_RNDN);
  mpfr_mul_d(x.get(), x.get(), a, MPFR_RNDN);
  if (params.deterministic) mpfr_sub_ui(x.get(), x.get(), 2, MPFR_RNDN);
  return mpfr_get_d(x.get(), MPFR_RNDN);
}

Rational multiplicity_det_blackwell_bound(long n, const Integer& W, double a) {
  check_positive(n, W, "multiplicity_det_blackwell_bound");
  GameParams p;
  p.n = static_cast<std::size_t>(n);
  p.W = W.get_si();
  p.deterministic = true;
  const double db = std::ceil(dbar(p, a));
  // Beyond n the binomial index saturates anyway.
  const int d = db >= static_cast<double>(n) ? static_cast<int>(n) : std::max(-1, static_cast<int>(db));
  return det_d_bound(n, W, d);
}

Rational instance_gap(const DeltaRecord& delta, const GameParams& params) {
  if (delta.poly.is_zero()) throw Error(ErrorKind::UndefinedInput, "instance gap of zero delta");
  const long j = static_cast<long>(reverse_shift(delta.poly).lowest_index());
  const Integer W = params.W_bound();
  if (delta.kind == DeltaKind::Deterministic) {
    const long K = delta.poly.degree();
    const Integer c = binom(K + 1, j + 2);
    if (c == 0) return 1;
    return std::min(ratio(1, 24 * W * c), Rational(1));
  }
  return sto_gap(static_cast<long>(params.n), W, Integer(params.M), j);
}

std::vector<BoundReport> all_bounds(const GameParams& params, std::optional<int> d, const Constants& constants,
                                    bool unichain) {
  const long n = static_cast<long>(params.n);
  const Integer W = params.W_bound();
  const Integer M = params.M;
  std::vector<BoundReport> out;

  auto parametric = [&](std::vector<BoundReport>& into) {
    BoundReport m = mahler_bound(params, constants.epsilon, constants.a_eps);
    into.push_back(m);
    if (params.deterministic) {
      BoundReport r = exact_report(BoundMethod::MultiplicityDet,
                                   multiplicity_det_blackwell_bound(n, W, constants.bek_a), params, std::nullopt);
      r.applicability.deterministic_only = true;
      r.applicability.parametric_constants = true;
      r.params.a = constants.bek_a;
      into.push_back(r);
    }
  };

  if (!d) {
    if (params.deterministic) {
      BoundReport r = exact_report(BoundMethod::LagrangeDetBw, det_blackwell_bound(n, W), params, std::nullopt);
      r.applicability.deterministic_only = true;
      out.push_back(r);
    }
    out.push_back(exact_report(BoundMethod::LagrangeStoBw, sto_blackwell_bound(n, W, M), params, std::nullopt));
    out.push_back(exact_report(BoundMethod::Andersson, andersson_bound(n, W, M), params, std::nullopt));
    parametric(out);
    return out;
  }

  if (*d < -1) throw Error(ErrorKind::UndefinedInput, "sensitivity order must be >= -1");
  if (params.deterministic) {
    BoundReport r = exact_report(BoundMethod::LagrangeDetD, det_d_bound(n, W, *d), params, d);
    r.applicability.deterministic_only = true;
    out.push_back(r);
  }
  if (unichain) {
    BoundReport r = exact_report(BoundMethod::LagrangeStoUnichainD, sto_unichain_d_bound(n, W, M, *d), params, d);
    r.applicability.unichain_only = true;
    out.push_back(r);
  }
  parametric(out);
  return out;
}

BestBound best_bound(const GameParams& params, std::optional<int> d, const Constants& constants, bool unichain) {
  BestBound result;
  result.candidates = all_bounds(params, d, constants, unichain);
  const BoundReport* best = nullptr;
  for (const auto& c : result.candidates) {
    if (c.applicability.parametric_constants && !constants.allow_parametric) continue;
    if (!best || tighter(c, *best)) best = &c;
  }
  if (!best) {
    throw Error(ErrorKind::Applicability,
                "no rigorous threshold covers d = " + std::to_string(*d) +
                    " on a stochastic game that is not unichain (pass --allow-parametric to use parametric bounds)");
  }
  result.best = *best;
  return result;
}

Rational alpha_above(const BoundReport& report) {
  if (report.alpha) return Rational(1) - (Rational(1) - *report.alpha) / 2;
  const double k = std::ceil(report.neg_log_one_minus_alpha / std::log(2.0)) + 1;
  Integer den = 1;
  den <<= static_cast<mp_bitcnt_t>(std::max(1.0, k));
  return Rational(1) - ratio(1, den);
}

}  // namespace blackwell
