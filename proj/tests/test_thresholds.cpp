#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "blackwell/thresholds.hpp"
#include "support.hpp"

using namespace blackwell;
using testing_support::prof;
using testing_support::running_example;

namespace {

Rational q(long n, long d = 1) {
  Rational r(n, d);
  r.canonicalize();
  return r;
}

Rational one_minus_inv(const Integer& den) {
  Rational r(Integer(den - 1), den);
  r.canonicalize();
  return r;
}

GameParams det_params(std::size_t n, std::int64_t W) {
  GameParams p;
  p.n = n;
  p.W = W;
  p.M = 1;
  p.deterministic = true;
  return p;
}

GameParams sto_params(std::size_t n, std::int64_t W, std::int64_t M) {
  GameParams p = det_params(n, W);
  p.M = M;
  p.deterministic = false;
  return p;
}

// Closed form in long double, written out independently of the MPFR code.
long double mahler_det_ref(long n, long W, long double eps, long double a_eps) {
  const long double L = 12.0L * std::sqrt(2.0L) * std::sqrt(static_cast<long double>(n)) * W;
  const long double m = 2.0L * n - 1.0L;
  const long double first = (std::numbers::pi_v<long double> / 4 + eps) * std::sqrt(m * std::log(m) * std::log(L));
  return std::max(first, a_eps + std::log(L));
}

long double dbar_det_ref(long n, long W, long double a) {
  return a * std::sqrt((2.0L * n - 1) * (1 + std::log(12.0L * W))) - 2;
}

}  // namespace

TEST_CASE("deterministic threshold formulas") {
  CHECK(det_d_bound(3, 1, -1) == q(479, 480));
  CHECK(det_d_bound(5, 1, -1) == one_minus_inv(2880));
  for (int d = -1; d <= 6; ++d) CHECK(det_d_bound(2, 5, d) == det_blackwell_bound(2, 5));
  CHECK(det_blackwell_bound(2, 5) == q(719, 720));
  CHECK(det_blackwell_bound(5, 1) == one_minus_inv(6048));
  CHECK(det_blackwell_bound(1, 1) == q(47, 48));
  CHECK_THROWS_AS(det_d_bound(3, 1, -2), Error);
  CHECK_THROWS_AS(det_blackwell_bound(0, 1), Error);
}

TEST_CASE("stochastic threshold formulas") {
  CHECK(sto_blackwell_bound(3, 1, 2) == one_minus_inv(30720));
  CHECK(sto_blackwell_bound(3, 1, 1) == one_minus_inv(960));
  CHECK(sto_blackwell_bound(2, 1, 1) == one_minus_inv(96));

  CHECK(sto_unichain_d_bound(3, 1, 2, -1) == one_minus_inv(30720));
  CHECK(sto_unichain_d_bound(3, 1, 1, 0) == one_minus_inv(960));
  // j saturates at floor((2n - 3) / 3).
  for (long n = 1; n <= 8; ++n) {
    const long top = n == 1 ? -1 : (2 * n - 3) / 3;
    const Rational sat = sto_unichain_d_bound(n, 2, 3, static_cast<int>(std::max<long>(-1, top - 2)));
    for (int d = static_cast<int>(std::max<long>(-1, top - 2)); d <= 12; ++d) CHECK(sto_unichain_d_bound(n, 2, 3, d) == sat);
  }
}

TEST_CASE("prior bound under the reciprocal reading") {
  CHECK(andersson_bound(2, 1, 1) == one_minus_inv(128));
  CHECK(andersson_bound(1, 1, 1) == q(7, 8));
  CHECK(andersson_bound(2, 5, 1) == one_minus_inv(50'000'000));
  CHECK(andersson_bound(10, 100, 5) > sto_blackwell_bound(10, 100, 5));
  const double ours = neg_log_one_minus(sto_blackwell_bound(10, 100, 5));
  const double theirs = neg_log_one_minus(andersson_bound(10, 100, 5));
  CHECK(ours < theirs);
  CHECK(theirs / ours > 5);
}

TEST_CASE("log-scale values are rounded up") {
  CHECK(neg_log_one_minus(q(0)) == 0.0);
  CHECK(neg_log_one_minus(q(1, 2)) >= std::log(2.0));
  CHECK(neg_log_one_minus(q(1, 2)) == doctest::Approx(std::log(2.0)).epsilon(1e-15));
  CHECK(neg_log_one_minus(q(719, 720)) >= std::log(720.0));
  CHECK_THROWS_AS(neg_log_one_minus(q(1)), Error);
}

TEST_CASE("Mahler-measure bound") {
  BoundReport r = mahler_bound(det_params(10, 1), 0.1, 0.0);
  CHECK(r.method == BoundMethod::MahlerDet);
  CHECK(!r.alpha);
  CHECK(r.applicability.parametric_constants);
  CHECK(r.neg_log_one_minus_alpha == doctest::Approx(13.22).epsilon(0.01 / 13.22));
  CHECK(static_cast<long double>(r.neg_log_one_minus_alpha) >= mahler_det_ref(10, 1, 0.1L, 0) - 1e-12L);
  CHECK(std::fabs(r.neg_log_one_minus_alpha - static_cast<double>(mahler_det_ref(10, 1, 0.1L, 0))) < 1e-9);

  r = mahler_bound(det_params(1, 1), 0.1, 0.0);
  CHECK(r.neg_log_one_minus_alpha == doctest::Approx(std::log(12 * std::sqrt(2.0))));
  CHECK(r.neg_log_one_minus_alpha == doctest::Approx(2.83).epsilon(0.01 / 2.83));

  // Large a_eps makes the second branch dominate.
  r = mahler_bound(det_params(10, 1), 0.1, 100.0);
  CHECK(r.neg_log_one_minus_alpha == doctest::Approx(100.0 + std::log(12 * std::sqrt(2.0) * std::sqrt(10.0))));

  CHECK(mahler_bound(sto_params(3, 2, 2), 0.1, 0).method == BoundMethod::MahlerSto);
  CHECK_THROWS_AS(mahler_bound(det_params(3, 1), 0.0, 0.0), Error);

  for (std::size_t n = 1; n <= 12; ++n)
    for (std::int64_t W = 1; W <= 40; W += 3) {
      const double here = mahler_bound(det_params(n, W), 0.1, 0).neg_log_one_minus_alpha;
      CHECK(mahler_bound(det_params(n + 1, W), 0.1, 0).neg_log_one_minus_alpha >= here);
      CHECK(mahler_bound(det_params(n, W + 1), 0.1, 0).neg_log_one_minus_alpha >= here);
      CHECK(static_cast<long double>(here) >= mahler_det_ref(static_cast<long>(n), W, 0.1L, 0) - 1e-12L);
    }
}

TEST_CASE("multiplicity sensitivity order") {
  CHECK(dbar(det_params(10, 1), 1.0) == doctest::Approx(6.14).epsilon(0.01 / 6.14));
  CHECK(std::fabs(dbar(det_params(10, 1), 1.0) - static_cast<double>(dbar_det_ref(10, 1, 1))) < 1e-12);
  CHECK(dbar(det_params(1, 1), 1.0) == doctest::Approx(-0.13).epsilon(0.01 / 0.13));
  const double x = dbar(det_params(7, 3), 1.0);
  CHECK(dbar(det_params(7, 3), 2.0) + 2 == doctest::Approx(2 * (x + 2)));
  CHECK_THROWS_AS(dbar(det_params(3, 1), 0.0), Error);

  CHECK(multiplicity_det_blackwell_bound(10, 1, 1.0) == det_d_bound(10, 1, 7));
  CHECK(multiplicity_det_blackwell_bound(10, 1, 1.0) == det_blackwell_bound(10, 1));
  CHECK(multiplicity_det_blackwell_bound(100, 1, 1.0) < det_blackwell_bound(100, 1));
  CHECK(multiplicity_det_blackwell_bound(100, 1, 1.0) == det_d_bound(100, 1, 25));
  CHECK(multiplicity_det_blackwell_bound(30, 2, 1e6) == det_blackwell_bound(30, 2));
  CHECK(multiplicity_det_blackwell_bound(1, 1, 1.0) == det_d_bound(1, 1, -1));
}

TEST_CASE("instance radii on the running example") {
  const Game g = running_example();
  const GameParams p = validate(g);
  const DeltaRecord det = delta_det(g, prof({0, 0}), prof({1, 0}), 0);
  CHECK(instance_gap(det, p) == q(1, 120));
  const DeltaRecord sto = delta_sto(g, prof({0, 0}), prof({1, 0}), 0);
  CHECK(instance_gap(sto, p) == q(1, 40));
  CHECK(q(3, 5) <= 1 - q(1, 40));

  DeltaRecord zero = det;
  zero.poly = IntPoly{};
  CHECK_THROWS_AS(instance_gap(zero, p), Error);
  DeltaRecord away = det;
  away.poly = IntPoly{1, 1};  // transform index 0, K = 1: C(2, 2) = 1
  CHECK(instance_gap(away, p) == q(1, 24 * 5));
  away.poly = IntPoly{1, 1, 1, 1};  // K = 3: C(4, 2) = 6
  CHECK(instance_gap(away, p) == q(1, 24 * 5 * 6));
}

TEST_CASE("monotonicity and range of the exact thresholds") {
  for (long n = 1; n <= 10; ++n)
    for (long W = 1; W <= 9; W += 2) {
      Rational prev = 0;
      for (int d = -1; d <= 10; ++d) {
        const Rational a = det_d_bound(n, W, d);
        CHECK(a >= prev);
        CHECK(a >= 0);
        CHECK(a < 1);
        if (d >= n - 4) CHECK(a == det_blackwell_bound(n, W));
        prev = a;
      }
      for (long M = 1; M <= 4; ++M) {
        const Rational s = sto_blackwell_bound(n, W, M);
        CHECK(s >= 0);
        CHECK(s < 1);
        CHECK(sto_blackwell_bound(n, W + 1, M) > s);
        CHECK(sto_blackwell_bound(n, W, M + 1) > s);
        Rational up = 0;
        for (int d = -1; d <= 6; ++d) {
          const Rational u = sto_unichain_d_bound(n, W, M, d);
          CHECK(u >= up);
          CHECK(u < 1);
          up = u;
        }
        CHECK(andersson_bound(n, W, M) < 1);
      }
    }
}

TEST_CASE("best bound selection") {
  const Constants strict;
  BestBound b = best_bound(sto_params(3, 1, 2), std::nullopt, strict, false);
  CHECK(b.best.method == BoundMethod::LagrangeStoBw);
  CHECK(*b.best.alpha == one_minus_inv(30720));

  b = best_bound(det_params(2, 5), std::nullopt, strict, false);
  CHECK(!b.best.applicability.parametric_constants);
  for (const auto& c : b.candidates)
    if (!c.applicability.parametric_constants) CHECK(*b.best.alpha <= *c.alpha);
  CHECK(*b.best.alpha <= q(719, 720));

  b = best_bound(det_params(3, 1), -1, strict, false);
  CHECK(b.best.method == BoundMethod::LagrangeDetD);
  CHECK(*b.best.alpha == q(479, 480));

  b = best_bound(sto_params(3, 1, 2), -1, strict, true);
  CHECK(b.best.method == BoundMethod::LagrangeStoUnichainD);

  try {
    best_bound(sto_params(3, 1, 2), 0, strict, false);
    FAIL("expected an applicability error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Applicability);
  }

  Constants loose;
  loose.allow_parametric = true;
  b = best_bound(sto_params(3, 1, 2), 0, loose, false);
  CHECK(b.best.applicability.parametric_constants);

  // Parametric values are allowed to win when permitted.
  b = best_bound(det_params(100, 1), std::nullopt, loose, false);
  CHECK(b.best.applicability.parametric_constants);
}

TEST_CASE("rational strictly above a report") {
  BoundReport r;
  r.alpha = q(719, 720);
  CHECK(alpha_above(r) == q(1439, 1440));
  BoundReport log_only;
  log_only.neg_log_one_minus_alpha = 13.22;
  const Rational a = alpha_above(log_only);
  CHECK(a < 1);
  CHECK(neg_log_one_minus(a) > 13.22);
}

TEST_CASE("deterministic deltas have no roots above their matched threshold") {
  for (std::uint64_t k = 0; k < 60; ++k) {
    const Game g = testing_support::det_corpus_game(k);
    const GameParams p = validate(g);
    const long n = static_cast<long>(p.n);
    const auto profiles = enumerate_profiles(g);
    for (std::size_t x = 0; x < profiles.size(); ++x)
      for (std::size_t y = x + 1; y < profiles.size(); ++y)
        for (std::size_t s = 0; s < g.size(); ++s) {
          const DeltaRecord d = delta_det(g, profiles[x], profiles[y], s);
          if (d.poly.is_zero()) continue;
          const int j = multiplicity_at_one(d.poly);
          const int order = std::max(-1, j - 2);
          const Rational lo = det_d_bound(n, p.W_bound(), order);
          CHECK(count_real_roots(d.poly, RatInterval(lo, 1)) == 0);
          CHECK(count_real_roots(d.poly, RatInterval(det_blackwell_bound(n, p.W_bound()), 1)) == 0);
          CHECK(count_real_roots(d.poly, RatInterval(1 - instance_gap(d, p), 1)) == 0);
        }
  }
}

TEST_CASE("stochastic deltas have no roots above the threshold") {
  for (std::uint64_t k = 0; k < 40; ++k) {
    const Game g = testing_support::sto_corpus_game(k);
    const GameParams p = validate(g);
    const Rational lo = sto_blackwell_bound(static_cast<long>(p.n), p.W_bound(), p.M);
    const auto profiles = enumerate_profiles(g);
    for (std::size_t x = 0; x < profiles.size() && x < 12; ++x)
      for (std::size_t y = x + 1; y < profiles.size() && y < 12; ++y)
        for (std::size_t s = 0; s < g.size(); ++s) {
          const DeltaRecord d = delta_sto(g, profiles[x], profiles[y], s);
          if (d.poly.is_zero()) continue;
          CHECK(count_real_roots(d.poly, RatInterval(lo, 1)) == 0);
          CHECK(count_real_roots(d.poly, RatInterval(1 - instance_gap(d, p), 1)) == 0);
        }
  }
}
