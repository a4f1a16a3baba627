#pragma once

// Closed-form discount thresholds above which optimal strategies are
// Blackwell (or d-sensitive) optimal, plus per-instance root-free radii.

#include <optional>
#include <string>
#include <vector>

#include "blackwell/delta.hpp"
#include "blackwell/game.hpp"
#include "blackwell/polyalg.hpp"

namespace blackwell {

enum class BoundMethod {
  LagrangeDetD,
  LagrangeDetBw,
  LagrangeStoBw,
  LagrangeStoUnichainD,
  MahlerDet,
  MahlerSto,
  MultiplicityDet,
  Andersson,
  InstanceGap,
};

const char* to_string(BoundMethod m) noexcept;

/// Non-constructive constants and selection policy. a_eps and bek_a have
/// no known explicit values; anything derived from them is flagged.
struct Constants {
  double epsilon = 0.1;
  double a_eps = 0.0;
  double bek_a = 1.0;
  bool allow_parametric = false;
};

struct Applicability {
  bool deterministic_only = false;
  bool unichain_only = false;
  bool parametric_constants = false;
};

struct ParamsUsed {
  std::size_t n = 0;
  std::int64_t W = 1;
  std::int64_t M = 1;
  std::optional<int> d;
  std::optional<double> epsilon;
  std::optional<double> a_eps;
  std::optional<double> a;
};

struct BoundReport {
  BoundMethod method = BoundMethod::LagrangeDetBw;
  std::optional<Rational> alpha;
  /// Upper bound on -log(1 - alpha), rounded up.
  double neg_log_one_minus_alpha = 0.0;
  Applicability applicability;
  ParamsUsed params;
};

Rational det_d_bound(long n, const Integer& W, int d);
Rational det_blackwell_bound(long n, const Integer& W);
Rational sto_blackwell_bound(long n, const Integer& W, const Integer& M);
Rational sto_unichain_d_bound(long n, const Integer& W, const Integer& M, int d);
/// Reciprocal reading: 1 - 1 / (2 (n!)^2 4^n max(M, W)^(2 n^2)).
Rational andersson_bound(long n, const Integer& W, const Integer& M);

/// -log(1 - alpha) rounded up; alpha in [0, 1).
double neg_log_one_minus(const Rational& alpha);

/// Log-scale only (alpha absent). Flagged parametric.
BoundReport mahler_bound(const GameParams& params, double epsilon, double a_eps);

/// Sensitivity order beyond which d-sensitive optimality implies Blackwell
/// optimality, for BEK constant `a`. Can be below -1; consumers clamp.
double dbar(const GameParams& params, double a);

/// det_d_bound at d = max(-1, ceil(dbar)).
Rational multiplicity_det_blackwell_bound(long n, const Integer& W, double a);

/// Radius rho with no root of delta in (1 - rho, 1). Throws for zero delta.
Rational instance_gap(const DeltaRecord& delta, const GameParams& params);

struct BestBound {
  BoundReport best;
  std::vector<BoundReport> candidates;  // every computed candidate, including excluded ones
};

/// Tightest applicable threshold. `d` absent means Blackwell. Throws
/// Applicability when nothing rigorous covers the request.
BestBound best_bound(const GameParams& params, std::optional<int> d, const Constants& constants, bool unichain);

/// Every candidate for display; never throws for coverage gaps.
std::vector<BoundReport> all_bounds(const GameParams& params, std::optional<int> d, const Constants& constants,
                                    bool unichain);

/// Exact rational strictly above the threshold: 1 - (1 - alpha)/2, or
/// 1 - 2^-k with k ln 2 > neg_log for log-scale reports.
Rational alpha_above(const BoundReport& report);

}  // namespace blackwell
