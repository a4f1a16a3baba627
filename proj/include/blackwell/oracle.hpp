#pragma once

// Exhaustive ground truth for small games: every profile pair, every state,
// every crossing point in (0, 1), exact optimal sets, and bound verification.

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "blackwell/delta.hpp"
#include "blackwell/game.hpp"
#include "blackwell/polyalg.hpp"
#include "blackwell/solver.hpp"
#include "blackwell/thresholds.hpp"

namespace blackwell {

struct OracleOptions {
  std::uint64_t max_pairs_per_state = 100'000;
  /// Width the last crossing is refined to before reporting.
  Rational crossing_width = Rational(1, 1'000'000);
};

struct PairCrossing {
  std::size_t state = 0;
  Profile a;  // representatives of two distinct value functions at `state`
  Profile b;
  std::vector<RatInterval> roots;
};

struct CrossingReport {
  std::vector<PairCrossing> entries;  // only pairs with at least one root
  std::optional<RatInterval> last_crossing;
  std::optional<RealRoot> last_root;
  std::uint64_t pair_count = 0;          // distinct value-function pairs examined
  std::uint64_t profile_pair_count = 0;  // unordered profile pairs times states
  std::uint64_t root_count = 0;
};

struct Violation {
  std::string check;
  std::size_t state = 0;
  std::optional<Profile> a;
  std::optional<Profile> b;
  std::optional<RatInterval> root;
  std::string detail;
};

struct CheckSummary {
  std::string name;
  std::uint64_t evaluated = 0;
  std::uint64_t failed = 0;
};

struct VerifyReport {
  std::vector<CheckSummary> checks;
  std::vector<Violation> violations;
  std::optional<RatInterval> last_crossing;
  std::vector<BoundReport> bounds_checked;
  bool ok() const { return violations.empty(); }
};

struct VerifyOptions {
  Constants constants;
  /// Multiplies 1 - alpha of every bound and every instance radius before
  /// checking. Values above 1 weaken the bounds; used for negative controls.
  Rational gap_scale = 1;
  std::vector<int> sensitivities = {-1, 0, 1};
};

/// Caches value functions and expansions across queries on one game.
class Oracle {
 public:
  explicit Oracle(Game game, OracleOptions opts = {});

  const Game& game() const { return game_; }
  const GameParams& params() const { return params_; }
  const std::vector<Profile>& profiles() const { return profiles_; }

  const CrossingReport& last_crossing();
  /// Rational strictly above the last crossing (1/2 when there is none).
  Rational alpha_star();
  const std::vector<Profile>& blackwell_optimal_profiles();
  /// Blackwell set computed by solving at a caller-chosen alpha above the crossing.
  std::vector<Profile> optimal_profiles_at(const Rational& alpha);
  const std::vector<Profile>& d_sensitive_optimal_profiles(int d);
  bool is_blackwell_optimal(const Profile& p);
  bool is_d_sensitive_optimal(const Profile& p, int d);
  bool veinott_check();
  bool unichain();
  VerifyReport verify_bounds(const VerifyOptions& opts = {});

 private:
  void ensure_laurent(int d);

  Game game_;
  OracleOptions opts_;
  GameParams params_;
  std::vector<Profile> profiles_;
  DeltaKind kind_ = DeltaKind::Deterministic;
  std::vector<std::vector<ValueParts>> parts_;      // [profile][state]
  std::vector<std::vector<RationalFn>> value_fns_;  // [profile][state]
  std::optional<CrossingReport> crossing_;
  std::optional<std::vector<Profile>> blackwell_;
  std::optional<bool> unichain_;
  int laurent_order_ = -2;
  std::vector<std::vector<LaurentSeries>> laurent_;  // [profile][state]
  std::map<int, std::vector<Profile>> d_sets_;
};

CrossingReport last_crossing(const Game& game, const OracleOptions& opts = {});
std::vector<Profile> blackwell_optimal_profiles(const Game& game, const OracleOptions& opts = {});
std::vector<Profile> d_sensitive_optimal_profiles(const Game& game, int d, const OracleOptions& opts = {});
VerifyReport verify_bounds(const Game& game, const VerifyOptions& vopts = {}, const OracleOptions& opts = {});
bool veinott_check(const Game& game, const OracleOptions& opts = {});

}  // namespace blackwell
