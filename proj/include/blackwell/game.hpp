#pragma once

// Perfect-information zero-sum stochastic games with integer rewards and
// transition probabilities over a common denominator M.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "blackwell/error.hpp"

namespace blackwell {

enum class Player { Min, Max };

struct Action {
  std::int64_t reward = 0;
  /// Transition numerators; next[j] / M is the probability of moving to j.
  std::vector<std::int64_t> next;
};

struct Game {
  std::vector<Player> owner;
  std::int64_t denominator = 1;
  std::vector<std::vector<Action>> actions;

  std::size_t size() const noexcept { return owner.size(); }
};

struct GameParams {
  std::size_t n = 0;
  std::int64_t W = 0;  // max |reward| as observed, may be 0
  std::int64_t M = 1;
  bool deterministic = true;

  /// W as used by every bound formula.
  std::int64_t W_bound() const noexcept { return W < 1 ? 1 : W; }
};

struct Profile {
  std::vector<std::size_t> choice;

  friend bool operator==(const Profile&, const Profile&) = default;
  friend auto operator<=>(const Profile&, const Profile&) = default;
};

struct InducedChain {
  std::int64_t M = 1;
  std::vector<std::vector<std::int64_t>> Q;
  std::vector<std::int64_t> r;
};

struct PathCycle {
  std::vector<std::size_t> path;   // states visited before the cycle
  std::vector<std::size_t> cycle;  // states of the cycle, in order
  std::size_t p = 0;
  std::size_t q = 0;
};

/// Throws Model for structural problems and Stochasticity for bad row sums.
GameParams validate(const Game& game);

void check_profile(const Game& game, const Profile& prof);
InducedChain induce(const Game& game, const Profile& prof);

/// Requires a deterministic game (Applicability otherwise).
PathCycle path_cycle(const Game& game, const Profile& prof, std::size_t start);

/// Exactly one closed strongly connected component in the transition digraph.
bool is_unichain(const InducedChain& chain);

inline constexpr std::uint64_t default_profile_cap = 1'000'000;

/// Number of profiles, saturating at UINT64_MAX.
std::uint64_t profile_count(const Game& game);

/// Every profile induces a unichain chain. Throws Scale above `cap` profiles.
bool game_is_unichain(const Game& game, std::uint64_t cap = default_profile_cap);

/// Lexicographic order, last state varying fastest; index 0 is all zeros.
Profile profile_at(const Game& game, std::uint64_t index);
/// Steps to the lexicographic successor; false after the last profile.
bool next_profile(const Game& game, Profile& prof);
std::vector<Profile> enumerate_profiles(const Game& game, std::uint64_t cap = default_profile_cap);

struct RandomGameOptions {
  std::size_t n = 1;
  std::size_t actions = 1;      // actions per state (upper end when min_actions is set)
  std::size_t min_actions = 0;  // 0: every state gets exactly `actions`
  std::int64_t W = 0;
  std::int64_t M = 1;
  bool deterministic = true;
  bool random_owners = false;  // otherwise even states Max, odd states Min
  std::uint64_t seed = 0;
};

Game random_game(const RandomGameOptions& opts);

}  // namespace blackwell
