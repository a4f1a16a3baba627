#pragma once

// Exact discounted value functions v(alpha) = (I - alpha P)^{-1} r and the
// difference polynomials whose roots are the discount factors at which two
// profiles swap order.

#include <cstddef>
#include <optional>
#include <vector>

#include "blackwell/game.hpp"
#include "blackwell/polyalg.hpp"

namespace blackwell {

enum class DeltaKind { Deterministic, Stochastic };

struct DeltaRecord {
  IntPoly poly;
  DeltaKind kind = DeltaKind::Deterministic;
  std::size_t q = 0;        // cycle lengths, deterministic only
  std::size_t q_prime = 0;
  std::size_t state = 0;
  Profile a;
  Profile b;
};

/// Value at one state of a profile, kept as an unreduced fraction so that
/// differences reproduce the unreduced delta polynomial:
///   deterministic: v = numer / denom with denom = 1 - alpha^q,
///   stochastic:    v = M * numer / denom with denom = det(M I - alpha Q).
struct ValueParts {
  IntPoly numer;
  IntPoly denom;
  std::size_t q = 0;

  friend bool operator==(const ValueParts& x, const ValueParts& y) {
    return x.numer == y.numer && x.denom == y.denom;
  }
};

/// denom_B * numer_A - denom_A * numer_B.
IntPoly delta_poly(const ValueParts& a, const ValueParts& b);

/// Parts at every state; the deterministic route needs a deterministic game.
std::vector<ValueParts> value_parts_det(const Game& game, const Profile& prof);
std::vector<ValueParts> value_parts_sto(const Game& game, const Profile& prof);
/// Picks the route from the game's parameters.
std::vector<ValueParts> value_parts(const Game& game, const Profile& prof);

RationalFn to_value_fn(const ValueParts& parts, DeltaKind kind, std::int64_t M);

RationalFn value_fn_det(const Game& game, const Profile& prof, std::size_t state);
RationalFn value_fn_sto(const Game& game, const Profile& prof, std::size_t state);
/// Reduced value functions at every state.
std::vector<RationalFn> value_fns(const Game& game, const Profile& prof);

/// det(M I - alpha Q).
IntPoly char_poly_scaled(const InducedChain& chain);
/// (i, j) cofactor of M I - alpha Q.
IntPoly cofactor_poly(const InducedChain& chain, std::size_t i, std::size_t j);

DeltaRecord delta_det(const Game& game, const Profile& a, const Profile& b, std::size_t state);
DeltaRecord delta_sto(const Game& game, const Profile& a, const Profile& b, std::size_t state);
DeltaRecord make_delta(const Game& game, const Profile& a, const Profile& b, std::size_t state);

/// Largest |coefficient| allowed for a delta of this kind; a nonempty result
/// names the first violated coefficient bound.
std::optional<std::string> coefficient_bound_violation(const DeltaRecord& delta, const GameParams& params);

LaurentSeries laurent_diff(const Game& game, const Profile& a, const Profile& b, std::size_t state, int d);

struct SensitiveComparison {
  int sign = 0;
  std::optional<int> first_index;
};

/// Sign and order of the first nonzero coefficient among c_{-1} .. c_d.
SensitiveComparison leading_sign(const LaurentSeries& s, int d);
SensitiveComparison d_sensitive_compare(const Game& game, const Profile& a, const Profile& b, std::size_t state,
                                        int d);

}  // namespace blackwell
