#include "blackwell/delta.hpp"

#include <string>

#include "bareiss.hpp"

namespace blackwell {

namespace {

using PolyMatrix = detail::Matrix<IntPoly>;

IntPoly poly_det(PolyMatrix m) {
  return detail::bareiss_determinant<IntPoly>(
      std::move(m), IntPoly{1}, [](const IntPoly& p) { return p.is_zero(); },
      [](const IntPoly& a, const IntPoly& b) { return exact_div(a, b); });
}

// M I - alpha Q as a matrix of integer polynomials in alpha.
PolyMatrix scaled_resolvent(const InducedChain& chain) {
  const std::size_t n = chain.Q.size();
  PolyMatrix m(n, std::vector<IntPoly>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      m[i][j] = IntPoly{Integer(i == j ? chain.M : 0), Integer(-chain.Q[i][j])};
  return m;
}

// 1 - alpha^q
IntPoly one_minus_power(std::size_t q) { return IntPoly{1} - IntPoly::monomial(Integer(1), q); }

std::size_t successor(const Action& act) {
  for (std::size_t j = 0; j < act.next.size(); ++j)
    if (act.next[j] != 0) return j;
  throw Error(ErrorKind::Model, "transition row without successor");
}

}  // namespace

IntPoly delta_poly(const ValueParts& a, const ValueParts& b) { return b.denom * a.numer - a.denom * b.numer; }

std::vector<ValueParts> value_parts_det(const Game& game, const Profile& prof) {
  if (!validate(game).deterministic) throw Error(ErrorKind::Applicability, "deterministic route needs a deterministic game");
  check_profile(game, prof);
  const std::size_t n = game.size();
  std::vector<ValueParts> out(n);
  for (std::size_t s = 0; s < n; ++s) {
    // Walk the successor map; positions give the path/cycle split.
    std::vector<std::size_t> pos(n, n);
    std::vector<std::size_t> walk;
    std::size_t x = s;
    while (pos[x] == n) {
      pos[x] = walk.size();
      walk.push_back(x);
      x = successor(game.actions[x][prof.choice[x]]);
    }
    const std::size_t p = pos[x];
    const std::size_t q = walk.size() - p;
    std::vector<Integer> path_sum(p == 0 ? 0 : p), cycle_sum(q);
    for (std::size_t t = 0; t < p; ++t) path_sum[t] = game.actions[walk[t]][prof.choice[walk[t]]].reward;
    for (std::size_t t = 0; t < q; ++t) cycle_sum[t] = game.actions[walk[p + t]][prof.choice[walk[p + t]]].reward;
    IntPoly denom = one_minus_power(q);
    IntPoly numer = IntPoly(std::move(path_sum)) * denom +
                    IntPoly::monomial(Integer(1), p) * IntPoly(std::move(cycle_sum));
    out[s] = ValueParts{std::move(numer), std::move(denom), q};
  }
  return out;
}

std::vector<ValueParts> value_parts_sto(const Game& game, const Profile& prof) {
  const InducedChain chain = induce(game, prof);
  const std::size_t n = chain.Q.size();
  const PolyMatrix base = scaled_resolvent(chain);
  const IntPoly D = poly_det(base);
  std::vector<ValueParts> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    // Cramer: replace column i by r.
    PolyMatrix m = base;
    for (std::size_t row = 0; row < n; ++row) m[row][i] = IntPoly{Integer(chain.r[row])};
    out[i] = ValueParts{poly_det(std::move(m)), D, 0};
  }
  return out;
}

std::vector<ValueParts> value_parts(const Game& game, const Profile& prof) {
  return validate(game).deterministic ? value_parts_det(game, prof) : value_parts_sto(game, prof);
}

RationalFn to_value_fn(const ValueParts& parts, DeltaKind kind, std::int64_t M) {
  if (kind == DeltaKind::Deterministic) return RationalFn(parts.numer, parts.denom);
  return RationalFn(parts.numer * Integer(M), parts.denom);
}

RationalFn value_fn_det(const Game& game, const Profile& prof, std::size_t state) {
  auto parts = value_parts_det(game, prof);
  if (state >= parts.size()) throw Error(ErrorKind::Profile, "state out of range");
  return to_value_fn(parts[state], DeltaKind::Deterministic, game.denominator);
}

RationalFn value_fn_sto(const Game& game, const Profile& prof, std::size_t state) {
  auto parts = value_parts_sto(game, prof);
  if (state >= parts.size()) throw Error(ErrorKind::Profile, "state out of range");
  return to_value_fn(parts[state], DeltaKind::Stochastic, game.denominator);
}

std::vector<RationalFn> value_fns(const Game& game, const Profile& prof) {
  const bool det = validate(game).deterministic;
  auto parts = det ? value_parts_det(game, prof) : value_parts_sto(game, prof);
  std::vector<RationalFn> out;
  out.reserve(parts.size());
  for (const auto& p : parts)
    out.push_back(to_value_fn(p, det ? DeltaKind::Deterministic : DeltaKind::Stochastic, game.denominator));
  return out;
}

IntPoly char_poly_scaled(const InducedChain& chain) { return poly_det(scaled_resolvent(chain)); }

IntPoly cofactor_poly(const InducedChain& chain, std::size_t i, std::size_t j) {
  const std::size_t n = chain.Q.size();
  if (i >= n || j >= n) throw Error(ErrorKind::UndefinedInput, "cofactor index out of range");
  const PolyMatrix full = scaled_resolvent(chain);
  PolyMatrix minor;
  minor.reserve(n - 1);
  for (std::size_t r = 0; r < n; ++r) {
    if (r == i) continue;
    std::vector<IntPoly> row;
    row.reserve(n - 1);
    for (std::size_t c = 0; c < n; ++c)
      if (c != j) row.push_back(full[r][c]);
    minor.push_back(std::move(row));
  }
  IntPoly m = poly_det(std::move(minor));
  return (i + j) % 2 == 0 ? m : -m;
}

DeltaRecord delta_det(const Game& game, const Profile& a, const Profile& b, std::size_t state) {
  auto pa = value_parts_det(game, a);
  auto pb = value_parts_det(game, b);
  if (state >= pa.size()) throw Error(ErrorKind::Profile, "state out of range");
  return DeltaRecord{delta_poly(pa[state], pb[state]), DeltaKind::Deterministic, pa[state].q, pb[state].q, state, a, b};
}

DeltaRecord delta_sto(const Game& game, const Profile& a, const Profile& b, std::size_t state) {
  auto pa = value_parts_sto(game, a);
  auto pb = value_parts_sto(game, b);
  if (state >= pa.size()) throw Error(ErrorKind::Profile, "state out of range");
  return DeltaRecord{delta_poly(pa[state], pb[state]), DeltaKind::Stochastic, 0, 0, state, a, b};
}

DeltaRecord make_delta(const Game& game, const Profile& a, const Profile& b, std::size_t state) {
  return validate(game).deterministic ? delta_det(game, a, b, state) : delta_sto(game, a, b, state);
}

std::optional<std::string> coefficient_bound_violation(const DeltaRecord& delta, const GameParams& params) {
  const IntPoly& p = delta.poly;
  if (p.is_zero()) return std::nullopt;
  const long n = static_cast<long>(params.n);
  const Integer W = params.W_bound();
  if (p.degree() > 2 * n - 1)
    return "degree " + std::to_string(p.degree()) + " exceeds 2n-1 = " + std::to_string(2 * n - 1);

  if (delta.kind == DeltaKind::Deterministic) {
    const Integer cap = 12 * W;
    if (height(p) > cap) return "height " + height(p).get_str() + " exceeds 12W = " + cap.get_str();
    return std::nullopt;
  }

  Integer Mpow;
  mpz_pow_ui(Mpow.get_mpz_t(), Integer(params.M).get_mpz_t(), static_cast<unsigned long>(2 * n - 1));
  const Integer scale = 2 * n * W * Mpow;
  for (std::size_t k = 0; k < p.size(); ++k) {
    const Integer cap = scale * binom(2 * n - 1, static_cast<long>(k));
    if (abs(p.coeffs()[k]) > cap)
      return "coefficient " + std::to_string(k) + " = " + p.coeffs()[k].get_str() + " exceeds " + cap.get_str();
  }

  // Binomial transform: |g_i| * 2^(i-1) <= n W (2M)^(2n-1) C(2n-1, i).
  const IntPoly g = reverse_shift(p);
  Integer twoM;
  mpz_pow_ui(twoM.get_mpz_t(), Integer(2 * params.M).get_mpz_t(), static_cast<unsigned long>(2 * n - 1));
  const Integer gscale = n * W * twoM;
  for (std::size_t i = 0; i < g.size(); ++i) {
    Integer lhs = abs(g.coeffs()[i]);
    Integer rhs = gscale * binom(2 * n - 1, static_cast<long>(i));
    if (i == 0)
      rhs *= 2;
    else
      lhs <<= static_cast<mp_bitcnt_t>(i - 1);
    if (lhs > rhs) return "transform coefficient " + std::to_string(i) + " = " + g.coeffs()[i].get_str() +
                          " exceeds its binomial-transform bound";
  }
  return std::nullopt;
}

LaurentSeries laurent_diff(const Game& game, const Profile& a, const Profile& b, std::size_t state, int d) {
  if (d < -1) throw Error(ErrorKind::UndefinedInput, "sensitivity order must be >= -1");
  auto fa = value_fns(game, a);
  auto fb = value_fns(game, b);
  if (state >= fa.size()) throw Error(ErrorKind::Profile, "state out of range");
  return laurent_at_one(fa[state] - fb[state], d);
}

SensitiveComparison leading_sign(const LaurentSeries& s, int d) {
  for (int k = -1; k <= d; ++k) {
    const Rational c = s.at(k);
    if (c != 0) return {sgn(c), k};
  }
  return {};
}

SensitiveComparison d_sensitive_compare(const Game& game, const Profile& a, const Profile& b, std::size_t state,
                                        int d) {
  return leading_sign(laurent_diff(game, a, b, state, d), d);
}

}  // namespace blackwell
