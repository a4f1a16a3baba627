#include "blackwell/solver.hpp"

#include <algorithm>
#include <cmath>

namespace blackwell {

SolveResult value_iteration(const Game& game, double alpha, double tol, std::size_t max_iter) {
  if (!(alpha > 0 && alpha < 1)) throw Error(ErrorKind::UndefinedInput, "discount factor must lie in (0, 1)");
  validate(game);
  const std::size_t n = game.size();
  const double M = static_cast<double>(game.denominator);

  auto q_value = [&](std::size_t i, std::size_t a, const std::vector<double>& v) {
    const Action& act = game.actions[i][a];
    double s = 0;
    for (std::size_t j = 0; j < n; ++j)
      if (act.next[j] != 0) s += static_cast<double>(act.next[j]) / M * v[j];
    return static_cast<double>(act.reward) + alpha * s;
  };

  SolveResult res;
  res.method = "vi";
  res.alpha = Rational(alpha);
  res.converged = false;
  std::vector<double> v(n, 0.0), next(n);
  while (res.iterations < max_iter) {
    double residual = 0;
    for (std::size_t i = 0; i < n; ++i) {
      double best = q_value(i, 0, v);
      for (std::size_t a = 1; a < game.actions[i].size(); ++a) {
        const double x = q_value(i, a, v);
        best = game.owner[i] == Player::Max ? std::max(best, x) : std::min(best, x);
      }
      next[i] = best;
      residual = std::max(residual, std::abs(best - v[i]));
    }
    v.swap(next);
    ++res.iterations;
    res.residual = residual;
    res.residual_history.push_back(residual);
    if (residual <= tol) {
      res.converged = true;
      break;
    }
  }

  res.profile.choice.assign(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    double best = q_value(i, 0, v);
    for (std::size_t a = 1; a < game.actions[i].size(); ++a) {
      const double x = q_value(i, a, v);
      if (game.owner[i] == Player::Max ? x > best : x < best) {
        best = x;
        res.profile.choice[i] = a;
      }
    }
  }
  res.approx_values = std::move(v);
  return res;
}

std::vector<Rational> policy_eval_exact(const InducedChain& chain, const Rational& alpha) {
  if (!(alpha > 0 && alpha < 1)) throw Error(ErrorKind::UndefinedInput, "discount factor must lie in (0, 1)");
  const std::size_t n = chain.Q.size();
  const Integer& a = alpha.get_num();
  const Integer& b = alpha.get_den();
  const Integer bM = b * chain.M;

  // Augmented system [bM I - a Q | bM r], Bareiss forward elimination.
  std::vector<std::vector<Integer>> m(n, std::vector<Integer>(n + 1));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) m[i][j] = (i == j ? bM : Integer(0)) - a * chain.Q[i][j];
    m[i][n] = bM * chain.r[i];
  }
  Integer prev = 1;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    while (p < n && m[p][k] == 0) ++p;
    if (p == n) throw Error(ErrorKind::UndefinedInput, "singular evaluation system");
    std::swap(m[k], m[p]);
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j <= n; ++j) {
        Integer t = m[k][k] * m[i][j] - m[i][k] * m[k][j];
        mpz_divexact(m[i][j].get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
      }
      m[i][k] = 0;
    }
    prev = m[k][k];
  }
  std::vector<Rational> x(n);
  for (std::size_t i = n; i-- > 0;) {
    Rational s = m[i][n];
    for (std::size_t j = i + 1; j < n; ++j) s -= m[i][j] * x[j];
    x[i] = s / m[i][i];
  }
  return x;
}

Rational one_step_value(const Game& game, std::size_t state, std::size_t action, const Rational& alpha,
                        const std::vector<Rational>& v) {
  const Action& act = game.actions[state][action];
  Rational s = 0;
  for (std::size_t j = 0; j < act.next.size(); ++j)
    if (act.next[j] != 0) s += act.next[j] * v[j];
  s /= game.denominator;
  return act.reward + alpha * s;
}

namespace {

// Switches every state owned by `who` that can strictly improve; returns
// whether anything changed.
bool improve(const Game& game, Player who, Profile& prof, const Rational& alpha, const std::vector<Rational>& v) {
  bool changed = false;
  for (std::size_t i = 0; i < game.size(); ++i) {
    if (game.owner[i] != who || game.actions[i].size() == 1) continue;
    std::vector<Rational> vals;
    vals.reserve(game.actions[i].size());
    for (std::size_t a = 0; a < game.actions[i].size(); ++a) vals.push_back(one_step_value(game, i, a, alpha, v));
    auto it = who == Player::Max ? std::max_element(vals.begin(), vals.end())
                                 : std::min_element(vals.begin(), vals.end());
    const bool better = who == Player::Max ? *it > vals[prof.choice[i]] : *it < vals[prof.choice[i]];
    if (better) {
      prof.choice[i] = static_cast<std::size_t>(it - vals.begin());  // first extremum = lowest index
      changed = true;
    }
  }
  return changed;
}

}  // namespace

SolveResult strategy_iteration_exact(const Game& game, const Rational& alpha) {
  if (!(alpha > 0 && alpha < 1)) throw Error(ErrorKind::UndefinedInput, "discount factor must lie in (0, 1)");
  validate(game);
  SolveResult res;
  res.method = "si";
  res.alpha = alpha;
  res.profile.choice.assign(game.size(), 0);
  std::vector<Rational> v;
  while (true) {
    // Min's exact best response to the current Max choices.
    while (true) {
      v = policy_eval_exact(induce(game, res.profile), alpha);
      ++res.iterations;
      if (!improve(game, Player::Min, res.profile, alpha, v)) break;
    }
    if (!improve(game, Player::Max, res.profile, alpha, v)) break;
  }
  res.exact_values = v;
  res.approx_values.reserve(v.size());
  for (const auto& x : v) res.approx_values.push_back(x.get_d());
  return res;
}

bool satisfies_optimality(const Game& game, const Profile& prof, const Rational& alpha,
                          const std::vector<Rational>& v) {
  for (std::size_t i = 0; i < game.size(); ++i) {
    const Rational chosen = one_step_value(game, i, prof.choice[i], alpha, v);
    if (chosen != v[i]) return false;
    for (std::size_t a = 0; a < game.actions[i].size(); ++a) {
      const Rational x = one_step_value(game, i, a, alpha, v);
      if (game.owner[i] == Player::Max ? x > chosen : x < chosen) return false;
    }
  }
  return true;
}

namespace {

BoundReport pick(const std::vector<BoundReport>& all, BoundMethod m) {
  for (const auto& r : all)
    if (r.method == m) return r;
  throw Error(ErrorKind::Applicability, std::string(to_string(m)) + " does not cover this game");
}

}  // namespace

BlackwellCertificate blackwell_solve(const Game& game, BoundChoice choice, const Constants& constants) {
  const GameParams params = validate(game);
  const auto all = all_bounds(params, std::nullopt, constants, false);
  BoundReport bound;
  switch (choice) {
    case BoundChoice::Best:
      bound = best_bound(params, std::nullopt, constants, false).best;
      break;
    case BoundChoice::Lagrange:
      bound = pick(all, params.deterministic ? BoundMethod::LagrangeDetBw : BoundMethod::LagrangeStoBw);
      break;
    case BoundChoice::Mahler:
      bound = pick(all, params.deterministic ? BoundMethod::MahlerDet : BoundMethod::MahlerSto);
      break;
    case BoundChoice::Multiplicity:
      if (!params.deterministic)
        throw Error(ErrorKind::Applicability, "the multiplicity bound covers deterministic games only");
      bound = pick(all, BoundMethod::MultiplicityDet);
      break;
  }
  if (bound.applicability.parametric_constants && !constants.allow_parametric)
    throw Error(ErrorKind::Applicability,
                std::string(to_string(bound.method)) + " depends on parametric constants (pass --allow-parametric)");
  BlackwellCertificate cert;
  cert.alpha_used = alpha_above(bound);
  cert.bound = bound;
  SolveResult sr = strategy_iteration_exact(game, cert.alpha_used);
  cert.profile = sr.profile;
  cert.certified = satisfies_optimality(game, sr.profile, cert.alpha_used, sr.exact_values);
  cert.values = std::move(sr.exact_values);
  return cert;
}

SolveResult d_sensitive_solve(const Game& game, int d, const Constants& constants) {
  if (d < -1) throw Error(ErrorKind::UndefinedInput, "sensitivity order must be >= -1");
  const GameParams params = validate(game);
  bool unichain = false;
  if (!params.deterministic) {
    unichain = game_is_unichain(game);
    if (!unichain && !constants.allow_parametric)
      throw Error(ErrorKind::Applicability,
                  "d-sensitive thresholds for stochastic games need every profile to be unichain");
  }
  const BoundReport bound = best_bound(params, d, constants, unichain).best;
  SolveResult res = strategy_iteration_exact(game, alpha_above(bound));
  res.method = std::string("si above ") + to_string(bound.method);
  return res;
}

}  // namespace blackwell
