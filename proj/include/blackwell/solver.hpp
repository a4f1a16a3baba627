#pragma once

// Discounted solvers and the threshold-driven Blackwell / d-sensitive pipeline.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "blackwell/game.hpp"
#include "blackwell/polyalg.hpp"
#include "blackwell/thresholds.hpp"

namespace blackwell {

struct SolveResult {
  Profile profile;
  std::vector<Rational> exact_values;  // filled by exact methods
  std::vector<double> approx_values;
  Rational alpha;
  std::size_t iterations = 0;
  std::string method;
  bool converged = true;
  double residual = 0.0;
  std::vector<double> residual_history;  // value iteration only
};

/// Float value iteration. Does not throw on non-convergence: the result
/// carries converged = false and the last residual.
SolveResult value_iteration(const Game& game, double alpha, double tol = 1e-10, std::size_t max_iter = 1'000'000);

/// Solves (M I - alpha Q) v = M r exactly.
std::vector<Rational> policy_eval_exact(const InducedChain& chain, const Rational& alpha);

/// One-step value r_a + alpha * sum_j Q_aj / M * v_j of action a at state i.
Rational one_step_value(const Game& game, std::size_t state, std::size_t action, const Rational& alpha,
                        const std::vector<Rational>& v);

/// Hoffman-Karp: Max improves in the outer loop against Min's exact best
/// response. Ties keep the current action; switches go to the lowest index.
SolveResult strategy_iteration_exact(const Game& game, const Rational& alpha);

/// True when every owner's chosen action attains its optimum given `v`.
bool satisfies_optimality(const Game& game, const Profile& prof, const Rational& alpha,
                          const std::vector<Rational>& v);

enum class BoundChoice { Best, Lagrange, Mahler, Multiplicity };

struct BlackwellCertificate {
  Profile profile;
  Rational alpha_used;
  BoundReport bound;
  std::vector<Rational> values;
  bool certified = false;
};

/// Solves exactly just above the chosen threshold. Throws Applicability when
/// the choice does not cover this game.
BlackwellCertificate blackwell_solve(const Game& game, BoundChoice choice, const Constants& constants);

/// Solves exactly just above the d-sensitive threshold. Stochastic games must
/// be unichain (Applicability otherwise).
SolveResult d_sensitive_solve(const Game& game, int d, const Constants& constants);

}  // namespace blackwell
