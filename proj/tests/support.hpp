#pragma once

// Shared fixtures and independent reference computations for the tests.

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include "blackwell/game.hpp"
#include "blackwell/polyalg.hpp"

namespace testing_support {

using namespace blackwell;

// State 0 (Max): stay for 3, or move to state 1 for 0. State 1 (Min): stay for 5.
inline Game running_example() {
  Game g;
  g.denominator = 1;
  g.owner = {Player::Max, Player::Min};
  g.actions = {{{3, {1, 0}}, {0, {0, 1}}}, {{5, {0, 1}}}};
  return g;
}

inline Profile prof(std::vector<std::size_t> c) { return Profile{std::move(c)}; }

/// Same game with transitions scaled to denominator M (still deterministic rows).
inline Game rescale(const Game& g, std::int64_t M) {
  Game h = g;
  h.denominator = g.denominator * M;
  for (auto& acts : h.actions)
    for (auto& a : acts)
      for (auto& x : a.next) x *= M;
  return h;
}

inline Game det_corpus_game(std::uint64_t k) {
  RandomGameOptions o;
  o.n = 1 + k % 5;
  o.actions = 3;
  o.min_actions = 1;
  o.W = static_cast<std::int64_t>(1 + k % 9);
  o.M = 1;
  o.deterministic = true;
  o.random_owners = k % 3 == 0;
  o.seed = 1000 + k;
  return random_game(o);
}

inline Game sto_corpus_game(std::uint64_t k) {
  RandomGameOptions o;
  o.n = 1 + k % 4;
  o.actions = o.n >= 4 ? 2 : 3;
  o.min_actions = 1;
  o.W = static_cast<std::int64_t>(1 + k % 5);
  o.M = static_cast<std::int64_t>(2 + k % 3);
  o.deterministic = false;
  o.random_owners = k % 2 == 0;
  o.seed = 5000 + k;
  return random_game(o);
}

inline IntPoly random_poly(std::mt19937_64& rng, int max_degree, int max_coeff) {
  std::uniform_int_distribution<int> deg(0, max_degree), c(-max_coeff, max_coeff);
  std::vector<Integer> v(static_cast<std::size_t>(deg(rng)) + 1);
  for (auto& x : v) x = c(rng);
  return IntPoly(std::move(v));
}

/// All complex roots by companion-matrix eigenvalues (degree >= 1).
inline std::vector<std::complex<double>> numeric_roots(const IntPoly& p) {
  const int d = p.degree();
  Eigen::MatrixXd C = Eigen::MatrixXd::Zero(d, d);
  const double lead = p.leading().get_d();
  for (int i = 1; i < d; ++i) C(i, i - 1) = 1.0;
  for (int i = 0; i < d; ++i) C(i, d - 1) = -p.coeffs()[static_cast<std::size_t>(i)].get_d() / lead;
  Eigen::EigenSolver<Eigen::MatrixXd> es(C, false);
  std::vector<std::complex<double>> out;
  for (int i = 0; i < d; ++i) out.push_back(es.eigenvalues()[i]);
  return out;
}

/// Numeric values of a profile at a float discount factor: (I - alpha P) v = r.
inline std::vector<double> numeric_values(const Game& g, const Profile& p, double alpha) {
  const auto n = static_cast<Eigen::Index>(g.size());
  Eigen::MatrixXd A = Eigen::MatrixXd::Identity(n, n);
  Eigen::VectorXd r(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Action& a = g.actions[static_cast<std::size_t>(i)][p.choice[static_cast<std::size_t>(i)]];
    r(i) = static_cast<double>(a.reward);
    for (Eigen::Index j = 0; j < n; ++j)
      A(i, j) -= alpha * static_cast<double>(a.next[static_cast<std::size_t>(j)]) / static_cast<double>(g.denominator);
  }
  Eigen::VectorXd v = A.partialPivLu().solve(r);
  return std::vector<double>(v.data(), v.data() + n);
}

/// Exact values (I - alpha P) v = r by Gauss-Jordan over the rationals.
inline std::vector<Rational> exact_values(const Game& g, const Profile& p, const Rational& alpha) {
  const std::size_t n = g.size();
  std::vector<std::vector<Rational>> a(n, std::vector<Rational>(n + 1));
  for (std::size_t i = 0; i < n; ++i) {
    const Action& act = g.actions[i][p.choice[i]];
    for (std::size_t j = 0; j < n; ++j) {
      Rational pij(act.next[j], g.denominator);
      pij.canonicalize();
      a[i][j] = (i == j ? Rational(1) : Rational(0)) - alpha * pij;
    }
    a[i][n] = act.reward;
  }
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    while (a[piv][c] == 0) ++piv;
    std::swap(a[c], a[piv]);
    for (std::size_t i = 0; i < n; ++i) {
      if (i == c || a[i][c] == 0) continue;
      const Rational f = a[i][c] / a[c][c];
      for (std::size_t j = c; j <= n; ++j) a[i][j] -= f * a[c][j];
    }
  }
  std::vector<Rational> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = a[i][n] / a[i][i];
  return v;
}

/// Pascal-triangle binomial, independent of the library's GMP routine.
inline Integer pascal(long n, long k) {
  if (k < 0 || k > n) return 0;
  std::vector<Integer> row{1};
  for (long i = 1; i <= n; ++i) {
    std::vector<Integer> next(static_cast<std::size_t>(i) + 1, Integer(1));
    for (long j = 1; j < i; ++j) next[static_cast<std::size_t>(j)] = row[static_cast<std::size_t>(j - 1)] + row[static_cast<std::size_t>(j)];
    row = std::move(next);
  }
  return row[static_cast<std::size_t>(k)];
}

/// (1 - x)^m as an integer polynomial.
inline IntPoly one_minus_x_pow(int m) {
  IntPoly p{1};
  for (int i = 0; i < m; ++i) p = p * IntPoly{1, -1};
  return p;
}

}  // namespace testing_support
