#include "blackwell/game.hpp"

#include <algorithm>
#include <cstdlib>
#include <limits>
#include <numeric>
#include <random>
#include <string>

namespace blackwell {

namespace {

std::string where(std::size_t state, std::size_t action) {
  return "state " + std::to_string(state) + ", action " + std::to_string(action);
}

}  // namespace

GameParams validate(const Game& game) {
  const std::size_t n = game.size();
  if (n == 0) throw Error(ErrorKind::Model, "game has no states");
  if (game.actions.size() != n) throw Error(ErrorKind::Model, "owner and action lists differ in length");
  if (game.denominator < 1) throw Error(ErrorKind::Model, "denominator must be positive");

  GameParams params;
  params.n = n;
  params.M = game.denominator;
  for (std::size_t i = 0; i < n; ++i) {
    if (game.actions[i].empty()) throw Error(ErrorKind::Model, "state " + std::to_string(i) + " has no actions");
    for (std::size_t a = 0; a < game.actions[i].size(); ++a) {
      const Action& act = game.actions[i][a];
      if (act.next.size() != n)
        throw Error(ErrorKind::Model, where(i, a) + ": transition row has " + std::to_string(act.next.size()) +
                                          " entries, expected " + std::to_string(n));
      if (act.reward == std::numeric_limits<std::int64_t>::min())
        throw Error(ErrorKind::Model, where(i, a) + ": reward out of range");
      std::int64_t sum = 0;
      std::size_t nonzero = 0;
      for (std::int64_t x : act.next) {
        if (x < 0) throw Error(ErrorKind::Stochasticity, where(i, a) + ": negative transition numerator");
        if (x > game.denominator)
          throw Error(ErrorKind::Stochasticity, where(i, a) + ": transition numerator exceeds denominator");
        sum += x;
        if (x != 0) ++nonzero;
      }
      if (sum != game.denominator)
        throw Error(ErrorKind::Stochasticity, where(i, a) + ": row sums to " + std::to_string(sum) +
                                                  ", expected " + std::to_string(game.denominator));
      if (nonzero != 1) params.deterministic = false;
      params.W = std::max(params.W, static_cast<std::int64_t>(std::llabs(act.reward)));
    }
  }
  return params;
}

void check_profile(const Game& game, const Profile& prof) {
  if (prof.choice.size() != game.size())
    throw Error(ErrorKind::Profile, "profile has " + std::to_string(prof.choice.size()) + " entries, game has " +
                                        std::to_string(game.size()) + " states");
  for (std::size_t i = 0; i < game.size(); ++i)
    if (prof.choice[i] >= game.actions[i].size())
      throw Error(ErrorKind::Profile, "action " + std::to_string(prof.choice[i]) + " does not exist at state " +
                                          std::to_string(i));
}

InducedChain induce(const Game& game, const Profile& prof) {
  check_profile(game, prof);
  InducedChain chain;
  chain.M = game.denominator;
  chain.Q.reserve(game.size());
  chain.r.reserve(game.size());
  for (std::size_t i = 0; i < game.size(); ++i) {
    const Action& act = game.actions[i][prof.choice[i]];
    chain.Q.push_back(act.next);
    chain.r.push_back(act.reward);
  }
  return chain;
}

namespace {

std::size_t successor(const Action& act) {
  for (std::size_t j = 0; j < act.next.size(); ++j)
    if (act.next[j] != 0) return j;
  throw Error(ErrorKind::Model, "transition row without successor");
}

}  // namespace

PathCycle path_cycle(const Game& game, const Profile& prof, std::size_t start) {
  if (!validate(game).deterministic) throw Error(ErrorKind::Applicability, "path/cycle needs a deterministic game");
  check_profile(game, prof);
  if (start >= game.size()) throw Error(ErrorKind::Profile, "start state out of range");

  std::vector<std::size_t> visit_pos(game.size(), std::numeric_limits<std::size_t>::max());
  std::vector<std::size_t> walk;
  std::size_t s = start;
  while (visit_pos[s] == std::numeric_limits<std::size_t>::max()) {
    visit_pos[s] = walk.size();
    walk.push_back(s);
    s = successor(game.actions[s][prof.choice[s]]);
  }
  PathCycle pc;
  const std::size_t entry = visit_pos[s];
  pc.path.assign(walk.begin(), walk.begin() + static_cast<std::ptrdiff_t>(entry));
  pc.cycle.assign(walk.begin() + static_cast<std::ptrdiff_t>(entry), walk.end());
  pc.p = pc.path.size();
  pc.q = pc.cycle.size();
  return pc;
}

namespace {

struct Tarjan {
  const std::vector<std::vector<std::size_t>>& adj;
  std::vector<int> index, low, comp;
  std::vector<bool> on_stack;
  std::vector<std::size_t> stack;
  int counter = 0;
  int components = 0;

  explicit Tarjan(const std::vector<std::vector<std::size_t>>& g)
      : adj(g), index(g.size(), -1), low(g.size(), 0), comp(g.size(), -1), on_stack(g.size(), false) {
    for (std::size_t v = 0; v < g.size(); ++v)
      if (index[v] < 0) visit(v);
  }

  void visit(std::size_t v) {
    index[v] = low[v] = counter++;
    stack.push_back(v);
    on_stack[v] = true;
    for (std::size_t w : adj[v]) {
      if (index[w] < 0) {
        visit(w);
        low[v] = std::min(low[v], low[w]);
      } else if (on_stack[w]) {
        low[v] = std::min(low[v], index[w]);
      }
    }
    if (low[v] == index[v]) {
      std::size_t w;
      do {
        w = stack.back();
        stack.pop_back();
        on_stack[w] = false;
        comp[w] = components;
      } while (w != v);
      ++components;
    }
  }
};

}  // namespace

bool is_unichain(const InducedChain& chain) {
  const std::size_t n = chain.Q.size();
  std::vector<std::vector<std::size_t>> adj(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (chain.Q[i][j] > 0) adj[i].push_back(j);
  Tarjan t(adj);
  std::vector<bool> closed(static_cast<std::size_t>(t.components), true);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j : adj[i])
      if (t.comp[i] != t.comp[j]) closed[static_cast<std::size_t>(t.comp[i])] = false;
  return std::count(closed.begin(), closed.end(), true) == 1;
}

std::uint64_t profile_count(const Game& game) {
  std::uint64_t total = 1;
  for (const auto& acts : game.actions) {
    const std::uint64_t k = acts.size();
    if (k == 0) return 0;
    if (total > std::numeric_limits<std::uint64_t>::max() / k) return std::numeric_limits<std::uint64_t>::max();
    total *= k;
  }
  return total;
}

Profile profile_at(const Game& game, std::uint64_t index) {
  Profile p;
  p.choice.assign(game.size(), 0);
  for (std::size_t i = game.size(); i-- > 0;) {
    const std::uint64_t k = game.actions[i].size();
    p.choice[i] = static_cast<std::size_t>(index % k);
    index /= k;
  }
  if (index != 0) throw Error(ErrorKind::Profile, "profile index out of range");
  return p;
}

bool next_profile(const Game& game, Profile& prof) {
  for (std::size_t i = game.size(); i-- > 0;) {
    if (++prof.choice[i] < game.actions[i].size()) return true;
    prof.choice[i] = 0;
  }
  return false;
}

std::vector<Profile> enumerate_profiles(const Game& game, std::uint64_t cap) {
  const std::uint64_t count = profile_count(game);
  if (count > cap)
    throw Error(ErrorKind::Scale, "game has " + (count == std::numeric_limits<std::uint64_t>::max()
                                                     ? std::string("too many")
                                                     : std::to_string(count)) +
                                      " profiles, cap is " + std::to_string(cap));
  std::vector<Profile> out;
  out.reserve(static_cast<std::size_t>(count));
  Profile p;
  p.choice.assign(game.size(), 0);
  do {
    out.push_back(p);
  } while (next_profile(game, p));
  return out;
}

bool game_is_unichain(const Game& game, std::uint64_t cap) {
  const std::uint64_t count = profile_count(game);
  if (count > cap) throw Error(ErrorKind::Scale, "unichain check exceeds the profile cap of " + std::to_string(cap));
  Profile p;
  p.choice.assign(game.size(), 0);
  do {
    if (!is_unichain(induce(game, p))) return false;
  } while (next_profile(game, p));
  return true;
}

Game random_game(const RandomGameOptions& opts) {
  if (opts.n == 0 || opts.actions == 0 || opts.M < 1 || opts.W < 0)
    throw Error(ErrorKind::UndefinedInput, "random_game needs n, actions, M >= 1 and W >= 0");
  const std::size_t lo_actions = opts.min_actions == 0 ? opts.actions : std::min(opts.min_actions, opts.actions);

  std::mt19937_64 rng(opts.seed);
  auto uniform = [&rng](std::int64_t lo, std::int64_t hi) {
    return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng);
  };

  Game g;
  g.denominator = opts.M;
  g.owner.resize(opts.n);
  g.actions.resize(opts.n);
  for (std::size_t i = 0; i < opts.n; ++i) {
    if (opts.random_owners)
      g.owner[i] = uniform(0, 1) == 0 ? Player::Max : Player::Min;
    else
      g.owner[i] = i % 2 == 0 ? Player::Max : Player::Min;

    const auto k = static_cast<std::size_t>(
        uniform(static_cast<std::int64_t>(lo_actions), static_cast<std::int64_t>(opts.actions)));
    for (std::size_t a = 0; a < k; ++a) {
      Action act;
      act.reward = uniform(-opts.W, opts.W);
      act.next.assign(opts.n, 0);
      if (opts.deterministic) {
        act.next[static_cast<std::size_t>(uniform(0, static_cast<std::int64_t>(opts.n) - 1))] = opts.M;
      } else {
        const std::int64_t max_support = std::min<std::int64_t>(static_cast<std::int64_t>(opts.n), opts.M);
        const auto support = static_cast<std::size_t>(uniform(1, max_support));
        std::vector<std::size_t> states(opts.n);
        std::iota(states.begin(), states.end(), std::size_t{0});
        std::shuffle(states.begin(), states.end(), rng);
        states.resize(support);
        for (std::size_t s : states) act.next[s] = 1;
        for (std::int64_t unit = static_cast<std::int64_t>(support); unit < opts.M; ++unit)
          act.next[states[static_cast<std::size_t>(uniform(0, static_cast<std::int64_t>(support) - 1))]] += 1;
      }
      g.actions[i].push_back(std::move(act));
    }
  }
  return g;
}

}  // namespace blackwell
