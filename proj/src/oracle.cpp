#include "blackwell/oracle.hpp"

#include <algorithm>

namespace blackwell {

namespace {

// Indices of distinct elements of `items` (by ==) and, for each item, its class.
template <class T>
std::pair<std::vector<std::size_t>, std::vector<std::size_t>> classify(const std::vector<const T*>& items) {
  std::vector<std::size_t> reps, cls(items.size());
  for (std::size_t k = 0; k < items.size(); ++k) {
    std::size_t c = 0;
    while (c < reps.size() && !(*items[reps[c]] == *items[k])) ++c;
    if (c == reps.size()) reps.push_back(k);
    cls[k] = c;
  }
  return {reps, cls};
}

// 1 - scale * (1 - alpha), floored at 0.
Rational scaled(const Rational& alpha, const Rational& scale) {
  Rational t = Rational(1) - scale * (Rational(1) - alpha);
  return t < 0 ? Rational(0) : t;
}

class Recorder {
 public:
  explicit Recorder(VerifyReport& r) : report_(r) {}

  void pass(const std::string& name) { entry(name).evaluated++; }
  void fail(const std::string& name, Violation v) {
    auto& e = entry(name);
    e.evaluated++;
    e.failed++;
    v.check = name;
    report_.violations.push_back(std::move(v));
  }
  void record(const std::string& name, bool ok, Violation v) {
    if (ok)
      pass(name);
    else
      fail(name, std::move(v));
  }

 private:
  CheckSummary& entry(const std::string& name) {
    for (auto& c : report_.checks)
      if (c.name == name) return c;
    report_.checks.push_back(CheckSummary{name, 0, 0});
    return report_.checks.back();
  }
  VerifyReport& report_;
};

}  // namespace

Oracle::Oracle(Game game, OracleOptions opts) : game_(std::move(game)), opts_(std::move(opts)) {
  params_ = validate(game_);
  const std::uint64_t count = profile_count(game_);
  // Unordered pairs per state must stay within the cap.
  const bool over = count > 2'000'000'000ULL || count * (count - 1) / 2 > opts_.max_pairs_per_state;
  if (over)
    throw Error(ErrorKind::Scale, "oracle needs " + std::to_string(count) + " profiles; pair cap per state is " +
                                      std::to_string(opts_.max_pairs_per_state));
  profiles_ = enumerate_profiles(game_);
  kind_ = params_.deterministic ? DeltaKind::Deterministic : DeltaKind::Stochastic;
  parts_.reserve(profiles_.size());
  value_fns_.reserve(profiles_.size());
  for (const auto& p : profiles_) {
    parts_.push_back(params_.deterministic ? value_parts_det(game_, p) : value_parts_sto(game_, p));
    std::vector<RationalFn> fns;
    fns.reserve(game_.size());
    for (const auto& part : parts_.back()) fns.push_back(to_value_fn(part, kind_, game_.denominator));
    value_fns_.push_back(std::move(fns));
  }
}

const CrossingReport& Oracle::last_crossing() {
  if (crossing_) return *crossing_;
  CrossingReport rep;
  const std::uint64_t P = profiles_.size();
  const RatInterval unit(Rational(0), Rational(1));
  std::optional<RealRoot> best;
  for (std::size_t s = 0; s < game_.size(); ++s) {
    rep.profile_pair_count += P * (P - 1) / 2;
    std::vector<const RationalFn*> fns;
    fns.reserve(P);
    for (const auto& v : value_fns_) fns.push_back(&v[s]);
    const auto reps = classify(fns).first;
    for (std::size_t x = 0; x < reps.size(); ++x) {
      for (std::size_t y = x + 1; y < reps.size(); ++y) {
        ++rep.pair_count;
        const RationalFn diff = *fns[reps[x]] - *fns[reps[y]];
        auto roots = real_roots(diff.num(), unit);
        if (roots.empty()) continue;
        PairCrossing pc;
        pc.state = s;
        pc.a = profiles_[reps[x]];
        pc.b = profiles_[reps[y]];
        for (const auto& r : roots) pc.roots.push_back(r.interval());
        rep.root_count += roots.size();
        if (!best || compare(roots.back(), *best) > 0) best = roots.back();
        rep.entries.push_back(std::move(pc));
      }
    }
  }
  if (best) {
    best->refine(opts_.crossing_width);
    rep.last_crossing = best->interval();
    rep.last_root = best;
  }
  crossing_ = std::move(rep);
  return *crossing_;
}

Rational Oracle::alpha_star() {
  const auto& rep = last_crossing();
  if (!rep.last_crossing) return Rational(1, 2);
  return (rep.last_crossing->hi() + 1) / 2;
}

std::vector<Profile> Oracle::optimal_profiles_at(const Rational& alpha) {
  const SolveResult sr = strategy_iteration_exact(game_, alpha);
  std::vector<std::vector<std::size_t>> choices(game_.size());
  for (std::size_t i = 0; i < game_.size(); ++i)
    for (std::size_t a = 0; a < game_.actions[i].size(); ++a)
      if (one_step_value(game_, i, a, alpha, sr.exact_values) == sr.exact_values[i]) choices[i].push_back(a);

  std::vector<Profile> out;
  std::vector<std::size_t> idx(game_.size(), 0);
  while (true) {
    Profile p;
    p.choice.resize(game_.size());
    for (std::size_t i = 0; i < game_.size(); ++i) p.choice[i] = choices[i][idx[i]];
    out.push_back(std::move(p));
    std::size_t i = game_.size();
    while (i-- > 0) {
      if (++idx[i] < choices[i].size()) break;
      idx[i] = 0;
    }
    if (i == static_cast<std::size_t>(-1)) break;
  }
  return out;
}

const std::vector<Profile>& Oracle::blackwell_optimal_profiles() {
  if (!blackwell_) blackwell_ = optimal_profiles_at(alpha_star());
  return *blackwell_;
}

bool Oracle::is_blackwell_optimal(const Profile& p) {
  const auto& set = blackwell_optimal_profiles();
  return std::binary_search(set.begin(), set.end(), p);
}

void Oracle::ensure_laurent(int d) {
  if (d <= laurent_order_) return;
  laurent_.assign(profiles_.size(), {});
  for (std::size_t k = 0; k < profiles_.size(); ++k) {
    laurent_[k].reserve(game_.size());
    for (const auto& f : value_fns_[k]) laurent_[k].push_back(laurent_at_one(f, d));
  }
  laurent_order_ = d;
}

const std::vector<Profile>& Oracle::d_sensitive_optimal_profiles(int d) {
  if (d < -1) throw Error(ErrorKind::UndefinedInput, "sensitivity order must be >= -1");
  if (auto it = d_sets_.find(d); it != d_sets_.end()) return it->second;
  ensure_laurent(d);
  const std::size_t n = game_.size();
  const auto len = static_cast<std::ptrdiff_t>(d + 2);
  auto lex_less = [&](std::size_t x, std::size_t y, std::size_t s) {
    const auto& cx = laurent_[x][s].coeffs;
    const auto& cy = laurent_[y][s].coeffs;
    return std::lexicographical_compare(cx.begin(), cx.begin() + len, cy.begin(), cy.begin() + len);
  };
  auto same = [&](std::size_t x, std::size_t y, std::size_t s) {
    return std::equal(laurent_[x][s].coeffs.begin(), laurent_[x][s].coeffs.begin() + len,
                      laurent_[y][s].coeffs.begin());
  };

  std::vector<bool> ok(profiles_.size(), true);
  // A profile survives a deviating player if, among all profiles that agree
  // with it on the other player's states, its expansion is extremal everywhere.
  for (Player deviator : {Player::Min, Player::Max}) {
    std::map<std::vector<std::size_t>, std::vector<std::size_t>> groups;
    for (std::size_t k = 0; k < profiles_.size(); ++k) {
      std::vector<std::size_t> key;
      for (std::size_t i = 0; i < n; ++i)
        if (game_.owner[i] != deviator) key.push_back(profiles_[k].choice[i]);
      groups[key].push_back(k);
    }
    for (const auto& [key, members] : groups) {
      for (std::size_t s = 0; s < n; ++s) {
        std::size_t ext = members.front();
        for (std::size_t k : members) {
          const bool better = deviator == Player::Min ? lex_less(k, ext, s) : lex_less(ext, k, s);
          if (better) ext = k;
        }
        for (std::size_t k : members)
          if (!same(k, ext, s)) ok[k] = false;
      }
    }
  }
  std::vector<Profile> out;
  for (std::size_t k = 0; k < profiles_.size(); ++k)
    if (ok[k]) out.push_back(profiles_[k]);
  return d_sets_.emplace(d, std::move(out)).first->second;
}

bool Oracle::is_d_sensitive_optimal(const Profile& p, int d) {
  const auto& set = d_sensitive_optimal_profiles(d);
  return std::binary_search(set.begin(), set.end(), p);
}

bool Oracle::veinott_check() {
  const int d = std::max(-1, static_cast<int>(game_.size()) - 2);
  return d_sensitive_optimal_profiles(d) == blackwell_optimal_profiles();
}

bool Oracle::unichain() {
  if (!unichain_) unichain_ = game_is_unichain(game_);
  return *unichain_;
}

VerifyReport Oracle::verify_bounds(const VerifyOptions& vopts) {
  VerifyReport report;
  Recorder rec(report);
  const long n = static_cast<long>(params_.n);
  const Integer W = params_.W_bound();
  const Integer M = params_.M;
  const bool uni = unichain();

  std::vector<BoundReport> bw_bounds;
  for (auto& b : all_bounds(params_, std::nullopt, vopts.constants, false))
    if (b.alpha && !b.applicability.parametric_constants) bw_bounds.push_back(b);
  report.bounds_checked = bw_bounds;

  struct DBound {
    std::string name;
    int d;
    Rational alpha;
  };
  std::vector<DBound> d_bounds;
  for (int d : vopts.sensitivities) {
    if (params_.deterministic) d_bounds.push_back({"det_d_root_free", d, det_d_bound(n, W, d)});
    if (uni) d_bounds.push_back({"sto_unichain_d_root_free", d, sto_unichain_d_bound(n, W, M, d)});
  }

  // Crossing-level check: the largest crossing sits at or below every bound.
  const auto& cross = last_crossing();
  report.last_crossing = cross.last_crossing;
  for (const auto& b : bw_bounds) {
    const Rational t = scaled(*b.alpha, vopts.gap_scale);
    const bool ok = !cross.last_root || compare(*cross.last_root, t) <= 0;
    Violation v;
    v.root = cross.last_crossing;
    v.detail = "last crossing exceeds " + std::string(to_string(b.method)) + " threshold " + to_string(t);
    rec.record("last_crossing_below_bound", ok, std::move(v));
  }

  // Per-delta checks on the unreduced polynomials.
  const RatInterval unit(Rational(0), Rational(1));
  for (std::size_t s = 0; s < game_.size(); ++s) {
    std::vector<const ValueParts*> parts;
    parts.reserve(profiles_.size());
    for (const auto& p : parts_) parts.push_back(&p[s]);
    const auto reps = classify(parts).first;
    for (std::size_t x = 0; x < reps.size(); ++x) {
      for (std::size_t y = x + 1; y < reps.size(); ++y) {
        const ValueParts& pa = *parts[reps[x]];
        const ValueParts& pb = *parts[reps[y]];
        DeltaRecord delta{delta_poly(pa, pb), kind_, pa.q, pb.q, s, profiles_[reps[x]], profiles_[reps[y]]};
        if (delta.poly.is_zero()) continue;
        auto violation = [&](std::string detail, std::optional<RatInterval> root = std::nullopt) {
          Violation v;
          v.state = s;
          v.a = delta.a;
          v.b = delta.b;
          v.root = std::move(root);
          v.detail = std::move(detail) + "; delta = " + to_string(delta.poly, 'a');
          return v;
        };

        const auto coeff = coefficient_bound_violation(delta, params_);
        rec.record("coefficient_bounds", !coeff, coeff ? violation(*coeff) : Violation{});

        const auto roots = real_roots(delta.poly, unit);
        std::optional<RealRoot> top;
        if (!roots.empty()) top = roots.back();
        auto root_free_above = [&](const Rational& t) { return !top || compare(*top, t) <= 0; };
        auto top_interval = [&]() -> std::optional<RatInterval> {
          if (!top) return std::nullopt;
          return top->interval();
        };

        for (const auto& b : bw_bounds) {
          const Rational t = scaled(*b.alpha, vopts.gap_scale);
          const bool ok = root_free_above(t);
          rec.record(std::string("root_free:") + to_string(b.method), ok,
                     ok ? Violation{} : violation("root above " + to_string(t), top_interval()));
        }

        const Rational rho = instance_gap(delta, params_) * vopts.gap_scale;
        const Rational t_gap = rho >= 1 ? Rational(0) : Rational(1) - rho;
        {
          const bool ok = root_free_above(t_gap);
          rec.record("instance_gap", ok,
                     ok ? Violation{} : violation("root above 1 - rho = " + to_string(t_gap), top_interval()));
        }

        // (1 - alpha)-order of the value difference: one pole per side
        // whenever every chain has a single recurrent class.
        const int lead = multiplicity_at_one(delta.poly) - 2;
        if (params_.deterministic || uni) {
          for (const auto& db : d_bounds) {
            if (lead > db.d) continue;
            const Rational t = scaled(db.alpha, vopts.gap_scale);
            const bool ok = root_free_above(t);
            rec.record(db.name, ok,
                       ok ? Violation{}
                          : violation("d = " + std::to_string(db.d) + ": root above " + to_string(t), top_interval()));
          }
        }
      }
    }
  }

  // Solving just above each threshold lands in the exact optimal sets.
  for (const auto& b : bw_bounds) {
    BoundReport sb = b;
    sb.alpha = scaled(*b.alpha, vopts.gap_scale);
    const Rational a = alpha_above(sb);
    const SolveResult sr = strategy_iteration_exact(game_, a);
    const bool ok = is_blackwell_optimal(sr.profile);
    Violation v;
    v.a = sr.profile;
    v.detail = "profile solved at " + to_string(a) + " above " + to_string(b.method) + " is not Blackwell optimal";
    rec.record("blackwell_solve_membership", ok, std::move(v));
  }
  if (params_.deterministic || uni) {
    for (const auto& db : d_bounds) {
      BoundReport sb;
      sb.alpha = scaled(db.alpha, vopts.gap_scale);
      const Rational a = alpha_above(sb);
      const SolveResult sr = strategy_iteration_exact(game_, a);
      const bool ok = is_d_sensitive_optimal(sr.profile, db.d);
      Violation v;
      v.a = sr.profile;
      v.detail = "profile solved at " + to_string(a) + " is not " + std::to_string(db.d) + "-sensitive optimal";
      rec.record("d_solve_membership", ok, std::move(v));
    }
  }
  return report;
}

CrossingReport last_crossing(const Game& game, const OracleOptions& opts) {
  Oracle o(game, opts);
  return o.last_crossing();
}

std::vector<Profile> blackwell_optimal_profiles(const Game& game, const OracleOptions& opts) {
  Oracle o(game, opts);
  return o.blackwell_optimal_profiles();
}

std::vector<Profile> d_sensitive_optimal_profiles(const Game& game, int d, const OracleOptions& opts) {
  Oracle o(game, opts);
  return o.d_sensitive_optimal_profiles(d);
}

VerifyReport verify_bounds(const Game& game, const VerifyOptions& vopts, const OracleOptions& opts) {
  Oracle o(game, opts);
  return o.verify_bounds(vopts);
}

bool veinott_check(const Game& game, const OracleOptions& opts) {
  Oracle o(game, opts);
  return o.veinott_check();
}

}  // namespace blackwell
