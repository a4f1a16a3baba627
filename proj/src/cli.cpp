#include "blackwell/cli.hpp"

#include <CLI11.hpp>

#include <iomanip>
#include <ostream>
#include <sstream>

#include "blackwell/delta.hpp"
#include "blackwell/io.hpp"
#include "blackwell/oracle.hpp"
#include "blackwell/solver.hpp"
#include "blackwell/thresholds.hpp"

namespace blackwell {

namespace {

std::string fmt(const Rational& q) {
  std::ostringstream os;
  os << q.get_str() << " (" << std::setprecision(12) << q.get_d() << ")";
  return os.str();
}

std::string fmt(const Profile& p) {
  std::string s = "(";
  for (std::size_t i = 0; i < p.choice.size(); ++i) s += (i ? "," : "") + std::to_string(p.choice[i]);
  return s + ")";
}

std::string fmt(const RatInterval& iv) { return "(" + iv.lo().get_str() + ", " + iv.hi().get_str() + ")"; }

std::string fmt_set(const std::vector<Profile>& set) {
  std::string s = "{";
  for (std::size_t i = 0; i < set.size(); ++i) s += (i ? " " : "") + fmt(set[i]);
  return s + "}";
}

std::string flags(const BoundReport& b) {
  std::string s;
  if (b.applicability.deterministic_only) s += " deterministic-only";
  if (b.applicability.unichain_only) s += " unichain-only";
  if (b.applicability.parametric_constants) s += " parametric";
  return s;
}

void print_bound(std::ostream& out, const BoundReport& b, const char* prefix = "  ") {
  out << prefix << std::left << std::setw(24) << to_string(b.method);
  if (b.alpha) out << " alpha = " << b.alpha->get_str();
  out << "  -log(1-alpha) <= " << std::setprecision(10) << b.neg_log_one_minus_alpha;
  const std::string f = flags(b);
  if (!f.empty()) out << "  [" << f.substr(1) << "]";
  out << "\n";
}

Json report_base(const std::string& command) { return Json{{"schema", kReportSchema}, {"command", command}}; }

std::vector<Json> sets_json(const std::vector<Profile>& set) {
  std::vector<Json> out;
  for (const auto& p : set) out.push_back(to_json(p));
  return out;
}

void add_constant_flags(CLI::App* sub, Constants& c) {
  sub->add_option("--epsilon", c.epsilon, "epsilon in the Mahler-measure bound")->check(CLI::PositiveNumber);
  sub->add_option("--a-eps", c.a_eps, "constant a_eps in the Mahler-measure bound");
  sub->add_option("--bek-a", c.bek_a, "constant a in the multiplicity bound")->check(CLI::PositiveNumber);
  sub->add_flag("--allow-parametric", c.allow_parametric, "let bounds with unknown constants be selected");
}

// Unichain status for threshold selection; too many profiles counts as unknown.
bool unichain_or_false(const Game& g) {
  try {
    return game_is_unichain(g);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::Scale) return false;
    throw;
  }
}

}  // namespace

int run_command(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Blackwell and d-sensitive thresholds for perfect-information stochastic games", "blackwell-lab"};
  app.require_subcommand(1);
  std::string json_path;
  app.add_option("--json", json_path, "write a machine-readable report to this path");

  std::string file;
  Constants constants;

  auto* params_cmd = app.add_subcommand("params", "print game parameters");
  bool check_unichain = false;
  params_cmd->add_option("file", file, "game file")->required();
  params_cmd->add_flag("--check-unichain", check_unichain, "also test every profile for a single recurrent class");

  auto* bounds_cmd = app.add_subcommand("bounds", "list every applicable threshold");
  std::optional<int> bounds_d;
  bounds_cmd->add_option("file", file, "game file")->required();
  bounds_cmd->add_option("--d", bounds_d, "sensitivity order (omit for Blackwell)")->check(CLI::Range(-1, 1000000));
  add_constant_flags(bounds_cmd, constants);

  auto* solve_cmd = app.add_subcommand("solve", "solve the discounted game at one discount factor");
  std::string alpha_text, method = "si";
  double tol = 1e-10;
  std::size_t max_iter = 1'000'000;
  solve_cmd->add_option("file", file, "game file")->required();
  solve_cmd->add_option("--alpha", alpha_text, "discount factor, e.g. 7/10")->required();
  solve_cmd->add_option("--method", method, "vi or si")->check(CLI::IsMember({"vi", "si"}));
  solve_cmd->add_option("--tol", tol, "value iteration tolerance")->check(CLI::PositiveNumber);
  solve_cmd->add_option("--max-iter", max_iter, "value iteration sweep limit");

  auto* bw_cmd = app.add_subcommand("blackwell", "Blackwell-optimal profile from a threshold");
  std::string bound_choice = "best";
  bw_cmd->add_option("file", file, "game file")->required();
  bw_cmd->add_option("--bound", bound_choice, "lagrange, mahler, multiplicity or best")
      ->check(CLI::IsMember({"lagrange", "mahler", "multiplicity", "best"}));
  add_constant_flags(bw_cmd, constants);

  auto* dopt_cmd = app.add_subcommand("dopt", "d-sensitive optimal profile from a threshold");
  int dopt_d = -1;
  dopt_cmd->add_option("file", file, "game file")->required();
  dopt_cmd->add_option("--d", dopt_d, "sensitivity order")->required()->check(CLI::Range(-1, 1000000));
  add_constant_flags(dopt_cmd, constants);

  auto* oracle_cmd = app.add_subcommand("oracle", "exhaustive crossings and optimal sets");
  std::uint64_t pair_cap = OracleOptions{}.max_pairs_per_state;
  oracle_cmd->add_option("file", file, "game file")->required();
  oracle_cmd->add_option("--max-pairs", pair_cap, "profile pairs allowed per state");

  auto* verify_cmd = app.add_subcommand("verify", "check every rigorous bound against the oracle");
  std::string gap_scale = "1";
  verify_cmd->add_option("file", file, "game file")->required();
  verify_cmd->add_option("--max-pairs", pair_cap, "profile pairs allowed per state");
  verify_cmd->add_option("--gap-scale", gap_scale, "multiply every 1 - alpha by this factor (negative controls)");
  add_constant_flags(verify_cmd, constants);

  auto* gen_cmd = app.add_subcommand("gen", "write a seeded random game");
  RandomGameOptions gen;
  std::string out_path;
  bool det = false;
  gen_cmd->add_option("--n", gen.n, "number of states")->required()->check(CLI::PositiveNumber);
  gen_cmd->add_option("--actions", gen.actions, "actions per state (maximum with --min-actions)")
      ->required()
      ->check(CLI::PositiveNumber);
  gen_cmd->add_option("--min-actions", gen.min_actions, "draw each state's action count from [min, actions]");
  gen_cmd->add_option("--w", gen.W, "reward bound")->required()->check(CLI::NonNegativeNumber);
  gen_cmd->add_option("--m", gen.M, "transition denominator")->required()->check(CLI::PositiveNumber);
  gen_cmd->add_flag("--det", det, "single successor per action");
  gen_cmd->add_flag("--random-owners", gen.random_owners, "draw owners at random instead of alternating");
  gen_cmd->add_option("--seed", gen.seed, "random seed")->required();
  gen_cmd->add_option("-o,--output", out_path, "output game file")->required();

  for (auto* sub : app.get_subcommands({})) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  Json report;
  int status = 0;
  try {
    if (params_cmd->parsed()) {
      const Game g = parse_game_file(file);
      const GameParams p = validate(g);
      report = report_base("params");
      report["n"] = p.n;
      report["W"] = p.W;
      report["M"] = p.M;
      report["deterministic"] = p.deterministic;
      report["profiles"] = profile_count(g);
      out << "n = " << p.n << "\nW = " << p.W << (p.W == 0 ? " (bounds use 1)" : "") << "\nM = " << p.M
          << "\ndeterministic = " << (p.deterministic ? "true" : "false") << "\nprofiles = " << profile_count(g)
          << "\n";
      if (check_unichain) {
        const bool u = game_is_unichain(g);
        report["unichain"] = u;
        out << "unichain = " << (u ? "true" : "false") << "\n";
      }
    } else if (bounds_cmd->parsed()) {
      const Game g = parse_game_file(file);
      const GameParams p = validate(g);
      const bool uni = bounds_d ? unichain_or_false(g) : false;
      report = report_base("bounds");
      const auto all = all_bounds(p, bounds_d, constants, uni);
      Json cands = Json::array();
      out << (bounds_d ? "d = " + std::to_string(*bounds_d) + " thresholds" : std::string("Blackwell thresholds"))
          << " for n = " << p.n << ", W = " << p.W_bound() << ", M = " << p.M
          << (p.deterministic ? ", deterministic" : "") << (uni ? ", unichain" : "") << "\n";
      for (const auto& b : all) {
        print_bound(out, b);
        cands.push_back(to_json(b));
      }
      report["candidates"] = cands;
      const BestBound best = best_bound(p, bounds_d, constants, uni);
      report["best"] = to_json(best.best);
      print_bound(out, best.best, "best: ");
    } else if (solve_cmd->parsed()) {
      const Game g = parse_game_file(file);
      const Rational alpha = parse_rational(alpha_text);
      if (!(alpha > 0 && alpha < 1)) throw Error(ErrorKind::Usage, "--alpha must lie in (0, 1)");
      const SolveResult r =
          method == "vi" ? value_iteration(g, alpha.get_d(), tol, max_iter) : strategy_iteration_exact(g, alpha);
      report = report_base("solve");
      report["result"] = to_json(r);
      out << "method = " << r.method << "\nalpha = " << alpha.get_str() << "\nprofile = " << fmt(r.profile)
          << "\niterations = " << r.iterations << "\n";
      if (method == "vi")
        out << "converged = " << (r.converged ? "true" : "false") << " (residual " << r.residual << ")\n";
      for (std::size_t i = 0; i < g.size(); ++i) {
        out << "v[" << i << "] = ";
        if (!r.exact_values.empty())
          out << fmt(r.exact_values[i]);
        else
          out << std::setprecision(12) << r.approx_values[i];
        out << "\n";
      }
    } else if (bw_cmd->parsed()) {
      const Game g = parse_game_file(file);
      const BoundChoice choice = bound_choice == "lagrange"       ? BoundChoice::Lagrange
                                 : bound_choice == "mahler"       ? BoundChoice::Mahler
                                 : bound_choice == "multiplicity" ? BoundChoice::Multiplicity
                                                                  : BoundChoice::Best;
      const BlackwellCertificate c = blackwell_solve(g, choice, constants);
      report = report_base("blackwell");
      report["certificate"] = to_json(c);
      print_bound(out, c.bound, "bound: ");
      out << "alpha_used = " << fmt(c.alpha_used) << "\nprofile = " << fmt(c.profile)
          << "\nstatus = " << (c.certified ? "certified" : "failed") << "\n";
    } else if (dopt_cmd->parsed()) {
      const Game g = parse_game_file(file);
      const SolveResult r = d_sensitive_solve(g, dopt_d, constants);
      report = report_base("dopt");
      report["d"] = dopt_d;
      report["result"] = to_json(r);
      out << "d = " << dopt_d << "\nmethod = " << r.method << "\nalpha = " << fmt(r.alpha)
          << "\nprofile = " << fmt(r.profile) << "\n";
    } else if (oracle_cmd->parsed()) {
      OracleOptions opts;
      opts.max_pairs_per_state = pair_cap;
      Oracle o(parse_game_file(file), opts);
      const CrossingReport& c = o.last_crossing();
      report = report_base("oracle");
      report["crossings"] = to_json(c);
      out << "profiles = " << o.profiles().size() << ", value-function pairs = " << c.pair_count
          << ", roots in (0,1) = " << c.root_count << "\n";
      if (c.last_crossing)
        out << "last crossing in " << fmt(*c.last_crossing) << " ~ " << std::setprecision(12)
            << c.last_crossing->midpoint().get_d() << "\n";
      else
        out << "last crossing: none\n";
      const auto& bw = o.blackwell_optimal_profiles();
      report["alpha_star"] = to_json(o.alpha_star());
      report["blackwell_set"] = sets_json(bw);
      out << "Blackwell-optimal profiles = " << fmt_set(bw) << "\n";
      Json dsets = Json::object();
      const int top = std::max(-1, static_cast<int>(o.game().size()) - 2);
      for (int d = -1; d <= top; ++d) {
        const auto& set = o.d_sensitive_optimal_profiles(d);
        dsets[std::to_string(d)] = sets_json(set);
        out << d << "-sensitive optimal profiles (stationary deviations) = " << fmt_set(set) << "\n";
      }
      report["d_sensitive_sets"] = dsets;
    } else if (verify_cmd->parsed()) {
      OracleOptions opts;
      opts.max_pairs_per_state = pair_cap;
      VerifyOptions vopts;
      vopts.constants = constants;
      vopts.gap_scale = parse_rational(gap_scale);
      if (vopts.gap_scale <= 0) throw Error(ErrorKind::Usage, "--gap-scale must be positive");
      Oracle o(parse_game_file(file), opts);
      const VerifyReport v = o.verify_bounds(vopts);
      report = report_base("verify");
      report["report"] = to_json(v);
      const auto& c = o.last_crossing();
      for (const auto& b : v.bounds_checked) {
        out << "last crossing ";
        if (c.last_root && c.last_root->poly().degree() == 1) {
          const auto& lp = c.last_root->poly();
          Rational root(-lp.coeffs()[0], lp.coeffs()[1]);
          root.canonicalize();
          out << root.get_str();
        } else if (c.last_crossing) {
          out << "< " << c.last_crossing->hi().get_str();
        } else {
          out << "none";
        }
        out << " <= " << b.alpha->get_str() << " (" << to_string(b.method) << ")\n";
      }
      for (const auto& ch : v.checks)
        out << "  " << std::left << std::setw(34) << ch.name << " evaluated " << ch.evaluated << ", failed "
            << ch.failed << "\n";
      for (const auto& x : v.violations) {
        out << "VIOLATION " << x.check << " at state " << x.state;
        if (x.a) out << " a = " << fmt(*x.a);
        if (x.b) out << " b = " << fmt(*x.b);
        if (x.root) out << " root in " << fmt(*x.root);
        out << ": " << x.detail << "\n";
      }
      out << (v.ok() ? "verification passed\n" : "verification FAILED\n");
      if (!v.ok()) status = 2;
    } else if (gen_cmd->parsed()) {
      gen.deterministic = det;
      const Game g = random_game(gen);
      write_text_file(out_path, dump_game(g));
      report = report_base("gen");
      report["output"] = out_path;
      report["game"] = game_to_json(g);
      out << "wrote " << out_path << "\n";
    }
    if (!json_path.empty()) write_text_file(json_path, report.dump(2) + "\n");
  } catch (const Error& e) {
    err << "error (" << to_string(e.kind()) << "): " << e.what() << "\n";
    return 1;
  }
  return status;
}

}  // namespace blackwell
