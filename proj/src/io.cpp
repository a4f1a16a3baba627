#include "blackwell/io.hpp"

#include <fstream>
#include <limits>
#include <sstream>

namespace blackwell {

namespace {

[[noreturn]] void schema_error(const std::string& pointer, const std::string& msg) {
  throw Error(ErrorKind::Parse, (pointer.empty() ? std::string("/") : pointer) + ": " + msg);
}

std::int64_t get_int(const Json& j, const std::string& pointer) {
  if (!j.is_number_integer()) schema_error(pointer, "expected an integer");
  if (j.is_number_unsigned() && j.get<std::uint64_t>() > static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max()))
    schema_error(pointer, "integer out of range");
  return j.get<std::int64_t>();
}

const Json& member(const Json& obj, const char* key, const std::string& pointer) {
  auto it = obj.find(key);
  if (it == obj.end()) schema_error(pointer, std::string("missing field \"") + key + "\"");
  return *it;
}

}  // namespace

Game parse_game(const std::string& text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::Parse, std::string("syntax error: ") + e.what());
  }
  if (!doc.is_object()) schema_error("", "expected an object");
  const std::int64_t n = get_int(member(doc, "n", ""), "/n");
  if (n < 1) schema_error("/n", "must be at least 1");
  const std::int64_t M = get_int(member(doc, "denominator", ""), "/denominator");
  if (M < 1) schema_error("/denominator", "must be at least 1");
  const Json& states = member(doc, "states", "");
  if (!states.is_array()) schema_error("/states", "expected an array");
  if (states.size() != static_cast<std::size_t>(n))
    schema_error("/states", "has " + std::to_string(states.size()) + " entries, n is " + std::to_string(n));

  Game g;
  g.denominator = M;
  for (std::size_t i = 0; i < states.size(); ++i) {
    const std::string sp = "/states/" + std::to_string(i);
    const Json& st = states[i];
    if (!st.is_object()) schema_error(sp, "expected an object");
    const Json& owner = member(st, "owner", sp);
    if (owner == "min")
      g.owner.push_back(Player::Min);
    else if (owner == "max")
      g.owner.push_back(Player::Max);
    else
      schema_error(sp + "/owner", "expected \"min\" or \"max\"");

    const Json& acts = member(st, "actions", sp);
    if (!acts.is_array() || acts.empty()) schema_error(sp + "/actions", "expected a nonempty array");
    std::vector<Action> row;
    for (std::size_t a = 0; a < acts.size(); ++a) {
      const std::string ap = sp + "/actions/" + std::to_string(a);
      const Json& act = acts[a];
      if (!act.is_object()) schema_error(ap, "expected an object");
      Action out;
      out.reward = get_int(member(act, "reward", ap), ap + "/reward");
      if (out.reward == std::numeric_limits<std::int64_t>::min()) schema_error(ap + "/reward", "integer out of range");
      const bool has_next = act.contains("next");
      const bool has_short = act.contains("next_state");
      if (has_next == has_short) schema_error(ap, "exactly one of \"next\" and \"next_state\" is required");
      if (has_next) {
        const Json& nx = act["next"];
        if (!nx.is_array() || nx.size() != static_cast<std::size_t>(n))
          schema_error(ap + "/next", "expected an array of " + std::to_string(n) + " integers");
        std::int64_t sum = 0;
        for (std::size_t j = 0; j < nx.size(); ++j) {
          const std::int64_t x = get_int(nx[j], ap + "/next/" + std::to_string(j));
          if (x < 0 || x > M)
            throw Error(ErrorKind::Stochasticity, ap + "/next/" + std::to_string(j) + ": entry outside [0, denominator]");
          out.next.push_back(x);
          sum += x;
        }
        if (sum != M)
          throw Error(ErrorKind::Stochasticity, ap + "/next: state " + std::to_string(i) + ", action " +
                                                    std::to_string(a) + " sums to " + std::to_string(sum) +
                                                    ", expected " + std::to_string(M));
      } else {
        const std::int64_t t = get_int(act["next_state"], ap + "/next_state");
        if (t < 0 || t >= n) schema_error(ap + "/next_state", "state index out of range");
        out.next.assign(static_cast<std::size_t>(n), 0);
        out.next[static_cast<std::size_t>(t)] = M;
      }
      row.push_back(std::move(out));
    }
    g.actions.push_back(std::move(row));
  }
  validate(g);
  return g;
}

Game parse_game_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return parse_game(ss.str());
  } catch (const Error& e) {
    throw Error(e.kind(), path + ": " + e.what());
  }
}

Json game_to_json(const Game& game) {
  Json states = Json::array();
  for (std::size_t i = 0; i < game.size(); ++i) {
    Json acts = Json::array();
    for (const auto& a : game.actions[i]) acts.push_back(Json{{"reward", a.reward}, {"next", a.next}});
    states.push_back(Json{{"owner", game.owner[i] == Player::Max ? "max" : "min"}, {"actions", acts}});
  }
  return Json{{"n", game.size()}, {"denominator", game.denominator}, {"states", states}};
}

std::string dump_game(const Game& game) { return game_to_json(game).dump(2) + "\n"; }

void write_text_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path);
  out << contents;
  if (!out) throw Error(ErrorKind::Io, "write failed for " + path);
}

Rational parse_rational(const std::string& text) {
  auto fail = [&]() -> Rational { throw Error(ErrorKind::Usage, "not a rational number: \"" + text + "\""); };
  if (text.empty()) return fail();
  const auto dot = text.find('.');
  try {
    if (dot == std::string::npos) {
      Rational q(text, 10);
      if (q.get_den() == 0) return fail();
      q.canonicalize();
      return q;
    }
    std::string digits = text.substr(0, dot) + text.substr(dot + 1);
    const std::size_t frac = text.size() - dot - 1;
    if (digits.empty() || digits == "-" || digits.find_first_of("./eE") != std::string::npos) return fail();
    Integer num(digits, 10);
    Integer den;
    mpz_ui_pow_ui(den.get_mpz_t(), 10, frac);
    Rational q(num, den);
    q.canonicalize();
    return q;
  } catch (const std::invalid_argument&) {
    return fail();
  }
}

Json to_json(const Rational& q) { return Json{{"num", q.get_num().get_str()}, {"den", q.get_den().get_str()}}; }

Rational rational_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("num") || !j.contains("den") || !j["num"].is_string() || !j["den"].is_string())
    throw Error(ErrorKind::Parse, "expected {\"num\": string, \"den\": string}");
  try {
    Rational q(Integer(j["num"].get<std::string>(), 10), Integer(j["den"].get<std::string>(), 10));
    if (q.get_den() == 0) throw Error(ErrorKind::Parse, "zero denominator");
    q.canonicalize();
    return q;
  } catch (const std::invalid_argument&) {
    throw Error(ErrorKind::Parse, "malformed rational digits");
  }
}

Json to_json(const Profile& p) { return Json(p.choice); }

Json to_json(const RatInterval& iv) { return Json{{"lo", to_json(iv.lo())}, {"hi", to_json(iv.hi())}}; }

Json to_json(const BoundReport& b) {
  Json j;
  j["method"] = to_string(b.method);
  j["alpha"] = b.alpha ? to_json(*b.alpha) : Json(nullptr);
  j["neg_log_one_minus_alpha"] = b.neg_log_one_minus_alpha;
  j["applicability"] = {{"deterministic_only", b.applicability.deterministic_only},
                        {"unichain_only", b.applicability.unichain_only},
                        {"parametric_constants", b.applicability.parametric_constants}};
  Json p{{"n", b.params.n}, {"W", b.params.W}, {"M", b.params.M}};
  p["d"] = b.params.d ? Json(*b.params.d) : Json(nullptr);
  if (b.params.epsilon) p["epsilon"] = *b.params.epsilon;
  if (b.params.a_eps) p["a_eps"] = *b.params.a_eps;
  if (b.params.a) p["a"] = *b.params.a;
  j["params_used"] = p;
  return j;
}

Json to_json(const CrossingReport& c) {
  Json entries = Json::array();
  for (const auto& e : c.entries) {
    Json roots = Json::array();
    for (const auto& r : e.roots) roots.push_back(to_json(r));
    entries.push_back(Json{{"state", e.state}, {"a", to_json(e.a)}, {"b", to_json(e.b)}, {"roots", roots}});
  }
  Json j;
  j["last_crossing"] = c.last_crossing ? to_json(*c.last_crossing) : Json(nullptr);
  j["pair_count"] = c.pair_count;
  j["profile_pair_count"] = c.profile_pair_count;
  j["root_count"] = c.root_count;
  j["entries"] = entries;
  return j;
}

Json to_json(const SolveResult& s) {
  Json j;
  j["method"] = s.method;
  j["alpha"] = to_json(s.alpha);
  j["profile"] = to_json(s.profile);
  if (!s.exact_values.empty()) {
    Json vals = Json::array();
    for (const auto& v : s.exact_values) vals.push_back(to_json(v));
    j["values"] = vals;
  }
  j["approx_values"] = s.approx_values;
  j["iterations"] = s.iterations;
  j["converged"] = s.converged;
  if (s.method == "vi") j["residual"] = s.residual;
  return j;
}

Json to_json(const BlackwellCertificate& c) {
  Json vals = Json::array();
  for (const auto& v : c.values) vals.push_back(to_json(v));
  return Json{{"profile", to_json(c.profile)},
              {"alpha_used", to_json(c.alpha_used)},
              {"bound", to_json(c.bound)},
              {"values", vals},
              {"status", c.certified ? "certified" : "failed"}};
}

Json to_json(const VerifyReport& v) {
  Json checks = Json::array();
  for (const auto& c : v.checks) checks.push_back(Json{{"name", c.name}, {"evaluated", c.evaluated}, {"failed", c.failed}});
  Json viol = Json::array();
  for (const auto& x : v.violations) {
    Json e{{"check", x.check}, {"state", x.state}, {"detail", x.detail}};
    e["a"] = x.a ? to_json(*x.a) : Json(nullptr);
    e["b"] = x.b ? to_json(*x.b) : Json(nullptr);
    e["root"] = x.root ? to_json(*x.root) : Json(nullptr);
    viol.push_back(e);
  }
  Json bounds = Json::array();
  for (const auto& b : v.bounds_checked) bounds.push_back(to_json(b));
  Json j;
  j["ok"] = v.ok();
  j["last_crossing"] = v.last_crossing ? to_json(*v.last_crossing) : Json(nullptr);
  j["bounds"] = bounds;
  j["checks"] = checks;
  j["violations"] = viol;
  return j;
}

}  // namespace blackwell
