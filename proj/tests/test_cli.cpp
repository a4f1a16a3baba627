#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "blackwell/cli.hpp"
#include "blackwell/io.hpp"
#include "support.hpp"

using namespace blackwell;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code = 0;
  std::string out;
  std::string err;
};

Run run(std::initializer_list<std::string> args) {
  std::vector<std::string> storage{"blackwell-lab"};
  storage.insert(storage.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& s : storage) argv.push_back(s.c_str());
  std::ostringstream out, err;
  Run r;
  r.code = run_command(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct TempDir {
  fs::path path;
  TempDir() {
    static int counter = 0;
    path = fs::temp_directory_path() / ("blackwell-cli-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name, const std::string& contents) const {
    const fs::path p = path / name;
    std::ofstream(p, std::ios::binary) << contents;
    return p.string();
  }
  std::string at(const std::string& name) const { return (path / name).string(); }
};

const std::string kRunning = std::string(FIXTURES_DIR) + "/running_example.json";

const char* kMultichainSto = R"({
  "n": 2, "denominator": 2,
  "states": [
    {"owner": "max", "actions": [{"reward": 1, "next": [2, 0]}, {"reward": 0, "next": [1, 1]}]},
    {"owner": "min", "actions": [{"reward": 2, "next": [0, 2]}]}
  ]
})";

}  // namespace

TEST_CASE("game files parse with shorthand and diagnostics") {
  const Game g = parse_game_file(kRunning);
  CHECK(g.size() == 2);
  CHECK(g.denominator == 1);
  const Game ref = testing_support::running_example();
  CHECK(g.owner == ref.owner);
  for (std::size_t i = 0; i < g.size(); ++i)
    for (std::size_t a = 0; a < g.actions[i].size(); ++a) {
      CHECK(g.actions[i][a].reward == ref.actions[i][a].reward);
      CHECK(g.actions[i][a].next == ref.actions[i][a].next);
    }

  const Game explicit_next = parse_game(R"({"n": 2, "denominator": 3, "states": [
    {"owner": "max", "actions": [{"reward": 1, "next": [0, 3]}]},
    {"owner": "min", "actions": [{"reward": -1, "next": [3, 0]}]}]})");
  const Game shorthand = parse_game(R"({"n": 2, "denominator": 3, "states": [
    {"owner": "max", "actions": [{"reward": 1, "next_state": 1}]},
    {"owner": "min", "actions": [{"reward": -1, "next_state": 0}]}]})");
  CHECK(dump_game(explicit_next) == dump_game(shorthand));

  try {
    parse_game(R"({"n": 1, "denominator": 3, "states": [{"owner": "max", "actions": [{"reward": 1, "next": [2]}]}]})");
    FAIL("expected a stochasticity error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Stochasticity);
    CHECK(std::string(e.what()).find("state 0, action 0") != std::string::npos);
  }
  try {
    parse_game(R"({"n": 1, "denominator": 1, "states": [{"owner": "boss", "actions": []}]})");
    FAIL("expected a parse error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Parse);
    CHECK(std::string(e.what()).find("/states/0/owner") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_game("{not json"), Error);
  CHECK_THROWS_AS(parse_game_file("/nonexistent/game.json"), Error);
}

TEST_CASE("generated games round-trip through JSON") {
  for (std::uint64_t k = 0; k < 30; ++k) {
    const Game g = k % 2 ? testing_support::det_corpus_game(k) : testing_support::sto_corpus_game(k);
    const std::string text = dump_game(g);
    const Game h = parse_game(text);
    CHECK(dump_game(h) == text);
    CHECK(h.owner == g.owner);
    CHECK(h.denominator == g.denominator);
  }
}

TEST_CASE("exact rationals round-trip") {
  for (const char* s : {"0", "7/10", "-3/4", "30719/30720", "123456789012345678901234567890/7"}) {
    const Rational x = parse_rational(s);
    CHECK(rational_from_json(to_json(x)) == x);
    CHECK(rational_from_json(Json::parse(to_json(x).dump())) == x);
  }
  CHECK(parse_rational("0.25") == Rational(1, 4));
  CHECK_THROWS_AS(parse_rational("abc"), Error);
}

TEST_CASE("verify on the running example") {
  const Run r = run({"verify", kRunning});
  CHECK(r.code == 0);
  CHECK(r.out.find("last crossing 3/5 <= 719/720") != std::string::npos);
  CHECK(r.out.find("verification passed") != std::string::npos);

  const Run bad = run({"verify", kRunning, "--gap-scale", "500"});
  CHECK(bad.code == 2);
  CHECK(bad.out.find("VIOLATION") != std::string::npos);
}

TEST_CASE("coverage gap on a multichain stochastic game") {
  TempDir dir;
  const std::string f = dir.file("multi.json", kMultichainSto);
  const Run r = run({"bounds", f, "--d", "0"});
  CHECK(r.code == 1);
  CHECK(r.err.find("applicability") != std::string::npos);
  CHECK(r.err.find("--allow-parametric") != std::string::npos);
  CHECK(run({"bounds", f, "--d", "0", "--allow-parametric"}).code == 0);
  CHECK(run({"bounds", f}).code == 0);
  CHECK(run({"dopt", f, "--d", "0"}).code == 1);
}

TEST_CASE("gen is deterministic") {
  TempDir dir;
  const std::string a = dir.at("a.json"), b = dir.at("b.json");
  CHECK(run({"gen", "--n", "4", "--actions", "3", "--w", "5", "--m", "3", "--seed", "7", "-o", a}).code == 0);
  CHECK(run({"gen", "--n", "4", "--actions", "3", "--w", "5", "--m", "3", "--seed", "7", "-o", b}).code == 0);
  CHECK(slurp(a) == slurp(b));
  CHECK(!slurp(a).empty());
  CHECK(run({"gen", "--n", "4", "--actions", "3", "--w", "5", "--m", "3", "--seed", "8", "-o", b}).code == 0);
  CHECK(slurp(a) != slurp(b));
  CHECK(parse_game_file(a).size() == 4);
}

TEST_CASE("JSON reports") {
  TempDir dir;
  const std::string game = dir.at("g.json");
  const std::string rep = dir.at("r.json");

  // A stochastic (n = 3, W = 1, M = 2) game.
  Game g;
  g.denominator = 2;
  g.owner = {Player::Max, Player::Min, Player::Max};
  g.actions = {{{1, {1, 1, 0}}, {0, {0, 2, 0}}}, {{-1, {0, 1, 1}}}, {{1, {2, 0, 0}}}};
  write_text_file(game, dump_game(g));
  REQUIRE(run({"--json", rep, "bounds", game}).code == 0);
  const Json j = Json::parse(slurp(rep));
  CHECK(j["schema"] == "blackwell-lab/1");
  bool found = false;
  for (const auto& c : j["candidates"])
    if (c["method"] == "lagrange_sto_bw") {
      found = true;
      CHECK(c["alpha"]["num"] == "30719");
      CHECK(c["alpha"]["den"] == "30720");
    }
  CHECK(found);

  Game one;
  one.owner = {Player::Min};
  one.actions = {{{4, {1}}}};
  write_text_file(game, dump_game(one));
  REQUIRE(run({"--json", rep, "oracle", game}).code == 0);
  const Json o = Json::parse(slurp(rep));
  CHECK(o["crossings"]["last_crossing"].is_null());

  REQUIRE(run({"--json", rep, "oracle", kRunning}).code == 0);
  const Json c = Json::parse(slurp(rep));
  const Json& lc = c["crossings"]["last_crossing"];
  CHECK(rational_from_json(lc["lo"]) < Rational(3, 5));
  CHECK(rational_from_json(lc["hi"]) > Rational(3, 5));

  REQUIRE(run({"--json", rep, "blackwell", kRunning, "--bound", "lagrange"}).code == 0);
  const Json b = Json::parse(slurp(rep));
  CHECK(rational_from_json(b["certificate"]["alpha_used"]) == Rational(1439, 1440));

  CHECK(run({"--json", "/nonexistent/dir/r.json", "params", kRunning}).code == 1);
}

TEST_CASE("other subcommands") {
  Run r = run({"params", kRunning, "--check-unichain"});
  CHECK(r.code == 0);
  CHECK(r.out.find("n = 2") != std::string::npos);
  CHECK(r.out.find("unichain = false") != std::string::npos);

  r = run({"solve", kRunning, "--alpha", "7/10"});
  CHECK(r.code == 0);
  CHECK(r.out.find("v[0] = 35/3") != std::string::npos);
  r = run({"solve", kRunning, "--alpha", "9/10", "--method", "vi"});
  CHECK(r.code == 0);
  CHECK(r.out.find("converged = true") != std::string::npos);
  CHECK(run({"solve", kRunning, "--alpha", "1"}).code == 1);

  r = run({"blackwell", kRunning, "--bound", "lagrange"});
  CHECK(r.code == 0);
  CHECK(r.out.find("1439/1440") != std::string::npos);
  CHECK(run({"blackwell", kRunning, "--bound", "mahler"}).code == 1);
  CHECK(run({"blackwell", kRunning, "--bound", "mahler", "--allow-parametric"}).code == 0);

  r = run({"dopt", kRunning, "--d", "-1"});
  CHECK(r.code == 0);
  CHECK(r.out.find("profile = (1,0)") != std::string::npos);

  CHECK(run({}).code == 1);
  CHECK(run({"frobnicate"}).code == 1);
  CHECK(run({"params", "/nonexistent.json"}).code == 1);
}
