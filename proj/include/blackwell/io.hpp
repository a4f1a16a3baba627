#pragma once

// Game files and machine-readable reports (JSON).

#include <string>

#include <json.hpp>

#include "blackwell/game.hpp"
#include "blackwell/oracle.hpp"
#include "blackwell/polyalg.hpp"
#include "blackwell/solver.hpp"
#include "blackwell/thresholds.hpp"

namespace blackwell {

using Json = nlohmann::ordered_json;

inline constexpr const char* kReportSchema = "blackwell-lab/1";

/// Parses and validates a game document. Parse errors name a JSON pointer;
/// bad row sums raise Stochasticity.
Game parse_game(const std::string& text);
Game parse_game_file(const std::string& path);

Json game_to_json(const Game& game);
/// Stable textual form (two-space indent, trailing newline).
std::string dump_game(const Game& game);
void write_text_file(const std::string& path, const std::string& contents);

/// "p/q", an integer, or a finite decimal such as "0.95".
Rational parse_rational(const std::string& text);

Json to_json(const Rational& q);
Rational rational_from_json(const Json& j);
Json to_json(const Profile& p);
Json to_json(const RatInterval& iv);
Json to_json(const BoundReport& b);
Json to_json(const CrossingReport& c);
Json to_json(const SolveResult& s);
Json to_json(const BlackwellCertificate& c);
Json to_json(const VerifyReport& v);

}  // namespace blackwell
