#pragma once

#include <istream>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

#include "empeq/game.h"

namespace empeq {

using Json = nlohmann::ordered_json;

// Malformed game or profile document. `where` is a field path such as
// "payoffs[3].u.P1" or "line 4, column 7" for syntax errors.
class FormatError : public std::runtime_error {
 public:
  FormatError(std::string where, const std::string& message)
      : std::runtime_error(where + ": " + message), where_(std::move(where)) {}
  const std::string& where() const { return where_; }

 private:
  std::string where_;
};

// Game file:
//   { "players": ["P1", ...],
//     "actions": {"P1": ["a1", ...], ...},
//     "payoffs": [ {"profile": {"P1": "a1", ...}, "u": {"P1": 1, ...}}, ... ] }
// Exactly one payoff record per pure profile. Payoffs may be JSON numbers or
// decimal strings.
Game game_from_json(const Json& doc);
Game parse_game(std::string_view text);
Game load_game(std::istream& in);
Game load_game_file(const std::string& path);

// Records are emitted in profile-index order; integral payoffs as integers.
Json game_to_json(const Game& game);
std::string dump_game(const Game& game);

// Profile file: { "profile": { "P1": {"a1": 0.5, "a2": 0.5}, ... } }.
// Missing actions default to probability 0.
MixedProfile profile_from_json(const Game& game, const Json& doc);
MixedProfile parse_profile(const Game& game, std::string_view text);
Json profile_to_json(const Game& game, const MixedProfile& profile,
                     int significant_digits = 12);

// Shortest decimal that round-trips the double.
std::string format_double(double value);
// Rounded to the given number of significant digits (then shortest form).
double round_significant(double value, int digits);

}  // namespace empeq
