#include "empeq/game_io.h"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <sstream>

namespace empeq {
namespace {

std::string line_column(std::string_view text, std::size_t byte) {
  std::size_t line = 1, column = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(column);
}

Json parse_json(std::string_view text) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error& e) {
    throw FormatError(line_column(text, e.byte == 0 ? 0 : e.byte - 1),
                      "invalid JSON");
  }
}

const Json& require(const Json& obj, const char* key, const std::string& path) {
  if (!obj.is_object()) throw FormatError(path, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw FormatError(path, std::string("missing \"") + key + "\"");
  return *it;
}

double number_at(const Json& v, const std::string& path) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    const auto& s = v.get_ref<const std::string&>();
    double out = 0.0;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    if (ec == std::errc() && ptr == last && std::isfinite(out)) return out;
    throw FormatError(path, "not a decimal number: \"" + s + "\"");
  }
  throw FormatError(path, "expected a number");
}

std::string string_at(const Json& v, const std::string& path) {
  if (!v.is_string()) throw FormatError(path, "expected a string");
  return v.get<std::string>();
}

Json number_json(double value) {
  if (value == std::trunc(value) && std::abs(value) < 1e15) {
    return Json(static_cast<long long>(value));
  }
  return Json(value);
}

}  // namespace

std::string format_double(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  (void)ec;
  return std::string(buf, ptr);
}

double round_significant(double value, int digits) {
  if (value == 0.0 || !std::isfinite(value)) return value;
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*e", digits - 1, value);
  return std::strtod(buf, nullptr);
}

Game game_from_json(const Json& doc) {
  const Json& players_json = require(doc, "players", "$");
  if (!players_json.is_array() || players_json.empty()) {
    throw FormatError("players", "expected a nonempty array");
  }
  std::vector<std::string> players;
  for (std::size_t i = 0; i < players_json.size(); ++i) {
    players.push_back(string_at(players_json[i], "players[" + std::to_string(i) + "]"));
  }

  const Json& actions_json = require(doc, "actions", "$");
  if (!actions_json.is_object()) throw FormatError("actions", "expected an object");
  std::vector<std::vector<std::string>> actions;
  for (const auto& p : players) {
    const std::string path = "actions." + p;
    const Json& list = require(actions_json, p.c_str(), "actions");
    if (!list.is_array() || list.empty()) {
      throw FormatError(path, "expected a nonempty array");
    }
    std::vector<std::string> labels;
    for (std::size_t a = 0; a < list.size(); ++a) {
      labels.push_back(string_at(list[a], path + "[" + std::to_string(a) + "]"));
    }
    actions.push_back(std::move(labels));
  }
  if (actions_json.size() != players.size()) {
    throw FormatError("actions", "entries for unknown players");
  }

  std::size_t num_profiles = 1;
  for (const auto& a : actions) num_profiles *= a.size();
  const std::size_t n = players.size();

  // Build a throwaway game with the right shape so we can index profiles.
  Game shape(players, actions, std::vector<double>(num_profiles * n, 0.0));

  const Json& records = require(doc, "payoffs", "$");
  if (!records.is_array()) throw FormatError("payoffs", "expected an array");
  std::vector<double> payoffs(num_profiles * n, 0.0);
  std::vector<bool> seen(num_profiles, false);
  for (std::size_t r = 0; r < records.size(); ++r) {
    const std::string path = "payoffs[" + std::to_string(r) + "]";
    const Json& profile = require(records[r], "profile", path);
    const Json& u = require(records[r], "u", path);
    if (!profile.is_object() || profile.size() != n) {
      throw FormatError(path + ".profile", "expected one action per player");
    }
    if (!u.is_object() || u.size() != n) {
      throw FormatError(path + ".u", "expected one payoff per player");
    }
    std::vector<std::size_t> digits(n);
    for (std::size_t i = 0; i < n; ++i) {
      const std::string field = path + ".profile." + players[i];
      const std::string label =
          string_at(require(profile, players[i].c_str(), path + ".profile"), field);
      auto a = shape.find_action(i, label);
      if (!a) throw FormatError(field, "unknown action \"" + label + "\"");
      digits[i] = *a;
    }
    const std::size_t idx = shape.profile_index(digits);
    if (seen[idx]) throw FormatError(path, "duplicate payoff record");
    seen[idx] = true;
    for (std::size_t i = 0; i < n; ++i) {
      payoffs[idx * n + i] = number_at(require(u, players[i].c_str(), path + ".u"),
                                       path + ".u." + players[i]);
    }
  }
  for (std::size_t idx = 0; idx < num_profiles; ++idx) {
    if (!seen[idx]) {
      std::string label;
      const auto digits = shape.decode_profile(idx);
      for (std::size_t i = 0; i < n; ++i) {
        if (i) label += ",";
        label += actions[i][digits[i]];
      }
      throw FormatError("payoffs", "missing record for profile (" + label + ")");
    }
  }
  return Game(std::move(players), std::move(actions), std::move(payoffs));
}

Game parse_game(std::string_view text) { return game_from_json(parse_json(text)); }

Game load_game(std::istream& in) {
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_game(text);
}

Game load_game_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError(path, "cannot open file");
  return load_game(in);
}

Json game_to_json(const Game& game) {
  Json doc;
  doc["players"] = game.players();
  Json actions = Json::object();
  for (std::size_t i = 0; i < game.num_players(); ++i) {
    actions[game.player_name(i)] = game.actions(i);
  }
  doc["actions"] = std::move(actions);
  Json records = Json::array();
  for (std::size_t idx = 0; idx < game.num_profiles(); ++idx) {
    const auto digits = game.decode_profile(idx);
    Json profile = Json::object();
    Json u = Json::object();
    for (std::size_t i = 0; i < game.num_players(); ++i) {
      profile[game.player_name(i)] = game.action_name(i, digits[i]);
      u[game.player_name(i)] = number_json(game.payoff(idx, i));
    }
    records.push_back(Json{{"profile", std::move(profile)}, {"u", std::move(u)}});
  }
  doc["payoffs"] = std::move(records);
  return doc;
}

std::string dump_game(const Game& game) { return game_to_json(game).dump(2) + "\n"; }

MixedProfile profile_from_json(const Game& game, const Json& doc) {
  const Json& body = require(doc, "profile", "$");
  if (!body.is_object()) throw FormatError("profile", "expected an object");
  std::vector<std::vector<double>> s(game.num_players());
  for (std::size_t i = 0; i < game.num_players(); ++i) {
    const std::string path = "profile." + game.player_name(i);
    const Json& dist = require(body, game.player_name(i).c_str(), "profile");
    if (!dist.is_object()) throw FormatError(path, "expected an object");
    s[i].assign(game.num_actions(i), 0.0);
    for (auto it = dist.begin(); it != dist.end(); ++it) {
      auto a = game.find_action(i, it.key());
      if (!a) throw FormatError(path + "." + it.key(), "unknown action");
      s[i][*a] = number_at(it.value(), path + "." + it.key());
    }
  }
  if (body.size() != game.num_players()) {
    throw FormatError("profile", "entries for unknown players");
  }
  try {
    return MixedProfile(std::move(s));
  } catch (const std::invalid_argument& e) {
    throw FormatError("profile", e.what());
  }
}

MixedProfile parse_profile(const Game& game, std::string_view text) {
  return profile_from_json(game, parse_json(text));
}

Json profile_to_json(const Game& game, const MixedProfile& profile,
                     int significant_digits) {
  check_compatible(game, profile);
  Json out = Json::object();
  for (std::size_t i = 0; i < game.num_players(); ++i) {
    Json dist = Json::object();
    for (std::size_t a = 0; a < game.num_actions(i); ++a) {
      dist[game.action_name(i, a)] =
          round_significant(profile.prob(i, a), significant_digits);
    }
    out[game.player_name(i)] = std::move(dist);
  }
  return out;
}

}  // namespace empeq
