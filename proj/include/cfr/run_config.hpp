#pragma once

// Run configuration shared by the command-line subcommands.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "cfr/builders.hpp"
#include "cfr/error.hpp"
#include "cfr/game_io.hpp"
#include "cfr/normal_form.hpp"
#include "cfr/solver.hpp"
#include "cfr/tilt.hpp"

namespace cfr {

struct GameSpec {
  std::string name = "kuhn";  // kuhn, kuhn3, fig1, fig2, fig3, holdem, or a game JSON path
  MiniHoldemParams holdem;
};

struct RunConfig {
  GameSpec game;
  SolverMode mode = SolverMode::kVanilla;
  ProfileMode profile_mode = ProfileMode::kFull;
  std::int64_t iterations = 1000;
  std::vector<std::int64_t> checkpoints;  // empty: powers of ten plus the last iteration
  std::optional<std::uint64_t> seed;
  std::optional<TiltSpec> tilt;
  std::string out_dir = "out";
  std::vector<std::string> track_actions;  // "<infoset key>:<action>"
  std::vector<std::string> track_reach;    // infoset keys
  std::vector<std::string> track_strategies;  // "<player>:<profile file>"
  std::optional<bool> write_average;
};

inline bool is_matrix_game(const GameSpec& s) { return s.name == "fig1" || s.name == "fig3"; }

inline ExtensiveFormGame make_game(const GameSpec& s) {
  if (s.name == "kuhn") return build_kuhn_game();
  if (s.name == "kuhn3") return build_kuhn3_game();
  if (s.name == "fig2") return build_figure2_game();
  if (s.name == "holdem") return build_mini_holdem(s.holdem);
  require(!is_matrix_game(s), ErrorCode::kInvalidParameters, "'" + s.name + "' is a normal-form game");
  require(s.name.size() > 5 && s.name.ends_with(".json"), ErrorCode::kInvalidParameters,
          "unknown game '" + s.name + "'");
  return game_from_json(read_json(s.name));
}

inline NormalFormGame make_matrix(const GameSpec& s, std::size_t cap = kDefaultProfileCap) {
  if (s.name == "fig1") return build_figure1_matrix();
  if (s.name == "fig3") return build_figure3_matrix();
  return to_normal_form(make_game(s), cap);
}

inline TiltSpec parse_tilt(const std::string& text) {
  const auto colon = text.find(':');
  require(colon != std::string::npos, ErrorCode::kInvalidParameters, "tilt must look like orange:7 or green:35");
  TiltSpec t;
  t.kind = parse_tilt_kind(text.substr(0, colon));
  try {
    t.w = std::stod(text.substr(colon + 1));
  } catch (const std::exception&) {
    fail(ErrorCode::kInvalidParameters, "tilt weight is not a number");
  }
  return t;
}

inline std::vector<std::int64_t> checkpoint_schedule(const RunConfig& c) {
  if (!c.checkpoints.empty()) return c.checkpoints;
  std::vector<std::int64_t> out;
  for (std::int64_t p = 1; p < c.iterations; p *= 10) out.push_back(p);
  out.push_back(c.iterations);
  return out;
}

inline void validate(const RunConfig& c) {
  require(c.iterations >= 1, ErrorCode::kInvalidParameters, "iterations: must be at least 1");
  for (std::size_t k = 0; k < c.checkpoints.size(); ++k) {
    require(c.checkpoints[k] >= 1 && c.checkpoints[k] <= c.iterations, ErrorCode::kInvalidParameters,
            "checkpoints: must lie in [1, iterations]");
    require(k == 0 || c.checkpoints[k] > c.checkpoints[k - 1], ErrorCode::kInvalidParameters,
            "checkpoints: must be strictly increasing");
  }
  require(c.mode != SolverMode::kExternalSampling || c.seed.has_value(), ErrorCode::kInvalidParameters,
          "seed: required for external sampling");
  require(!(c.write_average.value_or(false) && c.profile_mode == ProfileMode::kCurrentOnly),
          ErrorCode::kUnsupportedMode, "average: not available in current-only mode");
  require(!c.out_dir.empty(), ErrorCode::kInvalidParameters, "out: must not be empty");
}

inline json to_json(const RunConfig& c) {
  json j = {{"game", c.game.name},
            {"mode", to_string(c.mode)},
            {"profile_mode", to_string(c.profile_mode)},
            {"iterations", c.iterations},
            {"checkpoints", checkpoint_schedule(c)},
            {"out", c.out_dir},
            {"track", c.track_actions},
            {"track_reach", c.track_reach},
            {"track_strategy", c.track_strategies}};
  if (c.game.name == "holdem")
    j["holdem"] = {{"ranks", c.game.holdem.ranks},
                   {"suits", c.game.holdem.suits},
                   {"rounds", c.game.holdem.rounds},
                   {"bets", c.game.holdem.bets_per_round}};
  if (c.seed) j["seed"] = *c.seed;
  if (c.tilt) j["tilt"] = to_string(c.tilt->kind) + ":" + fmt_num(c.tilt->w);
  if (c.write_average) j["average"] = *c.write_average;
  return j;
}

// Fields present in the JSON override the defaults; unknown keys are errors.
inline void apply_json(RunConfig& c, const json& j) {
  require(j.is_object(), ErrorCode::kInvalidParameters, "config must be a JSON object");
  const std::string* field = nullptr;
  try {
    for (const auto& [key, v] : j.items()) {
      field = &key;
      if (key == "game") c.game.name = v.get<std::string>();
      else if (key == "holdem") {
        c.game.holdem.ranks = v.value("ranks", c.game.holdem.ranks);
        c.game.holdem.suits = v.value("suits", c.game.holdem.suits);
        c.game.holdem.rounds = v.value("rounds", c.game.holdem.rounds);
        c.game.holdem.bets_per_round = v.value("bets", c.game.holdem.bets_per_round);
      } else if (key == "mode") c.mode = parse_solver_mode(v.get<std::string>());
      else if (key == "profile_mode") c.profile_mode = parse_profile_mode(v.get<std::string>());
      else if (key == "iterations") c.iterations = v.get<std::int64_t>();
      else if (key == "checkpoints") c.checkpoints = v.get<std::vector<std::int64_t>>();
      else if (key == "seed") c.seed = v.get<std::uint64_t>();
      else if (key == "tilt") c.tilt = parse_tilt(v.get<std::string>());
      else if (key == "out") c.out_dir = v.get<std::string>();
      else if (key == "track") c.track_actions = v.get<std::vector<std::string>>();
      else if (key == "track_reach") c.track_reach = v.get<std::vector<std::string>>();
      else if (key == "track_strategy") c.track_strategies = v.get<std::vector<std::string>>();
      else if (key == "average") c.write_average = v.get<bool>();
      else fail(ErrorCode::kInvalidParameters, key + ": unknown config field");
    }
  } catch (const json::exception&) {
    fail(ErrorCode::kInvalidParameters, (field ? *field : std::string("config")) + ": wrong type");
  }
}

}  // namespace cfr
