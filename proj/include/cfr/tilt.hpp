#pragma once

// Orange and green payoff tilts for two-player zero-sum games.

#include <algorithm>
#include <cmath>
#include <string>
#include <string_view>
#include <vector>

#include "cfr/error.hpp"
#include "cfr/game.hpp"

namespace cfr {

enum class TiltKind { kOrange, kGreen };

struct TiltSpec {
  TiltKind kind = TiltKind::kOrange;
  double w = 0.0;  // percent
};

inline std::string to_string(TiltKind k) { return k == TiltKind::kOrange ? "orange" : "green"; }

inline TiltKind parse_tilt_kind(std::string_view s) {
  if (s == "orange") return TiltKind::kOrange;
  if (s == "green") return TiltKind::kGreen;
  fail(ErrorCode::kInvalidParameters, "unknown tilt kind '" + std::string(s) + "'");
}

// Orange: the winner's gain is scaled by (1 + w/100) at every terminal.
// Green: at a showdown the loser's loss is scaled by (1 - w/100); when
// somebody folded the winner's gain is scaled by (1 - w/100).
// Ties (zero payoffs) are left unchanged.
inline ExtensiveFormGame apply_tilt(const ExtensiveFormGame& game, const TiltSpec& tilt) {
  require(tilt.w >= 0.0 && std::isfinite(tilt.w), ErrorCode::kInvalidParameters, "tilt w must be >= 0");
  require(game.num_players() == 2, ErrorCode::kInvalidGame, "tilts need a two-player game");
  require(game.is_zero_sum(), ErrorCode::kInvalidGame, "tilts need a zero-sum game");
  const double f = tilt.w / 100.0;
  if (tilt.kind == TiltKind::kGreen) {
    for (int z : game.terminals())
      require(game.node(z).terminal_kind != TerminalKind::kUnspecified, ErrorCode::kInvalidGame,
              "green tilt needs every terminal marked as showdown or fold");
  }
  const std::string name = game.name() + "-" + to_string(tilt.kind) + "-" + std::to_string(tilt.w);
  return game.with_utilities(name, [&](const Node& n) {
    std::vector<double> u = n.utilities;
    const int winner = u[0] > 0 ? 0 : (u[1] > 0 ? 1 : -1);
    if (winner < 0) return u;
    const auto win = static_cast<std::size_t>(winner);
    const auto lose = 1 - win;
    if (tilt.kind == TiltKind::kOrange) {
      u[win] *= 1.0 + f;
    } else if (n.terminal_kind == TerminalKind::kShowdown) {
      u[lose] *= 1.0 - f;
    } else {
      u[win] *= 1.0 - f;
    }
    return u;
  });
}

// delta = max_z |u_1(z) + u_2(z)|.
inline double max_utility_sum(const ExtensiveFormGame& game) {
  double d = 0.0;
  for (int z : game.terminals()) {
    const auto& u = game.node(z).utilities;
    double s = 0.0;
    for (double v : u) s += v;
    d = std::max(d, std::abs(s));
  }
  return d;
}

}  // namespace cfr
