#pragma once

// Counterfactual regret minimization: vanilla (full-tree) iterations and
// External Sampling iterations, plus the diagnostic counters used to study
// how dominated actions disappear from play.
//
// Both variants update all players simultaneously: the profile sigma^t is
// fixed from the regrets at the start of an iteration and every regret
// increment of that iteration is computed against it.

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cfr/error.hpp"
#include "cfr/game.hpp"
#include "cfr/regret_matching.hpp"
#include "cfr/rng.hpp"

namespace cfr {

enum class SolverMode { kVanilla, kExternalSampling };
enum class ProfileMode { kFull, kCurrentOnly };

inline std::string to_string(SolverMode m) { return m == SolverMode::kVanilla ? "vanilla" : "external-sampling"; }
inline std::string to_string(ProfileMode m) { return m == ProfileMode::kFull ? "full" : "current-only"; }

inline SolverMode parse_solver_mode(std::string_view s) {
  if (s == "vanilla") return SolverMode::kVanilla;
  if (s == "external-sampling" || s == "es") return SolverMode::kExternalSampling;
  fail(ErrorCode::kInvalidParameters, "unknown solver mode '" + std::string(s) + "'");
}

inline ProfileMode parse_profile_mode(std::string_view s) {
  if (s == "full") return ProfileMode::kFull;
  if (s == "current-only") return ProfileMode::kCurrentOnly;
  fail(ErrorCode::kInvalidParameters, "unknown profile mode '" + std::string(s) + "'");
}

inline constexpr std::string_view kTraversalStream = "es-traversal";

struct SolverState {
  SolverMode mode = SolverMode::kVanilla;
  ProfileMode profile_mode = ProfileMode::kFull;
  std::vector<double> regrets;     // R(I,a), flat by infoset offset
  std::vector<double> cumulative;  // s(I,a); empty in current-only mode
  std::int64_t iteration = 0;
  std::uint64_t seed = 0;
  std::vector<Rng> streams;  // one traversal stream per player (sampling only)
  // Sum over iterations of u_i(sigma^t); maintained exactly in vanilla mode.
  std::vector<double> realized_utility;

  bool has_cumulative() const { return profile_mode == ProfileMode::kFull; }
  bool is_sampling() const { return mode == SolverMode::kExternalSampling; }

  // Reals stored per run; the scratch profile is not part of the state.
  std::size_t stored_reals() const { return regrets.size() + cumulative.size(); }
  std::size_t memory_bytes() const { return stored_reals() * sizeof(double); }

  std::span<double> regrets_at(const InfoSet& info) {
    return {regrets.data() + info.offset, info.actions.size()};
  }
  std::span<const double> regrets_at(const InfoSet& info) const {
    return {regrets.data() + info.offset, info.actions.size()};
  }

  bool operator==(const SolverState& o) const {
    if (streams.size() != o.streams.size()) return false;
    for (std::size_t k = 0; k < streams.size(); ++k)
      if (streams[k] != o.streams[k]) return false;
    return mode == o.mode && profile_mode == o.profile_mode && regrets == o.regrets && cumulative == o.cumulative &&
           iteration == o.iteration && seed == o.seed && realized_utility == o.realized_utility;
  }
};

inline SolverState make_solver_state(const ExtensiveFormGame& game, SolverMode mode = SolverMode::kVanilla,
                                     ProfileMode profile_mode = ProfileMode::kFull, std::uint64_t seed = 0) {
  SolverState s;
  s.mode = mode;
  s.profile_mode = profile_mode;
  s.regrets.assign(game.num_infoset_actions(), 0.0);
  if (profile_mode == ProfileMode::kFull) s.cumulative.assign(game.num_infoset_actions(), 0.0);
  s.seed = seed;
  if (mode == SolverMode::kExternalSampling) {
    for (int i = 0; i < game.num_players(); ++i)
      s.streams.push_back(make_stream(seed, kTraversalStream, static_cast<std::uint64_t>(i)));
  }
  s.realized_utility.assign(static_cast<std::size_t>(game.num_players()), 0.0);
  return s;
}

inline void check_state(const ExtensiveFormGame& game, const SolverState& s) {
  require(s.regrets.size() == game.num_infoset_actions(), ErrorCode::kInvalidInput,
          "solver state does not match the game");
  require(s.cumulative.size() == (s.has_cumulative() ? game.num_infoset_actions() : 0), ErrorCode::kInvalidInput,
          "cumulative profile does not match the profile mode");
  require(s.realized_utility.size() == static_cast<std::size_t>(game.num_players()), ErrorCode::kInvalidInput,
          "solver state has wrong player count");
}

struct TrackedStrategy {
  int player = 0;
  StrategyProfile strategy;  // only the player's infosets matter
};

struct DiagnosticCounters {
  std::int64_t x_count = 0;   // iterations ending with some infoset lacking positive regret
  std::int64_t xi_count = 0;  // traversal visits to histories whose infoset lacks positive regret

  std::vector<std::pair<int, int>> tracked_actions;
  std::vector<std::int64_t> y_action;

  std::vector<TrackedStrategy> tracked_strategies;
  std::vector<std::int64_t> y_strategy;

  std::vector<int> tracked_reach;
  std::vector<double> reach_mass;  // latest iteration
  bool keep_reach_history = false;
  std::vector<std::vector<double>> reach_history;  // [tracked][iteration]

  void track_action(int infoset, int action) {
    tracked_actions.emplace_back(infoset, action);
    y_action.push_back(0);
  }
  void track_action(const ExtensiveFormGame& game, std::string_view key, std::string_view action) {
    const int i = game.infoset_index(key);
    track_action(i, game.action_index(i, action));
  }
  void track_strategy(int player, StrategyProfile strategy) {
    tracked_strategies.push_back({player, std::move(strategy)});
    y_strategy.push_back(0);
  }
  void track_reach(int infoset) {
    tracked_reach.push_back(infoset);
    reach_mass.push_back(0.0);
    reach_history.emplace_back();
  }
};

// Fixed sigma^t together with the pass results, handed to observers once per
// iteration. reach and values are only filled by vanilla iterations.
struct IterationView {
  std::int64_t t = 0;  // 1-based index of the iteration being played
  const StrategyProfile* sigma = nullptr;
  const ReachTable* reach = nullptr;
  const std::vector<double>* values = nullptr;
};

using IterationObserver = std::function<void(const IterationView&)>;

inline StrategyProfile current_profile(const ExtensiveFormGame& game, const SolverState& state) {
  check_state(game, state);
  auto out = StrategyProfile::uniform(game);
  for (int id = 0; id < game.num_infosets(); ++id) regret_matching_policy(state.regrets_at(game.infoset(id)), out[id]);
  return out;
}

inline StrategyProfile average_profile(const ExtensiveFormGame& game, const SolverState& state) {
  check_state(game, state);
  require(state.has_cumulative(), ErrorCode::kUnsupportedMode, "average profile is not stored in current-only mode");
  auto out = StrategyProfile::uniform(game);
  for (int id = 0; id < game.num_infosets(); ++id) {
    const auto& info = game.infoset(id);
    double total = 0.0;
    for (std::size_t a = 0; a < info.actions.size(); ++a) total += state.cumulative[info.offset + a];
    if (total <= 0.0) continue;
    for (std::size_t a = 0; a < info.actions.size(); ++a) out[id][a] = state.cumulative[info.offset + a] / total;
  }
  return out;
}

namespace detail {

inline bool support_contains(const ExtensiveFormGame& game, int player, const StrategyProfile& candidate,
                             const StrategyProfile& current) {
  for (int id : game.player_infosets(player)) {
    const auto& c = candidate[id];
    const auto& s = current[id];
    for (std::size_t a = 0; a < c.size(); ++a)
      if (c[a] > 0.0 && !(s[a] > 0.0)) return false;
  }
  return true;
}

inline std::vector<char> zero_positive_flags(const ExtensiveFormGame& game, const SolverState& state) {
  std::vector<char> flags(static_cast<std::size_t>(game.num_infosets()));
  for (int id = 0; id < game.num_infosets(); ++id)
    flags[static_cast<std::size_t>(id)] = !has_positive_regret(state.regrets_at(game.infoset(id)));
  return flags;
}

inline void count_before(const ExtensiveFormGame& game, const StrategyProfile& sigma, DiagnosticCounters& c,
                         const ReachTable* reach) {
  for (std::size_t k = 0; k < c.tracked_actions.size(); ++k) {
    const auto [i, a] = c.tracked_actions[k];
    if (sigma[i][static_cast<std::size_t>(a)] > 0.0) ++c.y_action[k];
  }
  for (std::size_t k = 0; k < c.tracked_strategies.size(); ++k) {
    const auto& ts = c.tracked_strategies[k];
    if (support_contains(game, ts.player, ts.strategy, sigma)) ++c.y_strategy[k];
  }
  if (c.tracked_reach.empty()) return;
  std::optional<ReachTable> own;
  if (reach == nullptr) reach = &own.emplace(compute_reach(game, sigma));
  for (std::size_t k = 0; k < c.tracked_reach.size(); ++k) {
    const auto& info = game.infoset(c.tracked_reach[k]);
    double mass = 0.0;
    for (int h : info.nodes) mass += reach->others(h, info.player);
    c.reach_mass[k] = mass;
    if (c.keep_reach_history) c.reach_history[k].push_back(mass);
  }
}

inline void count_after(const ExtensiveFormGame& game, const SolverState& state, DiagnosticCounters& c) {
  for (const auto& info : game.infosets()) {
    if (!has_positive_regret(state.regrets_at(info))) {
      ++c.x_count;
      return;
    }
  }
}

}  // namespace detail

// One iteration of vanilla CFR.
inline void cfr_iterate(const ExtensiveFormGame& game, SolverState& state, DiagnosticCounters& counters,
                        const IterationObserver& observer = nullptr) {
  check_state(game, state);
  require(state.mode == SolverMode::kVanilla, ErrorCode::kInvalidState, "state was created for sampling");
  const StrategyProfile sigma = current_profile(game, state);
  const auto zero_pos = detail::zero_positive_flags(game, state);
  const ReachTable reach = compute_reach(game, sigma);
  const auto values = compute_subtree_values(game, sigma);
  const auto np = static_cast<std::size_t>(game.num_players());

  detail::count_before(game, sigma, counters, &reach);
  for (int id = 0; id < game.num_infosets(); ++id)
    if (zero_pos[static_cast<std::size_t>(id)]) counters.xi_count += static_cast<std::int64_t>(game.infoset(id).nodes.size());
  if (observer) observer({state.iteration + 1, &sigma, &reach, &values});

  for (int id = 0; id < game.num_infosets(); ++id) {
    const auto& info = game.infoset(id);
    const auto p = static_cast<std::size_t>(info.player);
    double* r = state.regrets.data() + info.offset;
    for (int h : info.nodes) {
      const double w = reach.others(h, info.player);
      if (w == 0.0) continue;
      const Node& node = game.node(h);
      const double vh = values[static_cast<std::size_t>(h) * np + p];
      for (std::size_t a = 0; a < node.children.size(); ++a)
        r[a] += w * (values[static_cast<std::size_t>(node.children[a]) * np + p] - vh);
    }
    if (state.has_cumulative()) {
      const double own = reach.player(info.nodes.front(), info.player);
      if (own == 0.0) continue;
      double* s = state.cumulative.data() + info.offset;
      for (std::size_t a = 0; a < info.actions.size(); ++a) s[a] += own * sigma[id][a];
    }
  }
  for (std::size_t i = 0; i < np; ++i) state.realized_utility[i] += values[i];
  ++state.iteration;
  detail::count_after(game, state, counters);
}

namespace detail {

struct EsTraversal {
  const ExtensiveFormGame& game;
  SolverState& state;
  DiagnosticCounters& counters;
  const StrategyProfile& sigma;
  const std::vector<char>& zero_pos;
  int traverser;
  Rng& rng;

  double walk(int h) {
    const Node& node = game.node(h);
    if (node.is_terminal()) return node.utilities[static_cast<std::size_t>(traverser)];
    if (node.is_chance()) return walk(node.children[static_cast<std::size_t>(sample_index(node.chance_probs, rng))]);
    const auto& info = game.infoset(node.infoset);
    const auto& dist = sigma[node.infoset];
    if (zero_pos[static_cast<std::size_t>(node.infoset)]) ++counters.xi_count;
    if (node.player != traverser) {
      if (state.has_cumulative()) {
        double* s = state.cumulative.data() + info.offset;
        for (std::size_t a = 0; a < dist.size(); ++a) s[a] += dist[a];
      }
      return walk(node.children[static_cast<std::size_t>(sample_index(dist, rng))]);
    }
    double child_values[16];
    std::vector<double> spill;
    double* v = child_values;
    if (node.children.size() > 16) {
      spill.resize(node.children.size());
      v = spill.data();
    }
    double vh = 0.0;
    for (std::size_t a = 0; a < node.children.size(); ++a) {
      v[a] = walk(node.children[a]);
      vh += dist[a] * v[a];
    }
    double* r = state.regrets.data() + info.offset;
    for (std::size_t a = 0; a < node.children.size(); ++a) r[a] += v[a] - vh;
    return vh;
  }
};

}  // namespace detail

// One External Sampling iteration: a sampled traversal for every player in
// turn, all against the same sigma^t. Chance and opponent actions are sampled
// on-policy from the traverser's stream; the traverser's actions are all
// expanded. Opponent nodes reached in a traversal add sigma^t(I,.) to the
// cumulative profile.
inline void external_sampling_iterate(const ExtensiveFormGame& game, SolverState& state, DiagnosticCounters& counters,
                                      const IterationObserver& observer = nullptr) {
  check_state(game, state);
  require(state.mode == SolverMode::kExternalSampling &&
              state.streams.size() == static_cast<std::size_t>(game.num_players()),
          ErrorCode::kInvalidState, "external sampling needs seeded random streams");
  const StrategyProfile sigma = current_profile(game, state);
  const auto zero_pos = detail::zero_positive_flags(game, state);
  detail::count_before(game, sigma, counters, nullptr);
  if (observer) observer({state.iteration + 1, &sigma, nullptr, nullptr});
  for (int i = 0; i < game.num_players(); ++i) {
    detail::EsTraversal walk{game, state, counters, sigma, zero_pos, i, state.streams[static_cast<std::size_t>(i)]};
    walk.walk(game.root());
  }
  ++state.iteration;
  detail::count_after(game, state, counters);
}

inline void solver_step(const ExtensiveFormGame& game, SolverState& state, DiagnosticCounters& counters,
                        const IterationObserver& observer = nullptr) {
  if (state.mode == SolverMode::kVanilla) {
    cfr_iterate(game, state, counters, observer);
  } else {
    external_sampling_iterate(game, state, counters, observer);
  }
}

}  // namespace cfr
