#pragma once

// Expected utilities, counterfactual values, best responses, Nash gaps and
// full counterfactual regret.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <utility>
#include <vector>

#include "cfr/error.hpp"
#include "cfr/game.hpp"
#include "cfr/solver.hpp"
#include "cfr/tilt.hpp"

namespace cfr {

inline std::vector<double> expected_utility(const ExtensiveFormGame& game, const StrategyProfile& profile) {
  profile.validate(game);
  const auto values = compute_subtree_values(game, profile);
  return {values.begin(), values.begin() + game.num_players()};
}

namespace detail {

inline void require_own_infoset(const ExtensiveFormGame& game, int infoset, int player) {
  require(infoset >= 0 && infoset < game.num_infosets(), ErrorCode::kInvalidInput, "unknown information set");
  require(game.infoset(infoset).player == player, ErrorCode::kInvalidInput,
          "information set '" + game.infoset(infoset).key + "' does not belong to player " + std::to_string(player));
}

}  // namespace detail

// v_i(I, sigma) = sum_{h in I} pi_{-i}(h) * (expected utility of the subtree at h).
inline double counterfactual_value(const ExtensiveFormGame& game, const StrategyProfile& profile, int infoset,
                                   int player) {
  detail::require_own_infoset(game, infoset, player);
  const auto reach = compute_reach(game, profile);
  const auto values = compute_subtree_values(game, profile);
  const auto np = static_cast<std::size_t>(game.num_players());
  double v = 0.0;
  for (int h : game.infoset(infoset).nodes)
    v += reach.others(h, player) * values[static_cast<std::size_t>(h) * np + static_cast<std::size_t>(player)];
  return v;
}

// v_i(I, sigma_(I->a)).
inline double counterfactual_action_value(const ExtensiveFormGame& game, const StrategyProfile& profile, int infoset,
                                          int action) {
  const int player = game.infoset(infoset).player;
  StrategyProfile forced = profile;
  auto& d = forced[infoset];
  std::fill(d.begin(), d.end(), 0.0);
  d.at(static_cast<std::size_t>(action)) = 1.0;
  return counterfactual_value(game, forced, infoset, player);
}

struct BestResponse {
  StrategyProfile profile;  // input profile with the player's infosets replaced by the response
  std::vector<int> choice;  // chosen action per infoset of the player, indexed like player_infosets
  double value = 0.0;       // u_i(BR, sigma_{-i})
};

// Exact pure best response against the other players' behavior. Ties go to
// the lowest action index.
inline BestResponse best_response(const ExtensiveFormGame& game, const StrategyProfile& profile, int player) {
  require(player >= 0 && player < game.num_players(), ErrorCode::kInvalidInput, "player out of range");
  require(profile.size() == game.num_infosets(), ErrorCode::kInvalidInput, "profile does not match the game");
  for (int i = 0; i < game.num_players(); ++i)
    if (i != player) profile.validate_player(game, i);

  const auto reach = compute_reach(game, profile);
  const auto n = static_cast<std::size_t>(game.num_nodes());
  std::vector<double> value(n, 0.0);
  std::vector<char> done(n, 0);
  std::vector<int> choice(static_cast<std::size_t>(game.num_infosets()), -1);

  // Memoized value of a subtree under the response.
  struct Walker {
    const ExtensiveFormGame& game;
    const StrategyProfile& profile;
    const ReachTable& reach;
    int player;
    std::vector<double>& value;
    std::vector<char>& done;
    std::vector<int>& choice;

    int decide(int infoset) {
      auto& c = choice[static_cast<std::size_t>(infoset)];
      if (c >= 0) return c;
      const auto& info = game.infoset(infoset);
      std::vector<double> total(info.actions.size(), 0.0);
      for (int h : info.nodes) {
        const double w = reach.others(h, player);
        const Node& node = game.node(h);
        for (std::size_t a = 0; a < node.children.size(); ++a) {
          const double v = eval(node.children[a]);
          if (w != 0.0) total[a] += w * v;
        }
      }
      c = static_cast<int>(std::max_element(total.begin(), total.end()) - total.begin());
      return c;
    }

    double eval(int h) {
      const auto hs = static_cast<std::size_t>(h);
      if (done[hs]) return value[hs];
      const Node& node = game.node(h);
      double v = 0.0;
      if (node.is_terminal()) {
        v = node.utilities[static_cast<std::size_t>(player)];
      } else if (node.is_decision() && node.player == player) {
        v = eval(node.children[static_cast<std::size_t>(decide(node.infoset))]);
      } else {
        for (std::size_t a = 0; a < node.children.size(); ++a) {
          const double p = node.is_chance() ? node.chance_probs[a] : profile[node.infoset][a];
          if (p != 0.0) v += p * eval(node.children[a]);
        }
      }
      value[hs] = v;
      done[hs] = 1;
      return v;
    }
  };

  Walker walker{game, profile, reach, player, value, done, choice};
  BestResponse br;
  br.value = walker.eval(game.root());
  br.profile = profile;
  for (int id : game.player_infosets(player)) {
    const int a = walker.decide(id);
    br.choice.push_back(a);
    auto& d = br.profile[id];
    std::fill(d.begin(), d.end(), 0.0);
    d[static_cast<std::size_t>(a)] = 1.0;
  }
  return br;
}

struct PlayerGap {
  double br_value = 0.0;
  double on_policy_value = 0.0;
  double gap = 0.0;
};

struct NashGapReport {
  std::vector<PlayerGap> players;
  double max_gap = 0.0;
  double mean_gap = 0.0;
  double delta = 0.0;  // max_z |sum_i u_i(z)|

  // 2 (eps + delta): gap bound for a game whose utilities sum to at most delta.
  double bound(double epsilon) const { return 2.0 * (epsilon + delta); }
};

inline NashGapReport nash_gap(const ExtensiveFormGame& game, const StrategyProfile& profile) {
  profile.validate(game);
  const auto on_policy = expected_utility(game, profile);
  NashGapReport r;
  double sum = 0.0;
  for (int i = 0; i < game.num_players(); ++i) {
    PlayerGap g;
    g.br_value = best_response(game, profile, i).value;
    g.on_policy_value = on_policy[static_cast<std::size_t>(i)];
    g.gap = g.br_value - g.on_policy_value;
    r.max_gap = i == 0 ? g.gap : std::max(r.max_gap, g.gap);
    sum += g.gap;
    r.players.push_back(g);
  }
  r.mean_gap = sum / game.num_players();
  r.delta = max_utility_sum(game);
  return r;
}

// Exact external regret of each player over the iterations played so far:
// R_i^T = T * max_{s_i} u_i(s_i, avg sigma_{-i}) - sum_t u_i(sigma^t).
// Two-player games and vanilla iterations only.
inline std::vector<double> exact_regrets(const ExtensiveFormGame& game, const SolverState& state) {
  require(game.num_players() == 2, ErrorCode::kInvalidInput, "exact regret needs a two-player game");
  require(state.mode == SolverMode::kVanilla, ErrorCode::kInvalidState, "exact regret needs vanilla iterations");
  require(state.iteration > 0, ErrorCode::kInvalidState, "no iterations played");
  const auto avg = average_profile(game, state);
  std::vector<double> out;
  for (int i = 0; i < 2; ++i) {
    const double br = best_response(game, avg, i).value;
    out.push_back(static_cast<double>(state.iteration) * br - state.realized_utility[static_cast<std::size_t>(i)]);
  }
  return out;
}

// pi_i^sigma(I, I'): product of the player's own probabilities on the path
// from I to I'. Requires I' in D(I).
inline double own_path_probability(const ExtensiveFormGame& game, const StrategyProfile& sigma, int from, int to) {
  if (from == to) return 1.0;
  const int player = game.infoset(from).player;
  for (int h2 : game.infoset(to).nodes) {
    if (game.ancestor_in_infoset(h2, from) < 0) continue;
    double p = 1.0;
    int child = h2;
    for (int cur = game.node(h2).parent; cur >= 0; cur = game.node(cur).parent) {
      const Node& n = game.node(cur);
      if (n.is_decision() && n.player == player)
        p *= sigma[n.infoset][static_cast<std::size_t>(game.node(child).parent_action)];
      if (n.is_decision() && n.infoset == from) return p;
      child = cur;
    }
  }
  fail(ErrorCode::kInvalidInput, "information set is not a descendant");
}

// Right-hand side of the full counterfactual regret identity:
// sum_{I' in D(I)} pi_i^sigma(I, I') sum_a sigma_i(I', a) R^T(I', a).
inline double full_counterfactual_regret(const ExtensiveFormGame& game, const SolverState& state, int infoset,
                                         const StrategyProfile& sigma_i) {
  require(state.mode == SolverMode::kVanilla, ErrorCode::kInvalidState,
          "full counterfactual regret needs exact (vanilla) regrets");
  check_state(game, state);
  const int player = game.infoset(infoset).player;
  sigma_i.validate_player(game, player);
  double total = 0.0;
  for (int d : game.descendant_infosets(infoset)) {
    const auto& info = game.infoset(d);
    const double reach = own_path_probability(game, sigma_i, infoset, d);
    double inner = 0.0;
    for (std::size_t a = 0; a < info.actions.size(); ++a) inner += sigma_i[d][a] * state.regrets[info.offset + a];
    total += reach * inner;
  }
  return total;
}

// Upper bound Delta_i |D(I)| sqrt(|A(I_i)| T).
inline double full_regret_bound(const ExtensiveFormGame& game, int infoset, std::int64_t iterations) {
  const int player = game.infoset(infoset).player;
  return game.utility_range(player) * static_cast<double>(game.descendant_infosets(infoset).size()) *
         std::sqrt(static_cast<double>(game.max_actions(player)) * static_cast<double>(iterations));
}

// Accumulates the left-hand side sum_t (v_i(I, (sigma_i, sigma_{-i}^t)) -
// v_i(I, sigma^t)) online. Attach observer() to vanilla iterations.
class FullRegretTracker {
 public:
  explicit FullRegretTracker(const ExtensiveFormGame& game) : game_(&game) {}

  std::size_t track(int infoset, StrategyProfile sigma_i) {
    sigma_i.validate_player(*game_, game_->infoset(infoset).player);
    pairs_.push_back({infoset, std::move(sigma_i)});
    lhs_.push_back(0.0);
    return pairs_.size() - 1;
  }

  double value(std::size_t k) const { return lhs_.at(k); }
  std::size_t size() const { return pairs_.size(); }
  int infoset(std::size_t k) const { return pairs_.at(k).first; }
  const StrategyProfile& strategy(std::size_t k) const { return pairs_.at(k).second; }

  void observe(const IterationView& view) {
    require(view.reach != nullptr && view.values != nullptr, ErrorCode::kInvalidState,
            "full regret tracking needs vanilla iterations");
    const auto np = static_cast<std::size_t>(game_->num_players());
    for (std::size_t k = 0; k < pairs_.size(); ++k) {
      const auto& [infoset, sigma_i] = pairs_[k];
      const int player = game_->infoset(infoset).player;
      const StrategyProfile mixed = view.sigma->with_player(*game_, player, sigma_i);
      const auto dev = compute_subtree_values(*game_, mixed);
      double diff = 0.0;
      for (int h : game_->infoset(infoset).nodes) {
        const auto idx = static_cast<std::size_t>(h) * np + static_cast<std::size_t>(player);
        diff += view.reach->others(h, player) * (dev[idx] - (*view.values)[idx]);
      }
      lhs_[k] += diff;
    }
  }

  IterationObserver observer() {
    return [this](const IterationView& v) { observe(v); };
  }

 private:
  const ExtensiveFormGame* game_;
  std::vector<std::pair<int, StrategyProfile>> pairs_;
  std::vector<double> lhs_;
};

// supp(candidate) subset of supp(current) over the player's infosets.
inline bool support_containment(const ExtensiveFormGame& game, int player, const StrategyProfile& candidate,
                                const StrategyProfile& current) {
  require(candidate.size() == game.num_infosets() && current.size() == game.num_infosets(), ErrorCode::kInvalidInput,
          "profiles do not match the game");
  return detail::support_contains(game, player, candidate, current);
}

}  // namespace cfr
