#pragma once

// Regret matching, both as the per-infoset policy used by CFR and as a
// stand-alone learner for normal-form games.

#include <algorithm>
#include <cstdint>
#include <span>
#include <vector>

#include "cfr/error.hpp"
#include "cfr/normal_form.hpp"

namespace cfr {

// Positive regrets normalized; when no regret is positive, uniform over the
// actions of maximal regret.
inline void regret_matching_policy(std::span<const double> regrets, std::span<double> out) {
  require(!regrets.empty(), ErrorCode::kInvalidInput, "regret vector is empty");
  require(out.size() == regrets.size(), ErrorCode::kInvalidInput, "output has wrong length");
  double total = 0.0;
  for (double r : regrets) total += std::max(r, 0.0);
  if (total > 0.0) {
    for (std::size_t a = 0; a < regrets.size(); ++a) out[a] = std::max(regrets[a], 0.0) / total;
    return;
  }
  const double best = *std::max_element(regrets.begin(), regrets.end());
  std::size_t ties = 0;
  for (double r : regrets) ties += r == best;
  for (std::size_t a = 0; a < regrets.size(); ++a) out[a] = regrets[a] == best ? 1.0 / static_cast<double>(ties) : 0.0;
}

inline Distribution regret_matching_policy(std::span<const double> regrets) {
  Distribution out(regrets.size());
  regret_matching_policy(regrets, out);
  return out;
}

inline bool has_positive_regret(std::span<const double> regrets) {
  return std::any_of(regrets.begin(), regrets.end(), [](double r) { return r > 0.0; });
}

struct RegretMatchingState {
  std::vector<double> regrets;
  std::vector<double> strategy_sum;
  std::int64_t iteration = 0;

  explicit RegretMatchingState(int num_actions = 0)
      : regrets(static_cast<std::size_t>(num_actions), 0.0), strategy_sum(static_cast<std::size_t>(num_actions), 0.0) {}

  Distribution current() const { return regret_matching_policy(regrets); }

  Distribution average() const {
    require(iteration > 0, ErrorCode::kInvalidState, "no iterations played");
    Distribution out(strategy_sum.size());
    for (std::size_t a = 0; a < out.size(); ++a) out[a] = strategy_sum[a] / static_cast<double>(iteration);
    return out;
  }

  double max_average_regret() const {
    require(iteration > 0, ErrorCode::kInvalidState, "no iterations played");
    return *std::max_element(regrets.begin(), regrets.end()) / static_cast<double>(iteration);
  }
};

inline std::vector<RegretMatchingState> make_rm_states(const NormalFormGame& nf) {
  std::vector<RegretMatchingState> out;
  for (int i = 0; i < nf.num_players(); ++i) out.emplace_back(nf.num_actions(i));
  return out;
}

// Regret update against an arbitrary played profile.
inline void accumulate_regrets(const NormalFormGame& nf, std::vector<RegretMatchingState>& states,
                               const std::vector<Distribution>& played) {
  require(states.size() == static_cast<std::size_t>(nf.num_players()), ErrorCode::kInvalidInput,
          "one regret state per player");
  const auto value = nf.expected_utility(played);
  for (int i = 0; i < nf.num_players(); ++i) {
    auto& s = states[static_cast<std::size_t>(i)];
    const auto av = nf.action_values(i, played);
    for (std::size_t a = 0; a < av.size(); ++a) {
      s.regrets[a] += av[a] - value[static_cast<std::size_t>(i)];
      s.strategy_sum[a] += played[static_cast<std::size_t>(i)][a];
    }
    ++s.iteration;
  }
}

// One simultaneous regret-matching step; returns the profile played.
inline std::vector<Distribution> normal_form_rm_step(const NormalFormGame& nf, std::vector<RegretMatchingState>& states) {
  require(states.size() == static_cast<std::size_t>(nf.num_players()), ErrorCode::kInvalidInput,
          "one regret state per player");
  std::vector<Distribution> played;
  for (int i = 0; i < nf.num_players(); ++i) {
    const auto& s = states[static_cast<std::size_t>(i)];
    require(s.regrets.size() == static_cast<std::size_t>(nf.num_actions(i)) && s.strategy_sum.size() == s.regrets.size(),
            ErrorCode::kInvalidInput, "regret state does not match the game");
    played.push_back(s.current());
  }
  accumulate_regrets(nf, states, played);
  return played;
}

}  // namespace cfr
