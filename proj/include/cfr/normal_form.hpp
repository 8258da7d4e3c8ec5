#pragma once

// Normal-form games and the conversion from extensive form.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "cfr/error.hpp"
#include "cfr/game.hpp"

namespace cfr {

inline constexpr std::size_t kDefaultProfileCap = 1'000'000;

class NormalFormGame {
 public:
  NormalFormGame() = default;

  // payoffs[i] is player i's utility tensor, flattened row-major with player 0
  // as the most significant coordinate.
  NormalFormGame(std::string name, std::vector<int> action_counts, std::vector<std::vector<double>> payoffs,
                 std::vector<std::vector<std::string>> labels = {})
      : name_(std::move(name)), counts_(std::move(action_counts)), payoffs_(std::move(payoffs)),
        labels_(std::move(labels)) {
    require(!counts_.empty(), ErrorCode::kInvalidGame, "normal-form game needs a player");
    std::size_t total = 1;
    for (int c : counts_) {
      require(c >= 1, ErrorCode::kInvalidGame, "every player needs an action");
      total *= static_cast<std::size_t>(c);
    }
    require(payoffs_.size() == counts_.size(), ErrorCode::kInvalidGame, "one payoff tensor per player");
    for (const auto& t : payoffs_) {
      require(t.size() == total, ErrorCode::kInvalidGame, "payoff tensor shape mismatch");
      for (double v : t) require(std::isfinite(v), ErrorCode::kInvalidGame, "non-finite payoff");
    }
    if (labels_.empty()) {
      for (int c : counts_) {
        std::vector<std::string> l;
        for (int a = 0; a < c; ++a) l.push_back(std::to_string(a));
        labels_.push_back(std::move(l));
      }
    }
    require(labels_.size() == counts_.size(), ErrorCode::kInvalidGame, "label list per player");
    for (std::size_t i = 0; i < counts_.size(); ++i)
      require(labels_[i].size() == static_cast<std::size_t>(counts_[i]), ErrorCode::kInvalidGame,
              "label count mismatch");
    strides_.assign(counts_.size(), 1);
    for (std::size_t i = counts_.size() - 1; i > 0; --i)
      strides_[i - 1] = strides_[i] * static_cast<std::size_t>(counts_[i]);
    total_ = total;
  }

  const std::string& name() const { return name_; }
  int num_players() const { return static_cast<int>(counts_.size()); }
  int num_actions(int player) const { return counts_.at(static_cast<std::size_t>(player)); }
  const std::vector<int>& action_counts() const { return counts_; }
  std::size_t num_profiles() const { return total_; }
  const std::vector<std::string>& labels(int player) const { return labels_.at(static_cast<std::size_t>(player)); }
  const std::string& label(int player, int action) const {
    return labels(player).at(static_cast<std::size_t>(action));
  }

  std::size_t flat_index(const std::vector<int>& profile) const {
    require(profile.size() == counts_.size(), ErrorCode::kInvalidInput, "profile has wrong arity");
    std::size_t idx = 0;
    for (std::size_t i = 0; i < counts_.size(); ++i) {
      require(profile[i] >= 0 && profile[i] < counts_[i], ErrorCode::kInvalidInput, "action out of range");
      idx += static_cast<std::size_t>(profile[i]) * strides_[i];
    }
    return idx;
  }

  int action_at(std::size_t flat, int player) const {
    const auto p = static_cast<std::size_t>(player);
    return static_cast<int>((flat / strides_[p]) % static_cast<std::size_t>(counts_[p]));
  }

  double utility(int player, std::size_t flat) const { return payoffs_[static_cast<std::size_t>(player)][flat]; }
  double utility(int player, const std::vector<int>& profile) const { return utility(player, flat_index(profile)); }
  const std::vector<double>& payoff_tensor(int player) const { return payoffs_.at(static_cast<std::size_t>(player)); }

  // Expected utility of every player under independent mixed strategies.
  std::vector<double> expected_utility(const std::vector<Distribution>& mixed) const {
    check_mixed(mixed);
    std::vector<double> out(counts_.size(), 0.0);
    for (std::size_t f = 0; f < total_; ++f) {
      double w = 1.0;
      for (std::size_t i = 0; i < counts_.size() && w != 0.0; ++i)
        w *= mixed[i][static_cast<std::size_t>(action_at(f, static_cast<int>(i)))];
      if (w == 0.0) continue;
      for (std::size_t i = 0; i < counts_.size(); ++i) out[i] += w * payoffs_[i][f];
    }
    return out;
  }

  // u_i(a, sigma_{-i}) for every action a of the player.
  std::vector<double> action_values(int player, const std::vector<Distribution>& mixed) const {
    check_mixed(mixed);
    const auto p = static_cast<std::size_t>(player);
    std::vector<double> out(static_cast<std::size_t>(counts_[p]), 0.0);
    for (std::size_t f = 0; f < total_; ++f) {
      double w = 1.0;
      for (std::size_t i = 0; i < counts_.size() && w != 0.0; ++i)
        if (i != p) w *= mixed[i][static_cast<std::size_t>(action_at(f, static_cast<int>(i)))];
      if (w == 0.0) continue;
      out[static_cast<std::size_t>(action_at(f, player))] += w * payoffs_[p][f];
    }
    return out;
  }

  double utility_range(int player) const {
    const auto& t = payoff_tensor(player);
    auto [lo, hi] = std::minmax_element(t.begin(), t.end());
    return *hi - *lo;
  }

 private:
  void check_mixed(const std::vector<Distribution>& mixed) const {
    require(mixed.size() == counts_.size(), ErrorCode::kInvalidInput, "one distribution per player");
    for (std::size_t i = 0; i < counts_.size(); ++i)
      require(mixed[i].size() == static_cast<std::size_t>(counts_[i]), ErrorCode::kInvalidInput,
              "distribution has wrong length");
  }

  std::string name_;
  std::vector<int> counts_;
  std::vector<std::vector<double>> payoffs_;
  std::vector<std::vector<std::string>> labels_;
  std::vector<std::size_t> strides_;
  std::size_t total_ = 0;
};

// Number of pure strategies of a player, saturating at SIZE_MAX.
inline std::size_t num_pure_strategies(const ExtensiveFormGame& game, int player) {
  std::size_t n = 1;
  for (int id : game.player_infosets(player)) {
    const auto k = static_cast<std::size_t>(game.infoset(id).num_actions());
    if (n > SIZE_MAX / k) return SIZE_MAX;
    n *= k;
  }
  return n;
}

// Pure strategy number `index` of the player as one action index per player
// infoset (in player_infosets order). The first infoset is the most
// significant digit.
inline std::vector<int> pure_strategy_actions(const ExtensiveFormGame& game, int player, std::size_t index) {
  const auto ids = game.player_infosets(player);
  std::vector<int> acts(ids.size(), 0);
  for (std::size_t k = ids.size(); k-- > 0;) {
    const auto n = static_cast<std::size_t>(game.infoset(ids[k]).num_actions());
    acts[k] = static_cast<int>(index % n);
    index /= n;
  }
  return acts;
}

inline std::size_t pure_strategy_index(const ExtensiveFormGame& game, int player, const std::vector<int>& acts) {
  const auto ids = game.player_infosets(player);
  require(acts.size() == ids.size(), ErrorCode::kInvalidInput, "pure strategy has wrong length");
  std::size_t index = 0;
  for (std::size_t k = 0; k < ids.size(); ++k)
    index = index * static_cast<std::size_t>(game.infoset(ids[k]).num_actions()) + static_cast<std::size_t>(acts[k]);
  return index;
}

inline std::string pure_strategy_label(const ExtensiveFormGame& game, int player, const std::vector<int>& acts) {
  const auto ids = game.player_infosets(player);
  std::string out;
  for (std::size_t k = 0; k < ids.size(); ++k) {
    if (k) out += '/';
    out += game.infoset(ids[k]).actions[static_cast<std::size_t>(acts[k])];
  }
  return out;
}

// Writes the pure strategy into the player's slots of `profile`.
inline void set_pure_strategy(const ExtensiveFormGame& game, int player, const std::vector<int>& acts,
                              StrategyProfile& profile) {
  const auto ids = game.player_infosets(player);
  for (std::size_t k = 0; k < ids.size(); ++k) {
    auto& d = profile[ids[k]];
    std::fill(d.begin(), d.end(), 0.0);
    d[static_cast<std::size_t>(acts[k])] = 1.0;
  }
}

inline NormalFormGame to_normal_form(const ExtensiveFormGame& game, std::size_t cap = kDefaultProfileCap) {
  const int n = game.num_players();
  std::vector<int> counts;
  std::size_t total = 1;
  for (int i = 0; i < n; ++i) {
    const std::size_t c = num_pure_strategies(game, i);
    require(c <= cap && c <= static_cast<std::size_t>(INT32_MAX) && total <= cap / c, ErrorCode::kGameTooLarge,
            "normal form of '" + game.name() + "' exceeds the profile cap");
    total *= c;
    counts.push_back(static_cast<int>(c));
  }
  std::vector<std::vector<std::string>> labels(static_cast<std::size_t>(n));
  std::vector<std::vector<std::vector<int>>> pure(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    for (int s = 0; s < counts[static_cast<std::size_t>(i)]; ++s) {
      pure[static_cast<std::size_t>(i)].push_back(pure_strategy_actions(game, i, static_cast<std::size_t>(s)));
      labels[static_cast<std::size_t>(i)].push_back(pure_strategy_label(game, i, pure[static_cast<std::size_t>(i)].back()));
    }
  }

  std::vector<std::vector<double>> payoffs(static_cast<std::size_t>(n), std::vector<double>(total, 0.0));
  StrategyProfile profile = StrategyProfile::uniform(game);
  std::vector<int> digits(static_cast<std::size_t>(n), 0);
  for (std::size_t f = 0; f < total; ++f) {
    for (int i = 0; i < n; ++i)
      set_pure_strategy(game, i, pure[static_cast<std::size_t>(i)][static_cast<std::size_t>(digits[static_cast<std::size_t>(i)])], profile);
    const auto values = compute_subtree_values(game, profile);
    for (int i = 0; i < n; ++i) payoffs[static_cast<std::size_t>(i)][f] = values[static_cast<std::size_t>(i)];
    for (int i = n - 1; i >= 0; --i) {
      auto& d = digits[static_cast<std::size_t>(i)];
      if (++d < counts[static_cast<std::size_t>(i)]) break;
      d = 0;
    }
  }
  return NormalFormGame(game.name(), std::move(counts), std::move(payoffs), std::move(labels));
}

// Kuhn's mixed image of a behavioral strategy: each pure strategy gets the
// product of the behavioral probabilities of its choices.
inline Distribution realize_mixed_from_behavioral(const ExtensiveFormGame& game, int player,
                                                  const StrategyProfile& sigma, std::size_t cap = kDefaultProfileCap) {
  sigma.validate_player(game, player);
  const std::size_t count = num_pure_strategies(game, player);
  require(count <= cap, ErrorCode::kGameTooLarge, "too many pure strategies");
  const auto ids = game.player_infosets(player);
  Distribution out(count, 0.0);
  for (std::size_t s = 0; s < count; ++s) {
    const auto acts = pure_strategy_actions(game, player, s);
    double p = 1.0;
    for (std::size_t k = 0; k < ids.size() && p != 0.0; ++k) p *= sigma[ids[k]][static_cast<std::size_t>(acts[k])];
    out[s] = p;
  }
  return out;
}

}  // namespace cfr
