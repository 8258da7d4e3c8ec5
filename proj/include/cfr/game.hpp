#pragma once

// Extensive-form games with imperfect information and behavioral strategy
// profiles over them.
//
// A game is an immutable tree. Node ids are topologically ordered (a parent
// always has a smaller id than its children) so bottom-up passes are a plain
// reverse sweep over the node array. Information sets are numbered globally
// in order of first appearance; every (infoset, action) pair also has a flat
// offset so solvers can keep per-pair tables in a single contiguous array.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cfr/error.hpp"

namespace cfr {

using Distribution = std::vector<double>;

inline constexpr double kChanceSumTolerance = 1e-12;
inline constexpr double kDistributionTolerance = 1e-9;

enum class NodeType { kChance, kDecision, kTerminal };

// How a terminal was reached. Only used by utility transforms that treat
// showdowns and folds differently.
enum class TerminalKind { kUnspecified, kShowdown, kFold };

struct Node {
  NodeType type = NodeType::kTerminal;
  int parent = -1;
  int parent_action = -1;  // index of this node in parent's action list
  int depth = 0;
  int player = -1;   // decision nodes only
  int infoset = -1;  // decision nodes only
  std::vector<std::string> actions;
  std::vector<int> children;
  std::vector<double> chance_probs;  // chance nodes only, aligned with children
  std::vector<double> utilities;     // terminal nodes only, one per player
  TerminalKind terminal_kind = TerminalKind::kUnspecified;

  bool is_terminal() const { return type == NodeType::kTerminal; }
  bool is_chance() const { return type == NodeType::kChance; }
  bool is_decision() const { return type == NodeType::kDecision; }
};

struct InfoSet {
  std::string key;
  int player = -1;
  std::vector<std::string> actions;
  std::vector<int> nodes;
  std::size_t offset = 0;  // first flat (infoset, action) slot
  int index_in_player = -1;

  int num_actions() const { return static_cast<int>(actions.size()); }
};

class GameBuilder;

class ExtensiveFormGame {
 public:
  ExtensiveFormGame() = default;

  const std::string& name() const { return name_; }
  int num_players() const { return num_players_; }

  int root() const { return 0; }
  int num_nodes() const { return static_cast<int>(nodes_.size()); }
  const Node& node(int id) const { return nodes_.at(static_cast<std::size_t>(id)); }
  std::span<const Node> nodes() const { return nodes_; }
  std::span<const int> terminals() const { return terminals_; }

  int num_infosets() const { return static_cast<int>(infosets_.size()); }
  const InfoSet& infoset(int id) const { return infosets_.at(static_cast<std::size_t>(id)); }
  std::span<const InfoSet> infosets() const { return infosets_; }
  std::span<const int> player_infosets(int player) const {
    return player_infosets_.at(static_cast<std::size_t>(player));
  }
  std::size_t num_infoset_actions() const { return num_infoset_actions_; }

  std::optional<int> find_infoset(std::string_view key) const {
    auto it = infoset_by_key_.find(std::string(key));
    if (it == infoset_by_key_.end()) return std::nullopt;
    return it->second;
  }

  int infoset_index(std::string_view key) const {
    auto found = find_infoset(key);
    require(found.has_value(), ErrorCode::kInvalidInput,
            "unknown information set '" + std::string(key) + "'");
    return *found;
  }

  int action_index(int infoset_id, std::string_view action) const {
    const auto& acts = infoset(infoset_id).actions;
    auto it = std::find(acts.begin(), acts.end(), action);
    require(it != acts.end(), ErrorCode::kInvalidInput,
            "information set '" + infoset(infoset_id).key + "' has no action '" +
                std::string(action) + "'");
    return static_cast<int>(it - acts.begin());
  }

  // Delta_i: max minus min terminal utility for the player.
  double utility_range(int player) const {
    return utility_max_.at(static_cast<std::size_t>(player)) -
           utility_min_.at(static_cast<std::size_t>(player));
  }
  double utility_min(int player) const { return utility_min_.at(static_cast<std::size_t>(player)); }
  double utility_max(int player) const { return utility_max_.at(static_cast<std::size_t>(player)); }

  // |A(I_i)|: the largest action count over the player's information sets.
  int max_actions(int player) const {
    int best = 0;
    for (int id : player_infosets(player)) best = std::max(best, infoset(id).num_actions());
    return best;
  }

  bool is_zero_sum(double tol = 1e-9) const {
    for (int z : terminals_) {
      const auto& u = nodes_[static_cast<std::size_t>(z)].utilities;
      if (std::abs(std::accumulate(u.begin(), u.end(), 0.0)) > tol) return false;
    }
    return true;
  }

  // Reporting unit: "milli-chips" for Kuhn-family games, "mbb" for hold'em
  // family games, where one big blind is `chips_per_big_blind` chips.
  const std::string& unit_label() const { return unit_label_; }
  double chips_per_unit() const { return chips_per_unit_; }

  // D(I): the player's information sets having a history that extends a
  // history of I. Contains I itself. Sorted by infoset id.
  std::vector<int> descendant_infosets(int infoset_id) const {
    const int player = infoset(infoset_id).player;
    std::vector<char> seen(infosets_.size(), 0);
    std::vector<int> stack(infoset(infoset_id).nodes.begin(), infoset(infoset_id).nodes.end());
    while (!stack.empty()) {
      const int h = stack.back();
      stack.pop_back();
      const Node& n = nodes_[static_cast<std::size_t>(h)];
      if (n.is_decision() && n.player == player) seen[static_cast<std::size_t>(n.infoset)] = 1;
      for (int c : n.children) stack.push_back(c);
    }
    std::vector<int> out;
    for (std::size_t i = 0; i < seen.size(); ++i)
      if (seen[i]) out.push_back(static_cast<int>(i));
    return out;
  }

  // The player's (infoset, action) sequence leading to history h, root first.
  std::vector<std::pair<int, int>> player_sequence(int h, int player) const {
    std::vector<std::pair<int, int>> seq;
    int child = h;
    int cur = node(h).parent;
    while (cur >= 0) {
      const Node& n = node(cur);
      if (n.is_decision() && n.player == player) seq.emplace_back(n.infoset, node(child).parent_action);
      child = cur;
      cur = n.parent;
    }
    std::reverse(seq.begin(), seq.end());
    return seq;
  }

  // Walks up from h and returns the first ancestor-or-self node lying in
  // the given infoset, or -1.
  int ancestor_in_infoset(int h, int infoset_id) const {
    for (int cur = h; cur >= 0; cur = node(cur).parent) {
      const Node& n = node(cur);
      if (n.is_decision() && n.infoset == infoset_id) return cur;
    }
    return -1;
  }

  // Copy of the game whose terminal utilities are replaced by f(node).
  template <class F>
  ExtensiveFormGame with_utilities(std::string name, F&& f) const {
    ExtensiveFormGame out = *this;
    out.name_ = std::move(name);
    const auto np = static_cast<std::size_t>(num_players_);
    out.utility_min_.assign(np, std::numeric_limits<double>::infinity());
    out.utility_max_.assign(np, -std::numeric_limits<double>::infinity());
    for (int z : terminals_) {
      Node& n = out.nodes_[static_cast<std::size_t>(z)];
      std::vector<double> u = f(static_cast<const Node&>(n));
      require(u.size() == np, ErrorCode::kInvalidGame, "utility transform changed the player count");
      for (std::size_t i = 0; i < np; ++i) {
        require(std::isfinite(u[i]), ErrorCode::kInvalidGame, "non-finite utility");
        out.utility_min_[i] = std::min(out.utility_min_[i], u[i]);
        out.utility_max_[i] = std::max(out.utility_max_[i], u[i]);
      }
      n.utilities = std::move(u);
    }
    return out;
  }

 private:
  friend class GameBuilder;

  std::string name_;
  int num_players_ = 0;
  std::vector<Node> nodes_;
  std::vector<int> terminals_;
  std::vector<InfoSet> infosets_;
  std::vector<std::vector<int>> player_infosets_;
  std::map<std::string, int, std::less<>> infoset_by_key_;
  std::size_t num_infoset_actions_ = 0;
  std::vector<double> utility_min_;
  std::vector<double> utility_max_;
  std::string unit_label_ = "milli-chips";
  double chips_per_unit_ = 1e-3;
};

// Incremental tree construction. Nodes must be added parent-first; action
// lists are the labels of the children in insertion order.
class GameBuilder {
 public:
  GameBuilder(std::string name, int num_players) {
    require(num_players >= 1, ErrorCode::kInvalidGame, "a game needs at least one player");
    game_.name_ = std::move(name);
    game_.num_players_ = num_players;
  }

  int add_root() {
    require(game_.nodes_.empty(), ErrorCode::kInvalidGame, "root already added");
    game_.nodes_.emplace_back();
    return 0;
  }

  int add_child(int parent, std::string action, double chance_prob = std::numeric_limits<double>::quiet_NaN()) {
    require(parent >= 0 && parent < game_.num_nodes(), ErrorCode::kInvalidGame, "unknown parent node");
    const int id = game_.num_nodes();
    Node child;
    child.parent = parent;
    child.depth = game_.nodes_[static_cast<std::size_t>(parent)].depth + 1;
    Node& p = game_.nodes_[static_cast<std::size_t>(parent)];
    child.parent_action = static_cast<int>(p.children.size());
    p.children.push_back(id);
    p.actions.push_back(std::move(action));
    p.chance_probs.push_back(chance_prob);
    game_.nodes_.push_back(std::move(child));
    return id;
  }

  void set_chance(int node) { at(node).type = NodeType::kChance; }

  void set_decision(int node, int player, std::string infoset_key) {
    require(player >= 0 && player < game_.num_players_, ErrorCode::kInvalidGame, "player out of range");
    Node& n = at(node);
    n.type = NodeType::kDecision;
    n.player = player;
    keys_[node] = std::move(infoset_key);
  }

  void set_terminal(int node, std::vector<double> utilities, TerminalKind kind = TerminalKind::kUnspecified) {
    Node& n = at(node);
    n.type = NodeType::kTerminal;
    n.utilities = std::move(utilities);
    n.terminal_kind = kind;
  }

  void set_unit(std::string label, double chips_per_unit) {
    game_.unit_label_ = std::move(label);
    game_.chips_per_unit_ = chips_per_unit;
  }

  ExtensiveFormGame build() && {
    auto& g = game_;
    require(!g.nodes_.empty(), ErrorCode::kInvalidGame, "empty game tree");
    const auto np = static_cast<std::size_t>(g.num_players_);
    g.player_infosets_.assign(np, {});
    g.utility_min_.assign(np, std::numeric_limits<double>::infinity());
    g.utility_max_.assign(np, -std::numeric_limits<double>::infinity());

    for (int id = 0; id < g.num_nodes(); ++id) {
      Node& n = g.nodes_[static_cast<std::size_t>(id)];
      switch (n.type) {
        case NodeType::kTerminal: {
          require(n.children.empty(), ErrorCode::kInvalidGame, "terminal node with children");
          require(n.utilities.size() == np, ErrorCode::kInvalidGame,
                  "terminal utility vector has wrong length");
          for (std::size_t i = 0; i < np; ++i) {
            require(std::isfinite(n.utilities[i]), ErrorCode::kInvalidGame, "non-finite utility");
            g.utility_min_[i] = std::min(g.utility_min_[i], n.utilities[i]);
            g.utility_max_[i] = std::max(g.utility_max_[i], n.utilities[i]);
          }
          n.chance_probs.clear();
          g.terminals_.push_back(id);
          break;
        }
        case NodeType::kChance: {
          require(!n.children.empty(), ErrorCode::kInvalidGame, "chance node without outcomes");
          double total = 0.0;
          for (double p : n.chance_probs) {
            require(std::isfinite(p) && p >= 0.0, ErrorCode::kInvalidGame, "bad chance probability");
            total += p;
          }
          require(std::abs(total - 1.0) <= kChanceSumTolerance, ErrorCode::kInvalidGame,
                  "chance probabilities do not sum to 1");
          break;
        }
        case NodeType::kDecision: {
          require(!n.children.empty(), ErrorCode::kInvalidGame, "decision node without actions");
          n.chance_probs.clear();
          const std::string& key = keys_.at(id);
          auto it = g.infoset_by_key_.find(key);
          if (it == g.infoset_by_key_.end()) {
            InfoSet info;
            info.key = key;
            info.player = n.player;
            info.actions = n.actions;
            info.index_in_player = static_cast<int>(g.player_infosets_[static_cast<std::size_t>(n.player)].size());
            const int info_id = static_cast<int>(g.infosets_.size());
            g.infosets_.push_back(std::move(info));
            g.player_infosets_[static_cast<std::size_t>(n.player)].push_back(info_id);
            it = g.infoset_by_key_.emplace(key, info_id).first;
          }
          InfoSet& info = g.infosets_[static_cast<std::size_t>(it->second)];
          require(info.player == n.player, ErrorCode::kInvalidGame,
                  "information set '" + key + "' mixes players");
          require(info.actions == n.actions, ErrorCode::kInvalidGame,
                  "information set '" + key + "' has histories with different action sets");
          info.nodes.push_back(id);
          n.infoset = it->second;
          break;
        }
      }
    }

    std::size_t offset = 0;
    for (auto& info : g.infosets_) {
      info.offset = offset;
      offset += info.actions.size();
    }
    g.num_infoset_actions_ = offset;

    // Perfect recall: every history of an infoset carries the same sequence
    // of the acting player's own (infoset, action) pairs.
    for (const auto& info : g.infosets_) {
      const auto first = g.player_sequence(info.nodes.front(), info.player);
      for (std::size_t k = 1; k < info.nodes.size(); ++k) {
        require(g.player_sequence(info.nodes[k], info.player) == first, ErrorCode::kInvalidGame,
                "perfect recall violated at information set '" + info.key + "'");
      }
    }
    return std::move(game_);
  }

 private:
  Node& at(int id) {
    require(id >= 0 && id < game_.num_nodes(), ErrorCode::kInvalidGame, "unknown node");
    return game_.nodes_[static_cast<std::size_t>(id)];
  }

  ExtensiveFormGame game_;
  std::map<int, std::string> keys_;
};

// A behavioral strategy profile: one distribution per information set, for
// every player. A single player's behavioral strategy is represented by the
// same type; entries of other players are then ignored.
class StrategyProfile {
 public:
  StrategyProfile() = default;
  explicit StrategyProfile(std::vector<Distribution> dists) : dists_(std::move(dists)) {}

  static StrategyProfile uniform(const ExtensiveFormGame& game) {
    std::vector<Distribution> d;
    d.reserve(static_cast<std::size_t>(game.num_infosets()));
    for (const auto& info : game.infosets()) {
      const auto k = info.actions.size();
      d.emplace_back(k, 1.0 / static_cast<double>(k));
    }
    return StrategyProfile(std::move(d));
  }

  int size() const { return static_cast<int>(dists_.size()); }
  Distribution& operator[](int infoset) { return dists_.at(static_cast<std::size_t>(infoset)); }
  const Distribution& operator[](int infoset) const { return dists_.at(static_cast<std::size_t>(infoset)); }
  const std::vector<Distribution>& distributions() const { return dists_; }

  double prob(int infoset, int action) const { return (*this)[infoset].at(static_cast<std::size_t>(action)); }

  // Overwrites the player's information sets with those of `other`.
  StrategyProfile with_player(const ExtensiveFormGame& game, int player, const StrategyProfile& other) const {
    StrategyProfile out = *this;
    for (int id : game.player_infosets(player)) out[id] = other[id];
    return out;
  }

  void validate(const ExtensiveFormGame& game, double tol = kDistributionTolerance) const {
    require(size() == game.num_infosets(), ErrorCode::kInvalidInput,
            "profile does not cover the game's information sets");
    for (int id = 0; id < size(); ++id) validate_infoset(game, id, tol);
  }

  void validate_player(const ExtensiveFormGame& game, int player, double tol = kDistributionTolerance) const {
    require(size() == game.num_infosets(), ErrorCode::kInvalidInput,
            "profile does not cover the game's information sets");
    for (int id : game.player_infosets(player)) validate_infoset(game, id, tol);
  }

  bool operator==(const StrategyProfile&) const = default;

 private:
  void validate_infoset(const ExtensiveFormGame& game, int id, double tol) const {
    const auto& d = (*this)[id];
    const auto& info = game.infoset(id);
    require(d.size() == info.actions.size(), ErrorCode::kInvalidInput,
            "distribution at '" + info.key + "' has wrong length");
    double total = 0.0;
    for (double p : d) {
      require(std::isfinite(p) && p >= -tol, ErrorCode::kInvalidInput,
              "negative probability at '" + info.key + "'");
      total += p;
    }
    require(std::abs(total - 1.0) <= tol, ErrorCode::kInvalidInput,
            "distribution at '" + info.key + "' does not sum to 1");
  }

  std::vector<Distribution> dists_;
};

// Probability of the action taken into `child` at its parent under the profile.
inline double edge_probability(const ExtensiveFormGame& game, const StrategyProfile& profile, int child) {
  const Node& c = game.node(child);
  const Node& p = game.node(c.parent);
  const auto a = static_cast<std::size_t>(c.parent_action);
  if (p.is_chance()) return p.chance_probs[a];
  return profile[p.infoset][a];
}

// Per-node reach contributions. reach[h][k] for k < n is pi_k(h); reach[h][n]
// is chance's contribution.
struct ReachTable {
  int num_players = 0;
  std::vector<double> data;  // node-major, (n + 1) entries per node

  double player(int h, int k) const {
    return data[static_cast<std::size_t>(h) * static_cast<std::size_t>(num_players + 1) + static_cast<std::size_t>(k)];
  }
  double chance(int h) const { return player(h, num_players); }
  double total(int h) const {
    double r = 1.0;
    for (int k = 0; k <= num_players; ++k) r *= player(h, k);
    return r;
  }
  // pi_{-i}(h): everybody but player i, chance included.
  double others(int h, int i) const {
    double r = 1.0;
    for (int k = 0; k <= num_players; ++k)
      if (k != i) r *= player(h, k);
    return r;
  }
};

inline ReachTable compute_reach(const ExtensiveFormGame& game, const StrategyProfile& profile) {
  const int n = game.num_players();
  const auto stride = static_cast<std::size_t>(n + 1);
  ReachTable table;
  table.num_players = n;
  table.data.assign(static_cast<std::size_t>(game.num_nodes()) * stride, 1.0);
  for (int h = 1; h < game.num_nodes(); ++h) {
    const Node& c = game.node(h);
    const Node& p = game.node(c.parent);
    const auto hs = static_cast<std::size_t>(h) * stride;
    const auto ps = static_cast<std::size_t>(c.parent) * stride;
    for (std::size_t k = 0; k < stride; ++k) table.data[hs + k] = table.data[ps + k];
    const auto a = static_cast<std::size_t>(c.parent_action);
    if (p.is_chance()) {
      table.data[hs + static_cast<std::size_t>(n)] *= p.chance_probs[a];
    } else {
      table.data[hs + static_cast<std::size_t>(p.player)] *= profile[p.infoset][a];
    }
  }
  return table;
}

// Expected utility vector of every node's subtree under the profile,
// i.e. sum over terminals z below h of pi(h, z) u(z). Node-major, n per node.
inline std::vector<double> compute_subtree_values(const ExtensiveFormGame& game, const StrategyProfile& profile) {
  const auto n = static_cast<std::size_t>(game.num_players());
  std::vector<double> values(static_cast<std::size_t>(game.num_nodes()) * n, 0.0);
  for (int h = game.num_nodes() - 1; h >= 0; --h) {
    const Node& node = game.node(h);
    const auto hs = static_cast<std::size_t>(h) * n;
    if (node.is_terminal()) {
      for (std::size_t k = 0; k < n; ++k) values[hs + k] = node.utilities[k];
      continue;
    }
    for (std::size_t a = 0; a < node.children.size(); ++a) {
      const double p = node.is_chance() ? node.chance_probs[a] : profile[node.infoset][a];
      if (p == 0.0) continue;
      const auto cs = static_cast<std::size_t>(node.children[a]) * n;
      for (std::size_t k = 0; k < n; ++k) values[hs + k] += p * values[cs + k];
    }
  }
  return values;
}

}  // namespace cfr
