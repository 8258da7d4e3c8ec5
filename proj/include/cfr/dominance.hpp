#pragma once

// Strategy dominance in normal-form games, action dominance in extensive
// games, iterated removal and coarse correlated equilibrium checks.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "cfr/analysis.hpp"
#include "cfr/error.hpp"
#include "cfr/game.hpp"
#include "cfr/lp.hpp"
#include "cfr/normal_form.hpp"

namespace cfr {

enum class DominanceMode { kStrict, kWeak };

inline std::string to_string(DominanceMode m) { return m == DominanceMode::kStrict ? "strict" : "weak"; }

inline DominanceMode parse_dominance_mode(const std::string& s) {
  if (s == "strict") return DominanceMode::kStrict;
  if (s == "weak") return DominanceMode::kWeak;
  fail(ErrorCode::kInvalidParameters, "unknown dominance mode '" + s + "'");
}

inline constexpr double kDominanceTolerance = 1e-9;
inline constexpr std::size_t kActionEnumerationCap = 200'000;

// Surviving pure strategies per player (sorted action indices).
using Restriction = std::vector<std::vector<int>>;

inline Restriction full_restriction(const NormalFormGame& nf) {
  Restriction r(static_cast<std::size_t>(nf.num_players()));
  for (int p = 0; p < nf.num_players(); ++p) {
    r[static_cast<std::size_t>(p)].resize(static_cast<std::size_t>(nf.num_actions(p)));
    std::iota(r[static_cast<std::size_t>(p)].begin(), r[static_cast<std::size_t>(p)].end(), 0);
  }
  return r;
}

struct Certificate {
  Distribution mixture;  // over the player's pure strategies
  double score = 0.0;    // strict: 1 - LP objective; weak: number of strict columns
};

struct RemovedItem {
  int round = 0;
  int player = 0;
  int infoset = -1;  // -1 for pure strategies
  int action = 0;
  std::string label;
  std::vector<std::pair<std::string, double>> certificate;
};

struct DominanceReport {
  DominanceMode mode = DominanceMode::kStrict;
  std::string target;  // "strategies" or "actions"
  int rounds = 0;
  std::vector<RemovedItem> removals;
  std::vector<std::vector<std::string>> survivors;

  std::vector<RemovedItem> round(int k) const {
    std::vector<RemovedItem> out;
    for (const auto& r : removals)
      if (r.round == k) out.push_back(r);
    return out;
  }
};

namespace detail {

// Calls f(profile) for every surviving profile of the players other than
// `player`; the player's own slot is left at 0.
template <class F>
void for_each_opponent_profile(const NormalFormGame& nf, int player, const Restriction& r, F&& f) {
  const int n = nf.num_players();
  std::vector<std::size_t> pos(static_cast<std::size_t>(n), 0);
  std::vector<int> prof(static_cast<std::size_t>(n), 0);
  for (;;) {
    for (int q = 0; q < n; ++q)
      if (q != player) prof[static_cast<std::size_t>(q)] = r[static_cast<std::size_t>(q)][pos[static_cast<std::size_t>(q)]];
    f(prof);
    int q = n - 1;
    for (; q >= 0; --q) {
      if (q == player) continue;
      auto& k = pos[static_cast<std::size_t>(q)];
      if (++k < r[static_cast<std::size_t>(q)].size()) break;
      k = 0;
    }
    if (q < 0) return;
  }
}

inline void check_restriction(const NormalFormGame& nf, const Restriction& r) {
  require(static_cast<int>(r.size()) == nf.num_players(), ErrorCode::kInvalidInput, "restriction has wrong size");
  for (int p = 0; p < nf.num_players(); ++p) {
    require(!r[static_cast<std::size_t>(p)].empty(), ErrorCode::kInvalidInput, "empty restriction");
    for (int a : r[static_cast<std::size_t>(p)])
      require(a >= 0 && a < nf.num_actions(p), ErrorCode::kInvalidInput, "restriction names an unknown action");
  }
}

}  // namespace detail

// Whether the mixed `target` of `player` is dominated by a mixture over the
// player's surviving pure strategies, against surviving opponent profiles.
inline std::optional<Certificate> lp_is_dominated(const NormalFormGame& nf, int player, const Distribution& target,
                                                  DominanceMode mode, Restriction restriction = {},
                                                  double tol = kDominanceTolerance) {
  if (restriction.empty()) restriction = full_restriction(nf);
  detail::check_restriction(nf, restriction);
  require(player >= 0 && player < nf.num_players(), ErrorCode::kInvalidInput, "unknown player");
  require(static_cast<int>(target.size()) == nf.num_actions(player), ErrorCode::kInvalidInput,
          "target has wrong size");
  const auto& own = restriction[static_cast<std::size_t>(player)];
  const std::size_t m = own.size();

  // rows[c][k] = u(own[k], column c); rhs[c] = u(target, column c)
  std::vector<std::vector<double>> rows;
  std::vector<double> rhs;
  detail::for_each_opponent_profile(nf, player, restriction, [&](std::vector<int> prof) {
    std::vector<double> row(m);
    for (std::size_t k = 0; k < m; ++k) {
      prof[static_cast<std::size_t>(player)] = own[k];
      row[k] = nf.utility(player, prof);
    }
    double t = 0.0;
    for (int a = 0; a < nf.num_actions(player); ++a) {
      if (target[static_cast<std::size_t>(a)] == 0.0) continue;
      prof[static_cast<std::size_t>(player)] = a;
      t += target[static_cast<std::size_t>(a)] * nf.utility(player, prof);
    }
    rows.push_back(std::move(row));
    rhs.push_back(t);
  });

  if (mode == DominanceMode::kStrict) {
    double lo = std::numeric_limits<double>::infinity();
    for (double u : nf.payoff_tensor(player)) lo = std::min(lo, u);
    const double shift = 1.0 - lo;
    lp::Problem prob(m);
    std::fill(prob.cost.begin(), prob.cost.end(), 1.0);
    for (std::size_t c = 0; c < rows.size(); ++c) {
      auto row = rows[c];
      for (auto& v : row) v += shift;
      prob.add(std::move(row), lp::Relation::kGreaterEqual, rhs[c] + shift);
    }
    const auto sol = lp::solve(prob, tol);
    require(sol.status == lp::Status::kOptimal, ErrorCode::kInternal, "dominance LP is not optimal");
    if (!(sol.objective < 1.0 - tol)) return std::nullopt;
    Certificate cert;
    cert.mixture.assign(static_cast<std::size_t>(nf.num_actions(player)), 0.0);
    for (std::size_t k = 0; k < m; ++k) cert.mixture[static_cast<std::size_t>(own[k])] = sol.x[k] / sol.objective;
    cert.score = 1.0 - sol.objective;
    return cert;
  }

  // Weak: one LP per column, maximizing the slack of that column while all
  // columns hold weakly. Successful solutions are averaged.
  Distribution sum(static_cast<std::size_t>(nf.num_actions(player)), 0.0);
  int solutions = 0;
  std::vector<char> covered(rows.size(), 0);
  for (std::size_t c = 0; c < rows.size(); ++c) {
    if (covered[c]) continue;
    lp::Problem prob(m);
    for (std::size_t k = 0; k < m; ++k) prob.cost[k] = -rows[c][k];
    for (std::size_t j = 0; j < rows.size(); ++j) prob.add(rows[j], lp::Relation::kGreaterEqual, rhs[j]);
    prob.add(std::vector<double>(m, 1.0), lp::Relation::kEqual, 1.0);
    const auto sol = lp::solve(prob, tol);
    if (sol.status == lp::Status::kInfeasible) return std::nullopt;
    require(sol.status == lp::Status::kOptimal, ErrorCode::kInternal, "dominance LP is unbounded");
    if (-sol.objective - rhs[c] <= tol) continue;
    ++solutions;
    for (std::size_t k = 0; k < m; ++k) sum[static_cast<std::size_t>(own[k])] += sol.x[k];
    for (std::size_t j = 0; j < rows.size(); ++j) {
      double v = 0.0;
      for (std::size_t k = 0; k < m; ++k) v += sol.x[k] * rows[j][k];
      if (v - rhs[j] > tol) covered[j] = 1;
    }
  }
  if (solutions == 0) return std::nullopt;
  for (auto& v : sum) v /= solutions;
  const auto strict_columns = std::count(covered.begin(), covered.end(), 1);
  return Certificate{std::move(sum), static_cast<double>(strict_columns)};
}

inline std::optional<Certificate> lp_is_dominated(const NormalFormGame& nf, int player, int pure_target,
                                                  DominanceMode mode, Restriction restriction = {},
                                                  double tol = kDominanceTolerance) {
  Distribution t(static_cast<std::size_t>(nf.num_actions(player)), 0.0);
  t.at(static_cast<std::size_t>(pure_target)) = 1.0;
  return lp_is_dominated(nf, player, t, mode, std::move(restriction), tol);
}

namespace detail {

inline std::vector<std::pair<std::string, double>> labeled(const NormalFormGame& nf, int player, const Distribution& d) {
  std::vector<std::pair<std::string, double>> out;
  for (std::size_t a = 0; a < d.size(); ++a)
    if (d[a] > 0.0) out.emplace_back(nf.label(player, static_cast<int>(a)), d[a]);
  return out;
}

inline std::vector<std::vector<std::string>> survivor_labels(const NormalFormGame& nf, const Restriction& r) {
  std::vector<std::vector<std::string>> out(r.size());
  for (std::size_t p = 0; p < r.size(); ++p)
    for (int a : r[p]) out[p].push_back(nf.label(static_cast<int>(p), a));
  return out;
}

}  // namespace detail

// Removes every dominated pure strategy of every player simultaneously each
// round until a round removes nothing.
inline DominanceReport iterated_strategy_removal(const NormalFormGame& nf, DominanceMode mode,
                                                 double tol = kDominanceTolerance) {
  DominanceReport rep;
  rep.mode = mode;
  rep.target = "strategies";
  Restriction r = full_restriction(nf);
  for (int round = 1;; ++round) {
    std::vector<RemovedItem> found;
    for (int p = 0; p < nf.num_players(); ++p) {
      if (r[static_cast<std::size_t>(p)].size() < 2) continue;
      for (int a : r[static_cast<std::size_t>(p)]) {
        auto cert = lp_is_dominated(nf, p, a, mode, r, tol);
        if (!cert) continue;
        found.push_back({round, p, -1, a, nf.label(p, a), detail::labeled(nf, p, cert->mixture)});
      }
    }
    if (found.empty()) break;
    rep.rounds = round;
    for (const auto& item : found) {
      auto& own = r[static_cast<std::size_t>(item.player)];
      own.erase(std::find(own.begin(), own.end(), item.action));
      require(!own.empty(), ErrorCode::kInternal, "iterated removal emptied a strategy set");
      rep.removals.push_back(item);
    }
  }
  rep.survivors = detail::survivor_labels(nf, r);
  return rep;
}

// One-at-a-time removal: each round visits the surviving strategies in a
// seeded random order and removes each as soon as it is found dominated.
inline DominanceReport iterated_strategy_removal_random_order(const NormalFormGame& nf, DominanceMode mode,
                                                              std::uint64_t seed, double tol = kDominanceTolerance) {
  DominanceReport rep;
  rep.mode = mode;
  rep.target = "strategies";
  Restriction r = full_restriction(nf);
  std::mt19937_64 rng(seed);
  for (int round = 1;; ++round) {
    std::vector<std::pair<int, int>> candidates;
    for (int p = 0; p < nf.num_players(); ++p)
      for (int a : r[static_cast<std::size_t>(p)]) candidates.emplace_back(p, a);
    std::shuffle(candidates.begin(), candidates.end(), rng);
    bool removed = false;
    for (auto [p, a] : candidates) {
      auto& own = r[static_cast<std::size_t>(p)];
      if (own.size() < 2) continue;
      auto cert = lp_is_dominated(nf, p, a, mode, r, tol);
      if (!cert) continue;
      own.erase(std::find(own.begin(), own.end(), a));
      rep.removals.push_back({round, p, -1, a, nf.label(p, a), detail::labeled(nf, p, cert->mixture)});
      rep.rounds = round;
      removed = true;
    }
    if (!removed) break;
  }
  rep.survivors = detail::survivor_labels(nf, r);
  return rep;
}

// ---------------------------------------------------------------------------
// Action dominance

// alive[I][a] marks actions not yet removed.
using ActionMask = std::vector<std::vector<char>>;

inline ActionMask full_action_mask(const ExtensiveFormGame& game) {
  ActionMask m;
  for (const auto& info : game.infosets()) m.emplace_back(info.actions.size(), 1);
  return m;
}

// A player continuation inside D(I): one action per scope infoset.
struct ActionCertificate {
  int infoset = -1;
  int action = -1;
  std::vector<int> scope;                    // D(I)
  std::vector<std::vector<int>> continuations;
  std::vector<double> weights;
  double margin = 0.0;                       // strict: epsilon*, weak: continuations with a strict witness

  std::string continuation_label(const ExtensiveFormGame& game, std::size_t k) const {
    std::string out;
    for (std::size_t j = 0; j < scope.size(); ++j) {
      if (j) out += ',';
      const auto& info = game.infoset(scope[j]);
      out += info.key + "=" + info.actions[static_cast<std::size_t>(continuations[k][j])];
    }
    return out;
  }

  std::vector<std::pair<std::string, double>> labeled(const ExtensiveFormGame& game) const {
    std::vector<std::pair<std::string, double>> out;
    for (std::size_t k = 0; k < weights.size(); ++k)
      if (weights[k] > 0.0) out.emplace_back(continuation_label(game, k), weights[k]);
    return out;
  }
};

// Values v_i(I, (s', s_{-i})) for every player continuation and every
// opponent pure profile over the infosets that matter at I.
struct ActionValueTable {
  std::vector<int> scope;
  std::vector<std::vector<int>> continuations;
  std::vector<int> opponent_infosets;
  std::vector<std::vector<int>> opponent_profiles;  // reaching with positive mass only
  std::vector<std::vector<double>> values;          // [continuation][opponent profile]
};

namespace detail {

template <class F>
void for_each_assignment(const std::vector<int>& ids, const ActionMask& alive, F&& f) {
  std::vector<std::vector<int>> options;
  for (int id : ids) {
    std::vector<int> o;
    for (std::size_t a = 0; a < alive[static_cast<std::size_t>(id)].size(); ++a)
      if (alive[static_cast<std::size_t>(id)][a]) o.push_back(static_cast<int>(a));
    require(!o.empty(), ErrorCode::kInternal, "information set without surviving actions");
    options.push_back(std::move(o));
  }
  std::vector<std::size_t> pos(ids.size(), 0);
  std::vector<int> cur(ids.size());
  for (;;) {
    for (std::size_t k = 0; k < ids.size(); ++k) cur[k] = options[k][pos[k]];
    f(cur);
    std::size_t k = ids.size();
    while (k > 0) {
      --k;
      if (++pos[k] < options[k].size()) break;
      pos[k] = 0;
      if (k == 0) return;
    }
    if (ids.empty()) return;
  }
}

inline std::size_t count_assignments(const std::vector<int>& ids, const ActionMask& alive) {
  std::size_t n = 1;
  for (int id : ids) {
    const auto& m = alive[static_cast<std::size_t>(id)];
    const auto k = static_cast<std::size_t>(std::count(m.begin(), m.end(), 1));
    if (k > 0 && n > SIZE_MAX / k) return SIZE_MAX;
    n *= std::max<std::size_t>(k, 1);
  }
  return n;
}

inline double pure_subtree_value(const ExtensiveFormGame& game, int h, int player, const std::vector<int>& choice) {
  const Node& n = game.node(h);
  if (n.is_terminal()) return n.utilities[static_cast<std::size_t>(player)];
  if (n.is_chance()) {
    double v = 0.0;
    for (std::size_t a = 0; a < n.children.size(); ++a)
      v += n.chance_probs[a] * pure_subtree_value(game, n.children[a], player, choice);
    return v;
  }
  const int a = choice[static_cast<std::size_t>(n.infoset)];
  require(a >= 0, ErrorCode::kInternal, "pure choice missing below an information set");
  return pure_subtree_value(game, n.children[static_cast<std::size_t>(a)], player, choice);
}

// pi_{-i}(h) under the pure opponent choices.
inline double pure_reach_others(const ExtensiveFormGame& game, int h, int player, const std::vector<int>& choice) {
  double p = 1.0;
  int child = h;
  for (int cur = game.node(h).parent; cur >= 0 && p != 0.0; cur = game.node(cur).parent) {
    const Node& n = game.node(cur);
    const int a = game.node(child).parent_action;
    if (n.is_chance()) p *= n.chance_probs[static_cast<std::size_t>(a)];
    else if (n.player != player && choice[static_cast<std::size_t>(n.infoset)] != a) p = 0.0;
    child = cur;
  }
  return p;
}

}  // namespace detail

inline ActionValueTable action_value_table(const ExtensiveFormGame& game, int infoset, const ActionMask& alive,
                                           std::size_t cap = kActionEnumerationCap) {
  const InfoSet& info = game.infoset(infoset);
  const int player = info.player;
  ActionValueTable t;
  t.scope = game.descendant_infosets(infoset);

  std::vector<char> rel(static_cast<std::size_t>(game.num_infosets()), 0);
  for (int h : info.nodes) {
    for (int cur = game.node(h).parent; cur >= 0; cur = game.node(cur).parent) {
      const Node& n = game.node(cur);
      if (n.is_decision() && n.player != player) rel[static_cast<std::size_t>(n.infoset)] = 1;
    }
    std::vector<int> stack{h};
    while (!stack.empty()) {
      const Node& n = game.node(stack.back());
      stack.pop_back();
      if (n.is_decision() && n.player != player) rel[static_cast<std::size_t>(n.infoset)] = 1;
      for (int c : n.children) stack.push_back(c);
    }
  }
  for (int id = 0; id < game.num_infosets(); ++id)
    if (rel[static_cast<std::size_t>(id)]) t.opponent_infosets.push_back(id);

  const std::size_t nk = detail::count_assignments(t.scope, alive);
  const std::size_t ns = detail::count_assignments(t.opponent_infosets, alive);
  require(nk != SIZE_MAX && ns != SIZE_MAX && nk <= cap / std::max<std::size_t>(ns, 1), ErrorCode::kGameTooLarge,
          "action dominance at '" + info.key + "' exceeds the enumeration cap");

  detail::for_each_assignment(t.scope, alive, [&](const std::vector<int>& c) { t.continuations.push_back(c); });
  std::vector<int> choice(static_cast<std::size_t>(game.num_infosets()), -1);
  std::vector<std::vector<double>> reach;
  detail::for_each_assignment(t.opponent_infosets, alive, [&](const std::vector<int>& s) {
    for (std::size_t k = 0; k < s.size(); ++k) choice[static_cast<std::size_t>(t.opponent_infosets[k])] = s[k];
    std::vector<double> r;
    double mass = 0.0;
    for (int h : info.nodes) {
      r.push_back(detail::pure_reach_others(game, h, player, choice));
      mass += r.back();
    }
    if (mass > 0.0) {
      t.opponent_profiles.push_back(s);
      reach.push_back(std::move(r));
    }
  });

  t.values.assign(t.continuations.size(), std::vector<double>(t.opponent_profiles.size(), 0.0));
  for (std::size_t s = 0; s < t.opponent_profiles.size(); ++s) {
    for (std::size_t k = 0; k < t.opponent_infosets.size(); ++k)
      choice[static_cast<std::size_t>(t.opponent_infosets[k])] = t.opponent_profiles[s][k];
    for (std::size_t k = 0; k < t.continuations.size(); ++k) {
      for (std::size_t j = 0; j < t.scope.size(); ++j)
        choice[static_cast<std::size_t>(t.scope[j])] = t.continuations[k][j];
      double v = 0.0;
      for (std::size_t j = 0; j < info.nodes.size(); ++j)
        if (reach[s][j] != 0.0) v += reach[s][j] * detail::pure_subtree_value(game, info.nodes[j], player, choice);
      t.values[k][s] = v;
    }
  }
  return t;
}

// Decides whether action `action` at `infoset` is dominated given the
// surviving actions.
inline std::optional<ActionCertificate> action_is_dominated(const ExtensiveFormGame& game, int infoset, int action,
                                                            DominanceMode mode, const ActionMask& alive,
                                                            double tol = kDominanceTolerance,
                                                            std::size_t cap = kActionEnumerationCap) {
  const auto& mask = alive.at(static_cast<std::size_t>(infoset));
  require(action >= 0 && action < static_cast<int>(mask.size()) && mask[static_cast<std::size_t>(action)],
          ErrorCode::kInvalidInput, "action is not available");
  if (std::count(mask.begin(), mask.end(), 1) < 2) return std::nullopt;
  const auto t = action_value_table(game, infoset, alive, cap);
  if (t.opponent_profiles.empty()) return std::nullopt;

  const auto pos = static_cast<std::size_t>(std::find(t.scope.begin(), t.scope.end(), infoset) - t.scope.begin());
  std::vector<std::size_t> with_a, alt;
  for (std::size_t k = 0; k < t.continuations.size(); ++k)
    (t.continuations[k][pos] == action ? with_a : alt).push_back(k);
  const std::size_t m = alt.size(), ns = t.opponent_profiles.size();

  ActionCertificate cert;
  cert.infoset = infoset;
  cert.action = action;
  cert.scope = t.scope;
  for (auto k : alt) cert.continuations.push_back(t.continuations[k]);

  auto add_rows = [&](lp::Problem& prob, std::size_t width, bool with_eps) {
    for (auto j : with_a) {
      for (std::size_t s = 0; s < ns; ++s) {
        std::vector<double> row(width, 0.0);
        for (std::size_t k = 0; k < m; ++k) row[k] = t.values[alt[k]][s];
        if (with_eps) {
          row[m] = -1.0;
          row[m + 1] = 1.0;
        }
        prob.add(std::move(row), lp::Relation::kGreaterEqual, t.values[j][s]);
      }
    }
    std::vector<double> sum(width, 0.0);
    std::fill(sum.begin(), sum.begin() + static_cast<std::ptrdiff_t>(m), 1.0);
    prob.add(std::move(sum), lp::Relation::kEqual, 1.0);
  };

  if (mode == DominanceMode::kStrict) {
    lp::Problem prob(m + 2);
    prob.cost[m] = -1.0;
    prob.cost[m + 1] = 1.0;
    add_rows(prob, m + 2, true);
    const auto sol = lp::solve(prob, tol);
    require(sol.status == lp::Status::kOptimal, ErrorCode::kInternal, "action dominance LP is not optimal");
    const double eps = -sol.objective;
    if (!(eps > tol)) return std::nullopt;
    cert.weights.assign(sol.x.begin(), sol.x.begin() + static_cast<std::ptrdiff_t>(m));
    cert.margin = eps;
    return cert;
  }

  // Weak: every a-continuation needs an opponent profile where some weakly
  // feasible mixture is strictly better.
  std::vector<double> sum(m, 0.0);
  std::vector<char> witnessed_by(t.continuations.size(), 0);
  int solutions = 0;
  for (auto j : with_a) {
    bool witnessed = witnessed_by[j] != 0;
    for (std::size_t s = 0; s < ns && !witnessed; ++s) {
      lp::Problem prob(m);
      for (std::size_t k = 0; k < m; ++k) prob.cost[k] = -t.values[alt[k]][s];
      add_rows(prob, m, false);
      const auto sol = lp::solve(prob, tol);
      if (sol.status == lp::Status::kInfeasible) return std::nullopt;
      require(sol.status == lp::Status::kOptimal, ErrorCode::kInternal, "action dominance LP is unbounded");
      if (-sol.objective - t.values[j][s] <= tol) continue;
      witnessed = true;
      ++solutions;
      for (std::size_t k = 0; k < m; ++k) sum[k] += sol.x[k];
      for (auto j2 : with_a) {
        for (std::size_t s2 = 0; s2 < ns && !witnessed_by[j2]; ++s2) {
          double v = 0.0;
          for (std::size_t k = 0; k < m; ++k) v += sol.x[k] * t.values[alt[k]][s2];
          if (v - t.values[j2][s2] > tol) witnessed_by[j2] = 1;
        }
      }
    }
    if (!witnessed) return std::nullopt;
  }
  for (auto& v : sum) v /= static_cast<double>(solutions);
  cert.weights = std::move(sum);
  cert.margin = static_cast<double>(with_a.size());
  return cert;
}

inline std::vector<ActionCertificate> detect_dominated_actions(const ExtensiveFormGame& game, int player,
                                                               DominanceMode mode, const ActionMask& alive,
                                                               double tol = kDominanceTolerance) {
  std::vector<ActionCertificate> out;
  for (int id : game.player_infosets(player)) {
    const auto& mask = alive[static_cast<std::size_t>(id)];
    for (std::size_t a = 0; a < mask.size(); ++a) {
      if (!mask[a]) continue;
      if (auto c = action_is_dominated(game, id, static_cast<int>(a), mode, alive, tol)) out.push_back(std::move(*c));
    }
  }
  return out;
}

inline std::vector<ActionCertificate> detect_dominated_actions(const ExtensiveFormGame& game, int player,
                                                               DominanceMode mode) {
  return detect_dominated_actions(game, player, mode, full_action_mask(game));
}

inline DominanceReport iterated_action_removal(const ExtensiveFormGame& game, DominanceMode mode,
                                               ActionMask* final_mask = nullptr, double tol = kDominanceTolerance) {
  DominanceReport rep;
  rep.mode = mode;
  rep.target = "actions";
  ActionMask alive = full_action_mask(game);
  for (int round = 1;; ++round) {
    std::vector<ActionCertificate> found;
    for (int p = 0; p < game.num_players(); ++p)
      for (auto& c : detect_dominated_actions(game, p, mode, alive, tol)) found.push_back(std::move(c));
    if (found.empty()) break;
    rep.rounds = round;
    for (const auto& c : found) {
      const auto& info = game.infoset(c.infoset);
      alive[static_cast<std::size_t>(c.infoset)][static_cast<std::size_t>(c.action)] = 0;
      const auto& m = alive[static_cast<std::size_t>(c.infoset)];
      require(std::count(m.begin(), m.end(), 1) > 0, ErrorCode::kInternal,
              "iterated removal emptied information set '" + info.key + "'");
      rep.removals.push_back({round, info.player, c.infoset, c.action,
                              info.key + ":" + info.actions[static_cast<std::size_t>(c.action)], c.labeled(game)});
    }
  }
  rep.survivors.resize(static_cast<std::size_t>(game.num_players()));
  for (int id = 0; id < game.num_infosets(); ++id) {
    const auto& info = game.infoset(id);
    for (std::size_t a = 0; a < info.actions.size(); ++a)
      if (alive[static_cast<std::size_t>(id)][a])
        rep.survivors[static_cast<std::size_t>(info.player)].push_back(info.key + ":" + info.actions[a]);
  }
  if (final_mask) *final_mask = std::move(alive);
  return rep;
}

// ---------------------------------------------------------------------------
// From a dominated action to a dominated strategy

struct StrategyDominanceCheck {
  bool dominated = false;
  StrategyProfile dominating;  // sigma_i'' in the player's slots, sigma_i elsewhere
  double min_gain = 0.0;       // over opponent pure profiles
  double max_gain = 0.0;
};

// Behavioral strategy inside D(I) realizing the certificate's mixture.
inline StrategyProfile certificate_strategy(const ExtensiveFormGame& game, const ActionCertificate& cert,
                                            const StrategyProfile& base) {
  StrategyProfile out = base;
  for (std::size_t j = 0; j < cert.scope.size(); ++j) {
    const int J = cert.scope[j];
    // Own path from I to J, as (scope position, action) pairs.
    std::vector<std::pair<std::size_t, int>> path;
    for (int h : game.infoset(J).nodes) {
      if (J == cert.infoset) break;
      if (game.ancestor_in_infoset(h, cert.infoset) < 0) continue;
      int child = h;
      for (int cur = game.node(h).parent; cur >= 0; cur = game.node(cur).parent) {
        const Node& n = game.node(cur);
        if (n.is_decision() && n.player == game.infoset(J).player) {
          const auto it = std::find(cert.scope.begin(), cert.scope.end(), n.infoset);
          path.emplace_back(static_cast<std::size_t>(it - cert.scope.begin()), game.node(child).parent_action);
          if (n.infoset == cert.infoset) break;
        }
        child = cur;
      }
      break;
    }
    Distribution d(static_cast<std::size_t>(game.infoset(J).num_actions()), 0.0);
    double total = 0.0;
    for (std::size_t k = 0; k < cert.weights.size(); ++k) {
      bool consistent = true;
      for (auto [pos, a] : path) consistent = consistent && cert.continuations[k][pos] == a;
      if (!consistent) continue;
      d[static_cast<std::size_t>(cert.continuations[k][j])] += cert.weights[k];
      total += cert.weights[k];
    }
    if (total > 0.0) {
      for (auto& v : d) v /= total;
      out[J] = d;
    }
  }
  return out;
}

inline double own_reach_of_infoset(const ExtensiveFormGame& game, const StrategyProfile& sigma, int infoset) {
  const int player = game.infoset(infoset).player;
  double p = 1.0;
  for (auto [id, a] : game.player_sequence(game.infoset(infoset).nodes.front(), player)) p *= sigma.prob(id, a);
  return p;
}

inline StrategyDominanceCheck check_weak_action_implies_weak_strategy(const ExtensiveFormGame& game, int infoset,
                                                                      int action, const StrategyProfile& sigma,
                                                                      double tol = kDominanceTolerance) {
  const int player = game.infoset(infoset).player;
  sigma.validate_player(game, player);
  const double alpha = sigma.prob(infoset, action);
  require(own_reach_of_infoset(game, sigma, infoset) * alpha > 0.0, ErrorCode::kInvalidInput,
          "the strategy does not play the action with positive probability");
  auto cert = action_is_dominated(game, infoset, action, DominanceMode::kWeak, full_action_mask(game), tol);
  require(cert.has_value(), ErrorCode::kInvalidInput, "the action is not weakly dominated");

  const StrategyProfile alt = certificate_strategy(game, *cert, sigma);
  StrategyProfile hat = sigma;
  {
    auto& d = hat[infoset];
    d[static_cast<std::size_t>(action)] = 0.0;
    double rest = 0.0;
    for (double v : d) rest += v;
    for (std::size_t b = 0; b < d.size(); ++b) {
      if (static_cast<int>(b) == action) continue;
      d[b] = rest > 0.0 ? d[b] / rest : 1.0 / static_cast<double>(d.size() - 1);
    }
  }

  StrategyDominanceCheck out;
  out.dominating = sigma;
  for (int J : cert->scope) {
    const double w1 = alpha * own_path_probability(game, alt, infoset, J);
    const double w2 = (1.0 - alpha) * own_path_probability(game, hat, infoset, J);
    if (w1 + w2 <= 0.0) continue;
    auto& d = out.dominating[J];
    for (std::size_t b = 0; b < d.size(); ++b) d[b] = (w1 * alt[J][b] + w2 * hat[J][b]) / (w1 + w2);
  }

  // Exhaustive comparison over opponent pure profiles.
  const int n = game.num_players();
  std::vector<std::size_t> counts(static_cast<std::size_t>(n), 1), digits(static_cast<std::size_t>(n), 0);
  for (int q = 0; q < n; ++q)
    if (q != player) counts[static_cast<std::size_t>(q)] = num_pure_strategies(game, q);
  StrategyProfile a = sigma, b = out.dominating;
  out.min_gain = std::numeric_limits<double>::infinity();
  out.max_gain = -std::numeric_limits<double>::infinity();
  for (;;) {
    for (int q = 0; q < n; ++q) {
      if (q == player) continue;
      const auto acts = pure_strategy_actions(game, q, digits[static_cast<std::size_t>(q)]);
      set_pure_strategy(game, q, acts, a);
      set_pure_strategy(game, q, acts, b);
    }
    const double gain = expected_utility(game, b)[static_cast<std::size_t>(player)] -
                        expected_utility(game, a)[static_cast<std::size_t>(player)];
    out.min_gain = std::min(out.min_gain, gain);
    out.max_gain = std::max(out.max_gain, gain);
    int q = n - 1;
    for (; q >= 0; --q) {
      auto& d = digits[static_cast<std::size_t>(q)];
      if (++d < counts[static_cast<std::size_t>(q)]) break;
      d = 0;
    }
    if (q < 0) break;
  }
  out.dominated = out.min_gain >= -tol && out.max_gain > tol;
  return out;
}

// ---------------------------------------------------------------------------
// Coarse correlated equilibria

struct CorrelatedDevice {
  std::vector<std::vector<Distribution>> profiles;  // [k][player] mixed strategy
  std::vector<double> weights;

  void add(std::vector<Distribution> profile, double weight) {
    profiles.push_back(std::move(profile));
    weights.push_back(weight);
  }

  void validate(const NormalFormGame& nf, double tol = kDistributionTolerance) const {
    require(profiles.size() == weights.size() && !profiles.empty(), ErrorCode::kInvalidInput,
            "device needs one weight per profile");
    double total = 0.0;
    for (double w : weights) {
      require(w >= 0.0, ErrorCode::kInvalidInput, "negative device weight");
      total += w;
    }
    require(std::abs(total - 1.0) <= tol, ErrorCode::kInvalidInput, "device weights do not sum to 1");
    for (const auto& p : profiles) {
      require(static_cast<int>(p.size()) == nf.num_players(), ErrorCode::kInvalidInput, "device profile has wrong size");
      for (int i = 0; i < nf.num_players(); ++i)
        require(static_cast<int>(p[static_cast<std::size_t>(i)].size()) == nf.num_actions(i),
                ErrorCode::kInvalidInput, "device strategy has wrong size");
    }
  }
};

struct CceCheck {
  bool is_cce = true;
  std::vector<double> value;      // sum_k q(k) u_i(sigma^k)
  std::vector<double> deviation;  // best pure deviation value
  std::vector<int> best_deviation;
  std::vector<double> gain;       // deviation - value
};

inline CceCheck is_coarse_correlated_equilibrium(const NormalFormGame& nf, const CorrelatedDevice& device,
                                                 double tol = kDominanceTolerance) {
  device.validate(nf);
  const auto n = static_cast<std::size_t>(nf.num_players());
  CceCheck out;
  out.value.assign(n, 0.0);
  std::vector<std::vector<double>> dev(n);
  for (std::size_t i = 0; i < n; ++i) dev[i].assign(static_cast<std::size_t>(nf.num_actions(static_cast<int>(i))), 0.0);
  for (std::size_t k = 0; k < device.profiles.size(); ++k) {
    const double q = device.weights[k];
    if (q == 0.0) continue;
    const auto eu = nf.expected_utility(device.profiles[k]);
    for (std::size_t i = 0; i < n; ++i) {
      out.value[i] += q * eu[i];
      const auto av = nf.action_values(static_cast<int>(i), device.profiles[k]);
      for (std::size_t a = 0; a < av.size(); ++a) dev[i][a] += q * av[a];
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    const auto it = std::max_element(dev[i].begin(), dev[i].end());
    out.deviation.push_back(*it);
    out.best_deviation.push_back(static_cast<int>(it - dev[i].begin()));
    out.gain.push_back(*it - out.value[i]);
    if (out.gain.back() > tol) out.is_cce = false;
  }
  return out;
}

}  // namespace cfr
