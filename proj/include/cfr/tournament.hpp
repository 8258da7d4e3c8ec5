#pragma once

// Round-robin evaluation of fixed agents with Total Bankroll and Instant
// Runoff scoring, plus the Kuhn mock-tournament roster.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "cfr/analysis.hpp"
#include "cfr/builders.hpp"
#include "cfr/dominance.hpp"
#include "cfr/error.hpp"
#include "cfr/game.hpp"
#include "cfr/rng.hpp"

namespace cfr {

struct Agent {
  std::string name;
  StrategyProfile profile;  // used at every seat's information sets
};

// Joint profile taking seat p's information sets from seats[p].
inline StrategyProfile seat_profile(const ExtensiveFormGame& game, const std::vector<const Agent*>& seats) {
  require(static_cast<int>(seats.size()) == game.num_players(), ErrorCode::kInvalidInput,
          "need one agent per seat");
  StrategyProfile out = StrategyProfile::uniform(game);
  for (int p = 0; p < game.num_players(); ++p) {
    seats[static_cast<std::size_t>(p)]->profile.validate_player(game, p);
    out = out.with_player(game, p, seats[static_cast<std::size_t>(p)]->profile);
  }
  return out;
}

// Expected chips per seat.
inline std::vector<double> exact_match_value(const ExtensiveFormGame& game, const std::vector<const Agent*>& seats) {
  return expected_utility(game, seat_profile(game, seats));
}

struct SampledValue {
  std::vector<double> mean;
  std::vector<double> std_error;
  std::uint64_t games = 0;
};

inline SampledValue sampled_match_value(const ExtensiveFormGame& game, const std::vector<const Agent*>& seats,
                                        std::uint64_t games, std::uint64_t seed, std::uint64_t stream = 0) {
  require(games >= 2, ErrorCode::kInvalidParameters, "need at least two sampled games");
  const StrategyProfile sigma = seat_profile(game, seats);
  const auto n = static_cast<std::size_t>(game.num_players());
  Rng rng = make_stream(seed, "match", stream);
  std::vector<double> sum(n, 0.0), sq(n, 0.0);
  for (std::uint64_t k = 0; k < games; ++k) {
    int h = game.root();
    while (!game.node(h).is_terminal()) {
      const Node& node = game.node(h);
      const Distribution& d = node.is_chance() ? node.chance_probs : sigma[node.infoset];
      h = node.children[static_cast<std::size_t>(sample_index(d, rng))];
    }
    for (std::size_t p = 0; p < n; ++p) {
      const double u = game.node(h).utilities[p];
      sum[p] += u;
      sq[p] += u * u;
    }
  }
  SampledValue out;
  out.games = games;
  const double g = static_cast<double>(games);
  for (std::size_t p = 0; p < n; ++p) {
    const double mean = sum[p] / g;
    const double var = std::max(0.0, (sq[p] - g * mean * mean) / (g - 1.0));
    out.mean.push_back(mean);
    out.std_error.push_back(std::sqrt(var / g));
  }
  return out;
}

struct IroRound {
  std::vector<int> survivors;
  std::vector<double> scores;  // aligned with survivors
  std::vector<int> eliminated;
};

struct TournamentReport {
  std::vector<std::string> names;
  std::string unit = "milli-chips";
  // cross[i][j]: expected units/game of agent i against agent j, averaged
  // over seat orderings. Diagonal is 0 and not part of any score.
  std::vector<std::vector<double>> cross;
  std::vector<double> overall;
  std::vector<int> tbr_ranking;
  std::vector<IroRound> iro_rounds;
  std::vector<int> iro_winners;

  int index_of(const std::string& name) const {
    const auto it = std::find(names.begin(), names.end(), name);
    require(it != names.end(), ErrorCode::kInvalidInput, "unknown agent '" + name + "'");
    return static_cast<int>(it - names.begin());
  }
  double entry(const std::string& a, const std::string& b) const {
    return cross[static_cast<std::size_t>(index_of(a))][static_cast<std::size_t>(index_of(b))];
  }
};

// Table values are truncated toward zero for display.
inline long long display_value(double v) { return static_cast<long long>(std::trunc(v + (v > 0 ? 1e-9 : -1e-9))); }

// Displayed overall: truncated mean of the displayed cells.
inline long long display_overall(const TournamentReport& r, int i) {
  double s = 0.0;
  const std::size_t n = r.names.size();
  for (std::size_t j = 0; j < n; ++j)
    if (j != static_cast<std::size_t>(i)) s += static_cast<double>(display_value(r.cross[static_cast<std::size_t>(i)][j]));
  return display_value(s / static_cast<double>(n - 1));
}

inline std::vector<double> mean_scores(const TournamentReport& r, const std::vector<int>& among) {
  std::vector<double> out;
  for (int i : among) {
    double s = 0.0;
    for (int j : among)
      if (j != i) s += r.cross[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    out.push_back(among.size() > 1 ? s / static_cast<double>(among.size() - 1) : 0.0);
  }
  return out;
}

// Total bankroll: agents by descending overall mean; ties keep roster order.
inline std::vector<int> score_tbr(const TournamentReport& r) {
  std::vector<int> order(r.names.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return r.overall[static_cast<std::size_t>(a)] > r.overall[static_cast<std::size_t>(b)];
  });
  return order;
}

// Instant runoff: drop every agent tied at the minimum, re-average, repeat
// until the survivors are all tied.
inline std::vector<IroRound> score_iro(const TournamentReport& r, std::vector<int>* winners = nullptr,
                                       double tie_tol = 1e-9) {
  std::vector<int> alive(r.names.size());
  for (std::size_t i = 0; i < alive.size(); ++i) alive[i] = static_cast<int>(i);
  std::vector<IroRound> rounds;
  while (alive.size() > 1) {
    IroRound round;
    round.survivors = alive;
    round.scores = mean_scores(r, alive);
    const double lo = *std::min_element(round.scores.begin(), round.scores.end());
    const double hi = *std::max_element(round.scores.begin(), round.scores.end());
    if (hi - lo <= tie_tol) {
      rounds.push_back(std::move(round));
      break;
    }
    std::vector<int> next;
    for (std::size_t k = 0; k < alive.size(); ++k)
      (round.scores[k] - lo <= tie_tol ? round.eliminated : next).push_back(alive[k]);
    rounds.push_back(std::move(round));
    alive = std::move(next);
  }
  if (winners) *winners = alive;
  return rounds;
}

// Exact round robin over both seat orderings (two-player games).
inline TournamentReport round_robin(const ExtensiveFormGame& game, const std::vector<Agent>& roster, int jobs = 1) {
  require(roster.size() >= 2, ErrorCode::kInvalidParameters, "a tournament needs at least two agents");
  require(game.num_players() == 2, ErrorCode::kInvalidParameters, "round robin supports two-player games");
  const std::size_t n = roster.size();
  TournamentReport rep;
  rep.unit = game.unit_label();
  for (const auto& a : roster) rep.names.push_back(a.name);
  rep.cross.assign(n, std::vector<double>(n, 0.0));

  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
  std::vector<std::pair<double, double>> value(pairs.size());
  auto work = [&](std::size_t start, std::size_t step) {
    for (std::size_t k = start; k < pairs.size(); k += step) {
      const auto [i, j] = pairs[k];
      const auto a = exact_match_value(game, {&roster[i], &roster[j]});
      const auto b = exact_match_value(game, {&roster[j], &roster[i]});
      value[k] = {0.5 * (a[0] + b[1]) / game.chips_per_unit(), 0.5 * (a[1] + b[0]) / game.chips_per_unit()};
    }
  };
  const auto workers = static_cast<std::size_t>(std::clamp(jobs, 1, 64));
  if (workers == 1) {
    work(0, 1);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work, w, workers);
    for (auto& t : pool) t.join();
  }
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    const auto [i, j] = pairs[k];
    rep.cross[i][j] = value[k].first;
    rep.cross[j][i] = value[k].second;
  }
  std::vector<int> all(n);
  for (std::size_t i = 0; i < n; ++i) all[i] = static_cast<int>(i);
  rep.overall = mean_scores(rep, all);
  rep.tbr_ranking = score_tbr(rep);
  rep.iro_rounds = score_iro(rep, &rep.iro_winners);
  return rep;
}

// Uniform at every information set, with the masked-out actions removed and
// the rest renormalized uniformly.
inline StrategyProfile uniform_over_mask(const ExtensiveFormGame& game, const ActionMask& alive) {
  StrategyProfile out = StrategyProfile::uniform(game);
  for (int id = 0; id < game.num_infosets(); ++id) {
    const auto& m = alive[static_cast<std::size_t>(id)];
    const auto k = std::count(m.begin(), m.end(), 1);
    auto& d = out[id];
    for (std::size_t a = 0; a < d.size(); ++a) d[a] = m[a] ? 1.0 / static_cast<double>(k) : 0.0;
  }
  return out;
}

// Kuhn equilibrium with seat 0 betting the King with probability gamma.
inline StrategyProfile kuhn_equilibrium_profile(const ExtensiveFormGame& g, double gamma) {
  require(gamma >= 0.0 && gamma <= 1.0, ErrorCode::kInvalidParameters, "gamma must lie in [0, 1]");
  auto s = StrategyProfile::uniform(g);
  const auto set = [&](const std::string& key, double first) { s[g.infoset_index(key)] = {first, 1.0 - first}; };
  const double q = gamma / 3.0 + 1.0 / 3.0;
  set("0:J:", 1.0 - gamma / 3.0);
  set("0:Q:", 1.0);
  set("0:K:", 1.0 - gamma);
  set("0:J:kb", 1.0);
  set("0:Q:kb", 1.0 - q);
  set("0:K:kb", 0.0);
  set("1:J:k", 2.0 / 3.0);
  set("1:Q:k", 1.0);
  set("1:K:k", 0.0);
  set("1:J:b", 1.0);
  set("1:Q:b", 2.0 / 3.0);
  set("1:K:b", 0.0);
  return s;
}

// Uni, ND (round-one weakly dominated actions removed), NID (all iteratively
// weakly dominated actions removed), NE-0, NE-0.5, NE-1.
inline std::vector<Agent> build_kuhn_roster(const ExtensiveFormGame& kuhn) {
  ActionMask nid_mask;
  const auto rep = iterated_action_removal(kuhn, DominanceMode::kWeak, &nid_mask);
  ActionMask nd_mask = full_action_mask(kuhn);
  for (const auto& it : rep.round(1))
    nd_mask[static_cast<std::size_t>(it.infoset)][static_cast<std::size_t>(it.action)] = 0;
  return {{"Uni", StrategyProfile::uniform(kuhn)},
          {"ND", uniform_over_mask(kuhn, nd_mask)},
          {"NID", uniform_over_mask(kuhn, nid_mask)},
          {"NE-0", kuhn_equilibrium_profile(kuhn, 0.0)},
          {"NE-0.5", kuhn_equilibrium_profile(kuhn, 0.5)},
          {"NE-1", kuhn_equilibrium_profile(kuhn, 1.0)}};
}

}  // namespace cfr
