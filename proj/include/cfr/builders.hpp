#pragma once

// Built-in games: Kuhn poker, three-player Kuhn, the small dominance
// examples, and a parameterized limit hold'em on a reduced deck.
//
// Information-set keys are "player:private-obs:public-sequence" with 0-based
// players. Betting letters: k check, b bet, f fold, c call, r raise.

#include <algorithm>
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "cfr/error.hpp"
#include "cfr/game.hpp"
#include "cfr/normal_form.hpp"

namespace cfr {

namespace detail {

inline constexpr const char* kKuhnCards = "JQK";

inline void add_kuhn_betting(GameBuilder& b, int node, int c1, int c2, const std::string& seq) {
  const std::string obs[2] = {std::string(1, kKuhnCards[c1]), std::string(1, kKuhnCards[c2])};
  const double sd = c1 > c2 ? 1.0 : -1.0;  // showdown sign for player 0
  auto terminal = [&](int n, double u0, TerminalKind kind) { b.set_terminal(n, {u0, -u0}, kind); };

  if (seq.empty() || seq == "k") {
    const int p = static_cast<int>(seq.size());
    b.set_decision(node, p, std::to_string(p) + ":" + obs[p] + ":" + seq);
    const int check = b.add_child(node, "k");
    const int bet = b.add_child(node, "b");
    if (seq.empty()) {
      add_kuhn_betting(b, check, c1, c2, "k");
    } else {
      terminal(check, sd, TerminalKind::kShowdown);
    }
    add_kuhn_betting(b, bet, c1, c2, seq + "b");
    return;
  }
  // facing a bet: "b" (player 1 to act) or "kb" (player 0 to act)
  const int p = seq == "b" ? 1 : 0;
  b.set_decision(node, p, std::to_string(p) + ":" + obs[p] + ":" + seq);
  const int fold = b.add_child(node, "f");
  const int call = b.add_child(node, "c");
  terminal(fold, p == 1 ? 1.0 : -1.0, TerminalKind::kFold);
  terminal(call, 2.0 * sd, TerminalKind::kShowdown);
}

inline std::string rank_chars(int ranks) {
  static const std::string all = "23456789TJQKA";
  require(ranks >= 1 && ranks <= static_cast<int>(all.size()), ErrorCode::kInvalidParameters,
          "ranks must be in [1, 13]");
  if (ranks <= 4) return std::string("JQKA").substr(0, static_cast<std::size_t>(ranks));
  return all.substr(all.size() - static_cast<std::size_t>(ranks));
}

}  // namespace detail

inline ExtensiveFormGame build_kuhn_game() {
  GameBuilder b("kuhn", 2);
  const int root = b.add_root();
  b.set_chance(root);
  for (int c1 = 0; c1 < 3; ++c1) {
    for (int c2 = 0; c2 < 3; ++c2) {
      if (c1 == c2) continue;
      const int deal = b.add_child(root, std::string{detail::kKuhnCards[c1], detail::kKuhnCards[c2]}, 1.0 / 6.0);
      detail::add_kuhn_betting(b, deal, c1, c2, "");
    }
  }
  return std::move(b).build();
}

// Three players, deck J Q K A, ante 1, a single bet of 1. Before a bet each
// player checks or bets; after a bet every other player in turn folds or calls.
inline ExtensiveFormGame build_kuhn3_game() {
  constexpr int kPlayers = 3;
  const std::string cards = "JQKA";
  GameBuilder b("kuhn3", kPlayers);
  const int root = b.add_root();
  b.set_chance(root);

  struct Rec {
    GameBuilder& b;
    int cards[kPlayers];
    std::string names;

    void terminal(int node, const std::string& seq, int bettor) {
      double contrib[kPlayers] = {1, 1, 1};
      bool in[kPlayers] = {true, true, true};
      bool folded = false;
      if (bettor >= 0) {
        contrib[bettor] += 1;
        // seq after the bet lists responders in order starting at bettor+1
        const auto pos = seq.find('b');
        for (std::size_t k = pos + 1; k < seq.size(); ++k) {
          const int p = (bettor + static_cast<int>(k - pos)) % kPlayers;
          if (seq[k] == 'c') contrib[p] += 1;
          else { in[p] = false; folded = true; }
        }
      }
      int winner = -1;
      for (int p = 0; p < kPlayers; ++p)
        if (in[p] && (winner < 0 || cards[p] > cards[winner])) winner = p;
      double pot = 0;
      for (double c : contrib) pot += c;
      std::vector<double> u(kPlayers);
      for (int p = 0; p < kPlayers; ++p) u[static_cast<std::size_t>(p)] = -contrib[p];
      u[static_cast<std::size_t>(winner)] += pot;
      int alive = 0;
      for (bool x : in) alive += x;
      b.set_terminal(node, std::move(u), alive == 1 && folded ? TerminalKind::kFold : TerminalKind::kShowdown);
    }

    void expand(int node, const std::string& seq, int bettor) {
      const int acted = static_cast<int>(seq.size());
      if (bettor < 0) {
        if (acted == kPlayers) return terminal(node, seq, bettor);
        const int p = acted;
        b.set_decision(node, p, std::to_string(p) + ":" + names[static_cast<std::size_t>(p)] + ":" + seq);
        expand(b.add_child(node, "k"), seq + "k", -1);
        expand(b.add_child(node, "b"), seq + "b", p);
        return;
      }
      const int responded = acted - 1 - static_cast<int>(seq.find('b'));
      if (responded == kPlayers - 1) return terminal(node, seq, bettor);
      const int p = (bettor + responded + 1) % kPlayers;
      b.set_decision(node, p, std::to_string(p) + ":" + names[static_cast<std::size_t>(p)] + ":" + seq);
      expand(b.add_child(node, "f"), seq + "f", bettor);
      expand(b.add_child(node, "c"), seq + "c", bettor);
    }
  };

  const double p = 1.0 / 24.0;
  for (int a = 0; a < 4; ++a)
    for (int c = 0; c < 4; ++c)
      for (int d = 0; d < 4; ++d) {
        if (a == c || a == d || c == d) continue;
        const std::string label{cards[static_cast<std::size_t>(a)], cards[static_cast<std::size_t>(c)],
                                cards[static_cast<std::size_t>(d)]};
        const int deal = b.add_child(root, label, p);
        Rec rec{b, {a, c, d}, label};
        rec.expand(deal, "", -1);
      }
  return std::move(b).build();
}

inline NormalFormGame build_figure1_matrix() {
  return NormalFormGame("fig1", {3, 2}, {{1, 0, 0, 2, -1, 1}, {0, 0, 0, 0, 0, 0}}, {{"A", "B", "C"}, {"a", "b"}});
}

// Player 0 privately picks a or b, player 1 picks c or d without seeing it,
// then player 0 (remembering a/b, not seeing c/d) picks e or f.
inline ExtensiveFormGame build_figure2_game() {
  // u_0 indexed [first][second][third]: a/b, c/d, e/f
  const double u[2][2][2] = {{{3, 0}, {0, 2}}, {{2, 1}, {-1, 3}}};
  const char* first[2] = {"a", "b"};
  const char* second[2] = {"c", "d"};
  const char* third[2] = {"e", "f"};
  GameBuilder b("fig2", 2);
  const int root = b.add_root();
  b.set_decision(root, 0, "0::");
  for (int i = 0; i < 2; ++i) {
    const int n1 = b.add_child(root, first[i]);
    b.set_decision(n1, 1, "1::");
    for (int j = 0; j < 2; ++j) {
      const int n2 = b.add_child(n1, second[j]);
      b.set_decision(n2, 0, std::string("0:") + first[i] + ":");
      for (int k = 0; k < 2; ++k) {
        const int z = b.add_child(n2, third[k]);
        b.set_terminal(z, {u[i][j][k], -u[i][j][k]});
      }
    }
  }
  return std::move(b).build();
}

inline NormalFormGame build_figure3_matrix() {
  return NormalFormGame("fig3", {3, 2}, {{2, 0, 0, 2, 1.5, 1.5}, {1, 0, 0, 1, 0, 0}}, {{"A", "B", "C"}, {"a", "b"}});
}

struct MiniHoldemParams {
  int ranks = 3;
  int suits = 1;
  int rounds = 1;
  int bets_per_round = 1;
};

// Two-player limit poker on a ranks x suits deck. Each player gets one
// private card; with two rounds a public card is dealt before the second.
// Ante 1; bet size 1 in round one and 2 in round two; at most bets_per_round
// bets or raises per round; player 0 acts first in every round. A pair with
// the public card beats a high card; equal hands split the pot.
// Ranks are J Q K A for decks of up to four ranks, otherwise the top ranks
// of a standard deck ending at the Ace.
inline ExtensiveFormGame build_mini_holdem(const MiniHoldemParams& params) {
  const auto& [ranks, suits, rounds, cap] = params;
  require(ranks >= 1 && suits >= 1, ErrorCode::kInvalidParameters, "ranks and suits must be positive");
  require(rounds == 1 || rounds == 2, ErrorCode::kInvalidParameters, "rounds must be 1 or 2");
  require(cap >= 1, ErrorCode::kInvalidParameters, "bets_per_round must be at least 1");
  const int deck = ranks * suits;
  require(deck >= 2 + rounds - 1, ErrorCode::kInvalidParameters, "deck too small for the deal");

  const std::string rank_names = detail::rank_chars(ranks);
  static const std::string suit_names = "shdc";
  require(suits <= static_cast<int>(suit_names.size()), ErrorCode::kInvalidParameters, "suits must be in [1, 4]");
  auto card_name = [&](int c) {
    std::string s(1, rank_names[static_cast<std::size_t>(c / suits)]);
    if (suits > 1) s += suit_names[static_cast<std::size_t>(c % suits)];
    return s;
  };
  auto rank_of = [&](int c) { return c / suits; };

  GameBuilder b("miniholdem", 2);
  b.set_unit("mbb", 2e-3);  // big blind = 2 chips
  const int root = b.add_root();
  b.set_chance(root);

  struct State {
    int cards[2];
    int board = -1;
    double contrib[2] = {1, 1};
    int round = 0;
    std::string pub;  // public action history, rounds separated by '/'
  };

  auto showdown = [&](const State& s) {
    auto strength = [&](int p) {
      const int r = rank_of(s.cards[p]);
      const bool pair = s.board >= 0 && rank_of(s.board) == r;
      return (pair ? ranks : 0) + r;
    };
    const int a = strength(0), c = strength(1);
    if (a == c) return 0;
    return a > c ? 1 : -1;
  };

  std::function<void(int, State, std::string, int, int)> betting;

  auto end_round = [&](int node, const State& s) {
    if (s.round + 1 < rounds) {
      b.set_chance(node);
      std::vector<int> left;
      for (int c = 0; c < deck; ++c)
        if (c != s.cards[0] && c != s.cards[1]) left.push_back(c);
      for (int c : left) {
        State next = s;
        next.board = c;
        next.round += 1;
        next.pub += "/" + card_name(c) + "/";
        const int child = b.add_child(node, card_name(c), 1.0 / static_cast<double>(left.size()));
        betting(child, next, "", 0, 0);
      }
      return;
    }
    const int w = showdown(s);
    double u0 = 0.0;
    if (w > 0) u0 = s.contrib[1];
    if (w < 0) u0 = -s.contrib[0];
    b.set_terminal(node, {u0, -u0}, TerminalKind::kShowdown);
  };

  // seq: actions in the current round; bets: bets made this round; to_act.
  betting = [&](int node, State s, std::string seq, int bets, int to_act) {
    const double size = s.round == 0 ? 1.0 : 2.0;
    const std::string key = std::to_string(to_act) + ":" + card_name(s.cards[to_act]) + ":" + s.pub + seq;
    b.set_decision(node, to_act, key);
    if (bets == 0) {
      const int check = b.add_child(node, "k");
      const int bet = b.add_child(node, "b");
      if (to_act == 1) {
        State done = s;
        done.pub += seq + "k";
        end_round(check, done);
      } else {
        betting(check, s, seq + "k", bets, 1 - to_act);
      }
      State sb = s;
      sb.contrib[to_act] += size;
      betting(bet, sb, seq + "b", bets + 1, 1 - to_act);
      return;
    }
    const int fold = b.add_child(node, "f");
    const int call = b.add_child(node, "c");
    {
      const double loss = s.contrib[to_act];
      std::vector<double> u(2);
      u[static_cast<std::size_t>(to_act)] = -loss;
      u[static_cast<std::size_t>(1 - to_act)] = loss;
      b.set_terminal(fold, std::move(u), TerminalKind::kFold);
    }
    State sc = s;
    sc.contrib[to_act] = s.contrib[1 - to_act];
    sc.pub += seq + "c";
    end_round(call, sc);
    if (bets < cap) {
      const int raise = b.add_child(node, "r");
      State sr = s;
      sr.contrib[to_act] = s.contrib[1 - to_act] + size;
      betting(raise, sr, seq + "r", bets + 1, 1 - to_act);
    }
  };

  const double p = 1.0 / static_cast<double>(deck * (deck - 1));
  for (int c0 = 0; c0 < deck; ++c0)
    for (int c1 = 0; c1 < deck; ++c1) {
      if (c0 == c1) continue;
      const int deal = b.add_child(root, card_name(c0) + card_name(c1), p);
      State s;
      s.cards[0] = c0;
      s.cards[1] = c1;
      betting(deal, s, "", 0, 0);
    }
  return std::move(b).build();
}

}  // namespace cfr
