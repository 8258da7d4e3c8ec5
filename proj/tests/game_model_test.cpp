#include <cmath>
#include <functional>
#include <random>

#include <gtest/gtest.h>

#include "cfr/builders.hpp"
#include "cfr/game.hpp"
#include "cfr/normal_form.hpp"
#include "cfr/tilt.hpp"
#include "test_util.hpp"

namespace cfr {
namespace {

int find_terminal(const ExtensiveFormGame& g, const std::string& deal, const std::string& seq) {
  int h = -1;
  for (int c : g.node(g.root()).children)
    if (g.node(g.root()).actions[static_cast<std::size_t>(g.node(c).parent_action)] == deal) h = c;
  for (char ch : seq) {
    const Node& n = g.node(h);
    int next = -1;
    for (std::size_t a = 0; a < n.actions.size(); ++a)
      if (n.actions[a] == std::string(1, ch)) next = n.children[a];
    h = next;
    if (h < 0) return -1;
  }
  return h;
}

TEST(Kuhn, Shape) {
  const auto g = build_kuhn_game();
  EXPECT_EQ(g.num_players(), 2);
  EXPECT_EQ(g.num_infosets(), 12);
  EXPECT_EQ(g.player_infosets(0).size(), 6u);
  EXPECT_EQ(g.player_infosets(1).size(), 6u);
  EXPECT_EQ(g.terminals().size(), 30u);
  EXPECT_TRUE(g.is_zero_sum());
  EXPECT_DOUBLE_EQ(g.utility_range(0), 4.0);
  EXPECT_EQ(g.max_actions(0), 2);
}

TEST(Kuhn, Payoffs) {
  const auto g = build_kuhn_game();
  const int kq = find_terminal(g, "KQ", "bc");
  ASSERT_GE(kq, 0);
  EXPECT_EQ(g.node(kq).utilities, (std::vector<double>{2.0, -2.0}));
  const int jq = find_terminal(g, "JQ", "kbf");
  ASSERT_GE(jq, 0);
  EXPECT_DOUBLE_EQ(g.node(jq).utilities[0], -1.0);
  EXPECT_EQ(g.node(jq).terminal_kind, TerminalKind::kFold);
  const int qj = find_terminal(g, "QJ", "kk");
  EXPECT_DOUBLE_EQ(g.node(qj).utilities[0], 1.0);
  EXPECT_EQ(g.node(qj).terminal_kind, TerminalKind::kShowdown);
}

TEST(Kuhn, InfosetKeysAndDescendants) {
  const auto g = build_kuhn_game();
  const int root_j = g.infoset_index("0:J:");
  const int after = g.infoset_index("0:J:kb");
  EXPECT_EQ(g.infoset(root_j).nodes.size(), 2u);
  EXPECT_EQ(g.descendant_infosets(root_j), (std::vector<int>{std::min(root_j, after), std::max(root_j, after)}));
  EXPECT_EQ(g.descendant_infosets(after), std::vector<int>{after});
  EXPECT_EQ(g.infoset(g.infoset_index("1:K:b")).actions, (std::vector<std::string>{"f", "c"}));
  EXPECT_THROW(g.infoset_index("9:X:"), Error);
}

TEST(Kuhn, ChanceAndReach) {
  const auto g = build_kuhn_game();
  const auto u = StrategyProfile::uniform(g);
  const auto reach = compute_reach(g, u);
  double total = 0.0;
  for (int z : g.terminals()) total += reach.total(z);
  EXPECT_NEAR(total, 1.0, 1e-12);
}

TEST(Kuhn3, Shape) {
  const auto g = build_kuhn3_game();
  EXPECT_EQ(g.num_players(), 3);
  EXPECT_TRUE(g.is_zero_sum());
  EXPECT_EQ(g.node(g.root()).children.size(), 24u);
  // all check: highest card takes the 3-chip pot
  const int z = find_terminal(g, "JQA", "kkk");
  ASSERT_GE(z, 0);
  EXPECT_EQ(g.node(z).utilities, (std::vector<double>{-1.0, -1.0, 2.0}));
  const int z2 = find_terminal(g, "AJQ", "kbcf");
  ASSERT_GE(z2, 0);
  // player 1 bets, player 2 calls with Q, player 0 folds the Ace
  EXPECT_EQ(g.node(z2).utilities, (std::vector<double>{-1.0, -2.0, 3.0}));
  const int z3 = find_terminal(g, "JQK", "bff");
  EXPECT_EQ(g.node(z3).utilities, (std::vector<double>{2.0, -1.0, -1.0}));
  EXPECT_EQ(g.node(z3).terminal_kind, TerminalKind::kFold);
}

TEST(Figure2, Payoffs) {
  const auto g = build_figure2_game();
  EXPECT_EQ(g.num_infosets(), 4);
  EXPECT_TRUE(g.is_zero_sum());
  const auto nf = to_normal_form(g);
  EXPECT_EQ(nf.num_actions(0), 8);
  EXPECT_EQ(nf.num_actions(1), 2);
  // rows are (root, after a, after b); compare "b then e" with "a then e"
  for (int after_a = 0; after_a < 2; ++after_a)
    for (int after_b = 0; after_b < 2; ++after_b)
      for (int col = 0; col < 2; ++col) {
        const int be = static_cast<int>(pure_strategy_index(g, 0, {1, after_a, 0}));
        const int ae = static_cast<int>(pure_strategy_index(g, 0, {0, 0, after_b}));
        EXPECT_DOUBLE_EQ(nf.utility(0, {be, col}), nf.utility(0, {ae, col}) - 1.0);
      }
}

TEST(Matrices, Figure1And3) {
  const auto f1 = build_figure1_matrix();
  EXPECT_EQ(f1.action_counts(), (std::vector<int>{3, 2}));
  EXPECT_DOUBLE_EQ(f1.utility(0, {2, 0}), -1.0);
  for (std::size_t k = 0; k < f1.num_profiles(); ++k) EXPECT_EQ(f1.utility(1, k), 0.0);
  const auto f3 = build_figure3_matrix();
  const auto v = f3.expected_utility({{0.5, 0.5, 0.0}, {0.3, 0.7}});
  EXPECT_DOUBLE_EQ(v[0], 1.0);
  EXPECT_DOUBLE_EQ(f3.utility(0, {2, 1}), 1.5);
}

// Structural comparison of two trees, child by child.
bool same_tree(const ExtensiveFormGame& a, int ha, const ExtensiveFormGame& b, int hb) {
  const Node& x = a.node(ha);
  const Node& y = b.node(hb);
  if (x.type != y.type || x.actions != y.actions) return false;
  if (x.is_terminal()) return x.utilities == y.utilities;
  if (x.is_chance() && x.chance_probs != y.chance_probs) return false;
  if (x.is_decision() && (x.player != y.player || a.infoset(x.infoset).key != b.infoset(y.infoset).key)) return false;
  for (std::size_t k = 0; k < x.children.size(); ++k)
    if (!same_tree(a, x.children[k], b, y.children[k])) return false;
  return true;
}

TEST(MiniHoldem, ReducesToKuhn) {
  const auto kuhn = build_kuhn_game();
  const auto mini = build_mini_holdem({3, 1, 1, 1});
  EXPECT_TRUE(same_tree(kuhn, kuhn.root(), mini, mini.root()));
  EXPECT_EQ(mini.num_infosets(), kuhn.num_infosets());
}

TEST(MiniHoldem, LeducSized) {
  const auto g = build_mini_holdem({6, 2, 2, 1});
  EXPECT_GT(g.player_infosets(0).size(), 100u);
  EXPECT_GT(g.player_infosets(1).size(), 100u);
  EXPECT_TRUE(g.is_zero_sum());
  EXPECT_EQ(g.unit_label(), "mbb");
}

TEST(MiniHoldem, Boundaries) {
  const auto g = build_mini_holdem({2, 1, 1, 1});
  EXPECT_EQ(g.node(g.root()).children.size(), 2u);
  EXPECT_NO_THROW(build_mini_holdem({3, 1, 2, 2}));
  try {
    build_mini_holdem({1, 1, 1, 1});
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidParameters);
  }
  EXPECT_THROW(build_mini_holdem({2, 1, 2, 1}), Error);
}

TEST(MiniHoldem, RaisesAndPairs) {
  const auto g = build_mini_holdem({3, 2, 2, 2});
  EXPECT_TRUE(g.is_zero_sum());
  const int i = g.infoset_index("1:Js:b");
  EXPECT_EQ(g.infoset(i).actions, (std::vector<std::string>{"f", "c", "r"}));
  EXPECT_EQ(g.infoset(g.infoset_index("0:Js:br")).actions, (std::vector<std::string>{"f", "c"}));
  // Jack pairs the board: 0 holds Js, 1 holds Kh, board Jh, check everything
  const int z = find_terminal(g, "JsKh", "kk");
  ASSERT_GE(z, 0);
  int board = -1;
  const Node& chance = g.node(z);
  ASSERT_TRUE(chance.is_chance());
  for (std::size_t k = 0; k < chance.actions.size(); ++k)
    if (chance.actions[k] == "Jh") board = chance.children[k];
  ASSERT_GE(board, 0);
  int h = board;
  for (int step = 0; step < 2; ++step) h = g.node(h).children[0];
  ASSERT_TRUE(g.node(h).is_terminal());
  EXPECT_EQ(g.node(h).utilities, (std::vector<double>{1.0, -1.0}));
}

TEST(Validation, RejectsBadGames) {
  {
    GameBuilder b("bad-chance", 1);
    const int r = b.add_root();
    b.set_chance(r);
    b.set_terminal(b.add_child(r, "x", 0.5), {0.0});
    b.set_terminal(b.add_child(r, "y", 0.4), {0.0});
    EXPECT_THROW(std::move(b).build(), Error);
  }
  {
    GameBuilder b("bad-actions", 1);
    const int r = b.add_root();
    b.set_chance(r);
    const int x = b.add_child(r, "x", 0.5);
    const int y = b.add_child(r, "y", 0.5);
    b.set_decision(x, 0, "0::");
    b.set_decision(y, 0, "0::");
    b.set_terminal(b.add_child(x, "l"), {0.0});
    b.set_terminal(b.add_child(y, "r"), {0.0});
    EXPECT_THROW(std::move(b).build(), Error);
  }
  {
    // player forgets the first move
    GameBuilder b("forgetful", 1);
    const int r = b.add_root();
    b.set_decision(r, 0, "0::");
    const int l = b.add_child(r, "l");
    const int rr = b.add_child(r, "r");
    b.set_decision(l, 0, "0::?");
    b.set_decision(rr, 0, "0::?");
    for (int n : {l, rr}) {
      b.set_terminal(b.add_child(n, "a"), {0.0});
      b.set_terminal(b.add_child(n, "b"), {1.0});
    }
    try {
      std::move(b).build();
      FAIL() << "expected perfect-recall rejection";
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kInvalidGame);
    }
  }
}

TEST(Tilt, Orange) {
  const auto g = build_kuhn_game();
  const auto same = apply_tilt(g, {TiltKind::kOrange, 0.0});
  for (int z : g.terminals()) EXPECT_EQ(same.node(z).utilities, g.node(z).utilities);
  const auto t = apply_tilt(g, {TiltKind::kOrange, 35.0});
  const int z = find_terminal(t, "KQ", "bc");
  EXPECT_NEAR(t.node(z).utilities[0], 2.7, 1e-12);
  EXPECT_DOUBLE_EQ(t.node(z).utilities[1], -2.0);
  EXPECT_FALSE(t.is_zero_sum());
}

TEST(Tilt, Green) {
  const auto g = build_kuhn_game();
  const auto t = apply_tilt(g, {TiltKind::kGreen, 14.0});
  const int fold = find_terminal(t, "JQ", "bf");
  EXPECT_NEAR(t.node(fold).utilities[0], 0.86, 1e-12);
  EXPECT_DOUBLE_EQ(t.node(fold).utilities[1], -1.0);
  const int sd = find_terminal(t, "KQ", "bc");
  EXPECT_DOUBLE_EQ(t.node(sd).utilities[0], 2.0);
  EXPECT_NEAR(t.node(sd).utilities[1], -1.72, 1e-12);
}

TEST(Tilt, DeltaBoundAndShape) {
  const auto g = build_kuhn_game();
  for (auto kind : {TiltKind::kOrange, TiltKind::kGreen}) {
    for (double w : {0.0, 7.0, 14.0, 35.0}) {
      const auto t = apply_tilt(g, {kind, w});
      ASSERT_EQ(t.num_nodes(), g.num_nodes());
      for (int z : g.terminals()) {
        const auto& u = t.node(z).utilities;
        EXPECT_LE(std::abs(u[0] + u[1]), g.utility_range(0) * w / 100.0 + 1e-12);
        EXPECT_TRUE(t.node(z).is_terminal());
      }
      EXPECT_LE(max_utility_sum(t), g.utility_range(0) * w / 100.0 + 1e-12);
    }
  }
  EXPECT_THROW(apply_tilt(build_kuhn3_game(), {TiltKind::kOrange, 1.0}), Error);
  EXPECT_THROW(apply_tilt(apply_tilt(g, {TiltKind::kOrange, 5.0}), {TiltKind::kOrange, 1.0}), Error);
  EXPECT_THROW(apply_tilt(g, {TiltKind::kOrange, -1.0}), Error);
}

TEST(NormalForm, KuhnSize) {
  const auto nf = to_normal_form(build_kuhn_game());
  EXPECT_EQ(nf.num_actions(0), 64);
  EXPECT_EQ(nf.num_actions(1), 64);
  EXPECT_THROW(to_normal_form(build_kuhn_game(), 1000), Error);
}

TEST(NormalForm, SingleDecision) {
  GameBuilder b("one", 2);
  const int r = b.add_root();
  b.set_decision(r, 0, "0::");
  b.set_terminal(b.add_child(r, "x"), {1.0, 4.0});
  b.set_terminal(b.add_child(r, "y"), {-2.0, 0.5});
  const auto g = std::move(b).build();
  const auto nf = to_normal_form(g);
  EXPECT_EQ(nf.action_counts(), (std::vector<int>{2, 1}));
  EXPECT_EQ(nf.payoff_tensor(0), (std::vector<double>{1.0, -2.0}));
  EXPECT_EQ(nf.payoff_tensor(1), (std::vector<double>{4.0, 0.5}));
  EXPECT_EQ(nf.label(0, 1), "y");
}

TEST(NormalForm, MixedImage) {
  const auto g = build_kuhn_game();
  auto pure = StrategyProfile::uniform(g);
  set_pure_strategy(g, 0, {1, 0, 1, 1, 0, 0}, pure);
  const auto mixed = realize_mixed_from_behavioral(g, 0, pure);
  EXPECT_DOUBLE_EQ(mixed[pure_strategy_index(g, 0, {1, 0, 1, 1, 0, 0})], 1.0);
  const auto uni = realize_mixed_from_behavioral(g, 1, StrategyProfile::uniform(g));
  for (double p : uni) EXPECT_DOUBLE_EQ(p, 1.0 / 64.0);
}

TEST(NormalForm, AgreesWithTree) {
  const auto g = build_kuhn_game();
  const auto nf = to_normal_form(g);
  std::mt19937_64 rng(11);
  for (int rep = 0; rep < 100; ++rep) {
    const auto sigma = testing_util::random_profile(g, rng);
    // independent tree evaluator: sum over terminals of reach times utility
    const auto reach = compute_reach(g, sigma);
    double direct = 0.0;
    for (int z : g.terminals()) direct += reach.total(z) * g.node(z).utilities[0];
    const auto v = nf.expected_utility(
        {realize_mixed_from_behavioral(g, 0, sigma), realize_mixed_from_behavioral(g, 1, sigma)});
    EXPECT_NEAR(v[0], direct, 1e-9);
    double total = 0.0;
    for (double p : realize_mixed_from_behavioral(g, 0, sigma)) total += p;
    EXPECT_NEAR(total, 1.0, 1e-9);
  }
}

TEST(Profiles, Validation) {
  const auto g = build_kuhn_game();
  auto p = StrategyProfile::uniform(g);
  EXPECT_NO_THROW(p.validate(g));
  p[0][0] = 0.7;
  EXPECT_THROW(p.validate(g), Error);
  p[0] = {-0.1, 1.1};
  EXPECT_THROW(p.validate(g), Error);
}

}  // namespace
}  // namespace cfr
