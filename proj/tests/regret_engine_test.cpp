#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "cfr/analysis.hpp"
#include "cfr/builders.hpp"
#include "cfr/regret_matching.hpp"
#include "cfr/solver.hpp"
#include "test_util.hpp"

namespace cfr {
namespace {

TEST(RegretMatching, Policy) {
  EXPECT_EQ(regret_matching_policy(std::vector<double>{3, 1, 0, -2}), (Distribution{0.75, 0.25, 0, 0}));
  EXPECT_EQ(regret_matching_policy(std::vector<double>{-1, -2, -1}), (Distribution{0.5, 0, 0.5}));
  EXPECT_EQ(regret_matching_policy(std::vector<double>{0, 0}), (Distribution{0.5, 0.5}));
  EXPECT_THROW(regret_matching_policy(std::vector<double>{}), Error);
}

TEST(RegretMatching, FirstStepUniform) {
  const auto nf = build_figure1_matrix();
  auto states = make_rm_states(nf);
  const auto played = normal_form_rm_step(nf, states);
  EXPECT_EQ(played[0], (Distribution{1.0 / 3, 1.0 / 3, 1.0 / 3}));
  EXPECT_EQ(played[1], (Distribution{0.5, 0.5}));
  std::vector<RegretMatchingState> wrong{RegretMatchingState(2), RegretMatchingState(2)};
  EXPECT_THROW(normal_form_rm_step(nf, wrong), Error);
}

TEST(RegretMatching, AverageRegretBound) {
  // a game with a mixed equilibrium: matching pennies with a twist
  const NormalFormGame nf("mp", {3, 3}, {{0, -1, 1, 1, 0, -1, -1, 1, 0.5}, {0, 1, -1, -1, 0, 1, 1, -1, -0.5}});
  auto states = make_rm_states(nf);
  for (int t = 1; t <= 5000; ++t) {
    normal_form_rm_step(nf, states);
    if (t % 500 == 0) {
      for (int i = 0; i < 2; ++i) {
        const double bound = nf.utility_range(i) * std::sqrt(3.0) / std::sqrt(static_cast<double>(t));
        EXPECT_LE(states[static_cast<std::size_t>(i)].max_average_regret(), bound);
      }
    }
  }
}

TEST(RegretMatching, Figure1DropsC) {
  const auto nf = build_figure1_matrix();
  auto states = make_rm_states(nf);
  int last_with_c = 0;
  for (int t = 1; t <= 10000; ++t) {
    const auto played = normal_form_rm_step(nf, states);
    if (played[0][2] > 0.0) last_with_c = t;
  }
  EXPECT_LT(last_with_c, 10000);
  EXPECT_LT(states[0].regrets[2], 0.0);
}

TEST(Cfr, FirstIterationUniform) {
  const auto g = build_kuhn_game();
  auto s = make_solver_state(g);
  DiagnosticCounters c;
  StrategyProfile seen;
  cfr_iterate(g, s, c, [&](const IterationView& v) { seen = *v.sigma; });
  EXPECT_EQ(seen, StrategyProfile::uniform(g));
  EXPECT_EQ(s.iteration, 1);
  EXPECT_EQ(average_profile(g, s), StrategyProfile::uniform(g));
}

TEST(Cfr, ConstantProfileAverage) {
  // one-player game with a dominant action: the current profile is pure from iteration 2 on
  GameBuilder b("one", 1);
  const int r = b.add_root();
  b.set_decision(r, 0, "0::");
  b.set_terminal(b.add_child(r, "x"), {1.0});
  b.set_terminal(b.add_child(r, "y"), {0.0});
  const auto g = std::move(b).build();
  auto s = make_solver_state(g);
  DiagnosticCounters c;
  for (int t = 0; t < 10; ++t) cfr_iterate(g, s, c);
  EXPECT_EQ(current_profile(g, s)[0], (Distribution{1.0, 0.0}));
  EXPECT_NEAR(average_profile(g, s)[0][0], (0.5 + 9.0) / 10.0, 1e-15);
}

TEST(Cfr, CurrentOnlyMatchesFull) {
  const auto g = build_kuhn_game();
  auto full = make_solver_state(g);
  auto cur = make_solver_state(g, SolverMode::kVanilla, ProfileMode::kCurrentOnly);
  DiagnosticCounters c1, c2;
  for (int t = 0; t < 500; ++t) {
    cfr_iterate(g, full, c1);
    cfr_iterate(g, cur, c2);
  }
  EXPECT_EQ(full.regrets, cur.regrets);
  EXPECT_EQ(cur.stored_reals() * 2, full.stored_reals());
  EXPECT_TRUE(cur.cumulative.empty());
  try {
    average_profile(g, cur);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUnsupportedMode);
  }
}

TEST(Cfr, KuhnConvergesAndDominatedRegretsGoNegative) {
  const auto g = build_kuhn_game();
  auto s = make_solver_state(g);
  DiagnosticCounters c;
  const int jcall = g.infoset_index("1:J:b");
  const int kfold = g.infoset_index("1:K:b");
  c.track_action(jcall, 1);
  c.track_action(kfold, 0);
  for (int t = 1; t <= 100000; ++t) {
    cfr_iterate(g, s, c);
    if (t >= 10000 && t % 1000 == 0) {
      EXPECT_LT(s.regrets[g.infoset(jcall).offset + 1], 0.0);
      EXPECT_LT(s.regrets[g.infoset(kfold).offset + 0], 0.0);
    }
  }
  const auto gap = nash_gap(g, average_profile(g, s));
  EXPECT_LT(gap.max_gap, 1e-3);
  for (auto y : c.y_action) EXPECT_LT(static_cast<double>(y) / 1e5, 0.05);
  EXPECT_LE(c.x_count, s.iteration);
}

TEST(Cfr, RegretBound) {
  const auto g = build_kuhn_game();
  auto s = make_solver_state(g);
  DiagnosticCounters c;
  for (int t = 1; t <= 10000; ++t) {
    cfr_iterate(g, s, c);
    if (t == 100 || t == 1000 || t == 10000) {
      const auto r = exact_regrets(g, s);
      for (int i = 0; i < 2; ++i) {
        const double bound = g.utility_range(i) * static_cast<double>(g.player_infosets(i).size()) *
                             std::sqrt(static_cast<double>(g.max_actions(i))) / std::sqrt(static_cast<double>(t));
        EXPECT_LE(r[static_cast<std::size_t>(i)] / t, bound);
      }
    }
  }
}

TEST(ExternalSampling, DeterministicWithSeed) {
  const auto g = build_kuhn_game();
  auto a = make_solver_state(g, SolverMode::kExternalSampling, ProfileMode::kFull, 42);
  auto b = make_solver_state(g, SolverMode::kExternalSampling, ProfileMode::kFull, 42);
  DiagnosticCounters ca, cb;
  for (int t = 0; t < 1000; ++t) {
    external_sampling_iterate(g, a, ca);
    external_sampling_iterate(g, b, cb);
  }
  EXPECT_TRUE(a == b);
  EXPECT_EQ(ca.xi_count, cb.xi_count);
  auto c = make_solver_state(g, SolverMode::kExternalSampling, ProfileMode::kFull, 43);
  DiagnosticCounters cc;
  for (int t = 0; t < 1000; ++t) external_sampling_iterate(g, c, cc);
  EXPECT_FALSE(a == c);
}

TEST(ExternalSampling, NeedsStreams) {
  const auto g = build_kuhn_game();
  auto s = make_solver_state(g);
  DiagnosticCounters c;
  try {
    external_sampling_iterate(g, s, c);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidState);
  }
}

TEST(ExternalSampling, MatchesVanillaWithoutRandomness) {
  // perfect-information game, no chance: player 1 reacts to player 0
  GameBuilder b("seq", 2);
  const int r = b.add_root();
  b.set_decision(r, 0, "0::");
  const double u[2][2] = {{3, -1}, {0, 2}};
  for (int i = 0; i < 2; ++i) {
    const int n = b.add_child(r, i ? "y" : "x");
    b.set_decision(n, 1, std::string("1::") + (i ? "y" : "x"));
    for (int j = 0; j < 2; ++j) b.set_terminal(b.add_child(n, j ? "r" : "l"), {u[i][j], -u[i][j]});
  }
  const auto g = std::move(b).build();
  auto v = make_solver_state(g);
  auto e = make_solver_state(g, SolverMode::kExternalSampling, ProfileMode::kFull, 1);
  // pin player 1 to a pure strategy
  for (const char* key : {"1::x", "1::y"}) {
    const auto& info = g.infoset(g.infoset_index(key));
    v.regrets[info.offset] = e.regrets[info.offset] = 1e9;
    v.regrets[info.offset + 1] = e.regrets[info.offset + 1] = -1e9;
  }
  DiagnosticCounters c1, c2;
  for (int t = 0; t < 20; ++t) {
    cfr_iterate(g, v, c1);
    external_sampling_iterate(g, e, c2);
  }
  const auto& root = g.infoset(0);
  EXPECT_DOUBLE_EQ(v.regrets_at(root)[0], e.regrets_at(root)[0]);
  EXPECT_DOUBLE_EQ(v.regrets_at(root)[1], e.regrets_at(root)[1]);
}

TEST(ExternalSampling, KuhnConverges) {
  const auto g = build_kuhn_game();
  auto s = make_solver_state(g, SolverMode::kExternalSampling, ProfileMode::kFull, 7);
  DiagnosticCounters c;
  for (int t = 0; t < 1000000; ++t) external_sampling_iterate(g, s, c);
  EXPECT_LT(nash_gap(g, average_profile(g, s)).max_gap, 5e-3);
}

TEST(Counters, MonotoneAndBounded) {
  const auto g = build_kuhn_game();
  auto s = make_solver_state(g);
  DiagnosticCounters c;
  c.track_action(g, "0:Q:", "b");
  c.track_reach(g.infoset_index("1:K:b"));
  c.keep_reach_history = true;
  c.track_strategy(1, testing_util::kuhn_equilibrium(g, 0.0));
  std::int64_t prev_x = 0, prev_xi = 0, prev_y = 0;
  for (int t = 0; t < 200; ++t) {
    cfr_iterate(g, s, c);
    EXPECT_GE(c.x_count, prev_x);
    EXPECT_GE(c.xi_count, prev_xi);
    EXPECT_GE(c.y_action[0], prev_y);
    prev_x = c.x_count;
    prev_xi = c.xi_count;
    prev_y = c.y_action[0];
  }
  EXPECT_LE(c.x_count, 200);
  EXPECT_LE(c.y_action[0], 200);
  EXPECT_LE(c.y_strategy[0], 200);
  // first iteration: uniform play reaches "K facing a bet" with mass 2/6 * 1/2
  ASSERT_EQ(c.reach_history[0].size(), 200u);
  EXPECT_NEAR(c.reach_history[0][0], 1.0 / 6.0, 1e-15);
}

}  // namespace
}  // namespace cfr
