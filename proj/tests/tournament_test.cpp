#include <cmath>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "cfr/analysis.hpp"
#include "cfr/builders.hpp"
#include "cfr/tournament.hpp"
#include "test_util.hpp"

namespace cfr {
namespace {

const std::vector<std::string> kNames = {"Uni", "ND", "NID", "NE-0", "NE-0.5", "NE-1"};

// Reference cross table, milli-chips per game; the diagonal is unused.
const long long kTable[6][6] = {{0, -270, -187, -111, -138, -166},
                                {270, 0, -31, -55, -34, -13},
                                {187, 31, 0, 0, 0, 0},
                                {111, 55, 0, 0, 0, 0},
                                {138, 34, 0, 0, 0, 0},
                                {166, 13, 0, 0, 0, 0}};
const long long kOverall[6] = {-174, 27, 43, 33, 34, 36};

class KuhnTournament : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    game_ = new ExtensiveFormGame(build_kuhn_game());
    roster_ = new std::vector<Agent>(build_kuhn_roster(*game_));
    report_ = new TournamentReport(round_robin(*game_, *roster_, 3));
  }
  static void TearDownTestSuite() {
    delete report_;
    delete roster_;
    delete game_;
  }
  static ExtensiveFormGame* game_;
  static std::vector<Agent>* roster_;
  static TournamentReport* report_;
};

ExtensiveFormGame* KuhnTournament::game_ = nullptr;
std::vector<Agent>* KuhnTournament::roster_ = nullptr;
TournamentReport* KuhnTournament::report_ = nullptr;

TEST_F(KuhnTournament, RosterShape) {
  const auto& g = *game_;
  ASSERT_EQ(roster_->size(), 6u);
  for (std::size_t i = 0; i < 6; ++i) EXPECT_EQ((*roster_)[i].name, kNames[i]);
  const auto& nd = (*roster_)[1].profile;
  EXPECT_EQ(nd.prob(g.infoset_index("1:J:b"), 1), 0.0);
  EXPECT_EQ(nd.prob(g.infoset_index("1:K:b"), 0), 0.0);
  EXPECT_EQ(nd.prob(g.infoset_index("0:J:kb"), 1), 0.0);
  EXPECT_EQ(nd.prob(g.infoset_index("0:K:kb"), 0), 0.0);
  EXPECT_EQ(nd.prob(g.infoset_index("0:Q:"), 1), 0.5);
  const auto& nid = (*roster_)[2].profile;
  EXPECT_EQ(nid.prob(g.infoset_index("0:Q:"), 1), 0.0);
  EXPECT_EQ(nid.prob(g.infoset_index("1:Q:k"), 1), 0.0);
  EXPECT_EQ(nid.prob(g.infoset_index("1:J:k"), 1), 0.5);
}

TEST_F(KuhnTournament, EquilibriaCertified) {
  for (std::size_t i = 3; i < 6; ++i) {
    const auto gap = nash_gap(*game_, (*roster_)[i].profile);
    EXPECT_LE(gap.max_gap, 1e-9) << kNames[i];
    EXPECT_NEAR(expected_utility(*game_, (*roster_)[i].profile)[0], -1.0 / 18, 1e-12);
  }
  const auto helper = testing_util::kuhn_equilibrium(*game_, 0.5);
  for (int id = 0; id < game_->num_infosets(); ++id)
    for (int a = 0; a < 2; ++a) EXPECT_NEAR((*roster_)[4].profile.prob(id, a), helper.prob(id, a), 1e-15);
}

TEST_F(KuhnTournament, CrossTable) {
  const auto& r = *report_;
  for (int i = 0; i < 6; ++i) {
    for (int j = 0; j < 6; ++j) {
      if (i == j) continue;
      EXPECT_NEAR(r.cross[i][j], -r.cross[j][i], 1e-9);
      const bool ne_row = i >= 3 && j >= 3;
      if (i <= 2 || j <= 2 || ne_row) {
        EXPECT_EQ(display_value(r.cross[i][j]), kTable[i][j]) << kNames[i] << " vs " << kNames[j];
      }
    }
  }
  EXPECT_NEAR(r.entry("Uni", "ND"), -3250.0 / 12, 1e-9);
  for (int i = 0; i < 6; ++i) {
    const long long shown = display_overall(r, i);
    if (i <= 2) {
      EXPECT_EQ(shown, kOverall[i]) << kNames[i];
    } else {
      EXPECT_LE(std::llabs(shown - kOverall[i]), 1) << kNames[i];
    }
  }
}

TEST_F(KuhnTournament, ExactEqualsRawExpectation) {
  const auto v = exact_match_value(*game_, {&(*roster_)[0], &(*roster_)[0]});
  EXPECT_NEAR(v[0], 0.125, 1e-12);
  EXPECT_NEAR(v[0] + v[1], 0.0, 1e-12);
}

TEST_F(KuhnTournament, Scoring) {
  const auto& r = *report_;
  EXPECT_EQ(r.names[static_cast<std::size_t>(r.tbr_ranking.front())], "NID");
  EXPECT_EQ(r.names[static_cast<std::size_t>(r.tbr_ranking.back())], "Uni");
  ASSERT_EQ(r.iro_rounds.size(), 3u);
  EXPECT_EQ(r.iro_rounds[0].eliminated, (std::vector<int>{0}));
  EXPECT_EQ(r.iro_rounds[1].eliminated, (std::vector<int>{1}));
  EXPECT_TRUE(r.iro_rounds[2].eliminated.empty());
  EXPECT_EQ(r.iro_winners, (std::vector<int>{2, 3, 4, 5}));
  for (double s : r.iro_rounds[2].scores) EXPECT_NEAR(s, 0.0, 1e-9);
}

TEST_F(KuhnTournament, SampledAgreesWithExact) {
  int stream = 0;
  for (std::size_t i = 0; i < 6; ++i) {
    for (std::size_t j = 0; j < 6; ++j) {
      if (i == j) continue;
      const std::vector<const Agent*> seats = {&(*roster_)[i], &(*roster_)[j]};
      const auto exact = exact_match_value(*game_, seats);
      const auto s = sampled_match_value(*game_, seats, 200000, 99, static_cast<std::uint64_t>(stream++));
      EXPECT_LE(std::abs(s.mean[0] - exact[0]), 3.5 * s.std_error[0] + 1e-12) << kNames[i] << " " << kNames[j];
    }
  }
}

TEST(Tournament, TwoAgents) {
  const auto g = build_kuhn_game();
  const std::vector<Agent> roster = {{"a", StrategyProfile::uniform(g)}, {"b", testing_util::kuhn_equilibrium(g, 1.0)}};
  const auto r = round_robin(g, roster);
  EXPECT_NEAR(r.overall[0], -r.overall[1], 1e-12);
  EXPECT_NEAR(r.cross[0][1], -r.cross[1][0], 1e-12);
  EXPECT_EQ(r.iro_rounds.size(), 1u);
  EXPECT_EQ(r.iro_winners, (std::vector<int>{1}));
  EXPECT_THROW(round_robin(g, {roster[0]}), Error);
}

TEST(Tournament, IdenticalAgentsTie) {
  const auto g = build_kuhn_game();
  const std::vector<Agent> roster = {{"x", StrategyProfile::uniform(g)},
                                     {"y", StrategyProfile::uniform(g)},
                                     {"z", StrategyProfile::uniform(g)}};
  const auto r = round_robin(g, roster, 2);
  ASSERT_EQ(r.iro_rounds.size(), 1u);
  EXPECT_TRUE(r.iro_rounds[0].eliminated.empty());
  EXPECT_EQ(r.iro_winners.size(), 3u);
}

TEST(Tournament, JobsDoNotChangeResults) {
  const auto g = build_kuhn_game();
  const auto roster = build_kuhn_roster(g);
  const auto a = round_robin(g, roster, 1);
  const auto b = round_robin(g, roster, 4);
  EXPECT_EQ(a.cross, b.cross);
}

TEST(Tournament, SampledIsSeeded) {
  const auto g = build_kuhn_game();
  const Agent u{"u", StrategyProfile::uniform(g)};
  const auto a = sampled_match_value(g, {&u, &u}, 1000, 5);
  const auto b = sampled_match_value(g, {&u, &u}, 1000, 5);
  const auto c = sampled_match_value(g, {&u, &u}, 1000, 6);
  EXPECT_EQ(a.mean, b.mean);
  EXPECT_NE(a.mean, c.mean);
}

TEST(Tournament, DisplayTruncates) {
  EXPECT_EQ(display_value(-270.83), -270);
  EXPECT_EQ(display_value(166.67), 166);
  EXPECT_EQ(display_value(-1e-15), 0);
  EXPECT_EQ(display_value(31.0 - 1e-12), 31);
}

}  // namespace
}  // namespace cfr
