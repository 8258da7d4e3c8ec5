#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "cfr/commands.hpp"

namespace {

using namespace cfr;

struct GameFlags {
  std::string game;
  int ranks = 0, suits = 0, rounds = 0, bets = 0;
  std::string tilt;

  void add(CLI::App* cmd, bool with_tilt) {
    cmd->add_option("-g,--game", game, "kuhn, kuhn3, fig1, fig2, fig3, holdem, or a game JSON file");
    cmd->add_option("--ranks", ranks, "holdem: card ranks");
    cmd->add_option("--suits", suits, "holdem: suits");
    cmd->add_option("--rounds", rounds, "holdem: betting rounds");
    cmd->add_option("--bets", bets, "holdem: bets per round");
    if (with_tilt) cmd->add_option("--tilt", tilt, "orange:<w> or green:<w>");
  }
  void apply(GameSpec& s) const {
    if (!game.empty()) s.name = game;
    if (ranks) s.holdem.ranks = ranks;
    if (suits) s.holdem.suits = suits;
    if (rounds) s.holdem.rounds = rounds;
    if (bets) s.holdem.bets_per_round = bets;
  }
  std::optional<TiltSpec> tilt_spec() const {
    if (tilt.empty()) return std::nullopt;
    return parse_tilt(tilt);
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Counterfactual regret minimization and dominance analysis"};
  app.require_subcommand(1);

  // solve
  auto* solve = app.add_subcommand("solve", "run CFR and write checkpoints, counters and gaps");
  GameFlags solve_game;
  solve_game.add(solve, true);
  std::string config_path, mode, profile_mode, out;
  std::int64_t iterations = 0;
  std::vector<std::int64_t> checkpoints;
  std::uint64_t seed = 0;
  std::vector<std::string> track, track_reach, track_strategy;
  bool average = false;
  solve->add_option("--config", config_path, "JSON config; flags override its fields");
  solve->add_option("--mode", mode, "vanilla or external-sampling");
  solve->add_option("--profile-mode", profile_mode, "full or current-only");
  auto* iter_opt = solve->add_option("-T,--iterations", iterations, "iteration budget");
  solve->add_option("--checkpoints", checkpoints, "checkpoint iterations (default: powers of ten and the last)");
  auto* seed_opt = solve->add_option("--seed", seed, "seed for sampling");
  solve->add_option("-o,--out", out, "output directory");
  solve->add_option("--track", track, "track y for an action, <infoset>:<action>");
  solve->add_option("--track-reach", track_reach, "track reach mass of an infoset");
  solve->add_option("--track-strategy", track_strategy, "track y for a strategy, <player>:<profile file>");
  auto* avg_opt = solve->add_flag("--average,!--no-average", average, "write average profiles");

  // dominance
  auto* dom = app.add_subcommand("dominance", "iterated removal of dominated strategies or actions");
  GameFlags dom_game;
  dom_game.add(dom, false);
  std::string dom_mode = "strict", dom_target = "actions", dom_out = "out";
  dom->add_option("--mode", dom_mode, "strict or weak");
  dom->add_option("--target", dom_target, "strategies or actions");
  dom->add_option("-o,--out", dom_out, "output directory");

  // tournament
  auto* tour = app.add_subcommand("tournament", "exact round robin with TBR and IRO scoring");
  GameFlags tour_game;
  tour_game.add(tour, false);
  std::string roster = "builtin", tour_out = "out";
  int jobs = 1;
  tour->add_option("--roster", roster, "roster JSON file, or builtin");
  tour->add_option("-j,--jobs", jobs, "parallel pair evaluations");
  tour->add_option("-o,--out", tour_out, "output directory");

  // bestresponse
  auto* br = app.add_subcommand("bestresponse", "best responses and Nash gap of a profile");
  GameFlags br_game;
  br_game.add(br, true);
  std::string br_profile, br_out = "out";
  br->add_option("-p,--profile", br_profile, "profile JSON (default: uniform)");
  br->add_option("-o,--out", br_out, "output directory");

  // ccecheck
  auto* cce = app.add_subcommand("ccecheck", "check a correlated device for coarse correlated equilibrium");
  GameFlags cce_game;
  cce_game.add(cce, false);
  std::string device = "builtin", cce_out = "out";
  cce->add_option("-d,--device", device, "device JSON file, or builtin");
  cce->add_option("-o,--out", cce_out, "output directory");

  // export-game
  auto* exp = app.add_subcommand("export-game", "write a built-in game as JSON");
  GameFlags exp_game;
  exp_game.add(exp, true);
  std::string exp_out;
  exp->add_option("-o,--out", exp_out, "output file (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*solve) {
      RunConfig c;
      if (!config_path.empty()) apply_json(c, read_json(config_path));
      solve_game.apply(c.game);
      if (!mode.empty()) c.mode = parse_solver_mode(mode);
      if (!profile_mode.empty()) c.profile_mode = parse_profile_mode(profile_mode);
      if (*iter_opt) c.iterations = iterations;
      if (!checkpoints.empty()) c.checkpoints = checkpoints;
      if (*seed_opt) c.seed = seed;
      if (auto t = solve_game.tilt_spec()) c.tilt = t;
      if (!out.empty()) c.out_dir = out;
      if (!track.empty()) c.track_actions = track;
      if (!track_reach.empty()) c.track_reach = track_reach;
      if (!track_strategy.empty()) c.track_strategies = track_strategy;
      if (*avg_opt) c.write_average = average;
      cmd_solve(c);
    } else if (*dom) {
      GameSpec s;
      dom_game.apply(s);
      cmd_dominance(s, parse_dominance_mode(dom_mode), parse_dominance_target(dom_target), dom_out);
    } else if (*tour) {
      GameSpec s;
      tour_game.apply(s);
      cmd_tournament(s, roster, jobs, tour_out);
    } else if (*br) {
      GameSpec s;
      br_game.apply(s);
      cmd_bestresponse(s, br_game.tilt_spec(), br_profile, br_out);
    } else if (*cce) {
      GameSpec s;
      s.name = "fig1";
      cce_game.apply(s);
      cmd_ccecheck(s, device, cce_out);
    } else if (*exp) {
      GameSpec s;
      exp_game.apply(s);
      cmd_export_game(s, exp_game.tilt_spec(), exp_out);
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
