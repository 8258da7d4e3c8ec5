#pragma once

// The command-line subcommands. Each writes its artifacts plus a
// manifest.json (config echo and SHA-256 of every artifact) into an output
// directory and prints a short summary.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <openssl/evp.h>

#include "cfr/analysis.hpp"
#include "cfr/dominance.hpp"
#include "cfr/game_io.hpp"
#include "cfr/run_config.hpp"
#include "cfr/solver.hpp"
#include "cfr/tournament.hpp"

namespace cfr {

inline int exit_code(ErrorCode code) {
  switch (code) {
    case ErrorCode::kIo: return 3;
    case ErrorCode::kGameTooLarge: return 4;
    case ErrorCode::kInternal: return 1;
    default: return 2;
  }
}

inline std::string sha256_hex(const std::string& data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  require(EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) == 1, ErrorCode::kInternal,
          "sha256 failed");
  std::string out;
  char buf[3];
  for (unsigned int k = 0; k < len; ++k) {
    std::snprintf(buf, sizeof buf, "%02x", md[k]);
    out += buf;
  }
  return out;
}

class ArtifactWriter {
 public:
  explicit ArtifactWriter(std::filesystem::path dir) : dir_(std::move(dir)) {}

  void write(const std::string& rel, const std::string& text) {
    write_text(dir_ / rel, text);
    files_[rel] = sha256_hex(text);
  }
  void write(const std::string& rel, const json& j) { write(rel, j.dump(2) + "\n"); }

  void finish(const std::string& command, const json& config) {
    json list = json::array();
    for (const auto& [path, hash] : files_) list.push_back({{"path", path}, {"sha256", hash}});
    write_json(dir_ / "manifest.json",
               {{"format", "cfr-manifest"}, {"command", command}, {"config", config}, {"artifacts", list}});
  }
  const std::filesystem::path& dir() const { return dir_; }
  std::vector<std::string> files() const {
    std::vector<std::string> out;
    for (const auto& [path, hash] : files_) out.push_back(path);
    return out;
  }

 private:
  std::filesystem::path dir_;
  std::map<std::string, std::string> files_;
};

inline ExtensiveFormGame make_run_game(const GameSpec& spec, const std::optional<TiltSpec>& tilt) {
  auto g = make_game(spec);
  return tilt ? apply_tilt(g, *tilt) : g;
}

// ---- solve ----

inline void setup_counters(const ExtensiveFormGame& g, const RunConfig& c, DiagnosticCounters& counters) {
  for (const auto& spec : c.track_actions) {
    const auto colon = spec.rfind(':');
    require(colon != std::string::npos && colon > 0, ErrorCode::kInvalidParameters,
            "track: expected <infoset>:<action>, got '" + spec + "'");
    try {
      counters.track_action(g, spec.substr(0, colon), spec.substr(colon + 1));
    } catch (const Error&) {
      fail(ErrorCode::kInvalidParameters, "track: no infoset action '" + spec + "'");
    }
  }
  for (const auto& key : c.track_reach) {
    try {
      counters.track_reach(g.infoset_index(key));
    } catch (const Error&) {
      fail(ErrorCode::kInvalidParameters, "track_reach: no infoset '" + key + "'");
    }
  }
  for (const auto& spec : c.track_strategies) {
    const auto colon = spec.find(':');
    require(colon != std::string::npos, ErrorCode::kInvalidParameters,
            "track_strategy: expected <player>:<profile file>, got '" + spec + "'");
    int player = -1;
    try {
      player = std::stoi(spec.substr(0, colon));
    } catch (const std::exception&) {
    }
    require(player >= 0 && player < g.num_players(), ErrorCode::kInvalidParameters,
            "track_strategy: bad player in '" + spec + "'");
    counters.track_strategy(player, profile_from_json(g, read_json(spec.substr(colon + 1))));
  }
}

struct SolveSummary {
  std::vector<std::int64_t> checkpoints;
  std::vector<NashGapReport> gaps;  // per checkpoint; empty above two players
  DiagnosticCounters counters;
  std::size_t memory_bytes = 0;
};

inline SolveSummary cmd_solve(const RunConfig& c, std::ostream& log = std::cout) {
  validate(c);
  const auto g = make_run_game(c.game, c.tilt);
  auto state = make_solver_state(g, c.mode, c.profile_mode, c.seed.value_or(0));
  SolveSummary sum;
  setup_counters(g, c, sum.counters);
  ArtifactWriter out(c.out_dir);
  const bool write_avg = c.write_average.value_or(c.profile_mode == ProfileMode::kFull);
  const bool gaps = g.num_players() <= 2;
  const bool bound = gaps && g.num_players() == 2 && c.mode == SolverMode::kVanilla && state.has_cumulative();
  std::string counters_csv = counters_csv_header(g, sum.counters);
  std::string gap_csv = gap_csv_header(g);
  const auto schedule = checkpoint_schedule(c);
  std::size_t next = 0;
  for (std::int64_t t = 1; t <= c.iterations; ++t) {
    solver_step(g, state, sum.counters);
    if (next >= schedule.size() || schedule[next] != t) continue;
    ++next;
    const std::string tag = std::to_string(t);
    out.write("checkpoints/state_" + tag + ".json", state_to_json(g, state));
    const auto current = current_profile(g, state);
    out.write("profiles/current_" + tag + ".json", profile_to_json(g, current));
    if (write_avg) out.write("profiles/average_" + tag + ".json", profile_to_json(g, average_profile(g, state)));
    counters_csv += counters_csv_row(t, sum.counters);
    out.write("counters.csv", counters_csv);
    if (gaps) {
      const auto report = nash_gap(g, state.has_cumulative() ? average_profile(g, state) : current);
      std::optional<double> max_avg;
      if (bound) {
        const auto r = exact_regrets(g, state);
        max_avg = std::max(r[0], r[1]) / static_cast<double>(t);
      }
      gap_csv += gap_csv_row(t, report, max_avg);
      out.write("gap.csv", gap_csv);
      sum.gaps.push_back(report);
      log << "T=" << t << " gap=" << fmt_num(report.max_gap) << "\n";
    } else {
      log << "T=" << t << "\n";
    }
    sum.checkpoints.push_back(t);
  }
  sum.memory_bytes = state.memory_bytes();
  auto cfg = to_json(c);
  cfg["solver_memory_bytes"] = sum.memory_bytes;
  out.finish("solve", cfg);
  return sum;
}

// ---- dominance ----

enum class DominanceTarget { kStrategies, kActions };

inline DominanceTarget parse_dominance_target(const std::string& s) {
  if (s == "strategies") return DominanceTarget::kStrategies;
  if (s == "actions") return DominanceTarget::kActions;
  fail(ErrorCode::kInvalidParameters, "target: expected strategies or actions, got '" + s + "'");
}

inline DominanceReport cmd_dominance(const GameSpec& spec, DominanceMode mode, DominanceTarget target,
                                     const std::string& out_dir, std::ostream& log = std::cout) {
  DominanceReport rep;
  if (target == DominanceTarget::kStrategies) {
    rep = iterated_strategy_removal(make_matrix(spec), mode);
  } else {
    require(!is_matrix_game(spec), ErrorCode::kInvalidParameters,
            "target: actions needs an extensive-form game, '" + spec.name + "' is a matrix game");
    rep = iterated_action_removal(make_game(spec), mode);
  }
  ArtifactWriter out(out_dir);
  out.write("dominance.json", dominance_report_to_json(rep));
  const auto table = dominance_table(rep);
  out.write("dominance.txt", table);
  out.finish("dominance", {{"game", spec.name},
                           {"mode", to_string(mode)},
                           {"target", target == DominanceTarget::kStrategies ? "strategies" : "actions"},
                           {"out", out_dir}});
  log << table;
  return rep;
}

// ---- tournament ----

// Roster file: {"agents": [{"name": ..., "profile": "<path>"} | {"name": ..., "builtin": "<kuhn agent>"} |
// {"name": ..., "uniform": true}]}. Profile paths are relative to the roster file.
inline std::vector<Agent> load_roster(const ExtensiveFormGame& g, const std::string& roster) {
  if (roster == "builtin") {
    require(g.name() == "kuhn", ErrorCode::kInvalidParameters, "roster: the builtin roster needs game kuhn");
    return build_kuhn_roster(g);
  }
  const json j = read_json(roster);
  require(j.is_object() && j.contains("agents") && j["agents"].is_array(), ErrorCode::kInvalidParameters,
          "roster: expected an object with an agents array");
  const auto base = std::filesystem::path(roster).parent_path();
  std::vector<Agent> builtins;
  std::vector<Agent> out;
  std::set<std::string> names;
  for (const auto& a : j["agents"]) {
    require(a.is_object() && a.contains("name") && a["name"].is_string(), ErrorCode::kInvalidParameters,
            "roster: every agent needs a name");
    const auto name = a["name"].get<std::string>();
    require(names.insert(name).second, ErrorCode::kInvalidParameters, "roster: duplicate agent '" + name + "'");
    if (a.contains("profile")) {
      const auto path = base / a["profile"].get<std::string>();
      try {
        out.push_back({name, profile_from_json(g, read_json(path))});
      } catch (const Error& e) {
        fail(e.code(), "agent '" + name + "': " + e.what());
      }
    } else if (a.contains("builtin")) {
      if (builtins.empty()) builtins = load_roster(g, "builtin");
      const auto key = a["builtin"].get<std::string>();
      const auto it = std::find_if(builtins.begin(), builtins.end(), [&](const Agent& b) { return b.name == key; });
      require(it != builtins.end(), ErrorCode::kInvalidParameters, "agent '" + name + "': unknown builtin '" + key + "'");
      out.push_back({name, it->profile});
    } else if (a.value("uniform", false)) {
      out.push_back({name, StrategyProfile::uniform(g)});
    } else {
      fail(ErrorCode::kInvalidParameters, "agent '" + name + "': needs profile, builtin or uniform");
    }
  }
  return out;
}

inline TournamentReport cmd_tournament(const GameSpec& spec, const std::string& roster, int jobs,
                                       const std::string& out_dir, std::ostream& log = std::cout) {
  require(jobs >= 1, ErrorCode::kInvalidParameters, "jobs: must be at least 1");
  const auto g = make_game(spec);
  const auto agents = load_roster(g, roster);
  require(agents.size() >= 2, ErrorCode::kInvalidParameters, "roster: a tournament needs at least two agents");
  const auto rep = round_robin(g, agents, jobs);
  ArtifactWriter out(out_dir);
  out.write("cross_table.csv", cross_table_csv(rep));
  out.write("tournament.json", tournament_to_json(rep));
  const auto table = tournament_table(rep);
  out.write("tournament.txt", table);
  out.finish("tournament", {{"game", spec.name}, {"roster", roster}, {"out", out_dir}});
  log << table;
  return rep;
}

// ---- bestresponse ----

inline NashGapReport cmd_bestresponse(const GameSpec& spec, const std::optional<TiltSpec>& tilt,
                                      const std::string& profile_path, const std::string& out_dir,
                                      std::ostream& log = std::cout) {
  const auto g = make_run_game(spec, tilt);
  const auto sigma = profile_path.empty() ? StrategyProfile::uniform(g) : profile_from_json(g, read_json(profile_path));
  const auto report = nash_gap(g, sigma);
  ArtifactWriter out(out_dir);
  json players = json::array();
  for (int i = 0; i < g.num_players(); ++i) {
    const auto br = best_response(g, sigma, i);
    const auto& pg = report.players[static_cast<std::size_t>(i)];
    players.push_back({{"player", i},
                       {"br_value", pg.br_value},
                       {"on_policy_value", pg.on_policy_value},
                       {"gap", pg.gap}});
    out.write("best_response_" + std::to_string(i) + ".json", profile_to_json(g, br.profile));
    log << "player " << i << ": value " << fmt_num(pg.on_policy_value) << ", best response " << fmt_num(pg.br_value)
        << ", gap " << fmt_num(pg.gap) << "\n";
  }
  out.write("gap.json", json{{"format", "cfr-gap"},
                             {"players", players},
                             {"max_gap", report.max_gap},
                             {"mean_gap", report.mean_gap},
                             {"delta", report.delta}});
  log << "max gap " << fmt_num(report.max_gap) << "\n";
  json cfg = {{"game", spec.name}, {"profile", profile_path.empty() ? "uniform" : profile_path}, {"out", out_dir}};
  if (tilt) cfg["tilt"] = to_string(tilt->kind) + ":" + fmt_num(tilt->w);
  out.finish("bestresponse", cfg);
  return report;
}

// ---- ccecheck ----

inline CorrelatedDevice figure1_device(const NormalFormGame& nf) {
  const auto pure = [](int n, int k) {
    Distribution d(static_cast<std::size_t>(n), 0.0);
    d[static_cast<std::size_t>(k)] = 1.0;
    return d;
  };
  CorrelatedDevice dev;
  dev.add({pure(nf.num_actions(0), 0), pure(nf.num_actions(1), 0)}, 0.5);
  dev.add({pure(nf.num_actions(0), 1), pure(nf.num_actions(1), 1)}, 0.25);
  dev.add({pure(nf.num_actions(0), 2), pure(nf.num_actions(1), 1)}, 0.25);
  return dev;
}

// Device file: {"entries": [{"weight": w, "actions": ["A", "a"]} | {"weight": w, "mixed": [[...], [...]]}]}.
inline CorrelatedDevice load_device(const NormalFormGame& nf, const std::string& device) {
  if (device == "builtin") {
    require(nf.name() == "fig1", ErrorCode::kInvalidParameters, "device: the builtin device needs game fig1");
    return figure1_device(nf);
  }
  const json j = read_json(device);
  CorrelatedDevice dev;
  try {
    for (const auto& e : j.at("entries")) {
      std::vector<Distribution> profile;
      if (e.contains("actions")) {
        const auto labels = e["actions"].get<std::vector<std::string>>();
        require(static_cast<int>(labels.size()) == nf.num_players(), ErrorCode::kInvalidInput,
                "device: entry needs one action per player");
        for (int i = 0; i < nf.num_players(); ++i) {
          const auto& names = nf.labels(i);
          const auto it = std::find(names.begin(), names.end(), labels[static_cast<std::size_t>(i)]);
          require(it != names.end(), ErrorCode::kInvalidInput, "device: unknown action '" + labels[static_cast<std::size_t>(i)] + "'");
          Distribution d(names.size(), 0.0);
          d[static_cast<std::size_t>(it - names.begin())] = 1.0;
          profile.push_back(d);
        }
      } else {
        profile = e.at("mixed").get<std::vector<Distribution>>();
      }
      dev.add(std::move(profile), e.at("weight").get<double>());
    }
  } catch (const json::exception& e) {
    fail(ErrorCode::kInvalidInput, std::string("device: ") + e.what());
  }
  dev.validate(nf);
  return dev;
}

inline CceCheck cmd_ccecheck(const GameSpec& spec, const std::string& device, const std::string& out_dir,
                             std::ostream& log = std::cout) {
  const auto nf = make_matrix(spec);
  const auto dev = load_device(nf, device);
  const auto res = is_coarse_correlated_equilibrium(nf, dev);
  json players = json::array();
  for (int i = 0; i < nf.num_players(); ++i) {
    const auto k = static_cast<std::size_t>(i);
    players.push_back({{"player", i},
                       {"value", res.value[k]},
                       {"deviation", res.deviation[k]},
                       {"best_deviation", nf.label(i, res.best_deviation[k])},
                       {"gain", res.gain[k]}});
    log << "player " << i << ": value " << fmt_num(res.value[k]) << ", best deviation "
        << nf.label(i, res.best_deviation[k]) << " " << fmt_num(res.deviation[k]) << "\n";
  }
  log << (res.is_cce ? "coarse correlated equilibrium\n" : "not a coarse correlated equilibrium\n");
  ArtifactWriter out(out_dir);
  out.write("cce.json", json{{"format", "cfr-cce"}, {"is_cce", res.is_cce}, {"players", players}});
  out.finish("ccecheck", {{"game", spec.name}, {"device", device}, {"out", out_dir}});
  return res;
}

// ---- export-game ----

inline void cmd_export_game(const GameSpec& spec, const std::optional<TiltSpec>& tilt, const std::string& out_path,
                            std::ostream& log = std::cout) {
  const auto g = make_run_game(spec, tilt);
  const auto text = game_to_json(g).dump(2) + "\n";
  if (out_path.empty() || out_path == "-") {
    log << text;
  } else {
    write_text(out_path, text);
  }
}

}  // namespace cfr
