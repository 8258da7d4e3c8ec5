#pragma once

// JSON for games, profiles, solver checkpoints and reports; CSV rows for
// counters, gaps and cross tables.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cfr/analysis.hpp"
#include "cfr/dominance.hpp"
#include "cfr/error.hpp"
#include "cfr/game.hpp"
#include "cfr/rng.hpp"
#include "cfr/solver.hpp"
#include "cfr/tournament.hpp"

namespace cfr {

using json = nlohmann::json;

inline constexpr int kFormatVersion = 1;

// ---------------------------------------------------------------------------
// files

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary);
  require(static_cast<bool>(out), ErrorCode::kIo, "cannot write '" + path.string() + "'");
  out << text;
  out.close();
  require(static_cast<bool>(out), ErrorCode::kIo, "failed writing '" + path.string() + "'");
}

inline std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), ErrorCode::kIo, "cannot read '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline json read_json(const std::filesystem::path& path) {
  const std::string text = read_text(path);
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    fail(ErrorCode::kInvalidInput, "'" + path.string() + "' is not valid JSON: " + e.what());
  }
}

inline void write_json(const std::filesystem::path& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

// Shortest decimal that round-trips.
inline std::string fmt_num(double v) {
  char buf[32];
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

// ---------------------------------------------------------------------------
// games

inline std::string to_string(TerminalKind k) {
  switch (k) {
    case TerminalKind::kShowdown: return "showdown";
    case TerminalKind::kFold: return "fold";
    default: return "unspecified";
  }
}

inline TerminalKind parse_terminal_kind(const std::string& s) {
  if (s == "showdown") return TerminalKind::kShowdown;
  if (s == "fold") return TerminalKind::kFold;
  if (s == "unspecified") return TerminalKind::kUnspecified;
  fail(ErrorCode::kInvalidGame, "unknown terminal kind '" + s + "'");
}

// Nodes are listed in id order; every node after the root names its parent
// and the action leading to it.
inline json game_to_json(const ExtensiveFormGame& g) {
  json nodes = json::array();
  for (int id = 0; id < g.num_nodes(); ++id) {
    const Node& n = g.node(id);
    json j;
    if (n.parent >= 0) {
      const Node& p = g.node(n.parent);
      j["parent"] = n.parent;
      j["action"] = p.actions[static_cast<std::size_t>(n.parent_action)];
      if (p.is_chance()) j["prob"] = p.chance_probs[static_cast<std::size_t>(n.parent_action)];
    }
    if (n.is_chance()) {
      j["type"] = "chance";
    } else if (n.is_decision()) {
      j["type"] = "decision";
      j["player"] = n.player;
      j["infoset"] = g.infoset(n.infoset).key;
    } else {
      j["type"] = "terminal";
      j["utilities"] = n.utilities;
      if (n.terminal_kind != TerminalKind::kUnspecified) j["kind"] = to_string(n.terminal_kind);
    }
    nodes.push_back(std::move(j));
  }
  return {{"format", "cfr-game"},
          {"version", kFormatVersion},
          {"name", g.name()},
          {"players", g.num_players()},
          {"unit", {{"label", g.unit_label()}, {"chips_per_unit", g.chips_per_unit()}}},
          {"nodes", std::move(nodes)}};
}

inline ExtensiveFormGame game_from_json(const json& j) {
  try {
    require(j.value("format", "") == "cfr-game", ErrorCode::kInvalidGame, "not a game file");
    GameBuilder b(j.at("name").get<std::string>(), j.at("players").get<int>());
    const auto& nodes = j.at("nodes");
    require(nodes.is_array() && !nodes.empty(), ErrorCode::kInvalidGame, "game has no nodes");
    b.add_root();
    for (std::size_t id = 1; id < nodes.size(); ++id) {
      const auto& n = nodes[id];
      const int parent = n.at("parent").get<int>();
      require(parent >= 0 && static_cast<std::size_t>(parent) < id, ErrorCode::kInvalidGame,
              "nodes must be listed after their parent");
      const double prob = n.contains("prob") ? n.at("prob").get<double>() : std::numeric_limits<double>::quiet_NaN();
      const int got = b.add_child(parent, n.at("action").get<std::string>(), prob);
      require(static_cast<std::size_t>(got) == id, ErrorCode::kInvalidGame, "node ids are not in creation order");
    }
    for (std::size_t id = 0; id < nodes.size(); ++id) {
      const auto& n = nodes[id];
      const std::string type = n.at("type").get<std::string>();
      const int node = static_cast<int>(id);
      if (type == "chance") {
        b.set_chance(node);
      } else if (type == "decision") {
        b.set_decision(node, n.at("player").get<int>(), n.at("infoset").get<std::string>());
      } else if (type == "terminal") {
        b.set_terminal(node, n.at("utilities").get<std::vector<double>>(),
                       parse_terminal_kind(n.value("kind", "unspecified")));
      } else {
        fail(ErrorCode::kInvalidGame, "unknown node type '" + type + "'");
      }
    }
    if (j.contains("unit"))
      b.set_unit(j.at("unit").at("label").get<std::string>(), j.at("unit").at("chips_per_unit").get<double>());
    return std::move(b).build();
  } catch (const json::exception& e) {
    fail(ErrorCode::kInvalidGame, std::string("malformed game: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// profiles

inline json profile_to_json(const ExtensiveFormGame& g, const StrategyProfile& s) {
  json infosets = json::object();
  for (int id = 0; id < g.num_infosets(); ++id) {
    const auto& info = g.infoset(id);
    infosets[info.key] = {{"actions", info.actions}, {"probs", s[id]}};
  }
  return {{"format", "cfr-profile"}, {"version", kFormatVersion}, {"game", g.name()}, {"infosets", infosets}};
}

// Infosets missing from the file stay uniform.
inline StrategyProfile profile_from_json(const ExtensiveFormGame& g, const json& j) {
  try {
    require(j.value("format", "") == "cfr-profile", ErrorCode::kInvalidInput, "not a profile file");
    StrategyProfile s = StrategyProfile::uniform(g);
    for (const auto& [key, entry] : j.at("infosets").items()) {
      const int id = g.infoset_index(key);
      require(entry.at("actions").get<std::vector<std::string>>() == g.infoset(id).actions, ErrorCode::kInvalidInput,
              "actions of '" + key + "' do not match the game");
      s[id] = entry.at("probs").get<Distribution>();
    }
    s.validate(g);
    return s;
  } catch (const json::exception& e) {
    fail(ErrorCode::kInvalidInput, std::string("malformed profile: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// checkpoints

inline json state_to_json(const ExtensiveFormGame& g, const SolverState& s) {
  check_state(g, s);
  json regrets = json::object(), cumulative = json::object();
  for (const auto& info : g.infosets()) {
    std::vector<double> r(s.regrets.begin() + static_cast<std::ptrdiff_t>(info.offset),
                          s.regrets.begin() + static_cast<std::ptrdiff_t>(info.offset + info.actions.size()));
    regrets[info.key] = r;
    if (s.has_cumulative()) {
      std::vector<double> c(s.cumulative.begin() + static_cast<std::ptrdiff_t>(info.offset),
                            s.cumulative.begin() + static_cast<std::ptrdiff_t>(info.offset + info.actions.size()));
      cumulative[info.key] = c;
    }
  }
  json streams = json::array();
  for (const auto& r : s.streams) streams.push_back(rng_state(r));
  json j = {{"format", "cfr-checkpoint"},
            {"version", kFormatVersion},
            {"game", g.name()},
            {"mode", to_string(s.mode)},
            {"profile_mode", to_string(s.profile_mode)},
            {"iteration", s.iteration},
            {"seed", s.seed},
            {"realized_utility", s.realized_utility},
            {"streams", streams},
            {"regrets", regrets}};
  if (s.has_cumulative()) j["cumulative"] = cumulative;
  return j;
}

inline SolverState state_from_json(const ExtensiveFormGame& g, const json& j) {
  try {
    require(j.value("format", "") == "cfr-checkpoint", ErrorCode::kInvalidInput, "not a checkpoint file");
    require(j.at("game").get<std::string>() == g.name(), ErrorCode::kInvalidInput, "checkpoint belongs to another game");
    SolverState s = make_solver_state(g, parse_solver_mode(j.at("mode").get<std::string>()),
                                      parse_profile_mode(j.at("profile_mode").get<std::string>()),
                                      j.at("seed").get<std::uint64_t>());
    s.iteration = j.at("iteration").get<std::int64_t>();
    s.realized_utility = j.at("realized_utility").get<std::vector<double>>();
    const auto streams = j.at("streams").get<std::vector<std::string>>();
    require(streams.size() == s.streams.size(), ErrorCode::kInvalidInput, "checkpoint has wrong stream count");
    for (std::size_t k = 0; k < streams.size(); ++k) set_rng_state(s.streams[k], streams[k]);
    auto load = [&](const json& table, std::vector<double>& flat) {
      require(table.size() == static_cast<std::size_t>(g.num_infosets()), ErrorCode::kInvalidInput,
              "checkpoint table does not cover the game");
      for (const auto& info : g.infosets()) {
        const auto v = table.at(info.key).get<std::vector<double>>();
        require(v.size() == info.actions.size(), ErrorCode::kInvalidInput, "checkpoint row has wrong width");
        std::copy(v.begin(), v.end(), flat.begin() + static_cast<std::ptrdiff_t>(info.offset));
      }
    };
    load(j.at("regrets"), s.regrets);
    if (s.has_cumulative()) load(j.at("cumulative"), s.cumulative);
    check_state(g, s);
    return s;
  } catch (const json::exception& e) {
    fail(ErrorCode::kInvalidInput, std::string("malformed checkpoint: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// reports

inline json dominance_report_to_json(const DominanceReport& r) {
  json removals = json::array();
  for (const auto& it : r.removals) {
    json cert = json::object();
    for (const auto& [label, w] : it.certificate) cert[label] = w;
    json e = {{"round", it.round}, {"player", it.player}, {"item", it.label}, {"certificate", cert}};
    removals.push_back(std::move(e));
  }
  return {{"format", "cfr-dominance"},
          {"mode", to_string(r.mode)},
          {"target", r.target},
          {"rounds", r.rounds},
          {"removals", removals},
          {"survivors", r.survivors}};
}

inline json tournament_to_json(const TournamentReport& r) {
  json iro = json::array();
  for (const auto& round : r.iro_rounds) {
    json scores = json::object();
    for (std::size_t k = 0; k < round.survivors.size(); ++k)
      scores[r.names[static_cast<std::size_t>(round.survivors[k])]] = round.scores[k];
    json out = json::array();
    for (int e : round.eliminated) out.push_back(r.names[static_cast<std::size_t>(e)]);
    iro.push_back({{"scores", scores}, {"eliminated", out}});
  }
  json tbr = json::array(), winners = json::array();
  for (int i : r.tbr_ranking) tbr.push_back({{"agent", r.names[static_cast<std::size_t>(i)]}, {"overall", r.overall[static_cast<std::size_t>(i)]}});
  for (int i : r.iro_winners) winners.push_back(r.names[static_cast<std::size_t>(i)]);
  return {{"format", "cfr-tournament"}, {"unit", r.unit},  {"agents", r.names}, {"cross", r.cross},
          {"tbr", tbr},                 {"iro", iro},      {"iro_winners", winners}};
}

// Aligned text cross table with an Overall column.
inline std::string tournament_table(const TournamentReport& r) {
  std::size_t w = 8;
  for (const auto& n : r.names) w = std::max(w, n.size() + 2);
  std::ostringstream out;
  auto cell = [&](const std::string& s) { out << std::string(w > s.size() ? w - s.size() : 1, ' ') << s; };
  cell("");
  for (const auto& n : r.names) cell(n);
  cell("Overall");
  out << "\n";
  for (std::size_t i = 0; i < r.names.size(); ++i) {
    cell(r.names[i]);
    for (std::size_t j = 0; j < r.names.size(); ++j) cell(i == j ? "-" : std::to_string(display_value(r.cross[i][j])));
    cell(std::to_string(display_overall(r, static_cast<int>(i))));
    out << "\n";
  }
  return out.str();
}

inline std::string dominance_table(const DominanceReport& r) {
  std::ostringstream out;
  out << "round  player  removed\n";
  for (const auto& it : r.removals) out << std::to_string(it.round) << "      " << it.player << "       " << it.label << "\n";
  if (r.removals.empty()) out << "(nothing removed)\n";
  return out.str();
}

// ---------------------------------------------------------------------------
// CSV

inline std::string cross_table_csv(const TournamentReport& r) {
  std::string out = "agent";
  for (const auto& n : r.names) out += "," + n;
  out += ",overall\n";
  for (std::size_t i = 0; i < r.names.size(); ++i) {
    out += r.names[i];
    for (std::size_t j = 0; j < r.names.size(); ++j) out += "," + (i == j ? std::string() : fmt_num(r.cross[i][j]));
    out += "," + fmt_num(r.overall[i]) + "\n";
  }
  return out;
}

inline std::string counters_csv_header(const ExtensiveFormGame& g, const DiagnosticCounters& c) {
  std::string h = "iteration,x,x_rate,xi,xi_rate";
  for (const auto& [id, a] : c.tracked_actions)
    h += ",y:" + g.infoset(id).key + ":" + g.infoset(id).actions[static_cast<std::size_t>(a)];
  for (std::size_t k = 0; k < c.tracked_strategies.size(); ++k) h += ",ystrat:" + std::to_string(k);
  for (int id : c.tracked_reach) h += ",reach:" + g.infoset(id).key;
  return h + "\n";
}

inline std::string counters_csv_row(std::int64_t t, const DiagnosticCounters& c) {
  const double T = static_cast<double>(std::max<std::int64_t>(t, 1));
  std::string row = std::to_string(t) + "," + std::to_string(c.x_count) + "," + fmt_num(static_cast<double>(c.x_count) / T) +
                    "," + std::to_string(c.xi_count) + "," + fmt_num(static_cast<double>(c.xi_count) / T);
  for (auto y : c.y_action) row += "," + std::to_string(y);
  for (auto y : c.y_strategy) row += "," + std::to_string(y);
  for (double m : c.reach_mass) row += "," + fmt_num(m);
  return row + "\n";
}

inline std::string gap_csv_header(const ExtensiveFormGame& g) {
  std::string h = "iteration,gap_max,gap_mean";
  for (int i = 0; i < g.num_players(); ++i) h += ",gap_p" + std::to_string(i);
  return h + ",delta,regret_bound\n";
}

// regret_bound is 2(max_i R_i^T / T + delta) when exact regrets are known.
inline std::string gap_csv_row(std::int64_t t, const NashGapReport& r, std::optional<double> max_avg_regret) {
  std::string row = std::to_string(t) + "," + fmt_num(r.max_gap) + "," + fmt_num(r.mean_gap);
  for (const auto& p : r.players) row += "," + fmt_num(p.gap);
  row += "," + fmt_num(r.delta) + ",";
  if (max_avg_regret) row += fmt_num(r.bound(*max_avg_regret));
  return row + "\n";
}

}  // namespace cfr
