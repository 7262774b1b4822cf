// Copyright 2026 The corecut Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CORECUT_CLI_HPP
#define CORECUT_CLI_HPP

// Command-line front end: generate instances, optimize welfare over the
// core, test membership, consult the brute-force oracle, and render report
// charts.  Every producing run writes a manifest with the exact argument
// vector; `rerun` replays it, and identical inputs reproduce the CSV
// outputs byte for byte.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "corecut/charts.hpp"
#include "corecut/errors.hpp"
#include "corecut/game.hpp"
#include "corecut/instances.hpp"
#include "corecut/io.hpp"
#include "corecut/membership.hpp"
#include "corecut/optimizer.hpp"
#include "corecut/oracle.hpp"

namespace corecut::cli {

inline constexpr const char* kVersion = "0.1.0";

namespace detail {

inline Vec parse_utilities(const std::string& text) {
  Vec out;
  std::string token;
  std::istringstream in(text);
  while (std::getline(in, token, ',')) {
    if (token.empty()) throw Error("empty utility entry");
    if (token.find('/') != std::string::npos) {
      out.push_back(Rational::parse(token).to_double());
    } else {
      try {
        std::size_t pos = 0;
        const double v = std::stod(token, &pos);
        if (pos != token.size()) throw Error("bad utility entry '" + token + "'");
        out.push_back(v);
      } catch (const std::exception&) {
        throw Error("bad utility entry '" + token + "'");
      }
    }
  }
  if (out.empty()) throw Error("no utilities given");
  return out;
}

inline int thread_env() {
  const char* raw = std::getenv("CORECUT_THREADS");
  if (!raw) return 1;
  const int n = std::atoi(raw);
  if (n < 1) throw Error("CORECUT_THREADS must be a positive integer");
  return n;
}

inline void write_manifest(const std::string& path, const std::vector<std::string>& argv,
                           const std::vector<std::string>& outputs, double wall_seconds) {
  nlohmann::json root;
  root["tool"] = "corecut";
  root["version"] = kVersion;
  root["argv"] = argv;
  root["outputs"] = outputs;
  root["threads"] = thread_env();
  root["wall_seconds"] = wall_seconds;
  io::write_file(path, root.dump(2) + "\n");
}

inline membership::ObjectionMode parse_mode(const std::string& mode, double floor) {
  if (mode == "additive") return {membership::ObjectionKind::Additive, floor};
  if (mode == "multiplicative") return {membership::ObjectionKind::Multiplicative, floor};
  throw CLI::ValidationError("--mode", "expected 'additive' or 'multiplicative'");
}

struct TrajectoryTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  Vec column(const std::string& name) const {
    for (std::size_t c = 0; c < header.size(); ++c) {
      if (header[c] != name) continue;
      Vec out;
      for (const auto& row : rows) out.push_back(row.at(c));
      return out;
    }
    throw Error("trajectory column '" + name + "' not found");
  }
};

inline TrajectoryTable read_trajectory(const std::string& path) {
  TrajectoryTable table;
  std::istringstream in(io::read_file(path));
  std::string line;
  if (!std::getline(in, line)) throw ParseError("trajectory", "empty file");
  table.header = io::detail::split(line, ',');
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    for (const auto& cell : io::detail::split(line, ',')) row.push_back(std::atof(cell.c_str()));
    table.rows.push_back(std::move(row));
  }
  return table;
}

inline void render_reports(const std::string& out_dir, const TrajectoryTable& table,
                           const std::string& final_json_path, std::vector<std::string>& outputs) {
  const auto welfare_svg = charts::line_chart_svg(
      "social welfare by iteration", {charts::Series{"utilitarian", table.column("utilitarian_welfare")},
                                      charts::Series{"maximin", table.column("maximin_welfare")}});
  io::write_file(out_dir + "/welfare.svg", welfare_svg);
  outputs.push_back(out_dir + "/welfare.svg");
  const auto epsilon_svg =
      charts::line_chart_svg("least objection by iteration", {charts::Series{"epsilon", table.column("epsilon")}});
  io::write_file(out_dir + "/epsilon.svg", epsilon_svg);
  outputs.push_back(out_dir + "/epsilon.svg");
  if (!final_json_path.empty()) {
    const auto root = nlohmann::json::parse(io::read_file(final_json_path));
    Vec initial = root.value("initial_utilities", Vec{});
    Vec final_values = root.value("utilities", Vec{});
    if (!initial.empty() || !final_values.empty()) {
      io::write_file(out_dir + "/quantiles.svg",
                     charts::quantile_chart_svg("utility distribution", initial, final_values));
      outputs.push_back(out_dir + "/quantiles.svg");
    }
  }
}

}  // namespace detail

/// Entry point shared by the binary and the tests.  Returns the process
/// exit code: 0 success, 2 usage error, 3 numerical breakdown, 1 otherwise.
inline int run(const std::vector<std::string>& argv, std::ostream& out = std::cout,
               std::ostream& err = std::cerr) {
  CLI::App app{"non-transferable-utility linear production games: core membership and welfare optimization"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  // gen ------------------------------------------------------------------
  auto* gen_cmd = app.add_subcommand("gen", "generate a game instance");
  std::string family, gen_out, scenario_dir;
  std::uint64_t seed = 1;
  int players = 3, goods = 4, dm_n = 2, dm_extra = 2, dm_triples = 3;
  int width = 20, height = 20, line_count = 12, rider_count = 60;
  gen_cmd->add_option("--family", family, "empty-core | cyclic | 3dm-yes | 3dm-no | transit-grid | dilemma")
      ->required();
  gen_cmd->add_option("--out", gen_out, "output game JSON path")->required();
  gen_cmd->add_option("--seed", seed, "random seed");
  gen_cmd->add_option("--players", players, "cyclic: player count");
  gen_cmd->add_option("--goods", goods, "cyclic: good count");
  gen_cmd->add_option("--n", dm_n, "3dm: nodes per axis");
  gen_cmd->add_option("--extra", dm_extra, "3dm-yes: extra triples beyond the matching");
  gen_cmd->add_option("--triples", dm_triples, "3dm-no: triple count");
  gen_cmd->add_option("--width", width, "transit-grid: blocks across");
  gen_cmd->add_option("--height", height, "transit-grid: blocks down");
  gen_cmd->add_option("--lines", line_count, "transit-grid: line count");
  gen_cmd->add_option("--riders", rider_count, "transit-grid: rider count");
  gen_cmd->add_option("--scenario-dir", scenario_dir, "also write nodes/lines/riders CSVs here");

  // solve ----------------------------------------------------------------
  auto* solve_cmd = app.add_subcommand("solve", "optimize welfare subject to core membership");
  std::string game_path, objective = "maximin", mode_name = "additive", out_dir;
  double delta = 1e-3, budget = 300.0, floor = 1e-3, secondary_weight = 1e-4;
  int iters = 100;
  bool with_charts = false;
  solve_cmd->add_option("--game", game_path, "game JSON")->required();
  solve_cmd->add_option("--objective", objective, "utilitarian | maximin");
  solve_cmd->add_option("--delta", delta, "objection tolerance");
  solve_cmd->add_option("--iters", iters, "iteration cap");
  solve_cmd->add_option("--mode", mode_name, "additive | multiplicative");
  solve_cmd->add_option("--budget", budget, "membership budget per call, seconds");
  solve_cmd->add_option("--floor", floor, "numerical acceptance floor");
  solve_cmd->add_option("--secondary-weight", secondary_weight, "maximin tie-break weight");
  solve_cmd->add_option("--out-dir", out_dir, "output directory")->required();
  solve_cmd->add_flag("--charts", with_charts, "also render SVG charts");

  // membership -----------------------------------------------------------
  auto* member_cmd = app.add_subcommand("membership", "least objection against an allocation");
  std::string member_game, member_u, member_mode = "additive", member_out;
  double member_budget = 300.0, member_floor = 1e-3;
  member_cmd->add_option("--game", member_game, "game JSON")->required();
  member_cmd->add_option("--u", member_u, "comma-separated utilities, rationals allowed")->required();
  member_cmd->add_option("--mode", member_mode, "additive | multiplicative");
  member_cmd->add_option("--budget", member_budget, "budget in seconds");
  member_cmd->add_option("--floor", member_floor, "numerical acceptance floor");
  member_cmd->add_option("--out", member_out, "write the report record CSV here");

  // oracle ----------------------------------------------------------------
  auto* oracle_cmd = app.add_subcommand("oracle", "exact blocking check by coalition enumeration");
  std::string oracle_game, oracle_u;
  oracle_cmd->add_option("--game", oracle_game, "game JSON")->required();
  oracle_cmd->add_option("--u", oracle_u, "comma-separated utilities")->required();

  // report ----------------------------------------------------------------
  auto* report_cmd = app.add_subcommand("report", "render SVG charts from a trajectory CSV");
  std::string trajectory_path, final_path, report_dir;
  report_cmd->add_option("--trajectory", trajectory_path, "trajectory CSV")->required();
  report_cmd->add_option("--final", final_path, "final.json for the quantile curve");
  report_cmd->add_option("--out-dir", report_dir, "output directory")->required();

  // rerun -----------------------------------------------------------------
  auto* rerun_cmd = app.add_subcommand("rerun", "replay a run from its manifest");
  std::string manifest_path, rerun_out_dir;
  rerun_cmd->add_option("--manifest", manifest_path, "manifest JSON")->required();
  rerun_cmd->add_option("--out-dir", rerun_out_dir, "override the output directory");

  try {
    std::vector<std::string> reversed(argv.rbegin(), argv.rend());
    app.parse(reversed);
  } catch (const CLI::CallForVersion&) {
    out << kVersion << "\n";
    return 0;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return 0;
    }
    err << "usage error: " << e.what() << "\n";
    return 2;
  }

  const auto start = std::chrono::steady_clock::now();
  const auto elapsed = [&start]() {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  };

  try {
    detail::thread_env();  // validate early; recorded in manifests

    if (gen_cmd->parsed()) {
      std::vector<std::string> outputs{gen_out};
      if (family == "empty-core") {
        io::save_game(gen::empty_core_example(), gen_out);
      } else if (family == "cyclic") {
        std::vector<Rational> moments;
        for (int j = 0; j < goods; ++j) moments.push_back(Rational(2 + j));
        io::save_game(gen::cyclic_family(players, goods, moments), gen_out);
      } else if (family == "3dm-yes") {
        io::save_game(gen::three_dm_gadget(gen::random_yes_instance(seed, dm_n, dm_extra)).game, gen_out);
      } else if (family == "3dm-no") {
        io::save_game(gen::three_dm_gadget(gen::uncovered_no_instance(seed, dm_n, dm_triples)).game, gen_out);
      } else if (family == "transit-grid" || family == "dilemma") {
        const auto scenario = family == "dilemma"
                                  ? gen::dilemma_scenario()
                                  : gen::grid_city(seed, width, height, line_count, rider_count);
        const auto transit = gen::transit_game(scenario);
        io::save_game(transit.game, gen_out);
        if (!scenario_dir.empty()) {
          std::filesystem::create_directories(scenario_dir);
          io::save_scenario(scenario, scenario_dir);
          for (const char* f : {"nodes.csv", "lines.csv", "riders.csv"})
            outputs.push_back(scenario_dir + "/" + f);
        }
        out << "players kept: " << transit.game.num_players() << "\n";
      } else {
        err << "usage error: unknown family '" << family << "'\n";
        return 2;
      }
      detail::write_manifest(gen_out + ".manifest.json", argv, outputs, elapsed());
      out << "wrote " << gen_out << "\n";
      return 0;
    }

    if (solve_cmd->parsed()) {
      const Game game = io::load_game(game_path);
      opt::RunConfig config;
      if (objective == "utilitarian") config.objective.kind = opt::ObjectiveKind::Utilitarian;
      else if (objective == "maximin") config.objective.kind = opt::ObjectiveKind::Maximin;
      else {
        err << "usage error: unknown objective '" << objective << "'\n";
        return 2;
      }
      config.objective.secondary_weight = secondary_weight;
      config.delta = delta;
      config.max_iterations = iters;
      config.membership_budget_s = budget;
      config.mode = detail::parse_mode(mode_name, floor);

      const auto result = opt::solve_over_core(game, config);

      std::filesystem::create_directories(out_dir);
      std::vector<std::string> outputs;
      io::write_trajectory_csv(result.trajectory, out_dir + "/trajectory.csv");
      outputs.push_back(out_dir + "/trajectory.csv");
      io::write_cut_log_csv(result.cut_log, out_dir + "/cuts.csv");
      outputs.push_back(out_dir + "/cuts.csv");
      io::write_membership_csv(result.membership_log, out_dir + "/membership.csv");
      outputs.push_back(out_dir + "/membership.csv");
      io::write_final_json(result, out_dir + "/final.json");
      outputs.push_back(out_dir + "/final.json");
      if (with_charts && !result.trajectory.rows.empty()) {
        const auto table = detail::read_trajectory(out_dir + "/trajectory.csv");
        detail::render_reports(out_dir, table, out_dir + "/final.json", outputs);
      }
      detail::write_manifest(out_dir + "/manifest.json", argv, outputs, elapsed());

      switch (result.status) {
        case opt::RunStatus::Converged: out << "status: converged\n"; break;
        case opt::RunStatus::IterationCap:
          out << (result.stalled ? "status: stalled at the iteration cap\n" : "status: iteration cap\n");
          break;
        case opt::RunStatus::RelaxationInfeasible:
          out << "status: relaxation infeasible (evidence of an empty core)\n";
          break;
      }
      if (!result.trajectory.rows.empty()) {
        const auto& last = result.trajectory.rows.back();
        out << "iterations: " << result.trajectory.rows.size() << "\n"
            << "final utilitarian welfare: " << io::format_double(last.utilitarian) << "\n"
            << "final maximin welfare: " << io::format_double(last.maximin) << "\n"
            << "final least objection: " << io::format_double(last.epsilon) << "\n";
      }
      return 0;
    }

    if (member_cmd->parsed()) {
      const Game game = io::load_game(member_game);
      UtilityVector u{detail::parse_utilities(member_u)};
      const auto mode = detail::parse_mode(member_mode, member_floor);
      const auto result = membership::least_objection(game, u, mode, nullptr, member_budget);
      out << "epsilon: " << io::format_double(result.objection.epsilon) << "\n"
          << "coalition: " << result.objection.coalition.str() << "\n"
          << "nodes: " << result.stats.nodes << "\n"
          << "timed_out: " << (result.stats.timed_out ? "true" : "false") << "\n"
          << "membership: "
          << (membership::certifies_membership(result.objection, mode) ? "certified" : "blocked") << "\n";
      if (!member_out.empty()) {
        std::ostringstream csv;
        csv << "epsilon,mode,coalition,wall_time_s,node_count,timed_out\n"
            << io::format_double(result.objection.epsilon) << ',' << member_mode << ','
            << io::coalition_field(result.objection.coalition) << ','
            << io::format_double(result.stats.wall_seconds) << ',' << result.stats.nodes << ','
            << (result.stats.timed_out ? 1 : 0) << '\n';
        io::write_file(member_out, csv.str());
        detail::write_manifest(member_out + ".manifest.json", argv, {member_out}, elapsed());
      }
      return 0;
    }

    if (oracle_cmd->parsed()) {
      const Game game = io::load_game(oracle_game);
      UtilityVector u{detail::parse_utilities(oracle_u)};
      const auto verdict = oracle::is_blocked_exact(game, u);
      out << "blocked: " << (verdict.blocked ? "true" : "false") << "\n"
          << "coalitions_checked: " << verdict.coalitions_checked << "\n"
          << "max_least_objection: " << io::format_double(verdict.max_least_objection) << "\n";
      if (verdict.best)
        out << "blocking_coalition: " << verdict.best->coalition.str() << "\n"
            << "objection: " << io::format_double(verdict.best->epsilon) << "\n";
      return 0;
    }

    if (report_cmd->parsed()) {
      std::filesystem::create_directories(report_dir);
      const auto table = detail::read_trajectory(trajectory_path);
      std::vector<std::string> outputs;
      detail::render_reports(report_dir, table, final_path, outputs);
      detail::write_manifest(report_dir + "/manifest.json", argv, outputs, elapsed());
      for (const auto& f : outputs) out << "wrote " << f << "\n";
      return 0;
    }

    if (rerun_cmd->parsed()) {
      const auto manifest = nlohmann::json::parse(io::read_file(manifest_path));
      if (!manifest.contains("argv")) throw ParseError("argv", "missing from manifest");
      std::vector<std::string> replay = manifest["argv"].get<std::vector<std::string>>();
      if (!replay.empty() && replay.front() == "rerun") throw Error("refusing to replay a rerun manifest");
      if (!rerun_out_dir.empty()) {
        bool replaced = false;
        for (std::size_t i = 0; i + 1 < replay.size(); ++i)
          if (replay[i] == "--out-dir") {
            replay[i + 1] = rerun_out_dir;
            replaced = true;
          }
        if (!replaced) throw Error("manifest command has no --out-dir to override");
      }
      return run(replay, out, err);
    }
  } catch (const CLI::ValidationError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const NumericalBreakdown& e) {
    err << "numerical breakdown: " << e.what() << "\n";
    return 3;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace corecut::cli

#endif  // CORECUT_CLI_HPP
