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

#ifndef CORECUT_IO_HPP
#define CORECUT_IO_HPP

// File formats.  Games travel as JSON with rationals in "p/q" strings;
// transit scenarios as a nodes/lines/riders CSV trio; run telemetry as CSV.
// All numeric output is formatted through one fixed printf spec so that
// identical runs produce byte-identical files.

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "corecut/errors.hpp"
#include "corecut/game.hpp"
#include "corecut/instances.hpp"
#include "corecut/optimizer.hpp"
#include "corecut/rational.hpp"

namespace corecut::io {

using nlohmann::json;

inline std::string format_double(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof buffer, "%.12g", value);
  return buffer;
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  out << content;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "' for reading");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

namespace detail {

inline Rational rational_at(const json& value, const std::string& where) {
  try {
    if (value.is_number_integer()) return Rational(value.get<std::int64_t>());
    if (value.is_string()) return Rational::parse(value.get<std::string>());
  } catch (const Error& e) {
    throw ParseError(where, e.what());
  }
  throw ParseError(where, "expected an integer or a 'p/q' string");
}

inline std::vector<RationalVec> matrix_at(const json& root, const std::string& field, int rows, int cols) {
  if (!root.contains(field)) throw ParseError(field, "missing");
  const json& m = root[field];
  if (!m.is_array() || static_cast<int>(m.size()) != rows)
    throw ParseError(field, "expected " + std::to_string(rows) + " rows");
  std::vector<RationalVec> out;
  out.reserve(static_cast<std::size_t>(rows));
  for (int r = 0; r < rows; ++r) {
    const json& row = m[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<int>(row.size()) != cols)
      throw ParseError(field + "[" + std::to_string(r) + "]",
                       "expected " + std::to_string(cols) + " entries");
    RationalVec converted;
    converted.reserve(static_cast<std::size_t>(cols));
    for (int c = 0; c < cols; ++c)
      converted.push_back(rational_at(row[static_cast<std::size_t>(c)],
                                      field + "[" + std::to_string(r) + "][" + std::to_string(c) + "]"));
    out.push_back(std::move(converted));
  }
  return out;
}

}  // namespace detail

inline json game_to_json(const Game& game) {
  json root;
  root["players"] = game.num_players();
  root["resources"] = game.num_resources();
  root["goods"] = game.num_goods();
  auto matrix = [](const std::vector<RationalVec>& rows) {
    json out = json::array();
    for (const auto& row : rows) {
      json r = json::array();
      for (const auto& v : row) r.push_back(v.str());
      out.push_back(std::move(r));
    }
    return out;
  };
  root["A"] = matrix(game.production());
  root["b"] = matrix(game.endowments());
  root["v"] = matrix(game.valuations());
  if (!game.labels().empty()) root["labels"] = game.labels();
  return root;
}

inline Game game_from_json(const json& root) {
  for (const char* field : {"players", "resources", "goods"}) {
    if (!root.contains(field)) throw ParseError(field, "missing");
    if (!root[field].is_number_integer() || root[field].get<int>() <= 0)
      throw ParseError(field, "expected a positive integer");
  }
  const int players = root["players"].get<int>();
  const int resources = root["resources"].get<int>();
  const int goods = root["goods"].get<int>();
  auto production = detail::matrix_at(root, "A", resources, goods);
  auto endowments = detail::matrix_at(root, "b", players, resources);
  auto valuations = detail::matrix_at(root, "v", players, goods);
  std::vector<std::string> labels;
  if (root.contains("labels")) {
    if (!root["labels"].is_array() || static_cast<int>(root["labels"].size()) != players)
      throw ParseError("labels", "expected one label per player");
    for (const auto& l : root["labels"]) labels.push_back(l.get<std::string>());
  }
  try {
    return Game(std::move(production), std::move(endowments), std::move(valuations), std::move(labels));
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    throw ParseError("game", e.what());
  }
}

inline void save_game(const Game& game, const std::string& path) {
  write_file(path, game_to_json(game).dump(2) + "\n");
}

inline Game load_game(const std::string& path) {
  json root;
  try {
    root = json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    throw ParseError("json", e.what());
  }
  return game_from_json(root);
}

// -- transit scenario CSV trio -------------------------------------------------

inline void save_scenario(const gen::TransitScenario& scenario, const std::string& dir) {
  std::ostringstream nodes;
  nodes << "id,x_m,y_m\n";
  for (std::size_t i = 0; i < scenario.nodes.size(); ++i)
    nodes << i << ',' << format_double(scenario.nodes[i].x) << ',' << format_double(scenario.nodes[i].y) << '\n';
  write_file(dir + "/nodes.csv", nodes.str());

  std::ostringstream lines;
  lines << "id,length_km,stops\n";
  for (std::size_t j = 0; j < scenario.lines.size(); ++j) {
    lines << j << ',' << format_double(scenario.lines[j].length_km) << ',';
    for (std::size_t s = 0; s < scenario.lines[j].stops.size(); ++s) {
      if (s) lines << '|';
      lines << scenario.lines[j].stops[s];
    }
    lines << '\n';
  }
  write_file(dir + "/lines.csv", lines.str());

  std::ostringstream riders;
  riders << "id,origin,destination\n";
  for (std::size_t r = 0; r < scenario.riders.size(); ++r)
    riders << r << ',' << scenario.riders[r].origin << ',' << scenario.riders[r].destination << '\n';
  write_file(dir + "/riders.csv", riders.str());
}

namespace detail {

inline std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, sep)) out.push_back(cell);
  return out;
}

}  // namespace detail

inline gen::TransitScenario load_scenario(const std::string& dir) {
  gen::TransitScenario scenario;
  auto rows = [&](const std::string& name) {
    std::istringstream in(read_file(dir + "/" + name));
    std::vector<std::vector<std::string>> out;
    std::string line;
    std::getline(in, line);  // header
    while (std::getline(in, line))
      if (!line.empty()) out.push_back(detail::split(line, ','));
    return out;
  };
  try {
    for (const auto& row : rows("nodes.csv"))
      scenario.nodes.push_back(gen::Point{std::stod(row.at(1)), std::stod(row.at(2))});
    for (const auto& row : rows("lines.csv")) {
      gen::TransitLine line;
      line.length_km = std::stod(row.at(1));
      for (const auto& stop : detail::split(row.at(2), '|')) line.stops.push_back(std::stoi(stop));
      scenario.lines.push_back(std::move(line));
    }
    for (const auto& row : rows("riders.csv"))
      scenario.riders.push_back(gen::TransitRider{std::stoi(row.at(1)), std::stoi(row.at(2))});
  } catch (const std::exception& e) {
    throw ParseError("scenario", e.what());
  }
  scenario.validate();
  return scenario;
}

// -- run telemetry --------------------------------------------------------------

// Wall-clock columns stay out of these files: identical runs must reproduce
// them byte for byte.  Timing lives in the manifest.
inline void write_trajectory_csv(const opt::Trajectory& trajectory, const std::string& path) {
  std::ostringstream out;
  out << "iteration,objective_value,utilitarian_welfare,maximin_welfare,epsilon,"
         "blocking_coalition_size,cuts_added,basis_condition_estimate\n";
  for (const auto& row : trajectory.rows)
    out << row.iteration << ',' << format_double(row.objective_value) << ','
        << format_double(row.utilitarian) << ',' << format_double(row.maximin) << ','
        << format_double(row.epsilon) << ',' << row.blocking_size << ',' << row.cuts_added << ','
        << format_double(row.basis_condition) << '\n';
  write_file(path, out.str());
}

inline std::string coalition_field(const Coalition& coalition) {
  std::string out;
  for (std::size_t k = 0; k < coalition.members().size(); ++k) {
    if (k) out += '|';
    out += std::to_string(coalition.members()[k]);
  }
  return out;
}

inline void write_cut_log_csv(const std::vector<opt::CutAudit>& log, const std::string& path) {
  std::ostringstream out;
  out << "iteration,source_size,depth,min_abs_coef,max_abs_coef,range_ratio,accepted,reject_reason\n";
  for (const auto& audit : log)
    out << audit.iteration << ',' << audit.cut.source.size() << ',' << format_double(audit.cut.depth)
        << ',' << format_double(audit.cut.stats.min_abs_coef) << ','
        << format_double(audit.cut.stats.max_abs_coef) << ','
        << format_double(audit.cut.stats.range_ratio) << ',' << (audit.accepted ? 1 : 0) << ','
        << audit.reject_reason << '\n';
  write_file(path, out.str());
}

inline void write_membership_csv(const std::vector<opt::MembershipRecord>& log, const std::string& path) {
  std::ostringstream out;
  out << "iteration,epsilon,mode,coalition,node_count,timed_out\n";
  for (const auto& record : log)
    out << record.iteration << ',' << format_double(record.epsilon) << ','
        << (record.kind == membership::ObjectionKind::Additive ? "additive" : "multiplicative") << ','
        << coalition_field(record.coalition) << ',' << record.nodes << ','
        << (record.timed_out ? 1 : 0) << '\n';
  write_file(path, out.str());
}

inline void write_final_json(const opt::RunResult& result, const std::string& path) {
  json root;
  switch (result.status) {
    case opt::RunStatus::Converged: root["status"] = "converged"; break;
    case opt::RunStatus::IterationCap: root["status"] = "iteration-cap"; break;
    case opt::RunStatus::RelaxationInfeasible: root["status"] = "relaxation-infeasible"; break;
  }
  root["stalled"] = result.stalled;
  root["plan"] = result.plan.x;
  root["utilities"] = result.utilities.u;
  root["initial_utilities"] = result.initial_utilities.u;
  write_file(path, root.dump(2) + "\n");
}

}  // namespace corecut::io

#endif  // CORECUT_IO_HPP
