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

// End-to-end acceptance suite.  Each criterion prints one PASS/FAIL line;
// `--criterion N` runs a single one, the default runs all nine.

#include <array>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "corecut/cli.hpp"
#include "corecut/corecut.hpp"
#include "support.hpp"

using namespace corecut;

namespace {

struct Check {
  bool ok = true;
  std::ostringstream log;

  void expect(bool condition, const std::string& what) {
    if (!condition) {
      ok = false;
      log << "    FAILED: " << what << "\n";
    }
  }
};

std::filesystem::path fresh_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("corecut_acceptance_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

// ---------------------------------------------------------------------------
// 1. Search/enumeration agreement on 200 seeded random games.
bool criterion1(Check& check) {
  std::mt19937_64 rng(20260101);
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    const Game game = test_support::random_game(seed);  // |N|<=6, |J|<=4, |K|<=2, v >= 0
    const bool tight = (seed % 2) == 0;
    const Vec x = test_support::random_grand_plan(game, rng, tight);
    const auto u = test_support::utilities_of(game, x);
    const auto verdict = oracle::is_blocked_exact(game, u);
    const auto result = membership::least_objection(game, u, membership::ObjectionMode{});
    check.expect(result.stats.exact, "seed " + std::to_string(seed) + ": search not exhausted");
    const double expected = std::max(0.0, verdict.max_least_objection);
    check.expect(std::abs(result.objection.epsilon - expected) <= 1e-6,
                 "seed " + std::to_string(seed) + ": epsilon mismatch " +
                     io::format_double(result.objection.epsilon) + " vs " + io::format_double(expected));
    check.expect(verdict.blocked == (result.objection.epsilon > 1e-6),
                 "seed " + std::to_string(seed) + ": verdict mismatch");
    if (!check.ok) return false;
  }
  return check.ok;
}

// ---------------------------------------------------------------------------
// 2. The aversion game: no core point on a fine grid, and the optimizer
//    never reports convergence.
bool criterion2(Check& check) {
  const Game game = gen::empty_core_example();
  const auto evidence = oracle::core_empty_evidence(game, 0.01);
  check.expect(!evidence.found, "grid sweep found an unblocked sample");
  check.expect(evidence.samples > 1000, "grid sweep covered too few samples");
  for (const auto kind : {opt::ObjectiveKind::Utilitarian, opt::ObjectiveKind::Maximin}) {
    opt::RunConfig config;
    config.objective.kind = kind;
    config.delta = 1e-3;
    config.max_iterations = 40;
    const auto result = opt::solve_over_core(game, config);
    check.expect(result.status != opt::RunStatus::Converged,
                 "optimizer reported convergence on the empty-core game");
    for (const auto& row : result.trajectory.rows)
      check.expect(row.epsilon > config.delta, "recorded objection at or below the tolerance");
  }
  return check.ok;
}

// ---------------------------------------------------------------------------
// 3. Hardness gadget: yes-instances are blocked with the matching structure,
//    no-instances certify the all-ones point exactly.
bool criterion3(Check& check) {
  const auto structure_ok = [&](const gen::GadgetGame& gadget,
                                const std::vector<std::array<int, 3>>& triples,
                                const Coalition& blocking, const std::string& tag) {
    const int n = gadget.n;
    int nodes = 0;
    std::vector<int> edges;
    for (int id : blocking.members()) {
      if (id < 3 * n) ++nodes;
      else edges.push_back(id - 3 * n);
    }
    check.expect(nodes == 3 * n, tag + ": blocking coalition misses node players");
    check.expect(static_cast<int>(edges.size()) == n, tag + ": wrong edge-player count");
    std::set<int> xs, ys, zs;
    for (int e : edges) {
      xs.insert(triples[static_cast<std::size_t>(e)][0]);
      ys.insert(triples[static_cast<std::size_t>(e)][1]);
      zs.insert(triples[static_cast<std::size_t>(e)][2]);
    }
    check.expect(static_cast<int>(xs.size()) == n && static_cast<int>(ys.size()) == n &&
                     static_cast<int>(zs.size()) == n,
                 tag + ": selected edges are not a perfect matching");
  };
  const auto duplicated_triples = [](const gen::ThreeDMInstance& instance, int m) {
    auto triples = instance.triples;
    std::array<int, 3> first = triples.front();
    for (const auto& t : triples) first = std::min(first, t);
    while (static_cast<int>(triples.size()) < m) triples.push_back(first);
    return triples;
  };

  int yes_done = 0;
  for (const int n : {2, 3}) {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      const auto instance = gen::random_yes_instance(seed * 37 + n, n, 2);
      const auto gadget = gen::three_dm_gadget(instance);
      const auto result =
          membership::least_objection(gadget.game, gadget.u_star, membership::ObjectionMode{}, nullptr, 600.0);
      const std::string tag = "yes n=" + std::to_string(n) + " seed=" + std::to_string(seed);
      check.expect(result.stats.exact, tag + ": search not exhausted");
      check.expect(result.objection.epsilon > 1e-6, tag + ": not blocked");
      structure_ok(gadget, duplicated_triples(instance, gadget.m), result.objection.coalition, tag);
      ++yes_done;
      if (!check.ok) return false;
    }
  }
  check.expect(yes_done == 10, "expected ten yes-instances");

  for (const int n : {2, 3}) {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      const auto instance = gen::uncovered_no_instance(seed * 53 + n, n, n + 2);
      const auto gadget = gen::three_dm_gadget(instance);
      const auto result =
          membership::least_objection(gadget.game, gadget.u_star, membership::ObjectionMode{}, nullptr, 600.0);
      const std::string tag = "no n=" + std::to_string(n) + " seed=" + std::to_string(seed);
      check.expect(result.stats.exact, tag + ": search not exhausted");
      check.expect(std::abs(result.objection.epsilon) <= 1e-6, tag + ": nonzero objection");
      if (n == 2) {
        const auto verdict = oracle::is_blocked_exact(gadget.game, gadget.u_star);
        check.expect(!verdict.blocked, tag + ": oracle disagrees");
      }
      if (!check.ok) return false;
    }
  }
  return check.ok;
}

// ---------------------------------------------------------------------------
// 4. Balancedness: 100 nonnegative-valuation games all certified and solved
//    to convergence with individual rationality intact.
bool criterion4(Check& check) {
  for (int trial = 0; trial < 100; ++trial) {
    const std::uint64_t seed = static_cast<std::uint64_t>(trial) + 1;
    const Game game = (trial % 2 == 0) ? test_support::random_game(seed, {5, 3, 2})
                                       : test_support::random_blocking_game(seed);
    const std::string tag = "trial " + std::to_string(trial);
    check.expect(check_balanced_sufficient(game, BalanceMode::Nonneg).guaranteed(),
                 tag + ": balancedness check failed");
    opt::RunConfig config;
    config.delta = 1e-3;
    config.max_iterations = 100;
    config.objective.kind =
        (trial % 4 < 2) ? opt::ObjectiveKind::Utilitarian : opt::ObjectiveKind::Maximin;
    const auto result = opt::solve_over_core(game, config);
    check.expect(result.status == opt::RunStatus::Converged, tag + ": did not converge");
    if (result.status != opt::RunStatus::Converged) return false;
    const auto ir = membership::singleton_lower_bounds(game);
    for (int i = 0; i < game.num_players(); ++i)
      check.expect(result.utilities.u[static_cast<std::size_t>(i)] >= ir[static_cast<std::size_t>(i)] - 1e-6,
                   tag + ": individual rationality violated");
    if (!check.ok) return false;
  }
  return check.ok;
}

// ---------------------------------------------------------------------------
// 5. Cut validity: accepted cuts separate their vertex by the minimum depth
//    and never shave oracle-certified core samples.
bool criterion5(Check& check) {
  std::mt19937_64 rng(20260505);
  long total_cuts = 0;
  long total_samples = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const Game game = test_support::random_blocking_game(seed + 100);  // |N| <= 5
    const int J = game.num_goods(), N = game.num_players();
    opt::RunConfig config;
    config.delta = 1e-3;
    config.max_iterations = 80;
    config.objective.kind = opt::ObjectiveKind::Maximin;
    const auto result = opt::solve_over_core(game, config);
    std::vector<const cuts::CutRecord*> accepted;
    for (const auto& audit : result.cut_log)
      if (audit.accepted) accepted.push_back(&audit.cut);
    total_cuts += static_cast<long>(accepted.size());

    for (const auto* cut : accepted) {
      double lhs = 0.0, norm = 0.0;
      for (std::size_t j = 0; j < cut->coefficients.size(); ++j) {
        lhs += cut->coefficients[j] * cut->generated_at[j];
        norm += cut->coefficients[j] * cut->coefficients[j];
      }
      check.expect((cut->rhs - lhs) / std::sqrt(norm) >= 1e-7,
                   "seed " + std::to_string(seed) + ": cut shallower than 1e-7 at its vertex");
    }

    const auto samples = test_support::sample_core_points(game, 50, rng);
    total_samples += static_cast<long>(samples.size());
    for (const auto& sample : samples) {
      // Lift (x, u) into the maximin-extended space with w = min u.
      Vec z = sample;
      double w = kInf;
      for (int i = 0; i < N; ++i) w = std::min(w, sample[static_cast<std::size_t>(J + i)]);
      z.push_back(w);
      for (const auto* cut : accepted) {
        double act = 0.0;
        for (std::size_t j = 0; j < cut->coefficients.size(); ++j) act += cut->coefficients[j] * z[j];
        check.expect(act >= cut->rhs - 1e-6,
                     "seed " + std::to_string(seed) + ": certified core sample violates a cut by " +
                         io::format_double(cut->rhs - act));
      }
    }
    if (!check.ok) return false;
  }
  check.expect(total_cuts > 0, "the suite produced no accepted cuts");
  check.expect(total_samples >= 1000, "fewer than 1000 certified samples (got " +
                                          std::to_string(total_samples) + ")");
  return check.ok;
}

// ---------------------------------------------------------------------------
// 6. Moment-curve family: every mapped extreme point is a vertex of the
//    convex hull (not a convex combination of the others).
bool criterion6(Check& check) {
  for (const int n : {2, 3}) {
    for (const int m : {4, 5, 6}) {
      std::vector<Rational> t;
      for (int j = 0; j < m; ++j) t.push_back(Rational(2 + j));
      const Game game = gen::cyclic_family(n, m, t);
      // Mapped extreme points of the grand coalition's utility image.
      std::vector<Vec> points;
      for (int j = 0; j < m; ++j) {
        Vec plan(static_cast<std::size_t>(m), 0.0);
        plan[static_cast<std::size_t>(j)] = static_cast<double>(n);
        Vec p(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) p[static_cast<std::size_t>(i)] = evaluate_utility(game, i, DesignPlan{plan});
        points.push_back(std::move(p));
      }
      for (int j = 0; j < m; ++j) {
        // Feasibility LP: p_j as a convex combination of the others.
        LinearProgram lp;
        lp.maximize = true;
        lp.objective.assign(static_cast<std::size_t>(m - 1), 0.0);
        lp.lower.assign(static_cast<std::size_t>(m - 1), 0.0);
        lp.upper.assign(static_cast<std::size_t>(m - 1), 1.0);
        for (int i = 0; i < n; ++i) {
          Vec row;
          for (int k = 0; k < m; ++k)
            if (k != j) row.push_back(points[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)]);
          lp.add_row(std::move(row), RowSense::Equal, points[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)]);
        }
        lp.add_row(Vec(static_cast<std::size_t>(m - 1), 1.0), RowSense::Equal, 1.0);
        const auto sol = lp::solve(lp);
        check.expect(sol.status == LpStatus::Infeasible,
                     "n=" + std::to_string(n) + " m=" + std::to_string(m) + ": point " +
                         std::to_string(j) + " lies in the hull of the others");
      }
    }
  }
  return check.ok;
}

// ---------------------------------------------------------------------------
// 7. Transit desk study: cooperation cannot beat the unconstrained optimum
//    of its own welfare target, and the objection trajectory subsides.
bool criterion7(Check& check) {
  const auto dir = fresh_dir("criterion7");
  const auto game_path = (dir / "city.json").string();
  std::ostringstream sink;
  int code = cli::run({"gen", "--family", "transit-grid", "--seed", "7", "--width", "18", "--height",
                       "18", "--lines", "12", "--riders", "60", "--out", game_path,
                       "--scenario-dir", (dir / "scenario").string()},
                      sink, sink);
  check.expect(code == 0, "scenario generation failed");
  if (code != 0) return false;

  const auto run_one = [&](const std::string& objective, const std::string& out_dir) {
    return cli::run({"solve", "--game", game_path, "--objective", objective, "--mode",
                     "multiplicative", "--delta", "1e-3", "--iters", "25", "--budget", "4",
                     "--out-dir", out_dir, "--charts"},
                    sink, sink);
  };
  const auto maximin_dir = (dir / "maximin").string();
  const auto utilitarian_dir = (dir / "utilitarian").string();
  check.expect(run_one("maximin", maximin_dir) == 0, "maximin run failed");
  check.expect(run_one("utilitarian", utilitarian_dir) == 0, "utilitarian run failed");
  if (!check.ok) return false;

  const auto maximin_table = cli::detail::read_trajectory(maximin_dir + "/trajectory.csv");
  const auto util_table = cli::detail::read_trajectory(utilitarian_dir + "/trajectory.csv");
  check.expect(!maximin_table.rows.empty() && !util_table.rows.empty(), "empty trajectories");
  if (!check.ok) return false;

  const auto maximin_welfare = maximin_table.column("maximin_welfare");
  check.expect(maximin_welfare.back() <= maximin_welfare.front() + 1e-9,
               "cooperative maximin welfare exceeds the unconstrained plan");
  const auto util_welfare = util_table.column("utilitarian_welfare");
  check.expect(util_welfare.back() <= util_welfare.front() + 1e-9,
               "cooperative utilitarian welfare exceeds the unconstrained optimum");
  for (const auto* table : {&maximin_table, &util_table}) {
    const auto eps = table->column("epsilon");
    check.expect(eps.back() <= eps.front() + 1e-9, "objection trajectory did not subside");
  }
  for (const char* f : {"epsilon.svg", "welfare.svg", "quantiles.svg"})
    check.expect(std::filesystem::exists(std::filesystem::path(maximin_dir) / f),
                 std::string("missing chart ") + f);
  return check.ok;
}

// ---------------------------------------------------------------------------
// 8. Accessibility unit values and continuity at the breakpoints.
bool criterion8(Check& check) {
  check.expect(gen::accessibility(0.0) == 1.0, "accessibility(0) != 1");
  check.expect(gen::accessibility(1600.0) == 0.0, "accessibility(1600) != 0");
  check.expect(std::abs(gen::accessibility(1000.0) - 0.5) <= 1e-12, "accessibility(1000) != 0.5");
  check.expect(std::abs(gen::accessibility(400.0) - gen::accessibility(400.0 - 1e-9)) <= 1e-12,
               "discontinuous at 400");
  check.expect(std::abs(gen::accessibility(1600.0) - gen::accessibility(1600.0 + 1e-9)) <= 1e-12,
               "discontinuous at 1600");
  return check.ok;
}

// ---------------------------------------------------------------------------
// 9. Determinism: replaying manifests reproduces every CSV byte for byte.
bool criterion9(Check& check) {
  const auto dir = fresh_dir("criterion9");
  std::ostringstream sink;
  const auto compare = [&](const std::string& a, const std::string& b, const std::string& what) {
    check.expect(io::read_file(a) == io::read_file(b), what + " differs between runs");
  };

  // Generation manifests.
  const auto game_a = (dir / "city_a.json").string();
  const auto game_b = (dir / "city_b.json").string();
  int code = cli::run({"gen", "--family", "transit-grid", "--seed", "11", "--width", "12",
                       "--height", "12", "--lines", "6", "--riders", "24", "--out", game_a,
                       "--scenario-dir", (dir / "scenario_a").string()},
                      sink, sink);
  check.expect(code == 0, "generation failed");
  code = cli::run({"gen", "--family", "transit-grid", "--seed", "11", "--width", "12", "--height",
                   "12", "--lines", "6", "--riders", "24", "--out", game_b, "--scenario-dir",
                   (dir / "scenario_b").string()},
                  sink, sink);
  check.expect(code == 0, "second generation failed");
  compare(game_a, game_b, "generated game");
  for (const char* f : {"nodes.csv", "lines.csv", "riders.csv"})
    compare((dir / "scenario_a" / f).string(), (dir / "scenario_b" / f).string(), f);

  // Transit pipeline, replayed from its manifest.
  const auto first = (dir / "first").string();
  code = cli::run({"solve", "--game", game_a, "--objective", "maximin", "--mode", "multiplicative",
                   "--delta", "1e-3", "--iters", "10", "--budget", "2", "--out-dir", first},
                  sink, sink);
  check.expect(code == 0, "transit solve failed");
  const auto second = (dir / "second").string();
  code = cli::run({"rerun", "--manifest", first + "/manifest.json", "--out-dir", second}, sink, sink);
  check.expect(code == 0, "transit rerun failed");
  for (const char* f : {"trajectory.csv", "cuts.csv", "membership.csv", "final.json"})
    compare(first + "/" + f, second + "/" + f, f);

  // Empty-core pipeline, replayed likewise.
  const auto aversion = (dir / "aversion.json").string();
  cli::run({"gen", "--family", "empty-core", "--out", aversion}, sink, sink);
  const auto ec_first = (dir / "ec_first").string();
  code = cli::run({"solve", "--game", aversion, "--objective", "utilitarian", "--delta", "1e-3",
                   "--iters", "25", "--out-dir", ec_first},
                  sink, sink);
  check.expect(code == 0, "empty-core solve failed");
  const auto ec_second = (dir / "ec_second").string();
  code = cli::run({"rerun", "--manifest", ec_first + "/manifest.json", "--out-dir", ec_second}, sink, sink);
  check.expect(code == 0, "empty-core rerun failed");
  for (const char* f : {"trajectory.csv", "cuts.csv", "membership.csv", "final.json"})
    compare(ec_first + "/" + f, ec_second + "/" + f, std::string("empty-core ") + f);

  // Membership report record.
  const auto member_a = (dir / "member_a.csv").string();
  const auto member_b = (dir / "member_b.csv").string();
  for (const auto& path : {member_a, member_b}) {
    code = cli::run({"membership", "--game", aversion, "--u", "2,2,-2", "--out", path}, sink, sink);
    check.expect(code == 0, "membership run failed");
  }
  // All but the wall-time column must agree; strip it before comparing.
  const auto strip_wall = [](const std::string& content) {
    std::istringstream in(content);
    std::ostringstream out;
    std::string line;
    while (std::getline(in, line)) {
      const auto cells = io::detail::split(line, ',');
      for (std::size_t c = 0; c < cells.size(); ++c) {
        if (c == 3) continue;  // wall_time_s
        out << cells[c] << (c + 1 < cells.size() ? "," : "");
      }
      out << '\n';
    }
    return out.str();
  };
  check.expect(strip_wall(io::read_file(member_a)) == strip_wall(io::read_file(member_b)),
               "membership records differ");
  return check.ok;
}

struct Criterion {
  int id;
  const char* summary;
  std::function<bool(Check&)> fn;
};

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  for (int a = 1; a + 1 < argc; ++a)
    if (std::strcmp(argv[a], "--criterion") == 0) only = std::atoi(argv[a + 1]);

  const std::vector<Criterion> criteria{
      {1, "membership search agrees with the enumeration oracle on 200 games", criterion1},
      {2, "the aversion game shows no core point and never converges", criterion2},
      {3, "matching gadget blocks exactly on yes-instances", criterion3},
      {4, "100 nonnegative games certify balanced and converge", criterion4},
      {5, "accepted cuts separate their vertex and preserve certified core samples", criterion5},
      {6, "moment-curve utility images are in convex position", criterion6},
      {7, "transit desk study: cooperation trades off the design goal", criterion7},
      {8, "accessibility breakpoints and continuity", criterion8},
      {9, "manifest replays reproduce CSV outputs byte for byte", criterion9},
  };

  bool all_ok = true;
  for (const auto& criterion : criteria) {
    if (only != 0 && criterion.id != only) continue;
    Check check;
    bool ok = false;
    try {
      ok = criterion.fn(check);
    } catch (const std::exception& e) {
      check.log << "    exception: " << e.what() << "\n";
      ok = false;
    }
    std::cout << (ok ? "[PASS]" : "[FAIL]") << " criterion " << criterion.id << ": "
              << criterion.summary << "\n";
    if (!ok) {
      std::cout << check.log.str();
      all_ok = false;
    }
  }
  return all_ok ? 0 : 1;
}
