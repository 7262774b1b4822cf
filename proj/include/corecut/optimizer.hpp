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

#ifndef CORECUT_OPTIMIZER_HPP
#define CORECUT_OPTIMIZER_HPP

// Cutting-plane optimization of a linear (or linearized maximin) welfare
// objective subject to core membership.  The relaxation starts at the grand
// design-utility space, bounded up front by individual-rationality lower
// bounds and grand-coalition utility upper bounds, and shrinks by one round
// of intersection cuts per iteration: the incumbent blocking coalition's cut
// plus replayed pool cuts that still block, after the hygiene filters.
// Termination: the least objection drops to the tolerance (Converged), the
// relaxation empties (RelaxationInfeasible — evidence of an empty core), or
// the iteration cap binds.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <string>
#include <vector>

#include "corecut/cuts.hpp"
#include "corecut/errors.hpp"
#include "corecut/game.hpp"
#include "corecut/linear_program.hpp"
#include "corecut/membership.hpp"
#include "corecut/simplex.hpp"

namespace corecut::opt {

enum class ObjectiveKind : std::uint8_t { Utilitarian, Maximin, CustomLinear };

struct Objective {
  ObjectiveKind kind = ObjectiveKind::Utilitarian;
  double secondary_weight = 1e-4;  // maximin tie-break toward total welfare
  Vec coefficients;                // CustomLinear only, over (x, u)
};

struct RunConfig {
  Objective objective;
  double delta = 1e-3;  // objection tolerance
  int max_iterations = 100;
  double membership_budget_s = 300.0;
  membership::ObjectionMode mode{};
};

struct IterationRecord {
  int iteration = 0;
  double objective_value = 0.0;
  double utilitarian = 0.0;
  double maximin = 0.0;
  double epsilon = 0.0;
  int blocking_size = 0;
  int cuts_added = 0;
  double basis_condition = 1.0;
  double wall_seconds = 0.0;
};

struct Trajectory {
  std::vector<IterationRecord> rows;
};

enum class RunStatus : std::uint8_t { Converged, IterationCap, RelaxationInfeasible };

struct MembershipRecord {
  int iteration = 0;
  double epsilon = 0.0;
  membership::ObjectionKind kind = membership::ObjectionKind::Additive;
  Coalition coalition;
  long nodes = 0;
  bool timed_out = false;
};

struct CutAudit {
  int iteration = 0;
  cuts::CutRecord cut;
  bool accepted = false;
  std::string reject_reason;
};

struct RunResult {
  RunStatus status = RunStatus::IterationCap;
  bool stalled = false;  // a round produced no usable cut
  DesignPlan plan;
  UtilityVector utilities;
  UtilityVector initial_utilities;  // iteration-0 vertex, before any cut
  Trajectory trajectory;
  std::vector<CutAudit> cut_log;
  std::vector<MembershipRecord> membership_log;
  membership::CoalitionPool pool;
};

enum class WelfareKind : std::uint8_t { Utilitarian, Maximin };

inline double welfare(const UtilityVector& u, WelfareKind kind) {
  if (u.u.empty()) throw Error("welfare of an empty utility vector");
  if (kind == WelfareKind::Utilitarian) {
    double s = 0.0;
    for (double v : u.u) s += v;
    return s;
  }
  double m = kInf;
  for (double v : u.u) m = std::min(m, v);
  return m;
}

struct ExtendedFormulation {
  ConstraintSystem system;  // over (x, u, w)
  Vec objective;
  int w_index = 0;
};

/// Linearizes the maximin objective: a new variable w with w <= u_i for all
/// players, maximized with a small utilitarian tie-break.  Cuts for runs on
/// this formulation live in the extended space.
inline ExtendedFormulation maximin_extension(const Game& game, double secondary_weight = 1e-4) {
  const int J = game.num_goods(), N = game.num_players();
  ExtendedFormulation ext{ConstraintSystem(J + N + 1), Vec(), J + N};
  const auto base = design_utility_space(game, Coalition::full(N));
  ext.system.lower = base.lower;
  ext.system.upper = base.upper;
  ext.system.lower.push_back(-kInf);
  ext.system.upper.push_back(kInf);
  for (const auto& row : base.rows) {
    Vec coeffs = row.coeffs;
    coeffs.push_back(0.0);
    ext.system.add_row(std::move(coeffs), row.sense, row.rhs);
  }
  for (int i = 0; i < N; ++i) {
    Vec row(static_cast<std::size_t>(J + N + 1), 0.0);
    row[static_cast<std::size_t>(ext.w_index)] = 1.0;
    row[static_cast<std::size_t>(J + i)] = -1.0;
    ext.system.add_row(std::move(row), RowSense::LessEqual, 0.0);
  }
  ext.objective.assign(static_cast<std::size_t>(J + N + 1), 0.0);
  ext.objective[static_cast<std::size_t>(ext.w_index)] = 1.0;
  for (int i = 0; i < N; ++i) ext.objective[static_cast<std::size_t>(J + i)] = secondary_weight;
  return ext;
}

namespace detail {

inline LinearProgram build_master(const Game& game, const Objective& objective, const Vec& ir,
                                  const membership::UtilityBounds& bounds) {
  const int J = game.num_goods(), N = game.num_players();
  ConstraintSystem system(0);
  Vec coeffs;
  switch (objective.kind) {
    case ObjectiveKind::Maximin: {
      auto ext = maximin_extension(game, objective.secondary_weight);
      system = std::move(ext.system);
      coeffs = std::move(ext.objective);
      break;
    }
    case ObjectiveKind::Utilitarian: {
      system = design_utility_space(game, Coalition::full(N));
      coeffs.assign(static_cast<std::size_t>(J + N), 0.0);
      for (int i = 0; i < N; ++i) coeffs[static_cast<std::size_t>(J + i)] = 1.0;
      break;
    }
    case ObjectiveKind::CustomLinear: {
      system = design_utility_space(game, Coalition::full(N));
      if (static_cast<int>(objective.coefficients.size()) != J + N)
        throw DimensionMismatch("custom objective must cover the design-utility space");
      coeffs = objective.coefficients;
      break;
    }
  }
  // Individual rationality below, grand-coalition optima above: this is what
  // keeps the relaxation bounded.
  double w_floor = kInf;
  for (int i = 0; i < N; ++i) {
    system.set_bounds(J + i, ir[static_cast<std::size_t>(i)], bounds.upper[static_cast<std::size_t>(i)]);
    w_floor = std::min(w_floor, ir[static_cast<std::size_t>(i)]);
  }
  if (objective.kind == ObjectiveKind::Maximin)
    system.set_bounds(J + N, w_floor - 1.0, kInf);  // never active at an optimum
  return LinearProgram(system, true, coeffs);
}

}  // namespace detail

/// Runs the cutting-plane loop.  Individual-rationality rows are installed
/// up front, so multiplicative runs require every stand-alone optimum to be
/// positive.
inline RunResult solve_over_core(const Game& game, const RunConfig& config) {
  if (config.delta < 0.0) throw Error("objection tolerance must be nonnegative");
  if (config.max_iterations < 1) throw Error("need at least one iteration");
  const int J = game.num_goods(), N = game.num_players();
  const bool multiplicative = config.mode.kind == membership::ObjectionKind::Multiplicative;

  const Vec ir = membership::singleton_lower_bounds(game);
  if (multiplicative)
    for (double v : ir)
      if (v <= 0.0)
        throw NonPositiveIncumbentUtility(
            "multiplicative runs need positive stand-alone optima for every player");
  const auto bounds = membership::utility_bounds(game);
  LinearProgram master = detail::build_master(game, config.objective, ir, bounds);

  RunResult result;
  const auto run_start = std::chrono::steady_clock::now();
  auto last_tick = run_start;
  BasicSolution sol = lp::solve(master);

  for (int iter = 0; iter < config.max_iterations; ++iter) {
    if (sol.status == LpStatus::Infeasible) {
      // Cuts are valid for the core's extended formulation, so an empty
      // relaxation is (numerical-tolerance) evidence of an empty core.
      result.status = RunStatus::RelaxationInfeasible;
      return result;
    }
    if (sol.status != LpStatus::Optimal)
      throw NumericalBreakdown("master relaxation reported unbounded; bounding rows are missing");

    UtilityVector u;
    u.u.assign(sol.x.begin() + J, sol.x.begin() + J + N);
    result.plan.x.assign(sol.x.begin(), sol.x.begin() + J);
    result.utilities = u;
    if (iter == 0) result.initial_utilities = u;

    // Membership check, warm-started from the pool plus the prefix screen.
    membership::CoalitionPool seeded = result.pool;
    for (auto& c : membership::prefix_heuristic(game, u)) seeded.add(c, 0.0);
    auto lo = membership::least_objection(game, u, config.mode, &seeded, config.membership_budget_s);
    result.membership_log.push_back(MembershipRecord{iter, lo.objection.epsilon, config.mode.kind,
                                                     lo.objection.coalition, lo.stats.nodes,
                                                     lo.stats.timed_out});

    const double threshold = multiplicative ? 1.0 + config.delta : config.delta;
    bool converged = lo.objection.epsilon <= threshold;
    if (converged) {
      // Safety net: a fresh search must agree before Converged is reported.
      auto recheck = membership::least_objection(game, u, config.mode, nullptr,
                                                 config.membership_budget_s);
      if (recheck.objection.epsilon > threshold) {
        converged = false;
        lo = std::move(recheck);
      }
    }

    IterationRecord record;
    record.iteration = iter;
    record.objective_value = sol.objective_value;
    record.utilitarian = welfare(u, WelfareKind::Utilitarian);
    record.maximin = welfare(u, WelfareKind::Maximin);
    record.epsilon = lo.objection.epsilon;
    record.blocking_size = lo.objection.coalition.size();
    record.basis_condition = sol.condition_estimate;
    const auto now = std::chrono::steady_clock::now();
    record.wall_seconds = std::chrono::duration<double>(now - last_tick).count();
    last_tick = now;

    if (converged) {
      result.trajectory.rows.push_back(record);
      result.status = RunStatus::Converged;
      return result;
    }

    const Coalition incumbent = lo.objection.coalition;
    const bool incumbent_blocks =
        multiplicative ? lo.objection.epsilon > 1.0 + 1e-9 : lo.objection.epsilon > 1e-9;
    result.pool.add(incumbent, lo.objection.epsilon);

    // One round of cuts at the current vertex: the incumbent's cut first,
    // then replayed pool coalitions that still block here.
    const auto rays = lp::extract_rays(sol, master);
    std::vector<Coalition> candidates;
    if (incumbent_blocks) candidates.push_back(incumbent);
    for (const auto& [coalition, seen_eps] : result.pool.entries()) {
      if (coalition == incumbent) continue;
      const auto replay = membership::coalition_objection(
          game, coalition, u.u, membership::ObjectionMode{membership::ObjectionKind::Additive, 0.0});
      if (replay && replay->epsilon > 1e-7) candidates.push_back(coalition);
    }
    int cuts_added = 0;
    for (const auto& coalition : candidates) {
      CutAudit audit;
      audit.iteration = iter;
      try {
        audit.cut = cuts::coalition_cut(game, coalition, sol, rays);
      } catch (const PointNotInterior&) {
        continue;  // numerically on the boundary; nothing to separate
      }
      const auto decision = cuts::filter_cut(audit.cut, incumbent);
      audit.accepted = decision.accepted;
      audit.reject_reason = decision.reason;
      if (decision.accepted) {
        master.add_row(audit.cut.coefficients, RowSense::GreaterEqual, audit.cut.rhs);
        ++cuts_added;
      }
      result.cut_log.push_back(std::move(audit));
    }
    record.cuts_added = cuts_added;
    result.trajectory.rows.push_back(record);
    if (cuts_added == 0) {
      // No usable separation at this vertex: report the stall rather than
      // spinning on an unchanged relaxation.
      result.stalled = true;
      result.status = RunStatus::IterationCap;
      return result;
    }
    sol = lp::solve(master);
  }
  result.status = RunStatus::IterationCap;
  return result;
}

}  // namespace corecut::opt

#endif  // CORECUT_OPTIMIZER_HPP
