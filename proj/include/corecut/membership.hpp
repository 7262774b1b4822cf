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

#ifndef CORECUT_MEMBERSHIP_HPP
#define CORECUT_MEMBERSHIP_HPP

// Least-objection search: the strongest guaranteed improvement any coalition
// can offer against an incumbent utility allocation.  Solved exactly by
// branch and bound on the binary membership indicators; node relaxations use
// per-player big-M deactivation, and fixed members get the indicator row
// enforced directly.  A zero additive least objection certifies that the
// incumbent cannot be blocked.
//
// The multiplicative variant maximizes the least utility *ratio* and, for
// numerical sanity, only accepts coalitions whose members all gain at least
// an additive floor (default 1e-3).
//
// Search budgets are metered in simplex pivots, converted from seconds at a
// fixed rate, so that runs are reproducible; wall time is reported but never
// steers the search.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "corecut/errors.hpp"
#include "corecut/game.hpp"
#include "corecut/linear_program.hpp"
#include "corecut/simplex.hpp"

namespace corecut::membership {

enum class ObjectionKind : std::uint8_t { Additive, Multiplicative };

struct ObjectionMode {
  ObjectionKind kind = ObjectionKind::Additive;
  double floor = 1e-3;  // minimum accepted additive gain in Multiplicative runs
};

struct Objection {
  double epsilon = 0.0;
  Coalition coalition;
  DesignPlan plan;
  Vec utilities;  // restricted to coalition members, in member order
};

/// Blocking coalitions seen so far, with the last objection value observed.
/// Deterministic iteration order (sorted by coalition).
class CoalitionPool {
 public:
  void add(const Coalition& coalition, double epsilon) {
    auto [it, inserted] = entries_.emplace(coalition, epsilon);
    if (!inserted) it->second = epsilon;
  }
  bool contains(const Coalition& coalition) const { return entries_.count(coalition) > 0; }
  std::size_t size() const { return entries_.size(); }
  const std::map<Coalition, double>& entries() const { return entries_; }

 private:
  std::map<Coalition, double> entries_;
};

struct SearchStats {
  long nodes = 0;
  long lp_pivots = 0;
  long work_units = 0;  // sum over solves of pivots * (rows + columns)
  double wall_seconds = 0.0;
  bool timed_out = false;
  bool exact = true;  // true when the tree was exhausted within budget
};

struct LeastObjectionResult {
  Objection objection;
  SearchStats stats;
};

/// Time budgets convert to a deterministic work budget: one unit is one
/// simplex pivot weighted by the LP's rows-plus-columns size, so the meter
/// tracks wall time across problem scales without depending on it.
inline constexpr double kWorkUnitsPerSecond = 3.5e6;

struct UtilityBounds {
  Vec lower;  // min of v_i . x over X(N)
  Vec upper;  // max of v_i . x over X(N)
};

inline UtilityBounds utility_bounds(const Game& game) {
  UtilityBounds bounds;
  const int n = game.num_players();
  bounds.lower.resize(static_cast<std::size_t>(n));
  bounds.upper.resize(static_cast<std::size_t>(n));
  const auto system = design_space(game, Coalition::full(n));
  for (int i = 0; i < n; ++i) {
    const auto max_sol = lp::solve(LinearProgram(system, true, game.valuation_d(i)));
    const auto min_sol = lp::solve(LinearProgram(system, false, game.valuation_d(i)));
    if (max_sol.status != LpStatus::Optimal || min_sol.status != LpStatus::Optimal)
      throw Error("grand design space must be nonempty and bounded");
    bounds.upper[static_cast<std::size_t>(i)] = max_sol.objective_value;
    bounds.lower[static_cast<std::size_t>(i)] = min_sol.objective_value;
  }
  return bounds;
}

/// Stand-alone optimum of each player: max v_i . x over X({i}).
inline Vec singleton_lower_bounds(const Game& game) {
  Vec out(static_cast<std::size_t>(game.num_players()));
  for (int i = 0; i < game.num_players(); ++i) {
    const auto system = design_space(game, Coalition({i}));
    const auto sol = lp::solve(LinearProgram(system, true, game.valuation_d(i)));
    if (sol.status != LpStatus::Optimal) throw Error("singleton design space must be bounded");
    out[static_cast<std::size_t>(i)] = sol.objective_value;
  }
  return out;
}

/// Best guaranteed objection of one fixed coalition: the indicator-form
/// program with every member enforced directly.  Returns nullopt when the
/// multiplicative floor makes it infeasible.
inline std::optional<Objection> coalition_objection(const Game& game, const Coalition& coalition,
                                                    const Vec& u_star, const ObjectionMode& mode,
                                                    SearchStats* stats = nullptr) {
  const int J = game.num_goods();
  const int vars = J + 1;  // (x, t)
  LinearProgram lp;
  lp.maximize = true;
  lp.objective.assign(static_cast<std::size_t>(vars), 0.0);
  lp.objective[static_cast<std::size_t>(J)] = 1.0;
  lp.lower.assign(static_cast<std::size_t>(vars), 0.0);
  lp.upper.assign(static_cast<std::size_t>(vars), kInf);
  lp.lower[static_cast<std::size_t>(J)] = -kInf;
  const Vec budget = pooled_endowment_d(game, coalition);
  for (int k = 0; k < game.num_resources(); ++k) {
    Vec row(static_cast<std::size_t>(vars), 0.0);
    for (int j = 0; j < J; ++j) row[static_cast<std::size_t>(j)] = game.production_d()[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)];
    lp.add_row(std::move(row), RowSense::LessEqual, budget[static_cast<std::size_t>(k)]);
  }
  for (int i : coalition.members()) {
    const Vec& v = game.valuation_d(i);
    if (mode.kind == ObjectionKind::Additive) {
      Vec row(static_cast<std::size_t>(vars), 0.0);
      for (int j = 0; j < J; ++j) row[static_cast<std::size_t>(j)] = -v[static_cast<std::size_t>(j)];
      row[static_cast<std::size_t>(J)] = 1.0;
      lp.add_row(std::move(row), RowSense::LessEqual, -u_star[static_cast<std::size_t>(i)]);
    } else {
      Vec ratio(static_cast<std::size_t>(vars), 0.0);
      for (int j = 0; j < J; ++j) ratio[static_cast<std::size_t>(j)] = -v[static_cast<std::size_t>(j)] / u_star[static_cast<std::size_t>(i)];
      ratio[static_cast<std::size_t>(J)] = 1.0;
      lp.add_row(std::move(ratio), RowSense::LessEqual, 0.0);
      Vec floor_row(static_cast<std::size_t>(vars), 0.0);
      for (int j = 0; j < J; ++j) floor_row[static_cast<std::size_t>(j)] = -v[static_cast<std::size_t>(j)];
      lp.add_row(std::move(floor_row), RowSense::LessEqual, -(u_star[static_cast<std::size_t>(i)] + mode.floor));
    }
  }
  const auto sol = lp::solve(lp);
  if (stats) {
    stats->lp_pivots += sol.iterations;
    stats->work_units += sol.iterations * (lp.num_rows() + lp.num_vars());
  }
  if (sol.status == LpStatus::Infeasible) return std::nullopt;
  if (sol.status != LpStatus::Optimal) throw Error("coalition objection LP failed");
  Objection out;
  out.epsilon = sol.objective_value;
  out.coalition = coalition;
  out.plan.x.assign(sol.x.begin(), sol.x.begin() + J);
  for (int i : coalition.members()) out.utilities.push_back(evaluate_utility(game, i, out.plan));
  return out;
}

namespace detail {

struct Node {
  std::vector<std::int8_t> fixed;  // -1 free, 0 out, 1 in
};

/// Relaxation of the indicator program at a branch-and-bound node.  Free
/// indicators relax to [0,1] with per-player big-M deactivation; fixed
/// members get the direct row, fixed non-members none.
struct NodeLp {
  LinearProgram lp;
  std::vector<int> y_var;  // per player: LP column of the relaxed indicator, or -1
  int eps_var = 0;
};

inline NodeLp build_node_lp(const Game& game, const Vec& u_star, const ObjectionMode& mode,
                            const UtilityBounds& bounds, const Vec& big_m, double eps_cap,
                            const std::vector<std::int8_t>& fixed) {
  const int J = game.num_goods();
  const int N = game.num_players();
  NodeLp node;
  node.y_var.assign(static_cast<std::size_t>(N), -1);
  int vars = 1 + J + N;
  for (int i = 0; i < N; ++i)
    if (fixed[static_cast<std::size_t>(i)] < 0) node.y_var[static_cast<std::size_t>(i)] = vars++;

  LinearProgram& lp = node.lp;
  lp.maximize = true;
  lp.objective.assign(static_cast<std::size_t>(vars), 0.0);
  lp.objective[0] = 1.0;
  lp.lower.assign(static_cast<std::size_t>(vars), 0.0);
  lp.upper.assign(static_cast<std::size_t>(vars), kInf);
  lp.lower[0] = -kInf;
  lp.upper[0] = eps_cap + 1e-6;  // no coalition can exceed the global cap
  for (int i = 0; i < N; ++i) {
    lp.lower[static_cast<std::size_t>(1 + J + i)] = bounds.lower[static_cast<std::size_t>(i)];
    lp.upper[static_cast<std::size_t>(1 + J + i)] = bounds.upper[static_cast<std::size_t>(i)];
  }
  for (int i = 0; i < N; ++i)
    if (node.y_var[static_cast<std::size_t>(i)] >= 0)
      lp.upper[static_cast<std::size_t>(node.y_var[static_cast<std::size_t>(i)])] = 1.0;

  // Budget rows: A x <= sum_i b_i y_i with fixed indicators folded into the rhs.
  for (int k = 0; k < game.num_resources(); ++k) {
    Vec row(static_cast<std::size_t>(vars), 0.0);
    double rhs = 0.0;
    for (int j = 0; j < J; ++j) row[static_cast<std::size_t>(1 + j)] = game.production_d()[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)];
    for (int i = 0; i < N; ++i) {
      const double bik = game.endowment_d(i)[static_cast<std::size_t>(k)];
      if (fixed[static_cast<std::size_t>(i)] == 1) rhs += bik;
      else if (fixed[static_cast<std::size_t>(i)] < 0) row[static_cast<std::size_t>(node.y_var[static_cast<std::size_t>(i)])] = -bik;
    }
    lp.add_row(std::move(row), RowSense::LessEqual, rhs);
  }
  // Coupling rows for every player.
  for (int i = 0; i < N; ++i) {
    Vec row(static_cast<std::size_t>(vars), 0.0);
    for (int j = 0; j < J; ++j) row[static_cast<std::size_t>(1 + j)] = -game.valuation_d(i)[static_cast<std::size_t>(j)];
    row[static_cast<std::size_t>(1 + J + i)] = 1.0;
    lp.add_row(std::move(row), RowSense::LessEqual, 0.0);
  }
  // Objection rows.
  const bool multiplicative = mode.kind == ObjectionKind::Multiplicative;
  for (int i = 0; i < N; ++i) {
    if (fixed[static_cast<std::size_t>(i)] == 0) continue;
    const double us = u_star[static_cast<std::size_t>(i)];
    const double u_coef = multiplicative ? 1.0 / us : 1.0;
    if (fixed[static_cast<std::size_t>(i)] == 1) {
      Vec row(static_cast<std::size_t>(vars), 0.0);
      row[0] = 1.0;
      row[static_cast<std::size_t>(1 + J + i)] = -u_coef;
      lp.add_row(std::move(row), RowSense::LessEqual, multiplicative ? 0.0 : -us);
    } else {
      // eps <= u_coef * u_i - target * y_i + M_i (1 - y_i)
      const double target = multiplicative ? 0.0 : us;
      const double m = big_m[static_cast<std::size_t>(i)];
      Vec row(static_cast<std::size_t>(vars), 0.0);
      row[0] = 1.0;
      row[static_cast<std::size_t>(1 + J + i)] = -u_coef;
      row[static_cast<std::size_t>(node.y_var[static_cast<std::size_t>(i)])] = target + m;
      lp.add_row(std::move(row), RowSense::LessEqual, m);
    }
  }
  // Multiplicative runs also require the additive floor of every member.
  if (multiplicative) {
    for (int i = 0; i < N; ++i) {
      if (fixed[static_cast<std::size_t>(i)] == 0) continue;
      const double us = u_star[static_cast<std::size_t>(i)];
      const double li = bounds.lower[static_cast<std::size_t>(i)];
      if (fixed[static_cast<std::size_t>(i)] == 1) {
        Vec row(static_cast<std::size_t>(vars), 0.0);
        row[static_cast<std::size_t>(1 + J + i)] = -1.0;
        lp.add_row(std::move(row), RowSense::LessEqual, -(us + mode.floor));
      } else {
        Vec row(static_cast<std::size_t>(vars), 0.0);
        row[static_cast<std::size_t>(1 + J + i)] = -1.0;
        row[static_cast<std::size_t>(node.y_var[static_cast<std::size_t>(i)])] = us + mode.floor - li;
        lp.add_row(std::move(row), RowSense::LessEqual, -li);
      }
    }
  }
  // Nonempty coalition.
  bool any_fixed_in = false;
  for (int i = 0; i < N; ++i) any_fixed_in |= (fixed[static_cast<std::size_t>(i)] == 1);
  if (!any_fixed_in) {
    Vec row(static_cast<std::size_t>(vars), 0.0);
    bool any_free = false;
    for (int i = 0; i < N; ++i)
      if (node.y_var[static_cast<std::size_t>(i)] >= 0) {
        row[static_cast<std::size_t>(node.y_var[static_cast<std::size_t>(i)])] = 1.0;
        any_free = true;
      }
    if (any_free) lp.add_row(std::move(row), RowSense::GreaterEqual, 1.0);
  }
  return node;
}

/// Total order on incumbents: larger objection wins, ties to the
/// lexicographically smaller coalition.
inline bool improves(const std::optional<Objection>& incumbent, const Objection& candidate) {
  if (!incumbent) return true;
  if (candidate.epsilon > incumbent->epsilon + 1e-12) return true;
  if (candidate.epsilon < incumbent->epsilon - 1e-12) return false;
  return candidate.coalition < incumbent->coalition;
}

}  // namespace detail

/// Per-good combinatorial screen: sorts players by valuation of the good
/// (ties to the lower incumbent utility, then index), scans prefix
/// coalitions assuming the pooled budget funds that good alone, and keeps
/// each good's best prefix when its least objection is nonnegative.
inline std::vector<Coalition> prefix_heuristic(const Game& game, const UtilityVector& u_star) {
  const int J = game.num_goods();
  const int N = game.num_players();
  if (static_cast<int>(u_star.u.size()) != N) throw DimensionMismatch("utility vector length != player count");
  std::vector<Coalition> out;
  for (int j = 0; j < J; ++j) {
    std::vector<int> order(static_cast<std::size_t>(N));
    for (int i = 0; i < N; ++i) order[static_cast<std::size_t>(i)] = i;
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      const double va = game.valuation_d(a)[static_cast<std::size_t>(j)];
      const double vb = game.valuation_d(b)[static_cast<std::size_t>(j)];
      if (va != vb) return va > vb;
      const double ua = u_star.u[static_cast<std::size_t>(a)], ub = u_star.u[static_cast<std::size_t>(b)];
      if (ua != ub) return ua < ub;
      return a < b;
    });
    double best_value = -kInf;
    int best_len = 0;
    Vec budget(static_cast<std::size_t>(game.num_resources()), 0.0);
    for (int c = 0; c < N; ++c) {
      const int player = order[static_cast<std::size_t>(c)];
      for (int k = 0; k < game.num_resources(); ++k)
        budget[static_cast<std::size_t>(k)] += game.endowment_d(player)[static_cast<std::size_t>(k)];
      // Max production of good j from this budget alone.
      double prod = kInf;
      for (int k = 0; k < game.num_resources(); ++k) {
        const double a = game.production_d()[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)];
        if (a > 1e-12) prod = std::min(prod, budget[static_cast<std::size_t>(k)] / a);
      }
      if (prod == kInf || prod < 0.0) continue;
      double least = kInf;
      for (int c2 = 0; c2 <= c; ++c2) {
        const int i = order[static_cast<std::size_t>(c2)];
        least = std::min(least, game.valuation_d(i)[static_cast<std::size_t>(j)] * prod - u_star.u[static_cast<std::size_t>(i)]);
      }
      if (least > best_value + 1e-12) {
        best_value = least;
        best_len = c + 1;
      }
    }
    if (best_len > 0 && best_value >= -1e-12) {
      std::vector<int> members(order.begin(), order.begin() + best_len);
      Coalition coalition(std::move(members));
      bool seen = false;
      for (const auto& existing : out) seen |= (existing == coalition);
      if (!seen) out.push_back(std::move(coalition));
    }
  }
  return out;
}

/// Exact maximum least objection over all nonempty coalitions, by branch and
/// bound on the membership indicators.  Within budget the result is exact;
/// on budget exhaustion the best incumbent is returned flagged as a lower
/// bound.  The warm-start pool and the prefix heuristic seed the incumbent.
inline LeastObjectionResult least_objection(const Game& game, const UtilityVector& u_star,
                                            const ObjectionMode& mode,
                                            const CoalitionPool* pool = nullptr,
                                            double budget_seconds = 300.0) {
  const int N = game.num_players();
  if (static_cast<int>(u_star.u.size()) != N) throw DimensionMismatch("utility vector length != player count");
  if (mode.kind == ObjectionKind::Multiplicative) {
    if (mode.floor <= 0.0) throw Error("multiplicative mode requires a positive additive floor");
    for (int i = 0; i < N; ++i)
      if (u_star.u[static_cast<std::size_t>(i)] <= 0.0)
        throw NonPositiveIncumbentUtility("multiplicative objection needs u*_i > 0 for every player");
  }

  const auto start = std::chrono::steady_clock::now();
  const long work_budget = static_cast<long>(budget_seconds * kWorkUnitsPerSecond);
  SearchStats stats;
  const auto bounds = utility_bounds(game);

  // Global cap on the objection value, and per-player deactivation constants
  // sized so a disabled row can never bind below that cap.
  double eps_cap = mode.kind == ObjectionKind::Additive ? 0.0 : 1.0;
  for (int i = 0; i < N; ++i) {
    const double ui = u_star.u[static_cast<std::size_t>(i)];
    const double gain = mode.kind == ObjectionKind::Additive
                            ? bounds.upper[static_cast<std::size_t>(i)] - ui
                            : bounds.upper[static_cast<std::size_t>(i)] / ui;
    eps_cap = std::max(eps_cap, gain);
  }
  Vec big_m(static_cast<std::size_t>(N));
  for (int i = 0; i < N; ++i) {
    const double ui = u_star.u[static_cast<std::size_t>(i)];
    const double li = bounds.lower[static_cast<std::size_t>(i)];
    big_m[static_cast<std::size_t>(i)] =
        mode.kind == ObjectionKind::Additive ? eps_cap - li : eps_cap - li / ui;
  }

  std::optional<Objection> incumbent;
  const Coalition grand = Coalition::full(N);

  // Baseline: the grand coalition evaluated directly.  In additive mode its
  // value is >= 0 whenever u* is actually achievable.
  if (auto baseline = coalition_objection(game, grand, u_star.u, mode, &stats)) {
    incumbent = std::move(*baseline);
  } else {
    // Multiplicative floor unreachable even for the grand coalition: the
    // baseline objection is the do-nothing ratio of one.
    ObjectionMode additive{ObjectionKind::Additive, mode.floor};
    auto witness = coalition_objection(game, grand, u_star.u, additive, &stats);
    Objection base;
    base.epsilon = 1.0;
    base.coalition = grand;
    if (witness) base.plan = witness->plan;
    base.utilities.assign(u_star.u.begin(), u_star.u.end());
    incumbent = std::move(base);
  }

  // Warm starts: pool coalitions, then the prefix screen.
  std::vector<Coalition> seeds;
  if (pool)
    for (const auto& [coalition, eps] : pool->entries()) seeds.push_back(coalition);
  for (auto& c : prefix_heuristic(game, u_star)) seeds.push_back(std::move(c));
  for (const auto& seed : seeds) {
    if (seed.members().back() >= N) continue;
    if (auto objection = coalition_objection(game, seed, u_star.u, mode, &stats)) {
      if (detail::improves(incumbent, *objection)) incumbent = std::move(*objection);
    }
  }

  // Depth-first search; the y=1 child is explored first.
  std::vector<detail::Node> stack;
  stack.push_back(detail::Node{std::vector<std::int8_t>(static_cast<std::size_t>(N), -1)});
  while (!stack.empty()) {
    if (stats.work_units > work_budget) {
      stats.timed_out = true;
      stats.exact = false;
      break;
    }
    const detail::Node node = std::move(stack.back());
    stack.pop_back();
    ++stats.nodes;
    const auto node_lp = detail::build_node_lp(game, u_star.u, mode, bounds, big_m, eps_cap, node.fixed);
    const auto sol = lp::solve(node_lp.lp);
    stats.lp_pivots += sol.iterations;
    stats.work_units += sol.iterations * (node_lp.lp.num_rows() + node_lp.lp.num_vars());
    if (sol.status == LpStatus::Infeasible) continue;
    if (sol.status != LpStatus::Optimal) throw Error("membership node relaxation failed");
    if (incumbent && sol.objective_value <= incumbent->epsilon + 1e-9) continue;

    // Branch on the largest fractional indicator; ties to the lowest index.
    int branch = -1;
    double branch_value = -1.0;
    for (int i = 0; i < N; ++i) {
      const int var = node_lp.y_var[static_cast<std::size_t>(i)];
      if (var < 0) continue;
      const double y = sol.x[static_cast<std::size_t>(var)];
      if (std::min(y, 1.0 - y) <= 1e-6) continue;
      if (y > branch_value + 1e-12) {
        branch_value = y;
        branch = i;
      }
    }
    if (branch < 0) {
      // Integral relaxation: adopt the induced coalition via a clean solve.
      std::vector<int> members;
      for (int i = 0; i < N; ++i) {
        const int var = node_lp.y_var[static_cast<std::size_t>(i)];
        const bool in = (node.fixed[static_cast<std::size_t>(i)] == 1) ||
                        (var >= 0 && sol.x[static_cast<std::size_t>(var)] > 0.5);
        if (in) members.push_back(i);
      }
      if (members.empty()) continue;
      const Coalition coalition(std::move(members));
      if (auto objection = coalition_objection(game, coalition, u_star.u, mode, &stats)) {
        if (detail::improves(incumbent, *objection)) incumbent = std::move(*objection);
      }
      continue;
    }
    detail::Node out_child = node;
    out_child.fixed[static_cast<std::size_t>(branch)] = 0;
    detail::Node in_child = node;
    in_child.fixed[static_cast<std::size_t>(branch)] = 1;
    stack.push_back(std::move(out_child));
    stack.push_back(std::move(in_child));
  }

  LeastObjectionResult result;
  result.objection = std::move(*incumbent);
  stats.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  result.stats = stats;
  return result;
}

/// True when the objection certifies core membership at the mode's floor.
inline bool certifies_membership(const Objection& objection, const ObjectionMode& mode) {
  return mode.kind == ObjectionKind::Additive ? objection.epsilon <= mode.floor
                                              : objection.epsilon <= 1.0 + mode.floor;
}

}  // namespace corecut::membership

#endif  // CORECUT_MEMBERSHIP_HPP
