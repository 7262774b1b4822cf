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

#ifndef CORECUT_CUTS_HPP
#define CORECUT_CUTS_HPP

// Intersection cuts.  At an extreme point of the master relaxation that some
// coalition can block, each tableau ray is traced until it exits the
// coalition's utility set; the reciprocal step lengths give a valid
// inequality that separates the vertex.  Step lengths against an explicitly
// given row system reduce to a ratio test; against a coalition's utility set
// (which is a projection, with no explicit row description) the step length
// is itself a small LP with the coalition plan as witness.  Cuts are always
// generated in the full design-utility space, never in a projection: the
// builder consumes rays of the master tableau only.
//
// The hygiene filters drop cuts with extreme coefficients, shallow cuts, and
// replayed cuts whose source coalition overlaps the incumbent one.

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "corecut/errors.hpp"
#include "corecut/game.hpp"
#include "corecut/linear_program.hpp"
#include "corecut/simplex.hpp"

namespace corecut::cuts {

inline constexpr double kInteriorTol = 1e-9;
inline constexpr double kMinDepth = 1e-7;
inline constexpr double kMaxCoefficient = 1e6;
inline constexpr double kMinCoefficient = 1e-6;
inline constexpr double kMaxRange = 1e6;

struct CutStats {
  double min_abs_coef = 0.0;
  double max_abs_coef = 0.0;
  double range_ratio = 1.0;
};

struct CutRecord {
  Vec coefficients;   // over the master's structural variables
  double rhs = 0.0;   // sense: coefficients . z >= rhs
  Coalition source;
  double depth = 0.0;  // distance from the generating vertex to the cut plane
  CutStats stats;
  Vec generated_at;
};

/// Step length along `ray` from `point` until the explicit row system is
/// exited: max { l >= 0 : point + l ray satisfies every row }.  A
/// one-variable LP solved as a ratio test.  Rows and finite bounds both
/// participate; the point must be strictly interior.
inline double compute_lambda(const Vec& point, const Vec& ray, const ConstraintSystem& set) {
  if (static_cast<int>(point.size()) != set.num_vars || ray.size() != point.size())
    throw DimensionMismatch("point/ray length does not match the constraint system");
  double lambda = kInf;
  auto tighten = [&lambda](double slack, double rate) {
    // slack > 0 available, consumed at `rate` per unit step when rate > 0.
    if (slack < kInteriorTol) throw PointNotInterior("point is not strictly interior to the set");
    if (rate > kInteriorTol) lambda = std::min(lambda, slack / rate);
  };
  for (const auto& row : set.rows) {
    double act = 0.0, rate = 0.0;
    for (std::size_t j = 0; j < point.size(); ++j) {
      act += row.coeffs[j] * point[j];
      rate += row.coeffs[j] * ray[j];
    }
    switch (row.sense) {
      case RowSense::LessEqual: tighten(row.rhs - act, rate); break;
      case RowSense::GreaterEqual: tighten(act - row.rhs, -rate); break;
      case RowSense::Equal: throw PointNotInterior("equality rows have empty interior");
    }
  }
  for (std::size_t j = 0; j < point.size(); ++j) {
    if (set.lower[j] > -kInf) tighten(point[j] - set.lower[j], -ray[j]);
    if (set.upper[j] < kInf) tighten(set.upper[j] - point[j], ray[j]);
  }
  return lambda;
}

/// Step length until the ray exits a coalition's lifted utility set: the set
/// is cylindrical in everything but the members' utility coordinates, so the
/// exit is governed by max { l >= 0 : exists plan in X(S) covering
/// u + l r }.  Solved as an LP in (plan, l); +inf when the ray never exits.
inline double coalition_exit_length(const Game& game, const Coalition& coalition,
                                    const Vec& point_u, const Vec& ray_u) {
  const int J = game.num_goods();
  if (static_cast<int>(point_u.size()) != game.num_players() || ray_u.size() != point_u.size())
    throw DimensionMismatch("utility point/ray length does not match the player count");
  // Fast path: a ray that never raises any member utility stays inside.
  bool raises = false;
  for (int i : coalition.members()) raises |= ray_u[static_cast<std::size_t>(i)] > 1e-12;
  if (!raises) return kInf;

  const int vars = J + 1;  // (x', lambda)
  LinearProgram lp;
  lp.maximize = true;
  lp.objective.assign(static_cast<std::size_t>(vars), 0.0);
  lp.objective[static_cast<std::size_t>(J)] = 1.0;
  lp.lower.assign(static_cast<std::size_t>(vars), 0.0);
  lp.upper.assign(static_cast<std::size_t>(vars), kInf);
  const Vec budget = pooled_endowment_d(game, coalition);
  for (int k = 0; k < game.num_resources(); ++k) {
    Vec row(static_cast<std::size_t>(vars), 0.0);
    for (int j = 0; j < J; ++j) row[static_cast<std::size_t>(j)] = game.production_d()[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)];
    lp.add_row(std::move(row), RowSense::LessEqual, budget[static_cast<std::size_t>(k)]);
  }
  for (int i : coalition.members()) {
    Vec row(static_cast<std::size_t>(vars), 0.0);
    for (int j = 0; j < J; ++j) row[static_cast<std::size_t>(j)] = -game.valuation_d(i)[static_cast<std::size_t>(j)];
    row[static_cast<std::size_t>(J)] = ray_u[static_cast<std::size_t>(i)];
    lp.add_row(std::move(row), RowSense::LessEqual, -point_u[static_cast<std::size_t>(i)]);
  }
  const auto sol = lp::solve(lp);
  if (sol.status == LpStatus::Unbounded) return kInf;
  if (sol.status == LpStatus::Infeasible)
    throw PointNotInterior("utility point is not inside the coalition's utility set");
  return sol.objective_value;
}

/// Assembles the intersection cut sum_r f_r / lambda_r >= 1 over the rays of
/// the master tableau, substituting each nonbasic displacement by its affine
/// expression in the structural variables.  Rays with infinite step length
/// contribute nothing (1/inf = 0).
inline CutRecord build_intersection_cut(const BasicSolution& solution, const TableauRays& rays,
                                        const Vec& lambdas, Coalition source) {
  if (lambdas.size() != rays.rays.size())
    throw DimensionMismatch("one step length per ray is required");
  const std::size_t n = solution.x.size();
  bool any_finite = false;
  for (double l : lambdas) any_finite |= (l < kInf);
  if (!any_finite)
    throw AllRaysInterior("every ray stays interior; the vertex cannot be separated");

  CutRecord cut;
  cut.source = std::move(source);
  cut.coefficients.assign(n, 0.0);
  double rhs = 1.0;
  for (std::size_t r = 0; r < lambdas.size(); ++r) {
    const double l = lambdas[r];
    if (!(l > 0.0))
      throw PointNotInterior("zero step length: the vertex lies on the set's boundary");
    if (l == kInf) continue;
    const double w = 1.0 / l;
    const auto& ray = rays.rays[r];
    for (std::size_t j = 0; j < n; ++j) cut.coefficients[j] += w * ray.expr_coeffs[j];
    rhs -= w * ray.expr_const;
  }
  cut.rhs = rhs;
  cut.generated_at = solution.x;

  // Cancellation noise must not masquerade as a genuine small coefficient:
  // entries negligible against the largest one are exactly zero.
  double peak = 0.0;
  for (double c : cut.coefficients) peak = std::max(peak, std::abs(c));
  for (double& c : cut.coefficients)
    if (std::abs(c) < std::max(1e-12, 1e-9 * peak)) c = 0.0;

  double norm = 0.0, min_abs = kInf, max_abs = 0.0;
  for (double c : cut.coefficients) {
    norm += c * c;
    const double a = std::abs(c);
    if (a > 0.0) {
      min_abs = std::min(min_abs, a);
      max_abs = std::max(max_abs, a);
    }
  }
  norm = std::sqrt(norm);
  if (norm < 1e-300) throw AllRaysInterior("cut degenerated to an empty inequality");
  double violation = cut.rhs;
  for (std::size_t j = 0; j < n; ++j) violation -= cut.coefficients[j] * solution.x[j];
  cut.depth = violation / norm;
  cut.stats.min_abs_coef = (min_abs == kInf) ? 0.0 : min_abs;
  cut.stats.max_abs_coef = max_abs;
  cut.stats.range_ratio = (min_abs == kInf || min_abs == 0.0) ? 1.0 : max_abs / min_abs;
  return cut;
}

/// One blocking coalition's cut at the current master vertex.  Structural
/// layout convention: goods first, then one utility coordinate per player,
/// then any extension variables (all cylindrical for the coalition's set).
inline CutRecord coalition_cut(const Game& game, const Coalition& source,
                               const BasicSolution& solution, const TableauRays& rays) {
  const int J = game.num_goods();
  const int N = game.num_players();
  if (static_cast<int>(solution.x.size()) < J + N)
    throw DimensionMismatch("master solution lacks the design-utility layout");
  Vec point_u(solution.x.begin() + J, solution.x.begin() + J + N);
  Vec lambdas(rays.rays.size(), kInf);
  for (std::size_t r = 0; r < rays.rays.size(); ++r) {
    Vec ray_u(rays.rays[r].direction.begin() + J, rays.rays[r].direction.begin() + J + N);
    lambdas[r] = coalition_exit_length(game, source, point_u, ray_u);
  }
  return build_intersection_cut(solution, rays, lambdas, source);
}

struct FilterDecision {
  bool accepted = false;
  std::string reason;  // empty when accepted
};

/// Hygiene gate.  Replayed cuts whose source overlaps the incumbent blocking
/// coalition are dropped; the incumbent's own cut is exempt from that rule.
inline FilterDecision filter_cut(const CutRecord& cut, const Coalition& incumbent,
                                 double min_depth = kMinDepth) {
  if (cut.stats.max_abs_coef > kMaxCoefficient) return {false, "coefficient above 1e6"};
  if (cut.stats.min_abs_coef > 0.0 && cut.stats.min_abs_coef < kMinCoefficient)
    return {false, "coefficient below 1e-6"};
  if (cut.stats.range_ratio > kMaxRange) return {false, "coefficient range above 1e6"};
  if (!(cut.source == incumbent) && cut.source.intersects(incumbent))
    return {false, "source coalition overlaps the incumbent"};
  if (cut.depth < min_depth) return {false, "cut too shallow"};
  return {true, ""};
}

}  // namespace corecut::cuts

#endif  // CORECUT_CUTS_HPP
