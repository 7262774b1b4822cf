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

#ifndef CORECUT_GAME_HPP
#define CORECUT_GAME_HPP

// Data model for non-transferable-utility linear production games.
//
// A game is a production matrix A (resources x goods), one resource
// endowment vector per player, and one linear good-valuation vector per
// player.  A coalition pools endowments additively; its design space is
// X(S) = { x >= 0 : A x <= b(S) } and its design-utility space couples
// member utilities to the plan through u_i <= v_i . x.  Data is exact
// (rationals); solving happens in doubles.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "corecut/errors.hpp"
#include "corecut/linear_program.hpp"
#include "corecut/rational.hpp"
#include "corecut/simplex.hpp"

namespace corecut {

using RationalVec = std::vector<Rational>;
using RationalMatrix = std::vector<RationalVec>;

/// Nonempty subset of players, kept sorted and deduplicated.
class Coalition {
 public:
  Coalition() = default;
  explicit Coalition(std::vector<int> members) : members_(std::move(members)) {
    std::sort(members_.begin(), members_.end());
    members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
    if (members_.empty()) throw EmptyCoalition();
    if (members_.front() < 0) throw Error("negative player index in coalition");
  }

  static Coalition full(int players) {
    std::vector<int> all(static_cast<std::size_t>(players));
    for (int i = 0; i < players; ++i) all[static_cast<std::size_t>(i)] = i;
    return Coalition(std::move(all));
  }

  static Coalition from_mask(std::uint64_t mask) {
    std::vector<int> members;
    for (int i = 0; mask != 0; ++i, mask >>= 1)
      if (mask & 1u) members.push_back(i);
    return Coalition(std::move(members));
  }

  const std::vector<int>& members() const { return members_; }
  int size() const { return static_cast<int>(members_.size()); }
  bool contains(int player) const {
    return std::binary_search(members_.begin(), members_.end(), player);
  }
  bool intersects(const Coalition& other) const {
    for (int i : members_)
      if (other.contains(i)) return true;
    return false;
  }

  friend bool operator==(const Coalition& a, const Coalition& b) { return a.members_ == b.members_; }
  friend bool operator<(const Coalition& a, const Coalition& b) { return a.members_ < b.members_; }

  std::string str() const {
    std::string out = "{";
    for (std::size_t k = 0; k < members_.size(); ++k) {
      if (k) out += ",";
      out += std::to_string(members_[k]);
    }
    return out + "}";
  }

 private:
  std::vector<int> members_;
};

struct DesignPlan {
  Vec x;
};

struct UtilityVector {
  Vec u;
};

enum class BalanceMode : std::uint8_t { Nonneg, DualConeGrand, DualConeAll };

struct BalanceWitness {
  int player = -1;
  Coalition coalition;
  Vec direction;  // a design-space direction on which the player's valuation is negative
};

struct BalancednessVerdict {
  enum class Status : std::uint8_t { GuaranteedNonEmpty, Inconclusive } status = Status::Inconclusive;
  std::vector<BalanceWitness> witnesses;
  std::string note;
  bool guaranteed() const { return status == Status::GuaranteedNonEmpty; }
};

/// Immutable game instance.  Construction verifies that every single-player
/// design space is nonempty and bounded (one feasibility solve plus one
/// coordinate-max solve per good, cached).
class Game {
 public:
  Game(RationalMatrix production, std::vector<RationalVec> endowments,
       std::vector<RationalVec> valuations, std::vector<std::string> labels = {})
      : production_(std::move(production)), endowments_(std::move(endowments)),
        valuations_(std::move(valuations)), labels_(std::move(labels)) {
    resources_ = static_cast<int>(production_.size());
    goods_ = resources_ > 0 ? static_cast<int>(production_.front().size()) : 0;
    players_ = static_cast<int>(endowments_.size());
    if (players_ == 0) throw Error("game needs at least one player");
    if (resources_ == 0 || goods_ == 0) throw Error("game needs at least one resource and one good");
    for (const auto& row : production_)
      if (static_cast<int>(row.size()) != goods_) throw DimensionMismatch("ragged production matrix");
    if (static_cast<int>(valuations_.size()) != players_)
      throw DimensionMismatch("valuation count does not match player count");
    for (const auto& b : endowments_)
      if (static_cast<int>(b.size()) != resources_) throw DimensionMismatch("endowment length != resource count");
    for (const auto& v : valuations_)
      if (static_cast<int>(v.size()) != goods_) throw DimensionMismatch("valuation length != good count");
    if (!labels_.empty() && static_cast<int>(labels_.size()) != players_)
      throw DimensionMismatch("label count does not match player count");
    cache_doubles();
    check_design_spaces();
  }

  int num_players() const { return players_; }
  int num_resources() const { return resources_; }
  int num_goods() const { return goods_; }
  const RationalMatrix& production() const { return production_; }
  const std::vector<RationalVec>& endowments() const { return endowments_; }
  const std::vector<RationalVec>& valuations() const { return valuations_; }
  const std::vector<std::string>& labels() const { return labels_; }

  const std::vector<Vec>& production_d() const { return production_d_; }
  const Vec& endowment_d(int i) const { return endowments_d_[static_cast<std::size_t>(i)]; }
  const Vec& valuation_d(int i) const { return valuations_d_[static_cast<std::size_t>(i)]; }

  /// Cached per-player coordinate maxima over X({i}).
  double coordinate_max(int player, int good) const {
    return coord_max_[static_cast<std::size_t>(player)][static_cast<std::size_t>(good)];
  }

 private:
  void cache_doubles() {
    production_d_.assign(static_cast<std::size_t>(resources_), Vec(static_cast<std::size_t>(goods_)));
    for (int k = 0; k < resources_; ++k)
      for (int j = 0; j < goods_; ++j)
        production_d_[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)] =
            production_[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)].to_double();
    endowments_d_.assign(static_cast<std::size_t>(players_), Vec(static_cast<std::size_t>(resources_)));
    valuations_d_.assign(static_cast<std::size_t>(players_), Vec(static_cast<std::size_t>(goods_)));
    for (int i = 0; i < players_; ++i) {
      for (int k = 0; k < resources_; ++k)
        endowments_d_[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] =
            endowments_[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)].to_double();
      for (int j = 0; j < goods_; ++j)
        valuations_d_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
            valuations_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)].to_double();
    }
  }

  void check_design_spaces() {
    coord_max_.assign(static_cast<std::size_t>(players_), Vec(static_cast<std::size_t>(goods_), 0.0));
    for (int i = 0; i < players_; ++i) {
      LinearProgram lp;
      lp.maximize = true;
      lp.objective.assign(static_cast<std::size_t>(goods_), 0.0);
      lp.lower.assign(static_cast<std::size_t>(goods_), 0.0);
      lp.upper.assign(static_cast<std::size_t>(goods_), kInf);
      for (int k = 0; k < resources_; ++k)
        lp.add_row(production_d_[static_cast<std::size_t>(k)], RowSense::LessEqual,
                   endowments_d_[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)]);
      auto feas = lp::solve(lp);
      if (feas.status == LpStatus::Infeasible)
        throw Error("design space X({" + std::to_string(i) + "}) is empty");
      for (int j = 0; j < goods_; ++j) {
        lp.objective[static_cast<std::size_t>(j)] = 1.0;
        const auto sol = lp::solve(lp);
        lp.objective[static_cast<std::size_t>(j)] = 0.0;
        if (sol.status == LpStatus::Unbounded)
          throw Error("design space X({" + std::to_string(i) + "}) is unbounded in good " + std::to_string(j));
        coord_max_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = sol.objective_value;
      }
    }
  }

  RationalMatrix production_;
  std::vector<RationalVec> endowments_;
  std::vector<RationalVec> valuations_;
  std::vector<std::string> labels_;
  int players_ = 0, resources_ = 0, goods_ = 0;

  std::vector<Vec> production_d_;
  std::vector<Vec> endowments_d_;
  std::vector<Vec> valuations_d_;
  std::vector<Vec> coord_max_;
};

inline void require_subset(const Game& game, const Coalition& coalition) {
  if (coalition.members().back() >= game.num_players())
    throw Error("coalition member outside the player set");
}

/// b(S): exact componentwise sum of member endowments.
inline RationalVec pooled_endowment(const Game& game, const Coalition& coalition) {
  require_subset(game, coalition);
  RationalVec total(static_cast<std::size_t>(game.num_resources()), Rational(0));
  for (int i : coalition.members())
    for (int k = 0; k < game.num_resources(); ++k)
      total[static_cast<std::size_t>(k)] += game.endowments()[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)];
  return total;
}

inline Vec pooled_endowment_d(const Game& game, const Coalition& coalition) {
  const auto exact = pooled_endowment(game, coalition);
  Vec out(exact.size());
  for (std::size_t k = 0; k < exact.size(); ++k) out[k] = exact[k].to_double();
  return out;
}

/// u_i(x) = v_i . x.
inline double evaluate_utility(const Game& game, int player, const DesignPlan& plan) {
  if (static_cast<int>(plan.x.size()) != game.num_goods())
    throw DimensionMismatch("plan length does not match good count");
  double u = 0.0;
  const Vec& v = game.valuation_d(player);
  for (std::size_t j = 0; j < plan.x.size(); ++j) u += v[j] * plan.x[j];
  return u;
}

/// X(S) as an explicit system over the goods.
inline ConstraintSystem design_space(const Game& game, const Coalition& coalition) {
  require_subset(game, coalition);
  ConstraintSystem system(game.num_goods());
  const Vec b = pooled_endowment_d(game, coalition);
  for (int k = 0; k < game.num_resources(); ++k)
    system.add_row(game.production_d()[static_cast<std::size_t>(k)], RowSense::LessEqual, b[static_cast<std::size_t>(k)]);
  return system;
}

/// Z(S) over (x, u): budget rows of X(S) plus u_i - v_i.x <= 0 for members.
/// Utility coordinates of non-members stay unconstrained (cylindrical).
inline ConstraintSystem design_utility_space(const Game& game, const Coalition& coalition) {
  require_subset(game, coalition);
  const int J = game.num_goods(), N = game.num_players();
  ConstraintSystem system(J + N);
  for (int i = 0; i < N; ++i) system.set_bounds(J + i, -kInf, kInf);
  const Vec b = pooled_endowment_d(game, coalition);
  for (int k = 0; k < game.num_resources(); ++k) {
    Vec row(static_cast<std::size_t>(J + N), 0.0);
    for (int j = 0; j < J; ++j) row[static_cast<std::size_t>(j)] = game.production_d()[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)];
    system.add_row(std::move(row), RowSense::LessEqual, b[static_cast<std::size_t>(k)]);
  }
  for (int i : coalition.members()) {
    Vec row(static_cast<std::size_t>(J + N), 0.0);
    for (int j = 0; j < J; ++j) row[static_cast<std::size_t>(j)] = -game.valuation_d(i)[static_cast<std::size_t>(j)];
    row[static_cast<std::size_t>(J + i)] = 1.0;
    system.add_row(std::move(row), RowSense::LessEqual, 0.0);
  }
  return system;
}

namespace detail {

/// min v_i . x over X(S); nonnegative optimum certifies v_i in the dual cone.
inline std::pair<double, Vec> min_valuation_over(const Game& game, int player, const Coalition& coalition) {
  const auto system = design_space(game, coalition);
  LinearProgram lp(system, /*maximize=*/false, game.valuation_d(player));
  const auto sol = lp::solve(lp);
  if (sol.status == LpStatus::Unbounded) return {-kInf, Vec()};
  if (sol.status != LpStatus::Optimal) throw Error("design space unexpectedly infeasible");
  return {sol.objective_value, sol.x};
}

}  // namespace detail

/// Sufficient conditions for a nonempty core.
///
/// Nonneg: every valuation vector is elementwise nonnegative (exact check).
/// DualConeGrand: certifies v_i in the dual cone of X(N) by one LP per
/// player; this extends to all coalitions only when endowments are
/// nonnegative (then X(S) is contained in X(N)), otherwise Inconclusive.
/// DualConeAll: checks the dual cone of every coalition's design space;
/// exponential in the player count and therefore capped.
inline BalancednessVerdict check_balanced_sufficient(const Game& game, BalanceMode mode) {
  BalancednessVerdict verdict;
  const int N = game.num_players();
  switch (mode) {
    case BalanceMode::Nonneg: {
      for (int i = 0; i < N; ++i)
        for (int j = 0; j < game.num_goods(); ++j)
          if (game.valuations()[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] < Rational(0)) {
            BalanceWitness w;
            w.player = i;
            w.coalition = Coalition({i});
            w.direction.assign(static_cast<std::size_t>(game.num_goods()), 0.0);
            w.direction[static_cast<std::size_t>(j)] = 1.0;
            verdict.witnesses.push_back(std::move(w));
          }
      if (verdict.witnesses.empty()) {
        verdict.status = BalancednessVerdict::Status::GuaranteedNonEmpty;
      } else {
        verdict.note = "some valuation has a negative entry";
      }
      return verdict;
    }
    case BalanceMode::DualConeGrand: {
      bool endowments_nonneg = true;
      for (const auto& b : game.endowments())
        for (const auto& v : b)
          if (v < Rational(0)) endowments_nonneg = false;
      const Coalition grand = Coalition::full(N);
      for (int i = 0; i < N; ++i) {
        const auto [value, minimizer] = detail::min_valuation_over(game, i, grand);
        if (value < -1e-9) {
          BalanceWitness w;
          w.player = i;
          w.coalition = grand;
          w.direction = minimizer;
          verdict.witnesses.push_back(std::move(w));
        }
      }
      if (!verdict.witnesses.empty()) {
        verdict.note = "some valuation leaves the grand design space's dual cone";
        return verdict;
      }
      if (!endowments_nonneg) {
        verdict.note = "grand-coalition dual cone check is conclusive only for nonnegative endowments";
        return verdict;
      }
      verdict.status = BalancednessVerdict::Status::GuaranteedNonEmpty;
      return verdict;
    }
    case BalanceMode::DualConeAll: {
      if (N > 20) throw TooManyPlayers("dual cone scan over all coalitions is capped at 20 players");
      for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << N); ++mask) {
        const Coalition coalition = Coalition::from_mask(mask);
        for (int i = 0; i < N; ++i) {
          const auto [value, minimizer] = detail::min_valuation_over(game, i, coalition);
          if (value < -1e-9) {
            BalanceWitness w;
            w.player = i;
            w.coalition = coalition;
            w.direction = minimizer;
            verdict.witnesses.push_back(std::move(w));
            verdict.note = "some valuation leaves a coalition design space's dual cone";
            return verdict;
          }
        }
      }
      verdict.status = BalancednessVerdict::Status::GuaranteedNonEmpty;
      return verdict;
    }
  }
  return verdict;
}

}  // namespace corecut

#endif  // CORECUT_GAME_HPP
