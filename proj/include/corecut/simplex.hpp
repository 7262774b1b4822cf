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

#ifndef CORECUT_SIMPLEX_HPP
#define CORECUT_SIMPLEX_HPP

// Bounded-variable primal simplex with an explicit basis inverse.
//
// The engine keeps the optimal basis and bound status of every structural
// and slack variable, which is what intersection-cut generation needs: the
// edge directions obtained by releasing one nonbasic variable at a time,
// expressed in the original variable space.  Pricing is steepest reduced
// cost with index tie-breaks; after a run of degenerate steps Bland's rule
// takes over until progress resumes, so termination stays guaranteed and
// identical inputs produce identical bases.  A phase-1 / phase-2 structure
// with explicit artificial variables handles arbitrary starts; the inverse
// is refactorized from an LU decomposition every few dozen pivots and at
// termination.

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <vector>

#include "corecut/errors.hpp"
#include "corecut/linear_program.hpp"

namespace corecut::lp {

namespace detail {

inline constexpr double kFeasTol = 1e-7;
inline constexpr double kDualTol = 1e-9;
inline constexpr double kPivotTol = 1e-9;
inline constexpr double kAcceptablePivot = 1e-7;
inline constexpr double kDegenerateStep = 1e-10;
inline constexpr double kConditionLimit = 1e14;
inline constexpr int kRefactorEvery = 50;
inline constexpr int kStallLimit = 128;  // degenerate pivots before Bland's rule engages
inline constexpr long kMaxPivots = 200000;

/// Dense LU with partial pivoting.  Returns false on a (numerically)
/// singular matrix.  `cond` receives max|pivot| / min|pivot|.
class LuFactors {
 public:
  bool factor(std::vector<Vec> columns) {
    m_ = static_cast<int>(columns.size());
    a_ = std::move(columns);  // a_[j][i] = entry (i, j); factored in place
    perm_.resize(static_cast<std::size_t>(m_));
    double max_piv = 0.0, min_piv = kInf;
    for (int k = 0; k < m_; ++k) {
      int piv = k;
      for (int i = k + 1; i < m_; ++i)
        if (std::abs(a_[k][i]) > std::abs(a_[k][piv])) piv = i;
      perm_[k] = piv;
      if (piv != k)
        for (int j = k; j < m_; ++j) std::swap(a_[j][k], a_[j][piv]);
      const double p = a_[k][k];
      if (std::abs(p) < 1e-13) return false;
      max_piv = std::max(max_piv, std::abs(p));
      min_piv = std::min(min_piv, std::abs(p));
      for (int i = k + 1; i < m_; ++i) a_[k][i] /= p;
      for (int j = k + 1; j < m_; ++j) {
        const double ajk = a_[j][k];
        if (ajk == 0.0) continue;
        for (int i = k + 1; i < m_; ++i) a_[j][i] -= a_[k][i] * ajk;
      }
    }
    cond_ = (min_piv > 0.0) ? max_piv / min_piv : kInf;
    return true;
  }

  double condition() const { return cond_; }

  void solve(Vec& b) const {  // B x = b, in place
    for (int k = 0; k < m_; ++k) {
      std::swap(b[static_cast<std::size_t>(k)], b[static_cast<std::size_t>(perm_[k])]);
      const double bk = b[static_cast<std::size_t>(k)];
      if (bk != 0.0)
        for (int i = k + 1; i < m_; ++i) b[static_cast<std::size_t>(i)] -= a_[k][i] * bk;
    }
    for (int k = m_ - 1; k >= 0; --k) {
      double s = b[static_cast<std::size_t>(k)];
      for (int j = k + 1; j < m_; ++j) s -= a_[j][k] * b[static_cast<std::size_t>(j)];
      b[static_cast<std::size_t>(k)] = s / a_[k][k];
    }
  }

 private:
  int m_ = 0;
  std::vector<Vec> a_;
  std::vector<int> perm_;
  double cond_ = 1.0;
};

class Solver {
 public:
  explicit Solver(const LinearProgram& lp, bool conservative = false)
      : lp_(&lp), refactor_every_(conservative ? 8 : kRefactorEvery) {
    lp.validate();
    n_ = lp.num_vars();
    m_ = lp.num_rows();
    build_columns();
  }

  BasicSolution solve() {
    init_nonbasic();
    if (!slack_basis_feasible()) {
      if (!phase_one()) return finish_infeasible();
    }
    return phase_two();
  }

  /// Warm start from a previous basis over the same LP (possibly with rows
  /// appended; appended slacks must be marked Basic by the caller).
  BasicSolution solve_from(const std::vector<int>& basis, const std::vector<VarStatus>& status) {
    if (static_cast<int>(status.size()) != n_ + m_ || static_cast<int>(basis.size()) != m_)
      throw DimensionMismatch("warm basis does not match LP shape");
    status_ = status;
    basis_ = basis;
    basis_pos_.assign(static_cast<std::size_t>(n_ + m_), -1);
    for (int k = 0; k < m_; ++k) basis_pos_[static_cast<std::size_t>(basis_[static_cast<std::size_t>(k)])] = k;
    if (!refactor()) throw SingularBasis("warm-start basis is singular");
    for (int k = 0; k < m_; ++k) {
      const int v = basis_[static_cast<std::size_t>(k)];
      const double value = x_basic_[static_cast<std::size_t>(k)];
      if (value < lo_[static_cast<std::size_t>(v)] - kFeasTol || value > hi_[static_cast<std::size_t>(v)] + kFeasTol)
        throw Error("warm-start basis is primal infeasible");
    }
    return phase_two();
  }

 private:
  // -- setup ---------------------------------------------------------------

  void build_columns() {
    const int total = n_ + m_;
    cols_.assign(static_cast<std::size_t>(total), Vec(static_cast<std::size_t>(m_), 0.0));
    lo_.resize(static_cast<std::size_t>(total));
    hi_.resize(static_cast<std::size_t>(total));
    rhs_.resize(static_cast<std::size_t>(m_));
    for (int j = 0; j < n_; ++j) {
      lo_[static_cast<std::size_t>(j)] = lp_->lower[static_cast<std::size_t>(j)];
      hi_[static_cast<std::size_t>(j)] = lp_->upper[static_cast<std::size_t>(j)];
    }
    for (int i = 0; i < m_; ++i) {
      const auto& row = lp_->rows[static_cast<std::size_t>(i)];
      // Row equilibration: formulations mixing unit rows with large
      // deactivation constants otherwise span too many orders of magnitude
      // for a dense inverse.
      double peak = 0.0;
      for (double c : row.coeffs) peak = std::max(peak, std::abs(c));
      const double scale = (peak > 0.0) ? 1.0 / peak : 1.0;
      for (int j = 0; j < n_; ++j)
        cols_[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] = scale * row.coeffs[static_cast<std::size_t>(j)];
      const int s = n_ + i;
      cols_[static_cast<std::size_t>(s)][static_cast<std::size_t>(i)] = scale;
      switch (row.sense) {
        case RowSense::LessEqual: lo_[static_cast<std::size_t>(s)] = 0.0; hi_[static_cast<std::size_t>(s)] = kInf; break;
        case RowSense::GreaterEqual: lo_[static_cast<std::size_t>(s)] = -kInf; hi_[static_cast<std::size_t>(s)] = 0.0; break;
        case RowSense::Equal: lo_[static_cast<std::size_t>(s)] = 0.0; hi_[static_cast<std::size_t>(s)] = 0.0; break;
      }
      rhs_[static_cast<std::size_t>(i)] = scale * row.rhs;
    }
    cost_.assign(static_cast<std::size_t>(total), 0.0);
    const double sign = lp_->maximize ? 1.0 : -1.0;
    for (int j = 0; j < n_; ++j) cost_[static_cast<std::size_t>(j)] = sign * lp_->objective[static_cast<std::size_t>(j)];
  }

  void init_nonbasic() {
    const int total = n_ + m_;
    status_.assign(static_cast<std::size_t>(total), VarStatus::AtLower);
    for (int j = 0; j < total; ++j) {
      if (lo_[static_cast<std::size_t>(j)] > -kInf) status_[static_cast<std::size_t>(j)] = VarStatus::AtLower;
      else if (hi_[static_cast<std::size_t>(j)] < kInf) status_[static_cast<std::size_t>(j)] = VarStatus::AtUpper;
      else status_[static_cast<std::size_t>(j)] = VarStatus::FreeNonbasic;
    }
  }

  double nonbasic_value(int j) const {
    switch (status_[static_cast<std::size_t>(j)]) {
      case VarStatus::AtLower: return lo_[static_cast<std::size_t>(j)];
      case VarStatus::AtUpper: return hi_[static_cast<std::size_t>(j)];
      default: return 0.0;
    }
  }

  /// Tries the all-slack basis; adopts it when primal feasible.  The slack
  /// columns carry the row scale, so the implied slack values divide it out.
  bool slack_basis_feasible() {
    Vec value(static_cast<std::size_t>(m_));
    for (int i = 0; i < m_; ++i) value[static_cast<std::size_t>(i)] = rhs_[static_cast<std::size_t>(i)];
    for (int j = 0; j < n_; ++j) {
      const double v = nonbasic_value(j);
      if (v == 0.0) continue;
      for (int i = 0; i < m_; ++i) value[static_cast<std::size_t>(i)] -= cols_[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] * v;
    }
    for (int i = 0; i < m_; ++i)
      value[static_cast<std::size_t>(i)] /= cols_[static_cast<std::size_t>(n_ + i)][static_cast<std::size_t>(i)];
    for (int i = 0; i < m_; ++i) {
      const int s = n_ + i;
      if (value[static_cast<std::size_t>(i)] < lo_[static_cast<std::size_t>(s)] - kFeasTol ||
          value[static_cast<std::size_t>(i)] > hi_[static_cast<std::size_t>(s)] + kFeasTol)
        return false;
    }
    basis_.resize(static_cast<std::size_t>(m_));
    basis_pos_.assign(static_cast<std::size_t>(n_ + m_), -1);
    for (int i = 0; i < m_; ++i) {
      basis_[static_cast<std::size_t>(i)] = n_ + i;
      basis_pos_[static_cast<std::size_t>(n_ + i)] = i;
      status_[static_cast<std::size_t>(n_ + i)] = VarStatus::Basic;
    }
    binv_.assign(static_cast<std::size_t>(m_), Vec(static_cast<std::size_t>(m_), 0.0));
    for (int i = 0; i < m_; ++i)
      binv_[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] =
          1.0 / cols_[static_cast<std::size_t>(n_ + i)][static_cast<std::size_t>(i)];
    x_basic_ = std::move(value);
    pivots_since_refactor_ = 0;
    return true;
  }

  // -- phase 1 ---------------------------------------------------------------

  bool phase_one() {
    // Residual of the all-nonbasic point decides the artificial signs.
    Vec residual(static_cast<std::size_t>(m_));
    for (int i = 0; i < m_; ++i) residual[static_cast<std::size_t>(i)] = rhs_[static_cast<std::size_t>(i)];
    for (int j = 0; j < n_ + m_; ++j) {
      const double v = nonbasic_value(j);
      if (v == 0.0) continue;
      for (int i = 0; i < m_; ++i) residual[static_cast<std::size_t>(i)] -= cols_[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] * v;
    }
    const int total = n_ + m_;
    artificial_sign_.assign(static_cast<std::size_t>(m_), 1.0);
    basis_.resize(static_cast<std::size_t>(m_));
    basis_pos_.assign(static_cast<std::size_t>(total + m_), -1);
    x_basic_.resize(static_cast<std::size_t>(m_));
    for (int i = 0; i < m_; ++i) {
      const double sign = residual[static_cast<std::size_t>(i)] < 0.0 ? -1.0 : 1.0;
      artificial_sign_[static_cast<std::size_t>(i)] = sign;
      Vec col(static_cast<std::size_t>(m_), 0.0);
      col[static_cast<std::size_t>(i)] = sign;
      cols_.push_back(std::move(col));
      lo_.push_back(0.0);
      hi_.push_back(kInf);
      cost_.push_back(0.0);
      status_.push_back(VarStatus::Basic);
      basis_[static_cast<std::size_t>(i)] = total + i;
      basis_pos_[static_cast<std::size_t>(total + i)] = i;
      x_basic_[static_cast<std::size_t>(i)] = std::abs(residual[static_cast<std::size_t>(i)]);
    }
    binv_.assign(static_cast<std::size_t>(m_), Vec(static_cast<std::size_t>(m_), 0.0));
    for (int i = 0; i < m_; ++i)
      binv_[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = artificial_sign_[static_cast<std::size_t>(i)];
    pivots_since_refactor_ = 0;

    Vec saved_cost = cost_;
    std::fill(cost_.begin(), cost_.end(), 0.0);
    for (int i = 0; i < m_; ++i) cost_[static_cast<std::size_t>(total + i)] = -1.0;
    const LpStatus st = iterate();
    cost_ = std::move(saved_cost);
    if (st == LpStatus::Unbounded)
      throw NumericalBreakdown("phase-1 objective reported unbounded");
    double infeasibility = 0.0;
    for (int k = 0; k < m_; ++k)
      if (basis_[static_cast<std::size_t>(k)] >= total) infeasibility += x_basic_[static_cast<std::size_t>(k)];
    if (infeasibility > 1e-6) return false;

    drive_out_artificials(total);
    for (int i = 0; i < m_; ++i) hi_[static_cast<std::size_t>(total + i)] = 0.0;  // freeze
    return true;
  }

  void drive_out_artificials(int total) {
    for (int k = 0; k < m_; ++k) {
      const int v = basis_[static_cast<std::size_t>(k)];
      if (v < total) continue;
      // Degenerate pivot: bring in any genuine column with weight on row k.
      int replacement = -1;
      Vec w;
      for (int j = 0; j < total; ++j) {
        if (status_[static_cast<std::size_t>(j)] == VarStatus::Basic) continue;
        if (lo_[static_cast<std::size_t>(j)] == hi_[static_cast<std::size_t>(j)]) continue;
        Vec wj = ftran(cols_[static_cast<std::size_t>(j)]);
        if (std::abs(wj[static_cast<std::size_t>(k)]) > 1e-7) {
          replacement = j;
          w = std::move(wj);
          break;
        }
      }
      if (replacement < 0) continue;  // redundant row; artificial stays, frozen at zero
      status_[static_cast<std::size_t>(v)] = VarStatus::AtLower;
      pivot(replacement, k, w, nonbasic_value(replacement));
    }
  }

  // -- phase 2 ---------------------------------------------------------------

  BasicSolution phase_two() {
    const LpStatus st = iterate();
    if (st == LpStatus::Unbounded) return finish_unbounded();
    complete_vertex();
    return finish_optimal();
  }

  /// Main pricing/ratio-test loop; Bland's rule on both choices.
  LpStatus iterate() {
    for (;;) {
      if (++total_pivots_ > kMaxPivots)
        throw NumericalBreakdown("simplex iteration limit exceeded");
      if (pivots_since_refactor_ >= refactor_every_) {
        if (!refactor()) throw SingularBasis("basis became singular during reoptimization");
      }
      const Vec y = duals();
      int entering = -1;
      double dir = 0.0;
      double best_score = kDualTol;
      const bool bland = stalled_ >= kStallLimit;
      const int total = static_cast<int>(cols_.size());
      for (int j = 0; j < total; ++j) {
        const VarStatus st = status_[static_cast<std::size_t>(j)];
        if (st == VarStatus::Basic) continue;
        if (lo_[static_cast<std::size_t>(j)] == hi_[static_cast<std::size_t>(j)]) continue;
        const double d = cost_[static_cast<std::size_t>(j)] - dot(y, cols_[static_cast<std::size_t>(j)]);
        double candidate_dir = 0.0;
        if ((st == VarStatus::AtLower || st == VarStatus::FreeNonbasic) && d > kDualTol)
          candidate_dir = 1.0;
        else if ((st == VarStatus::AtUpper || st == VarStatus::FreeNonbasic) && d < -kDualTol)
          candidate_dir = -1.0;
        if (candidate_dir == 0.0) continue;
        if (bland) {  // anti-cycling: smallest eligible index
          entering = j;
          dir = candidate_dir;
          break;
        }
        if (std::abs(d) > best_score) {
          best_score = std::abs(d);
          entering = j;
          dir = candidate_dir;
        }
      }
      if (entering < 0) {
        // Confirm optimality against freshly rebuilt factors.
        if (pivots_since_refactor_ == 0) return LpStatus::Optimal;
        if (!refactor()) throw SingularBasis("basis became singular during reoptimization");
        continue;
      }

      const Vec w = ftran(cols_[static_cast<std::size_t>(entering)]);
      double best_t = kInf;
      int leave_pos = -1;
      bool leave_to_upper = false;
      const double range = hi_[static_cast<std::size_t>(entering)] - lo_[static_cast<std::size_t>(entering)];
      for (int k = 0; k < m_; ++k) {
        const int v = basis_[static_cast<std::size_t>(k)];
        const double step = dir * w[static_cast<std::size_t>(k)];
        double t = kInf;
        bool to_upper = false;
        if (step > kPivotTol && lo_[static_cast<std::size_t>(v)] > -kInf) {
          t = (x_basic_[static_cast<std::size_t>(k)] - lo_[static_cast<std::size_t>(v)]) / step;
        } else if (step < -kPivotTol && hi_[static_cast<std::size_t>(v)] < kInf) {
          t = (hi_[static_cast<std::size_t>(v)] - x_basic_[static_cast<std::size_t>(k)]) / (-step);
          to_upper = true;
        } else {
          continue;
        }
        if (t < 0.0) t = 0.0;  // tolerate slight infeasibility: degenerate step
        if (t < best_t - 1e-12 ||
            (t < best_t + 1e-12 && (leave_pos < 0 || v < basis_[static_cast<std::size_t>(leave_pos)]))) {
          best_t = t;
          leave_pos = k;
          leave_to_upper = to_upper;
        }
      }
      if (range < best_t) {
        // Bound flip: the entering variable traverses to its opposite bound.
        apply_step(w, dir, range);
        status_[static_cast<std::size_t>(entering)] =
            (dir > 0.0) ? VarStatus::AtUpper : VarStatus::AtLower;
        ++pivots_since_refactor_;
        stalled_ = (range <= kDegenerateStep) ? stalled_ + 1 : 0;
        continue;
      }
      if (leave_pos < 0) return LpStatus::Unbounded;
      if (std::abs(w[static_cast<std::size_t>(leave_pos)]) < kAcceptablePivot &&
          pivots_since_refactor_ > 0) {
        // A questionable pivot element may be drift in the running inverse;
        // only trust it against a fresh factorization.
        if (!refactor()) throw SingularBasis("basis became singular during reoptimization");
        continue;
      }
      const double enter_value = nonbasic_value(entering) + dir * best_t;
      apply_step(w, dir, best_t);
      const int leaving = basis_[static_cast<std::size_t>(leave_pos)];
      status_[static_cast<std::size_t>(leaving)] = leave_to_upper ? VarStatus::AtUpper : VarStatus::AtLower;
      pivot(entering, leave_pos, w, enter_value);
      stalled_ = (best_t <= kDegenerateStep) ? stalled_ + 1 : 0;
    }
  }

  /// Moves remaining free nonbasic variables into the basis so the returned
  /// point is a vertex; steps stay on the optimal face (reduced costs are
  /// zero for free nonbasic variables at optimality).
  void complete_vertex() {
    if (pivots_since_refactor_ > 0 && !refactor())
      throw SingularBasis("basis became singular during reoptimization");
    const int total = n_ + m_;
    for (int j = 0; j < total; ++j) {
      if (status_[static_cast<std::size_t>(j)] != VarStatus::FreeNonbasic) continue;
      const Vec w = ftran(cols_[static_cast<std::size_t>(j)]);
      bool placed = false;
      for (const double dir : {1.0, -1.0}) {
        double best_t = kInf;
        int leave_pos = -1;
        bool to_upper = false;
        for (int k = 0; k < m_; ++k) {
          const int v = basis_[static_cast<std::size_t>(k)];
          const double step = dir * w[static_cast<std::size_t>(k)];
          double t = kInf;
          bool up = false;
          if (step > kPivotTol && lo_[static_cast<std::size_t>(v)] > -kInf) {
            t = (x_basic_[static_cast<std::size_t>(k)] - lo_[static_cast<std::size_t>(v)]) / step;
          } else if (step < -kPivotTol && hi_[static_cast<std::size_t>(v)] < kInf) {
            t = (hi_[static_cast<std::size_t>(v)] - x_basic_[static_cast<std::size_t>(k)]) / (-step);
            up = true;
          } else {
            continue;
          }
          if (t < 0.0) t = 0.0;
          if (t < best_t - 1e-12 ||
              (t < best_t + 1e-12 && (leave_pos < 0 || v < basis_[static_cast<std::size_t>(leave_pos)]))) {
            best_t = t;
            leave_pos = k;
            to_upper = up;
          }
        }
        if (leave_pos < 0) continue;
        const double enter_value = 0.0 + dir * best_t;
        apply_step(w, dir, best_t);
        const int leaving = basis_[static_cast<std::size_t>(leave_pos)];
        status_[static_cast<std::size_t>(leaving)] = to_upper ? VarStatus::AtUpper : VarStatus::AtLower;
        pivot(j, leave_pos, w, enter_value);
        placed = true;
        break;
      }
      if (!placed)
        throw NumericalBreakdown("feasible region contains a line; no vertex exists");
    }
  }

  // -- linear algebra helpers -------------------------------------------------

  static double dot(const Vec& a, const Vec& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
  }

  Vec ftran(const Vec& col) const {  // binv * col
    Vec out(static_cast<std::size_t>(m_), 0.0);
    for (int i = 0; i < m_; ++i) {
      const double ci = col[static_cast<std::size_t>(i)];
      if (ci == 0.0) continue;
      for (int k = 0; k < m_; ++k) out[static_cast<std::size_t>(k)] += binv_[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)] * ci;
    }
    return out;
  }

  Vec duals() const {  // y^T = c_B^T binv
    Vec y(static_cast<std::size_t>(m_), 0.0);
    for (int k = 0; k < m_; ++k) {
      const double cb = cost_[static_cast<std::size_t>(basis_[static_cast<std::size_t>(k)])];
      if (cb == 0.0) continue;
      const Vec& row = binv_[static_cast<std::size_t>(k)];
      for (int i = 0; i < m_; ++i) y[static_cast<std::size_t>(i)] += cb * row[static_cast<std::size_t>(i)];
    }
    return y;
  }

  void apply_step(const Vec& w, double dir, double t) {
    if (t == 0.0) return;
    for (int k = 0; k < m_; ++k) x_basic_[static_cast<std::size_t>(k)] -= dir * t * w[static_cast<std::size_t>(k)];
  }

  void pivot(int entering, int leave_pos, const Vec& w, double enter_value) {
    const double piv = w[static_cast<std::size_t>(leave_pos)];
    if (std::abs(piv) < kPivotTol)
      throw NumericalBreakdown("pivot element vanished", std::abs(piv));
    const int leaving = basis_[static_cast<std::size_t>(leave_pos)];
    if (leaving >= n_ + m_) hi_[static_cast<std::size_t>(leaving)] = 0.0;  // artificials never re-enter
    basis_pos_[static_cast<std::size_t>(leaving)] = -1;
    basis_[static_cast<std::size_t>(leave_pos)] = entering;
    basis_pos_[static_cast<std::size_t>(entering)] = leave_pos;
    status_[static_cast<std::size_t>(entering)] = VarStatus::Basic;
    // binv <- E * binv with eta column derived from w.
    Vec& pivot_row = binv_[static_cast<std::size_t>(leave_pos)];
    for (int i = 0; i < m_; ++i) pivot_row[static_cast<std::size_t>(i)] /= piv;
    for (int k = 0; k < m_; ++k) {
      if (k == leave_pos) continue;
      const double factor = w[static_cast<std::size_t>(k)];
      if (factor == 0.0) continue;
      Vec& row = binv_[static_cast<std::size_t>(k)];
      for (int i = 0; i < m_; ++i) row[static_cast<std::size_t>(i)] -= factor * pivot_row[static_cast<std::size_t>(i)];
    }
    x_basic_[static_cast<std::size_t>(leave_pos)] = enter_value;
    ++pivots_since_refactor_;
  }

  bool refactor() {
    std::vector<Vec> basis_cols;
    basis_cols.reserve(static_cast<std::size_t>(m_));
    for (int k = 0; k < m_; ++k) basis_cols.push_back(cols_[static_cast<std::size_t>(basis_[static_cast<std::size_t>(k)])]);
    LuFactors lu;
    if (!lu.factor(std::move(basis_cols))) return false;
    condition_ = lu.condition();
    if (condition_ > kConditionLimit)
      throw NumericalBreakdown("basis condition estimate exceeds limit", condition_);
    // Rebuild the explicit inverse column by column.
    binv_.assign(static_cast<std::size_t>(m_), Vec(static_cast<std::size_t>(m_), 0.0));
    Vec e(static_cast<std::size_t>(m_), 0.0);
    for (int i = 0; i < m_; ++i) {
      std::fill(e.begin(), e.end(), 0.0);
      e[static_cast<std::size_t>(i)] = 1.0;
      lu.solve(e);
      for (int k = 0; k < m_; ++k) binv_[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)] = e[static_cast<std::size_t>(k)];
    }
    // Fresh basic values from the nonbasic point.
    Vec rhs_eff = rhs_;
    const int total = static_cast<int>(cols_.size());
    for (int j = 0; j < total; ++j) {
      if (status_[static_cast<std::size_t>(j)] == VarStatus::Basic) continue;
      const double v = nonbasic_value(j);
      if (v == 0.0) continue;
      for (int i = 0; i < m_; ++i) rhs_eff[static_cast<std::size_t>(i)] -= cols_[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] * v;
    }
    x_basic_ = ftran(rhs_eff);
    pivots_since_refactor_ = 0;
    return true;
  }

  // -- result assembly ---------------------------------------------------------

  BasicSolution finish_infeasible() {
    BasicSolution out;
    out.status = LpStatus::Infeasible;
    out.iterations = total_pivots_;
    return out;
  }

  BasicSolution finish_unbounded() {
    BasicSolution out;
    out.status = LpStatus::Unbounded;
    out.iterations = total_pivots_;
    return out;
  }

  BasicSolution finish_optimal() {
    if (!refactor()) throw SingularBasis("terminal basis is singular");
    BasicSolution out;
    out.status = LpStatus::Optimal;
    out.iterations = total_pivots_;
    out.condition_estimate = condition_;
    out.x.assign(static_cast<std::size_t>(n_), 0.0);
    for (int j = 0; j < n_; ++j)
      if (status_[static_cast<std::size_t>(j)] != VarStatus::Basic) out.x[static_cast<std::size_t>(j)] = nonbasic_value(j);
    for (int k = 0; k < m_; ++k) {
      const int v = basis_[static_cast<std::size_t>(k)];
      if (v < n_) out.x[static_cast<std::size_t>(v)] = x_basic_[static_cast<std::size_t>(k)];
    }
    const double sign = lp_->maximize ? 1.0 : -1.0;
    double value = 0.0;
    for (int j = 0; j < n_; ++j) value += lp_->objective[static_cast<std::size_t>(j)] * out.x[static_cast<std::size_t>(j)];
    out.objective_value = value;

    // Dual value with bound multipliers chosen by reduced-cost sign.
    const Vec y = duals();
    double dual = dot(y, rhs_);
    const int total = n_ + m_;
    for (int j = 0; j < total; ++j) {
      if (status_[static_cast<std::size_t>(j)] == VarStatus::Basic) continue;
      const double d = cost_[static_cast<std::size_t>(j)] - dot(y, cols_[static_cast<std::size_t>(j)]);
      // At a maximization optimum, d <= 0 at lower bounds and d >= 0 at
      // upper bounds; the complementary bound enters the dual value.
      if (d < 0.0 && lo_[static_cast<std::size_t>(j)] > -kInf) dual += d * lo_[static_cast<std::size_t>(j)];
      else if (d > 0.0 && hi_[static_cast<std::size_t>(j)] < kInf) dual += d * hi_[static_cast<std::size_t>(j)];
    }
    out.dual_objective = sign * dual;

    out.basis = basis_;
    out.var_status.assign(status_.begin(), status_.begin() + total);
    return out;
  }

  const LinearProgram* lp_;
  int refactor_every_ = kRefactorEvery;
  int n_ = 0;
  int m_ = 0;
  std::vector<Vec> cols_;
  Vec lo_, hi_, cost_, rhs_;
  std::vector<VarStatus> status_;
  std::vector<int> basis_;
  std::vector<int> basis_pos_;
  std::vector<Vec> binv_;
  Vec x_basic_;
  std::vector<double> artificial_sign_;
  int pivots_since_refactor_ = 0;
  int stalled_ = 0;
  long total_pivots_ = 0;
  double condition_ = 1.0;
};

}  // namespace detail

/// Solves the LP to a basic (vertex) solution, or reports Infeasible /
/// Unbounded.  Deterministic: Bland's rule breaks all ties.  A run whose
/// basis degrades numerically is retried once with tight refactorization.
inline BasicSolution solve(const LinearProgram& lp) {
  try {
    return detail::Solver(lp).solve();
  } catch (const SingularBasis&) {
    return detail::Solver(lp, /*conservative=*/true).solve();
  }
}

/// Re-optimizes after appending one row.  The prior basis is reused when the
/// new slack can enter it feasibly; otherwise the augmented LP is solved
/// cold.  Also returns the augmented LP via `augmented`.
inline BasicSolution resolve_with_row(const BasicSolution& solution, const LinearProgram& lp,
                                      const LinearRow& row, LinearProgram* augmented = nullptr) {
  LinearProgram lp2 = lp;
  lp2.rows.push_back(row);
  if (augmented) *augmented = lp2;
  if (solution.status == LpStatus::Optimal &&
      static_cast<int>(solution.var_status.size()) == lp.num_vars() + lp.num_rows()) {
    double activity = 0.0;
    for (int j = 0; j < lp.num_vars(); ++j) activity += row.coeffs[static_cast<std::size_t>(j)] * solution.x[static_cast<std::size_t>(j)];
    const double slack = row.rhs - activity;
    const bool ok = (row.sense == RowSense::LessEqual && slack >= -detail::kFeasTol) ||
                    (row.sense == RowSense::GreaterEqual && slack <= detail::kFeasTol) ||
                    (row.sense == RowSense::Equal && std::abs(slack) <= detail::kFeasTol);
    if (ok) {
      std::vector<int> basis = solution.basis;
      basis.push_back(lp.num_vars() + lp.num_rows());  // new slack carries its row
      std::vector<VarStatus> status = solution.var_status;
      status.push_back(VarStatus::Basic);
      try {
        return detail::Solver(lp2).solve_from(basis, status);
      } catch (const Error&) {
        // fall through to a cold solve
      }
    }
  }
  return detail::Solver(lp2).solve();
}

/// Edge directions of the simplicial cone at an optimal vertex: one ray per
/// nonbasic (non-fixed) variable, in structural coordinates, together with
/// the affine expression of that variable's displacement off its bound.
inline TableauRays extract_rays(const BasicSolution& solution, const LinearProgram& lp) {
  if (solution.status != LpStatus::Optimal)
    throw Error("rays are only defined at an optimal basic solution");
  const int n = lp.num_vars();
  const int m = lp.num_rows();
  if (static_cast<int>(solution.var_status.size()) != n + m)
    throw DimensionMismatch("solution does not match LP shape");

  // Rebuild basis columns (structural, slack; no artificials can be basic
  // here unless a row was redundant, in which case extraction would need the
  // stuck artificial column and we reject instead).
  std::vector<Vec> basis_cols;
  basis_cols.reserve(static_cast<std::size_t>(m));
  std::vector<int> basis_pos(static_cast<std::size_t>(n + m), -1);
  for (int k = 0; k < m; ++k) {
    const int v = solution.basis[static_cast<std::size_t>(k)];
    if (v >= n + m) throw SingularBasis("basis contains an artificial of a redundant row");
    basis_pos[static_cast<std::size_t>(v)] = k;
    Vec col(static_cast<std::size_t>(m), 0.0);
    if (v < n) {
      for (int i = 0; i < m; ++i) col[static_cast<std::size_t>(i)] = lp.rows[static_cast<std::size_t>(i)].coeffs[static_cast<std::size_t>(v)];
    } else {
      col[static_cast<std::size_t>(v - n)] = 1.0;
    }
    basis_cols.push_back(std::move(col));
  }
  detail::LuFactors lu;
  if (!lu.factor(std::move(basis_cols))) throw SingularBasis("optimal basis is singular");

  TableauRays out;
  out.basis_condition_estimate = lu.condition();
  for (int j = 0; j < n + m; ++j) {
    const VarStatus st = solution.var_status[static_cast<std::size_t>(j)];
    if (st == VarStatus::Basic) continue;
    const double lo = (j < n) ? lp.lower[static_cast<std::size_t>(j)]
                              : (lp.rows[static_cast<std::size_t>(j - n)].sense == RowSense::GreaterEqual ? -kInf : 0.0);
    const double hi = (j < n) ? lp.upper[static_cast<std::size_t>(j)]
                              : (lp.rows[static_cast<std::size_t>(j - n)].sense == RowSense::LessEqual ? kInf : 0.0);
    if (lo == hi) continue;  // fixed variables cannot move; no edge
    const double sigma = (st == VarStatus::AtUpper) ? -1.0 : 1.0;

    Vec col(static_cast<std::size_t>(m), 0.0);
    if (j < n) {
      for (int i = 0; i < m; ++i) col[static_cast<std::size_t>(i)] = lp.rows[static_cast<std::size_t>(i)].coeffs[static_cast<std::size_t>(j)];
    } else {
      col[static_cast<std::size_t>(j - n)] = 1.0;
    }
    lu.solve(col);  // col becomes w = B^-1 a_j

    TableauRay ray;
    ray.nonbasic = j;
    ray.direction.assign(static_cast<std::size_t>(n), 0.0);
    if (j < n) ray.direction[static_cast<std::size_t>(j)] = sigma;
    for (int k = 0; k < m; ++k) {
      const int v = solution.basis[static_cast<std::size_t>(k)];
      if (v < n) ray.direction[static_cast<std::size_t>(v)] -= sigma * col[static_cast<std::size_t>(k)];
    }
    ray.expr_coeffs.assign(static_cast<std::size_t>(n), 0.0);
    if (j < n) {
      if (st == VarStatus::AtUpper) {
        ray.expr_coeffs[static_cast<std::size_t>(j)] = -1.0;
        ray.expr_const = hi;
      } else {
        ray.expr_coeffs[static_cast<std::size_t>(j)] = 1.0;
        ray.expr_const = -lo;
      }
    } else {
      const auto& lprow = lp.rows[static_cast<std::size_t>(j - n)];
      if (st == VarStatus::AtUpper) {
        // slack at upper bound (>= rows): displacement = a.z - rhs + hi
        for (int s = 0; s < n; ++s) ray.expr_coeffs[static_cast<std::size_t>(s)] = lprow.coeffs[static_cast<std::size_t>(s)];
        ray.expr_const = hi - lprow.rhs;
      } else {
        // slack at lower bound (<= rows): displacement = rhs - a.z - lo
        for (int s = 0; s < n; ++s) ray.expr_coeffs[static_cast<std::size_t>(s)] = -lprow.coeffs[static_cast<std::size_t>(s)];
        ray.expr_const = lprow.rhs - lo;
      }
    }
    out.rays.push_back(std::move(ray));
  }
  return out;
}

}  // namespace corecut::lp

#endif  // CORECUT_SIMPLEX_HPP
