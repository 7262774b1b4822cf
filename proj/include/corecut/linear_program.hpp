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

#ifndef CORECUT_LINEAR_PROGRAM_HPP
#define CORECUT_LINEAR_PROGRAM_HPP

#include <cstdint>
#include <limits>
#include <ostream>
#include <vector>

#include "corecut/errors.hpp"

namespace corecut {

using Vec = std::vector<double>;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class RowSense : std::uint8_t { LessEqual, GreaterEqual, Equal };

struct LinearRow {
  Vec coeffs;
  RowSense sense = RowSense::LessEqual;
  double rhs = 0.0;
};

/// A polyhedron over a fixed variable space: rows plus per-variable bounds.
/// Carries every set the library manipulates (design spaces, design-utility
/// spaces, the shrinking master relaxation).
struct ConstraintSystem {
  int num_vars = 0;
  std::vector<LinearRow> rows;
  Vec lower;  // size num_vars, -inf allowed
  Vec upper;  // size num_vars, +inf allowed

  explicit ConstraintSystem(int vars = 0)
      : num_vars(vars), lower(static_cast<std::size_t>(vars), 0.0),
        upper(static_cast<std::size_t>(vars), kInf) {}

  void add_row(Vec coeffs, RowSense sense, double rhs) {
    if (static_cast<int>(coeffs.size()) != num_vars)
      throw DimensionMismatch("row length does not match variable count");
    rows.push_back(LinearRow{std::move(coeffs), sense, rhs});
  }

  void set_bounds(int var, double lo, double hi) {
    if (lo > hi) throw Error("variable lower bound exceeds upper bound");
    lower[static_cast<std::size_t>(var)] = lo;
    upper[static_cast<std::size_t>(var)] = hi;
  }
};

struct LinearProgram {
  bool maximize = true;
  Vec objective;
  std::vector<LinearRow> rows;
  Vec lower;
  Vec upper;

  LinearProgram() = default;
  LinearProgram(const ConstraintSystem& system, bool maximize_, Vec objective_)
      : maximize(maximize_), objective(std::move(objective_)), rows(system.rows),
        lower(system.lower), upper(system.upper) {
    validate();
  }

  int num_vars() const { return static_cast<int>(objective.size()); }
  int num_rows() const { return static_cast<int>(rows.size()); }

  void add_row(Vec coeffs, RowSense sense, double rhs) {
    if (static_cast<int>(coeffs.size()) != num_vars())
      throw DimensionMismatch("row length does not match variable count");
    rows.push_back(LinearRow{std::move(coeffs), sense, rhs});
  }

  void validate() const {
    const auto n = objective.size();
    if (lower.size() != n || upper.size() != n)
      throw DimensionMismatch("bound vectors do not match variable count");
    for (std::size_t j = 0; j < n; ++j)
      if (lower[j] > upper[j]) throw Error("variable lower bound exceeds upper bound");
    for (const auto& row : rows)
      if (row.coeffs.size() != n) throw DimensionMismatch("row length does not match variable count");
  }

  /// Human-readable dump for debugging; not a stable format.
  void print(std::ostream& os) const {
    os << (maximize ? "max" : "min");
    for (std::size_t j = 0; j < objective.size(); ++j) os << ' ' << objective[j] << "*x" << j;
    os << '\n';
    for (const auto& row : rows) {
      for (std::size_t j = 0; j < row.coeffs.size(); ++j) os << (j ? " + " : "  ") << row.coeffs[j] << "*x" << j;
      os << (row.sense == RowSense::LessEqual ? " <= " : row.sense == RowSense::GreaterEqual ? " >= " : " == ")
         << row.rhs << '\n';
    }
    for (std::size_t j = 0; j < lower.size(); ++j)
      os << "  x" << j << " in [" << lower[j] << ", " << upper[j] << "]\n";
  }
};

enum class LpStatus : std::uint8_t { Optimal, Infeasible, Unbounded };

enum class VarStatus : std::uint8_t { Basic, AtLower, AtUpper, FreeNonbasic };

/// Optimal (or terminal) basic solution.  `basis` and `var_status` index the
/// combined variable space: structural variables first, then one slack per
/// row; this is what ray extraction reconstructs the tableau from.
struct BasicSolution {
  LpStatus status = LpStatus::Infeasible;
  Vec x;                        // structural values
  double objective_value = 0.0;
  double dual_objective = 0.0;  // equals objective_value at clean optima
  std::vector<int> basis;
  std::vector<VarStatus> var_status;  // size = structural + slacks
  long iterations = 0;
  double condition_estimate = 1.0;
};

struct TableauRay {
  int nonbasic = -1;  // combined variable index this ray corresponds to
  Vec direction;      // edge direction in structural space
  // Displacement of the nonbasic variable off its bound, as an affine
  // function of the structural variables: f_r(z) = expr_coeffs . z + expr_const.
  Vec expr_coeffs;
  double expr_const = 0.0;
};

struct TableauRays {
  std::vector<TableauRay> rays;
  double basis_condition_estimate = 1.0;
};

}  // namespace corecut

#endif  // CORECUT_LINEAR_PROGRAM_HPP
