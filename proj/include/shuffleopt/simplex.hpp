// Copyright 2026 The shuffleopt Authors
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

// Dense-tableau simplex with implicit variable bounds.
//
// Every row i of the LP is written as a_i x + s_i = b_i with one logical
// column s_i whose bounds encode the row sense ([0, inf) for <=, (-inf, 0]
// for >=, [0, 0] for =). The tableau stores B^-1 [A | I] row-major, so the
// logical block doubles as the explicit basis inverse. Pivots skip zero
// entries of the pivot row and column, which keeps network-structured
// models cheap despite the dense storage.
//
// Two algorithms share the tableau:
//  * dual simplex, used from any dual-feasible basis (the slack basis of a
//    model with sign-compatible costs, or a previous optimum after bound
//    changes in branch-and-bound);
//  * primal simplex, used after a zero-cost dual pass has found a feasible
//    basis.
// Both switch to Bland's rule after a stall threshold.

#pragma once

#include <cstdint>
#include <memory>
#include <string_view>
#include <utility>
#include <vector>

#include "shuffleopt/milp_model.hpp"

namespace shuffleopt::lp {

/// Minimization LP produced from a MilpModel by dropping integrality.
/// Rows are sparse; singleton rows of the model are folded into bounds.
struct LpStandardForm {
  std::vector<double> objective;  // minimize objective . x
  double objective_sign = 1.0;    // -1 when the source model maximizes
  std::vector<std::vector<std::pair<int, double>>> rows;
  std::vector<milp::Sense> senses;
  std::vector<double> rhs;
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<bool> integer;  // binaries of the source model
  bool infeasible = false;    // a folded row emptied some domain

  int num_cols() const { return static_cast<int>(objective.size()); }
  int num_rows() const { return static_cast<int>(rows.size()); }
};

LpStandardForm relax(const milp::Model& m);

enum class LpStatus { optimal, infeasible, unbounded, iteration_limit, numerical_failure };
std::string_view to_string(LpStatus s);

struct LpSolution {
  LpStatus status = LpStatus::numerical_failure;
  std::vector<double> values;
  double objective = 0.0;  // in the minimization sense of LpStandardForm
  std::int64_t iterations = 0;
};

struct SimplexOptions {
  double primal_tol = 1e-9;
  double dual_tol = 1e-9;
  double pivot_tol = 1e-7;
  int stall_threshold = 60;    // non-improving pivots before Bland's rule
  std::int64_t max_iterations = 0;  // 0 = 50 * (rows + cols) + 10000
};

class DenseSimplex {
 public:
  explicit DenseSimplex(const LpStandardForm& lp, SimplexOptions opts = {});

  /// Solves from the slack basis under the current bounds.
  LpStatus solve();

  /// Changes the bounds of structural column j. A nonbasic column rests on
  /// the bound its reduced cost favours; basic values are updated in place.
  void set_bounds(int j, double lower, double upper);

  /// Restores optimality with dual simplex after set_bounds calls on an
  /// optimal tableau. Falls back to solve() if dual feasibility was lost.
  LpStatus reoptimize();

  LpStatus status() const { return status_; }
  double objective() const;
  std::vector<double> primal_values() const;
  std::int64_t iterations() const { return iterations_; }
  double lower(int j) const { return lo_[j]; }
  double upper(int j) const { return hi_[j]; }

 private:
  enum class NbState : std::uint8_t { basic, at_lower, at_upper, free_zero };

  double& at(int r, int c) { return tab_[static_cast<std::size_t>(r) * ncols_ + c]; }
  double at(int r, int c) const { return tab_[static_cast<std::size_t>(r) * ncols_ + c]; }

  void reset_to_slack_basis();
  bool reinvert();
  void place_nonbasic(int j, bool prefer_cost_sign);
  void recompute_basic_values();
  void recompute_reduced_costs();
  bool dual_feasible() const;
  bool pivot_consistent(int r, int q) const;
  void pivot(int r, int q);
  void move_nonbasic(int j, double new_value);
  LpStatus dual_simplex();
  LpStatus perturbed_dual_simplex();
  LpStatus primal_simplex();
  LpStatus verify_and_finish(LpStatus s);
  double infeasibility(int r) const;

  std::shared_ptr<const LpStandardForm> lp_;
  SimplexOptions opts_;
  int m_ = 0;
  int n_ = 0;
  int ncols_ = 0;
  std::vector<double> tab_;
  std::vector<std::vector<std::pair<int, double>>> cols_;  // original rows, by column
  std::vector<double> x_;     // value of every column
  std::vector<double> d_;     // reduced costs
  std::vector<double> cost_;  // active costs (zero during phase one)
  std::vector<double> lo_, hi_;
  std::vector<int> head_;     // basic column of each row
  std::vector<NbState> state_;
  std::vector<int> nz_;       // scratch: nonzero columns of the pivot row
  std::int64_t iterations_ = 0;
  std::int64_t since_reinvert_ = 0;  // pivots applied to the current tableau
  std::int64_t max_iterations_ = 0;
  LpStatus status_ = LpStatus::numerical_failure;
};

/// One-shot LP solve.
LpSolution solve_lp(const LpStandardForm& f, SimplexOptions opts = {});

}  // namespace shuffleopt::lp
