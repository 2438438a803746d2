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

// Best-first branch-and-bound over the binary variables of a milp::Model.
//
// Node relaxations are solved by lp::DenseSimplex. One tableau is kept hot:
// moving to another node only changes column bounds, so the previous
// optimal basis stays dual feasible and dual simplex restores optimality.
// Until the first incumbent is found nodes are taken depth-first; after that
// the node with the smallest bound goes first, ties broken by depth, then by
// branching variable index, then by creation order.

#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>

#include "shuffleopt/milp_model.hpp"

namespace shuffleopt::bb {

/// Raised when a model is outside the size envelope of the internal solver.
class EnvelopeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::size_t kMaxVariables = 2000;
inline constexpr std::size_t kMaxConstraints = 5000;

struct BbLimits {
  std::int64_t max_nodes = 200000;
  double time_s = std::numeric_limits<double>::infinity();
  double abs_gap = 1e-6;
};

struct BbStats {
  std::int64_t nodes = 0;          // relaxations solved
  std::int64_t lp_iterations = 0;  // simplex pivots over all nodes
  double best_bound = 0.0;         // in the model's objective sense
  double wall_seconds = 0.0;
  bool numerical_trouble = false;  // some node could not be solved reliably
};

/// Solves `m` exactly (within limits.abs_gap). Returns status optimal,
/// infeasible, unbounded, or limit; a limit result carries the incumbent
/// when one exists. Throws EnvelopeError above kMaxVariables variables or
/// kMaxConstraints constraints.
milp::Assignment solve_milp(const milp::Model& m, const BbLimits& limits = {},
                            BbStats* stats = nullptr);

}  // namespace shuffleopt::bb
