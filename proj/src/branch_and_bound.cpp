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

#include "shuffleopt/branch_and_bound.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <memory>
#include <optional>
#include <queue>
#include <string>
#include <utility>
#include <vector>

#include "shuffleopt/simplex.hpp"

namespace shuffleopt::bb {
namespace {

constexpr double kIntegralityTol = 1e-6;
constexpr double kBoundKeyScale = 1e9;  // bounds closer than 1e-9 compare equal

struct Fix {
  int var;
  std::int8_t value;
};

struct Node {
  double bound;             // parent relaxation value, minimization sense
  int depth;
  int branch_var;
  std::int64_t seq;
  std::vector<Fix> fixes;   // every branching decision from the root
};

struct NodeOrder {
  bool depth_first = true;
  // std::priority_queue pops the largest element, so "a < b" means b first.
  bool operator()(const Node& a, const Node& b) const {
    if (!depth_first) {
      const double ka = std::round(a.bound * kBoundKeyScale);
      const double kb = std::round(b.bound * kBoundKeyScale);
      if (ka != kb) return ka > kb;
    }
    if (a.depth != b.depth) return a.depth < b.depth;
    if (a.branch_var != b.branch_var) return a.branch_var > b.branch_var;
    return a.seq > b.seq;
  }
};

class Solver {
 public:
  Solver(const milp::Model& m, const BbLimits& limits)
      : model_(m), limits_(limits), lp_(lp::relax(m)),
        start_(std::chrono::steady_clock::now()) {}

  milp::Assignment run(BbStats* stats);

 private:
  enum class NodeResult { solved, infeasible, unbounded, failed };

  NodeResult solve_node(const std::vector<Fix>& fixes);
  void move_to(const std::vector<int>& target);
  std::optional<std::vector<double>> polish(const std::vector<double>& x);
  void offer_incumbent(const std::vector<double>& x);
  double elapsed() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

  const milp::Model& model_;
  BbLimits limits_;
  lp::LpStandardForm lp_;
  std::unique_ptr<lp::DenseSimplex> work_;
  std::vector<int> current_;  // fix currently applied to each column, -1 if none
  std::vector<double> x_;     // last node solution
  double x_obj_ = 0.0;
  std::int64_t retired_iterations_ = 0;

  std::optional<std::vector<double>> incumbent_;
  double incumbent_obj_ = std::numeric_limits<double>::infinity();
  bool trouble_ = false;
  std::chrono::steady_clock::time_point start_;
};

void Solver::move_to(const std::vector<int>& target) {
  for (int j = 0; j < lp_.num_cols(); ++j) {
    if (current_[j] == target[j]) continue;
    if (target[j] < 0) {
      work_->set_bounds(j, lp_.lower[j], lp_.upper[j]);
    } else {
      work_->set_bounds(j, target[j], target[j]);
    }
    current_[j] = target[j];
  }
}

Solver::NodeResult Solver::solve_node(const std::vector<Fix>& fixes) {
  std::vector<int> target(lp_.num_cols(), -1);
  for (const Fix& f : fixes) {
    if (f.value < lp_.lower[f.var] || f.value > lp_.upper[f.var]) return NodeResult::infeasible;
    target[f.var] = f.value;
  }
  lp::LpStatus st;
  if (!work_) {
    work_ = std::make_unique<lp::DenseSimplex>(lp_);
    current_.assign(lp_.num_cols(), -1);
    move_to(target);
    st = work_->solve();
  } else {
    move_to(target);
    st = work_->reoptimize();
  }
  if (st == lp::LpStatus::numerical_failure || st == lp::LpStatus::iteration_limit) {
    // Cold restart on a fresh tableau before giving up on the node.
    retired_iterations_ += work_->iterations();
    work_ = std::make_unique<lp::DenseSimplex>(lp_);
    current_.assign(lp_.num_cols(), -1);
    move_to(target);
    st = work_->solve();
  }
  switch (st) {
    case lp::LpStatus::optimal:
      x_ = work_->primal_values();
      x_obj_ = work_->objective();
      return NodeResult::solved;
    case lp::LpStatus::infeasible:
      return NodeResult::infeasible;
    case lp::LpStatus::unbounded:
      return NodeResult::unbounded;
    default:
      // A later move_to will rebuild from whatever state is left.
      retired_iterations_ += work_->iterations();
      work_.reset();
      return NodeResult::failed;
  }
}

// Fixes every binary at its rounded value and re-solves, so continuous
// columns are consistent with exact 0/1 values.
std::optional<std::vector<double>> Solver::polish(const std::vector<double>& x) {
  std::vector<Fix> fixes;
  for (int j = 0; j < lp_.num_cols(); ++j) {
    if (lp_.integer[j]) fixes.push_back(Fix{j, static_cast<std::int8_t>(std::lround(x[j]))});
  }
  if (solve_node(fixes) != NodeResult::solved) return std::nullopt;
  std::vector<double> y = x_;
  for (int j = 0; j < lp_.num_cols(); ++j) {
    if (lp_.integer[j]) y[j] = std::round(y[j]);
  }
  return y;
}

void Solver::offer_incumbent(const std::vector<double>& x) {
  double obj = 0.0;
  for (int j = 0; j < lp_.num_cols(); ++j) obj += lp_.objective[j] * x[j];
  if (obj < incumbent_obj_) {
    incumbent_obj_ = obj;
    incumbent_ = x;
  }
}

milp::Assignment Solver::run(BbStats* stats) {
  milp::Assignment out;
  BbStats local;
  NodeOrder order;
  std::priority_queue<Node, std::vector<Node>, NodeOrder> open(order);
  std::int64_t seq = 0;
  bool hit_limit = false;
  bool unbounded = false;

  if (lp_.infeasible) {
    out.status = milp::SolveStatus::infeasible;
    if (stats) *stats = local;
    return out;
  }

  open.push(Node{-std::numeric_limits<double>::infinity(), 0, -1, seq++, {}});
  while (!open.empty()) {
    if (local.nodes >= limits_.max_nodes || elapsed() > limits_.time_s) {
      hit_limit = true;
      break;
    }
    Node node = open.top();
    open.pop();
    if (incumbent_ && node.bound >= incumbent_obj_ - limits_.abs_gap) continue;

    ++local.nodes;
    const NodeResult r = solve_node(node.fixes);
    if (r == NodeResult::infeasible) continue;
    if (r == NodeResult::unbounded) {
      unbounded = true;
      break;
    }
    if (r == NodeResult::failed) {
      trouble_ = true;
      continue;
    }
    const double bound = std::max(node.bound, x_obj_);
    if (incumbent_ && bound >= incumbent_obj_ - limits_.abs_gap) continue;

    int branch = -1;
    double most = 0.0;
    for (int j = 0; j < lp_.num_cols(); ++j) {
      if (!lp_.integer[j]) continue;
      const double frac = std::abs(x_[j] - std::round(x_[j]));
      if (frac > most + 1e-12) {
        most = frac;
        branch = j;
      }
    }
    if (most <= kIntegralityTol) {
      const std::vector<double> relaxed = x_;
      if (auto y = polish(relaxed)) {
        offer_incumbent(*y);
        if (order.depth_first) {
          // Switch to best-first now that pruning has a reference value.
          order.depth_first = false;
          std::vector<Node> rest;
          while (!open.empty()) {
            rest.push_back(open.top());
            open.pop();
          }
          open = std::priority_queue<Node, std::vector<Node>, NodeOrder>(order);
          for (Node& n : rest) open.push(std::move(n));
        }
        continue;
      }
      if (branch < 0 || most <= 1e-12) {
        trouble_ = true;
        continue;
      }
    }

    const double v = x_[branch];
    const std::int8_t first = v - std::floor(v) >= 0.5 ? 1 : 0;
    // Pushed second so the nearest-rounding child pops first on ties.
    for (std::int8_t value : {static_cast<std::int8_t>(1 - first), first}) {
      Node child{bound, node.depth + 1, branch, 0, node.fixes};
      child.fixes.push_back(Fix{branch, value});
      child.seq = value == first ? seq + 1 : seq;
      open.push(std::move(child));
    }
    seq += 2;
  }

  local.lp_iterations = retired_iterations_ + (work_ ? work_->iterations() : 0);
  local.numerical_trouble = trouble_;
  local.wall_seconds = elapsed();

  double open_bound = incumbent_ ? incumbent_obj_ : std::numeric_limits<double>::infinity();
  while (!open.empty()) {
    open_bound = std::min(open_bound, open.top().bound);
    open.pop();
  }
  if (unbounded) {
    out.status = milp::SolveStatus::unbounded;
  } else if (hit_limit) {
    out.status = milp::SolveStatus::limit;
  } else if (!incumbent_) {
    out.status = trouble_ ? milp::SolveStatus::limit : milp::SolveStatus::infeasible;
  } else {
    out.status = trouble_ ? milp::SolveStatus::feasible : milp::SolveStatus::optimal;
  }
  if (incumbent_ && !unbounded) {
    out.values = *incumbent_;
    out.objective_value = model_.objective_value(out.values);
  }
  local.best_bound = lp_.objective_sign * (hit_limit ? open_bound : incumbent_obj_);
  if (stats) *stats = local;
  return out;
}

}  // namespace

milp::Assignment solve_milp(const milp::Model& m, const BbLimits& limits, BbStats* stats) {
  if (m.num_variables() > kMaxVariables || m.num_constraints() > kMaxConstraints) {
    throw EnvelopeError("model has " + std::to_string(m.num_variables()) + " variables and " +
                        std::to_string(m.num_constraints()) +
                        " constraints; the internal solver accepts at most " +
                        std::to_string(kMaxVariables) + " and " +
                        std::to_string(kMaxConstraints) + ", use an external solver");
  }
  Solver s(m, limits);
  return s.run(stats);
}

}  // namespace shuffleopt::bb
