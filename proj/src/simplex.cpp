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

#include "shuffleopt/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace shuffleopt::lp {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kDropTol = 1e-12;   // tableau entries below this become zero
constexpr int kRefreshEvery = 150;   // iterations between value/cost refreshes
constexpr double kVerifyTol = 1e-7;  // final row/bound check on the original data
constexpr double kPivotCheckTol = 1e-7;  // pivot entry vs. its recomputed value
constexpr double kPerturb = 1e-6;    // relative cost shift against dual degeneracy

}  // namespace

std::string_view to_string(LpStatus s) {
  switch (s) {
    case LpStatus::optimal: return "optimal";
    case LpStatus::infeasible: return "infeasible";
    case LpStatus::unbounded: return "unbounded";
    case LpStatus::iteration_limit: return "iteration_limit";
    case LpStatus::numerical_failure: return "numerical_failure";
  }
  return "unknown";
}

LpStandardForm relax(const milp::Model& m) {
  LpStandardForm f;
  const auto& vars = m.variables();
  const double sign = m.direction() == milp::Direction::minimize ? 1.0 : -1.0;
  f.objective_sign = sign;
  for (std::size_t j = 0; j < vars.size(); ++j) {
    f.objective.push_back(sign * m.objective()[j]);
    f.lower.push_back(vars[j].lower);
    f.upper.push_back(vars[j].upper);
    f.integer.push_back(vars[j].kind == milp::VarKind::binary);
  }
  for (const milp::LinearConstraint& c : m.constraints()) {
    if (c.terms.empty()) {
      const bool ok = (c.sense == milp::Sense::le && 0.0 <= c.rhs + 1e-9) ||
                      (c.sense == milp::Sense::ge && 0.0 >= c.rhs - 1e-9) ||
                      (c.sense == milp::Sense::eq && std::abs(c.rhs) <= 1e-9);
      if (!ok) f.infeasible = true;
      continue;
    }
    if (c.terms.size() == 1) {
      const int j = c.terms.front().var.index;
      const double a = c.terms.front().coef;
      const double v = c.rhs / a;
      milp::Sense s = c.sense;
      if (a < 0 && s != milp::Sense::eq) s = s == milp::Sense::le ? milp::Sense::ge : milp::Sense::le;
      if (s != milp::Sense::ge) f.upper[j] = std::min(f.upper[j], v);
      if (s != milp::Sense::le) f.lower[j] = std::max(f.lower[j], v);
      continue;
    }
    std::vector<std::pair<int, double>> row;
    row.reserve(c.terms.size());
    for (const milp::Term& t : c.terms) row.emplace_back(t.var.index, t.coef);
    f.rows.push_back(std::move(row));
    f.senses.push_back(c.sense);
    f.rhs.push_back(c.rhs);
  }
  for (std::size_t j = 0; j < vars.size(); ++j) {
    if (f.integer[j]) {
      f.lower[j] = std::ceil(f.lower[j] - 1e-9);
      f.upper[j] = std::floor(f.upper[j] + 1e-9);
    }
    if (f.lower[j] > f.upper[j] + 1e-9) f.infeasible = true;
    if (f.lower[j] > f.upper[j]) f.upper[j] = f.lower[j];
  }
  return f;
}

DenseSimplex::DenseSimplex(const LpStandardForm& lp, SimplexOptions opts)
    : lp_(std::make_shared<const LpStandardForm>(lp)), opts_(opts) {
  m_ = lp.num_rows();
  n_ = lp.num_cols();
  ncols_ = n_ + m_;
  tab_.assign(static_cast<std::size_t>(m_) * ncols_, 0.0);
  lo_.assign(ncols_, 0.0);
  hi_.assign(ncols_, 0.0);
  cost_.assign(ncols_, 0.0);
  for (int j = 0; j < n_; ++j) {
    lo_[j] = lp.lower[j];
    hi_[j] = lp.upper[j];
    cost_[j] = lp.objective[j];
  }
  cols_.resize(n_);
  for (int i = 0; i < m_; ++i) {
    for (auto [j, a] : lp.rows[i]) {
      at(i, j) += a;
      cols_[j].emplace_back(i, a);
    }
    at(i, n_ + i) = 1.0;
    switch (lp.senses[i]) {
      case milp::Sense::le: lo_[n_ + i] = 0.0; hi_[n_ + i] = kInf; break;
      case milp::Sense::ge: lo_[n_ + i] = -kInf; hi_[n_ + i] = 0.0; break;
      case milp::Sense::eq: lo_[n_ + i] = 0.0; hi_[n_ + i] = 0.0; break;
    }
  }
  x_.assign(ncols_, 0.0);
  d_.assign(ncols_, 0.0);
  head_.assign(m_, 0);
  state_.assign(ncols_, NbState::at_lower);
  nz_.reserve(ncols_);
  max_iterations_ = opts_.max_iterations > 0 ? opts_.max_iterations
                                             : 50LL * (m_ + n_) + 10000;
}

void DenseSimplex::place_nonbasic(int j, bool prefer_cost_sign) {
  const bool lo_fin = std::isfinite(lo_[j]);
  const bool hi_fin = std::isfinite(hi_[j]);
  if (lo_fin && hi_fin) {
    state_[j] = (prefer_cost_sign && cost_[j] < 0 && lo_[j] != hi_[j]) ? NbState::at_upper
                                                                        : NbState::at_lower;
  } else if (lo_fin) {
    state_[j] = NbState::at_lower;
  } else if (hi_fin) {
    state_[j] = NbState::at_upper;
  } else {
    state_[j] = NbState::free_zero;
  }
  x_[j] = state_[j] == NbState::at_lower ? lo_[j]
        : state_[j] == NbState::at_upper ? hi_[j]
                                         : 0.0;
}

void DenseSimplex::reset_to_slack_basis() {
  std::fill(tab_.begin(), tab_.end(), 0.0);
  for (int i = 0; i < m_; ++i) {
    for (auto [j, a] : lp_->rows[i]) at(i, j) += a;
    at(i, n_ + i) = 1.0;
  }
  for (int j = 0; j < n_; ++j) {
    place_nonbasic(j, true);
  }
  for (int i = 0; i < m_; ++i) {
    head_[i] = n_ + i;
    state_[n_ + i] = NbState::basic;
  }
  since_reinvert_ = 0;
  recompute_basic_values();
}

// Rebuilds B^-1 [A | I] for the current basis from the original rows, so
// rounding error from earlier pivots is discarded. Returns false (leaving a
// slack basis) if the basis is numerically singular.
bool DenseSimplex::reinvert() {
  const std::vector<int> basis = head_;
  std::fill(tab_.begin(), tab_.end(), 0.0);
  for (int i = 0; i < m_; ++i) {
    for (auto [j, a] : lp_->rows[i]) at(i, j) += a;
    at(i, n_ + i) = 1.0;
  }
  for (int j : basis) state_[j] = NbState::at_lower;  // placeholder until pivoted in
  std::vector<char> done(m_, 0);
  for (int j : basis) {
    int r = -1;
    double best = 1e-9;
    for (int i = 0; i < m_; ++i) {
      if (!done[i] && std::abs(at(i, j)) > best) {
        best = std::abs(at(i, j));
        r = i;
      }
    }
    if (r < 0) {
      reset_to_slack_basis();
      return false;
    }
    pivot(r, j);
    done[r] = 1;
  }
  since_reinvert_ = 0;
  recompute_basic_values();
  recompute_reduced_costs();
  return true;
}

void DenseSimplex::recompute_basic_values() {
  // x_B = B^-1 b - sum_{j nonbasic} (B^-1 A)_j x_j; B^-1 is the logical block.
  std::vector<double> xb(m_, 0.0);
  for (int r = 0; r < m_; ++r) {
    const double* row = &tab_[static_cast<std::size_t>(r) * ncols_];
    double v = 0.0;
    for (int i = 0; i < m_; ++i) {
      const double binv = row[n_ + i];
      if (binv != 0.0) v += binv * lp_->rhs[i];
    }
    for (int j = 0; j < ncols_; ++j) {
      if (state_[j] != NbState::basic && x_[j] != 0.0 && row[j] != 0.0) v -= row[j] * x_[j];
    }
    xb[r] = v;
  }
  for (int r = 0; r < m_; ++r) x_[head_[r]] = xb[r];
}

void DenseSimplex::recompute_reduced_costs() {
  for (int j = 0; j < ncols_; ++j) d_[j] = cost_[j];
  for (int r = 0; r < m_; ++r) {
    const double cb = cost_[head_[r]];
    if (cb == 0.0) continue;
    const double* row = &tab_[static_cast<std::size_t>(r) * ncols_];
    for (int j = 0; j < ncols_; ++j) {
      if (row[j] != 0.0) d_[j] -= cb * row[j];
    }
  }
  for (int r = 0; r < m_; ++r) d_[head_[r]] = 0.0;
}

bool DenseSimplex::dual_feasible() const {
  for (int j = 0; j < ncols_; ++j) {
    switch (state_[j]) {
      case NbState::basic: break;
      case NbState::at_lower:
        if (lo_[j] != hi_[j] && d_[j] < -opts_.dual_tol) return false;
        break;
      case NbState::at_upper:
        if (lo_[j] != hi_[j] && d_[j] > opts_.dual_tol) return false;
        break;
      case NbState::free_zero:
        if (std::abs(d_[j]) > opts_.dual_tol) return false;
        break;
    }
  }
  return true;
}

// Recomputes tableau entry (r, q) as row r of the inverse times column q of
// the original rows and compares it with the stored value.
bool DenseSimplex::pivot_consistent(int r, int q) const {
  if (q >= n_) return true;  // a logical column's entry is the inverse itself
  const double* row = &tab_[static_cast<std::size_t>(r) * ncols_ + n_];
  double v = 0.0;
  for (auto [i, a] : cols_[q]) v += row[i] * a;
  return std::abs(v - at(r, q)) <= kPivotCheckTol * (1.0 + std::abs(v));
}

void DenseSimplex::pivot(int r, int q) {
  double* prow = &tab_[static_cast<std::size_t>(r) * ncols_];
  const double inv = 1.0 / prow[q];
  nz_.clear();
  for (int j = 0; j < ncols_; ++j) {
    if (prow[j] != 0.0) {
      prow[j] *= inv;
      if (std::abs(prow[j]) < kDropTol) {
        prow[j] = 0.0;
      } else {
        nz_.push_back(j);
      }
    }
  }
  prow[q] = 1.0;
  for (int i = 0; i < m_; ++i) {
    if (i == r) continue;
    double* row = &tab_[static_cast<std::size_t>(i) * ncols_];
    const double f = row[q];
    if (f == 0.0) continue;
    for (int j : nz_) {
      double v = row[j] - f * prow[j];
      row[j] = std::abs(v) < kDropTol ? 0.0 : v;
    }
    row[q] = 0.0;
  }
  const double fd = d_[q];
  if (fd != 0.0) {
    for (int j : nz_) d_[j] -= fd * prow[j];
  }
  d_[q] = 0.0;
  head_[r] = q;
  state_[q] = NbState::basic;
  ++since_reinvert_;
}

void DenseSimplex::move_nonbasic(int j, double new_value) {
  const double delta = new_value - x_[j];
  if (delta != 0.0) {
    for (int r = 0; r < m_; ++r) {
      const double a = at(r, j);
      if (a != 0.0) x_[head_[r]] -= a * delta;
    }
  }
  x_[j] = new_value;
}

double DenseSimplex::infeasibility(int r) const {
  const int p = head_[r];
  const double v = x_[p];
  if (v < lo_[p] - opts_.primal_tol * (1.0 + std::abs(lo_[p]))) return lo_[p] - v;
  if (v > hi_[p] + opts_.primal_tol * (1.0 + std::abs(hi_[p]))) return v - hi_[p];
  return 0.0;
}

double DenseSimplex::objective() const {
  double sum = 0.0;
  for (int j = 0; j < n_; ++j) sum += lp_->objective[j] * x_[j];
  return sum;
}

std::vector<double> DenseSimplex::primal_values() const {
  return std::vector<double>(x_.begin(), x_.begin() + n_);
}

LpStatus DenseSimplex::dual_simplex() {
  bool bland = false;
  int stall = 0;
  double last_obj = -kInf;
  double least_total = kInf;
  int since_refresh = 0;
  for (;;) {
    if (iterations_ >= max_iterations_) return LpStatus::iteration_limit;
    if (++since_refresh >= kRefreshEvery) {
      recompute_basic_values();
      recompute_reduced_costs();
      since_refresh = 0;
    }
    int r = -1;
    double best = 0.0;
    double total = 0.0;
    for (int i = 0; i < m_; ++i) {
      const double inf = infeasibility(i);
      if (inf <= 0.0) continue;
      total += inf;
      if (bland) {
        if (r < 0 || head_[i] < head_[r]) r = i;
      } else if (inf > best) {
        best = inf;
        r = i;
      }
    }
    if (r < 0) return LpStatus::optimal;

    const int p = head_[r];
    const bool below = x_[p] < lo_[p];
    const double target = below ? lo_[p] : hi_[p];
    const double* prow = &tab_[static_cast<std::size_t>(r) * ncols_];

    // Harris two-pass test: the first pass finds the largest step that keeps
    // every reduced cost within tolerance, the second takes the biggest pivot
    // inside that step.
    auto eligible = [&](int j) {
      const NbState s = state_[j];
      if (s == NbState::basic || lo_[j] == hi_[j]) return false;
      const double a = prow[j];
      if (std::abs(a) <= opts_.pivot_tol) return false;
      if (s == NbState::free_zero) return true;
      if (below) return (s == NbState::at_lower && a < 0) || (s == NbState::at_upper && a > 0);
      return (s == NbState::at_lower && a > 0) || (s == NbState::at_upper && a < 0);
    };
    int q = -1;
    if (bland) {
      double best_ratio = kInf;
      for (int j = 0; j < ncols_; ++j) {
        if (!eligible(j)) continue;
        const double ratio = std::abs(d_[j]) / std::abs(prow[j]);
        if (ratio < best_ratio - 1e-12) {
          best_ratio = ratio;
          q = j;
        }
      }
    } else {
      double bound = kInf;
      for (int j = 0; j < ncols_; ++j) {
        if (eligible(j)) bound = std::min(bound, (std::abs(d_[j]) + opts_.dual_tol) / std::abs(prow[j]));
      }
      double best_abs = 0.0;
      for (int j = 0; j < ncols_; ++j) {
        if (!eligible(j) || std::abs(d_[j]) / std::abs(prow[j]) > bound) continue;
        if (std::abs(prow[j]) > best_abs) {
          best_abs = std::abs(prow[j]);
          q = j;
        }
      }
    }
    if (q < 0) {
      // Only trust the verdict on a freshly inverted tableau.
      if (since_reinvert_ == 0) return LpStatus::infeasible;
      if (!reinvert()) return LpStatus::numerical_failure;
      continue;
    }

    if (since_reinvert_ > 0 && !pivot_consistent(r, q)) {
      if (!reinvert()) return LpStatus::numerical_failure;
      continue;
    }
    const double dx = (x_[p] - target) / prow[q];
    for (int i = 0; i < m_; ++i) {
      const double a = at(i, q);
      if (a != 0.0) x_[head_[i]] -= a * dx;
    }
    x_[q] += dx;
    pivot(r, q);
    x_[p] = target;
    state_[p] = below ? NbState::at_lower : NbState::at_upper;
    ++iterations_;

    double obj = 0.0;
    for (int j = 0; j < ncols_; ++j) obj += cost_[j] * x_[j];
    if (obj > last_obj + 1e-12 * (1.0 + std::abs(obj))) {
      stall = 0;
      last_obj = obj;
    } else if (total < least_total - 1e-9 * (1.0 + total)) {
      stall = 0;
      least_total = total;
    } else if (++stall >= opts_.stall_threshold) {
      bland = true;
    }
  }
}

// Shifts each nonbasic cost away from zero reduced cost by a small,
// column-dependent amount, runs dual simplex, then puts the true costs back.
// Any dual infeasibility left over is cleaned up by the caller.
LpStatus DenseSimplex::perturbed_dual_simplex() {
  const std::vector<double> base = cost_;
  for (int j = 0; j < ncols_; ++j) {
    if (state_[j] == NbState::basic || state_[j] == NbState::free_zero || lo_[j] == hi_[j]) continue;
    const double frac = std::fmod(0.6180339887498949 * (j + 1), 1.0);
    const double delta = kPerturb * (1.0 + std::abs(base[j])) * (0.5 + frac);
    const double sign = state_[j] == NbState::at_lower ? 1.0 : -1.0;
    cost_[j] += sign * delta;
    d_[j] += sign * delta;
  }
  const LpStatus s = dual_simplex();
  cost_ = base;
  recompute_reduced_costs();
  return s;
}

LpStatus DenseSimplex::primal_simplex() {
  bool bland = false;
  int stall = 0;
  double last_obj = kInf;
  int since_refresh = 0;
  for (;;) {
    if (iterations_ >= max_iterations_) return LpStatus::iteration_limit;
    if (++since_refresh >= kRefreshEvery) {
      recompute_basic_values();
      recompute_reduced_costs();
      since_refresh = 0;
    }
    int q = -1;
    double dir = 0.0;
    double best = 0.0;
    for (int j = 0; j < ncols_; ++j) {
      const NbState s = state_[j];
      if (s == NbState::basic || lo_[j] == hi_[j]) continue;
      const double dj = d_[j];
      double gain = 0.0;
      double dj_dir = 0.0;
      if ((s == NbState::at_lower || s == NbState::free_zero) && dj < -opts_.dual_tol) {
        gain = -dj;
        dj_dir = 1.0;
      } else if ((s == NbState::at_upper || s == NbState::free_zero) && dj > opts_.dual_tol) {
        gain = dj;
        dj_dir = -1.0;
      }
      if (gain <= 0.0) continue;
      if (bland) {
        q = j;
        dir = dj_dir;
        break;
      }
      if (gain > best) {
        best = gain;
        q = j;
        dir = dj_dir;
      }
    }
    if (q < 0) return LpStatus::optimal;

    double theta = (std::isfinite(lo_[q]) && std::isfinite(hi_[q])) ? hi_[q] - lo_[q] : kInf;
    int leave = -1;
    bool leave_to_upper = false;
    // Same two passes as the dual test, over the basic variables' bounds.
    auto limit = [&](int i, bool relaxed) {
      const double a = at(i, q);
      if (std::abs(a) <= opts_.pivot_tol) return kInf;
      const int b = head_[i];
      const double rate = -a * dir;
      if (rate < 0 && std::isfinite(lo_[b])) {
        const double slack = relaxed ? opts_.primal_tol * (1.0 + std::abs(lo_[b])) : 0.0;
        return std::max(x_[b] - lo_[b] + slack, 0.0) / -rate;
      }
      if (rate > 0 && std::isfinite(hi_[b])) {
        const double slack = relaxed ? opts_.primal_tol * (1.0 + std::abs(hi_[b])) : 0.0;
        return std::max(hi_[b] - x_[b] + slack, 0.0) / rate;
      }
      return kInf;
    };
    if (bland) {
      for (int i = 0; i < m_; ++i) {
        const double lim = limit(i, false);
        if (lim < theta - 1e-12 || (lim <= theta + 1e-12 && leave >= 0 && head_[i] < head_[leave])) {
          theta = std::min(lim, theta);
          leave = i;
        }
      }
    } else {
      double bound = theta;
      for (int i = 0; i < m_; ++i) bound = std::min(bound, limit(i, true));
      double best_abs = 0.0;
      for (int i = 0; i < m_; ++i) {
        const double lim = limit(i, false);
        if (lim > bound || std::abs(at(i, q)) <= best_abs) continue;
        best_abs = std::abs(at(i, q));
        leave = i;
      }
      if (leave >= 0 && limit(leave, false) <= theta) {
        theta = limit(leave, false);
      } else {
        leave = -1;
      }
    }
    if (leave >= 0) leave_to_upper = -at(leave, q) * dir > 0;
    if (!std::isfinite(theta)) {
      if (since_reinvert_ == 0) return LpStatus::unbounded;
      if (!reinvert()) return LpStatus::numerical_failure;
      continue;
    }

    if (leave >= 0 && since_reinvert_ > 0 && !pivot_consistent(leave, q)) {
      if (!reinvert()) return LpStatus::numerical_failure;
      continue;
    }
    const double step = dir * theta;
    for (int i = 0; i < m_; ++i) {
      const double a = at(i, q);
      if (a != 0.0) x_[head_[i]] -= a * step;
    }
    x_[q] += step;
    if (leave < 0) {
      state_[q] = dir > 0 ? NbState::at_upper : NbState::at_lower;
      x_[q] = dir > 0 ? hi_[q] : lo_[q];
    } else {
      const int p = head_[leave];
      pivot(leave, q);
      state_[p] = leave_to_upper ? NbState::at_upper : NbState::at_lower;
      x_[p] = leave_to_upper ? hi_[p] : lo_[p];
    }
    ++iterations_;

    const double obj = objective();
    if (obj < last_obj - 1e-12 * (1.0 + std::abs(obj))) {
      stall = 0;
      last_obj = obj;
    } else if (++stall >= opts_.stall_threshold) {
      bland = true;
    }
  }
}

LpStatus DenseSimplex::verify_and_finish(LpStatus s) {
  // An "optimal" claim is re-checked against the original rows; drift is
  // repaired by re-running the matching algorithm a bounded number of times.
  for (int attempt = 0; s == LpStatus::optimal && attempt < 3; ++attempt) {
    recompute_basic_values();
    recompute_reduced_costs();
    bool primal_ok = true;
    for (int r = 0; r < m_ && primal_ok; ++r) {
      const int p = head_[r];
      const double scale = 1.0 + std::max(std::abs(x_[p]), 1.0);
      if (x_[p] < lo_[p] - kVerifyTol * scale || x_[p] > hi_[p] + kVerifyTol * scale) primal_ok = false;
    }
    for (int i = 0; i < m_ && primal_ok; ++i) {
      double act = 0.0;
      for (auto [j, a] : lp_->rows[i]) act += a * x_[j];
      const double slack = lp_->rhs[i] - act;
      const double scale = 1.0 + std::abs(lp_->rhs[i]);
      if (slack < lo_[n_ + i] - 1e-6 * scale || slack > hi_[n_ + i] + 1e-6 * scale) primal_ok = false;
    }
    const bool dual_ok = dual_feasible();
    if (primal_ok && dual_ok) {
      status_ = LpStatus::optimal;
      return status_;
    }
    if (since_reinvert_ > 0 && !reinvert()) break;
    if (!primal_ok) {
      s = dual_feasible() ? dual_simplex() : primal_simplex();
    } else {
      s = primal_simplex();
    }
  }
  if (s == LpStatus::optimal) s = LpStatus::numerical_failure;
  status_ = s;
  return s;
}

// Uses the current bounds, so branch-and-bound may call it after set_bounds.
LpStatus DenseSimplex::solve() {
  if (lp_->infeasible) {
    status_ = LpStatus::infeasible;
    return status_;
  }
  for (int j = 0; j < n_; ++j) cost_[j] = lp_->objective[j];
  reset_to_slack_basis();
  recompute_reduced_costs();
  if (dual_feasible()) return verify_and_finish(perturbed_dual_simplex());

  // Phase one: with zero costs every basis is dual feasible, so dual simplex
  // either reaches a primal feasible basis or proves infeasibility.
  std::fill(cost_.begin(), cost_.end(), 0.0);
  std::fill(d_.begin(), d_.end(), 0.0);
  for (int j = 0; j < n_; ++j) {
    if (state_[j] != NbState::basic) place_nonbasic(j, false);
  }
  recompute_basic_values();
  LpStatus s = perturbed_dual_simplex();
  for (int j = 0; j < n_; ++j) cost_[j] = lp_->objective[j];
  if (s != LpStatus::optimal) {
    status_ = s;
    return s;
  }
  recompute_reduced_costs();
  return verify_and_finish(primal_simplex());
}

void DenseSimplex::set_bounds(int j, double lower, double upper) {
  lo_[j] = lower;
  hi_[j] = upper;
  if (state_[j] == NbState::basic) return;
  // The new resting bound follows the reduced-cost sign, which keeps a
  // dual-feasible basis dual feasible.
  const bool lo_fin = std::isfinite(lower);
  const bool hi_fin = std::isfinite(upper);
  double v = 0.0;
  if (lo_fin && (!hi_fin || lower == upper || d_[j] >= 0.0)) {
    state_[j] = NbState::at_lower;
    v = lower;
  } else if (hi_fin) {
    state_[j] = NbState::at_upper;
    v = upper;
  } else {
    state_[j] = NbState::free_zero;
  }
  move_nonbasic(j, v);
}

LpStatus DenseSimplex::reoptimize() {
  if (lp_->infeasible) {
    status_ = LpStatus::infeasible;
    return status_;
  }
  for (int j = 0; j < n_; ++j) {
    if (lo_[j] > hi_[j] + 1e-12) {
      status_ = LpStatus::infeasible;
      return status_;
    }
  }
  if (status_ != LpStatus::optimal || !dual_feasible()) return solve();
  return verify_and_finish(perturbed_dual_simplex());
}

LpSolution solve_lp(const LpStandardForm& f, SimplexOptions opts) {
  DenseSimplex s(f, opts);
  LpSolution out;
  out.status = s.solve();
  out.iterations = s.iterations();
  if (out.status == LpStatus::optimal) {
    out.values = s.primal_values();
    out.objective = s.objective();
  }
  return out;
}

}  // namespace shuffleopt::lp
