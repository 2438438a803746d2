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

#include "shuffleopt/milp_model.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>

namespace shuffleopt::milp {

std::string_view to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::optimal: return "optimal";
    case SolveStatus::feasible: return "feasible";
    case SolveStatus::infeasible: return "infeasible";
    case SolveStatus::unbounded: return "unbounded";
    case SolveStatus::limit: return "limit";
  }
  return "unknown";
}

std::optional<SolveStatus> parse_status(std::string_view token) {
  for (auto s : {SolveStatus::optimal, SolveStatus::feasible, SolveStatus::infeasible,
                 SolveStatus::unbounded, SolveStatus::limit}) {
    if (token == to_string(s)) return s;
  }
  return std::nullopt;
}

std::string_view to_string(Sense s) {
  switch (s) {
    case Sense::le: return "<=";
    case Sense::eq: return "=";
    case Sense::ge: return ">=";
  }
  return "?";
}

bool is_valid_name(std::string_view name) {
  if (name.empty()) return false;
  auto head = static_cast<unsigned char>(name.front());
  if (!(std::isalpha(head) || head == '_')) return false;
  return std::all_of(name.begin() + 1, name.end(), [](char ch) {
    auto c = static_cast<unsigned char>(ch);
    return std::isalnum(c) || c == '_';
  });
}

VarId Model::add_variable(Variable spec) {
  if (!is_valid_name(spec.name)) throw ModelError("invalid variable name '" + spec.name + "'");
  if (var_index_.contains(spec.name)) throw ModelError("duplicate variable name '" + spec.name + "'");
  if (std::isnan(spec.lower) || std::isnan(spec.upper) || spec.lower > spec.upper) {
    throw ModelError("invalid bounds for variable '" + spec.name + "'");
  }
  if (spec.kind == VarKind::binary) {
    spec.lower = std::max(spec.lower, 0.0);
    spec.upper = std::min(spec.upper, 1.0);
    if (spec.lower > spec.upper) throw ModelError("binary '" + spec.name + "' has empty domain");
  }
  const int idx = static_cast<int>(vars_.size());
  var_index_.emplace(spec.name, idx);
  vars_.push_back(std::move(spec));
  objective_.push_back(0.0);
  return VarId{idx};
}

ConId Model::add_constraint(LinearConstraint c, std::string annotation) {
  if (!is_valid_name(c.name)) throw ModelError("invalid constraint name '" + c.name + "'");
  if (con_index_.contains(c.name)) throw ModelError("duplicate constraint name '" + c.name + "'");
  if (!std::isfinite(c.rhs)) throw ModelError("non-finite rhs in '" + c.name + "'");
  std::map<int, double> merged;
  for (const Term& t : c.terms) {
    if (t.var.index < 0 || t.var.index >= static_cast<int>(vars_.size())) {
      throw ModelError("constraint '" + c.name + "' references an undeclared variable");
    }
    if (!std::isfinite(t.coef)) throw ModelError("non-finite coefficient in '" + c.name + "'");
    merged[t.var.index] += t.coef;
  }
  c.terms.clear();
  for (auto [idx, coef] : merged) {
    if (coef != 0.0) c.terms.push_back(Term{VarId{idx}, coef});
  }
  if (c.terms.empty()) annotation += " [vacuous]";
  const int idx = static_cast<int>(cons_.size());
  con_index_.emplace(c.name, idx);
  cons_.push_back(std::move(c));
  annotations_.push_back(std::move(annotation));
  return ConId{idx};
}

void Model::set_objective(Direction dir, const std::vector<Term>& terms, std::string annotation) {
  direction_ = dir;
  std::fill(objective_.begin(), objective_.end(), 0.0);
  for (const Term& t : terms) {
    if (t.var.index < 0 || t.var.index >= static_cast<int>(vars_.size())) {
      throw ModelError("objective references an undeclared variable");
    }
    objective_[t.var.index] += t.coef;
  }
  objective_annotation_ = std::move(annotation);
}

double Model::objective_value(const std::vector<double>& values) const {
  double sum = 0.0;
  for (std::size_t j = 0; j < objective_.size() && j < values.size(); ++j) {
    sum += objective_[j] * values[j];
  }
  return sum;
}

std::optional<VarId> Model::find(std::string_view name) const {
  auto it = var_index_.find(std::string(name));
  if (it == var_index_.end()) return std::nullopt;
  return VarId{it->second};
}

std::optional<ConId> Model::find_constraint(std::string_view name) const {
  auto it = con_index_.find(std::string(name));
  if (it == con_index_.end()) return std::nullopt;
  return ConId{it->second};
}

std::size_t Model::num_binaries() const {
  return static_cast<std::size_t>(std::count_if(
      vars_.begin(), vars_.end(), [](const Variable& v) { return v.kind == VarKind::binary; }));
}

double Assignment::value(const Model& m, std::string_view name) const {
  auto id = m.find(name);
  if (!id) throw ModelError("unknown variable '" + std::string(name) + "'");
  if (id->index >= static_cast<int>(values.size())) return 0.0;
  return values[id->index];
}

FeasibilityReport check_assignment(const Model& m, const Assignment& a, double tol) {
  FeasibilityReport rep;
  const auto& vars = m.variables();
  std::vector<double> x(vars.size(), 0.0);
  for (std::size_t j = 0; j < vars.size() && j < a.values.size(); ++j) x[j] = a.values[j];
  if (a.values.size() < vars.size()) {
    rep.violations.push_back({"<values>", "missing", static_cast<double>(vars.size() - a.values.size())});
  }

  for (std::size_t j = 0; j < vars.size(); ++j) {
    const Variable& v = vars[j];
    if (x[j] < v.lower - tol) rep.violations.push_back({v.name, "bound", v.lower - x[j]});
    if (x[j] > v.upper + tol) rep.violations.push_back({v.name, "bound", x[j] - v.upper});
    if (v.kind == VarKind::binary) {
      double frac = std::min(std::abs(x[j]), std::abs(x[j] - 1.0));
      if (frac > tol) rep.violations.push_back({v.name, "integrality", frac});
    }
  }

  for (const LinearConstraint& c : m.constraints()) {
    double act = 0.0;
    for (const Term& t : c.terms) act += t.coef * x[t.var.index];
    double excess = 0.0;
    switch (c.sense) {
      case Sense::le: excess = act - c.rhs; break;
      case Sense::ge: excess = c.rhs - act; break;
      case Sense::eq: excess = std::abs(act - c.rhs); break;
    }
    if (excess > tol) rep.violations.push_back({c.name, "row", excess});
  }

  rep.recomputed_objective = m.objective_value(x);
  double diff = std::abs(rep.recomputed_objective - a.objective_value);
  if (diff > tol * (1.0 + std::abs(rep.recomputed_objective))) {
    rep.violations.push_back({"<objective>", "objective", diff});
  }
  return rep;
}

}  // namespace shuffleopt::milp
