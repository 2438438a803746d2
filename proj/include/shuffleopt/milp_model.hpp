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

// Solver-neutral mixed-integer linear model. Models are built once by a
// single writer and are immutable afterwards; every backend (the built-in
// branch-and-bound, external processes) consumes the same representation.

#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace shuffleopt::milp {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Default absolute tolerance for constraint activity and integrality.
inline constexpr double kFeasibilityTol = 1e-6;

class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class VarKind { continuous, binary };
enum class Sense { le, eq, ge };
enum class Direction { minimize, maximize };
enum class SolveStatus { optimal, feasible, infeasible, unbounded, limit };

std::string_view to_string(SolveStatus s);
std::optional<SolveStatus> parse_status(std::string_view token);
std::string_view to_string(Sense s);

struct VarId {
  int index = -1;
  friend bool operator==(VarId, VarId) = default;
};

struct ConId {
  int index = -1;
  friend bool operator==(ConId, ConId) = default;
};

struct Variable {
  std::string name;
  VarKind kind = VarKind::continuous;
  double lower = 0.0;
  double upper = kInfinity;
};

struct Term {
  VarId var;
  double coef = 0.0;
};

struct LinearConstraint {
  std::string name;
  std::vector<Term> terms;  // canonical: one entry per variable, no zeros
  Sense sense = Sense::le;
  double rhs = 0.0;
};

class Model {
 public:
  /// Throws ModelError on a duplicate or malformed name, or invalid bounds.
  VarId add_variable(Variable spec);

  /// Merges repeated variables and drops zero coefficients. `annotation`
  /// records which constraint family produced the row. Throws ModelError
  /// when a term references an undeclared variable or rhs is not finite.
  ConId add_constraint(LinearConstraint c, std::string annotation);

  void set_objective(Direction dir, const std::vector<Term>& terms,
                     std::string annotation = "objective");

  std::size_t num_variables() const { return vars_.size(); }
  std::size_t num_constraints() const { return cons_.size(); }
  const std::vector<Variable>& variables() const { return vars_; }
  const std::vector<LinearConstraint>& constraints() const { return cons_; }
  const Variable& variable(VarId v) const { return vars_.at(v.index); }
  const LinearConstraint& constraint(ConId c) const { return cons_.at(c.index); }
  const std::string& annotation(ConId c) const { return annotations_.at(c.index); }
  const std::vector<std::string>& annotations() const { return annotations_; }
  const std::string& objective_annotation() const { return objective_annotation_; }
  bool is_vacuous(ConId c) const { return cons_.at(c.index).terms.empty(); }

  Direction direction() const { return direction_; }
  /// Dense objective coefficients indexed by variable.
  const std::vector<double>& objective() const { return objective_; }
  double objective_value(const std::vector<double>& values) const;

  std::optional<VarId> find(std::string_view name) const;
  std::optional<ConId> find_constraint(std::string_view name) const;

  std::size_t num_binaries() const;

 private:
  std::vector<Variable> vars_;
  std::vector<LinearConstraint> cons_;
  std::vector<std::string> annotations_;
  std::vector<double> objective_;
  Direction direction_ = Direction::minimize;
  std::string objective_annotation_ = "objective";
  std::unordered_map<std::string, int> var_index_;
  std::unordered_map<std::string, int> con_index_;
};

bool is_valid_name(std::string_view name);

/// Values are indexed by VarId. `warnings` counts variables that a parsed
/// solution did not mention (they default to zero).
struct Assignment {
  SolveStatus status = SolveStatus::infeasible;
  double objective_value = 0.0;
  std::vector<double> values;
  int warnings = 0;

  bool has_solution() const {
    return status == SolveStatus::optimal || status == SolveStatus::feasible ||
           (status == SolveStatus::limit && !values.empty());
  }
  double value(const Model& m, std::string_view name) const;
};

struct Violation {
  std::string constraint;  // constraint or variable name
  std::string kind;        // "row", "bound", "integrality", "objective"
  double magnitude = 0.0;  // amount by which the tolerance is exceeded
};

struct FeasibilityReport {
  std::vector<Violation> violations;
  double recomputed_objective = 0.0;
  bool ok() const { return violations.empty(); }
};

/// Checks rows, bounds and integrality at absolute tolerance `tol`, and the
/// reported objective at tol * (1 + |objective|).
FeasibilityReport check_assignment(const Model& m, const Assignment& a,
                                   double tol = kFeasibilityTol);

}  // namespace shuffleopt::milp
