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

// Seeded corpus of small pure-binary models plus an exhaustive enumerator,
// shared by the solver unit tests and the acceptance suite.

#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "shuffleopt/milp_model.hpp"

namespace shuffleopt::testing {

/// Instance `index` of the corpus: 4 to 12 binaries, 1 to 5 rows with small
/// integer coefficients, mixed senses and directions. Deterministic.
inline milp::Model tiny_milp(int index) {
  std::mt19937_64 rng(0x5eedULL + static_cast<std::uint64_t>(index) * 7919ULL);
  auto pick = [&](int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng);
  };
  milp::Model m;
  const int n = 4 + index % 9;
  const int rows = 1 + pick(0, 4);
  std::vector<milp::VarId> b;
  for (int j = 0; j < n; ++j) {
    b.push_back(m.add_variable({"b" + std::to_string(j), milp::VarKind::binary, 0.0, 1.0}));
  }
  for (int i = 0; i < rows; ++i) {
    std::vector<milp::Term> t;
    int positive = 0;
    for (int j = 0; j < n; ++j) {
      const int c = pick(-3, 9);
      if (c != 0 && pick(0, 3) != 0) {
        t.push_back({b[j], static_cast<double>(c)});
        if (c > 0) positive += c;
      }
    }
    const int kind = pick(0, 5);
    const milp::Sense s = kind < 4 ? milp::Sense::le : (kind == 4 ? milp::Sense::ge : milp::Sense::eq);
    double rhs = 0.0;
    if (s == milp::Sense::le) rhs = pick(positive / 4, positive / 2 + 1);
    if (s == milp::Sense::ge) rhs = pick(1, positive / 3 + 2);
    if (s == milp::Sense::eq) rhs = pick(0, positive / 2 + 1);
    m.add_constraint({"r" + std::to_string(i), t, s, rhs}, "random row");
  }
  std::vector<milp::Term> obj;
  for (int j = 0; j < n; ++j) obj.push_back({b[j], static_cast<double>(pick(-4, 12))});
  m.set_objective(index % 2 == 0 ? milp::Direction::maximize : milp::Direction::minimize, obj);
  return m;
}

/// Exhaustive optimum over all 0/1 points of a pure-binary model; nullopt
/// when no point satisfies every row.
inline std::optional<double> enumerate_optimum(const milp::Model& m) {
  const int n = static_cast<int>(m.num_variables());
  const bool maximize = m.direction() == milp::Direction::maximize;
  std::optional<double> best;
  std::vector<double> x(n);
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    bool inside = true;
    for (int j = 0; j < n; ++j) {
      x[j] = (mask >> j) & 1u;
      const milp::Variable& v = m.variables()[j];
      if (x[j] < v.lower || x[j] > v.upper) inside = false;
    }
    for (const milp::LinearConstraint& c : m.constraints()) {
      if (!inside) break;
      double act = 0.0;
      for (const milp::Term& t : c.terms) act += t.coef * x[t.var.index];
      if (c.sense == milp::Sense::le && act > c.rhs + 1e-9) inside = false;
      if (c.sense == milp::Sense::ge && act < c.rhs - 1e-9) inside = false;
      if (c.sense == milp::Sense::eq && std::abs(act - c.rhs) > 1e-9) inside = false;
    }
    if (!inside) continue;
    const double obj = m.objective_value(x);
    if (!best || (maximize ? obj > *best : obj < *best)) best = obj;
  }
  return best;
}

inline constexpr int kTinyCorpusSize = 50;

}  // namespace shuffleopt::testing
