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

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include "shuffleopt/milp_model.hpp"

namespace shuffleopt::milp {

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Canonical CPLEX-style LP text. Sections appear in the order Minimize /
/// Maximize, Subject To, Bounds, Binaries (omitted when empty), End.
/// Variables and rows keep declaration order and numbers use 17 significant
/// digits. Every variable is listed under Bounds or Binaries so readers see
/// the full column set.
std::string write_lp(const Model& m);

/// Reads the subset of CPLEX LP that write_lp emits, plus the common
/// variations: section keywords in any case (`st`, `s.t.`, `such that`),
/// unnamed rows (named c1, c2, ...), terms wrapped over several lines,
/// `\` comments, one-sided and `free` bounds, `inf`/`infinity`, and a
/// Generals section whose members must fit in [0, 1]. Variables are
/// declared in order of first appearance, continuous on [0, inf) unless
/// bounded or listed as binary. Rows get the annotation "lp_row". Throws
/// FormatError with a line number on anything else.
Model read_lp(std::string_view text);

/// Parses the adapter solution format:
///
///   status <optimal|feasible|infeasible|unbounded|limit>
///   objective <real>
///   <name> <real>          (one line per variable)
///
/// Blank lines and lines starting with '#' are ignored. Variables absent from
/// the text are set to zero and counted in Assignment::warnings. Throws
/// FormatError on malformed lines, unknown status tokens or unknown names.
Assignment parse_solution(std::string_view text, const Model& m);

/// Inverse of parse_solution, used by adapters and tests.
std::string format_solution(const Model& m, const Assignment& a);

/// `%.17g` with negative zero folded to "0".
std::string format_number(double v);

}  // namespace shuffleopt::milp
