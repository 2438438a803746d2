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

// Runs a model through an external MILP solver process.
//
// A solver is described by a command template: an argv whose elements may
// contain the placeholders {lp}, {out}, {time} and {gap}. The model is
// written as LP text to {lp}; the process writes its native solution to
// {out}; a per-adapter normalizer turns that file into the adapter format of
// lp_text.hpp. Two adapters are bundled:
//
//   cbc    the COIN-OR CBC command line program;
//   highs  tools/highs_adapter.py, which drives the HiGHS Python bindings and
//          already writes the adapter format.
//
// The environment variables SHUFFLEOPT_CBC and SHUFFLEOPT_HIGHS override the
// program (CBC binary) and script (HiGHS adapter) locations.

#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "shuffleopt/milp_model.hpp"

namespace shuffleopt::ext {

class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Normalizer { adapter_format, cbc };

struct SolverCommand {
  std::string name;
  std::vector<std::string> argv;  // argv[0] is resolved through PATH
  Normalizer normalizer = Normalizer::adapter_format;
};

struct ExternalLimits {
  double time_s = 60.0;
  double gap = 1e-9;  // relative optimality gap passed to the solver
};

/// Bundled adapter by name ("cbc" or "highs"); nullopt when the program or
/// script cannot be located on this host.
std::optional<SolverCommand> find_solver(std::string_view name);

/// Names of the bundled adapters usable on this host, preferred first.
std::vector<std::string> available_solvers();

/// Writes the LP file, runs the process and parses its answer. The process
/// is killed after limits.time_s plus a grace period; a killed run reports
/// status limit. Files go to `workdir` when given (kept afterwards), else to
/// a fresh temporary directory that is removed. Throws SolverError when the
/// process cannot start, exits abnormally, or produces unreadable output.
milp::Assignment solve_external(const milp::Model& m, const SolverCommand& cmd,
                                const ExternalLimits& limits = {},
                                const std::optional<std::filesystem::path>& workdir = std::nullopt);

/// Converts a CBC `solu` file into adapter format text for model `m`.
std::string normalize_cbc(std::string_view native, const milp::Model& m);

}  // namespace shuffleopt::ext
