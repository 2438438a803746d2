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


// Turns a results CSV into two-column series files for external plotting.
//
// Figure kinds:
//   volume  one series per (topology, objective, rho, skew seed) and metric,
//           named <topology>_<objective>_rho<rho>[_seed<k>]_<E|M>.csv
//   skew    skewed rows only; per seed series as above plus the pointwise
//           envelope, <topology>_<objective>_rho<rho>_<min|max>_<E|M>.csv
//
// Every file starts with the header `volume_gbits,value` and lists points by
// increasing volume. Rows without a verified value are left out.

#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace shuffleopt::plotdata {

class SchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SeriesFile {
  std::filesystem::path path;
  std::size_t points = 0;
};

/// Throws SchemaError on an unknown figure kind, a results file with no
/// data rows, a missing column (named in the message) or a malformed
/// number.
std::vector<SeriesFile> emit_plotdata(std::string_view results_csv, std::string_view figure,
                                      const std::filesystem::path& out_dir);

const std::vector<std::string>& figure_kinds();

}  // namespace shuffleopt::plotdata
