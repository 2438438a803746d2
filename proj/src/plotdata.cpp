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


#include "shuffleopt/plotdata.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>
#include <tuple>

namespace shuffleopt::plotdata {
namespace {

namespace fs = std::filesystem;

std::vector<std::string> split(std::string_view line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    out.emplace_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

std::optional<double> cell_number(const std::string& s, const std::string& column, std::size_t line_no) {
  if (s.empty()) return std::nullopt;
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0' || std::isnan(v)) {
    throw SchemaError("line " + std::to_string(line_no) + ": column '" + column + "' holds '" + s + "'");
  }
  return v;
}

struct Point {
  std::string topology, objective, rho, seed;
  double volume = 0.0;
  std::optional<double> E, M;
};

// Series key without the metric suffix.
using Key = std::tuple<std::string, std::string, std::string, std::string>;  // topology, objective, rho, tag

std::vector<Point> read_points(std::string_view csv) {
  std::vector<std::string> lines;
  while (!csv.empty()) {
    const std::size_t nl = csv.find('\n');
    std::string line(csv.substr(0, nl));
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
    csv = nl == std::string_view::npos ? std::string_view{} : csv.substr(nl + 1);
  }
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  if (lines.empty()) throw SchemaError("results are empty");
  const std::vector<std::string> header = split(lines.front());
  std::map<std::string, std::size_t> col;
  for (std::size_t i = 0; i < header.size(); ++i) col[header[i]] = i;
  for (const char* need : {"topology", "objective", "rho", "total_gbits", "skew_seed", "E_joules", "M_seconds"}) {
    if (!col.count(need)) throw SchemaError(std::string("results are missing column '") + need + "'");
  }
  if (lines.size() == 1) throw SchemaError("results are empty");
  std::vector<Point> out;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    const std::vector<std::string> f = split(lines[i]);
    if (f.size() != header.size()) {
      throw SchemaError("line " + std::to_string(i + 1) + ": expected " + std::to_string(header.size()) +
                        " fields, found " + std::to_string(f.size()));
    }
    Point p;
    p.topology = f[col["topology"]];
    p.objective = f[col["objective"]];
    p.rho = f[col["rho"]];
    p.seed = f[col["skew_seed"]];
    const auto volume = cell_number(f[col["total_gbits"]], "total_gbits", i + 1);
    if (!volume) throw SchemaError("line " + std::to_string(i + 1) + ": column 'total_gbits' is blank");
    p.volume = *volume;
    p.E = cell_number(f[col["E_joules"]], "E_joules", i + 1);
    p.M = cell_number(f[col["M_seconds"]], "M_seconds", i + 1);
    out.push_back(std::move(p));
  }
  return out;
}

std::string format(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

using Series = std::map<double, double>;  // volume -> value

SeriesFile write_series(const fs::path& dir, const std::string& name, const Series& s) {
  SeriesFile f{dir / (name + ".csv"), s.size()};
  std::ofstream out(f.path, std::ios::binary);
  out << "volume_gbits,value\n";
  for (const auto& [v, y] : s) out << format(v) << ',' << format(y) << '\n';
  if (!out) throw std::runtime_error("cannot write " + f.path.string());
  return f;
}

std::string stem(const Key& k) {
  const auto& [topology, objective, rho, tag] = k;
  std::string s = topology + "_" + objective + "_rho" + rho;
  if (!tag.empty()) s += "_" + tag;
  return s;
}

}  // namespace

const std::vector<std::string>& figure_kinds() {
  static const std::vector<std::string> kinds = {"volume", "skew"};
  return kinds;
}

std::vector<SeriesFile> emit_plotdata(std::string_view results_csv, std::string_view figure,
                                      const fs::path& out_dir) {
  const auto& kinds = figure_kinds();
  if (std::find(kinds.begin(), kinds.end(), figure) == kinds.end()) {
    throw SchemaError("unknown figure kind '" + std::string(figure) + "' (expected volume or skew)");
  }
  const std::vector<Point> points = read_points(results_csv);
  const bool skew = figure == "skew";

  std::map<Key, std::pair<Series, Series>> series;  // (E, M)
  for (const Point& p : points) {
    const bool uniform = p.seed == "none" || p.seed.empty();
    if (skew && uniform) continue;
    auto& [E, M] = series[{p.topology, p.objective, p.rho, uniform ? "" : "seed" + p.seed}];
    if (p.E) E[p.volume] = *p.E;
    if (p.M) M[p.volume] = *p.M;
  }
  if (series.empty()) throw SchemaError("results hold no skewed runs");

  if (skew) {
    std::map<Key, std::pair<Series, Series>> lo, hi;
    for (const auto& [k, em] : series) {
      const auto& [topology, objective, rho, tag] = k;
      auto fold = [](Series& lo_s, Series& hi_s, const Series& s) {
        for (const auto& [v, y] : s) {
          auto [it, fresh] = lo_s.emplace(v, y);
          if (!fresh) it->second = std::min(it->second, y);
          auto [jt, fresh2] = hi_s.emplace(v, y);
          if (!fresh2) jt->second = std::max(jt->second, y);
        }
      };
      fold(lo[{topology, objective, rho, "min"}].first, hi[{topology, objective, rho, "max"}].first, em.first);
      fold(lo[{topology, objective, rho, "min"}].second, hi[{topology, objective, rho, "max"}].second, em.second);
    }
    series.insert(lo.begin(), lo.end());
    series.insert(hi.begin(), hi.end());
  }

  fs::create_directories(out_dir);
  std::vector<SeriesFile> files;
  for (const auto& [k, em] : series) {
    files.push_back(write_series(out_dir, stem(k) + "_E", em.first));
    files.push_back(write_series(out_dir, stem(k) + "_M", em.second));
  }
  return files;
}

}  // namespace shuffleopt::plotdata
