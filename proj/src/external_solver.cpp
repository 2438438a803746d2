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

#include "shuffleopt/external_solver.hpp"

#include <fcntl.h>
#include <signal.h>
#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "shuffleopt/lp_text.hpp"

extern char** environ;

namespace shuffleopt::ext {
namespace {

namespace fs = std::filesystem;

constexpr double kGraceSeconds = 10.0;

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string env_or_empty(const char* key) {
  const char* v = std::getenv(key);
  return v ? std::string(v) : std::string();
}

bool is_executable(const fs::path& p) {
  return !p.empty() && ::access(p.c_str(), X_OK) == 0 && fs::is_regular_file(p);
}

std::optional<fs::path> search_path(const std::string& program) {
  if (program.find('/') != std::string::npos) {
    if (is_executable(program)) return fs::path(program);
    return std::nullopt;
  }
  std::stringstream dirs(env_or_empty("PATH"));
  std::string dir;
  while (std::getline(dirs, dir, ':')) {
    fs::path candidate = fs::path(dir.empty() ? "." : dir) / program;
    if (is_executable(candidate)) return candidate;
  }
  return std::nullopt;
}

struct ProcessResult {
  bool timed_out = false;
  int exit_code = -1;
};

ProcessResult run_process(const std::vector<std::string>& argv, const fs::path& log,
                          double timeout_s) {
  posix_spawn_file_actions_t actions;
  posix_spawn_file_actions_init(&actions);
  posix_spawn_file_actions_addopen(&actions, STDOUT_FILENO, log.c_str(),
                                   O_WRONLY | O_CREAT | O_TRUNC, 0644);
  posix_spawn_file_actions_adddup2(&actions, STDOUT_FILENO, STDERR_FILENO);
  posix_spawn_file_actions_addopen(&actions, STDIN_FILENO, "/dev/null", O_RDONLY, 0);

  std::vector<char*> args;
  for (const std::string& a : argv) args.push_back(const_cast<char*>(a.c_str()));
  args.push_back(nullptr);

  pid_t pid = 0;
  const int rc = posix_spawnp(&pid, args[0], &actions, nullptr, args.data(), environ);
  posix_spawn_file_actions_destroy(&actions);
  if (rc != 0) throw SolverError("cannot start '" + argv[0] + "': " + std::strerror(rc));

  ProcessResult r;
  const auto deadline = std::chrono::steady_clock::now() +
                        std::chrono::duration<double>(timeout_s + kGraceSeconds);
  int status = 0;
  for (;;) {
    const pid_t w = ::waitpid(pid, &status, WNOHANG);
    if (w == pid) break;
    if (w < 0) throw SolverError("waitpid failed for '" + argv[0] + "'");
    if (std::chrono::steady_clock::now() > deadline) {
      ::kill(pid, SIGKILL);
      ::waitpid(pid, &status, 0);
      r.timed_out = true;
      return r;
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(5));
  }
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : 128 + WTERMSIG(status);
  return r;
}

std::string substitute(std::string s, std::string_view key, const std::string& value) {
  for (std::size_t pos = s.find(key); pos != std::string::npos; pos = s.find(key, pos + value.size())) {
    s.replace(pos, key.size(), value);
  }
  return s;
}

// Temporary directory removed with its contents on scope exit.
class TempDir {
 public:
  TempDir() {
    std::string templ = (fs::temp_directory_path() / "shuffleopt-XXXXXX").string();
    if (::mkdtemp(templ.data()) == nullptr) throw SolverError("cannot create temporary directory");
    path_ = templ;
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

bool python_has_highspy() {
  static std::once_flag once;
  static bool ok = false;
  std::call_once(once, [] {
    TempDir dir;
    try {
      ProcessResult r = run_process({"python3", "-c", "import highspy"}, dir.path() / "probe.log", 20.0);
      ok = !r.timed_out && r.exit_code == 0;
    } catch (const SolverError&) {
      ok = false;
    }
  });
  return ok;
}

std::string format_gap(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

}  // namespace

std::optional<SolverCommand> find_solver(std::string_view name) {
  if (name == "cbc") {
    std::string program = env_or_empty("SHUFFLEOPT_CBC");
#ifdef SHUFFLEOPT_DEFAULT_CBC
    if (program.empty()) program = SHUFFLEOPT_DEFAULT_CBC;
#endif
    if (program.empty()) program = "cbc";
    auto resolved = search_path(program);
    if (!resolved) return std::nullopt;
    return SolverCommand{"cbc",
                         {resolved->string(), "{lp}", "sec", "{time}", "ratioGap", "{gap}",
                          "solve", "solu", "{out}"},
                         Normalizer::cbc};
  }
  if (name == "highs") {
    std::string script = env_or_empty("SHUFFLEOPT_HIGHS");
#ifdef SHUFFLEOPT_TOOLS_DIR
    if (script.empty()) script = std::string(SHUFFLEOPT_TOOLS_DIR) + "/highs_adapter.py";
#endif
    if (script.empty() || !fs::is_regular_file(script)) return std::nullopt;
    if (!search_path("python3") || !python_has_highspy()) return std::nullopt;
    return SolverCommand{"highs",
                         {"python3", script, "{lp}", "{out}", "{time}", "{gap}"},
                         Normalizer::adapter_format};
  }
  return std::nullopt;
}

std::vector<std::string> available_solvers() {
  std::vector<std::string> out;
  for (const char* n : {"highs", "cbc"}) {
    if (find_solver(n)) out.emplace_back(n);
  }
  return out;
}

std::string normalize_cbc(std::string_view native, const milp::Model& m) {
  std::istringstream in{std::string(native)};
  std::string header;
  if (!std::getline(in, header)) throw SolverError("empty CBC solution file");
  std::string status;
  bool keep_values = true;
  if (header.rfind("Optimal", 0) == 0) {
    status = "optimal";
  } else if (header.rfind("Infeasible", 0) == 0 || header.rfind("Integer infeasible", 0) == 0) {
    status = "infeasible";
    keep_values = false;
  } else if (header.rfind("Unbounded", 0) == 0) {
    status = "unbounded";
    keep_values = false;
  } else if (header.rfind("Stopped", 0) == 0) {
    status = "limit";
    keep_values = header.find("no integer solution") == std::string::npos;
  } else {
    throw SolverError("unrecognized CBC status line: " + header);
  }

  std::vector<double> values(m.num_variables(), 0.0);
  std::string line;
  while (keep_values && std::getline(in, line)) {
    std::istringstream ls(line);
    std::string tok, name;
    double value = 0.0;
    if (!(ls >> tok)) continue;
    if (tok == "**") ls >> tok;  // CBC marks values outside their bounds
    if (!(ls >> name >> value)) throw SolverError("malformed CBC solution line: " + line);
    auto id = m.find(name);
    if (!id) throw SolverError("CBC reported unknown column '" + name + "'");
    values[id->index] = value;
  }

  std::string out = "status " + status + "\n";
  if (keep_values) {
    out += "objective " + milp::format_number(m.objective_value(values)) + "\n";
    for (std::size_t j = 0; j < values.size(); ++j) {
      out += m.variables()[j].name + " " + milp::format_number(values[j]) + "\n";
    }
  }
  return out;
}

milp::Assignment solve_external(const milp::Model& m, const SolverCommand& cmd,
                                const ExternalLimits& limits,
                                const std::optional<fs::path>& workdir) {
  std::optional<TempDir> temp;
  fs::path dir;
  if (workdir) {
    dir = *workdir;
    fs::create_directories(dir);
  } else {
    temp.emplace();
    dir = temp->path();
  }
  const fs::path lp = dir / "model.lp";
  const fs::path out = dir / ("solution." + cmd.name);
  const fs::path log = dir / ("solver." + cmd.name + ".log");
  {
    std::ofstream f(lp, std::ios::binary);
    f << milp::write_lp(m);
    if (!f) throw SolverError("cannot write " + lp.string());
  }
  std::error_code ec;
  fs::remove(out, ec);

  std::vector<std::string> argv;
  for (const std::string& a : cmd.argv) {
    std::string s = substitute(a, "{lp}", lp.string());
    s = substitute(s, "{out}", out.string());
    s = substitute(s, "{time}", format_gap(limits.time_s));
    s = substitute(s, "{gap}", format_gap(limits.gap));
    argv.push_back(std::move(s));
  }
  const ProcessResult r = run_process(argv, log, limits.time_s);
  if (r.timed_out) {
    milp::Assignment a;
    a.status = milp::SolveStatus::limit;
    return a;
  }
  if (r.exit_code != 0 || !fs::exists(out)) {
    std::string tail = read_file(log);
    if (tail.size() > 400) tail = tail.substr(tail.size() - 400);
    throw SolverError(cmd.name + " exited with code " + std::to_string(r.exit_code) +
                      (fs::exists(out) ? "" : " and wrote no solution") + ": " + tail);
  }
  std::string text = read_file(out);
  if (cmd.normalizer == Normalizer::cbc) text = normalize_cbc(text, m);
  try {
    return milp::parse_solution(text, m);
  } catch (const milp::FormatError& e) {
    throw SolverError(cmd.name + " solution unreadable: " + e.what());
  }
}

}  // namespace shuffleopt::ext
