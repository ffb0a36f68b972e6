#include "dsr/solver.hpp"

#include <fcntl.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "dsr/mps.hpp"

namespace dsr {

namespace fs = std::filesystem;

const char* status_name(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::Feasible: return "feasible";
    case SolveStatus::Infeasible: return "infeasible";
    case SolveStatus::Timeout: return "timeout";
    case SolveStatus::Error: return "error";
  }
  return "error";
}

Dialect parse_dialect(const std::string& name) {
  if (name == "native") return Dialect::Native;
  if (name == "cbc") return Dialect::Cbc;
  if (name == "gurobi_sol") return Dialect::GurobiSol;
  throw std::invalid_argument("unknown solution dialect '" + name + "'");
}

namespace {

SolveStatus status_from_word(const std::string& w) {
  if (w == "optimal") return SolveStatus::Optimal;
  if (w == "feasible") return SolveStatus::Feasible;
  if (w == "infeasible") return SolveStatus::Infeasible;
  if (w == "timeout") return SolveStatus::Timeout;
  return SolveStatus::Error;
}

bool starts_with(const std::string& s, const std::string& p) { return s.rfind(p, 0) == 0; }

std::string lower(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

SolveResult parse_native(std::istream& in) {
  SolveResult r;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string a, b;
    if (!(ls >> a)) continue;
    ls >> b;
    if (a == "status") r.status = status_from_word(b);
    else if (a == "objective") r.objective = std::stod(b);
    else r.values[a] = std::stod(b);
  }
  return r;
}

SolveResult parse_cbc(std::istream& in) {
  SolveResult r;
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty CBC solution file");
  const std::string head = lower(line);
  if (starts_with(head, "optimal")) r.status = SolveStatus::Optimal;
  else if (head.find("infeasible") != std::string::npos) r.status = SolveStatus::Infeasible;
  else if (head.find("stopped on time") != std::string::npos || head.find("time limit") != std::string::npos)
    r.status = SolveStatus::Timeout;
  else if (head.find("stopped") != std::string::npos) r.status = SolveStatus::Feasible;
  else r.status = SolveStatus::Error;
  auto pos = head.find("objective value");
  if (pos != std::string::npos) r.objective = std::stod(line.substr(pos + 15));
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::vector<std::string> tok;
    for (std::string t; ls >> t;) tok.push_back(t);
    if (!tok.empty() && tok[0] == "**") tok.erase(tok.begin());
    if (tok.size() < 3) continue;
    r.values[tok[1]] = std::stod(tok[2]);
  }
  if (r.status == SolveStatus::Timeout && r.values.empty()) r.objective.reset();
  return r;
}

SolveResult parse_gurobi(std::istream& in) {
  SolveResult r;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      auto pos = line.find("Objective value =");
      if (pos != std::string::npos) r.objective = std::stod(line.substr(pos + 17));
      continue;
    }
    std::istringstream ls(line);
    std::string name;
    double v;
    if (ls >> name >> v) r.values[name] = v;
  }
  // A .sol file carries no status; its presence means an incumbent exists.
  r.status = r.values.empty() ? SolveStatus::Infeasible : SolveStatus::Feasible;
  return r;
}

std::string replace_all(std::string s, const std::string& from, const std::string& to) {
  for (std::size_t pos = 0; (pos = s.find(from, pos)) != std::string::npos; pos += to.size()) s.replace(pos, from.size(), to);
  return s;
}

std::string quote(const fs::path& p) { return "'" + replace_all(p.string(), "'", "'\\''") + "'"; }

fs::path make_temp_dir() {
  std::string tmpl = (fs::temp_directory_path() / "dsr-solve-XXXXXX").string();
  if (!mkdtemp(tmpl.data())) throw std::runtime_error("cannot create a temporary directory");
  return tmpl;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

SolveResult parse_solution(const std::string& text, Dialect dialect) {
  std::istringstream in(text);
  switch (dialect) {
    case Dialect::Native: return parse_native(in);
    case Dialect::Cbc: return parse_cbc(in);
    case Dialect::GurobiSol: return parse_gurobi(in);
  }
  return {};
}

std::string format_solution(const Assignment& a, SolveStatus status, std::optional<double> objective) {
  std::ostringstream out;
  out << "status " << status_name(status) << "\n";
  if (objective) out << "objective " << format_number(*objective) << "\n";
  for (const auto& [k, v] : a) out << k << " " << format_number(v) << "\n";
  return out.str();
}

SolveResult solve_external(const std::string& mps, const SolverConfig& cfg, const Assignment* start) {
  const fs::path dir = make_temp_dir();
  const fs::path input = dir / "model.mps", output = dir / "solution.txt", log = dir / "solver.log",
                 start_file = dir / "start.txt";
  {
    std::ofstream f(input);
    f << mps;
  }
  if (start) {
    std::ofstream f(start_file);
    f << format_solution(*start, SolveStatus::Feasible, std::nullopt);
  }
  std::string cmd = cfg.command;
  cmd = replace_all(cmd, "{input}", quote(input));
  cmd = replace_all(cmd, "{output}", quote(output));
  cmd = replace_all(cmd, "{time_limit}", format_number(cfg.time_limit));
  cmd = replace_all(cmd, "{mip_gap}", format_number(cfg.mip_gap));
  cmd = replace_all(cmd, "{start}", start ? quote(start_file) : std::string("none"));

  SolveResult result;
  pid_t pid = fork();
  if (pid < 0) {
    fs::remove_all(dir);
    throw std::runtime_error("cannot spawn the solver");
  }
  if (pid == 0) {
    setpgid(0, 0);
    int fd = open(log.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0644);
    if (fd >= 0) {
      dup2(fd, STDOUT_FILENO);
      dup2(fd, STDERR_FILENO);
      close(fd);
    }
    execl("/bin/sh", "sh", "-c", cmd.c_str(), static_cast<char*>(nullptr));
    _exit(127);
  }
  setpgid(pid, pid);
  const auto deadline = std::chrono::steady_clock::now() +
                        std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                            std::chrono::duration<double>(cfg.time_limit + cfg.grace));
  int wstatus = 0;
  bool killed = false;
  for (;;) {
    pid_t r = waitpid(pid, &wstatus, WNOHANG);
    if (r == pid) break;
    if (r < 0) break;
    if (std::chrono::steady_clock::now() >= deadline) {
      kill(-pid, SIGKILL);
      waitpid(pid, &wstatus, 0);
      killed = true;
      break;
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(10));
  }
  const std::string log_text = slurp(log);
  if (fs::exists(output) && fs::file_size(output) > 0) {
    try {
      result = parse_solution(slurp(output), cfg.dialect);
    } catch (const std::exception& e) {
      result.status = SolveStatus::Error;
      result.message = std::string("unparseable solver output: ") + e.what();
    }
    if (killed) result.status = SolveStatus::Timeout;
  } else if (killed) {
    result.status = SolveStatus::Timeout;
    result.message = "solver killed at the wall-clock limit without an incumbent";
  } else {
    result.status = SolveStatus::Error;
    int code = WIFEXITED(wstatus) ? WEXITSTATUS(wstatus) : -1;
    result.message = "solver produced no solution (exit " + std::to_string(code) + ")";
    if (code == 127) result.message += "; command not found";
    if (!log_text.empty()) result.message += ": " + log_text.substr(0, 400);
  }
  fs::remove_all(dir);
  return result;
}

std::optional<SolverConfig> discover_solver(const fs::path& adapter) {
  if (fs::exists(adapter) && std::system("python3 -c 'import highspy' >/dev/null 2>&1") == 0) {
    SolverConfig c;
    c.command = "python3 " + quote(adapter) + " {input} {output} {time_limit} {mip_gap} {start}";
    c.dialect = Dialect::Native;
    return c;
  }
  if (std::system("command -v cbc >/dev/null 2>&1") == 0) {
    SolverConfig c;
    c.command = "cbc {input} sec {time_limit} ratio {mip_gap} solve solu {output}";
    c.dialect = Dialect::Cbc;
    return c;
  }
  return std::nullopt;
}

}  // namespace dsr
