// One line per acceptance criterion. Exit status is nonzero when any hard criterion fails.
#include <sys/wait.h>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <fmt/core.h>

#include "phi4/budget.hpp"
#include "phi4/cli.hpp"
#include "phi4/core.hpp"
#include "phi4/verify.hpp"

namespace fs = std::filesystem;
using namespace phi4;

namespace {

int shell(const std::string& cmd) {
  const int st = std::system((cmd + " > /dev/null 2>&1").c_str());
  return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
}

std::string quote(const std::string& s) { return "'" + s + "'"; }

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

void line(int n, const char* status, const std::string& detail) {
  std::cout << fmt::format("criterion {:>2}: {} {}", n, status, detail) << std::endl;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: acceptance <path-to-phi4-cli>\n";
    return 2;
  }
  const std::string exe = argv[1];
  int failures = 0;

  // criteria 1 to 10 are backed by the verification suites
  for (const std::string& name : suite_names()) {
    const int c = suite_criterion(name);
    if (c < 1 || c > 10) continue;
    const SuiteResult r = run_suite(name);
    if (!r.passed) ++failures;
    line(c, r.passed ? "PASS" : "FAIL", fmt::format("[{}, {:.2f}s] {}", name, r.seconds, r.detail));
  }

  // 11 is a soft calibration check
  {
    const cli::Settings s;
    CostOptions o = s.cost;
    o.surface = s.surface;
    const CostReport r = total_cost(CostAlgorithm::I_equal_weight, build_params(s.lattice), s.k, s.epsilon, o);
    const double q = r.surface ? r.surface->physical_qubits : 0.0;
    const bool ok = r.total_t >= 1e11 && r.total_t <= 1e13 && q >= 4e5 && q <= 4e7;
    line(11, ok ? "PASS" : "WARN",
         fmt::format("headline total_t={:.3e}, physical qubits={:.3e}, d={}", r.total_t, q,
                     r.surface ? r.surface->code_distance : 0));
  }

  // 12 drives the command-line tool
  {
    const auto t0 = std::chrono::steady_clock::now();
    const fs::path base = fs::temp_directory_path() / fmt::format("phi4_acceptance_{}", ::getpid());
    fs::remove_all(base);
    fs::create_directories(base / "a");
    fs::create_directories(base / "b");
    bool ok = true;
    std::string detail;
    const int ra = shell(quote(exe) + " cost-table --surface --out " + quote((base / "a").string()));
    const int rb = shell(quote(exe) + " cost-table --surface --out " + quote((base / "b").string()));
    const bool same = ra == 0 && rb == 0 && slurp(base / "a" / "cost_table.csv") == slurp(base / "b" / "cost_table.csv") &&
                      slurp(base / "a" / "cost_table.json") == slurp(base / "b" / "cost_table.json") &&
                      !slurp(base / "a" / "cost_table.csv").empty();
    ok = ok && same;
    detail += same ? "cost-table byte-identical; " : "cost-table differs or failed; ";
    int nonzero = 0, total = 0;
    for (const std::string& name : suite_names()) {
      const int c = suite_criterion(name);
      if (c < 1 || c > 10) continue;
      ++total;
      const int rc = shell("PHI4_PERTURB=" + name + " " + quote(exe) + " verify --suites " + name + " --out " +
                           quote((base / "a").string()));
      if (rc != 0) ++nonzero;
      else detail += "perturbed " + name + " exited 0; ";
    }
    ok = ok && nonzero == total;
    const int clean = shell(quote(exe) + " verify --out " + quote((base / "a").string()));
    ok = ok && clean == 0;
    detail += fmt::format("{}/{} perturbed suites exit nonzero; unperturbed verify exit {}", nonzero, total, clean);
    fs::remove_all(base);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!ok) ++failures;
    line(12, ok ? "PASS" : "FAIL", fmt::format("[{:.2f}s] {}", secs, detail));
  }

  std::cout << (failures == 0 ? "all hard criteria pass" : fmt::format("{} criteria failed", failures)) << std::endl;
  return failures == 0 ? 0 : 1;
}
