#pragma once

#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include "phi4/budget.hpp"
#include "phi4/core.hpp"

namespace phi4::cli {

enum class Command { verify, cost_table, cost_sweep, scatter, census };
Command parse_command(const std::string& s);

enum class Axis { k, N, omega, eps };
Axis parse_axis(const std::string& s);
const char* axis_name(Axis a);

/// lo:hi:steps with an optional log or lin suffix, e.g. 4:128:6:log or 4:128:6log.
struct Range {
  double lo = 0.0, hi = 0.0;
  int steps = 2;
  bool log = true;
  // Integral ranges are rounded and deduplicated.
  std::vector<double> values(bool integral) const;
};
Range parse_range(const std::string& s);

// Everything a config file can set. Defaults are the documented headline instance.
struct Settings {
  RawParams lattice{{"m", 1.0}, {"lambda", 1.0}, {"a", 1.0}, {"d", 1.0}, {"P", 100.0}};
  int k = 16;
  int N = 4;
  double epsilon = 1e-2;
  std::vector<std::string> algs;  // empty selects every algorithm the flags allow
  CostOptions cost;
  SurfaceModel surface;

  std::string scatter_input;  // CSV of L,E,dE; empty runs the exact-diagonalisation pipeline
  double scatter_mass = 1.0;
  double scatter_kink_mass = 0.0;
  double scatter_dE = 1e-3;
  int scatter_P = 2;
  int scatter_k = 4;
  std::vector<double> scatter_lambdas{0.0, 1.0, 4.0};

  std::vector<int> census_powers{2, 4};
  long census_n_max = 127;
};

// Either a JSON object or flat "key = value" text with [section] headers. The README lists every
// section and key. Unknown keys are errors.
Settings load_settings(const std::string& path);
Settings parse_settings(const std::string& json_text);

struct RunConfig {
  Command command = Command::verify;
  std::string out_dir = ".";
  std::optional<Axis> axis;
  std::optional<Range> range;
  std::vector<std::string> algs;
  bool conjecture_iiib = false;
  bool dense = false;
  bool surface = false;
  std::set<std::string> perturb;
  std::vector<std::string> suites;
  Settings settings;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitSuite = 3;

std::vector<CostAlgorithm> selected_algorithms(const RunConfig& cfg);

std::string cost_table_csv(const RunConfig& cfg);
std::string cost_table_json(const RunConfig& cfg);

struct SweepSeries {
  std::string name;
  std::vector<double> x, y;
};
struct SweepResult {
  Axis axis = Axis::k;
  std::vector<double> values;
  std::vector<SweepSeries> total_t, qubits;
  std::vector<std::string> sources;
};
SweepResult cost_sweep(const RunConfig& cfg);
std::string sweep_csv(const SweepResult& s);

// Self-contained SVG with a log y axis and explicit tick labels.
std::string svg_plot(const std::string& title, const std::string& x_label, const std::string& y_label,
                     const std::vector<SweepSeries>& series, bool log_x);

std::string census_csv(const Settings& s);
std::string scatter_output(const Settings& s);

// Runs a command and writes its artifacts under cfg.out_dir. Returns an exit code.
int run(const RunConfig& cfg, std::ostream& log);

}  // namespace phi4::cli
