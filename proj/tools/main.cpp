#include <iostream>

#include "CLI11.hpp"
#include "phi4/cli.hpp"
#include "phi4/errors.hpp"
#include "phi4/verify.hpp"

int main(int argc, char** argv) {
  using namespace phi4;
  CLI::App app{"Resource estimates and dense checks for lattice phi^4 simulation"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path, out_dir = ".", axis, range, algs, perturb, suites;
  bool conjecture = false, dense = false, surface = false;
  app.add_option("--config", config_path, "settings file, flat key = value text or JSON")->check(CLI::ExistingFile);
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--axis", axis, "sweep axis: k, N, omega or eps");
  app.add_option("--range", range, "sweep range lo:hi:steps[:log|lin]");
  app.add_option("--algs", algs, "comma separated algorithms: occ, II, I, IIIa, IIIb");
  app.add_flag("--conjecture-iiib", conjecture, "allow Algorithm IIIb totals that rest on the conjectured cost");
  app.add_flag("--dense", dense, "run the heavier dense suites as well");
  app.add_flag("--surface", surface, "add the surface-code overlay");
  app.add_option("--perturb", perturb, "comma separated suites to corrupt on purpose (also PHI4_PERTURB)");
  app.add_option("--suites", suites, "comma separated subset of verify suites");

  for (const char* name : {"verify", "cost-table", "cost-sweep", "scatter", "census"}) app.add_subcommand(name);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : cli::kExitConfig;
  }

  cli::RunConfig cfg;
  std::ostream& log = std::cout;
  try {
    cfg.command = cli::parse_command(app.get_subcommands().front()->get_name());
    if (!config_path.empty()) cfg.settings = cli::load_settings(config_path);
    cfg.out_dir = out_dir;
    if (!axis.empty()) cfg.axis = cli::parse_axis(axis);
    if (!range.empty()) cfg.range = cli::parse_range(range);
    auto split = [](const std::string& s) {
      std::vector<std::string> v;
      std::string cur;
      for (char c : s) {
        if (c == ',') {
          if (!cur.empty()) v.push_back(cur);
          cur.clear();
        } else {
          cur += c;
        }
      }
      if (!cur.empty()) v.push_back(cur);
      return v;
    };
    cfg.algs = split(algs);
    cfg.suites = split(suites);
    cfg.perturb = perturb_from_env();
    for (const auto& p : split(perturb)) cfg.perturb.insert(p);
    cfg.conjecture_iiib = conjecture;
    cfg.dense = dense;
    cfg.surface = surface;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return cli::kExitConfig;
  }
  return cli::run(cfg, log);
}
