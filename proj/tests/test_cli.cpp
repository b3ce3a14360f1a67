#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "phi4/cli.hpp"
#include "phi4/errors.hpp"

using namespace phi4;
using namespace phi4::cli;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error raised");
  return ErrorCode::IoError;
}

std::filesystem::path fresh_dir(const std::string& name) {
  const auto p = std::filesystem::temp_directory_path() / name;
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("range parsing") {
    Range r = parse_range("4:128:6:log");
    CHECK(r.lo == 4);
    CHECK(r.hi == 128);
    CHECK(r.steps == 6);
    CHECK(r.log);
    r = parse_range("4:128:6log");
    CHECK(r.log);
    r = parse_range("1:5:5:lin");
    CHECK(!r.log);
    CHECK(r.values(true) == std::vector<double>{1, 2, 3, 4, 5});
    const auto v = parse_range("1e-4:1e-1:4").values(false);
    REQUIRE(v.size() == 4);
    CHECK(v[1] == doctest::Approx(1e-3));
    CHECK(v.back() == 1e-1);
    CHECK(parse_range("2:4:10:lin").values(true) == std::vector<double>{2, 3, 4});
    for (const char* bad : {"4:2:3", "0:4:3:log", "1:2", "1:2:0", "1:2:3:cubic", "a:2:3"})
      CHECK(code_of([&] { parse_range(bad); }) == ErrorCode::ConfigParse);
  }

  TEST_CASE("axis and command names") {
    for (const char* a : {"k", "N", "omega", "eps"}) CHECK(std::string(axis_name(parse_axis(a))) == a);
    CHECK(code_of([] { parse_axis("x"); }) == ErrorCode::ConfigParse);
    CHECK(parse_command("cost-table") == Command::cost_table);
    CHECK(code_of([] { parse_command("nope"); }) == ErrorCode::ConfigParse);
  }

  TEST_CASE("json settings") {
    const Settings s = parse_settings(R"({"lattice": {"P": 8}, "k": 8, "surface": {"p_phys": 0.0005}})");
    CHECK(s.lattice.at("P") == 8);
    CHECK(s.lattice.at("m") == 1);
    CHECK(s.k == 8);
    CHECK(s.surface.p_phys == 0.0005);
    CHECK(code_of([] { parse_settings(R"({"bogus": 1})"); }) == ErrorCode::ConfigParse);
    CHECK(code_of([] { parse_settings(R"({"lattice": {"q": 1}})"); }) == ErrorCode::ConfigParse);
    CHECK(code_of([] { parse_settings(R"({"k": "eight"})"); }) == ErrorCode::ConfigParse);
    CHECK(code_of([] { parse_settings("{not json"); }) == ErrorCode::ConfigParse);
  }

  TEST_CASE("flat key/value settings") {
    const Settings s = parse_settings(
        "# headline\n"
        "k = 8\n"
        "epsilon = 1e-3\n"
        "algs = [\"I_equal_weight\", \"IIIa_z_lcu\"]\n"
        "\n"
        "[lattice]\n"
        "P = 16   # sites\n"
        "lambda = 2\n"
        "[cost]\n"
        "conjecture_iiib = true\n"
        "[scatter]\n"
        "input = levels.csv\n");
    CHECK(s.k == 8);
    CHECK(s.epsilon == 1e-3);
    CHECK(s.algs.size() == 2);
    CHECK(s.lattice.at("P") == 16);
    CHECK(s.lattice.at("lambda") == 2);
    CHECK(s.cost.conjecture_iiib);
    CHECK(s.scatter_input == "levels.csv");
    CHECK(code_of([] { parse_settings("k 8\n"); }) == ErrorCode::ConfigParse);
    CHECK(code_of([] { parse_settings("[lattice\nP = 2\n"); }) == ErrorCode::ConfigParse);
    CHECK(code_of([] { parse_settings("k = 2\nk = 4\n"); }) == ErrorCode::ConfigParse);
    CHECK(code_of([] { parse_settings("[surface]\nwidth = 3\n"); }) == ErrorCode::ConfigParse);
  }

  TEST_CASE("algorithm selection") {
    RunConfig cfg;
    auto algs = selected_algorithms(cfg);
    CHECK(std::find(algs.begin(), algs.end(), CostAlgorithm::IIIb_signature) == algs.end());
    cfg.conjecture_iiib = true;
    algs = selected_algorithms(cfg);
    CHECK(std::find(algs.begin(), algs.end(), CostAlgorithm::IIIb_signature) != algs.end());
    RunConfig bad;
    bad.algs = {"IIIb_signature"};
    CHECK(code_of([&] { cost_table_csv(bad); }) == ErrorCode::ConjectureFlagRequired);
  }

  TEST_CASE("cost table is deterministic") {
    RunConfig cfg;
    cfg.command = Command::cost_table;
    cfg.surface = true;
    const std::string a = cost_table_csv(cfg), b = cost_table_csv(cfg);
    CHECK(a == b);
    CHECK(cost_table_json(cfg) == cost_table_json(cfg));
    CHECK(a.rfind("schema,algorithm,", 0) == 0);
    CHECK(a.find("I_equal_weight") != std::string::npos);
  }

  TEST_CASE("sweep orders and plots") {
    RunConfig cfg;
    cfg.command = Command::cost_sweep;
    cfg.axis = Axis::k;
    cfg.range = parse_range("4:64:3:log");
    const SweepResult s = cost_sweep(cfg);
    CHECK(s.values == std::vector<double>{4, 16, 64});
    for (const auto& series : s.total_t) CHECK(series.name != "occ_trotter");
    const std::string csv = sweep_csv(s);
    CHECK(csv == sweep_csv(cost_sweep(cfg)));
    const std::string svg = svg_plot("T", "k", "T gates", s.total_t, true);
    CHECK(svg.rfind("<svg", 0) == 0);
    CHECK(svg.find("</svg>") != std::string::npos);
  }

  TEST_CASE("census csv rows") {
    Settings s;
    const std::string csv = census_csv(s);
    CHECK(csv.find("1,2,127,14,37,") != std::string::npos);
    CHECK(csv.find("1,4,127,8,32,") != std::string::npos);
  }

  TEST_CASE("run writes artifacts and maps errors to exit codes") {
    const auto dir = fresh_dir("phi4_cli_run");
    RunConfig cfg;
    cfg.command = Command::cost_table;
    cfg.out_dir = dir.string();
    std::ostringstream log;
    CHECK(run(cfg, log) == kExitOk);
    const std::string first = slurp(dir / "cost_table.csv");
    CHECK(run(cfg, log) == kExitOk);
    CHECK(slurp(dir / "cost_table.csv") == first);
    CHECK(std::filesystem::exists(dir / "cost_table.json"));

    RunConfig bad = cfg;
    bad.algs = {"IIIb_signature"};
    CHECK(run(bad, log) == kExitConfig);

    RunConfig v;
    v.command = Command::verify;
    v.out_dir = dir.string();
    v.suites = {"harmonic_gap"};
    CHECK(run(v, log) == kExitOk);
    v.perturb = {"harmonic_gap"};
    CHECK(run(v, log) == kExitSuite);
    std::filesystem::remove_all(dir);
  }
}
