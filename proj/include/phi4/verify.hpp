#pragma once

#include <set>
#include <string>
#include <vector>

namespace phi4 {

struct SuiteResult {
  std::string name;
  int criterion = 0;  // acceptance item the suite backs, 0 for supporting suites
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

struct VerifyOptions {
  // Suites whose measured quantity is deliberately corrupted before it is judged.
  std::set<std::string> perturb;
  std::vector<std::string> only;  // empty runs every standard suite
  bool extended = false;          // add the heavier dense suites
};

const std::vector<std::string>& suite_names();  // standard suites
const std::vector<std::string>& extended_suite_names();
int suite_criterion(const std::string& name);

SuiteResult run_suite(const std::string& name, const VerifyOptions& opt = {});
std::vector<SuiteResult> run_verify(const VerifyOptions& opt = {});

// Reads a comma separated suite list from PHI4_PERTURB ("all" selects every suite).
std::set<std::string> perturb_from_env();

std::string verify_report_json(const std::vector<SuiteResult>& results);

}  // namespace phi4
