// Runs the acceptance criteria and prints one PASS/FAIL line per criterion.
// Exit status 0 iff every selected criterion passes.

#include "epstein/acceptance.hpp"
#include "epstein/cli_runner.hpp"
#include "epstein/errors.hpp"

#include "CLI11.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>

int main(int argc, char** argv) {
  CLI::App app{"epstein_lab acceptance suite"};
  std::string profile = "desk", json_path;
  int workers = 0;
  std::vector<int> only;
  app.add_option("--profile", profile, "desk (full sizes) or quick (smoke sizes)");
  app.add_option("--workers", workers, "worker threads (0 = all cores)");
  app.add_option("--json", json_path, "also write the machine-readable report here");
  app.add_option("--only", only, "run only these criterion ids")->delimiter(',');
  CLI11_PARSE(app, argc, argv);

  epstein::AcceptanceProfile p;
  try {
    p = epstein::AcceptanceProfile::by_name(profile);
  } catch (const epstein::ConfigError& e) {
    std::cerr << e.what() << "\n";
    return epstein::kExitConfigError;
  }
  std::cout << "acceptance profile " << p.name << ", " << epstein::resolve_workers(workers) << " worker(s)\n";
  std::vector<epstein::CriterionResult> results;
  try {
    results = epstein::run_acceptance(p, workers, &std::cout, only);
  } catch (const std::exception& e) {
    std::cout << "acceptance aborted: " << e.what() << "\n";
    return epstein::kExitResourceError;
  }
  if (!json_path.empty()) std::ofstream(json_path) << epstein::acceptance_json(p, results);
  const auto passed = std::count_if(results.begin(), results.end(), [](const auto& r) { return r.pass; });
  std::cout << passed << "/" << results.size() << " criteria pass\n";
  return passed == static_cast<long>(results.size()) ? 0 : epstein::kExitTestFailure;
}
