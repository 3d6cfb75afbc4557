// Scenario runner: executes verification suites described by a scenario file
// and writes a machine-readable report.
//
// Exit codes: 0 success, 1 suite failure, 2 scenario parse error,
// 3 window exceeded during a suite.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "scenario.hpp"

int main(int argc, char** argv) {
  CLI::App app{"extriloc-verify: localization verification scenario runner"};
  std::string scenario_path, report_path, dot_what;
  std::vector<std::string> suites;
  std::int64_t window_override = -1;
  std::uint64_t seed_override = 0;
  bool seed_given = false;

  app.add_option("--scenario", scenario_path, "Scenario JSON file")->required();
  app.add_option("--report", report_path, "Write the report JSON here");
  app.add_option("--window", window_override, "Override the backend window");
  app.add_option("--seed", seed_override, "Override the sampling seed")
      ->each([&](const std::string&) { seed_given = true; });
  app.add_option("--suite", suites, "Run only these suites (repeatable)");
  app.add_option("--dot", dot_what, "Export DOT text to stdout: ar_quiver or sn_graph");

  CLI11_PARSE(app, argc, argv);

  using namespace extriloc::scenario;
  Scenario sc;
  try {
    sc = load_scenario(scenario_path);
    if (window_override >= 0) sc.backend.window = static_cast<int>(window_override);
    if (seed_given) sc.seed = seed_override;
    if (!suites.empty()) {
      for (const std::string& s : suites)
        if (!kKnownSuites.count(s)) throw ParseError("unknown suite: " + s);
      sc.suites = suites;
    }
  } catch (const ParseError& e) {
    std::cerr << "scenario error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (!dot_what.empty()) {
      Runtime rt = make_runtime(sc);
      std::cout << export_dot(rt, dot_what);
      return 0;
    }
    Report rep = run_scenario(sc);
    for (const SuiteResult& r : rep.results)
      std::cout << r.suite << ": " << r.status << " (" << r.instances << " instances, "
                << r.failures.size() << " failures)\n";
    if (!report_path.empty()) {
      std::ofstream out(report_path);
      if (!out) {
        std::cerr << "cannot open report path: " << report_path << "\n";
        return 2;
      }
      out << rep.to_json().dump(2) << "\n";
    }
    return rep.exit_code();
  } catch (const ParseError& e) {
    std::cerr << "scenario error: " << e.what() << "\n";
    return 2;
  } catch (const extriloc::WindowExceeded& e) {
    std::cerr << "window exceeded: " << e.what() << "\n";
    return 3;
  }
}
