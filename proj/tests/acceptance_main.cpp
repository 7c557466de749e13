// Acceptance suite driver: runs the standard scenario suite and checks every
// acceptance criterion, printing one pass/fail line per criterion. Exits 0
// when everything passes, 2 otherwise.

#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "playoutlab/acceptance.hpp"

int main(int argc, char** argv) {
  CLI::App app{"playoutlab acceptance suite"};
  std::string configs_dir = "configs";
  std::string out_dir = "acceptance_out";
  bool evaluate_only = false;
  app.add_option("--configs", configs_dir, "scenario config directory");
  app.add_option("--out", out_dir, "directory for generated tables");
  app.add_flag("--evaluate-only", evaluate_only,
               "skip generation, evaluate existing tables");
  CLI11_PARSE(app, argc, argv);

  try {
    if (!evaluate_only) {
      std::cout << "generating standard scenario suite into " << out_dir
                << " ..." << std::endl;
      playoutlab::run_standard_suite(configs_dir, out_dir);
    }
    const playoutlab::AcceptanceReport report =
        playoutlab::evaluate_acceptance(out_dir, configs_dir);
    playoutlab::print_report(report, std::cout);
    return report.all_pass() ? 0 : 2;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << '\n';
    return 1;
  }
}
