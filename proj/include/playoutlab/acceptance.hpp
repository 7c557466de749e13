#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace playoutlab {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;  // measured value vs threshold
};

struct AcceptanceReport {
  std::vector<CriterionResult> criteria;
  bool all_pass() const;
};

/// Runs the standard scenario suite (ideal, i.i.d. lognormal jitter, bursty
/// Markov delay, jitter + loss) and writes the result tables into out_dir:
/// s1_ideal.csv, s2_prebuffer.csv, s{2,3,4}_theta.csv, jitter_sweep.csv,
/// u_stability.csv and suite_timings.csv.
void run_standard_suite(const std::string& configs_dir,
                        const std::string& out_dir);

/// Evaluates the acceptance criteria against a directory produced by
/// run_standard_suite. Checks that need live simulation (policy-oracle
/// equivalence, zero-delay degeneracy, determinism) run in-process from the
/// checked-in configs. Throws when a required table is missing.
AcceptanceReport evaluate_acceptance(const std::string& dir,
                                     const std::string& configs_dir);

/// One line per criterion: id, name, PASS/FAIL, measured value vs threshold.
void print_report(const AcceptanceReport& report, std::ostream& out);

}  // namespace playoutlab
