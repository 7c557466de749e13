#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "playoutlab/config.hpp"
#include "playoutlab/simulator.hpp"

namespace playoutlab {

enum class SweepVariable { Prebuffer, Theta };

const char* sweep_variable_name(SweepVariable v);

/// A sweep: one simulation per (controller, value, seed) cell.
struct SweepSpec {
  SweepVariable variable = SweepVariable::Prebuffer;
  std::vector<double> values;  // seconds; strictly increasing
  std::vector<ControllerKind> controllers;
  int repetitions = 1;  // seeds base_seed .. base_seed + repetitions - 1
  std::uint64_t base_seed = 1;

  void validate() const;
};

struct ResultRow {
  std::string controller;
  std::string sweep_var;
  double sweep_value = 0.0;
  std::uint64_t seed = 0;
  RunMetrics metrics;
};

/// Runs every cell, sorted by (controller, value, seed). The AMP controller
/// is auto-tuned per cell: the smallest slowdown factor in {0.05..0.60} that
/// reaches 99% continuity (best continuity when none does).
std::vector<ResultRow> run_sweep(const SweepSpec& spec, const SimConfig& base);

struct AmpTuneResult {
  RunMetrics metrics;
  double sigma = 0.0;
};
AmpTuneResult run_amp_autotuned(const SimConfig& base);

std::string results_csv(const std::vector<ResultRow>& table);
void emit_csv(const std::vector<ResultRow>& table, const std::string& path);
std::vector<ResultRow> load_results_csv(const std::string& path);

/// Gnuplot-style blocks per controller, seed-averaged, with a log10 abscissa.
void emit_plotdata(const std::vector<ResultRow>& table, const std::string& path);

/// Reads sweep.* keys (plus the base configuration) from one spec file.
struct SweepFile {
  SweepSpec spec;
  SimConfig base;
  std::string out_dir;
};
SweepFile load_sweep_spec(const std::string& path);

}  // namespace playoutlab
