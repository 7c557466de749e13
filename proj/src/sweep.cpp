#include "playoutlab/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace playoutlab {

const char* sweep_variable_name(SweepVariable v) {
  return v == SweepVariable::Prebuffer ? "prebuffer" : "theta";
}

void SweepSpec::validate() const {
  if (values.empty()) throw std::invalid_argument("SweepSpec: no values");
  for (std::size_t i = 1; i < values.size(); ++i)
    if (!(values[i] > values[i - 1]))
      throw std::invalid_argument("SweepSpec: values must be strictly increasing");
  if (controllers.empty())
    throw std::invalid_argument("SweepSpec: no controllers");
  if (repetitions < 1)
    throw std::invalid_argument("SweepSpec: repetitions must be >= 1");
}

namespace {

SimConfig cell_config(const SimConfig& base, SweepVariable variable,
                      double value, ControllerKind controller,
                      std::uint64_t seed) {
  SimConfig cfg = base;
  cfg.policy.controller = controller;
  if (controller == ControllerKind::LOptM || controller == ControllerKind::DLOptM)
    cfg.policy.beta_variant = BetaVariant::Loose;
  else if (controller == ControllerKind::LOpt ||
           controller == ControllerKind::DLOpt)
    cfg.policy.beta_variant = BetaVariant::Conservative;
  if (variable == SweepVariable::Prebuffer)
    cfg.prebuffer_s = value;
  else
    cfg.policy.theta = value;
  cfg.seed = seed;
  cfg.net.seed = seed;
  return cfg;
}

}  // namespace

AmpTuneResult run_amp_autotuned(const SimConfig& base) {
  AmpTuneResult best;
  bool have_best = false;
  for (int i = 1; i <= 12; ++i) {
    const double sigma = 0.05 * i;
    SimConfig cfg = base;
    cfg.policy.controller = ControllerKind::Amp;
    cfg.policy.amp_sigma = sigma;
    const RunMetrics m = run(cfg).metrics;
    if (m.continuity >= 0.99) return {m, sigma};
    if (!have_best || m.continuity > best.metrics.continuity) {
      best = {m, sigma};
      have_best = true;
    }
  }
  return best;
}

std::vector<ResultRow> run_sweep(const SweepSpec& spec, const SimConfig& base) {
  spec.validate();
  std::vector<ControllerKind> controllers = spec.controllers;
  std::sort(controllers.begin(), controllers.end(),
            [](ControllerKind a, ControllerKind b) {
              return std::string(controller_name(a)) < controller_name(b);
            });

  std::vector<ResultRow> table;
  for (ControllerKind controller : controllers) {
    for (double value : spec.values) {
      for (int rep = 0; rep < spec.repetitions; ++rep) {
        const std::uint64_t seed = spec.base_seed + static_cast<std::uint64_t>(rep);
        ResultRow row;
        row.controller = controller_name(controller);
        row.sweep_var = sweep_variable_name(spec.variable);
        row.sweep_value = value;
        row.seed = seed;
        try {
          const SimConfig cfg =
              cell_config(base, spec.variable, value, controller, seed);
          row.metrics = controller == ControllerKind::Amp
                            ? run_amp_autotuned(cfg).metrics
                            : run(cfg).metrics;
        } catch (const std::exception& err) {
          throw std::runtime_error(
              "sweep cell controller=" + row.controller + " " + row.sweep_var +
              "=" + std::to_string(value) + " seed=" + std::to_string(seed) +
              ": " + err.what());
        }
        table.push_back(std::move(row));
      }
    }
  }
  return table;
}

namespace {

const char* const kResultsHeader =
    "controller,sweep_var,sweep_value,seed,continuity,distortion,total_delay_s,"
    "mean_psnr_db,mean_u_s,max_x_s,underflows";

std::string format_g(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

}  // namespace

std::string results_csv(const std::vector<ResultRow>& table) {
  if (table.empty()) throw std::invalid_argument("results_csv: empty table");
  std::string out = kResultsHeader;
  out += '\n';
  for (const ResultRow& r : table) {
    out += r.controller;
    out += ',';
    out += r.sweep_var;
    out += ',';
    out += format_g(r.sweep_value);
    out += ',';
    out += std::to_string(r.seed);
    out += ',';
    out += format_g(r.metrics.continuity);
    out += ',';
    out += format_g(r.metrics.playout_distortion);
    out += ',';
    out += format_g(r.metrics.total_playout_delay);
    out += ',';
    out += format_g(r.metrics.mean_psnr);
    out += ',';
    out += format_g(r.metrics.mean_u);
    out += ',';
    out += format_g(r.metrics.max_x);
    out += ',';
    out += std::to_string(r.metrics.underflow_count);
    out += '\n';
  }
  return out;
}

void emit_csv(const std::vector<ResultRow>& table, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write results: " + path);
  out << results_csv(table);
  if (!out) throw std::runtime_error("write failed: " + path);
}

std::vector<ResultRow> load_results_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open results: " + path);
  std::string line;
  if (!std::getline(in, line))
    throw std::runtime_error("results file is empty: " + path);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kResultsHeader)
    throw std::runtime_error(path + ": unexpected results header");
  std::vector<ResultRow> table;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string field;
    std::vector<std::string> fields;
    while (std::getline(row, field, ',')) fields.push_back(field);
    if (fields.size() != 11)
      throw std::runtime_error(path + ":" + std::to_string(line_no) +
                               ": expected 11 fields");
    ResultRow r;
    r.controller = fields[0];
    r.sweep_var = fields[1];
    r.sweep_value = std::stod(fields[2]);
    r.seed = static_cast<std::uint64_t>(std::stoull(fields[3]));
    r.metrics.continuity = std::stod(fields[4]);
    r.metrics.playout_distortion = std::stod(fields[5]);
    r.metrics.total_playout_delay = std::stod(fields[6]);
    r.metrics.mean_psnr = std::stod(fields[7]);
    r.metrics.mean_u = std::stod(fields[8]);
    r.metrics.max_x = std::stod(fields[9]);
    r.metrics.underflow_count = std::stoll(fields[10]);
    table.push_back(std::move(r));
  }
  return table;
}

void emit_plotdata(const std::vector<ResultRow>& table,
                   const std::string& path) {
  if (table.empty()) throw std::invalid_argument("emit_plotdata: empty table");
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write plot data: " + path);

  // Seed-averaged metrics per (controller, value), one block per controller.
  struct Acc {
    double continuity = 0.0, distortion = 0.0, delay = 0.0;
    double psnr = 0.0, mean_u = 0.0;
    int n = 0;
  };
  std::map<std::string, std::map<double, Acc>> grouped;
  for (const ResultRow& r : table) {
    Acc& acc = grouped[r.controller][r.sweep_value];
    acc.continuity += r.metrics.continuity;
    acc.distortion += r.metrics.playout_distortion;
    acc.delay += r.metrics.total_playout_delay;
    acc.psnr += r.metrics.mean_psnr;
    acc.mean_u += r.metrics.mean_u;
    acc.n += 1;
  }

  out << "# playoutlab plot data: log10(" << table.front().sweep_var
      << ") continuity distortion total_delay_s mean_psnr_db mean_u_s\n";
  char buf[256];
  for (const auto& [controller, points] : grouped) {
    out << "# controller=" << controller << '\n';
    for (const auto& [value, acc] : points) {
      const double inv = 1.0 / acc.n;
      std::snprintf(buf, sizeof(buf), "%.6g %.6g %.6g %.6g %.6g %.6g\n",
                    std::log10(value), acc.continuity * inv,
                    acc.distortion * inv, acc.delay * inv, acc.psnr * inv,
                    acc.mean_u * inv);
      out << buf;
    }
    out << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

SweepFile load_sweep_spec(const std::string& path) {
  const KeyValueFile kv = KeyValueFile::parse_file(path);
  SweepFile result;
  result.base = sim_config_from(kv);

  const std::string variable = kv.get_string("sweep.variable", "prebuffer");
  if (variable == "prebuffer")
    result.spec.variable = SweepVariable::Prebuffer;
  else if (variable == "theta")
    result.spec.variable = SweepVariable::Theta;
  else
    throw std::runtime_error("sweep.variable must be prebuffer or theta");
  result.spec.values = kv.get_double_list("sweep.values");
  for (const std::string& name : kv.get_string_list("sweep.controllers"))
    result.spec.controllers.push_back(controller_from_name(name));
  result.spec.repetitions = static_cast<int>(kv.get_int("sweep.repetitions", 1));
  result.spec.base_seed =
      static_cast<std::uint64_t>(kv.get_int("sweep.seed", 1));
  result.out_dir = kv.get_string("sweep.out_dir", "sweep_out");
  result.spec.validate();

  const auto leftover = kv.unread_keys();
  if (!leftover.empty()) {
    std::string msg = path + ": unknown configuration keys:";
    for (const auto& k : leftover) msg += " " + k;
    throw std::runtime_error(msg);
  }
  return result;
}

}  // namespace playoutlab
