#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "playoutlab/acceptance.hpp"
#include "playoutlab/bounds.hpp"
#include "playoutlab/config.hpp"
#include "playoutlab/sweep.hpp"

namespace {

namespace fs = std::filesystem;
using namespace playoutlab;

void apply_seed_override(SimConfig& cfg) {
  if (const char* env = std::getenv("PLAYOUTLAB_SEED")) {
    cfg.seed = static_cast<std::uint64_t>(std::stoull(env));
    cfg.net.seed = cfg.seed;
  }
}

void print_metrics(const ResultRow& row) {
  std::cout << results_csv({row});
}

int cmd_run(const std::string& config_path, const std::string& trace_path,
            const std::string& out_dir) {
  SimConfig cfg = load_sim_config(config_path);
  apply_seed_override(cfg);
  if (!trace_path.empty()) cfg.trace = load_trace(trace_path);

  const RunResult result = run(cfg);
  ResultRow row;
  row.controller = controller_name(cfg.policy.controller);
  row.sweep_var = "none";
  row.sweep_value = 0.0;
  row.seed = cfg.seed;
  row.metrics = result.metrics;

  if (!out_dir.empty()) {
    fs::create_directories(out_dir);
    write_slot_log(result.log, (fs::path(out_dir) / "slot_log.csv").string());
    emit_csv({row}, (fs::path(out_dir) / "metrics.csv").string());
  }
  print_metrics(row);
  return 0;
}

int cmd_sweep(const std::string& spec_path, std::string out_dir) {
  SweepFile sf = load_sweep_spec(spec_path);
  apply_seed_override(sf.base);
  if (out_dir.empty()) out_dir = sf.out_dir;
  const std::vector<ResultRow> table = run_sweep(sf.spec, sf.base);
  fs::create_directories(out_dir);
  emit_csv(table, (fs::path(out_dir) / "results.csv").string());
  emit_plotdata(table, (fs::path(out_dir) / "plotdata.txt").string());
  std::cout << "wrote " << table.size() << " rows to " << out_dir << '\n';
  return 0;
}

int cmd_report(const std::string& in_dir, const std::string& configs_dir) {
  const AcceptanceReport report = evaluate_acceptance(in_dir, configs_dir);
  print_report(report, std::cout);
  return report.all_pass() ? 0 : 2;
}

int cmd_fit_psnr(const std::string& samples_path) {
  std::ifstream in(samples_path);
  if (!in) throw std::runtime_error("cannot open samples: " + samples_path);
  std::vector<std::pair<double, double>> samples;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos)
      throw std::runtime_error("samples rows are size_bits,psnr_db");
    try {
      samples.emplace_back(std::stod(line.substr(0, comma)),
                           std::stod(line.substr(comma + 1)));
    } catch (const std::exception&) {
      if (samples.empty()) continue;  // header row
      throw std::runtime_error("bad sample row: " + line);
    }
  }
  const auto [a, c] = fit_psnr_coeffs(samples);
  std::cout << "a = " << a << "\nc = " << c << '\n';
  return 0;
}

int cmd_gen_trace(const std::string& net_config_path, const std::string& out) {
  SimConfig cfg = load_sim_config(net_config_path);
  apply_seed_override(cfg);
  cfg.net.seed = cfg.seed;
  const double p_n = cfg.policy.distortion.p_n;
  std::vector<double> send_times(static_cast<std::size_t>(cfg.total_frames));
  std::vector<double> stamped(send_times.size(), p_n);
  for (std::size_t i = 0; i < send_times.size(); ++i)
    send_times[i] = static_cast<double>(i + 1) * p_n;
  save_trace(synthesize_trace(cfg.net, send_times, stamped), out);
  std::cout << "wrote " << send_times.size() << " rows to " << out << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"playoutlab: joint frame-generation / playout-rate control "
               "simulator and experiment harness"};
  app.require_subcommand(1);

  std::string config_path, trace_path, out_dir;
  auto* run_cmd = app.add_subcommand("run", "run one simulation");
  run_cmd->add_option("--config", config_path, "configuration file")->required();
  run_cmd->add_option("--trace", trace_path, "network trace CSV");
  run_cmd->add_option("--out", out_dir, "output directory for logs");

  std::string spec_path, sweep_out;
  auto* sweep_cmd = app.add_subcommand("sweep", "run a parameter sweep");
  sweep_cmd->add_option("--spec", spec_path, "sweep spec file")->required();
  sweep_cmd->add_option("--out", sweep_out, "output directory");

  std::string report_in, report_configs = "configs";
  auto* report_cmd =
      app.add_subcommand("report", "evaluate the acceptance criteria");
  report_cmd->add_option("--in", report_in, "directory with suite tables")
      ->required();
  report_cmd->add_option("--configs", report_configs, "scenario config dir");

  std::string samples_path;
  auto* fit_cmd = app.add_subcommand("fit-psnr", "fit the PSNR log model");
  fit_cmd->add_option("--samples", samples_path, "CSV of size_bits,psnr_db")
      ->required();

  std::string net_config, trace_out;
  auto* gen_cmd = app.add_subcommand("gen-trace", "synthesize a network trace");
  gen_cmd->add_option("--net-config", net_config, "configuration file")
      ->required();
  gen_cmd->add_option("--out", trace_out, "trace file to write")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_cmd->parsed()) return cmd_run(config_path, trace_path, out_dir);
    if (sweep_cmd->parsed()) return cmd_sweep(spec_path, sweep_out);
    if (report_cmd->parsed()) return cmd_report(report_in, report_configs);
    if (fit_cmd->parsed()) return cmd_fit_psnr(samples_path);
    if (gen_cmd->parsed()) return cmd_gen_trace(net_config, trace_out);
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << '\n';
    return 1;
  }
  return 0;
}
