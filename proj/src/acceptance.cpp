#include "playoutlab/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "playoutlab/bounds.hpp"
#include "playoutlab/config.hpp"
#include "playoutlab/sweep.hpp"

namespace playoutlab {

bool AcceptanceReport::all_pass() const {
  return std::all_of(criteria.begin(), criteria.end(),
                     [](const CriterionResult& c) { return c.pass; });
}

void print_report(const AcceptanceReport& report, std::ostream& out) {
  for (const CriterionResult& c : report.criteria) {
    std::string name = c.name;
    if (name.size() < 28) name.append(28 - name.size(), '.');
    char head[16];
    std::snprintf(head, sizeof(head), "[%2d] ", c.id);
    out << head << name << ' ' << (c.pass ? "PASS" : "FAIL") << "  " << c.detail
        << '\n';
  }
  out << (report.all_pass() ? "acceptance: all criteria passed"
                            : "acceptance: FAILURES present")
      << '\n';
}

namespace {

namespace fs = std::filesystem;

std::string join(const std::string& dir, const std::string& name) {
  return (fs::path(dir) / name).string();
}

std::vector<double> theta_values() {
  std::vector<double> values;
  double v = 4.27;
  for (int k = 0; k < 7; ++k, v *= 2.0) values.push_back(v);
  return values;
}

std::vector<double> prebuffer_values() {
  return {1.0 / 30.0, 0.1, 1.0 / 3.0, 1.0, 10.0 / 3.0, 10.0};
}

std::vector<double> jitter_sigmas() {
  std::vector<double> sigmas;
  for (int k = 1; k <= 10; ++k) sigmas.push_back(0.15 * k);
  return sigmas;
}

double elapsed_s(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
      .count();
}

std::string fmt(const char* format, ...) {
  char buf[512];
  va_list args;
  va_start(args, format);
  std::vsnprintf(buf, sizeof(buf), format, args);
  va_end(args);
  return buf;
}

// ---------------------------------------------------------------------------
// Suite generation

void write_timings(const std::map<std::string, double>& timings,
                   const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "name,seconds\n";
  for (const auto& [name, seconds] : timings)
    out << name << ',' << fmt("%.3f", seconds) << '\n';
}

std::map<std::string, double> read_timings(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("missing suite timings: " + path);
  std::map<std::string, double> timings;
  std::string line;
  std::getline(in, line);  // header
  while (std::getline(in, line)) {
    const auto comma = line.find(',');
    if (comma == std::string::npos) continue;
    timings[line.substr(0, comma)] = std::stod(line.substr(comma + 1));
  }
  return timings;
}

}  // namespace

void run_standard_suite(const std::string& configs_dir,
                        const std::string& out_dir) {
  fs::create_directories(out_dir);
  const SimConfig s1 = load_sim_config(join(configs_dir, "s1_ideal.cfg"));
  const SimConfig s2 = load_sim_config(join(configs_dir, "s2_lognormal.cfg"));
  const SimConfig s3 = load_sim_config(join(configs_dir, "s3_markov.cfg"));
  const SimConfig s4 = load_sim_config(join(configs_dir, "s4_lossy.cfg"));
  std::map<std::string, double> timings;

  {  // Ideal network, every controller.
    SweepSpec spec;
    spec.variable = SweepVariable::Prebuffer;
    spec.values = {0.5};
    spec.controllers = {ControllerKind::Norm,   ControllerKind::Amp,
                        ControllerKind::Amp25,  ControllerKind::AmpLive,
                        ControllerKind::LOpt,   ControllerKind::LOptM,
                        ControllerKind::DLOpt,  ControllerKind::DLOptM};
    emit_csv(run_sweep(spec, s1), join(out_dir, "s1_ideal.csv"));
  }

  {  // Prebuffer sweep on the jitter scenario.
    const auto start = std::chrono::steady_clock::now();
    SweepSpec spec;
    spec.variable = SweepVariable::Prebuffer;
    spec.values = prebuffer_values();
    spec.controllers = {ControllerKind::Norm, ControllerKind::Amp,
                        ControllerKind::Amp25, ControllerKind::LOpt,
                        ControllerKind::LOptM};
    emit_csv(run_sweep(spec, s2), join(out_dir, "s2_prebuffer.csv"));
    timings["s2_prebuffer"] = elapsed_s(start);
  }

  {  // Delay-budget sweeps on scenarios S2-S4.
    SweepSpec spec;
    spec.variable = SweepVariable::Theta;
    spec.values = theta_values();
    spec.controllers = {ControllerKind::DLOpt, ControllerKind::DLOptM};
    emit_csv(run_sweep(spec, s2), join(out_dir, "s2_theta.csv"));
    emit_csv(run_sweep(spec, s3), join(out_dir, "s3_theta.csv"));
    emit_csv(run_sweep(spec, s4), join(out_dir, "s4_theta.csv"));
  }

  {  // Jitter-intensity sweep for the penalty/continuity correlation.
    std::vector<ResultRow> table;
    for (const double sigma : jitter_sigmas()) {
      SimConfig cfg = s2;
      cfg.prebuffer_s = 0.2;
      cfg.policy.controller = ControllerKind::LOpt;
      cfg.net.jitter.sigma = sigma;
      ResultRow row;
      row.controller = "LOpt";
      row.sweep_var = "jitter_sigma";
      row.sweep_value = sigma;
      row.seed = cfg.seed;
      row.metrics = run(cfg).metrics;
      table.push_back(std::move(row));
    }
    emit_csv(table, join(out_dir, "jitter_sweep.csv"));
  }

  {  // Long-run penalty average vs the drift bound, three seeds.
    std::ofstream out(join(out_dir, "u_stability.csv"));
    if (!out) throw std::runtime_error("cannot write u_stability.csv");
    out << "seed,u_avg_final_half,u_avg_bound\n";
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
      SimConfig cfg = s2;
      cfg.policy.controller = ControllerKind::LOpt;
      cfg.seed = seed;
      const RunResult result = run(cfg);
      const std::size_t half = result.log.size() / 2;
      double sum = 0.0;
      for (std::size_t i = half; i < result.log.size(); ++i)
        sum += result.log[i].u_s;
      const double avg =
          sum / static_cast<double>(result.log.size() - half);
      const BoundSet bounds =
          compute_bounds(cfg.policy, 0, cfg.total_frames);
      out << seed << ',' << fmt("%.10g", avg) << ','
          << fmt("%.10g", bounds.u_avg_bound) << '\n';
    }
  }

  write_timings(timings, join(out_dir, "suite_timings.csv"));
}

// ---------------------------------------------------------------------------
// Evaluation

namespace {

struct TableIndex {
  std::vector<ResultRow> rows;

  std::vector<double> values(const std::string& controller) const {
    std::vector<double> out;
    for (const ResultRow& r : rows)
      if (r.controller == controller &&
          std::find(out.begin(), out.end(), r.sweep_value) == out.end())
        out.push_back(r.sweep_value);
    std::sort(out.begin(), out.end());
    return out;
  }

  const ResultRow* find(const std::string& controller, double value) const {
    for (const ResultRow& r : rows)
      if (r.controller == controller && r.sweep_value == value) return &r;
    return nullptr;
  }
};

double spearman(const std::vector<double>& xs, const std::vector<double>& ys) {
  const std::size_t n = xs.size();
  auto ranks = [n](const std::vector<double>& v) {
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> rank(n);
    std::size_t i = 0;
    while (i < n) {
      std::size_t j = i;
      while (j + 1 < n && v[order[j + 1]] == v[order[i]]) ++j;
      const double avg = 0.5 * (static_cast<double>(i) + static_cast<double>(j)) + 1.0;
      for (std::size_t k = i; k <= j; ++k) rank[order[k]] = avg;
      i = j + 1;
    }
    return rank;
  };
  const std::vector<double> rx = ranks(xs);
  const std::vector<double> ry = ranks(ys);
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += rx[i];
    my += ry[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double num = 0.0, dx = 0.0, dy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    num += (rx[i] - mx) * (ry[i] - my);
    dx += (rx[i] - mx) * (rx[i] - mx);
    dy += (ry[i] - my) * (ry[i] - my);
  }
  if (dx == 0.0 || dy == 0.0) return 0.0;  // a constant series has no ranking
  return num / std::sqrt(dx * dy);
}

struct RandomTuples {
  std::uint64_t state = 0x853C49E6748FEA9BULL;

  double uniform01() {
    state += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    z ^= z >> 31;
    return static_cast<double>(z >> 11) * 0x1.0p-53;
  }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }
  double log_uniform(double lo, double hi) {
    return std::exp(uniform(std::log(lo), std::log(hi)));
  }
};

CriterionResult check_oracle_equivalence() {
  CriterionResult c{1, "policy-oracle-equivalence", false, ""};
  const auto start = std::chrono::steady_clock::now();
  RandomTuples rng;
  double worst = 0.0;
  const int kTuples = 10000;
  for (int i = 0; i < kTuples; ++i) {
    PolicyConfig cfg;
    cfg.V = rng.log_uniform(0.1, 10.0);
    cfg.quality.a = rng.uniform(1.0, 10.0);
    cfg.quality.c = rng.uniform(-5.0, 20.0);
    cfg.quality.f_min = rng.uniform(0.004, 0.02);
    cfg.quality.f_max = cfg.quality.f_min * rng.uniform(2.0, 6.0);
    cfg.distortion.m = i % 20 == 0 ? 0.0 : rng.log_uniform(0.05, 10.0);
    cfg.distortion.p_min = rng.uniform(0.01, 0.02);
    cfg.distortion.p_n = cfg.distortion.p_min * rng.uniform(1.0, 2.0);
    cfg.distortion.p_max = cfg.distortion.p_n * rng.uniform(1.0, 3.0);
    cfg.u_bar = rng.uniform(0.5, 100.0);
    const double e = rng.uniform(0.25, 4.0);
    const double u = rng.uniform01() < 0.1 ? 0.0 : rng.log_uniform(1e-4, 30.0);
    const double x = rng.uniform(0.0, cfg.u_bar);
    const double t_d = rng.uniform(0.0, 0.01);
    const double tol = 1e-9;

    {
      const double closed = encoder_policy(u, e, cfg);
      const double golden = solve_concave_1d(
          [&](double f) {
            return cfg.V * frame_quality(cfg.quality, f) - u * e * f;
          },
          cfg.quality.f_min, cfg.quality.f_max, tol);
      worst = std::max(worst, std::abs(closed - golden));
    }
    if (!(cfg.distortion.m == 0.0 && u == 0.0)) {
      const double closed = decoder_policy(u, cfg);
      const double golden = solve_concave_1d(
          [&](double p) {
            return u * p - cfg.V * playout_distortion(cfg.distortion, p);
          },
          cfg.distortion.p_min, cfg.distortion.p_max, tol);
      worst = std::max(worst, std::abs(closed - golden));
    }
    if (!(cfg.distortion.m == 0.0 && u == x)) {
      const double closed = decoder_policy_delay_constrained(u, x, t_d, cfg);
      const double golden = solve_concave_1d(
          [&](double p) {
            return (u - x) * p - cfg.V * playout_distortion(cfg.distortion, p);
          },
          cfg.distortion.p_min, cfg.distortion.p_max, tol);
      worst = std::max(worst, std::abs(closed - golden));
    }
  }
  const double seconds = elapsed_s(start);
  c.pass = worst <= 1e-6 && seconds < 10.0;
  c.detail = fmt("max|closed-golden| = %.3g s (<= 1e-6), runtime %.2f s (< 10)",
                 worst, seconds);
  return c;
}

CriterionResult check_x_bound(const TableIndex& s2t, const TableIndex& s3t,
                              const TableIndex& s4t, double x_cap) {
  CriterionResult c{2, "x-bound-deterministic", false, ""};
  double worst = 0.0;
  int rows = 0;
  for (const TableIndex* t : {&s2t, &s3t, &s4t}) {
    for (const ResultRow& r : t->rows) {
      worst = std::max(worst, r.metrics.max_x);
      ++rows;
    }
  }
  c.pass = rows > 0 && worst <= x_cap;
  c.detail = fmt("max X over %d runs = %.6g s (cap %.6g s)", rows, worst, x_cap);
  return c;
}

CriterionResult check_delay_budget(const TableIndex& s2t, const TableIndex& s3t,
                                   const TableIndex& s4t, double slack) {
  CriterionResult c{3, "delay-budget", false, ""};
  double worst_margin = -1e300;
  int rows = 0;
  bool seven = true;
  for (const TableIndex* t : {&s2t, &s3t, &s4t}) {
    seven = seven && t->values("DLOpt").size() == 7;
    for (const ResultRow& r : t->rows) {
      if (r.controller != "DLOpt") continue;
      const double budget = r.sweep_value + slack;
      worst_margin = std::max(worst_margin, r.metrics.total_playout_delay - budget);
      ++rows;
    }
  }
  c.pass = rows > 0 && seven && worst_margin <= 0.0;
  c.detail = fmt("worst delay-minus-budget = %.6g s over %d runs (7 thetas: %s)",
                 worst_margin, rows, seven ? "yes" : "no");
  return c;
}

CriterionResult check_theorem1(const std::string& path) {
  CriterionResult c{4, "theorem1-stability", false, ""};
  std::ifstream in(path);
  if (!in) throw std::runtime_error("missing table: " + path);
  std::string line;
  std::getline(in, line);
  int seeds = 0;
  bool ok = true;
  double worst_ratio = 0.0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string seed, avg, bound;
    std::getline(row, seed, ',');
    std::getline(row, avg, ',');
    std::getline(row, bound, ',');
    const double u_avg = std::stod(avg);
    const double u_bound = std::stod(bound);
    ok = ok && u_avg < u_bound;
    worst_ratio = std::max(worst_ratio, u_avg / u_bound);
    ++seeds;
  }
  c.pass = ok && seeds == 3;
  c.detail = fmt("final-half avg(U) <= bound on %d/3 seeds, worst ratio %.3g",
                 seeds, worst_ratio);
  return c;
}

CriterionResult check_continuity_ordering(const TableIndex& t,
                                          double sweep_seconds) {
  CriterionResult c{5, "continuity-ordering", false, ""};
  bool ordered = true;
  for (const double v : t.values("Norm")) {
    const ResultRow* lopt = t.find("LOpt", v);
    const ResultRow* amp25 = t.find("AMP25", v);
    const ResultRow* norm = t.find("Norm", v);
    if (!lopt || !amp25 || !norm) {
      ordered = false;
      break;
    }
    ordered = ordered &&
              lopt->metrics.continuity >= amp25->metrics.continuity - 1e-12 &&
              amp25->metrics.continuity >= norm->metrics.continuity - 1e-12;
  }
  auto min99 = [&](const std::string& controller) -> std::optional<double> {
    for (const double v : t.values(controller)) {
      const ResultRow* r = t.find(controller, v);
      if (r && r->metrics.continuity >= 0.99) return v;
    }
    return std::nullopt;
  };
  const auto norm99 = min99("Norm");
  const auto lopt99 = min99("LOpt");
  const double ratio =
      (norm99 && lopt99) ? *norm99 / *lopt99 : 0.0;
  c.pass = ordered && ratio >= 10.0 && sweep_seconds < 120.0;
  c.detail = fmt(
      "ordering %s; prebuffer@99%%: Norm=%s s, LOpt=%s s, ratio %.3g (>= 10); "
      "sweep %.1f s (< 120)",
      ordered ? "holds" : "violated",
      norm99 ? fmt("%.4g", *norm99).c_str() : "none",
      lopt99 ? fmt("%.4g", *lopt99).c_str() : "none", ratio, sweep_seconds);
  return c;
}

CriterionResult check_distortion_ordering(const TableIndex& t) {
  CriterionResult c{6, "distortion-ordering", false, ""};
  bool norm_zero = true;
  for (const ResultRow& r : t.rows)
    if (r.controller == "Norm" && r.metrics.playout_distortion != 0.0)
      norm_zero = false;
  bool ok = true;
  int compared = 0;
  double worst = 0.0;
  for (const double v : t.values("LOpt")) {
    const ResultRow* lopt = t.find("LOpt", v);
    const ResultRow* amp = t.find("AMP", v);
    if (!lopt || !amp) continue;
    if (lopt->metrics.continuity < 0.99 || amp->metrics.continuity < 0.99)
      continue;
    ++compared;
    const double excess =
        lopt->metrics.playout_distortion - amp->metrics.playout_distortion;
    worst = std::max(worst, excess);
    ok = ok && excess <= 1e-12;
  }
  c.pass = norm_zero && ok && compared > 0;
  c.detail = fmt(
      "Norm distortion %s zero; LOpt <= auto-AMP at %d joint-99%% points "
      "(worst excess %.3g)",
      norm_zero ? "exactly" : "NOT", compared, worst);
  return c;
}

CriterionResult check_psnr_tradeoff(const TableIndex& t) {
  CriterionResult c{7, "psnr-tradeoff", false, ""};
  double lo = 1e300, hi = -1e300;
  int points = 0;
  for (const double v : t.values("Norm")) {
    const ResultRow* norm = t.find("Norm", v);
    const ResultRow* lopt = t.find("LOpt", v);
    if (!norm || !lopt) continue;
    const double diff = norm->metrics.mean_psnr - lopt->metrics.mean_psnr;
    lo = std::min(lo, diff);
    hi = std::max(hi, diff);
    ++points;
  }
  c.pass = points > 0 && lo > 0.0 && hi <= 2.0;
  c.detail =
      fmt("Norm-LOpt mean PSNR diff in [%.4g, %.4g] dB over %d points "
          "(need (0, 2])",
          lo, hi, points);
  return c;
}

CriterionResult check_u_correlation(const TableIndex& t) {
  CriterionResult c{8, "u-continuity-correlation", false, ""};
  std::vector<double> mean_u, continuity;
  for (const ResultRow& r : t.rows) {
    mean_u.push_back(r.metrics.mean_u);
    continuity.push_back(r.metrics.continuity);
  }
  const double rho = spearman(mean_u, continuity);
  c.pass = mean_u.size() == 10 && rho <= -0.5;
  c.detail = fmt("Spearman rho(mean U, continuity) = %.3f over %zu points "
                 "(need <= -0.5)",
                 rho, mean_u.size());
  return c;
}

CriterionResult check_degeneracy(const TableIndex& ideal,
                                 const TableIndex& prebuf,
                                 const TableIndex& s2theta,
                                 const SimConfig& s2) {
  CriterionResult c{9, "degeneracy-suite", false, ""};
  bool ideal_ok = !ideal.rows.empty();
  for (const ResultRow& r : ideal.rows)
    ideal_ok = ideal_ok && r.metrics.continuity == 1.0 &&
               r.metrics.playout_distortion == 0.0 && r.metrics.mean_u == 0.0;

  // Zero network delay collapses the delayed update machinery.
  SimConfig plain = s2;
  plain.policy.controller = ControllerKind::LOpt;
  plain.policy.d_f = 0;
  plain.policy.d_b = 0;
  plain.policy.u_update = PenaltyUpdate::Step;
  SimConfig delayed = plain;
  delayed.policy.u_update = PenaltyUpdate::DfSlot;
  const bool identical =
      slot_log_csv(run(plain).log) == slot_log_csv(run(delayed).log);

  // Conservative vs loose slack stays within 10% on the jitter scenario.
  auto within10 = [](const RunMetrics& a, const RunMetrics& b) {
    auto close = [](double x, double y, double floor_abs) {
      return std::abs(x - y) <= 0.10 * std::max(std::abs(x), std::abs(y)) +
                                    floor_abs;
    };
    return close(a.continuity, b.continuity, 1e-9) &&
           close(a.playout_distortion, b.playout_distortion, 1e-6) &&
           close(a.total_playout_delay, b.total_playout_delay, 1e-3) &&
           close(a.mean_psnr, b.mean_psnr, 1e-9);
  };
  bool variants_ok = true;
  int variant_points = 0;
  for (const double v : prebuf.values("LOpt")) {
    const ResultRow* a = prebuf.find("LOpt", v);
    const ResultRow* b = prebuf.find("LOptM", v);
    if (!a || !b) continue;
    variants_ok = variants_ok && within10(a->metrics, b->metrics);
    ++variant_points;
  }
  for (const double v : s2theta.values("DLOpt")) {
    const ResultRow* a = s2theta.find("DLOpt", v);
    const ResultRow* b = s2theta.find("DLOptM", v);
    if (!a || !b) continue;
    variants_ok = variants_ok && within10(a->metrics, b->metrics);
    ++variant_points;
  }

  c.pass = ideal_ok && identical && variants_ok && variant_points > 0;
  c.detail = fmt(
      "ideal net clean on %zu controllers: %s; d=0 logs byte-identical: %s; "
      "conservative~loose within 10%% at %d points: %s",
      ideal.rows.size(), ideal_ok ? "yes" : "NO", identical ? "yes" : "NO",
      variant_points, variants_ok ? "yes" : "NO");
  return c;
}

CriterionResult check_determinism(const SimConfig& s2) {
  CriterionResult c{10, "determinism", false, ""};
  SimConfig cfg = s2;
  cfg.policy.controller = ControllerKind::LOpt;
  const RunResult a = run(cfg);
  const RunResult b = run(cfg);
  ResultRow ra{"LOpt", "none", 0.0, cfg.seed, a.metrics};
  ResultRow rb{"LOpt", "none", 0.0, cfg.seed, b.metrics};
  const bool logs_equal = slot_log_csv(a.log) == slot_log_csv(b.log);
  const bool rows_equal = results_csv({ra}) == results_csv({rb});
  c.pass = logs_equal && rows_equal;
  c.detail = fmt("two identical runs: slot logs byte-identical: %s, "
                 "result rows identical: %s",
                 logs_equal ? "yes" : "NO", rows_equal ? "yes" : "NO");
  return c;
}

TableIndex load_table(const std::string& dir, const std::string& name) {
  return TableIndex{load_results_csv(join(dir, name))};
}

}  // namespace

AcceptanceReport evaluate_acceptance(const std::string& dir,
                                     const std::string& configs_dir) {
  const SimConfig s2 = load_sim_config(join(configs_dir, "s2_lognormal.cfg"));
  const TableIndex ideal = load_table(dir, "s1_ideal.csv");
  const TableIndex prebuf = load_table(dir, "s2_prebuffer.csv");
  const TableIndex s2theta = load_table(dir, "s2_theta.csv");
  const TableIndex s3theta = load_table(dir, "s3_theta.csv");
  const TableIndex s4theta = load_table(dir, "s4_theta.csv");
  const TableIndex jitter = load_table(dir, "jitter_sweep.csv");
  const auto timings = read_timings(join(dir, "suite_timings.csv"));

  const double x_cap = s2.policy.u_bar + s2.policy.distortion.p_max;
  const auto sweep_time_it = timings.find("s2_prebuffer");
  const double sweep_seconds =
      sweep_time_it != timings.end() ? sweep_time_it->second : 1e9;

  AcceptanceReport report;
  report.criteria.push_back(check_oracle_equivalence());
  report.criteria.push_back(check_x_bound(s2theta, s3theta, s4theta, x_cap));
  report.criteria.push_back(check_delay_budget(s2theta, s3theta, s4theta, x_cap));
  report.criteria.push_back(check_theorem1(join(dir, "u_stability.csv")));
  report.criteria.push_back(check_continuity_ordering(prebuf, sweep_seconds));
  report.criteria.push_back(check_distortion_ordering(prebuf));
  report.criteria.push_back(check_psnr_tradeoff(prebuf));
  report.criteria.push_back(check_u_correlation(jitter));
  report.criteria.push_back(check_degeneracy(ideal, prebuf, s2theta, s2));
  report.criteria.push_back(check_determinism(s2));
  return report;
}

}  // namespace playoutlab
