#include "uvm/io/commands.hpp"

#include <cmath>
#include <ostream>

#include "uvm/bsde.hpp"
#include "uvm/control.hpp"
#include "uvm/convergence.hpp"
#include "uvm/error.hpp"
#include "uvm/hjb.hpp"
#include "uvm/io/export.hpp"
#include "uvm/sde.hpp"

namespace uvm::io {

namespace fs = std::filesystem;

std::optional<Command> parse_command(std::string_view name) noexcept {
  if (name == "price") return Command::kPrice;
  if (name == "simulate") return Command::kSimulate;
  if (name == "sweep") return Command::kSweep;
  if (name == "corrector") return Command::kCorrector;
  if (name == "check2bsde") return Command::kCheck2bsde;
  return std::nullopt;
}

std::string_view to_string(Command command) noexcept {
  switch (command) {
    case Command::kPrice: return "price";
    case Command::kSimulate: return "simulate";
    case Command::kSweep: return "sweep";
    case Command::kCorrector: return "corrector";
    case Command::kCheck2bsde: return "check2bsde";
  }
  return "unknown";
}

namespace {

JsonSummary base_summary(const RunConfig& cfg, Command command, std::uint64_t seed) {
  JsonSummary j;
  j.set("command", std::string(to_string(command)))
      .set("config_hash", cfg.hash)
      .set("seed", seed)
      .set("sigma_vol_of_vol_assumed", cfg.sigma_assumed)
      .set_null("p_delta")
      .set_null("p0")
      .set_null("p1")
      .set_null("error")
      .set_null("slope")
      .set_raw("config", cfg.snapshot);
  return j;
}

PriceSurface solve_full(const RunConfig& cfg, const ModelParams& params,
                        const SolverOptions& solver) {
  const GridSpec g = with_admissible_time_steps(params, cfg.grid, StabilityScope::kFull);
  return solve_hjb_2d(params, cfg.payoff, g, solver);
}

PriceSurface solve_limit(const RunConfig& cfg, const SolverOptions& solver) {
  const ModelParams limit = cfg.model.with_delta(0.0);
  const GridSpec g = with_admissible_time_steps(limit, cfg.grid, StabilityScope::kXOnly);
  return solve_bsb_1d(limit, cfg.payoff, g, std::nullopt, solver);
}

}  // namespace

std::vector<fs::path> cmd_price(const RunConfig& cfg, std::ostream& out) {
  const Provenance prov{cfg.hash, 0};
  std::vector<fs::path> files;
  const PriceSurface pd = solve_full(cfg, cfg.model, cfg.solver);
  const double p_delta = pd.value_at_start(cfg.x0, cfg.v0);
  JsonSummary summary = base_summary(cfg, Command::kPrice, 0);
  summary.set("p_delta", p_delta).set("delta", cfg.model.delta()).set("n_t", static_cast<std::uint64_t>(pd.grid().n_t()));
  out << "P_delta(0, " << cfg.x0 << ", " << cfg.v0 << ") = " << format_number(p_delta) << '\n';

  files.push_back(cfg.out_dir / "surface.csv");
  write_surface_csv(files.back(), pd, prov);
  const ControlField control = optimal_control_field(
      pd, cfg.model, 0, default_gamma_tolerance(cfg.payoff, cfg.grid));
  files.push_back(cfg.out_dir / "control.csv");
  write_control_csv(files.back(), control, cfg.grid, prov);

  if (cfg.solve_p0) {
    const PriceSurface p0s = solve_limit(cfg, cfg.solver);
    const double p0 = p0s.value_at_start(cfg.x0, cfg.v0);
    summary.set("p0", p0).set("error", p_delta - p0);
    out << "P_0(0, " << cfg.x0 << ", " << cfg.v0 << ") = " << format_number(p0) << '\n'
        << "P_delta - P_0 = " << format_number(p_delta - p0) << '\n';
    files.push_back(cfg.out_dir / "surface_p0.csv");
    write_surface_csv(files.back(), p0s, prov);
  }
  files.push_back(cfg.out_dir / "price.json");
  summary.write(files.back());
  return files;
}

std::vector<fs::path> cmd_simulate(const RunConfig& cfg, std::ostream& out) {
  const SimulationBlock& s = cfg.simulation;
  const Provenance prov{cfg.hash, s.seed};
  const SimulationSpec spec{cfg.x0, cfg.v0, s.n_paths, s.n_steps, cfg.grid.T(), s.seed};

  std::optional<PriceSurface> surface;
  std::unique_ptr<VolatilityPolicy> policy;
  if (s.policy == "worst_case") {
    SolverOptions dense = cfg.solver;
    dense.retention = Retention::kDense;
    surface.emplace(solve_full(cfg, cfg.model, dense));
    policy = std::make_unique<WorstCasePolicy>(*surface, cfg.model,
                                               WorstCasePolicy::Rule::kHamiltonian);
  } else {
    policy = std::make_unique<FixedVolatility>(s.q);
  }

  std::vector<fs::path> files{cfg.out_dir / "paths.csv"};
  PathCsvWriter paths(files.back(), prov);
  const std::size_t exported = std::min(s.export_paths, s.n_paths);
  const double discount = std::exp(-cfg.model.r() * spec.T);
  RunningStats payoff, x_sq, v_int_sq;
  std::vector<double> v_acc(s.n_paths, 0.0);
  const double dt = spec.T / static_cast<double>(spec.n_steps);
  simulate_streaming(cfg.model, spec, *policy,
                     [&](std::size_t step, double t, std::span<const double> xs,
                         std::span<const double> vs) {
                       for (std::size_t p = 0; p < exported; ++p) paths.row(p, step, t, xs[p], vs[p]);
                       const double w = (step == 0 || step == spec.n_steps) ? 0.5 * dt : dt;
                       for (std::size_t p = 0; p < xs.size(); ++p) v_acc[p] += w * vs[p] * vs[p];
                       if (step != spec.n_steps) return;
                       for (std::size_t p = 0; p < xs.size(); ++p) {
                         payoff.add(discount * cfg.payoff(xs[p]));
                         x_sq.add(xs[p] * xs[p]);
                         v_int_sq.add(v_acc[p]);
                       }
                     });

  JsonSummary summary = base_summary(cfg, Command::kSimulate, s.seed);
  summary.set("policy", policy->tag())
      .set("payoff_mean", payoff.mean())
      .set("payoff_std_error", payoff.std_error())
      .set("x_terminal_second_moment", x_sq.mean())
      .set("x_terminal_second_moment_std_error", x_sq.std_error())
      .set("v_integrated_second_moment", v_int_sq.mean())
      .set("v_integrated_second_moment_std_error", v_int_sq.std_error())
      .set("n_paths", static_cast<std::uint64_t>(s.n_paths))
      .set("n_steps", static_cast<std::uint64_t>(s.n_steps));
  if (surface) summary.set("p_delta", surface->value_at_start(cfg.x0, cfg.v0));
  out << "E[h(X_T)] = " << format_number(payoff.mean()) << " +/- "
      << format_number(payoff.std_error()) << " (" << policy->tag() << ")\n";
  files.push_back(cfg.out_dir / "simulate.json");
  summary.write(files.back());
  return files;
}

std::vector<fs::path> cmd_sweep(const RunConfig& cfg, std::ostream& out) {
  SweepOptions options;
  options.floor_rule = cfg.sweep.floor_rule;
  options.floor_multiplier = cfg.sweep.floor_multiplier;
  options.solver = cfg.solver;
  const ConvergenceReport report = run_delta_sweep(cfg.model, cfg.payoff, cfg.grid, cfg.x0,
                                                   cfg.v0, cfg.sweep.deltas, options);
  const Provenance prov{cfg.hash, 0};
  std::vector<fs::path> files{cfg.out_dir / "sweep.csv", cfg.out_dir / "sweep.gp",
                              cfg.out_dir / "sweep.json"};
  write_sweep_csv(files[0], report, prov);
  write_sweep_plot(files[1], "sweep.csv", report);

  JsonSummary summary = base_summary(cfg, Command::kSweep, 0);
  summary.set("slope", report.fit.slope)
      .set("intercept", report.fit.intercept)
      .set("noise_floor", report.noise_floor)
      .set("low_row_count", report.low_row_count)
      .set("deltas_excluded", std::span<const double>(report.deltas_excluded));
  for (const SweepRow& r : report.rows) {
    JsonSummary row;
    row.set("delta", r.delta).set("p_delta", r.p_delta).set("p0", r.p0).set("error", r.error)
        .set("excluded", r.excluded);
    summary.append("rows", row);
    out << "delta=" << format_number(r.delta) << "  P_delta-P_0=" << format_number(r.error)
        << (r.excluded ? "  (below noise floor)" : "") << '\n';
  }
  if (!report.rows.empty()) summary.set("p0", report.rows.front().p0);
  out << "log-log slope = " << format_number(report.fit.slope)
      << (report.low_row_count ? "  (two rows only)" : "") << '\n';
  summary.write(files[2]);
  return files;
}

std::vector<fs::path> cmd_corrector(const RunConfig& cfg, std::ostream& out) {
  const Provenance prov{cfg.hash, 0};
  SolverOptions dense = cfg.solver;
  dense.retention = Retention::kDense;
  const PriceSurface p0s = solve_limit(cfg, dense);
  SolverOptions ends = cfg.solver;
  ends.retention = Retention::kEndpoints;
  const PriceSurface p1s = solve_corrector(cfg.model, cfg.payoff, p0s.grid(), p0s, ends);

  std::vector<fs::path> files{cfg.out_dir / "corrector.csv"};
  write_surface_csv(files.back(), p1s, prov);
  const double p0 = p0s.value_at_start(cfg.x0, cfg.v0);
  const double p1 = p1s.value_at_start(cfg.x0, cfg.v0);
  out << "P_0 = " << format_number(p0) << "  P_1 = " << format_number(p1) << '\n';

  JsonSummary summary = base_summary(cfg, Command::kCorrector, 0);
  summary.set("p0", p0).set("p1", p1);
  if (!cfg.corrector_deltas.empty()) {
    const CorrectorReport report = corrector_sweep(cfg.model, cfg.payoff, cfg.grid, cfg.x0,
                                                   cfg.v0, cfg.corrector_deltas, cfg.solver);
    files.push_back(cfg.out_dir / "corrector_sweep.csv");
    write_corrector_csv(files.back(), report, prov);
    summary.set("e_over_delta_ratio", report.ratio)
        .set("bounded", report.bounded)
        .set("corrector_helps_at_smallest_delta", report.helps_at_smallest);
    for (const CorrectorRow& r : report.rows)
      out << "delta=" << format_number(r.delta) << "  E=" << format_number(r.e)
          << "  E/delta=" << format_number(r.e_over_delta) << '\n';
  }
  files.push_back(cfg.out_dir / "corrector.json");
  summary.write(files.back());
  return files;
}

std::vector<fs::path> cmd_check2bsde(const RunConfig& cfg, std::ostream& out) {
  SolverOptions dense = cfg.solver;
  dense.retention = Retention::kDense;
  const bool limit = cfg.model.delta() == 0.0;
  const PriceSurface surface = limit ? solve_limit(cfg, dense) : solve_full(cfg, cfg.model, dense);
  const BsdeRunSpec run{cfg.bsde.n_paths, cfg.bsde.n_steps, cfg.bsde.seed,
                        cfg.bsde.literal_driver};
  const BsdeResidualReport report =
      simulate_2bsde_residual(surface, cfg.payoff, {cfg.x0, cfg.v0}, run);

  JsonSummary summary = base_summary(cfg, Command::kCheck2bsde, cfg.bsde.seed);
  summary.set(limit ? "p0" : "p_delta", report.y0_fd).set("residual", to_json(report));
  out << "terminal residual RMS = " << format_number(report.terminal_residual_rms) << " over "
      << report.n_paths_used << " paths (" << report.n_paths_discarded << " discarded)\n";
  std::vector<fs::path> files{cfg.out_dir / "check2bsde.json"};
  summary.write(files.back());
  return files;
}

int run_command(Command command, const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    switch (command) {
      case Command::kPrice: cmd_price(cfg, out); break;
      case Command::kSimulate: cmd_simulate(cfg, out); break;
      case Command::kSweep: cmd_sweep(cfg, out); break;
      case Command::kCorrector: cmd_corrector(cfg, out); break;
      case Command::kCheck2bsde: cmd_check2bsde(cfg, out); break;
    }
    return kExitOk;
  } catch (const ValidationError& e) {
    err << "validation error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const NumericalError& e) {
    err << "numerical error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumerical;
  }
}

}  // namespace uvm::io
