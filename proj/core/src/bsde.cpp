#include "uvm/bsde.hpp"

#include <cmath>
#include <vector>

#include "uvm/error.hpp"
#include "uvm/greeks.hpp"
#include "uvm/rng.hpp"

namespace uvm {

double DriverSpec::operator()(double x, double v, double y, double z1, double z2, double s11,
                              double s12, double s22) const noexcept {
  const double ev = std::exp(v);
  const double sb = sigma_bar(s11);
  const double x_power = literal_ ? x : x * x;
  double f = -0.5 * x_power * ev * ev * sb * sb * s11;
  if (params_.r() != 0.0) f -= params_.r() * (x * z1 - y);
  if (kind_ == DriverKind::kLimit) return f;

  const double delta = params_.delta();
  const double vol_cross = params_.sigma() * params_.rho() * ev;
  if (literal_)
    f -= 2.0 * std::sqrt(delta) * x * vol_cross * std::abs(sigma_bar(s12)) * s12;
  else
    f -= std::sqrt(delta) * x * vol_cross * sb * s12;
  f -= delta * (0.5 * params_.sigma() * params_.sigma() * s22 + params_.factor_drift(v) * z2);
  return f;
}

DriverSpec build_driver(const ModelParams& params, DriverKind kind, bool literal) {
  return DriverSpec(params, kind, literal);
}

std::string_view to_string(DriverKind kind) noexcept {
  return kind == DriverKind::kLimit ? "f0" : "f_delta";
}

BsdeResidualReport simulate_2bsde_residual(const PriceSurface& surface,
                                           const PiecewiseLinearPayoff& payoff,
                                           ForwardStart start, const BsdeRunSpec& run) {
  if (surface.kind() == SurfaceKind::kCorrectorP1)
    throw ValidationError("surface", "needs a full_delta or limit_p0 surface");
  if (run.n_paths == 0) throw ValidationError("n_paths", "must be positive");
  if (run.n_steps == 0) throw ValidationError("n_steps", "must be positive");
  const GridSpec& grid = surface.grid();
  if (!(start.x > grid.x_min() && start.x < grid.x_max() && start.v > grid.v_min() &&
        start.v < grid.v_max()))
    throw ValidationError("x_tilde0", "must lie inside the grid interior");

  const DriverKind kind =
      surface.kind() == SurfaceKind::kLimitP0 ? DriverKind::kLimit : DriverKind::kFull;
  const DriverSpec f = build_driver(surface.params(), kind, run.literal_driver);

  const std::size_t n = run.n_paths;
  const double dt = grid.T() / static_cast<double>(run.n_steps);
  const double sqrt_dt = std::sqrt(dt);
  const CounterNormals rng(run.seed);

  std::vector<double> x(n, start.x), v(n, start.v), y(n);
  std::vector<std::uint8_t> alive(n, 1);
  const double y0 = surface.value_at_start(start.x, start.v);
  std::fill(y.begin(), y.end(), y0);

  SurfaceProbe probe(surface);
  for (std::size_t k = 0; k < run.n_steps; ++k) {
    probe.seek(static_cast<double>(k) * dt);
    for (std::size_t p = 0; p < n; ++p) {
      if (!alive[p]) continue;
      const PointGreeks g = probe.at(x[p], v[p]);
      const auto z = rng.pair(p, static_cast<std::uint32_t>(k), RngStream::kForwardBrownian);
      const double dw1 = sqrt_dt * z[0];
      const double dw2 = sqrt_dt * z[1];
      const double drift =
          f(x[p], v[p], y[p], g.delta, g.vega, g.gamma, g.vanna, g.vomma) +
          0.5 * (g.gamma + g.vomma);
      y[p] += drift * dt + g.delta * dw1 + g.vega * dw2;
      x[p] += dw1;
      v[p] += dw2;
      if (!grid.contains(x[p], v[p])) alive[p] = 0;
    }
  }

  BsdeResidualReport report;
  report.y0_fd = y0;
  report.driver = kind;
  RunningStats residual, start_consistency;
  double sq = 0.0;
  for (std::size_t p = 0; p < n; ++p) {
    if (!alive[p]) {
      ++report.n_paths_discarded;
      continue;
    }
    const double e = y[p] - payoff(x[p]);
    residual.add(e);
    start_consistency.add(y0 - e);
    sq += e * e;
  }
  report.n_paths_used = residual.count();
  if (report.n_paths_used == 0)
    throw NumericalError("every 2BSDE path left the grid; enlarge the domain");
  report.terminal_residual_rms = std::sqrt(sq / static_cast<double>(report.n_paths_used));
  report.terminal_residual_mean = residual.mean();
  report.y0_mean = start_consistency.mean();
  return report;
}

DriftEstimate martingale_check(const PriceSurface& surface, const ModelParams& params,
                               const SimulationSpec& spec, VolatilityPolicy& policy) {
  if (params.r() != 0.0) throw ValidationError("r", "martingale check assumes r = 0");
  if (surface.kind() == SurfaceKind::kCorrectorP1)
    throw ValidationError("surface", "needs a price surface");
  const double m0 = surface.value_at_start(spec.x0, spec.v0);
  const std::size_t last = surface.grid().n_t();
  RunningStats increments;
  simulate_streaming(params, spec, policy,
                     [&](std::size_t step, double, std::span<const double> xs,
                         std::span<const double> vs) {
                       if (step != spec.n_steps) return;
                       for (std::size_t p = 0; p < xs.size(); ++p)
                         increments.add(surface.value(last, xs[p], vs[p]) - m0);
                     });
  return {increments.mean(), increments.std_error(), m0};
}

}  // namespace uvm
