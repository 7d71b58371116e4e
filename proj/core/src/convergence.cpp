#include "uvm/convergence.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "uvm/control.hpp"
#include "uvm/error.hpp"
#include "uvm/greeks.hpp"
#include "uvm/sde.hpp"

namespace uvm {

LineFit fit_loglog_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw ValidationError("fit", "x and y differ in length");
  if (x.size() < 2) throw ValidationError("fit", "at least two points required");
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    if (!(x[k] > 0.0) || !(y[k] > 0.0))
      throw ValidationError("fit", "log-log fit needs positive values");
    const double lx = std::log(x[k]);
    const double ly = std::log(y[k]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double m = static_cast<double>(x.size());
  const double denom = m * sxx - sx * sx;
  if (std::abs(denom) < 1e-300) throw ValidationError("fit", "x values must be distinct");
  const double slope = (m * sxy - sx * sy) / denom;
  return {slope, (sy - slope * sx) / m};
}

namespace {

void check_deltas(std::span<const double> deltas) {
  if (deltas.empty()) throw ValidationError("deltas", "must not be empty");
  std::set<double> seen;
  for (double d : deltas) {
    if (!(d > 0.0 && d <= 1.0)) throw ValidationError("deltas", "each delta must lie in (0, 1]");
    if (!seen.insert(d).second) throw ValidationError("deltas", "values must be distinct");
  }
}

void check_point(const GridSpec& grid, double x, double v) {
  if (!grid.contains(x, v)) throw ValidationError("point", "must lie inside the grid");
}

std::vector<double> descending(std::span<const double> deltas) {
  std::vector<double> out(deltas.begin(), deltas.end());
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

// Runs `solve` and tags any numerical failure with the delta it occurred at.
template <class F>
auto at_delta(double delta, F&& solve) {
  try {
    return solve();
  } catch (const CflError&) {
    throw;
  } catch (const NumericalError& e) {
    std::ostringstream os;
    os << "delta=" << delta << ": " << e.what();
    throw NumericalError(os.str());
  }
}

double full_price(const ModelParams& params, const PiecewiseLinearPayoff& payoff,
                  const GridSpec& grid, double x, double v, const SolverOptions& solver) {
  const GridSpec g = with_admissible_time_steps(params, grid, StabilityScope::kFull);
  return solve_hjb_2d(params, payoff, g, solver).value_at_start(x, v);
}

double limit_price(const ModelParams& params, const PiecewiseLinearPayoff& payoff,
                   const GridSpec& grid, double x, double v, const SolverOptions& solver) {
  const GridSpec g = with_admissible_time_steps(params, grid, StabilityScope::kXOnly);
  return solve_bsb_1d(params, payoff, g, std::nullopt, solver).value_at_start(x, v);
}

}  // namespace

ConvergenceReport run_delta_sweep(const ModelParams& base, const PiecewiseLinearPayoff& payoff,
                                  const GridSpec& grid, double x, double v,
                                  std::span<const double> deltas,
                                  const SweepOptions& options) {
  check_deltas(deltas);
  check_point(grid, x, v);
  SolverOptions solver = options.solver;
  solver.retention = Retention::kEndpoints;

  ConvergenceReport report{0.0, x, v, {}, {}, 0.0, options.floor_rule, {}, false, grid, base};
  const double p0 = limit_price(base.with_delta(0.0), payoff, grid, x, v, solver);
  for (double d : descending(deltas)) {
    const double pd =
        at_delta(d, [&] { return full_price(base.with_delta(d), payoff, grid, x, v, solver); });
    report.rows.push_back({d, pd, p0, pd - p0, std::abs(pd - p0), false});
  }

  if (options.floor_rule != NoiseFloorRule::kNone) {
    const SweepRow& smallest = report.rows.back();
    const GridSpec fine = grid.refined(false);
    const double pd_fine = at_delta(smallest.delta, [&] {
      return full_price(base.with_delta(smallest.delta), payoff, fine, x, v, solver);
    });
    if (options.floor_rule == NoiseFloorRule::kPriceChange) {
      report.noise_floor = std::abs(smallest.p_delta - pd_fine);
    } else {
      const double p0_fine = limit_price(base.with_delta(0.0), payoff, fine, x, v, solver);
      report.noise_floor = std::abs(smallest.error - (pd_fine - p0_fine));
    }
  }

  std::vector<double> fit_x, fit_y;
  for (SweepRow& row : report.rows) {
    row.excluded = row.abs_error < options.floor_multiplier * report.noise_floor ||
                   row.abs_error == 0.0;
    if (row.excluded) {
      report.deltas_excluded.push_back(row.delta);
    } else {
      fit_x.push_back(row.delta);
      fit_y.push_back(row.abs_error);
    }
  }
  if (fit_x.size() < 2) {
    std::ostringstream os;
    os << "only " << fit_x.size() << " sweep rows above the noise floor " << report.noise_floor
       << "; at least two are needed for the slope";
    throw NumericalError(os.str());
  }
  report.fit = fit_loglog_slope(fit_x, fit_y);
  report.low_row_count = fit_x.size() == 2;
  return report;
}

CorrectorReport corrector_sweep(const ModelParams& base, const PiecewiseLinearPayoff& payoff,
                                const GridSpec& grid, double x, double v,
                                std::span<const double> deltas, const SolverOptions& solver) {
  check_deltas(deltas);
  check_point(grid, x, v);

  // P0 and P1 do not depend on delta. The corrector reads P0 at every level
  // it can, so the limit solve keeps its levels (subject to the budget).
  const ModelParams limit = base.with_delta(0.0);
  const GridSpec g0 = with_admissible_time_steps(limit, grid, StabilityScope::kXOnly);
  SolverOptions dense = solver;
  dense.retention = Retention::kDense;
  const PriceSurface p0s = solve_bsb_1d(limit, payoff, g0, std::nullopt, dense);
  SolverOptions ends = solver;
  ends.retention = Retention::kEndpoints;
  const PriceSurface p1s = solve_corrector(limit, payoff, g0, p0s, ends);
  const double p0 = p0s.value_at_start(x, v);
  const double p1 = p1s.value_at_start(x, v);

  CorrectorReport report;
  for (double d : descending(deltas)) {
    const double pd =
        at_delta(d, [&] { return full_price(base.with_delta(d), payoff, grid, x, v, ends); });
    const double e = pd - p0 - std::sqrt(d) * p1;
    report.rows.push_back({d, pd, p0, p1, e, e / d});
  }
  double lo = INFINITY, hi = 0.0;
  for (const CorrectorRow& row : report.rows) {
    lo = std::min(lo, std::abs(row.e_over_delta));
    hi = std::max(hi, std::abs(row.e_over_delta));
  }
  report.ratio = lo > 0.0 ? hi / lo : INFINITY;
  report.bounded = report.ratio < 4.0;
  const CorrectorRow& smallest = report.rows.back();
  report.helps_at_smallest = std::abs(smallest.e) <= std::abs(smallest.p_delta - smallest.p0);
  return report;
}

FeynmanKacTerms feynman_kac_terms(const ModelParams& params, const PriceSurface* p_delta,
                                  const PriceSurface& p0, const PriceSurface& p1,
                                  const FeynmanKacSpec& spec) {
  if (p0.kind() != SurfaceKind::kLimitP0) throw ValidationError("p0", "must be a limit_p0 surface");
  if (p1.kind() != SurfaceKind::kCorrectorP1)
    throw ValidationError("p1", "must be a corrector_p1 surface");
  if (p_delta && p_delta->kind() != SurfaceKind::kFullDelta)
    throw ValidationError("p_delta", "must be a full_delta surface");
  for (const PriceSurface* s : {p_delta, &p0, &p1})
    if (s && s->kept_times().size() < 3)
      throw ValidationError("surface", "time slices were not retained");

  const bool proxy = p_delta == nullptr;
  const PriceSurface& control_surface = proxy ? p0 : *p_delta;
  WorstCasePolicy policy(control_surface, params, WorstCasePolicy::Rule::kBangBang);

  const double q_lo = params.sigma_min();
  const double q_hi = params.sigma_max();
  const double dq = q_hi - q_lo;
  const double dq2 = q_hi * q_hi - q_lo * q_lo;
  const double rho_sigma = params.rho() * params.sigma();
  const double half_s2 = 0.5 * params.sigma() * params.sigma();
  const double dt = p0.grid().T() / static_cast<double>(spec.n_steps);

  const std::size_t n = spec.n_paths;
  std::vector<double> a0(n, 0.0), a1(n, 0.0), a2(n, 0.0), a3(n, 0.0);
  SurfaceProbe probe_d(control_surface), probe_0(p0), probe_1(p1);

  SimulationSpec sim{spec.x0, spec.v0, n, spec.n_steps, p0.grid().T(), spec.seed};
  simulate_streaming(params, sim, policy,
                     [&](std::size_t step, double t, std::span<const double> xs,
                         std::span<const double> vs) {
                       const double w = (step == 0 || step == spec.n_steps) ? 0.5 * dt : dt;
                       probe_d.seek(t);
                       probe_0.seek(t);
                       probe_1.seek(t);
                       for (std::size_t p = 0; p < n; ++p) {
                         const double x = xs[p];
                         const double v = vs[p];
                         const PointGreeks gd = probe_d.at(x, v);
                         const PointGreeks g0 = probe_0.at(x, v);
                         const PointGreeks g1 = probe_1.at(x, v);
                         const double ind = (gd.gamma >= 0.0 ? 1.0 : 0.0) -
                                            (g0.gamma >= 0.0 ? 1.0 : 0.0);
                         const double ev = std::exp(v);
                         const double half_e2x2 = 0.5 * ev * ev * x * x;
                         a0[p] += w * dq2 * ind * half_e2x2 * g0.gamma;
                         a1[p] += w * (dq * ind * rho_sigma * ev * x * g0.vanna +
                                       dq2 * ind * half_e2x2 * g1.gamma);
                         if (spec.higher_terms) {
                           const double q_star = gd.gamma >= 0.0 ? q_hi : q_lo;
                           const double drift = params.factor_drift(v);
                           a2[p] += w * (q_star * rho_sigma * ev * x * g1.vanna +
                                         half_s2 * g0.vomma + drift * g0.vega);
                           a3[p] += w * (half_s2 * g1.vomma + drift * g1.vega);
                         }
                       }
                     });

  auto summarise = [](const std::vector<double>& values) {
    RunningStats s;
    for (double value : values) s.add(value);
    return s.estimate();
  };
  FeynmanKacTerms out{summarise(a0), summarise(a1), std::nullopt, std::nullopt, proxy};
  if (spec.higher_terms) {
    out.i2 = summarise(a2);
    out.i3 = summarise(a3);
  }
  return out;
}

}  // namespace uvm
