#include "uvm/sde.hpp"

#include <cmath>
#include <sstream>
#include <vector>

#include "uvm/error.hpp"
#include "uvm/rng.hpp"

namespace uvm {

std::string FixedVolatility::tag() const {
  std::ostringstream os;
  os.precision(17);
  os << "fixed q=" << q_;
  return os.str();
}

namespace {

void validate_spec(const ModelParams& params, const SimulationSpec& spec,
                   const VolatilityPolicy& policy) {
  if (spec.n_paths < 1) throw ValidationError("n_paths", "at least one path required");
  if (spec.n_steps < 1) throw ValidationError("n_steps", "at least one step required");
  if (spec.n_steps >= (std::size_t{1} << 32))
    throw ValidationError("n_steps", "exceeds the 32-bit step counter");
  if (!(spec.T > 0.0) || !std::isfinite(spec.T)) throw ValidationError("T", "must be positive");
  if (!std::isfinite(spec.x0) || spec.x0 <= 0.0)
    throw ValidationError("x0", "must be finite and positive");
  if (!std::isfinite(spec.v0)) throw ValidationError("v0", "must be finite");
  if (const auto q = policy.fixed_value()) {
    if (!(*q >= params.sigma_min() && *q <= params.sigma_max()))
      throw ValidationError("q", "fixed volatility multiplier outside [sigma_min, sigma_max]");
  }
}

}  // namespace

void simulate_streaming(const ModelParams& params, const SimulationSpec& spec,
                        VolatilityPolicy& policy, const StepObserver& observer) {
  validate_spec(params, spec, policy);

  const std::size_t n = spec.n_paths;
  const double dt = spec.T / static_cast<double>(spec.n_steps);
  const double sqrt_dt = std::sqrt(dt);
  const double delta = params.delta();
  const double vol_v = std::sqrt(delta) * params.sigma();
  const CounterNormals rng(spec.seed);

  std::vector<double> log_x(n, std::log(spec.x0));
  std::vector<double> x(n, spec.x0);
  std::vector<double> v(n, spec.v0);

  observer(0, 0.0, x, v);
  for (std::size_t step = 0; step < spec.n_steps; ++step) {
    const double t = static_cast<double>(step) * dt;
    policy.prepare(t);
    for (std::size_t p = 0; p < n; ++p) {
      const auto inc = correlated_increments(rng, p, static_cast<std::uint32_t>(step),
                                             params.rho(), sqrt_dt);
      const double ev = std::exp(v[p]);
      const double vol = policy.q(t, x[p], v[p]) * ev;
      log_x[p] += (params.r() - 0.5 * vol * vol) * dt + vol * inc.dw1;
      if (delta != 0.0) v[p] += delta * params.factor_drift(v[p]) * dt + vol_v * inc.dw2;
      x[p] = std::exp(log_x[p]);
    }
    observer(step + 1, static_cast<double>(step + 1) * dt, x, v);
  }
}

PathBatch simulate_paths(const ModelParams& params, const SimulationSpec& spec,
                         VolatilityPolicy& policy) {
  PathBatch batch;
  batch.x_paths = Array2D<double>(spec.n_paths, spec.n_steps + 1);
  batch.v_paths = Array2D<double>(spec.n_paths, spec.n_steps + 1);
  batch.dt = spec.T / static_cast<double>(spec.n_steps);
  batch.seed = spec.seed;
  batch.control_tag = policy.tag();
  simulate_streaming(params, spec, policy,
                     [&](std::size_t step, double, std::span<const double> x,
                         std::span<const double> v) {
                       for (std::size_t p = 0; p < x.size(); ++p) {
                         batch.x_paths(p, step) = x[p];
                         batch.v_paths(p, step) = v[p];
                       }
                     });
  return batch;
}

MomentReport estimate_moment(const PathBatch& batch, Component which, int k, MomentKind kind) {
  if (k < 1) throw ValidationError("k", "moment order must be at least 1");
  const Array2D<double>& z = which == Component::kX ? batch.x_paths : batch.v_paths;
  const std::size_t last = batch.n_steps();
  RunningStats stats;
  for (std::size_t p = 0; p < batch.n_paths(); ++p) {
    double value = 0.0;
    if (kind == MomentKind::kTerminal) {
      value = std::pow(std::abs(z(p, last)), k);
    } else {
      for (std::size_t s = 0; s < last; ++s)
        value += 0.5 * batch.dt *
                 (std::pow(std::abs(z(p, s)), k) + std::pow(std::abs(z(p, s + 1)), k));
    }
    stats.add(value);
  }
  return {k, stats.mean(), stats.std_error(), stats.count()};
}

StreamedMoments estimate_moments_streaming(const ModelParams& params,
                                           const SimulationSpec& spec,
                                           VolatilityPolicy& policy, int k) {
  if (k < 1) throw ValidationError("k", "moment order must be at least 1");
  const double dt = spec.T / static_cast<double>(spec.n_steps);
  std::vector<double> integral(spec.n_paths, 0.0);
  std::vector<double> previous(spec.n_paths, 0.0);
  RunningStats x_stats;
  simulate_streaming(params, spec, policy,
                     [&](std::size_t step, double, std::span<const double> x,
                         std::span<const double> v) {
                       for (std::size_t p = 0; p < v.size(); ++p) {
                         const double current = std::pow(std::abs(v[p]), k);
                         if (step > 0) integral[p] += 0.5 * dt * (previous[p] + current);
                         previous[p] = current;
                       }
                       if (step == spec.n_steps)
                         for (double xp : x) x_stats.add(std::pow(std::abs(xp), k));
                     });
  RunningStats v_stats;
  for (double value : integral) v_stats.add(value);
  return {{k, x_stats.mean(), x_stats.std_error(), x_stats.count()},
          {k, v_stats.mean(), v_stats.std_error(), v_stats.count()}};
}

Estimate estimate_payoff(const ModelParams& params, const PiecewiseLinearPayoff& payoff,
                         const SimulationSpec& spec, VolatilityPolicy& policy) {
  RunningStats stats;
  const double discount = std::exp(-params.r() * spec.T);
  simulate_streaming(params, spec, policy,
                     [&](std::size_t step, double, std::span<const double> x,
                         std::span<const double>) {
                       if (step != spec.n_steps) return;
                       for (double xp : x) stats.add(discount * payoff(xp));
                     });
  return stats.estimate();
}

CoupledGap coupled_payoff_gap(const ModelParams& params, const PiecewiseLinearPayoff& payoff,
                              const SimulationSpec& spec, double q) {
  FixedVolatility policy(q);
  validate_spec(params, spec, policy);

  const double dt = spec.T / static_cast<double>(spec.n_steps);
  const double sqrt_dt = std::sqrt(dt);
  const double delta = params.delta();
  const double vol_v = std::sqrt(delta) * params.sigma();
  const double frozen_vol = q * std::exp(spec.v0);
  const double frozen_drift = (params.r() - 0.5 * frozen_vol * frozen_vol) * dt;
  const CounterNormals rng(spec.seed);

  RunningStats gap;
  RunningStats payoff_gap;
  for (std::size_t p = 0; p < spec.n_paths; ++p) {
    double log_moving = std::log(spec.x0);
    double log_frozen = log_moving;
    double v = spec.v0;
    for (std::size_t step = 0; step < spec.n_steps; ++step) {
      const auto inc = correlated_increments(rng, p, static_cast<std::uint32_t>(step),
                                             params.rho(), sqrt_dt);
      const double vol = q * std::exp(v);
      log_moving += (params.r() - 0.5 * vol * vol) * dt + vol * inc.dw1;
      log_frozen += frozen_drift + frozen_vol * inc.dw1;
      if (delta != 0.0) v += delta * params.factor_drift(v) * dt + vol_v * inc.dw2;
    }
    const double moving = std::exp(log_moving);
    const double frozen = std::exp(log_frozen);
    gap.add((moving - frozen) * (moving - frozen));
    payoff_gap.add(std::abs(payoff(moving) - payoff(frozen)));
  }
  return {gap.mean(), gap.std_error(), payoff_gap.mean(), payoff_gap.std_error()};
}

}  // namespace uvm
