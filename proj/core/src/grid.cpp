#include "uvm/grid.hpp"

#include <algorithm>
#include <cmath>

#include "uvm/error.hpp"
#include "uvm/model.hpp"

namespace uvm {

GridSpec::GridSpec(const Values& values) : v_(values) {
  if (!std::isfinite(v_.x_min) || v_.x_min < 0.0)
    throw ValidationError("x_min", "must be finite and non-negative");
  if (!std::isfinite(v_.x_max) || !(v_.x_max > v_.x_min))
    throw ValidationError("x_max", "must exceed x_min");
  if (v_.n_x < 3) throw ValidationError("n_x", "at least 3 interior nodes required");
  if (!std::isfinite(v_.v_min) || !std::isfinite(v_.v_max) || !(v_.v_max > v_.v_min))
    throw ValidationError("v_max", "must exceed v_min");
  if (v_.n_v < 3) throw ValidationError("n_v", "at least 3 nodes required");
  if (!std::isfinite(v_.T) || !(v_.T > 0.0)) throw ValidationError("T", "must be positive");
  if (v_.n_t < 1) throw ValidationError("n_t", "at least one time step required");
  if (!(v_.cfl_safety > 0.0 && v_.cfl_safety <= 1.0))
    throw ValidationError("cfl_safety", "must lie in (0, 1]");
}

GridSpec GridSpec::with_time_steps(std::size_t n_t) const {
  Values v = v_;
  v.n_t = n_t;
  return GridSpec(v);
}

GridSpec GridSpec::refined(bool refine_v) const {
  Values v = v_;
  v.n_x = 2 * v_.n_x + 1;
  if (refine_v) v.n_v = 2 * v_.n_v - 1;
  return GridSpec(v);
}

bool GridSpec::operator==(const GridSpec& o) const noexcept {
  return v_.x_min == o.v_.x_min && v_.x_max == o.v_.x_max && v_.n_x == o.v_.n_x &&
         v_.v_min == o.v_.v_min && v_.v_max == o.v_.v_max && v_.n_v == o.v_.n_v &&
         v_.T == o.v_.T && v_.n_t == o.v_.n_t && v_.cfl_safety == o.v_.cfl_safety;
}

double explicit_stability_rate(const ModelParams& p, const GridSpec& g, StabilityScope scope) {
  const double dx = g.dx();
  const double dv = g.dv();
  const double sqd = std::sqrt(p.delta());
  double rate = 0.0;
  // Coefficients are monotone in x, so the x_max column bounds every x; scan v.
  const double x = g.x_max();
  for (std::size_t j = 0; j < g.n_v(); ++j) {
    const double ev = std::exp(g.v(j));
    const double diff_x = p.sigma_max() * p.sigma_max() * ev * ev * x * x / (dx * dx);
    const double rates = std::abs(p.r()) * (1.0 + x / dx);
    if (scope == StabilityScope::kXOnly) {
      rate = std::max(rate, diff_x + rates);
      continue;
    }
    const double diff_v = p.delta() * p.sigma() * p.sigma() / (dv * dv);
    const double drift_v = p.delta() * std::abs(p.factor_drift(g.v(j))) / dv;
    const double cross = sqd * std::abs(p.rho()) * p.sigma() * p.sigma_max() * ev * x / (dx * dv);
    rate = std::max(rate, diff_x + diff_v + drift_v + cross + rates);
  }
  return rate;
}

std::size_t min_time_steps(const ModelParams& params, const GridSpec& grid,
                           StabilityScope scope) {
  const double rate = explicit_stability_rate(params, grid, scope);
  const double steps = std::ceil(grid.T() * rate / grid.cfl_safety() - 1e-9);
  return std::max<std::size_t>(1, static_cast<std::size_t>(steps));
}

GridSpec with_admissible_time_steps(const ModelParams& params, const GridSpec& grid,
                                    StabilityScope scope) {
  const std::size_t need = min_time_steps(params, grid, scope);
  return grid.n_t() >= need ? grid : grid.with_time_steps(need);
}

}  // namespace uvm
