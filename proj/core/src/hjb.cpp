#include "uvm/hjb.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "uvm/error.hpp"

namespace uvm {

HamiltonianMax maximize_hamiltonian(double curvature, double slope, double q_lo,
                                    double q_hi) noexcept {
  HamiltonianMax best{q_hi, curvature * q_hi * q_hi + slope * q_hi};
  const double at_lo = curvature * q_lo * q_lo + slope * q_lo;
  if (at_lo > best.value) best = {q_lo, at_lo};
  if (curvature < 0.0) {
    const double q_hat = -slope / (2.0 * curvature);
    if (q_hat > q_lo && q_hat < q_hi) {
      const double at_hat = curvature * q_hat * q_hat + slope * q_hat;
      if (at_hat > best.value) best = {q_hat, at_hat};
    }
  }
  return best;
}

namespace {

// Collects the retained levels while marching backward from n_t to 0.
class LevelRecorder {
 public:
  LevelRecorder(const GridSpec& grid, const SolverOptions& options) : n_t_(grid.n_t()) {
    if (options.retention == Retention::kDense) {
      const double slice_bytes =
          static_cast<double>(grid.nx_total() * grid.n_v() * sizeof(double));
      const double total = slice_bytes * static_cast<double>(n_t_ + 1);
      const double budget = static_cast<double>(std::max<std::size_t>(options.memory_budget_bytes, 1));
      stride_ = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(total / budget)));
    } else {
      stride_ = n_t_;
    }
  }

  void offer(std::size_t n, const Array2D<double>& slice) {
    if (n == 0 || n == n_t_ || n % stride_ == 0) {
      kept_.push_back(n);
      slices_.push_back(slice);
    }
  }

  PriceSurface finish(const GridSpec& grid, const ModelParams& params, SurfaceKind kind) && {
    std::reverse(kept_.begin(), kept_.end());
    std::reverse(slices_.begin(), slices_.end());
    return PriceSurface(grid, params, kind, std::move(kept_), std::move(slices_));
  }

 private:
  std::size_t n_t_;
  std::size_t stride_ = 1;
  std::vector<std::size_t> kept_;
  std::vector<Array2D<double>> slices_;
};

void require_stable(const ModelParams& params, const GridSpec& grid, StabilityScope scope) {
  const std::size_t need = min_time_steps(params, grid, scope);
  if (grid.n_t() < need) throw CflError(grid.n_t(), need);
}

Array2D<double> terminal_slice(const PiecewiseLinearPayoff& payoff, const GridSpec& grid,
                               bool averaging) {
  Array2D<double> out(grid.nx_total(), grid.n_v());
  for (std::size_t i = 0; i < grid.nx_total(); ++i) {
    const double h = averaging && i > 0 ? payoff.cell_average(grid.x(i), grid.dx())
                                        : payoff(grid.x(i));
    for (std::size_t j = 0; j < grid.n_v(); ++j) out(i, j) = h;
  }
  return out;
}

[[noreturn]] void report_non_finite(const GridSpec& grid, const Array2D<double>& slice,
                                    std::size_t n) {
  for (std::size_t i = 0; i < slice.rows(); ++i)
    for (std::size_t j = 0; j < slice.cols(); ++j)
      if (!std::isfinite(slice(i, j))) {
        std::ostringstream os;
        os << "non-finite value at t=" << grid.t(n) << " (level " << n << "), x=" << grid.x(i)
           << ", v=" << grid.v(j);
        throw NumericalError(os.str());
      }
  throw NumericalError("non-finite value at level " + std::to_string(n));
}

bool all_finite(const Array2D<double>& slice) noexcept {
  double acc = 0.0;
  for (double value : slice.flat()) acc += value * 0.0;
  return acc == 0.0;
}

// Dirichlet data at x = 0 when the domain reaches it, linear extrapolation
// (zero curvature) otherwise; always linear extrapolation at x_max.
void apply_x_boundaries(Array2D<double>& next, const GridSpec& grid, double x0_value_scale,
                        const Array2D<double>* terminal) {
  const std::size_t last = grid.nx_total() - 1;
  for (std::size_t j = 0; j < grid.n_v(); ++j) {
    if (grid.x_min() == 0.0)
      next(0, j) = terminal ? x0_value_scale * (*terminal)(0, j) : 0.0;
    else
      next(0, j) = 2.0 * next(1, j) - next(2, j);
    next(last, j) = 2.0 * next(last - 1, j) - next(last - 2, j);
  }
}

// Mixed derivative on row i, column j; one-sided in v on the v boundaries.
inline double mixed_derivative(const Array2D<double>& p, std::size_t i, std::size_t j,
                               std::size_t nv, double dx, double dv) noexcept {
  if (j == 0)
    return (p(i + 1, 1) - p(i + 1, 0) - p(i - 1, 1) + p(i - 1, 0)) / (2.0 * dx * dv);
  if (j == nv - 1)
    return (p(i + 1, j) - p(i + 1, j - 1) - p(i - 1, j) + p(i - 1, j - 1)) / (2.0 * dx * dv);
  return (p(i + 1, j + 1) - p(i + 1, j - 1) - p(i - 1, j + 1) + p(i - 1, j - 1)) /
         (4.0 * dx * dv);
}

}  // namespace

PriceSurface solve_hjb_2d(const ModelParams& params, const PiecewiseLinearPayoff& payoff,
                          const GridSpec& grid, const SolverOptions& options) {
  require_stable(params, grid, StabilityScope::kFull);

  const std::size_t nx = grid.nx_total();
  const std::size_t nv = grid.n_v();
  const double dx = grid.dx();
  const double dv = grid.dv();
  const double dt = grid.dt();
  const double inv_dx2 = 1.0 / (dx * dx);
  const double inv_dv2 = 1.0 / (dv * dv);
  const double inv_2dx = 0.5 / dx;
  const double inv_dv = 1.0 / dv;
  const double r = params.r();
  const double delta = params.delta();
  const double q_lo = params.sigma_min();
  const double q_hi = params.sigma_max();
  const double cross = std::sqrt(delta) * params.rho() * params.sigma();
  const double half_vol_v2 = 0.5 * delta * params.sigma() * params.sigma();

  std::vector<double> ev(nv), half_e2v(nv), drift(nv);
  for (std::size_t j = 0; j < nv; ++j) {
    ev[j] = std::exp(grid.v(j));
    half_e2v[j] = 0.5 * ev[j] * ev[j];
    drift[j] = delta * params.factor_drift(grid.v(j));
  }

  const Array2D<double> terminal = terminal_slice(payoff, grid, options.terminal_averaging);
  Array2D<double> cur = terminal;
  Array2D<double> next(nx, nv);
  LevelRecorder recorder(grid, options);
  recorder.offer(grid.n_t(), cur);

  const double inv_4dxdv = 0.25 / (dx * dv);
  const double inv_2dxdv = 0.5 / (dx * dv);
  const std::size_t jl = nv - 1;

  for (std::size_t n = grid.n_t(); n-- > 0;) {
    for (std::size_t i = 1; i + 1 < nx; ++i) {
      const double x = grid.x(i);
      const double x2 = x * x;
      const double* up = cur.row(i + 1).data();
      const double* mid = cur.row(i).data();
      const double* dn = cur.row(i - 1).data();
      double* out = next.row(i).data();

      auto update = [&](std::size_t j, double pxv, double pvv, double pv) {
        const double c = mid[j];
        const double pxx = (up[j] - 2.0 * c + dn[j]) * inv_dx2;
        const HamiltonianMax h =
            maximize_hamiltonian(half_e2v[j] * x2 * pxx, cross * ev[j] * x * pxv, q_lo, q_hi);
        double rhs = h.value + half_vol_v2 * pvv + drift[j] * pv;
        if (r != 0.0) rhs += r * (x * (up[j] - dn[j]) * inv_2dx - c);
        out[j] = c + dt * rhs;
      };

      update(0, (up[1] - up[0] - dn[1] + dn[0]) * inv_2dxdv, 0.0, (mid[1] - mid[0]) * inv_dv);
      for (std::size_t j = 1; j < jl; ++j) {
        const double pxv = (up[j + 1] - up[j - 1] - dn[j + 1] + dn[j - 1]) * inv_4dxdv;
        const double pvv = (mid[j + 1] - 2.0 * mid[j] + mid[j - 1]) * inv_dv2;
        const double pv = drift[j] > 0.0 ? (mid[j + 1] - mid[j]) * inv_dv
                                         : (mid[j] - mid[j - 1]) * inv_dv;
        update(j, pxv, pvv, pv);
      }
      update(jl, (up[jl] - up[jl - 1] - dn[jl] + dn[jl - 1]) * inv_2dxdv, 0.0,
             (mid[jl] - mid[jl - 1]) * inv_dv);
    }
    apply_x_boundaries(next, grid, std::exp(-r * (grid.T() - grid.t(n))), &terminal);
    if (!all_finite(next)) report_non_finite(grid, next, n);
    std::swap(cur, next);
    recorder.offer(n, cur);
  }
  return std::move(recorder).finish(grid, params, SurfaceKind::kFullDelta);
}

PriceSurface solve_bsb_1d(const ModelParams& params, const PiecewiseLinearPayoff& payoff,
                          const GridSpec& grid, std::optional<double> v,
                          const SolverOptions& options) {
  if (v && !std::isfinite(*v)) throw ValidationError("v", "must be finite");
  // With a fixed v the stability bound is that of e^v, which the grid-wide
  // bound covers whenever v <= v_max.
  if (v && *v > grid.v_max()) {
    GridSpec::Values shifted = grid.values();
    shifted.v_max = *v;
    shifted.v_min = std::min(grid.v_min(), *v - 1.0);
    const std::size_t need = min_time_steps(params, GridSpec(shifted), StabilityScope::kXOnly);
    if (grid.n_t() < need) throw CflError(grid.n_t(), need);
  } else {
    require_stable(params, grid, StabilityScope::kXOnly);
  }

  const std::size_t nx = grid.nx_total();
  const std::size_t nv = grid.n_v();
  const double dx = grid.dx();
  const double dt = grid.dt();
  const double inv_dx2 = 1.0 / (dx * dx);
  const double inv_2dx = 0.5 / dx;
  const double r = params.r();
  const double q_lo2 = params.sigma_min() * params.sigma_min();
  const double q_hi2 = params.sigma_max() * params.sigma_max();

  std::vector<double> half_e2v(nv);
  for (std::size_t j = 0; j < nv; ++j) {
    const double e = std::exp(v ? *v : grid.v(j));
    half_e2v[j] = 0.5 * e * e;
  }

  const Array2D<double> terminal = terminal_slice(payoff, grid, options.terminal_averaging);
  Array2D<double> cur = terminal;
  Array2D<double> next(nx, nv);
  LevelRecorder recorder(grid, options);
  recorder.offer(grid.n_t(), cur);

  for (std::size_t n = grid.n_t(); n-- > 0;) {
    for (std::size_t i = 1; i + 1 < nx; ++i) {
      const double x = grid.x(i);
      const double x2 = x * x;
      for (std::size_t j = 0; j < nv; ++j) {
        const double c = cur(i, j);
        const double pxx = (cur(i + 1, j) - 2.0 * c + cur(i - 1, j)) * inv_dx2;
        const double q2 = pxx >= 0.0 ? q_hi2 : q_lo2;
        double rhs = q2 * half_e2v[j] * x2 * pxx;
        if (r != 0.0) rhs += r * (x * (cur(i + 1, j) - cur(i - 1, j)) * inv_2dx - c);
        next(i, j) = c + dt * rhs;
      }
    }
    apply_x_boundaries(next, grid, std::exp(-r * (grid.T() - grid.t(n))), &terminal);
    if (!all_finite(next)) report_non_finite(grid, next, n);
    std::swap(cur, next);
    recorder.offer(n, cur);
  }
  return std::move(recorder).finish(grid, params, SurfaceKind::kLimitP0);
}

PriceSurface solve_corrector(const ModelParams& params, const PiecewiseLinearPayoff& /*payoff*/,
                             const GridSpec& grid, const PriceSurface& p0,
                             const SolverOptions& options) {
  if (p0.kind() != SurfaceKind::kLimitP0)
    throw ValidationError("p0", "corrector source must be a limit_p0 surface");
  if (!(p0.grid() == grid)) throw ValidationError("grid", "does not match the p0 grid");
  require_stable(params, grid, StabilityScope::kXOnly);

  const std::size_t nx = grid.nx_total();
  const std::size_t nv = grid.n_v();
  const double dx = grid.dx();
  const double dv = grid.dv();
  const double dt = grid.dt();
  const double inv_dx2 = 1.0 / (dx * dx);
  const double inv_2dx = 0.5 / dx;
  const double r = params.r();
  const double q_lo = params.sigma_min();
  const double q_hi = params.sigma_max();
  const double rho_sigma = params.rho() * params.sigma();

  std::vector<double> ev(nv), half_e2v(nv);
  for (std::size_t j = 0; j < nv; ++j) {
    ev[j] = std::exp(grid.v(j));
    half_e2v[j] = 0.5 * ev[j] * ev[j];
  }

  Array2D<double> cur(nx, nv, 0.0);
  Array2D<double> next(nx, nv, 0.0);
  Array2D<double> scratch;
  LevelRecorder recorder(grid, options);
  recorder.offer(grid.n_t(), cur);

  for (std::size_t n = grid.n_t(); n-- > 0;) {
    const Array2D<double>& src = p0.level(n + 1, scratch);
    for (std::size_t i = 1; i + 1 < nx; ++i) {
      const double x = grid.x(i);
      const double x2 = x * x;
      for (std::size_t j = 0; j < nv; ++j) {
        const double s = src(i, j);
        const double p0xx = (src(i + 1, j) - 2.0 * s + src(i - 1, j)) * inv_dx2;
        const double q0 = p0xx >= 0.0 ? q_hi : q_lo;
        const double p0xv = mixed_derivative(src, i, j, nv, dx, dv);
        const double c = cur(i, j);
        const double p1xx = (cur(i + 1, j) - 2.0 * c + cur(i - 1, j)) * inv_dx2;
        double rhs = q0 * q0 * half_e2v[j] * x2 * p1xx + q0 * rho_sigma * ev[j] * x * p0xv;
        if (r != 0.0) rhs += r * (x * (cur(i + 1, j) - cur(i - 1, j)) * inv_2dx - c);
        next(i, j) = c + dt * rhs;
      }
    }
    apply_x_boundaries(next, grid, 0.0, nullptr);
    if (!all_finite(next)) report_non_finite(grid, next, n);
    std::swap(cur, next);
    recorder.offer(n, cur);
  }
  return std::move(recorder).finish(grid, params, SurfaceKind::kCorrectorP1);
}

}  // namespace uvm
