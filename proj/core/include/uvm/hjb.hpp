#pragma once

#include <cstddef>
#include <optional>

#include "uvm/grid.hpp"
#include "uvm/model.hpp"
#include "uvm/payoff.hpp"
#include "uvm/surface.hpp"

namespace uvm {

enum class Retention {
  kEndpoints,  // t = 0 and t = T only
  kDense,      // every level, thinned to a uniform stride if over the memory budget
};

struct SolverOptions {
  Retention retention = Retention::kEndpoints;
  std::size_t memory_budget_bytes = std::size_t{256} << 20;
  /// Replace h(x_i) by its mean over [x_i - dx/2, x_i + dx/2] at t = T.
  bool terminal_averaging = false;
};

struct HamiltonianMax {
  double q;
  double value;
};

/// max over q in [q_lo, q_hi] of curvature q^2 + slope q. Candidates are the
/// endpoints and, for curvature < 0, the interior stationary point; ties go to q_hi.
HamiltonianMax maximize_hamiltonian(double curvature, double slope, double q_lo,
                                    double q_hi) noexcept;

/// Worst-case price P^delta: explicit backward Euler for
///
///   -P_t = r (x P_x - P) + sup_q { 1/2 q^2 e^{2v} x^2 P_xx + sqrt(delta) q rho sigma e^v x P_xv }
///          + delta (1/2 sigma^2 P_vv + (a - b e^{alpha v}) P_v),   P(T) = h.
///
/// Throws CflError if n_t is below the stability bound, NumericalError on a
/// non-finite value.
PriceSurface solve_hjb_2d(const ModelParams& params, const PiecewiseLinearPayoff& payoff,
                          const GridSpec& grid, const SolverOptions& options = {});

/// Black-Scholes-Barenblatt limit P_0 with bang-bang volatility (sigma_max when
/// the discrete gamma is >= 0). With `v` set every column uses e^v; otherwise
/// each v node carries its own 1-D problem.
PriceSurface solve_bsb_1d(const ModelParams& params, const PiecewiseLinearPayoff& payoff,
                          const GridSpec& grid, std::optional<double> v = std::nullopt,
                          const SolverOptions& options = {});

/// First-order corrector P_1 with P_1(T) = 0:
///   -P1_t = 1/2 (q0)^2 e^{2v} x^2 P1_xx + q0 rho sigma e^v x P0_xv,
/// q0 frozen from the P_0 gamma sign. Levels missing from `p0` are linearly
/// interpolated in time.
PriceSurface solve_corrector(const ModelParams& params, const PiecewiseLinearPayoff& payoff,
                             const GridSpec& grid, const PriceSurface& p0,
                             const SolverOptions& options = {});

}  // namespace uvm
