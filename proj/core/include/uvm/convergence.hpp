#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "uvm/grid.hpp"
#include "uvm/hjb.hpp"
#include "uvm/model.hpp"
#include "uvm/payoff.hpp"
#include "uvm/stats.hpp"
#include "uvm/surface.hpp"

namespace uvm {

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
};

/// Least-squares line through (log x_k, log y_k). Needs at least two points
/// with distinct x and strictly positive values.
LineFit fit_loglog_slope(std::span<const double> x, std::span<const double> y);

/// How the discretisation noise floor of a sweep is measured at its smallest
/// delta, comparing the sweep grid with its x-refinement (dx/2, CFL-matched dt).
enum class NoiseFloorRule {
  kErrorChange,  // |(P^d - P0)_coarse - (P^d - P0)_fine|
  kPriceChange,  // |P^d_coarse - P^d_fine|
  kNone,         // no floor, nothing excluded
};

struct SweepOptions {
  NoiseFloorRule floor_rule = NoiseFloorRule::kErrorChange;
  double floor_multiplier = 10.0;
  SolverOptions solver{};
};

struct SweepRow {
  double delta = 0.0;
  double p_delta = 0.0;
  double p0 = 0.0;
  double error = 0.0;      // p_delta - p0
  double abs_error = 0.0;
  bool excluded = false;   // below floor_multiplier * noise floor
};

struct ConvergenceReport {
  double t = 0.0;
  double x = 0.0;
  double v = 0.0;
  std::vector<SweepRow> rows;  // delta descending
  LineFit fit{};
  double noise_floor = 0.0;
  NoiseFloorRule floor_rule = NoiseFloorRule::kErrorChange;
  std::vector<double> deltas_excluded;
  bool low_row_count = false;  // fit used exactly two rows
  GridSpec grid;
  ModelParams params;
};

/// Solves P^delta for each delta and P0 once on `grid` (time steps raised to
/// the stability bound per solve), tabulates P^delta - P0 at (0, x, v) and
/// fits the log-log slope over rows above the noise floor.
ConvergenceReport run_delta_sweep(const ModelParams& base, const PiecewiseLinearPayoff& payoff,
                                  const GridSpec& grid, double x, double v,
                                  std::span<const double> deltas,
                                  const SweepOptions& options = {});

struct CorrectorRow {
  double delta = 0.0;
  double p_delta = 0.0;
  double p0 = 0.0;
  double p1 = 0.0;
  double e = 0.0;           // p_delta - p0 - sqrt(delta) p1
  double e_over_delta = 0.0;
};

struct CorrectorReport {
  std::vector<CorrectorRow> rows;  // delta descending
  double ratio = 0.0;              // max / min of |E/delta|
  bool bounded = false;            // ratio < 4
  bool helps_at_smallest = false;  // |E| <= |P^delta - P0| at the smallest delta
};

CorrectorReport corrector_sweep(const ModelParams& base, const PiecewiseLinearPayoff& payoff,
                                const GridSpec& grid, double x, double v,
                                std::span<const double> deltas,
                                const SolverOptions& solver = {});

struct FeynmanKacSpec {
  double x0 = 100.0;
  double v0 = -1.0;
  std::size_t n_paths = 20000;
  std::size_t n_steps = 150;
  std::uint64_t seed = 1;
  bool higher_terms = false;  // also estimate I2 and I3
};

struct FeynmanKacTerms {
  Estimate i0, i1;
  std::optional<Estimate> i2, i3;
  bool proxy_control = false;  // P0 bang-bang field stood in for the delta field
};

/// Monte Carlo estimates of the Feynman-Kac terms of E^delta along paths of
///   dX = q*_delta e^V X dW1, V per the model,
/// with q*_delta the bang-bang control read from `p_delta` (or from `p0` when
/// `p_delta` is null, flagged in the result). Control differences are the
/// indicator differences of the two gamma signs; integrals are trapezoidal in
/// time. `params` carries the delta being analysed.
FeynmanKacTerms feynman_kac_terms(const ModelParams& params, const PriceSurface* p_delta,
                                  const PriceSurface& p0, const PriceSurface& p1,
                                  const FeynmanKacSpec& spec);

}  // namespace uvm
