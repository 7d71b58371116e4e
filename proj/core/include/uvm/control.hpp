#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>

#include "uvm/array2d.hpp"
#include "uvm/greeks.hpp"
#include "uvm/model.hpp"
#include "uvm/payoff.hpp"
#include "uvm/sde.hpp"
#include "uvm/surface.hpp"

namespace uvm {

/// Maximising volatility multiplier on every node of one time level.
struct ControlField {
  Array2D<double> q_star;
  SurfaceKind source_kind = SurfaceKind::kFullDelta;
  double gamma_tolerance = 0.0;
  std::size_t time_index = 0;
};

/// Curvature dead-band 1e-6 * max_i |h(x_i)| / dx^2.
double default_gamma_tolerance(const PiecewiseLinearPayoff& payoff, const GridSpec& grid);

/// Bang-bang rule: sigma_max where gamma >= -tolerance, else sigma_min.
inline double bang_bang(double gamma, double tolerance, double q_lo, double q_hi) noexcept {
  return gamma >= -tolerance ? q_hi : q_lo;
}

/// Argmax of the pointwise Hamiltonian at (x, v) given gamma and vanna.
double worst_case_q(const ModelParams& params, double x, double v, double gamma,
                    double vanna) noexcept;

/// limit_p0: bang-bang with dead-band. full_delta: argmax over {sigma_min,
/// sigma_max, interior stationary point}, ties to sigma_max.
ControlField optimal_control_field(const PriceSurface& surface, const ModelParams& params,
                                   std::size_t time_index, double gamma_tolerance);

/// Zero-gamma set S0 = {|gamma_0| <= eps} and sign-mismatch set
/// A = {gamma_delta > eps, gamma_0 < -eps}, on interior x nodes.
struct MismatchSets {
  Array2D<std::uint8_t> zero_set;
  Array2D<std::uint8_t> mismatch;
  double zero_fraction = 0.0;
  double mismatch_fraction = 0.0;
};

MismatchSets mismatch_set(const PriceSurface& p_delta, const PriceSurface& p0,
                          std::size_t time_index, double gamma_tolerance);

/// Volatility policy read from a solved surface: at each step the nearest
/// retained level's Greeks are interpolated to the path position.
class WorstCasePolicy final : public VolatilityPolicy {
 public:
  enum class Rule {
    kHamiltonian,  // full argmax including the vanna term
    kBangBang,     // sigma_max iff gamma >= 0
  };

  WorstCasePolicy(const PriceSurface& surface, const ModelParams& params, Rule rule);

  void prepare(double t) override { probe_.seek(t); }
  double q(double t, double x, double v) const override;
  std::string tag() const override;

  SurfaceProbe& probe() noexcept { return probe_; }

 private:
  SurfaceProbe probe_;
  ModelParams params_;
  Rule rule_;
};

}  // namespace uvm
