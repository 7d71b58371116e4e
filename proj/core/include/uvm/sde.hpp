#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>

#include "uvm/array2d.hpp"
#include "uvm/model.hpp"
#include "uvm/payoff.hpp"
#include "uvm/stats.hpp"

namespace uvm {

/// Volatility multiplier q chosen along a path. `prepare` is called once per
/// time step before any `q` query for that step.
class VolatilityPolicy {
 public:
  virtual ~VolatilityPolicy() = default;
  virtual void prepare(double /*t*/) {}
  virtual double q(double t, double x, double v) const = 0;
  virtual std::string tag() const = 0;
  /// Set for constant policies so callers can check q in Theta.
  virtual std::optional<double> fixed_value() const { return std::nullopt; }
};

class FixedVolatility final : public VolatilityPolicy {
 public:
  explicit FixedVolatility(double q) : q_(q) {}
  double q(double, double, double) const override { return q_; }
  std::string tag() const override;
  std::optional<double> fixed_value() const override { return q_; }

 private:
  double q_;
};

struct SimulationSpec {
  double x0 = 100.0;
  double v0 = -1.0;
  std::size_t n_paths = 10000;
  std::size_t n_steps = 150;
  double T = 0.15;
  std::uint64_t seed = 1;
};

/// Full trajectories of (X, V); row = path, column = step.
struct PathBatch {
  Array2D<double> x_paths;
  Array2D<double> v_paths;
  double dt = 0.0;
  std::uint64_t seed = 0;
  std::string control_tag;

  std::size_t n_paths() const noexcept { return x_paths.rows(); }
  std::size_t n_steps() const noexcept { return x_paths.cols() - 1; }
};

/// Per-step observer for the streaming simulator: states of every path at
/// time index `step` (0..n_steps).
using StepObserver =
    std::function<void(std::size_t step, double t, std::span<const double> x,
                       std::span<const double> v)>;

/// Log-Euler for X, Euler-Maruyama for V, driven by counter-based normals.
/// Time-major; memory is O(n_paths).
void simulate_streaming(const ModelParams& params, const SimulationSpec& spec,
                        VolatilityPolicy& policy, const StepObserver& observer);

PathBatch simulate_paths(const ModelParams& params, const SimulationSpec& spec,
                         VolatilityPolicy& policy);

enum class Component { kX, kV };
enum class MomentKind { kTerminal, kTimeIntegrated };

struct MomentReport {
  int order = 1;
  double estimate = 0.0;
  double std_error = 0.0;
  std::size_t n_paths = 0;
};

/// E[|Z_T|^k] or E[int_0^T |Z_s|^k ds] (trapezoidal along each path).
MomentReport estimate_moment(const PathBatch& batch, Component which, int k,
                             MomentKind kind = MomentKind::kTerminal);

/// Same estimates without materialising paths.
struct StreamedMoments {
  MomentReport x_terminal;
  MomentReport v_integrated;
};
StreamedMoments estimate_moments_streaming(const ModelParams& params,
                                           const SimulationSpec& spec,
                                           VolatilityPolicy& policy, int k);

/// E[h(X_T)] discounted at r.
Estimate estimate_payoff(const ModelParams& params, const PiecewiseLinearPayoff& payoff,
                         const SimulationSpec& spec, VolatilityPolicy& policy);

struct CoupledGap {
  double gap_sq = 0.0;          // E[(X^delta_T - X^0_T)^2]
  double std_error = 0.0;
  double payoff_gap = 0.0;      // E|h(X^delta_T) - h(X^0_T)|
  double payoff_gap_std_error = 0.0;
};

/// X^delta (moving V) and X^0 (V frozen at v0) driven by the same W1 increments.
CoupledGap coupled_payoff_gap(const ModelParams& params, const PiecewiseLinearPayoff& payoff,
                              const SimulationSpec& spec, double q);

}  // namespace uvm
