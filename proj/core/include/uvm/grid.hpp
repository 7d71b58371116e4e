#pragma once

#include <cstddef>

namespace uvm {

class ModelParams;

/// Uniform space-time grid for the (x, v) pricing problems.
///
/// x has n_x interior nodes plus two boundary nodes, spacing
/// (x_max - x_min) / (n_x + 1); v has n_v nodes including both ends.
class GridSpec {
 public:
  struct Values {
    double x_min = 0.0;
    double x_max = 300.0;
    std::size_t n_x = 400;
    double v_min = -3.0;
    double v_max = 1.0;
    std::size_t n_v = 40;
    double T = 0.15;
    std::size_t n_t = 1;
    double cfl_safety = 0.4;
  };

  explicit GridSpec(const Values& values);

  const Values& values() const noexcept { return v_; }

  std::size_t nx_total() const noexcept { return v_.n_x + 2; }
  std::size_t n_v() const noexcept { return v_.n_v; }
  std::size_t n_t() const noexcept { return v_.n_t; }
  double T() const noexcept { return v_.T; }
  double cfl_safety() const noexcept { return v_.cfl_safety; }

  double dx() const noexcept { return (v_.x_max - v_.x_min) / static_cast<double>(v_.n_x + 1); }
  double dv() const noexcept { return (v_.v_max - v_.v_min) / static_cast<double>(v_.n_v - 1); }
  double dt() const noexcept { return v_.T / static_cast<double>(v_.n_t); }

  double x(std::size_t i) const noexcept { return v_.x_min + static_cast<double>(i) * dx(); }
  double v(std::size_t j) const noexcept { return v_.v_min + static_cast<double>(j) * dv(); }
  double t(std::size_t n) const noexcept { return static_cast<double>(n) * dt(); }

  double x_min() const noexcept { return v_.x_min; }
  double x_max() const noexcept { return v_.x_max; }
  double v_min() const noexcept { return v_.v_min; }
  double v_max() const noexcept { return v_.v_max; }

  bool contains(double x, double v) const noexcept {
    return x >= v_.x_min && x <= v_.x_max && v >= v_.v_min && v <= v_.v_max;
  }

  GridSpec with_time_steps(std::size_t n_t) const;

  /// Halves dx (n_x -> 2 n_x + 1 keeps every coarse node), optionally dv
  /// (n_v -> 2 n_v - 1); n_t is left for the caller to re-derive from the CFL bound.
  GridSpec refined(bool refine_v = false) const;

  bool operator==(const GridSpec& other) const noexcept;

 private:
  Values v_;
};

/// Which generator terms bound the explicit time step: everything, or only the
/// x-direction terms (limit and corrector equations).
enum class StabilityScope { kFull, kXOnly };

/// Worst-case explicit stability rate over the grid: the largest diagonal
/// coefficient of the discrete generator, maximised over nodes and q in Theta.
double explicit_stability_rate(const ModelParams& params, const GridSpec& grid,
                               StabilityScope scope = StabilityScope::kFull);

/// Smallest n_t with dt * rate <= cfl_safety.
std::size_t min_time_steps(const ModelParams& params, const GridSpec& grid,
                           StabilityScope scope = StabilityScope::kFull);

/// `grid` with n_t raised to min_time_steps when it is too small.
GridSpec with_admissible_time_steps(const ModelParams& params, const GridSpec& grid,
                                    StabilityScope scope = StabilityScope::kFull);

}  // namespace uvm
