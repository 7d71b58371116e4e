#pragma once

#include <span>
#include <vector>

namespace uvm {

/// Continuous piecewise-linear terminal payoff.
///
/// Stored as knots k_1 < ... < k_m, the m+1 segment slopes covering
/// (-inf, k_1], [k_1, k_2], ..., [k_m, inf), and the value at k_1. Defined on
/// the whole real line (negative prices included).
class PiecewiseLinearPayoff {
 public:
  PiecewiseLinearPayoff(std::vector<double> knots, std::vector<double> slopes,
                        double anchor_value);

  /// c + sum_i w_i (x - k_i)^+, strikes need not be sorted; equal strikes merge.
  struct Ramp {
    double strike;
    double weight;
  };
  static PiecewiseLinearPayoff from_ramps(std::span<const Ramp> ramps, double constant = 0.0);

  static PiecewiseLinearPayoff call(double strike);
  /// Negated call, i.e. a short call position.
  static PiecewiseLinearPayoff short_call(double strike);
  static PiecewiseLinearPayoff butterfly(double lower, double middle, double upper);
  static PiecewiseLinearPayoff constant(double value);

  double operator()(double x) const noexcept;

  /// Mean of the payoff over [x - width/2, x + width/2]; exact for this class.
  double cell_average(double x, double width) const noexcept;

  const std::vector<double>& knots() const noexcept { return knots_; }
  const std::vector<double>& slopes() const noexcept { return slopes_; }
  double anchor_value() const noexcept { return anchor_; }

  /// Global Lipschitz constant, max |slope|.
  double lipschitz() const noexcept;

  /// Slope jump at knot i (positive: convex kink, negative: concave kink).
  double slope_jump(std::size_t i) const noexcept { return slopes_[i + 1] - slopes_[i]; }

  bool convex() const noexcept;
  bool concave() const noexcept;

 private:
  std::size_t segment(double x) const noexcept;
  double antiderivative(double x) const noexcept;

  std::vector<double> knots_;
  std::vector<double> slopes_;
  std::vector<double> knot_values_;
  double anchor_;
};

}  // namespace uvm
