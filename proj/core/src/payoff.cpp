#include "uvm/payoff.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "uvm/error.hpp"

namespace uvm {

PiecewiseLinearPayoff::PiecewiseLinearPayoff(std::vector<double> knots,
                                             std::vector<double> slopes, double anchor_value)
    : knots_(std::move(knots)), slopes_(std::move(slopes)), anchor_(anchor_value) {
  if (knots_.empty()) throw ValidationError("knots", "at least one knot is required");
  if (slopes_.size() != knots_.size() + 1)
    throw ValidationError("slopes", "expected one more slope than knots");
  for (std::size_t i = 0; i < knots_.size(); ++i) {
    if (!std::isfinite(knots_[i])) throw ValidationError("knots", "must be finite");
    if (i > 0 && !(knots_[i] > knots_[i - 1]))
      throw ValidationError("knots", "must be strictly increasing");
  }
  for (double s : slopes_)
    if (!std::isfinite(s)) throw ValidationError("slopes", "must be finite");
  if (!std::isfinite(anchor_)) throw ValidationError("anchor_value", "must be finite");

  knot_values_.resize(knots_.size());
  knot_values_[0] = anchor_;
  for (std::size_t i = 1; i < knots_.size(); ++i)
    knot_values_[i] = knot_values_[i - 1] + slopes_[i] * (knots_[i] - knots_[i - 1]);
}

PiecewiseLinearPayoff PiecewiseLinearPayoff::from_ramps(std::span<const Ramp> ramps,
                                                        double constant) {
  if (ramps.empty()) return PiecewiseLinearPayoff::constant(constant);
  std::map<double, double> merged;
  for (const Ramp& r : ramps) merged[r.strike] += r.weight;

  std::vector<double> knots;
  std::vector<double> slopes{0.0};
  for (const auto& [strike, weight] : merged) {
    knots.push_back(strike);
    slopes.push_back(slopes.back() + weight);
  }
  return PiecewiseLinearPayoff(std::move(knots), std::move(slopes), constant);
}

PiecewiseLinearPayoff PiecewiseLinearPayoff::call(double strike) {
  return PiecewiseLinearPayoff({strike}, {0.0, 1.0}, 0.0);
}

PiecewiseLinearPayoff PiecewiseLinearPayoff::short_call(double strike) {
  return PiecewiseLinearPayoff({strike}, {0.0, -1.0}, 0.0);
}

PiecewiseLinearPayoff PiecewiseLinearPayoff::butterfly(double lower, double middle,
                                                       double upper) {
  const Ramp ramps[] = {{lower, 1.0}, {middle, -2.0}, {upper, 1.0}};
  return from_ramps(ramps);
}

PiecewiseLinearPayoff PiecewiseLinearPayoff::constant(double value) {
  return PiecewiseLinearPayoff({0.0}, {0.0, 0.0}, value);
}

std::size_t PiecewiseLinearPayoff::segment(double x) const noexcept {
  // Index of the last knot <= x, or knots_.size() if x < k_1 (encoded below).
  return static_cast<std::size_t>(std::upper_bound(knots_.begin(), knots_.end(), x) -
                                  knots_.begin());
}

double PiecewiseLinearPayoff::operator()(double x) const noexcept {
  const std::size_t seg = segment(x);
  if (seg == 0) return anchor_ + slopes_[0] * (x - knots_[0]);
  return knot_values_[seg - 1] + slopes_[seg] * (x - knots_[seg - 1]);
}

double PiecewiseLinearPayoff::antiderivative(double x) const noexcept {
  // F(x) = int_{k_1}^{x} h(s) ds, exact on each linear piece.
  const std::size_t seg = segment(x);
  if (seg == 0) return 0.5 * (anchor_ + (*this)(x)) * (x - knots_[0]);
  double acc = 0.0;
  for (std::size_t i = 1; i < seg; ++i)
    acc += 0.5 * (knot_values_[i - 1] + knot_values_[i]) * (knots_[i] - knots_[i - 1]);
  return acc + 0.5 * (knot_values_[seg - 1] + (*this)(x)) * (x - knots_[seg - 1]);
}

double PiecewiseLinearPayoff::cell_average(double x, double width) const noexcept {
  if (width <= 0.0) return (*this)(x);
  const double lo = x - 0.5 * width;
  const double hi = x + 0.5 * width;
  return (antiderivative(hi) - antiderivative(lo)) / width;
}

double PiecewiseLinearPayoff::lipschitz() const noexcept {
  double m = 0.0;
  for (double s : slopes_) m = std::max(m, std::abs(s));
  return m;
}

bool PiecewiseLinearPayoff::convex() const noexcept {
  for (std::size_t i = 0; i < knots_.size(); ++i)
    if (slope_jump(i) < 0.0) return false;
  return true;
}

bool PiecewiseLinearPayoff::concave() const noexcept {
  for (std::size_t i = 0; i < knots_.size(); ++i)
    if (slope_jump(i) > 0.0) return false;
  return true;
}

}  // namespace uvm
