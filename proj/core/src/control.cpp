#include "uvm/control.hpp"

#include <algorithm>
#include <cmath>

#include "uvm/error.hpp"
#include "uvm/hjb.hpp"

namespace uvm {

double default_gamma_tolerance(const PiecewiseLinearPayoff& payoff, const GridSpec& grid) {
  double max_h = 0.0;
  for (std::size_t i = 0; i < grid.nx_total(); ++i)
    max_h = std::max(max_h, std::abs(payoff(grid.x(i))));
  const double dx = grid.dx();
  return 1e-6 * max_h / (dx * dx);
}

double worst_case_q(const ModelParams& p, double x, double v, double gamma,
                    double vanna) noexcept {
  const double ev = std::exp(v);
  const double curvature = 0.5 * ev * ev * x * x * gamma;
  const double slope = std::sqrt(p.delta()) * p.rho() * p.sigma() * ev * x * vanna;
  return maximize_hamiltonian(curvature, slope, p.sigma_min(), p.sigma_max()).q;
}

ControlField optimal_control_field(const PriceSurface& surface, const ModelParams& params,
                                   std::size_t time_index, double gamma_tolerance) {
  if (surface.kind() == SurfaceKind::kCorrectorP1)
    throw ValidationError("surface", "control fields come from price surfaces, not P1");
  const GridSpec& grid = surface.grid();
  const GreeksField g = greeks(surface, time_index);
  ControlField out{Array2D<double>(grid.nx_total(), grid.n_v()), surface.kind(),
                   gamma_tolerance, time_index};
  for (std::size_t i = 0; i < grid.nx_total(); ++i) {
    for (std::size_t j = 0; j < grid.n_v(); ++j) {
      out.q_star(i, j) =
          surface.kind() == SurfaceKind::kLimitP0
              ? bang_bang(g.gamma(i, j), gamma_tolerance, params.sigma_min(), params.sigma_max())
              : worst_case_q(params, grid.x(i), grid.v(j), g.gamma(i, j), g.vanna(i, j));
    }
  }
  return out;
}

MismatchSets mismatch_set(const PriceSurface& p_delta, const PriceSurface& p0,
                          std::size_t time_index, double eps) {
  if (!(p_delta.grid() == p0.grid())) throw ValidationError("grid", "surfaces differ in grid");
  const GridSpec& grid = p0.grid();
  const Array2D<double> gd = greeks(p_delta, time_index).gamma;
  const Array2D<double> g0 = greeks(p0, time_index).gamma;
  MismatchSets out{Array2D<std::uint8_t>(grid.nx_total(), grid.n_v(), 0),
                   Array2D<std::uint8_t>(grid.nx_total(), grid.n_v(), 0)};
  std::size_t zeros = 0, mismatches = 0, interior = 0;
  for (std::size_t i = 1; i + 1 < grid.nx_total(); ++i) {
    for (std::size_t j = 0; j < grid.n_v(); ++j) {
      ++interior;
      if (std::abs(g0(i, j)) <= eps) {
        out.zero_set(i, j) = 1;
        ++zeros;
      }
      if (gd(i, j) > eps && g0(i, j) < -eps) {
        out.mismatch(i, j) = 1;
        ++mismatches;
      }
    }
  }
  out.zero_fraction = static_cast<double>(zeros) / static_cast<double>(interior);
  out.mismatch_fraction = static_cast<double>(mismatches) / static_cast<double>(interior);
  return out;
}

WorstCasePolicy::WorstCasePolicy(const PriceSurface& surface, const ModelParams& params,
                                 Rule rule)
    : probe_(surface), params_(params), rule_(rule) {
  if (surface.kind() == SurfaceKind::kCorrectorP1)
    throw ValidationError("surface", "worst-case policy needs a price surface");
}

double WorstCasePolicy::q(double, double x, double v) const {
  const PointGreeks g = probe_.at(x, v);
  if (rule_ == Rule::kBangBang || probe_.surface().kind() == SurfaceKind::kLimitP0)
    return bang_bang(g.gamma, 0.0, params_.sigma_min(), params_.sigma_max());
  return worst_case_q(params_, x, v, g.gamma, g.vanna);
}

std::string WorstCasePolicy::tag() const {
  return std::string("worst-case field (") + std::string(to_string(probe_.surface().kind())) +
         (rule_ == Rule::kBangBang ? ", bang-bang)" : ", hamiltonian)");
}

}  // namespace uvm
