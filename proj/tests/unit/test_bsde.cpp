#include <gtest/gtest.h>

#include <cmath>

#include "uvm/bsde.hpp"
#include "uvm/control.hpp"
#include "uvm/error.hpp"
#include "uvm/greeks.hpp"
#include "uvm/hjb.hpp"

using namespace uvm;

namespace {
const GridSpec kGrid({.x_min = 40, .x_max = 160, .n_x = 119, .v_min = -2.5, .v_max = 0.5, .n_v = 13,
                      .T = 0.15});
}

TEST(Driver, ZeroCurvatureAndGradientGiveZero) {
  const ModelParams p = reference_params(0.3);
  for (DriverKind k : {DriverKind::kLimit, DriverKind::kFull})
    EXPECT_EQ(build_driver(p, k)(100, -1, 5.0, 0, 0, 0, 0, 0), 0.0);
}

TEST(Driver, FullDriverAtZeroDeltaIsLimitDriver) {
  const ModelParams p = reference_params(0.0);
  const DriverSpec f0 = build_driver(p, DriverKind::kLimit);
  const DriverSpec fd = build_driver(p, DriverKind::kFull);
  for (double s11 : {-0.3, 0.0, 0.2})
    for (double s12 : {-1.0, 0.5})
      EXPECT_EQ(fd(95, -0.7, 1.0, 0.4, 0.2, s11, s12, 0.3), f0(95, -0.7, 1.0, 0.4, 0.2, s11, s12, 0.3));
}

TEST(Driver, CurvatureSignSelectsVolatility) {
  const DriverSpec f = build_driver(reference_params(0.3), DriverKind::kFull);
  EXPECT_EQ(f.sigma_bar(0.1), 0.2);
  EXPECT_EQ(f.sigma_bar(-0.1), 0.1);
  EXPECT_EQ(f.sigma_bar(0.0), 0.2);
  const double x = 100, v = -1, ev = std::exp(v);
  EXPECT_NEAR(build_driver(reference_params(0.0), DriverKind::kLimit)(x, v, 0, 0, 0, 2.0, 0, 0),
              -0.5 * x * x * ev * ev * 0.04 * 2.0, 1e-12);
}

TEST(Driver, LiteralVariantDiffers) {
  const ModelParams p = reference_params(0.3);
  const DriverSpec rec = build_driver(p, DriverKind::kFull);
  const DriverSpec lit = build_driver(p, DriverKind::kFull, true);
  EXPECT_TRUE(lit.literal());
  EXPECT_NE(rec(100, -1, 0, 0.1, 0.1, 0.01, 0.02, 0.03), lit(100, -1, 0, 0.1, 0.1, 0.01, 0.02, 0.03));
}

TEST(Driver, MatchesDiscreteTimeDerivative) {
  // The explicit step is P(n) = P(n+1) - dt f(Greeks of P(n+1)), so the
  // driver on the discrete Greeks of level n+1 reproduces the backward
  // difference away from the boundaries. The scheme upwinds the factor drift
  // while the Greeks use a central vega, hence the O(dv) allowance.
  const auto h = PiecewiseLinearPayoff::butterfly(90, 100, 110);
  const ModelParams p = reference_params(0.3);
  const GridSpec g = with_admissible_time_steps(p, kGrid);
  const PriceSurface s = solve_hjb_2d(p, h, g, {.retention = Retention::kDense});
  const DriverSpec f = build_driver(p, DriverKind::kFull);
  const std::size_t n = g.n_t() / 2;
  const GreeksField gr = greeks(s, n + 1);
  double gap = 0.0, scale = 0.0;
  for (std::size_t i = 2; i + 2 < g.nx_total(); ++i)
    for (std::size_t j = 2; j + 2 < g.n_v(); ++j) {
      const double ut = (s.slice(n + 1)(i, j) - s.slice(n)(i, j)) / g.dt();
      const double fv = f(g.x(i), g.v(j), s.slice(n + 1)(i, j), gr.delta(i, j), gr.vega(i, j),
                          gr.gamma(i, j), gr.vanna(i, j), gr.vomma(i, j));
      gap = std::max(gap, std::abs(ut - fv));
      scale = std::max(scale, std::abs(ut));
    }
  EXPECT_LT(gap, 0.02 * scale) << gap << " " << scale;
}

TEST(BsdeResidual, ConstantPayoffIsExact) {
  const auto h = PiecewiseLinearPayoff::constant(4.0);
  const ModelParams p = reference_params(0.3);
  const PriceSurface s =
      solve_hjb_2d(p, h, with_admissible_time_steps(p, kGrid), {.retention = Retention::kDense});
  const BsdeResidualReport r = simulate_2bsde_residual(s, h, {100, -1}, {.n_paths = 500, .n_steps = 40});
  EXPECT_EQ(r.terminal_residual_rms, 0.0);
  EXPECT_EQ(r.y0_fd, 4.0);
  EXPECT_EQ(r.n_paths_used + r.n_paths_discarded, 500u);
}

TEST(BsdeResidual, CountsDiscardedPathsAndRejectsBadStart) {
  const auto h = PiecewiseLinearPayoff::call(100);
  const ModelParams p = reference_params(0.2);
  const GridSpec narrow({.x_min = 99, .x_max = 101, .n_x = 19, .v_min = -1.3, .v_max = -0.7, .n_v = 7});
  const PriceSurface s =
      solve_hjb_2d(p, h, with_admissible_time_steps(p, narrow), {.retention = Retention::kDense});
  const BsdeResidualReport r = simulate_2bsde_residual(s, h, {100, -1}, {.n_paths = 2000, .n_steps = 50});
  EXPECT_GT(r.n_paths_discarded, 0u);
  EXPECT_EQ(r.n_paths_used + r.n_paths_discarded, 2000u);
  EXPECT_THROW(simulate_2bsde_residual(s, h, {150, -1}, {}), ValidationError);
}

TEST(MartingaleCheck, ConvexPayoffUnderUpperVolatility) {
  const auto h = PiecewiseLinearPayoff::call(100);
  const ModelParams p = reference_params(0.2);
  const PriceSurface s =
      solve_hjb_2d(p, h, with_admissible_time_steps(p, kGrid), {.retention = Retention::kDense});
  const SimulationSpec spec{.x0 = 100, .v0 = -1, .n_paths = 20000, .n_steps = 100, .T = 0.15, .seed = 4};
  FixedVolatility upper(0.2), lower(0.1);
  const DriftEstimate up = martingale_check(s, p, spec, upper);
  const DriftEstimate down = martingale_check(s, p, spec, lower);
  EXPECT_LT(std::abs(up.drift), 3 * up.std_error + 0.01 * up.m0);
  EXPECT_LT(down.drift, -3 * down.std_error);
}
