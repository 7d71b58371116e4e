#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "uvm/convergence.hpp"
#include "uvm/error.hpp"
#include "uvm/hjb.hpp"

using namespace uvm;

namespace {
const GridSpec kSmall({.x_min = 40, .x_max = 160, .n_x = 59, .v_min = -2.5, .v_max = 0.5, .n_v = 9,
                       .T = 0.15});
const auto kFly = PiecewiseLinearPayoff::butterfly(90, 100, 110);
}  // namespace

TEST(LogLogFit, RecoversPowerLawExactly) {
  const std::vector<double> x{0.5, 0.2, 0.1, 0.05};
  for (double c : {1e-4, 1.0, 3e3}) {
    std::vector<double> y;
    for (double d : x) y.push_back(c * std::pow(d, 0.75));
    const LineFit f = fit_loglog_slope(x, y);
    EXPECT_NEAR(f.slope, 0.75, 1e-12);
    EXPECT_NEAR(f.intercept, std::log(c), 1e-10);
  }
}

TEST(LogLogFit, RejectsDegenerateInput) {
  const std::vector<double> one{0.5};
  EXPECT_THROW(fit_loglog_slope(one, one), ValidationError);
  const std::vector<double> x{0.5, 0.5}, y{1.0, 2.0};
  EXPECT_THROW(fit_loglog_slope(x, y), ValidationError);
  const std::vector<double> x2{0.5, 0.2}, y2{1.0, 0.0};
  EXPECT_THROW(fit_loglog_slope(x2, y2), ValidationError);
}

TEST(DeltaSweep, RowsDescendingAndDeterministic) {
  const std::vector<double> deltas{0.1, 0.5, 0.25};
  const SweepOptions opt{.floor_rule = NoiseFloorRule::kNone};
  const ConvergenceReport a = run_delta_sweep(reference_params(0.0), kFly, kSmall, 100, -1, deltas, opt);
  const ConvergenceReport b = run_delta_sweep(reference_params(0.0), kFly, kSmall, 100, -1, deltas, opt);
  ASSERT_EQ(a.rows.size(), 3u);
  EXPECT_EQ(a.rows[0].delta, 0.5);
  EXPECT_EQ(a.rows[2].delta, 0.1);
  for (std::size_t k = 0; k < 3; ++k) {
    EXPECT_EQ(a.rows[k].p_delta, b.rows[k].p_delta);
    EXPECT_EQ(a.rows[k].error, a.rows[k].p_delta - a.rows[k].p0);
    EXPECT_FALSE(a.rows[k].excluded);
  }
  EXPECT_EQ(a.fit.slope, b.fit.slope);
  EXPECT_EQ(a.noise_floor, 0.0);
}

TEST(DeltaSweep, ValidatesDeltas) {
  const ModelParams p = reference_params(0.0);
  EXPECT_THROW(run_delta_sweep(p, kFly, kSmall, 100, -1, std::vector<double>{}), ValidationError);
  EXPECT_THROW(run_delta_sweep(p, kFly, kSmall, 100, -1, std::vector<double>{0.0, 0.1}), ValidationError);
  EXPECT_THROW(run_delta_sweep(p, kFly, kSmall, 100, -1, std::vector<double>{1.5}), ValidationError);
  EXPECT_THROW(run_delta_sweep(p, kFly, kSmall, 100, -1, std::vector<double>{0.2, 0.2}), ValidationError);
  EXPECT_THROW(run_delta_sweep(p, kFly, kSmall, 100, -1, std::vector<double>{0.5}), NumericalError);
}

TEST(DeltaSweep, FrozenFactorGivesNegligibleErrors) {
  // Negligible vol-of-vol, no correlation and zero drift at v = -1: the
  // factor stays put, so every error sits at the discretisation floor.
  ModelParams::Values v = reference_params(0.0).values();
  v.sigma = 1e-6;
  v.rho = 0.0;
  v.a = v.b * std::exp(-v.alpha);
  const ModelParams p(v);
  const std::vector<double> deltas{0.5, 0.2, 0.1};
  const ConvergenceReport r = run_delta_sweep(p, kFly, kSmall, 100, -1, deltas,
                                              {.floor_rule = NoiseFloorRule::kNone});
  for (const SweepRow& row : r.rows) EXPECT_LT(row.abs_error, 1e-3);
}

TEST(Corrector, ZeroCorrelationGivesZeroCorrector) {
  const ModelParams p = reference_params(0.0).with_rho(0.0);
  const std::vector<double> deltas{0.36, 0.04};
  const CorrectorReport r = corrector_sweep(p, kFly, kSmall, 100, -1, deltas);
  ASSERT_EQ(r.rows.size(), 2u);
  for (const CorrectorRow& row : r.rows) {
    EXPECT_EQ(row.p1, 0.0);
    EXPECT_EQ(row.e, row.p_delta - row.p0);
  }
}

TEST(FeynmanKac, DegenerateIntervalHasNoControlTerms) {
  const ModelParams p = reference_params(0.2).with_bounds(0.15, 0.15);
  const GridSpec g = with_admissible_time_steps(p, kSmall);
  const SolverOptions dense{.retention = Retention::kDense};
  const PriceSurface pd = solve_hjb_2d(p, kFly, g, dense);
  const GridSpec g1 = with_admissible_time_steps(p.with_delta(0), kSmall, StabilityScope::kXOnly);
  const PriceSurface p0 = solve_bsb_1d(p.with_delta(0), kFly, g1, std::nullopt, dense);
  const PriceSurface p1 = solve_corrector(p.with_delta(0), kFly, g1, p0, dense);
  const FeynmanKacTerms t =
      feynman_kac_terms(p, &pd, p0, p1, {.n_paths = 500, .n_steps = 30, .higher_terms = true});
  EXPECT_EQ(t.i0.mean, 0.0);
  EXPECT_EQ(t.i1.mean, 0.0);
  EXPECT_TRUE(t.i2.has_value());
  EXPECT_TRUE(t.i3.has_value());
  EXPECT_FALSE(t.proxy_control);

  const FeynmanKacTerms proxy = feynman_kac_terms(p, nullptr, p0, p1, {.n_paths = 100, .n_steps = 10});
  EXPECT_TRUE(proxy.proxy_control);
  EXPECT_FALSE(proxy.i2.has_value());
}
