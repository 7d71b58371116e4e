#include <gtest/gtest.h>

#include <cmath>

#include "black_scholes.hpp"
#include "uvm/error.hpp"
#include "uvm/hjb.hpp"

using namespace uvm;
using uvm::testing::bs_butterfly;
using uvm::testing::bs_call;

namespace {

// Strike 100 sits on a node (dx = 0.5); v spans the fixed-v columns used below.
const GridSpec kLine({.x_min = 50, .x_max = 150, .n_x = 199, .v_min = -1.5, .v_max = 0.05, .n_v = 3,
                      .T = 0.15});
const SolverOptions kAveraged{.terminal_averaging = true};

GridSpec stable_line(const ModelParams& p) {
  return with_admissible_time_steps(p, kLine, StabilityScope::kXOnly);
}

// Small 2-D grid for the coupled solver.
const GridSpec kSmall2d({.x_min = 40, .x_max = 160, .n_x = 59, .v_min = -2.5, .v_max = 0.5, .n_v = 13,
                         .T = 0.15});

}  // namespace

TEST(Hamiltonian, CandidatesAndTies) {
  // Convex in q: an endpoint wins.
  EXPECT_DOUBLE_EQ(maximize_hamiltonian(1.0, 0.0, 0.1, 0.2).q, 0.2);
  EXPECT_DOUBLE_EQ(maximize_hamiltonian(-1.0, 0.0, 0.1, 0.2).q, 0.1);
  // Flat: tie goes to the upper bound.
  EXPECT_DOUBLE_EQ(maximize_hamiltonian(0.0, 0.0, 0.1, 0.2).q, 0.2);
  // Concave with the vertex inside the interval.
  const HamiltonianMax m = maximize_hamiltonian(-1.0, 0.3, 0.1, 0.2);
  EXPECT_DOUBLE_EQ(m.q, 0.15);
  EXPECT_DOUBLE_EQ(m.value, -0.0225 + 0.045);
}

TEST(BsbSolver, MatchesBlackScholesWithFixedVolatility) {
  const auto h = PiecewiseLinearPayoff::call(100);
  for (double q : {0.1, 0.2})
    for (double v : {-1.0, 0.0}) {
      const ModelParams p = reference_params(0.0).with_bounds(q, q);
      const PriceSurface s = solve_bsb_1d(p, h, stable_line(p), v, kAveraged);
      const double ref = bs_call(100, 100, q * std::exp(v), 0.15);
      EXPECT_NEAR(s.value_at_start(100, v) / ref, 1.0, 0.005) << "q=" << q << " v=" << v;
    }
}

TEST(BsbSolver, ConvexPayoffUsesUpperVolatility) {
  const auto h = PiecewiseLinearPayoff::call(100);
  const ModelParams p = reference_params(0.0);
  const PriceSurface s = solve_bsb_1d(p, h, stable_line(p), std::nullopt, kAveraged);
  for (std::size_t j = 0; j < kLine.n_v(); ++j) {
    const double v = kLine.v(j);
    const double ref = bs_call(100, 100, 0.2 * std::exp(v), 0.15);
    EXPECT_NEAR(s.value_at_start(100, v) / ref, 1.0, 0.005) << v;
  }
}

TEST(BsbSolver, ConcavePayoffUsesLowerVolatility) {
  const auto h = PiecewiseLinearPayoff::short_call(100);
  const ModelParams p = reference_params(0.0);
  const PriceSurface s = solve_bsb_1d(p, h, stable_line(p), -1.0, kAveraged);
  const double ref = -bs_call(100, 100, 0.1 * std::exp(-1.0), 0.15);
  EXPECT_NEAR(s.value_at_start(100, -1.0) / ref, 1.0, 0.005);
}

TEST(BsbSolver, DegenerateIntervalGivesFixedVolatilityPrice) {
  const auto h = PiecewiseLinearPayoff::butterfly(90, 100, 110);
  const ModelParams p = reference_params(0.0).with_bounds(0.15, 0.15);
  const PriceSurface s = solve_bsb_1d(p, h, stable_line(p), 0.0, kAveraged);
  const double ref = bs_butterfly(100, 90, 100, 110, 0.15, 0.15);
  EXPECT_NEAR(s.value_at_start(100, 0.0) / ref, 1.0, 0.005);
  // The 2-D solver at delta = 0 solves the same equation column by column.
  const double v_node = kLine.v(1);
  const PriceSurface column = solve_bsb_1d(p, h, stable_line(p), v_node, kAveraged);
  const PriceSurface full = solve_hjb_2d(p, h, with_admissible_time_steps(p, kLine), kAveraged);
  EXPECT_NEAR(full.value_at_start(100, v_node), column.value_at_start(100, v_node), 1e-3);
}

TEST(BsbSolver, ButterflyLiesBetweenLegBounds) {
  const auto h = PiecewiseLinearPayoff::butterfly(90, 100, 110);
  const ModelParams p = reference_params(0.0);
  const double v = -1.0;
  const PriceSurface s = solve_bsb_1d(p, h, stable_line(p), v, kAveraged);
  const double lo_vol = 0.1 * std::exp(v), hi_vol = 0.2 * std::exp(v);
  for (double x : {92.0, 96.0, 100.0, 104.0, 108.0}) {
    const double lower = bs_butterfly(x, 90, 100, 110, lo_vol, 0.15);
    const double upper = bs_call(x, 90, hi_vol, 0.15) - 2 * bs_call(x, 100, lo_vol, 0.15) +
                         bs_call(x, 110, hi_vol, 0.15);
    const double value = s.value_at_start(x, v);
    EXPECT_GE(value, lower * (1 - 0.01)) << x;
    EXPECT_LE(value, upper * (1 + 0.01)) << x;
  }
}

TEST(HjbSolver, TerminalConditionExact) {
  const auto h = PiecewiseLinearPayoff::butterfly(90, 100, 110);
  const ModelParams p = reference_params(0.3);
  const GridSpec g = with_admissible_time_steps(p, kSmall2d);
  const PriceSurface s = solve_hjb_2d(p, h, g);
  for (std::size_t i = 0; i < g.nx_total(); ++i)
    for (std::size_t j = 0; j < g.n_v(); ++j) EXPECT_EQ(s.terminal()(i, j), h(g.x(i)));
  for (double value : s.initial().flat()) EXPECT_TRUE(std::isfinite(value));
  EXPECT_EQ(s.kind(), SurfaceKind::kFullDelta);
  EXPECT_EQ(s.kept_times().size(), 2u);
}

TEST(HjbSolver, LargerIntervalNeverLowersPrice) {
  const auto h = PiecewiseLinearPayoff::butterfly(90, 100, 110);
  // Uncorrelated, so the explicit scheme is monotone and the comparison is exact.
  const ModelParams narrow = reference_params(0.3).with_rho(0.0).with_bounds(0.12, 0.18);
  const ModelParams wide = reference_params(0.3).with_rho(0.0);
  const GridSpec g = with_admissible_time_steps(wide, kSmall2d);
  const PriceSurface a = solve_hjb_2d(narrow, h, g);
  const PriceSurface b = solve_hjb_2d(wide, h, g);
  // Boundary columns are extrapolated, not solved, so only interior x is compared.
  for (std::size_t i = 1; i + 1 < g.nx_total(); ++i)
    for (std::size_t j = 0; j < g.n_v(); ++j)
      EXPECT_GE(b.initial()(i, j), a.initial()(i, j) - 1e-8) << g.x(i) << ", " << g.v(j);
}

TEST(HjbSolver, DenseRetentionAndBudgetStride) {
  const auto h = PiecewiseLinearPayoff::call(100);
  const ModelParams p = reference_params(0.3);
  const GridSpec g = with_admissible_time_steps(p, kSmall2d);
  const PriceSurface all = solve_hjb_2d(p, h, g, {.retention = Retention::kDense});
  EXPECT_TRUE(all.retains_every_level());

  const std::size_t slice = g.nx_total() * g.n_v() * sizeof(double);
  SolverOptions tight{.retention = Retention::kDense, .memory_budget_bytes = slice * 10};
  const PriceSurface some = solve_hjb_2d(p, h, g, tight);
  EXPECT_FALSE(some.retains_every_level());
  EXPECT_LE(some.slot_count(), 12u);
  EXPECT_TRUE(some.retains(0));
  EXPECT_TRUE(some.retains(g.n_t()));
  EXPECT_EQ(some.initial(), all.initial());

  // Missing levels are interpolated linearly between retained neighbours.
  const auto& kept = some.kept_times();
  const std::size_t lo = kept[1], hi = kept[2], mid = (lo + hi) / 2;
  Array2D<double> scratch;
  const Array2D<double>& m = some.level(mid, scratch);
  const double w = double(mid - lo) / double(hi - lo);
  EXPECT_NEAR(m(30, 6), (1 - w) * all.slice(lo)(30, 6) + w * all.slice(hi)(30, 6), 1e-12);
  EXPECT_THROW(some.slice(mid), ValidationError);
}

TEST(Corrector, VanishesWithoutCorrelation) {
  const auto h = PiecewiseLinearPayoff::butterfly(90, 100, 110);
  const ModelParams p = reference_params(0.0).with_rho(0.0);
  const GridSpec g = with_admissible_time_steps(p, kSmall2d, StabilityScope::kXOnly);
  const PriceSurface p0 = solve_bsb_1d(p, h, g, std::nullopt, {.retention = Retention::kDense});
  const PriceSurface p1 = solve_corrector(p, h, g, p0);
  for (double value : p1.initial().flat()) EXPECT_EQ(value, 0.0);
  for (double value : p1.terminal().flat()) EXPECT_EQ(value, 0.0);
}

TEST(Corrector, RejectsMismatchedInputs) {
  const auto h = PiecewiseLinearPayoff::call(100);
  const ModelParams p = reference_params(0.0);
  const GridSpec g = with_admissible_time_steps(p, kSmall2d, StabilityScope::kXOnly);
  const PriceSurface p0 = solve_bsb_1d(p, h, g, std::nullopt, {.retention = Retention::kDense});
  EXPECT_THROW(solve_corrector(p, h, g.with_time_steps(g.n_t() + 1), p0), ValidationError);
  const PriceSurface full = solve_hjb_2d(p, h, with_admissible_time_steps(p, g));
  EXPECT_THROW(solve_corrector(p, h, full.grid(), full), ValidationError);
}

TEST(Corrector, SelfRefinementWithFixedVolatility) {
  const auto h = PiecewiseLinearPayoff::call(100);
  const ModelParams p = reference_params(0.0).with_bounds(0.2, 0.2);
  const GridSpec base({.x_min = 40, .x_max = 160, .n_x = 119, .v_min = -2.5, .v_max = 0.5, .n_v = 13});
  double previous = 0.0;
  for (const GridSpec& g0 : {base, base.refined(true)}) {
    const GridSpec g = with_admissible_time_steps(p, g0, StabilityScope::kXOnly);
    const PriceSurface p0 = solve_bsb_1d(p, h, g, std::nullopt, {.retention = Retention::kDense});
    const double value = solve_corrector(p, h, g, p0).value_at_start(100, -1);
    if (previous != 0.0) EXPECT_NEAR(value / previous, 1.0, 0.02);
    previous = value;
  }
}

TEST(HjbSolver, ReferenceGridRefinementChangesPriceLittle) {
  const auto h = PiecewiseLinearPayoff::butterfly(90, 100, 110);
  const ModelParams p = reference_params(0.5);
  const GridSpec g0({});
  const double coarse = solve_hjb_2d(p, h, with_admissible_time_steps(p, g0)).value_at_start(100, -1);
  const double fine =
      solve_hjb_2d(p, h, with_admissible_time_steps(p, g0.refined(false))).value_at_start(100, -1);
  EXPECT_LT(std::abs(fine - coarse) / fine, 0.005);
}
