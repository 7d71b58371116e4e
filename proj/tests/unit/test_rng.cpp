#include <gtest/gtest.h>

#include <cmath>

#include "uvm/rng.hpp"
#include "uvm/stats.hpp"

using namespace uvm;

// Known-answer vectors of the Philox4x32-10 reference implementation.
TEST(Philox, KnownAnswers) {
  EXPECT_EQ(philox4x32({0, 0, 0, 0}, {0, 0}),
            (PhiloxCounter{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8}));
  EXPECT_EQ(philox4x32({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}),
            (PhiloxCounter{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd}));
  EXPECT_EQ(philox4x32({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}),
            (PhiloxCounter{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1}));
}

TEST(CounterNormals, DeterministicAndOrderFree) {
  const CounterNormals a(42), b(42), c(43);
  const auto late = a.pair(999, 7);
  const auto early = a.pair(3, 1);
  EXPECT_EQ(b.pair(3, 1), early);
  EXPECT_EQ(b.pair(999, 7), late);
  EXPECT_NE(c.pair(3, 1), early);
  EXPECT_NE(a.pair(3, 1, RngStream::kForwardBrownian), early);
}

TEST(CounterNormals, StandardMoments) {
  const CounterNormals rng(9);
  RunningStats s, sq;
  for (std::uint64_t p = 0; p < 50000; ++p) {
    const auto z = rng.pair(p, 0);
    for (double v : z) {
      s.add(v);
      sq.add(v * v);
    }
  }
  EXPECT_NEAR(s.mean(), 0.0, 4.0 * s.std_error());
  EXPECT_NEAR(sq.mean(), 1.0, 4.0 * sq.std_error());
}

TEST(CorrelatedIncrements, EmpiricalCorrelation) {
  const CounterNormals rng(5);
  const double rho = 0.5;
  const std::size_t n_paths = 2000, n_steps = 50;
  double s11 = 0, s22 = 0, s12 = 0;
  for (std::uint64_t p = 0; p < n_paths; ++p)
    for (std::uint32_t k = 0; k < n_steps; ++k) {
      const auto d = correlated_increments(rng, p, k, rho, 1.0);
      s11 += d.dw1 * d.dw1;
      s22 += d.dw2 * d.dw2;
      s12 += d.dw1 * d.dw2;
    }
  const double corr = s12 / std::sqrt(s11 * s22);
  EXPECT_NEAR(corr, rho, 4.0 / std::sqrt(double(n_paths * n_steps)));
}

TEST(CorrelatedIncrements, PerfectCorrelation) {
  const CounterNormals rng(5);
  for (std::uint32_t k = 0; k < 20; ++k) {
    const auto up = correlated_increments(rng, 11, k, 1.0, 0.1);
    EXPECT_EQ(up.dw1, up.dw2);
    const auto down = correlated_increments(rng, 11, k, -1.0, 0.1);
    EXPECT_EQ(down.dw1, -down.dw2);
  }
}
