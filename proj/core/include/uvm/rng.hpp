#pragma once

#include <array>
#include <cstdint>

namespace uvm {

/// Philox4x32-10 counter-based bijection (Salmon et al., Random123).
/// Pure function of (counter, key); no state.
using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

PhiloxCounter philox4x32(PhiloxCounter counter, PhiloxKey key) noexcept;

/// Stream identifiers so that independent uses of the same (seed, path, step)
/// never share random numbers.
enum class RngStream : std::uint32_t {
  kModelIncrements = 0,
  kForwardBrownian = 1,
};

/// Standard normal variates keyed by (seed, path, step, stream). The same key
/// always yields the same pair regardless of evaluation order.
class CounterNormals {
 public:
  explicit CounterNormals(std::uint64_t seed) noexcept;

  std::array<double, 2> pair(std::uint64_t path, std::uint32_t step,
                             RngStream stream = RngStream::kModelIncrements) const noexcept;

  std::uint64_t seed() const noexcept { return seed_; }

 private:
  std::uint64_t seed_;
  PhiloxKey key_;
};

/// Correlated Brownian increments for one (path, step): dW1 and
/// dW2 = rho dW1 + sqrt(1 - rho^2) dW_perp, both scaled by sqrt(dt).
struct CorrelatedIncrements {
  double dw1;
  double dw2;
};

CorrelatedIncrements correlated_increments(const CounterNormals& rng, std::uint64_t path,
                                           std::uint32_t step, double rho,
                                           double sqrt_dt) noexcept;

}  // namespace uvm
