#include "uvm/rng.hpp"

#include <cmath>
#include <numbers>

namespace uvm {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi,
                    std::uint32_t& lo) noexcept {
  const std::uint64_t product = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(product >> 32);
  lo = static_cast<std::uint32_t>(product);
}

// (0, 1], 53 bits.
inline double to_unit(std::uint32_t hi, std::uint32_t lo) noexcept {
  const std::uint64_t bits = (static_cast<std::uint64_t>(hi) << 32) | lo;
  return (static_cast<double>(bits >> 11) + 1.0) * 0x1.0p-53;
}

}  // namespace

PhiloxCounter philox4x32(PhiloxCounter c, PhiloxKey k) noexcept {
  for (int round = 0; round < 10; ++round) {
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kMul0, c[0], hi0, lo0);
    mulhilo(kMul1, c[2], hi1, lo1);
    c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
    k[0] += kWeyl0;
    k[1] += kWeyl1;
  }
  return c;
}

CounterNormals::CounterNormals(std::uint64_t seed) noexcept
    : seed_(seed),
      key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)} {}

std::array<double, 2> CounterNormals::pair(std::uint64_t path, std::uint32_t step,
                                           RngStream stream) const noexcept {
  const PhiloxCounter ctr{static_cast<std::uint32_t>(path),
                          static_cast<std::uint32_t>(path >> 32), step,
                          static_cast<std::uint32_t>(stream)};
  const PhiloxCounter out = philox4x32(ctr, key_);
  // Box-Muller on two 53-bit uniforms.
  const double u1 = to_unit(out[0], out[1]);
  const double u2 = to_unit(out[2], out[3]);
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  return {radius * std::cos(angle), radius * std::sin(angle)};
}

CorrelatedIncrements correlated_increments(const CounterNormals& rng, std::uint64_t path,
                                           std::uint32_t step, double rho,
                                           double sqrt_dt) noexcept {
  const auto [z1, z2] = rng.pair(path, step);
  const double dw1 = sqrt_dt * z1;
  if (rho == 1.0) return {dw1, dw1};
  if (rho == -1.0) return {dw1, -dw1};
  return {dw1, sqrt_dt * (rho * z1 + std::sqrt(1.0 - rho * rho) * z2)};
}

}  // namespace uvm
