#pragma once

// Closed-form Black-Scholes values used as test oracles.

#include <cmath>

namespace uvm::testing {

inline double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }
inline double normal_pdf(double z) { return std::exp(-0.5 * z * z) / std::sqrt(2.0 * M_PI); }

inline double bs_call(double s, double k, double vol, double tau, double r = 0.0) {
  if (tau <= 0.0 || vol <= 0.0) return std::max(s - k * std::exp(-r * tau), 0.0);
  const double sd = vol * std::sqrt(tau);
  const double d1 = (std::log(s / k) + (r + 0.5 * vol * vol) * tau) / sd;
  return s * normal_cdf(d1) - k * std::exp(-r * tau) * normal_cdf(d1 - sd);
}

/// dC/dvol.
inline double bs_vega(double s, double k, double vol, double tau, double r = 0.0) {
  const double sd = vol * std::sqrt(tau);
  const double d1 = (std::log(s / k) + (r + 0.5 * vol * vol) * tau) / sd;
  return s * normal_pdf(d1) * std::sqrt(tau);
}

/// (x-k1)^+ - 2 (x-k2)^+ + (x-k3)^+ at a single volatility.
inline double bs_butterfly(double s, double k1, double k2, double k3, double vol, double tau) {
  return bs_call(s, k1, vol, tau) - 2.0 * bs_call(s, k2, vol, tau) + bs_call(s, k3, vol, tau);
}

}  // namespace uvm::testing
