#include "uvm/mgf.hpp"

#include <cmath>

namespace uvm {

namespace {

constexpr double kPoleTolerance = 1e-12;

// sinh(z)/z and sin(z)/z with their removable singularity at 0.
double sinhc(double z) {
  if (std::abs(z) < 1e-4) return 1.0 + z * z / 6.0;
  return std::sinh(z) / z;
}
double sinc(double z) {
  if (std::abs(z) < 1e-4) return 1.0 - z * z / 6.0;
  return std::sin(z) / z;
}

}  // namespace

MgfTerms mgf_terms(const ModelParams& params, double eta, double t) {
  if (!std::isfinite(eta) || !std::isfinite(t) || t < 0.0)
    throw ValidationError("t", "eta and t must be finite, t >= 0");
  const double delta = params.delta();
  const double s2 = params.sigma() * params.sigma();
  const double exponent = 2.0 / s2;
  const double half_t = 0.5 * t;

  MgfTerms out;
  out.b_bar_sq = delta * delta - 2.0 * eta * delta * s2;
  out.real_branch = out.b_bar_sq >= 0.0;

  // cosh-like and (sinh-like / b_bar) parts of the denominator.
  double c, s_over_b;
  if (out.real_branch) {
    const double b = std::sqrt(out.b_bar_sq);
    c = std::cosh(b * half_t);
    s_over_b = half_t * sinhc(b * half_t);
  } else {
    const double theta = std::sqrt(-out.b_bar_sq);
    c = std::cos(theta * half_t);
    s_over_b = half_t * sinc(theta * half_t);
  }
  const double denom = c + delta * s_over_b;
  if (std::abs(denom) < kPoleTolerance)
    throw MgfPole("moment generating function pole at t=" + std::to_string(t));

  const double psi_base = std::exp(delta * half_t) / denom;
  const double xi_base = 2.0 * eta * s_over_b / denom;
  if (psi_base < 0.0) throw NumericalError("Psi base negative beyond the first pole");
  if (xi_base < 0.0) throw NumericalError("Xi base negative; power 2/sigma^2 undefined");
  out.psi = std::pow(psi_base, exponent);
  out.xi = std::pow(xi_base, exponent);
  out.value = out.psi;
  return out;
}

double mgf_closed_form(const ModelParams& params, double eta, double t, double v) {
  MgfTerms terms = mgf_terms(params, eta, t);
  terms.value = terms.psi * std::exp(-v * terms.xi);
  return terms.value;
}

}  // namespace uvm
