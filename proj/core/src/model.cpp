#include "uvm/model.hpp"

#include <cmath>

#include "uvm/error.hpp"

namespace uvm {

namespace {

void require_finite(double value, const char* field) {
  if (!std::isfinite(value)) throw ValidationError(field, "must be finite");
}

}  // namespace

ModelParams::ModelParams(const Values& values) : v_(values) {
  require_finite(v_.r, "r");
  require_finite(v_.a, "a");
  require_finite(v_.b, "b");
  require_finite(v_.alpha, "alpha");
  require_finite(v_.sigma, "sigma");
  require_finite(v_.rho, "rho");
  require_finite(v_.sigma_min, "sigma_min");
  require_finite(v_.sigma_max, "sigma_max");
  require_finite(v_.delta, "delta");
  if (v_.b <= 0.0) throw ValidationError("b", "must be positive");
  if (v_.alpha <= 0.0) throw ValidationError("alpha", "must be positive");
  if (v_.sigma <= 0.0) throw ValidationError("sigma", "must be positive");
  if (std::abs(v_.rho) > 1.0) throw ValidationError("rho", "must lie in [-1, 1]");
  if (v_.sigma_min <= 0.0) throw ValidationError("sigma_min", "must be positive");
  if (v_.sigma_min > v_.sigma_max)
    throw ValidationError("sigma_min", "must not exceed sigma_max");
  if (v_.delta < 0.0 || v_.delta > 1.0) throw ValidationError("delta", "must lie in [0, 1]");
}

ModelParams ModelParams::with_delta(double delta) const {
  Values v = v_;
  v.delta = delta;
  return ModelParams(v);
}

ModelParams ModelParams::with_bounds(double sigma_min, double sigma_max) const {
  Values v = v_;
  v.sigma_min = sigma_min;
  v.sigma_max = sigma_max;
  return ModelParams(v);
}

ModelParams ModelParams::with_rho(double rho) const {
  Values v = v_;
  v.rho = rho;
  return ModelParams(v);
}

double ModelParams::factor_drift(double v) const noexcept {
  return v_.a - v_.b * std::exp(v_.alpha * v);
}

ModelParams reference_params(double delta) {
  return ModelParams({.r = 0.0,
                      .a = 0.6,
                      .b = 0.5,
                      .alpha = 2.0,
                      .sigma = kAssumedVolOfVol,
                      .rho = 0.5,
                      .sigma_min = 0.1,
                      .sigma_max = 0.2,
                      .delta = delta});
}

VolBounds vol_bounds(const ModelParams& params, double v) noexcept {
  const double f = std::exp(v);
  return {params.sigma_min() * f, params.sigma_max() * f};
}

}  // namespace uvm
