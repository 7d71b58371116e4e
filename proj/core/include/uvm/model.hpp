#pragma once

namespace uvm {

/// Constants of the rescaled alpha-hypergeometric model
///
///   dX = r X dt + X q e^V dW1
///   dV = delta (a - b e^{alpha V}) dt + sqrt(delta) sigma dW2,   d<W1,W2> = rho dt
///
/// with the unknown volatility multiplier q confined to [sigma_min, sigma_max].
/// Instances are always valid: the constructor throws ValidationError naming the
/// first violated field.
class ModelParams {
 public:
  struct Values {
    double r = 0.0;
    double a = 0.0;
    double b = 1.0;
    double alpha = 1.0;
    double sigma = 0.5;
    double rho = 0.0;
    double sigma_min = 0.1;
    double sigma_max = 0.2;
    double delta = 0.0;
  };

  explicit ModelParams(const Values& values);

  const Values& values() const noexcept { return v_; }

  double r() const noexcept { return v_.r; }
  double a() const noexcept { return v_.a; }
  double b() const noexcept { return v_.b; }
  double alpha() const noexcept { return v_.alpha; }
  double sigma() const noexcept { return v_.sigma; }
  double rho() const noexcept { return v_.rho; }
  double sigma_min() const noexcept { return v_.sigma_min; }
  double sigma_max() const noexcept { return v_.sigma_max; }
  double delta() const noexcept { return v_.delta; }

  ModelParams with_delta(double delta) const;
  ModelParams with_bounds(double sigma_min, double sigma_max) const;
  ModelParams with_rho(double rho) const;

  /// Drift of the log-volatility factor without the delta prefactor.
  double factor_drift(double v) const noexcept;

  bool degenerate_interval() const noexcept { return v_.sigma_min == v_.sigma_max; }

 private:
  Values v_;
};

/// Parameters used for the slow-volatility reproduction study:
/// a=0.6, b=0.5, rho=0.5, alpha=2, [0.1, 0.2], r=0. The vol-of-vol is not
/// published with that parameter set; 0.5 is assumed.
ModelParams reference_params(double delta);
inline constexpr double kAssumedVolOfVol = 0.5;

struct VolBounds {
  double lower;
  double upper;
};

/// Admissible instantaneous volatility band [sigma_min e^v, sigma_max e^v].
VolBounds vol_bounds(const ModelParams& params, double v) noexcept;

}  // namespace uvm
