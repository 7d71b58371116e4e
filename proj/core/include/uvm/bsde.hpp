#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>

#include "uvm/model.hpp"
#include "uvm/payoff.hpp"
#include "uvm/sde.hpp"
#include "uvm/stats.hpp"
#include "uvm/surface.hpp"

namespace uvm {

enum class DriverKind { kLimit, kFull };  // f0 and f_delta

/// Driver of the second-order BSDE under the trivial forward dynamics
/// dX~ = dW~ in (x, v). With z = (u_x, u_v) and S the Hessian,
///
///   f_delta = -1/2 x^2 e^{2v} sbar^2 S11 - sqrt(delta) x e^v sigma rho sbar S12
///             - delta (1/2 sigma^2 S22 + (a - b e^{alpha v}) z2) - r (x z1 - y)
///   f0      = -1/2 x^2 e^{2v} sbar^2 S11 - r (x z1 - y)
///
/// where sbar = sigma_max if S11 >= 0 else sigma_min. With `literal` set the
/// alternative coefficients are used instead: x to the first power, a
/// cross coefficient of 2 sqrt(delta), and the cross term weighted by
/// |sbar(S12)|. Only the default form satisfies f = u_t.
class DriverSpec {
 public:
  DriverSpec(ModelParams params, DriverKind kind, bool literal = false)
      : params_(params), kind_(kind), literal_(literal) {}

  const ModelParams& params() const noexcept { return params_; }
  DriverKind kind() const noexcept { return kind_; }
  bool literal() const noexcept { return literal_; }

  double sigma_bar(double s11) const noexcept {
    return s11 >= 0.0 ? params_.sigma_max() : params_.sigma_min();
  }

  double operator()(double x, double v, double y, double z1, double z2, double s11,
                    double s12, double s22) const noexcept;

 private:
  ModelParams params_;
  DriverKind kind_;
  bool literal_;
};

DriverSpec build_driver(const ModelParams& params, DriverKind kind, bool literal = false);
std::string_view to_string(DriverKind kind) noexcept;

struct ForwardStart {
  double x = 100.0;
  double v = -1.0;
};

struct BsdeRunSpec {
  std::size_t n_paths = 10000;
  std::size_t n_steps = 200;
  std::uint64_t seed = 1;
  bool literal_driver = false;
};

struct BsdeResidualReport {
  double y0_fd = 0.0;                  // u(0, x~0) read from the surface
  double y0_mean = 0.0;                // y0_fd minus the mean terminal residual
  double terminal_residual_rms = 0.0;  // RMS of Y_T - h(X~1_T) over surviving paths
  double terminal_residual_mean = 0.0;
  std::size_t n_paths_used = 0;
  std::size_t n_paths_discarded = 0;
  DriverKind driver = DriverKind::kFull;
};

/// Forward Euler integration of
///   dY = f dt + Z . dW~ + 1/2 (Gamma11 + Gamma22) dt,   Y_0 = u(0, x~0),
/// along 2-D Brownian paths started at x~0, with Z and Gamma read from the
/// surface (bilinear in space, nearest retained level in time). The driver kind
/// follows the surface: f_delta for full_delta, f0 for limit_p0. Paths leaving
/// the grid rectangle are discarded and counted.
BsdeResidualReport simulate_2bsde_residual(const PriceSurface& surface,
                                           const PiecewiseLinearPayoff& payoff,
                                           ForwardStart start, const BsdeRunSpec& run);

struct DriftEstimate {
  double drift = 0.0;      // E[M_T] - M_0
  double std_error = 0.0;
  double m0 = 0.0;
};

/// M_s = P(s, X_s, V_s) along model paths simulated under `policy`; returns
/// E[M_T - M_0]. Requires r = 0.
DriftEstimate martingale_check(const PriceSurface& surface, const ModelParams& params,
                               const SimulationSpec& spec, VolatilityPolicy& policy);

}  // namespace uvm
