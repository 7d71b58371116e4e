#pragma once

#include "uvm/error.hpp"
#include "uvm/model.hpp"

namespace uvm {

/// The closed-form denominator b cosh(b t/2) + delta sinh(b t/2) (or its
/// trigonometric analogue) vanished.
class MgfPole : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

struct MgfTerms {
  double psi = 1.0;
  double xi = 0.0;
  double b_bar_sq = 0.0;  // delta^2 - 2 eta delta sigma^2; negative selects the trig branch
  bool real_branch = true;
  double value = 1.0;     // psi * exp(-v xi); mgf_terms reports it at v = 0
};

/// Closed-form moment generating function of the integrated log-volatility
/// factor, M(eta) = Psi(eta, t) exp(-v Xi(eta, t)) with
///
///   b_bar = sqrt(delta^2 - 2 eta delta sigma^2)
///   Psi   = (b_bar e^{delta t/2} / (b_bar cosh(b_bar t/2) + delta sinh(b_bar t/2)))^{2/sigma^2}
///   Xi    = (2 eta sinh(b_bar t/2) / (b_bar cosh(b_bar t/2) + delta sinh(b_bar t/2)))^{2/sigma^2}
///
/// evaluated in the form divided through by b_bar, so that b_bar -> 0 is
/// regular; when b_bar^2 < 0 the hyperbolic functions become cos/sin of
/// theta = sqrt(2 eta delta sigma^2 - delta^2).
///
/// Throws MgfPole when the normalised denominator is within 1e-12 of zero and
/// NumericalError when the Xi base is negative (non-integer power undefined).
MgfTerms mgf_terms(const ModelParams& params, double eta, double t);
double mgf_closed_form(const ModelParams& params, double eta, double t, double v);

}  // namespace uvm
