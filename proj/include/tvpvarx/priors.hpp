#pragma once

// Prior calibration from OLS on the first t0 observations of the
// unconstrained constant-coefficient VARX.

#include <string>
#include <vector>

#include "tvpvarx/model.hpp"

namespace tvpvarx {

struct PriorOverrides {
  Vector u0_diag;          // diagonal of U_0; empty = 0.1 per component
  double kappa_q = 0.01;
  double kappa_qtilde = 0.01;
  double kappa_g = 0.1;
  double kappa_w = 0.01;
};

struct IwPrior {
  Matrix scale;
  double dof = 0.0;
};

struct PriorSpec {
  // Initial coefficient state (c, B, exogenous block) in the mode's layout.
  Vector coef_mean;
  Matrix coef_cov;
  // Covariance-factor elements, stacked by rows; covariance is block diagonal
  // across equations.
  Vector alpha_mean;
  Matrix alpha_cov;
  // Log volatilities.
  Vector logvol_mean;
  Matrix logvol_cov;
  // Innovation-covariance hyperpriors.
  IwPrior q, qtilde, w;
  std::vector<IwPrior> g;  // equation blocks of dimension 1..n-1
  // Long-run multiplier prior.
  Vector theta_mean;   // mu_0
  Matrix theta_cov;    // U_0

  std::string to_kv() const;  // human-readable key-value audit document
};

// y_train/x_train are the first t0 log-difference observations.
// Deterministic given the slice and the overrides.
PriorSpec calibrate(const Matrix& y_train, const Vector& x_train, const ModelConfig& cfg,
                    const PriorOverrides& overrides = {});

}  // namespace tvpvarx
