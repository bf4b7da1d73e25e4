#pragma once

// Equation-by-equation OLS of the VARX measurement equation with constant
// coefficients; shared by the prior calibration and the constant-parameter
// benchmark. Regressor row for time t: [1, y_{t-1}, ..., y_{t-k}, x_t,
// x_{t-1}, ..., x_{t-k}].

#include "tvpvarx/model.hpp"

namespace tvpvarx {

struct OlsFit {
  int n = 0, k = 0;
  int t_used = 0;           // rows entering the regression
  Matrix coef;              // p x n, column per equation
  Matrix residuals;         // t_used x n
  Matrix sigma;             // residual covariance, E'E / (t_used - p)
  Matrix xtx_inverse;       // (X'X)^-1
  int p() const { return static_cast<int>(coef.rows()); }

  // Coefficients rearranged into the flat state ordering (always includes D0).
  Vector state_vector(const CoefLayout& layout) const;
  // Covariance of the state vector: sigma kron (X'X)^-1, permuted to the
  // state ordering.
  Matrix state_covariance(const CoefLayout& layout) const;
};

// y: T x n log-differences, x: T log-differences; uses rows k..T-1.
// Throws InsufficientTrainingData / CollinearRegressors.
OlsFit fit_varx_ols(const Matrix& y, const Vector& x, int k);

// Position of a state-layout entry inside the stacked-by-equation OLS
// coefficient vector [b_1; ...; b_n].
int ols_position(const CoefLayout& layout, int state_index, int p);

}  // namespace tvpvarx
