#include "tvpvarx/ols.hpp"

namespace tvpvarx {

namespace {

// Regressor index for (equation-independent) column r of X, mapped from a
// state-layout index. Columns of X: 0 intercept, 1..nk the B lags
// (lag-major, column within lag), nk+1..nk+k+1 the x lags 0..k.
struct StateToRegressor {
  int equation;
  int column;
};

StateToRegressor locate(const CoefLayout& layout, int state_index) {
  const int n = layout.n();
  const int k = layout.k();
  if (state_index < n) return {state_index, 0};
  int idx = state_index - n;
  if (idx < k * n * n) {
    const int lag = idx / (n * n);
    const int within = idx % (n * n);
    const int row = within / n;
    const int col = within % n;
    return {row, 1 + lag * n + col};
  }
  idx -= k * n * n;
  const int first = layout.includes_d0() ? 0 : 1;
  const int lag = first + idx / n;
  const int eq = idx % n;
  return {eq, 1 + k * n + lag};
}

}  // namespace

int ols_position(const CoefLayout& layout, int state_index, int p) {
  const auto loc = locate(layout, state_index);
  return loc.equation * p + loc.column;
}

Vector OlsFit::state_vector(const CoefLayout& layout) const {
  Vector out(layout.dim());
  for (int s = 0; s < layout.dim(); ++s) {
    const auto loc = locate(layout, s);
    out(s) = coef(loc.column, loc.equation);
  }
  return out;
}

Matrix OlsFit::state_covariance(const CoefLayout& layout) const {
  // Cov([b_1; ...; b_n]) = sigma kron (X'X)^-1, then permute.
  const int dim = layout.dim();
  Matrix out(dim, dim);
  for (int a = 0; a < dim; ++a) {
    const auto la = locate(layout, a);
    for (int b = 0; b < dim; ++b) {
      const auto lb = locate(layout, b);
      out(a, b) = sigma(la.equation, lb.equation) * xtx_inverse(la.column, lb.column);
    }
  }
  return out;
}

OlsFit fit_varx_ols(const Matrix& y, const Vector& x, int k) {
  const int T = static_cast<int>(y.rows());
  const int n = static_cast<int>(y.cols());
  if (x.size() != T) throw DimensionMismatch("fit_varx_ols: y and x lengths disagree");
  const int p = 1 + n * k + (k + 1);
  const int t_used = T - k;
  if (t_used < p + 1)
    throw InsufficientTrainingData("VARX OLS needs at least " + std::to_string(p + 1 + k) +
                                   " observations, got " + std::to_string(T));

  Matrix X(t_used, p);
  Matrix Y(t_used, n);
  for (int t = k; t < T; ++t) {
    const int r = t - k;
    X(r, 0) = 1.0;
    for (int j = 1; j <= k; ++j) X.block(r, 1 + (j - 1) * n, 1, n) = y.row(t - j);
    for (int i = 0; i <= k; ++i) X(r, 1 + n * k + i) = x(t - i);
    Y.row(r) = y.row(t);
  }

  const Matrix xtx = X.transpose() * X;
  Matrix L;
  try {
    L = cholesky_lower(symmetrize(xtx));
  } catch (const NotPositiveDefinite&) {
    throw CollinearRegressors();
  }
  const Matrix xtx_inv = symmetrize(L.transpose().triangularView<Eigen::Upper>().solve(
      Matrix(L.triangularView<Eigen::Lower>().solve(Matrix::Identity(p, p)))));

  OlsFit fit;
  fit.n = n;
  fit.k = k;
  fit.t_used = t_used;
  fit.coef = xtx_inv * (X.transpose() * Y);
  fit.residuals = Y - X * fit.coef;
  const int dof = std::max(1, t_used - p);
  fit.sigma = symmetrize(fit.residuals.transpose() * fit.residuals / static_cast<double>(dof));
  fit.xtx_inverse = xtx_inv;
  return fit;
}

}  // namespace tvpvarx
