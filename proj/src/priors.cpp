#include "tvpvarx/priors.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "tvpvarx/ols.hpp"

namespace tvpvarx {

namespace {

void append_vector(std::ostringstream& os, const std::string& key, const Vector& v) {
  char buf[32];
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.12g", v(i));
    os << key << '[' << i << "]=" << buf << '\n';
  }
}

void append_matrix(std::ostringstream& os, const std::string& key, const Matrix& m) {
  char buf[32];
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      std::snprintf(buf, sizeof buf, "%.12g", m(r, c));
      os << key << '[' << r << "][" << c << "]=" << buf << '\n';
    }
}

}  // namespace

std::string PriorSpec::to_kv() const {
  std::ostringstream os;
  append_vector(os, "coef_mean", coef_mean);
  append_matrix(os, "coef_cov", coef_cov);
  append_vector(os, "alpha_mean", alpha_mean);
  append_matrix(os, "alpha_cov", alpha_cov);
  append_vector(os, "logvol_mean", logvol_mean);
  append_matrix(os, "logvol_cov", logvol_cov);
  os << "q_dof=" << q.dof << '\n';
  append_matrix(os, "q_scale", q.scale);
  os << "qtilde_dof=" << qtilde.dof << '\n';
  append_matrix(os, "qtilde_scale", qtilde.scale);
  os << "w_dof=" << w.dof << '\n';
  append_matrix(os, "w_scale", w.scale);
  for (std::size_t i = 0; i < g.size(); ++i) {
    os << "g" << i + 1 << "_dof=" << g[i].dof << '\n';
    append_matrix(os, "g" + std::to_string(i + 1) + "_scale", g[i].scale);
  }
  append_vector(os, "theta_mean", theta_mean);
  append_matrix(os, "theta_cov", theta_cov);
  return os.str();
}

PriorSpec calibrate(const Matrix& y_train, const Vector& x_train, const ModelConfig& cfg,
                    const PriorOverrides& overrides) {
  cfg.validate();
  const int rows = static_cast<int>(y_train.rows());
  if (static_cast<int>(y_train.cols()) != cfg.n)
    throw DimensionMismatch("calibrate: training columns do not match n");
  if (x_train.size() != rows) throw DimensionMismatch("calibrate: y and x lengths disagree");
  if (rows < cfg.min_t0())
    throw InsufficientTrainingData("training slice of " + std::to_string(rows) +
                                   " observations is below the minimum " +
                                   std::to_string(cfg.min_t0()));

  const int n = cfg.n;
  const int k = cfg.k;
  const double t0 = static_cast<double>(rows);
  const OlsFit fit = fit_varx_ols(y_train, x_train, k);

  const CoefLayout full(n, k, /*includes_d0=*/true);
  const CoefLayout mode(n, k, /*includes_d0=*/!cfg.constrained);
  const Vector full_mean = fit.state_vector(full);
  const Matrix full_cov = fit.state_covariance(full);

  // Map mode-layout indices into the full layout (identical except that the
  // constrained mode drops the D0 slots).
  std::vector<int> map(mode.dim());
  for (int e = 0; e < n; ++e) map[mode.c_index(e)] = full.c_index(e);
  for (int j = 1; j <= k; ++j)
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) map[mode.b_index(j, r, c)] = full.b_index(j, r, c);
  const int d_first = mode.includes_d0() ? 0 : 1;
  for (int i = d_first; i <= k; ++i)
    for (int e = 0; e < n; ++e) map[mode.d_index(i, e)] = full.d_index(i, e);

  PriorSpec prior;
  prior.coef_mean.resize(mode.dim());
  for (int s = 0; s < mode.dim(); ++s) prior.coef_mean(s) = full_mean(map[s]);

  // Initial-state covariance: 4x the OLS covariance, block diagonal between
  // the (c,B) block and the exogenous block.
  const int cb = mode.cb_dim();
  const int dd = mode.d_dim();
  prior.coef_cov = Matrix::Zero(mode.dim(), mode.dim());
  for (int a = 0; a < cb; ++a)
    for (int b = 0; b < cb; ++b) prior.coef_cov(a, b) = 4.0 * full_cov(map[a], map[b]);
  for (int a = 0; a < dd; ++a)
    for (int b = 0; b < dd; ++b)
      prior.coef_cov(cb + a, cb + b) = 4.0 * full_cov(map[cb + a], map[cb + b]);

  // Covariance-factor priors from triangular regressions of the OLS
  // residuals: u_i on -u_{j<i}.
  const int a_dim = n * (n - 1) / 2;
  prior.alpha_mean = Vector::Zero(a_dim);
  prior.alpha_cov = Matrix::Zero(a_dim, a_dim);
  prior.logvol_mean.resize(n);
  prior.g.clear();
  {
    const Matrix& E = fit.residuals;
    const int T_eff = static_cast<int>(E.rows());
    int pos = 0;
    for (int i = 0; i < n; ++i) {
      if (i == 0) {
        const double s2 = E.col(0).squaredNorm() / std::max(1, T_eff - 1);
        prior.logvol_mean(0) = 0.5 * std::log(s2);
        continue;
      }
      const Matrix U = -E.leftCols(i);
      const Vector target = E.col(i);
      const Matrix utu = symmetrize(U.transpose() * U);
      Matrix L;
      try {
        L = cholesky_lower(utu);
      } catch (const NotPositiveDefinite&) {
        throw CollinearRegressors("degenerate residual regression for equation " +
                                  std::to_string(i + 1));
      }
      const Matrix utu_inv = symmetrize(L.transpose().triangularView<Eigen::Upper>().solve(
          Matrix(L.triangularView<Eigen::Lower>().solve(Matrix::Identity(i, i)))));
      const Vector a_hat = utu_inv * (U.transpose() * target);
      const Vector resid = target - U * a_hat;
      const double s2 = resid.squaredNorm() / std::max(1, T_eff - i - 1);
      const Matrix cov_i = s2 * utu_inv;
      prior.alpha_mean.segment(pos, i) = a_hat;
      prior.alpha_cov.block(pos, pos, i, i) = 4.0 * cov_i;
      prior.logvol_mean(i) = 0.5 * std::log(s2);

      IwPrior gblock;
      gblock.scale = overrides.kappa_g * overrides.kappa_g * t0 * cov_i;
      gblock.dof = std::max(t0, static_cast<double>(i + 1));
      prior.g.push_back(std::move(gblock));
      pos += i;
    }
  }
  prior.logvol_cov = Matrix::Identity(n, n);

  prior.q.scale = overrides.kappa_q * overrides.kappa_q * t0 *
                  full_cov.topLeftCorner(full.cb_dim(), full.cb_dim());
  prior.q.dof = std::max(t0, static_cast<double>(full.cb_dim() + 1));
  {
    Matrix d_cov(dd, dd);
    for (int a = 0; a < dd; ++a)
      for (int b = 0; b < dd; ++b) d_cov(a, b) = full_cov(map[cb + a], map[cb + b]);
    prior.qtilde.scale = overrides.kappa_qtilde * overrides.kappa_qtilde * t0 * d_cov;
    prior.qtilde.dof = std::max(t0, static_cast<double>(dd + 1));
  }
  prior.w.scale = overrides.kappa_w * overrides.kappa_w * t0 * Matrix::Identity(n, n);
  prior.w.dof = std::max(t0, static_cast<double>(n + 1));

  // Long-run multiplier prior: mean from the constraint applied to the OLS
  // point estimates, covariance from the overrides.
  Vector u0 = overrides.u0_diag;
  if (u0.size() == 0) u0 = Vector::Constant(n, 0.1);
  if (u0.size() != n) throw ConfigError("u0 diagonal override has wrong length");
  prior.theta_cov = u0.asDiagonal();
  std::vector<Vector> d_hat;
  for (int i = 0; i <= k; ++i) d_hat.push_back(full.d_block(full_mean, i));
  if (cfg.constrained) {
    prior.theta_mean = long_run_multiplier(full.b_blocks(full_mean), d_hat, cfg.cond_threshold);
  } else {
    try {
      prior.theta_mean = long_run_multiplier(full.b_blocks(full_mean), d_hat, cfg.cond_threshold);
    } catch (const NearSingularLongRun&) {
      prior.theta_mean = Vector::Zero(n);
    }
  }
  return prior;
}

}  // namespace tvpvarx
