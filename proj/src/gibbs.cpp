#include "tvpvarx/gibbs.hpp"

#include <cmath>

#include "tvpvarx/statespace.hpp"

namespace tvpvarx {

namespace {

int alpha_index(int i, int j) { return i * (i - 1) / 2 + j; }

// Fills sys.y and sys.Z for the estimation sample t0..T-1. theta == nullptr
// selects the unconstrained (raw) regressors.
void build_coef_observations(const Matrix& y, const Vector& x, const ModelConfig& cfg,
                             const CoefLayout& layout, const Vector* theta,
                             LinearGaussianSystem& sys) {
  const int T = static_cast<int>(y.rows());
  const int T_est = T - cfg.t0;
  if (T_est < 1) throw InsufficientTrainingData("estimation sample is empty");
  const int n = cfg.n;
  const int m = layout.dim();
  sys.y.resize(T_est);
  sys.Z.resize(T_est);
  sys.H.resize(T_est);
  for (int idx = 0; idx < T_est; ++idx) {
    const int t = cfg.t0 + idx;
    if (sys.y[idx].size() != n) sys.y[idx].resize(n);
    if (sys.Z[idx].rows() != n || sys.Z[idx].cols() != m) sys.Z[idx].resize(n, m);
    build_observation(layout, y.row(t).transpose(), y.middleRows(t - cfg.k, cfg.k), x(t),
                      x.segment(t - cfg.k, cfg.k), theta, sys.y[idx], sys.Z[idx]);
  }
}

void fill_coef_noise(const CovState& cov, int n, LinearGaussianSystem& sys) {
  const int T_est = static_cast<int>(sys.y.size());
  for (int idx = 0; idx < T_est; ++idx)
    sys.H[idx] = observation_covariance(cov.alpha_path.row(idx), cov.h_path.row(idx), n);
}

void fill_coef_innovation(const Hyperparams& hyper, const CoefLayout& layout,
                          LinearGaussianSystem& sys) {
  const int m = layout.dim();
  const int cb = layout.cb_dim();
  const int dd = layout.d_dim();
  if (hyper.Q.rows() != cb || hyper.Qtilde.rows() != dd)
    throw DimensionMismatch("hyperparameter blocks do not match the coefficient layout");
  sys.state_innovation = Matrix::Zero(m, m);
  sys.state_innovation.topLeftCorner(cb, cb) = hyper.Q;
  sys.state_innovation.bottomRightCorner(dd, dd) = hyper.Qtilde;
}

struct SmootherWs {
  FilterOutput filt;
  std::vector<Vector> path;
};

void path_to_matrix(const std::vector<Vector>& path, Matrix& out) {
  const int T = static_cast<int>(path.size());
  const int m = T > 0 ? static_cast<int>(path[0].size()) : 0;
  if (out.rows() != T || out.cols() != m) out.resize(T, m);
  for (int t = 0; t < T; ++t) out.row(t) = path[t].transpose();
}

void draw_coefficients_ws(const Matrix& y, const Vector& x, const ModelConfig& cfg,
                          const CovState& cov, const Hyperparams& hyper, const Vector& theta,
                          const PriorSpec& prior, RngStream& rng, LinearGaussianSystem& sys,
                          SmootherWs& ws, Matrix& out, bool rebuild_observations) {
  const CoefLayout layout(cfg.n, cfg.k, !cfg.constrained);
  if (rebuild_observations)
    build_coef_observations(y, x, cfg, layout, cfg.constrained ? &theta : nullptr, sys);
  fill_coef_noise(cov, cfg.n, sys);
  fill_coef_innovation(hyper, layout, sys);
  sys.initial_mean = prior.coef_mean;
  sys.initial_cov = prior.coef_cov;
  kalman_filter(sys, ws.filt);
  simulation_smoother(ws.filt, sys.state_innovation, rng, ws.path);
  path_to_matrix(ws.path, out);
}

void draw_covariance_factors_ws(const Matrix& residuals, const Matrix& h_path,
                                const Hyperparams& hyper, const PriorSpec& prior, RngStream& rng,
                                LinearGaussianSystem& sys, SmootherWs& ws, Matrix& out) {
  const int T_est = static_cast<int>(residuals.rows());
  const int n = static_cast<int>(residuals.cols());
  const int a_dim = n * (n - 1) / 2;
  if (out.rows() != T_est || out.cols() != a_dim) out.resize(T_est, a_dim);
  if (n == 1) return;  // no free elements
  if (static_cast<int>(hyper.G.size()) != n - 1)
    throw DimensionMismatch("hyperparameter G blocks do not match n");
  int pos = 0;
  for (int i = 1; i < n; ++i) {
    sys.y.resize(T_est);
    sys.Z.resize(T_est);
    sys.H.resize(T_est);
    for (int t = 0; t < T_est; ++t) {
      if (sys.y[t].size() != 1) sys.y[t].resize(1);
      if (sys.Z[t].rows() != 1 || sys.Z[t].cols() != i) sys.Z[t].resize(1, i);
      if (sys.H[t].rows() != 1) sys.H[t].resize(1, 1);
      sys.y[t](0) = residuals(t, i);
      for (int j = 0; j < i; ++j) sys.Z[t](0, j) = -residuals(t, j);
      sys.H[t](0, 0) = std::exp(2.0 * h_path(t, i));
    }
    sys.state_innovation = hyper.G[i - 1];
    sys.initial_mean = prior.alpha_mean.segment(pos, i);
    sys.initial_cov = prior.alpha_cov.block(pos, pos, i, i);
    kalman_filter(sys, ws.filt);
    simulation_smoother(ws.filt, sys.state_innovation, rng, ws.path);
    for (int t = 0; t < T_est; ++t) out.block(t, pos, 1, i) = ws.path[t].transpose();
    pos += i;
  }
}

void draw_volatilities_ws(const Matrix& ystar, const Eigen::MatrixXi& s, const Matrix& W,
                          const MixtureTable& table, const PriorSpec& prior, RngStream& rng,
                          LinearGaussianSystem& sys, SmootherWs& ws, Matrix& out) {
  const int T_est = static_cast<int>(ystar.rows());
  const int n = static_cast<int>(ystar.cols());
  if (s.rows() != T_est || s.cols() != n) throw DimensionMismatch("indicator path shape");
  sys.y.resize(T_est);
  sys.Z.resize(T_est);
  sys.H.resize(T_est);
  const Matrix Z2 = 2.0 * Matrix::Identity(n, n);
  for (int t = 0; t < T_est; ++t) {
    if (sys.y[t].size() != n) sys.y[t].resize(n);
    sys.Z[t] = Z2;
    if (sys.H[t].rows() != n) sys.H[t].resize(n, n);
    sys.H[t].setZero();
    for (int i = 0; i < n; ++i) {
      const int c = s(t, i);
      if (c < 0 || c >= table.components())
        throw DimensionMismatch("indicator outside the mixture table");
      sys.y[t](i) = ystar(t, i) - table.mean(c);
      sys.H[t](i, i) = table.var(c);
    }
  }
  sys.state_innovation = W;
  sys.initial_mean = prior.logvol_mean;
  sys.initial_cov = prior.logvol_cov;
  kalman_filter(sys, ws.filt);
  simulation_smoother(ws.filt, sys.state_innovation, rng, ws.path);
  path_to_matrix(ws.path, out);
}

}  // namespace

Matrix log_squared_observations(const Matrix& residuals, const Matrix& alpha_path,
                                double offset) {
  const int T_est = static_cast<int>(residuals.rows());
  const int n = static_cast<int>(residuals.cols());
  if (alpha_path.rows() != T_est || alpha_path.cols() != n * (n - 1) / 2)
    throw DimensionMismatch("alpha path shape");
  Matrix ystar(T_est, n);
  for (int t = 0; t < T_est; ++t)
    for (int i = 0; i < n; ++i) {
      double w = residuals(t, i);
      for (int j = 0; j < i; ++j) w += alpha_path(t, alpha_index(i, j)) * residuals(t, j);
      ystar(t, i) = std::log(w * w + offset);
    }
  return ystar;
}

Matrix measurement_residuals(const Matrix& y, const Vector& x, const ModelConfig& cfg,
                             const Matrix& coef_path, const Vector& theta) {
  const CoefLayout layout(cfg.n, cfg.k, !cfg.constrained);
  LinearGaussianSystem sys;
  build_coef_observations(y, x, cfg, layout, cfg.constrained ? &theta : nullptr, sys);
  const int T_est = static_cast<int>(sys.y.size());
  if (coef_path.rows() != T_est || coef_path.cols() != layout.dim())
    throw DimensionMismatch("coefficient path shape");
  Matrix u(T_est, cfg.n);
  for (int t = 0; t < T_est; ++t)
    u.row(t) = (sys.y[t] - sys.Z[t] * coef_path.row(t).transpose()).transpose();
  return u;
}

Matrix draw_coefficients(const Matrix& y, const Vector& x, const ModelConfig& cfg,
                         const CovState& cov, const Hyperparams& hyper, const Vector& theta,
                         const PriorSpec& prior, RngStream& rng) {
  LinearGaussianSystem sys;
  SmootherWs ws;
  Matrix out;
  draw_coefficients_ws(y, x, cfg, cov, hyper, theta, prior, rng, sys, ws, out, true);
  return out;
}

Matrix draw_covariance_factors(const Matrix& residuals, const Matrix& h_path,
                               const Hyperparams& hyper, const PriorSpec& prior,
                               RngStream& rng) {
  LinearGaussianSystem sys;
  SmootherWs ws;
  Matrix out;
  draw_covariance_factors_ws(residuals, h_path, hyper, prior, rng, sys, ws, out);
  return out;
}

Eigen::MatrixXi draw_mixture_indicators(const Matrix& ystar, const Matrix& h_path,
                                        const MixtureTable& table, RngStream& rng) {
  table.validate();
  const int T_est = static_cast<int>(ystar.rows());
  const int n = static_cast<int>(ystar.cols());
  if (h_path.rows() != T_est || h_path.cols() != n)
    throw DimensionMismatch("h path shape");
  Eigen::MatrixXi s(T_est, n);
  const int C = table.components();
  Vector lw(C);
  for (int t = 0; t < T_est; ++t)
    for (int i = 0; i < n; ++i) {
      for (int c = 0; c < C; ++c) {
        if (table.prob(c) <= 0.0 || table.var(c) <= 0.0) {
          // degenerate components get probability zero unless the mean matches exactly
          lw(c) = (table.prob(c) > 0.0 && ystar(t, i) == 2.0 * h_path(t, i) + table.mean(c))
                      ? 0.0
                      : -std::numeric_limits<double>::infinity();
          continue;
        }
        const double r = ystar(t, i) - 2.0 * h_path(t, i) - table.mean(c);
        lw(c) = std::log(table.prob(c)) - 0.5 * std::log(2.0 * M_PI * table.var(c)) -
                0.5 * r * r / table.var(c);
      }
      s(t, i) = sample_categorical_log(lw, rng);
    }
  return s;
}

Matrix draw_volatilities(const Matrix& ystar, const Eigen::MatrixXi& indicators,
                         const Matrix& W, const MixtureTable& table, const PriorSpec& prior,
                         RngStream& rng) {
  LinearGaussianSystem sys;
  SmootherWs ws;
  Matrix out;
  draw_volatilities_ws(ystar, indicators, W, table, prior, rng, sys, ws, out);
  return out;
}

IwPrior iw_posterior(const IwPrior& prior, const Matrix& path) {
  const int T = static_cast<int>(path.rows());
  const int d = static_cast<int>(path.cols());
  if (prior.scale.rows() != d) throw DimensionMismatch("iw_posterior: block dimension");
  IwPrior post;
  post.scale = prior.scale;
  post.dof = prior.dof + std::max(0, T - 1);
  for (int t = 1; t < T; ++t) {
    const auto d_t = path.row(t) - path.row(t - 1);
    post.scale.noalias() += d_t.transpose() * d_t;
  }
  post.scale = symmetrize(post.scale);
  return post;
}

Hyperparams draw_hyperparams(const Matrix& coef_path, const Matrix& alpha_path,
                             const Matrix& h_path, const ModelConfig& cfg,
                             const PriorSpec& prior, RngStream& rng) {
  const CoefLayout layout(cfg.n, cfg.k, !cfg.constrained);
  const int cb = layout.cb_dim();
  const int dd = layout.d_dim();
  if (coef_path.cols() != layout.dim()) throw DimensionMismatch("coefficient path width");
  Hyperparams hyper;
  {
    const IwPrior post = iw_posterior(prior.q, coef_path.leftCols(cb));
    hyper.Q = sample_inverse_wishart(post.scale, post.dof, rng);
  }
  {
    const IwPrior post = iw_posterior(prior.qtilde, coef_path.rightCols(dd));
    hyper.Qtilde = sample_inverse_wishart(post.scale, post.dof, rng);
  }
  {
    int pos = 0;
    for (int i = 1; i < cfg.n; ++i) {
      const IwPrior post = iw_posterior(prior.g[i - 1], alpha_path.middleCols(pos, i));
      hyper.G.push_back(sample_inverse_wishart(post.scale, post.dof, rng));
      pos += i;
    }
  }
  {
    const IwPrior post = iw_posterior(prior.w, h_path);
    hyper.W = sample_inverse_wishart(post.scale, post.dof, rng);
  }
  return hyper;
}

ElasticityState draw_elasticity(const Matrix& y, const Vector& x, const ModelConfig& cfg,
                                const Matrix& coef_path, const CovState& cov,
                                const PriorSpec& prior, RngStream& rng) {
  const int n = cfg.n;
  const int k = cfg.k;
  const CoefLayout layout(n, k, /*includes_d0=*/false);
  if (coef_path.cols() != layout.dim())
    throw DimensionMismatch("draw_elasticity expects the constrained coefficient layout");
  const int T = static_cast<int>(y.rows());
  const int T_est = T - cfg.t0;

  const Matrix U0_L = cholesky_lower(prior.theta_cov);
  Matrix U0_inv = symmetrize(U0_L.transpose().triangularView<Eigen::Upper>().solve(
      Matrix(U0_L.triangularView<Eigen::Lower>().solve(Matrix::Identity(n, n)))));

  Matrix precision = U0_inv;
  Vector shift = U0_inv * prior.theta_mean;
  for (int idx = 0; idx < T_est; ++idx) {
    const int t = cfg.t0 + idx;
    const auto state = coef_path.row(idx).transpose();
    Matrix M = Matrix::Identity(n, n);
    for (int j = 1; j <= k; ++j) M -= layout.b_block(state, j);
    const Matrix C = x(t) * M;
    Vector ytilde = y.row(t).transpose() - layout.intercept(state);
    for (int j = 1; j <= k; ++j)
      ytilde.noalias() -= layout.b_block(state, j) * y.row(t - j).transpose();
    for (int i = 1; i <= k; ++i) ytilde -= layout.d_block(state, i) * (x(t - i) - x(t));

    const Matrix H = observation_covariance(cov.alpha_path.row(idx), cov.h_path.row(idx), n);
    const Matrix Lh = cholesky_lower(H);
    const Matrix Hinv_C = Lh.transpose().triangularView<Eigen::Upper>().solve(
        Matrix(Lh.triangularView<Eigen::Lower>().solve(C)));
    precision.noalias() += C.transpose() * Hinv_C;
    const Vector Hinv_y = Lh.transpose().triangularView<Eigen::Upper>().solve(
        Vector(Lh.triangularView<Eigen::Lower>().solve(ytilde)));
    shift.noalias() += C.transpose() * Hinv_y;
  }
  const Matrix Lp = cholesky_lower(symmetrize(precision));
  const Matrix U_j = symmetrize(Lp.transpose().triangularView<Eigen::Upper>().solve(
      Matrix(Lp.triangularView<Eigen::Lower>().solve(Matrix::Identity(n, n)))));
  ElasticityState state;
  state.prior_mean = prior.theta_mean;
  state.prior_cov = prior.theta_cov;
  state.post_cov = U_j;
  state.post_mean = U_j * shift;
  state.theta = sample_mvn(state.post_mean, state.post_cov, rng);
  return state;
}

namespace {

bool long_run_ok(const Matrix& coef_path, const CoefLayout& layout, double cond_threshold) {
  const int n = layout.n();
  Matrix M(n, n);
  for (int t = 0; t < coef_path.rows(); ++t) {
    M.setIdentity();
    const auto state = coef_path.row(t).transpose();
    for (int j = 1; j <= layout.k(); ++j) M -= layout.b_block(state, j);
    if (!(condition_number(M) < cond_threshold)) return false;
  }
  return true;
}

}  // namespace

Chain run_chain(const Dataset& data, const ModelConfig& cfg, const PriorSpec& prior,
                RngStream& rng, const ProgressFn& progress) {
  cfg.validate();
  const Matrix& y = data.y;
  const Vector& x = data.x;
  const int T = static_cast<int>(y.rows());
  if (static_cast<int>(y.cols()) != cfg.n)
    throw DimensionMismatch("dataset endogenous dimension does not match the model");
  if (T <= cfg.t0 + cfg.k)
    throw InsufficientTrainingData("dataset length " + std::to_string(T) +
                                   " must exceed t0 + k = " + std::to_string(cfg.t0 + cfg.k));
  const int T_est = T - cfg.t0;
  const int n = cfg.n;
  const CoefLayout layout(n, cfg.k, !cfg.constrained);
  const MixtureTable table = MixtureTable::ksc();

  Chain chain;
  chain.cfg = cfg;
  chain.data_length = T;

  // Initial values: prior means for the paths, prior-centered hyperparameters.
  Matrix coef = prior.coef_mean.transpose().replicate(T_est, 1);
  CovState cov;
  cov.alpha_path = prior.alpha_mean.transpose().replicate(T_est, 1);
  cov.h_path = prior.logvol_mean.transpose().replicate(T_est, 1);
  auto iw_center = [](const IwPrior& p) {
    const double denom = p.dof - static_cast<double>(p.scale.rows()) - 1.0;
    return denom > 0.5 ? Matrix(p.scale / denom) : p.scale;
  };
  Hyperparams hyper;
  hyper.Q = iw_center(prior.q);
  hyper.Qtilde = iw_center(prior.qtilde);
  for (const auto& gb : prior.g) hyper.G.push_back(iw_center(gb));
  hyper.W = iw_center(prior.w);
  Vector theta = prior.theta_mean;
  Eigen::MatrixXi s = Eigen::MatrixXi::Zero(T_est, n);
  {
    int argmax = 0;
    for (int c = 1; c < table.components(); ++c)
      if (table.prob(c) > table.prob(argmax)) argmax = c;
    s.setConstant(argmax);
  }
  ElasticityState elast;
  elast.theta = theta;
  elast.prior_mean = prior.theta_mean;
  elast.prior_cov = prior.theta_cov;
  elast.post_mean = prior.theta_mean;
  elast.post_cov = prior.theta_cov;

  LinearGaussianSystem coef_sys, a_sys, vol_sys;
  SmootherWs coef_ws, a_ws, vol_ws;
  Matrix u(T_est, n), ystar(T_est, n), h_new, coef_new, alpha_new;

  // Rolling window for the divergence diagnostic.
  constexpr int kWindow = 500;
  std::vector<char> hit_window(kWindow, 0);
  int window_hits = 0;

  const int total = cfg.mcmc.total_iterations();
  chain.records.reserve(cfg.mcmc.retained);

  for (int iter = 0; iter < total; ++iter) {
    // Observations for the current theta (theta only changes at sweep end).
    build_coef_observations(y, x, cfg, layout, cfg.constrained ? &theta : nullptr, coef_sys);
    for (int t = 0; t < T_est; ++t)
      u.row(t) = (coef_sys.y[t] - coef_sys.Z[t] * coef.row(t).transpose()).transpose();

    // 1. volatilities given previous indicators and residuals
    ystar = log_squared_observations(u, cov.alpha_path, cfg.vol_offset);
    draw_volatilities_ws(ystar, s, hyper.W, table, prior, rng, vol_sys, vol_ws, cov.h_path);

    // 2. coefficient path, guarded against near-singular long-run draws
    {
      bool ok = false;
      for (int attempt = 0; attempt < 10; ++attempt) {
        draw_coefficients_ws(y, x, cfg, cov, hyper, theta, prior, rng, coef_sys, coef_ws,
                             coef_new, /*rebuild_observations=*/false);
        if (long_run_ok(coef_new, layout, cfg.cond_threshold)) {
          ok = true;
          if (attempt > 0) {
            chain.diag.redraw_attempts += attempt;
            chain.diag.iterations_with_redraw += 1;
          }
          const char hit = attempt > 0 ? 1 : 0;
          window_hits += hit - hit_window[iter % kWindow];
          hit_window[iter % kWindow] = hit;
          if (window_hits > kWindow / 10)
            throw ChainDiverged("more than 10% of draws in a " + std::to_string(kWindow) +
                                "-iteration window hit the long-run singularity guard");
          break;
        }
      }
      if (!ok)
        throw ChainDiverged("coefficient draw hit the long-run singularity guard 10 times");
      coef = coef_new;
    }
    for (int t = 0; t < T_est; ++t)
      u.row(t) = (coef_sys.y[t] - coef_sys.Z[t] * coef.row(t).transpose()).transpose();

    // 3. covariance factors given the new residuals
    draw_covariance_factors_ws(u, cov.h_path, hyper, prior, rng, a_sys, a_ws, cov.alpha_path);

    // 4. innovation covariances from the sampled increments
    hyper = draw_hyperparams(coef, cov.alpha_path, cov.h_path, cfg, prior, rng);

    // 5. mixture indicators given the new residuals and volatilities
    ystar = log_squared_observations(u, cov.alpha_path, cfg.vol_offset);
    s = draw_mixture_indicators(ystar, cov.h_path, table, rng);

    // 6. long-run multiplier
    if (cfg.constrained) {
      elast = draw_elasticity(y, x, cfg, coef, cov, prior, rng);
      theta = elast.theta;
    }

    if (iter >= cfg.mcmc.burn_in && (iter - cfg.mcmc.burn_in) % cfg.mcmc.thin == 0) {
      ChainRecord rec;
      rec.iteration = iter + 1;
      rec.theta = theta;
      rec.coef_path = coef;
      rec.alpha_path = cov.alpha_path;
      rec.h_path = cov.h_path;
      rec.hyper = hyper;
      rec.indicators = s;
      chain.records.push_back(std::move(rec));
      if (static_cast<int>(chain.records.size()) == cfg.mcmc.retained) {
        if (progress) progress(iter + 1, total);
        break;
      }
    }
    if (progress && (iter + 1) % 1000 == 0) progress(iter + 1, total);
  }
  chain.diag.elasticity = elast;
  return chain;
}

}  // namespace tvpvarx
