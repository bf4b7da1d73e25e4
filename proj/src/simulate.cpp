#include "tvpvarx/simulate.hpp"

#include <cmath>

namespace tvpvarx {

namespace {
constexpr double kOverflowGuard = 1e8;
}

SimulatedData simulate_dgp(const DgpSpec& spec, int T, RngStream& rng) {
  const int n = spec.n;
  const int k = spec.k;
  if (n < 1 || k < 1 || T < 1) throw ConfigError("simulate_dgp: n, k, T must be positive");
  const CoefLayout layout(n, k, /*includes_d0=*/true);
  const int a_dim = n * (n - 1) / 2;

  const Vector c0 = spec.c0.size() ? spec.c0 : Vector::Zero(n);
  const Vector d00 = spec.D00.size() ? spec.D00 : Vector::Zero(n);
  const Vector alpha0 = spec.alpha0.size() ? spec.alpha0 : Vector::Zero(a_dim);
  const Vector h0 = spec.h0.size() ? spec.h0 : Vector::Constant(n, std::log(0.01));
  if (c0.size() != n || alpha0.size() != a_dim || h0.size() != n)
    throw DimensionMismatch("simulate_dgp: initial value dimensions");
  if (spec.theta && spec.theta->size() != n)
    throw DimensionMismatch("simulate_dgp: theta dimension");

  TruePaths truth;
  truth.coef.resize(T, layout.dim());
  truth.alpha.resize(T, a_dim);
  truth.h.resize(T, n);
  truth.x.resize(T);
  truth.y.resize(T, n);

  // Exogenous log-differences first (fixed draw order keeps runs reproducible).
  if (spec.x_path) {
    if (spec.x_path->size() != T) throw DimensionMismatch("simulate_dgp: x path length");
    truth.x = *spec.x_path;
  } else {
    for (int t = 0; t < T; ++t) truth.x(t) = spec.x_drift + spec.x_sd * rng.normal();
  }

  // Parameter paths.
  if (spec.coef_path) {
    if (spec.coef_path->rows() != T || spec.coef_path->cols() != layout.dim())
      throw DimensionMismatch("simulate_dgp: coefficient path shape");
    truth.coef = *spec.coef_path;
  }
  if (spec.alpha_path) {
    if (spec.alpha_path->rows() != T || spec.alpha_path->cols() != a_dim)
      throw DimensionMismatch("simulate_dgp: alpha path shape");
    truth.alpha = *spec.alpha_path;
  }
  if (spec.h_path) {
    if (spec.h_path->rows() != T || spec.h_path->cols() != n)
      throw DimensionMismatch("simulate_dgp: h path shape");
    truth.h = *spec.h_path;
  }

  Vector state(layout.dim());
  {
    // initial flat state in the full layout
    for (int e = 0; e < n; ++e) state(layout.c_index(e)) = c0(e);
    for (int j = 1; j <= k; ++j) {
      const Matrix Bj = static_cast<int>(spec.B0.size()) >= j ? spec.B0[j - 1] : Matrix::Zero(n, n);
      if (Bj.rows() != n || Bj.cols() != n) throw DimensionMismatch("simulate_dgp: B0 shape");
      for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) state(layout.b_index(j, r, c)) = Bj(r, c);
    }
    for (int e = 0; e < n; ++e) state(layout.d_index(0, e)) = d00(e);
    for (int i = 1; i <= k; ++i) {
      const Vector Di =
          static_cast<int>(spec.D_tail0.size()) >= i ? spec.D_tail0[i - 1] : Vector::Zero(n);
      if (Di.size() != n) throw DimensionMismatch("simulate_dgp: D_tail0 shape");
      for (int e = 0; e < n; ++e) state(layout.d_index(i, e)) = Di(e);
    }
  }
  Vector alpha = alpha0;
  Vector h = h0;

  Matrix y_hist(k, n);  // chronological: row k-1 is the most recent lag
  y_hist.setZero();
  if (spec.y_init.size()) {
    if (spec.y_init.rows() != k || spec.y_init.cols() != n)
      throw DimensionMismatch("simulate_dgp: y_init shape");
    y_hist = spec.y_init;
  }

  const int cb = layout.cb_dim();
  for (int t = 0; t < T; ++t) {
    if (!spec.coef_path) {
      if (t > 0) {
        for (int i = 0; i < n; ++i) state(i) += spec.sd_intercept * rng.normal();
        for (int i = n; i < cb; ++i) state(i) += spec.sd_coef * rng.normal();
        for (int i = cb; i < layout.dim(); ++i) state(i) += spec.sd_dcoef * rng.normal();
      }
      if (spec.theta) {
        // keep the constraint exact at every step
        std::vector<Vector> tail;
        for (int i = 1; i <= k; ++i) tail.push_back(layout.d_block(state, i));
        const Vector d0 = implied_d0(*spec.theta, layout.b_blocks(state), tail);
        for (int e = 0; e < n; ++e) state(layout.d_index(0, e)) = d0(e);
      }
      truth.coef.row(t) = state.transpose();
    } else {
      state = truth.coef.row(t).transpose();
    }
    if (!spec.alpha_path) {
      if (t > 0)
        for (int i = 0; i < a_dim; ++i) alpha(i) += spec.sd_alpha * rng.normal();
      truth.alpha.row(t) = alpha.transpose();
    } else {
      alpha = truth.alpha.row(t).transpose();
    }
    if (!spec.h_path) {
      if (t > 0)
        for (int i = 0; i < n; ++i) h(i) += spec.sd_h * rng.normal();
      truth.h.row(t) = h.transpose();
    } else {
      h = truth.h.row(t).transpose();
    }

    // u_t = A^-1 Sigma e
    Vector e(n);
    for (int i = 0; i < n; ++i) e(i) = std::exp(h(i)) * rng.normal();
    const Matrix A = unit_lower_from_alpha(alpha, n);
    const Vector u = A.triangularView<Eigen::Lower>().solve(e);

    Vector y_t = layout.intercept(state) + u;
    for (int j = 1; j <= k; ++j)
      y_t.noalias() += layout.b_block(state, j) * y_hist.row(k - j).transpose();
    y_t.noalias() += layout.d_block(state, 0) * truth.x(t);
    for (int i = 1; i <= k; ++i) {
      const double x_lag = (t - i >= 0) ? truth.x(t - i) : 0.0;
      y_t.noalias() += layout.d_block(state, i) * x_lag;
    }
    if (!(y_t.cwiseAbs().maxCoeff() < kOverflowGuard))
      throw ExplosiveSimulation("simulated log-difference exceeded 1e8 at step " +
                                std::to_string(t));
    truth.y.row(t) = y_t.transpose();
    if (k > 1) {
      for (int r = 0; r < k - 1; ++r) y_hist.row(r) = y_hist.row(r + 1);
    }
    y_hist.row(k - 1) = y_t.transpose();
  }

  // Assemble positive level series: levels[0] = base, levels[t+1] = levels[t] e^{y_t}.
  Matrix levels(T + 1, n + 1);
  levels.row(0).setConstant(spec.base_level);
  for (int t = 0; t < T; ++t) {
    for (int c = 0; c < n; ++c) levels(t + 1, c) = levels(t, c) * std::exp(truth.y(t, c));
    levels(t + 1, n) = levels(t, n) * std::exp(truth.x(t));
  }
  std::vector<QuarterDate> dates(T + 1);
  dates[0] = spec.start_date;
  for (int t = 1; t <= T; ++t) dates[t] = dates[t - 1].next();
  std::vector<std::string> names;
  for (int i = 1; i <= n; ++i) names.push_back("endo" + std::to_string(i));
  names.push_back("exo");

  SimulatedData out;
  out.truth = std::move(truth);
  out.data = Dataset::from_levels(std::move(dates), std::move(levels), std::move(names));
  return out;
}

}  // namespace tvpvarx
