#include "tvpvarx/analysis.hpp"

#include <algorithm>
#include <cmath>

namespace tvpvarx {

double sample_quantile(std::vector<double>& values, double q) {
  if (values.empty()) throw DataError("quantile of an empty sample");
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = static_cast<std::size_t>(std::ceil(pos));
  const double w = pos - static_cast<double>(lo);
  return (1.0 - w) * values[lo] + w * values[hi];
}

Matrix impulse_response(const std::vector<Matrix>& B, const std::vector<Vector>& D_all,
                        double shock, int horizons) {
  const int k = static_cast<int>(B.size());
  if (static_cast<int>(D_all.size()) != k + 1)
    throw DimensionMismatch("impulse_response: need k+1 exogenous coefficient vectors");
  const int n = static_cast<int>(D_all[0].size());
  const double lam = std::log(1.0 + shock);
  Matrix delta(horizons, n);  // delta y at each horizon
  Matrix cum(horizons, n);
  for (int h = 1; h <= horizons; ++h) {
    Vector r = Vector::Zero(n);
    if (h - 1 <= k) r = lam * D_all[h - 1];
    for (int l = 1; l <= std::min(k, h - 1); ++l)
      r.noalias() += B[l - 1] * delta.row(h - 1 - l).transpose();
    delta.row(h - 1) = r.transpose();
    cum.row(h - 1) = (h == 1 ? r : Vector(r + cum.row(h - 2).transpose())).transpose();
  }
  return cum;
}

Matrix impulse_response(const ChainRecord& record, const CoefLayout& layout, int origin_idx,
                        double shock, int horizons) {
  if (origin_idx < 0 || origin_idx >= record.coef_path.rows())
    throw ConfigError("impulse_response: origin outside the estimated range");
  const auto state = record.coef_path.row(origin_idx).transpose();
  return impulse_response(layout.b_blocks(state), layout.d_all(state, record.theta), shock,
                          horizons);
}

double companion_spectral_radius(const std::vector<Matrix>& B) {
  const int k = static_cast<int>(B.size());
  const int n = static_cast<int>(B[0].rows());
  Matrix F = Matrix::Zero(n * k, n * k);
  for (int j = 0; j < k; ++j) F.block(0, j * n, n, n) = B[j];
  if (k > 1) F.block(n, 0, n * (k - 1), n * (k - 1)).setIdentity();
  const Eigen::EigenSolver<Matrix> es(F, /*computeEigenvectors=*/false);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

IrfGrid irf_grid(const Chain& chain, const std::vector<int>& origins, double shock,
                 int horizons, const std::vector<double>& quantiles,
                 const std::vector<std::string>& variable_names) {
  if (chain.records.empty()) throw EmptyChain();
  const CoefLayout layout = chain.layout();
  const int n = chain.cfg.n;
  const int ndraws = static_cast<int>(chain.records.size());

  IrfGrid grid;
  grid.origins = origins;
  grid.horizons = horizons;
  grid.quantiles = quantiles;
  grid.variables = variable_names;
  if (grid.variables.empty())
    for (int v = 1; v <= n; ++v) grid.variables.push_back("endo" + std::to_string(v));
  grid.values.assign(static_cast<std::size_t>(n) * origins.size() * horizons * quantiles.size(),
                     0.0);

  // responses[d] is K x n per origin
  std::vector<double> sample(ndraws);
  for (std::size_t o = 0; o < origins.size(); ++o) {
    std::vector<Matrix> responses;
    responses.reserve(ndraws);
    for (const auto& rec : chain.records)
      responses.push_back(impulse_response(rec, layout, origins[o], shock, horizons));
    for (int v = 0; v < n; ++v)
      for (int h = 0; h < horizons; ++h) {
        for (int d = 0; d < ndraws; ++d) sample[d] = responses[d](h, v);
        for (std::size_t q = 0; q < quantiles.size(); ++q) {
          std::vector<double> work = sample;
          grid.values[((static_cast<std::size_t>(v) * origins.size() + o) * horizons + h) *
                          quantiles.size() +
                      q] = sample_quantile(work, quantiles[q]);
        }
      }
  }
  return grid;
}

GrowthSummary long_run_growth(const Chain& chain, int origin_idx,
                              const std::vector<double>& quantiles) {
  if (chain.records.empty()) throw EmptyChain();
  const CoefLayout layout = chain.layout();
  const int n = chain.cfg.n;
  std::vector<std::vector<double>> samples(n);
  int excluded = 0;
  for (const auto& rec : chain.records) {
    const auto state = rec.coef_path.row(origin_idx).transpose();
    Matrix M = Matrix::Identity(n, n);
    for (int j = 1; j <= chain.cfg.k; ++j) M -= layout.b_block(state, j);
    if (!(condition_number(M) < chain.cfg.cond_threshold)) {
      ++excluded;
      continue;
    }
    const Vector g = 400.0 * M.fullPivLu().solve(layout.intercept(state));
    for (int v = 0; v < n; ++v) samples[v].push_back(g(v));
  }
  if (samples[0].empty())
    throw NearSingularLongRun("all " + std::to_string(excluded) +
                              " draws failed the long-run singularity guard");
  GrowthSummary out;
  out.probs = quantiles;
  out.excluded_draws = excluded;
  out.quantiles.resize(n, static_cast<int>(quantiles.size()));
  for (int v = 0; v < n; ++v)
    for (std::size_t q = 0; q < quantiles.size(); ++q) {
      std::vector<double> work = samples[v];
      out.quantiles(v, static_cast<int>(q)) = sample_quantile(work, quantiles[q]);
    }
  return out;
}

namespace {

// One draw-level forecast path of log-differences; returns horizon x n.
Matrix forecast_logdiff_path(const ChainRecord& rec, const CoefLayout& layout,
                             const ModelConfig& cfg, const Matrix& y, const Vector& x,
                             int origin, int horizon, ForecastMode mode, RngStream& rng) {
  const int n = cfg.n;
  const int k = cfg.k;
  const int path_idx = origin - cfg.t0;
  Vector state = rec.coef_path.row(path_idx).transpose();
  Vector alpha = rec.alpha_path.row(path_idx).transpose();
  Vector h_log = rec.h_path.row(path_idx).transpose();

  Matrix lags(k, n);  // chronological, row k-1 most recent
  for (int j = 1; j <= k; ++j) lags.row(k - j) = y.row(origin + 1 - j);

  Matrix out(horizon, n);
  const int cb = layout.cb_dim();
  const int dd = layout.d_dim();
  for (int step = 1; step <= horizon; ++step) {
    if (mode == ForecastMode::Walk) {
      state.head(cb) += sample_mvn(Vector::Zero(cb), rec.hyper.Q, rng);
      state.tail(dd) += sample_mvn(Vector::Zero(dd), rec.hyper.Qtilde, rng);
      int pos = 0;
      for (int i = 1; i < n; ++i) {
        alpha.segment(pos, i) += sample_mvn(Vector::Zero(i), rec.hyper.G[i - 1], rng);
        pos += i;
      }
      h_log += sample_mvn(Vector::Zero(n), rec.hyper.W, rng);
    }
    const int t = origin + step;
    Vector mean = layout.intercept(state);
    for (int j = 1; j <= k; ++j)
      mean.noalias() += layout.b_block(state, j) * lags.row(k - j).transpose();
    const auto D = layout.d_all(state, rec.theta);
    for (int i = 0; i <= k; ++i) mean.noalias() += D[i] * x(t - i);
    const Matrix H = observation_covariance(alpha, h_log, n);
    const Vector draw = sample_mvn(mean, H, rng);
    out.row(step - 1) = draw.transpose();
    if (k > 1)
      for (int r = 0; r < k - 1; ++r) lags.row(r) = lags.row(r + 1);
    lags.row(k - 1) = draw.transpose();
  }
  return out;
}

}  // namespace

ForecastSet forecast(const Chain& chain, const Dataset& data, int origin_idx, int horizon,
                     ForecastMode mode, RngStream& rng) {
  if (chain.records.empty()) throw EmptyChain();
  const int T = data.size();
  if (origin_idx < chain.cfg.t0 || origin_idx >= chain.data_length)
    throw ConfigError("forecast origin outside the estimated range");
  if (origin_idx + horizon > T - 1)
    throw ExoPathTooShort("data covers log-difference indices up to " + std::to_string(T - 1) +
                          ", forecast needs " + std::to_string(origin_idx + horizon));
  const CoefLayout layout = chain.layout();
  const int n = chain.cfg.n;
  const int ndraws = static_cast<int>(chain.records.size());

  ForecastSet fs;
  fs.origin = origin_idx;
  fs.horizon = horizon;
  fs.level_draws.assign(horizon, Matrix(ndraws, n));
  fs.point.resize(horizon, n);
  fs.realized.resize(horizon, n);

  for (int d = 0; d < ndraws; ++d) {
    const Matrix path = forecast_logdiff_path(chain.records[d], layout, chain.cfg, data.y,
                                              data.x, origin_idx, horizon, mode, rng);
    Vector cum = Vector::Zero(n);
    for (int step = 0; step < horizon; ++step) {
      cum += path.row(step).transpose();
      for (int v = 0; v < n; ++v)
        fs.level_draws[step](d, v) = data.levels(origin_idx + 1, v) * std::exp(cum(v));
    }
  }
  std::vector<double> work(ndraws);
  for (int step = 0; step < horizon; ++step)
    for (int v = 0; v < n; ++v) {
      for (int d = 0; d < ndraws; ++d) work[d] = fs.level_draws[step](d, v);
      std::vector<double> w = work;
      fs.point(step, v) = sample_quantile(w, 0.5);
      const int realized_row = origin_idx + 2 + step;  // level row of log-diff index origin+1+step
      fs.realized(step, v) = realized_row < data.levels.rows() ? data.levels(realized_row, v)
                                                               : quiet_nan();
    }
  return fs;
}

ErrorTable error_table(const std::vector<ForecastSet>& sets,
                       const std::vector<std::string>& variables) {
  if (sets.empty()) throw NoRealizedValues("no forecast origins supplied");
  const int horizon = sets.front().horizon;
  const int n = static_cast<int>(sets.front().point.cols());
  ErrorTable table;
  table.variables = variables;
  table.horizons = horizon;
  table.mean.resize(n, horizon);
  table.sd.resize(n, horizon);
  for (int v = 0; v < n; ++v)
    for (int h = 0; h < horizon; ++h) {
      std::vector<double> errs;
      for (const auto& fs : sets) {
        if (fs.horizon != horizon || fs.point.cols() != n)
          throw DimensionMismatch("error_table: inconsistent forecast sets");
        const double realized = fs.realized(h, v);
        if (std::isfinite(realized)) errs.push_back(std::abs(fs.point(h, v) - realized));
      }
      if (errs.empty())
        throw NoRealizedValues("no realized values at step " + std::to_string(h + 1));
      double mean = 0.0;
      for (double e : errs) mean += e;
      mean /= static_cast<double>(errs.size());
      double ss = 0.0;
      for (double e : errs) ss += (e - mean) * (e - mean);
      table.mean(v, h) = mean;
      table.sd(v, h) = errs.size() > 1 ? std::sqrt(ss / static_cast<double>(errs.size() - 1)) : 0.0;
    }
  return table;
}

}  // namespace tvpvarx
