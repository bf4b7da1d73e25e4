#include "tvpvarx/benchmarks.hpp"

#include <cmath>

namespace tvpvarx {

ConstantVarx fit_constant_varx(const Matrix& y, const Vector& x, int k) {
  const OlsFit fit = fit_varx_ols(y, x, k);
  ConstantVarx model;
  model.n = fit.n;
  model.k = k;
  model.coef = fit.state_vector(CoefLayout(fit.n, k, true));
  model.resid_cov = fit.sigma;
  return model;
}

ForecastSet forecast_constant_varx(const ConstantVarx& model, const Dataset& data,
                                   int origin_idx, int horizon) {
  const int T = data.size();
  const int n = model.n;
  const int k = model.k;
  if (origin_idx < k || origin_idx >= T)
    throw ConfigError("forecast origin outside the data range");
  if (origin_idx + horizon > T - 1)
    throw ExoPathTooShort("data covers log-difference indices up to " + std::to_string(T - 1) +
                          ", forecast needs " + std::to_string(origin_idx + horizon));
  const CoefLayout layout = model.layout();

  ForecastSet fs;
  fs.origin = origin_idx;
  fs.horizon = horizon;
  fs.point.resize(horizon, n);
  fs.realized.resize(horizon, n);

  Matrix lags(k, n);
  for (int j = 1; j <= k; ++j) lags.row(k - j) = data.y.row(origin_idx + 1 - j);
  Vector cum = Vector::Zero(n);
  for (int step = 1; step <= horizon; ++step) {
    const int t = origin_idx + step;
    Vector mean = layout.intercept(model.coef);
    for (int j = 1; j <= k; ++j)
      mean.noalias() += layout.b_block(model.coef, j) * lags.row(k - j).transpose();
    for (int i = 0; i <= k; ++i) mean.noalias() += layout.d_block(model.coef, i) * data.x(t - i);
    cum += mean;
    for (int v = 0; v < n; ++v)
      fs.point(step - 1, v) = data.levels(origin_idx + 1, v) * std::exp(cum(v));
    for (int v = 0; v < n; ++v) {
      const int row = origin_idx + step + 1;
      fs.realized(step - 1, v) = row < data.levels.rows() ? data.levels(row, v) : quiet_nan();
    }
    if (k > 1)
      for (int r = 0; r < k - 1; ++r) lags.row(r) = lags.row(r + 1);
    lags.row(k - 1) = mean.transpose();
  }
  return fs;
}

namespace {

Dataset truncate_levels(const Dataset& data, int level_rows) {
  return Dataset::from_levels(
      std::vector<QuarterDate>(data.dates.begin(), data.dates.begin() + level_rows),
      data.levels.topRows(level_rows), data.names);
}

}  // namespace

BenchmarkResult run_benchmark_suite(const Dataset& data, const ModelConfig& cfg,
                                    const BenchmarkOptions& options) {
  cfg.validate();
  const int T = data.size();
  const int h = options.horizons;
  if (h < 1) throw ConfigError("benchmark: horizons must be >= 1");
  const int start = options.eval_start >= 0 ? options.eval_start : cfg.t0;
  const int end = options.eval_end >= 0 ? options.eval_end : T - 1 - h;
  if (start < cfg.t0 || start < cfg.k)
    throw ConfigError("benchmark: evaluation start before the estimated range");
  if (end > T - 1 - h)
    throw ConfigError("benchmark: evaluation end leaves no realized values at the horizon");
  if (end < start) throw NoRealizedValues("empty evaluation window");

  BenchmarkResult result;
  result.variables.assign(data.names.begin(), data.names.end() - 1);
  result.horizons = h;
  for (int o = start; o <= end; ++o) result.origins.push_back(o);

  ModelConfig cfg_con = cfg;
  cfg_con.constrained = true;
  ModelConfig cfg_unc = cfg;
  cfg_unc.constrained = false;

  if (!options.reestimate) {
    RngStream rng_con(cfg.seed, 1), rng_unc(cfg.seed, 2);
    RngStream rng_fc_con(cfg.seed, 3), rng_fc_unc(cfg.seed, 4);
    const PriorSpec prior_con =
        calibrate(data.y.topRows(cfg.t0), data.x.head(cfg.t0), cfg_con, options.priors);
    const PriorSpec prior_unc =
        calibrate(data.y.topRows(cfg.t0), data.x.head(cfg.t0), cfg_unc, options.priors);
    const Chain chain_con = run_chain(data, cfg_con, prior_con, rng_con);
    const Chain chain_unc = run_chain(data, cfg_unc, prior_unc, rng_unc);
    const ConstantVarx varx = fit_constant_varx(data.y, data.x, cfg.k);
    result.constrained = evaluate_forecasts(
        result.origins,
        [&](int o) { return forecast(chain_con, data, o, h, ForecastMode::Frozen, rng_fc_con); },
        result.variables);
    result.constant_var = evaluate_forecasts(
        result.origins, [&](int o) { return forecast_constant_varx(varx, data, o, h); },
        result.variables);
    result.unconstrained = evaluate_forecasts(
        result.origins,
        [&](int o) { return forecast(chain_unc, data, o, h, ForecastMode::Frozen, rng_fc_unc); },
        result.variables);
  } else {
    auto estimated_forecaster = [&](const ModelConfig& mode_cfg, std::uint64_t stream_base) {
      return [&, mode_cfg, stream_base](int o) {
        const Dataset sub = truncate_levels(data, o + 2);  // log-diffs up to index o
        RngStream rng_chain(cfg.seed, stream_base + static_cast<std::uint64_t>(o));
        RngStream rng_fc(cfg.seed, stream_base + 500000 + static_cast<std::uint64_t>(o));
        const PriorSpec prior =
            calibrate(sub.y.topRows(cfg.t0), sub.x.head(cfg.t0), mode_cfg, options.priors);
        const Chain chain = run_chain(sub, mode_cfg, prior, rng_chain);
        return forecast(chain, data, o, h, ForecastMode::Frozen, rng_fc);
      };
    };
    result.constrained =
        evaluate_forecasts(result.origins, estimated_forecaster(cfg_con, 1000000), result.variables);
    result.constant_var = evaluate_forecasts(
        result.origins,
        [&](int o) {
          const Dataset sub = truncate_levels(data, o + 2);
          return forecast_constant_varx(fit_constant_varx(sub.y, sub.x, cfg.k), data, o, h);
        },
        result.variables);
    result.unconstrained =
        evaluate_forecasts(result.origins, estimated_forecaster(cfg_unc, 3000000), result.variables);
  }
  return result;
}

ErrorTable evaluate_forecasts(const std::vector<int>& origins, const ForecasterFn& forecaster,
                              const std::vector<std::string>& variables) {
  std::vector<ForecastSet> sets;
  sets.reserve(origins.size());
  for (int o : origins) sets.push_back(forecaster(o));
  return error_table(sets, variables);
}

}  // namespace tvpvarx
