// Command line surface: estimate | forecast | irf | growth | benchmark | simulate.
// Every configuration key can live in a flat key=value config file (--config)
// and is overridable by the same-named flag. Exit codes: 0 success, 2 config
// error, 3 data error, 4 numerical failure.

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <atomic>
#include <thread>

#include "tvpvarx/benchmarks.hpp"
#include "tvpvarx/chainio.hpp"
#include "tvpvarx/runconfig.hpp"
#include "tvpvarx/simulate.hpp"

namespace fs = std::filesystem;
using namespace tvpvarx;

namespace {

std::string out_path(const RunConfig& cfg, const std::string& name) {
  fs::create_directories(cfg.out);
  return (fs::path(cfg.out) / name).string();
}

Dataset load_data(const RunConfig& cfg) {
  if (cfg.data.empty()) throw ConfigError("no data file given (--data)");
  ColumnMapping mapping;
  if (!cfg.endo.empty()) {
    std::stringstream ss(cfg.endo);
    std::string item;
    while (std::getline(ss, item, ',')) mapping.endogenous.push_back(item);
  }
  mapping.exogenous = cfg.exo;
  return ingest_csv(cfg.data, mapping);
}

void progress_line(int iter, int total) {
  std::cerr << "\r  sweep " << iter << "/" << total << std::flush;
  if (iter == total) std::cerr << '\n';
}

int run_estimate(const RunConfig& cfg) {
  if (cfg.mode == "constant-var")
    throw ConfigError("estimate runs the Gibbs sampler; use `benchmark` for constant-var");
  const Dataset data = load_data(cfg);
  ModelConfig model = cfg.model_config(data.n());
  const PriorSpec prior = calibrate(data.y.topRows(model.t0), data.x.head(model.t0), model,
                                    cfg.prior_overrides(data.n()));
  write_text(prior.to_kv(), out_path(cfg, "priors.txt"));
  std::cerr << "estimating " << cfg.mode << " model on " << data.size()
            << " log-difference observations";
  Chain chain;
  if (cfg.chains <= 1) {
    std::cerr << '\n';
    RngStream rng(model.seed);
    chain = run_chain(data, model, prior, rng, progress_line);
  } else {
    // parallel chains on distinct sub-streams, merged in chain order
    const int n_chains = cfg.chains;
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const int workers = cfg.workers > 0 ? cfg.workers : static_cast<int>(hw);
    std::cerr << " (" << n_chains << " chains, " << workers << " workers)\n";
    std::vector<Chain> chains(n_chains);
    std::vector<std::exception_ptr> errors(n_chains);
    std::atomic<int> next{0};
    auto worker = [&]() {
      for (;;) {
        const int idx = next.fetch_add(1);
        if (idx >= n_chains) return;
        try {
          RngStream rng(model.seed, static_cast<std::uint64_t>(idx));
          chains[idx] = run_chain(data, model, prior, rng);
          std::cerr << "  chain " << idx + 1 << "/" << n_chains << " done\n";
        } catch (...) {
          errors[idx] = std::current_exception();
        }
      }
    };
    std::vector<std::thread> pool;
    for (int w = 0; w < std::min(workers, n_chains); ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    for (const auto& err : errors)
      if (err) std::rethrow_exception(err);
    chain = std::move(chains.front());
    for (int i = 1; i < n_chains; ++i)
      for (auto& rec : chains[i].records) chain.records.push_back(std::move(rec));
  }
  chain.config_hash = cfg.hash();
  write_chain(chain, out_path(cfg, cfg.chain));

  std::ostringstream summary;
  summary << "records=" << chain.records.size() << '\n';
  summary << "iterations=" << model.mcmc.total_iterations() << '\n';
  summary << "singular_redraw_iterations=" << chain.diag.iterations_with_redraw << '\n';
  summary << "singular_redraw_attempts=" << chain.diag.redraw_attempts << '\n';
  if (model.constrained) {
    const int n = model.n;
    std::vector<double> draws;
    for (int v = 0; v < n; ++v) {
      draws.clear();
      for (const auto& rec : chain.records) draws.push_back(rec.theta(v));
      std::vector<double> lo = draws, hi = draws, med = draws;
      summary << "theta_" << v << "_median=" << format_double(sample_quantile(med, 0.5)) << '\n';
      summary << "theta_" << v << "_q025=" << format_double(sample_quantile(lo, 0.025)) << '\n';
      summary << "theta_" << v << "_q975=" << format_double(sample_quantile(hi, 0.975)) << '\n';
    }
  }
  write_text(summary.str(), out_path(cfg, "summary.txt"));
  write_text(manifest_text(cfg, "estimate"), out_path(cfg, "manifest.txt"));
  std::cout << "chain written to " << out_path(cfg, cfg.chain) << '\n';
  return 0;
}

int run_forecast(const RunConfig& cfg) {
  const Dataset data = load_data(cfg);
  const Chain chain = read_chain(out_path(cfg, cfg.chain));
  const int origin =
      cfg.origin.empty() ? chain.data_length - 1 - cfg.horizon : resolve_time_index(data, cfg.origin);
  const ForecastMode mode =
      cfg.forecast_mode == "walk" ? ForecastMode::Walk : ForecastMode::Frozen;
  if (cfg.forecast_mode != "walk" && cfg.forecast_mode != "frozen")
    throw ConfigError("forecast_mode must be frozen or walk");
  RngStream rng(cfg.seed, 7);
  const ForecastSet fs = forecast(chain, data, origin, cfg.horizon, mode, rng);
  std::vector<std::string> variables(data.names.begin(), data.names.end() - 1);
  write_forecast(fs, variables, out_path(cfg, "forecast.csv"));
  write_text(manifest_text(cfg, "forecast"), out_path(cfg, "manifest.txt"));
  std::cout << "forecast written to " << out_path(cfg, "forecast.csv") << '\n';
  return 0;
}

int run_irf(const RunConfig& cfg) {
  const Chain chain = read_chain(out_path(cfg, cfg.chain));
  std::vector<int> origins;
  if (cfg.irf_origins.empty()) {
    origins.push_back(chain.path_length() - 1);
  } else {
    const bool needs_dates = cfg.irf_origins.find('Q') != std::string::npos ||
                             cfg.irf_origins.find('q') != std::string::npos;
    Dataset data;
    if (needs_dates) data = load_data(cfg);
    std::stringstream ss(cfg.irf_origins);
    std::string item;
    while (std::getline(ss, item, ',')) {
      const int t = needs_dates ? resolve_time_index(data, item) : std::stoi(item);
      const int path_idx = t - chain.cfg.t0;
      if (path_idx < 0 || path_idx >= chain.path_length())
        throw ConfigError("irf origin '" + item + "' outside the estimated range");
      origins.push_back(path_idx);
    }
  }
  const auto quantiles = parse_double_list(cfg.irf_quantiles);
  const IrfGrid grid = irf_grid(chain, origins, cfg.shock, cfg.irf_horizons, quantiles);
  write_irf_grid(grid, out_path(cfg, "irf.csv"));
  write_text(manifest_text(cfg, "irf"), out_path(cfg, "manifest.txt"));
  std::cout << "impulse responses written to " << out_path(cfg, "irf.csv") << '\n';
  return 0;
}

int run_growth(const RunConfig& cfg) {
  const Chain chain = read_chain(out_path(cfg, cfg.chain));
  const auto quantiles = parse_double_list(cfg.growth_quantiles);
  std::vector<GrowthRow> rows;
  for (int idx = 0; idx < chain.path_length(); ++idx) {
    GrowthRow row;
    row.origin = chain.origin_of_path_index(idx);
    row.summary = long_run_growth(chain, idx, quantiles);
    rows.push_back(std::move(row));
  }
  std::vector<std::string> variables;
  for (int v = 1; v <= chain.cfg.n; ++v) variables.push_back("endo" + std::to_string(v));
  write_growth(rows, variables, out_path(cfg, "growth.csv"));
  write_text(manifest_text(cfg, "growth"), out_path(cfg, "manifest.txt"));
  std::cout << "long-run growth bands written to " << out_path(cfg, "growth.csv") << '\n';
  return 0;
}

int run_benchmark(const RunConfig& cfg) {
  const Dataset data = load_data(cfg);
  const ModelConfig model = cfg.model_config(data.n());
  BenchmarkOptions options;
  options.horizons = cfg.horizon;
  options.reestimate = cfg.reestimate;
  options.priors = cfg.prior_overrides(data.n());
  if (!cfg.eval_start.empty()) options.eval_start = resolve_time_index(data, cfg.eval_start);
  if (!cfg.eval_end.empty()) options.eval_end = resolve_time_index(data, cfg.eval_end);
  std::cerr << "running three-method benchmark suite\n";
  const BenchmarkResult result = run_benchmark_suite(data, model, options);
  write_error_tables(result, out_path(cfg, "errors.csv"));
  write_text(manifest_text(cfg, "benchmark"), out_path(cfg, "manifest.txt"));
  std::cout << "error tables written to " << out_path(cfg, "errors.csv") << '\n';
  return 0;
}

int run_simulate(const RunConfig& cfg) {
  DgpSpec spec;
  const auto theta = parse_double_list(cfg.sim_theta);
  spec.n = static_cast<int>(theta.size());
  if (spec.n < 1) throw ConfigError("sim_theta must name at least one component");
  spec.k = cfg.lags;
  spec.theta = Eigen::Map<const Vector>(theta.data(), spec.n);
  spec.B0.assign(spec.k, Matrix::Zero(spec.n, spec.n));
  spec.B0[0] = 0.3 * Matrix::Identity(spec.n, spec.n);
  spec.D_tail0.assign(spec.k, Vector::Zero(spec.n));
  spec.c0 = Vector::Constant(spec.n, 0.003);
  spec.sd_intercept = cfg.sim_sd_intercept;
  spec.sd_coef = cfg.sim_sd_coef;
  spec.sd_dcoef = cfg.sim_sd_dcoef;
  spec.sd_h = cfg.sim_sd_h;
  spec.x_sd = cfg.sim_x_sd;
  spec.x_drift = cfg.sim_x_drift;
  RngStream rng(cfg.seed, 11);
  const SimulatedData sim = simulate_dgp(spec, cfg.sim_length, rng);
  write_csv(sim.data, out_path(cfg, "simulated.csv"));

  std::ostringstream truth;
  truth << "T=" << cfg.sim_length << "\nn=" << spec.n << "\nk=" << spec.k << '\n';
  truth << "theta=";
  for (int i = 0; i < spec.n; ++i) truth << (i ? "," : "") << format_double(theta[i]);
  truth << '\n';
  truth << "coef_path=\n";
  for (int t = 0; t < sim.truth.coef.rows(); ++t) {
    for (int c = 0; c < sim.truth.coef.cols(); ++c)
      truth << (c ? " " : "") << format_double(sim.truth.coef(t, c));
    truth << '\n';
  }
  write_text(truth.str(), out_path(cfg, "truth.txt"));
  write_text(manifest_text(cfg, "simulate"), out_path(cfg, "manifest.txt"));
  std::cout << "synthetic data written to " << out_path(cfg, "simulated.csv") << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Time-varying-parameter VARX estimation with a time-invariant long-run "
               "multiplier constraint"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "flat key=value configuration file");

  RunConfig cfg;
  app.add_option("--data", cfg.data, "input CSV (date,<endo...>,<exo>)");
  app.add_option("--chain", cfg.chain, "chain file name inside --out");
  app.add_option("--out", cfg.out, "output directory");
  app.add_option("--endo", cfg.endo, "comma-separated endogenous columns");
  app.add_option("--exo", cfg.exo, "exogenous column");
  app.add_option("--lags", cfg.lags, "lag order k");
  app.add_option("--t0", cfg.t0, "training-sample length");
  app.add_option("--mode", cfg.mode, "constrained | unconstrained | constant-var");
  app.add_option("--burn_in", cfg.burn_in, "burn-in sweeps");
  app.add_option("--retained", cfg.retained, "retained draws");
  app.add_option("--thin", cfg.thin, "thinning interval");
  app.add_option("--chains", cfg.chains, "parallel chain count (merged after completion)");
  app.add_option("--workers", cfg.workers, "worker threads for parallel chains (0: hardware)");
  app.add_option("--seed", cfg.seed, "random seed");
  app.add_option("--cond_threshold", cfg.cond_threshold, "long-run singularity guard");
  app.add_option("--vol_offset", cfg.vol_offset, "offset inside log((Au)^2 + offset)");
  app.add_option("--u0_diag", cfg.u0_diag, "U0 diagonal (scalar or comma list)");
  app.add_option("--kappa_q", cfg.kappa_q, "Q prior scale factor");
  app.add_option("--kappa_qtilde", cfg.kappa_qtilde, "Qtilde prior scale factor");
  app.add_option("--kappa_g", cfg.kappa_g, "G prior scale factor");
  app.add_option("--kappa_w", cfg.kappa_w, "W prior scale factor");
  app.add_option("--origin", cfg.origin, "forecast origin (date or index)");
  app.add_option("--horizon", cfg.horizon, "forecast horizon");
  app.add_option("--forecast_mode", cfg.forecast_mode, "frozen | walk");
  app.add_option("--irf_origins", cfg.irf_origins, "IRF origins (dates or indices)");
  app.add_option("--shock", cfg.shock, "relative exogenous shock (0.10 = +10%)");
  app.add_option("--irf_horizons", cfg.irf_horizons, "IRF horizon count");
  app.add_option("--irf_quantiles", cfg.irf_quantiles, "IRF quantiles");
  app.add_option("--growth_quantiles", cfg.growth_quantiles, "growth band quantiles");
  app.add_option("--eval_start", cfg.eval_start, "first benchmark origin");
  app.add_option("--eval_end", cfg.eval_end, "last benchmark origin");
  app.add_flag("--reestimate", cfg.reestimate, "re-estimate at every benchmark origin");
  app.add_option("--sim_length", cfg.sim_length, "simulated log-difference count");
  app.add_option("--sim_theta", cfg.sim_theta, "true long-run multiplier");
  app.add_option("--sim_sd_intercept", cfg.sim_sd_intercept, "intercept random-walk sd");
  app.add_option("--sim_sd_coef", cfg.sim_sd_coef, "coefficient random-walk sd");
  app.add_option("--sim_sd_dcoef", cfg.sim_sd_dcoef, "exogenous-coefficient random-walk sd");
  app.add_option("--sim_sd_h", cfg.sim_sd_h, "log-volatility random-walk sd");
  app.add_option("--sim_x_sd", cfg.sim_x_sd, "exogenous log-difference sd");
  app.add_option("--sim_x_drift", cfg.sim_x_drift, "exogenous log-difference drift");

  auto* estimate = app.add_subcommand("estimate", "run the Gibbs sampler and persist the chain");
  auto* forecast_cmd = app.add_subcommand("forecast", "forecast from a persisted chain");
  auto* irf = app.add_subcommand("irf", "impulse-response grid from a persisted chain");
  auto* growth = app.add_subcommand("growth", "long-run growth bands from a persisted chain");
  auto* benchmark = app.add_subcommand("benchmark", "three-method forecast error tables");
  auto* simulate = app.add_subcommand("simulate", "write a synthetic dataset and its truth");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (estimate->parsed()) return run_estimate(cfg);
    if (forecast_cmd->parsed()) return run_forecast(cfg);
    if (irf->parsed()) return run_irf(cfg);
    if (growth->parsed()) return run_growth(cfg);
    if (benchmark->parsed()) return run_benchmark(cfg);
    if (simulate->parsed()) return run_simulate(cfg);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 4;
  }
  return 2;
}
