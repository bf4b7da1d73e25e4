#pragma once

// Flat key-value run configuration shared by the CLI subcommands. Every key
// can come from a config file and be overridden by a same-named flag; the
// canonical serialization feeds the config hash recorded in manifests and
// chain headers.

#include <string>
#include <vector>

#include "tvpvarx/dataset.hpp"
#include "tvpvarx/model.hpp"
#include "tvpvarx/priors.hpp"

namespace tvpvarx {

struct RunConfig {
  // io
  std::string data;           // input CSV
  std::string chain = "chain.txt";
  std::string out = ".";      // output directory
  std::string endo;           // comma-separated endogenous column names
  std::string exo;            // exogenous column name
  // model
  int lags = 1;
  int t0 = 40;
  std::string mode = "constrained";  // constrained | unconstrained | constant-var
  int burn_in = 15000;
  int retained = 1500;
  int thin = 10;
  int chains = 1;
  int workers = 0;  // 0: hardware concurrency
  std::uint64_t seed = 1;
  double cond_threshold = 1e12;
  double vol_offset = 1e-3;
  // priors
  std::string u0_diag = "0.1";
  double kappa_q = 0.01;
  double kappa_qtilde = 0.01;
  double kappa_g = 0.1;
  double kappa_w = 0.01;
  // forecast
  std::string origin;          // date (1995-Q1) or log-difference index
  int horizon = 5;
  std::string forecast_mode = "frozen";  // frozen | walk
  // irf
  std::string irf_origins;     // comma-separated dates or indices
  double shock = 0.10;
  int irf_horizons = 40;
  std::string irf_quantiles = "0.16,0.5,0.84";
  // growth
  std::string growth_quantiles = "0.2,0.5,0.8";
  // benchmark
  std::string eval_start, eval_end;  // dates or indices; empty = defaults
  bool reestimate = false;
  // simulate
  int sim_length = 157;
  std::string sim_theta = "0.05,0.02";
  double sim_sd_intercept = 0.0005;
  double sim_sd_coef = 0.002;
  double sim_sd_dcoef = 0.002;
  double sim_sd_h = 0.02;
  double sim_x_sd = 0.1;
  double sim_x_drift = 0.0;

  std::string canonical() const;  // sorted key=value lines
  std::string hash() const;       // FNV-1a 64 over the canonical form, hex

  ModelConfig model_config(int n) const;      // throws ConfigError on bad mode
  PriorOverrides prior_overrides(int n) const;
};

std::string fnv1a_hex(const std::string& text);

std::vector<double> parse_double_list(const std::string& text);

// Resolve a date string or integer token to a log-difference time index.
int resolve_time_index(const Dataset& data, const std::string& token);

// Manifest: key=value text with the config, its hash, seed and versions.
std::string manifest_text(const RunConfig& cfg, const std::string& command);

}  // namespace tvpvarx
