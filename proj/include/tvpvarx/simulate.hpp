#pragma once

// Synthetic data-generating process: forward simulation of the measurement
// equation with random-walk (or supplied) parameter paths and stochastic
// volatility. The returned truth paths use the full coefficient layout
// (D_0 included); constraint-consistent specs derive D_0 from theta at
// every step, so the true long-run multiplier is exactly theta throughout.

#include <optional>
#include <vector>

#include "tvpvarx/dataset.hpp"
#include "tvpvarx/model.hpp"

namespace tvpvarx {

struct DgpSpec {
  int n = 2;
  int k = 1;

  Vector c0;                     // initial intercept (default zero)
  std::vector<Matrix> B0;        // initial VAR blocks, k of n x n (default zero)
  std::vector<Vector> D_tail0;   // initial D_1..D_k (default zero)
  std::optional<Vector> theta;   // set: D_0 implied at every t (constraint-consistent)
  Vector D00;                    // initial D_0 when theta is not set (default zero)

  double sd_intercept = 0.0;     // random-walk innovation sd for the intercept
  double sd_coef = 0.0;          // for the B entries
  double sd_dcoef = 0.0;         // for the exogenous coefficients
  Vector alpha0;                 // initial covariance-factor elements (default zero)
  double sd_alpha = 0.0;
  Vector h0;                     // initial log volatilities (default log 0.01)
  double sd_h = 0.0;

  double x_drift = 0.0;          // exogenous log-difference drift
  double x_sd = 0.1;             // and innovation sd
  std::optional<Vector> x_path;  // supplied exogenous log-differences (length T)

  // Supplied truth paths override the random walks entirely.
  std::optional<Matrix> coef_path;   // T x full layout dim
  std::optional<Matrix> alpha_path;  // T x n(n-1)/2
  std::optional<Matrix> h_path;      // T x n

  Matrix y_init;                 // k x n pre-sample log-differences (default zero)
  double base_level = 100.0;
  QuarterDate start_date = {1980, 1};
};

struct TruePaths {
  Matrix coef;   // T x full layout dim (c, B blocks, D_0..D_k)
  Matrix alpha;  // T x n(n-1)/2
  Matrix h;      // T x n
  Vector x;      // T exogenous log-differences
  Matrix y;      // T x n endogenous log-differences
};

struct SimulatedData {
  Dataset data;
  TruePaths truth;
};

// Throws ExplosiveSimulation when a simulated log-difference exceeds 1e8.
SimulatedData simulate_dgp(const DgpSpec& spec, int T, RngStream& rng);

}  // namespace tvpvarx
